use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Shorthand for a complex literal.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Absolute entrywise tolerance used by the structural predicates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    atol: f64,
}

impl Tolerance {
    /// Default tolerance for unitarity and Hermiticity checks.
    pub const DEFAULT: Tolerance = Tolerance { atol: 1e-10 };
    /// Looser tolerance for validating (possibly reconstructed) density matrices.
    pub const DENSITY: Tolerance = Tolerance { atol: 1e-8 };

    pub fn new(atol: f64) -> Result<Self> {
        if atol.is_nan() || atol < 0.0 || !atol.is_finite() {
            return Err(Error::Domain(format!(
                "tolerance must be finite and non-negative, got {atol}"
            )));
        }
        Ok(Tolerance { atol })
    }

    pub fn atol(&self) -> f64 {
        self.atol
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::DEFAULT
    }
}

/// Dense complex matrix stored in row-major order.
///
/// Every state, gate and channel in the crate is expressed with this type.
/// Dimensions in this toolkit never exceed 64, so there is no sparse path.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting empty or inconsistent shapes.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        ComplexMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from nested rows; ragged input is rejected.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map(Vec::len).unwrap_or(0);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Self::new(n, m, rows.into_iter().flatten().collect())
    }

    /// Real-valued matrix from row slices. Panics on ragged input; intended for constants.
    pub fn from_real(rows: &[&[f64]]) -> Self {
        let data = rows.iter().map(|r| r.iter().map(|&x| c64(x, 0.0)).collect()).collect();
        Self::from_rows(data).expect("constant matrix must be rectangular")
    }

    /// Complex matrix from row slices. Panics on ragged input; intended for constants.
    pub fn from_complex(rows: &[&[Complex64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.to_vec()).collect()).expect("constant matrix must be rectangular")
    }

    pub fn column(entries: Vec<Complex64>) -> Self {
        let n = entries.len();
        Self::new(n, 1, entries).expect("column vector must be non-empty")
    }

    /// Computational basis ket `|index⟩` of dimension `dim`.
    pub fn basis_ket(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim, 1);
        v[(index, 0)] = ONE;
        v
    }

    pub fn diag(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &x) in entries.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    pub fn diag_real(entries: &[f64]) -> Self {
        let v: Vec<Complex64> = entries.iter().map(|&x| c64(x, 0.0)).collect();
        Self::diag(&v)
    }

    /// `|a⟩⟨b|` for column vectors `a` and `b`.
    pub fn outer(a: &ComplexMatrix, b: &ComplexMatrix) -> Self {
        assert!(a.cols == 1 && b.cols == 1, "outer product needs column vectors");
        let mut m = Self::zeros(a.rows, b.rows);
        for i in 0..a.rows {
            for j in 0..b.rows {
                m[(i, j)] = a.data[i] * b.data[j].conj();
            }
        }
        m
    }

    /// Density matrix `|v⟩⟨v|` of a pure state.
    pub fn projector(v: &ComplexMatrix) -> Self {
        Self::outer(v, v)
    }

    /// Matrix unit `E_{i,j} = |i⟩⟨j|`.
    pub fn unit(dim: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        m[(i, j)] = ONE;
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<Complex64> {
        self.data
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn scale(&self, k: Complex64) -> Self {
        self.map(|x| x * k)
    }

    pub fn scale_real(&self, k: f64) -> Self {
        self.map(|x| x * k)
    }

    pub fn conj(&self) -> Self {
        self.map(|x| x.conj())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)];
            }
        }
        t
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].conj();
            }
        }
        t
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Matrix product. Panics on inner-dimension mismatch; see [`ComplexMatrix::try_matmul`].
    pub fn matmul(&self, other: &ComplexMatrix) -> Self {
        self.try_matmul(other).expect("matmul dimension mismatch")
    }

    pub fn try_matmul(&self, other: &ComplexMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `self · m · self†`
    pub fn conjugate(&self, m: &ComplexMatrix) -> Self {
        self.matmul(m).matmul(&self.dagger())
    }

    /// Largest entrywise modulus of `self - other`; infinite when shapes differ.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        if self.shape() != other.shape() {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn approx_eq(&self, other: &ComplexMatrix, atol: f64) -> bool {
        self.max_abs_diff(other) <= atol
    }

    /// `(M + M†)/2`
    pub fn hermitian_part(&self) -> Self {
        (self + &self.dagger()).scale_real(0.5)
    }

    pub fn is_hermitian(&self, tol: Tolerance) -> bool {
        self.is_square() && self.max_abs_diff(&self.dagger()) <= tol.atol()
    }

    /// Copies the sub-block with the given row and column indices.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out[(i, j)] = self[(r, c)];
            }
        }
        out
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "add shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "sub shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.4}{:+.4}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = ComplexMatrix::zeros(rows, cols);
    for i1 in 0..a.rows {
        for j1 in 0..a.cols {
            let x = a[(i1, j1)];
            if x == ZERO {
                continue;
            }
            for i2 in 0..b.rows {
                for j2 in 0..b.cols {
                    out[(i1 * b.rows + i2, j1 * b.cols + j2)] = x * b[(i2, j2)];
                }
            }
        }
    }
    out
}

/// Left-to-right Kronecker product of a list of factors.
pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a ComplexMatrix>) -> ComplexMatrix {
    factors
        .into_iter()
        .fold(ComplexMatrix::identity(1), |acc, f| kron(&acc, f))
}

/// Reduced matrix over the subsystems listed in `keep`.
///
/// `dims` lists the subsystem dimensions, most significant first. Kept
/// subsystems appear in ascending order in the result.
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "partial trace needs a square matrix, got {}x{}",
            m.rows, m.cols
        )));
    }
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::Dimension("subsystem dimensions must be positive".into()));
    }
    let total: usize = dims.iter().product();
    if total != m.rows {
        return Err(Error::Dimension(format!(
            "dims {dims:?} multiply to {total}, matrix is {}x{}",
            m.rows, m.cols
        )));
    }
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.iter().any(|&k| k >= dims.len()) {
        return Err(Error::Dimension(format!(
            "keep index out of range for {} subsystems",
            dims.len()
        )));
    }

    let kept_dim: usize = keep.iter().map(|&k| dims[k]).product();
    let traced_dim = total / kept_dim;

    // full_index[kept * traced_dim + traced]
    let mut full_index = vec![0usize; total];
    for full in 0..total {
        let mut rem = full;
        let mut digits = vec![0usize; dims.len()];
        for (k, &d) in dims.iter().enumerate().rev() {
            digits[k] = rem % d;
            rem /= d;
        }
        let (mut ki, mut ti) = (0usize, 0usize);
        for (k, &d) in dims.iter().enumerate() {
            if keep.binary_search(&k).is_ok() {
                ki = ki * d + digits[k];
            } else {
                ti = ti * d + digits[k];
            }
        }
        full_index[ki * traced_dim + ti] = full;
    }

    let mut out = ComplexMatrix::zeros(kept_dim, kept_dim);
    for a in 0..kept_dim {
        for b in 0..kept_dim {
            let mut acc = ZERO;
            for t in 0..traced_dim {
                acc += m[(full_index[a * traced_dim + t], full_index[b * traced_dim + t])];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(out)
}

/// Reduced density matrix of the listed qubits of an `n_qubits` register,
/// kept in the given order (`keep[0]` becomes the most significant qubit).
pub fn reduce_qubits(m: &ComplexMatrix, n_qubits: usize, keep: &[usize]) -> Result<ComplexMatrix> {
    let dim = 1usize << n_qubits;
    if m.shape() != (dim, dim) {
        return Err(Error::Dimension(format!(
            "expected a {dim}x{dim} register matrix, got {}x{}",
            m.rows, m.cols
        )));
    }
    let mut seen = vec![false; n_qubits];
    for &q in keep {
        if q >= n_qubits || std::mem::replace(&mut seen[q], true) {
            return Err(Error::Dimension(format!("invalid kept qubit list {keep:?}")));
        }
    }
    let traced: Vec<usize> = (0..n_qubits).filter(|q| !seen[*q]).collect();
    let bit = |q: usize| 1usize << (n_qubits - 1 - q);
    let spread = |value: usize, qubits: &[usize]| -> usize {
        let k = qubits.len();
        qubits
            .iter()
            .enumerate()
            .filter(|(b, _)| (value >> (k - 1 - b)) & 1 == 1)
            .map(|(_, &q)| bit(q))
            .sum()
    };
    let kd = 1usize << keep.len();
    let td = 1usize << traced.len();
    let kept_offsets: Vec<usize> = (0..kd).map(|a| spread(a, keep)).collect();
    let traced_offsets: Vec<usize> = (0..td).map(|t| spread(t, &traced)).collect();
    let mut out = ComplexMatrix::zeros(kd, kd);
    for a in 0..kd {
        for b in 0..kd {
            let mut acc = ZERO;
            for &t in &traced_offsets {
                acc += m[(kept_offsets[a] + t, kept_offsets[b] + t)];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(out)
}

/// Reorders the qubits of an operator on `n_qubits` wires: qubit `k` of the
/// result is qubit `order[k]` of `m`.
pub fn permute_qubits(m: &ComplexMatrix, n_qubits: usize, order: &[usize]) -> Result<ComplexMatrix> {
    let dim = 1usize << n_qubits;
    if m.shape() != (dim, dim) {
        return Err(Error::Dimension(format!(
            "expected a {dim}x{dim} register matrix, got {}x{}",
            m.rows, m.cols
        )));
    }
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..n_qubits).collect::<Vec<_>>() {
        return Err(Error::Dimension(format!(
            "{order:?} is not a permutation of {n_qubits} qubits"
        )));
    }
    let map = |i: usize| -> usize {
        order
            .iter()
            .enumerate()
            .filter(|(_, &old)| (i >> (n_qubits - 1 - old)) & 1 == 1)
            .map(|(new, _)| 1usize << (n_qubits - 1 - new))
            .sum()
    };
    let idx: Vec<usize> = (0..dim).map(map).collect();
    let mut out = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            out[(idx[i], idx[j])] = m[(i, j)];
        }
    }
    Ok(out)
}

/// Compares two matrices modulo a global phase.
pub fn equal_up_to_global_phase(a: &ComplexMatrix, b: &ComplexMatrix, atol: f64) -> bool {
    if a.shape() != b.shape() {
        return false;
    }
    let (k, pivot) = b
        .data
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
        .map(|(k, v)| (k, *v))
        .expect("matrix is non-empty");
    if pivot.norm() <= atol {
        return a.max_abs() <= atol;
    }
    let ratio = a.data[k] / pivot;
    if (ratio.norm() - 1.0).abs() > atol.max(1e-12) * 10.0 {
        return false;
    }
    let phase = ratio / ratio.norm();
    a.max_abs_diff(&b.scale(phase)) <= atol
}

/// Wire format: `{"rows": n, "cols": m, "re": [[...]], "im": [[...]]}`.
#[derive(Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        if j.re.len() != j.rows || j.im.len() != j.rows {
            return Err(Error::Parse(format!("expected {} rows in re/im", j.rows)));
        }
        let mut data = Vec::with_capacity(j.rows * j.cols);
        for (re_row, im_row) in j.re.iter().zip(&j.im) {
            if re_row.len() != j.cols || im_row.len() != j.cols {
                return Err(Error::Parse("ragged row in matrix json".into()));
            }
            for (&re, &im) in re_row.iter().zip(im_row) {
                if !re.is_finite() || !im.is_finite() {
                    return Err(Error::Parse("non-finite entry in matrix json".into()));
                }
                data.push(c64(re, im));
            }
        }
        ComplexMatrix::new(j.rows, j.cols, data).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl From<ComplexMatrix> for MatrixJson {
    fn from(m: ComplexMatrix) -> Self {
        let re = (0..m.rows)
            .map(|r| (0..m.cols).map(|c| m[(r, c)].re).collect())
            .collect();
        let im = (0..m.rows)
            .map(|r| (0..m.cols).map(|c| m[(r, c)].im).collect())
            .collect();
        MatrixJson {
            rows: m.rows,
            cols: m.cols,
            re,
            im,
        }
    }
}

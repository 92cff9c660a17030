//! Hermitian eigendecomposition (cyclic complex Jacobi) and the spectral
//! functions built on it.

use num_complex::Complex64;

use super::matrix::{c64, ComplexMatrix, Tolerance, ZERO};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues (descending) and the unitary whose columns are the matching eigenvectors.
#[derive(Clone, Debug)]
pub struct HermitianEig {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEig {
    /// `V · diag(f(λ)) · V†`
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let w = f(lambda);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = v[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)].conj();
                }
            }
        }
        out
    }
}

/// Diagonalizes a Hermitian matrix.
///
/// Only the Hermitian part of `m` is used. Eigenvalues come back sorted in
/// descending order.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEig> {
    if !m.is_square() {
        return Err(Error::Shape(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| (0..n).filter(move |&q| q != p).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let eigenvalues = order.iter().map(|&k| a[(k, k)].re).collect();
    let eigenvectors = v.select(&(0..n).collect::<Vec<_>>(), &order);
    Ok(HermitianEig {
        eigenvalues,
        eigenvectors,
    })
}

/// One Jacobi rotation zeroing `a[p][q]`; `a ← R†·a·R`, `v ← v·R`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let g = a[(p, q)];
    let abs_g = g.norm();
    if abs_g < 1e-300 {
        return;
    }
    let e = g / abs_g;
    let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * abs_g);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
        sign / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let se = e * s;
    let se_conj = se.conj();
    let n = a.rows();

    // columns: A·R
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - akq * se_conj;
        a[(k, q)] = akp * se + akq * c;
    }
    // rows: R†·(A·R)
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - aqk * se;
        a[(q, k)] = apk * se_conj + aqk * c;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = c64(a[(p, p)].re, 0.0);
    a[(q, q)] = c64(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * se_conj;
        v[(k, q)] = vkp * se + vkq * c;
    }
}

/// Eigenvalues only, descending.
pub fn eigvalsh(m: &ComplexMatrix) -> Result<Vec<f64>> {
    hermitian_eig(m).map(|e| e.eigenvalues)
}

/// Eigenvalue magnitude below which a spectrum entry is round-off: `4·n·ε·max|λ|`.
pub fn roundoff_floor(eigenvalues: &[f64]) -> f64 {
    let scale = eigenvalues.iter().fold(0.0f64, |m, l| m.max(l.abs()));
    4.0 * eigenvalues.len() as f64 * f64::EPSILON * scale
}

/// Principal square root of a positive semidefinite Hermitian matrix.
///
/// Eigenvalues in `[-tol, 0)` and those below [`roundoff_floor`] are treated as zero.
pub fn sqrtm_psd(m: &ComplexMatrix, tol: Tolerance) -> Result<ComplexMatrix> {
    if !m.is_square() || !m.is_hermitian(tol) {
        return Err(Error::Shape("square root needs a Hermitian matrix".into()));
    }
    let eig = hermitian_eig(m)?;
    let min = eig.eigenvalues.last().copied().unwrap_or(0.0);
    if min < -tol.atol() {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    let floor = roundoff_floor(&eig.eigenvalues);
    Ok(eig.reconstruct_with(|l| if l <= floor { 0.0 } else { l.sqrt() }))
}

/// True iff `m` is square and `‖m†m − I‖_max ≤ atol`.
pub fn is_unitary(m: &ComplexMatrix, tol: Tolerance) -> bool {
    m.is_square() && m.dagger().matmul(m).max_abs_diff(&ComplexMatrix::identity(m.rows())) <= tol.atol()
}

/// True iff `m` is Hermitian within `tol` and its smallest eigenvalue is `≥ -atol`.
pub fn is_psd(m: &ComplexMatrix, tol: Tolerance) -> bool {
    if !m.is_hermitian(tol) {
        return false;
    }
    match eigvalsh(m) {
        Ok(ev) => ev.last().is_none_or(|&l| l >= -tol.atol()),
        Err(_) => false,
    }
}

/// Checks that `m` is a density matrix: square, Hermitian, PSD and unit trace, all within `tol`.
pub fn validate_density(m: &ComplexMatrix, tol: Tolerance) -> Result<()> {
    if !m.is_square() {
        return Err(Error::Domain(format!(
            "density matrix must be square, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if !m.is_hermitian(tol) {
        return Err(Error::Domain("density matrix is not Hermitian".into()));
    }
    let tr = m.trace();
    if (tr.re - 1.0).abs() > tol.atol() || tr.im.abs() > tol.atol() {
        return Err(Error::Domain(format!("density matrix has trace {tr}")));
    }
    let min = eigvalsh(m)?.last().copied().unwrap_or(0.0);
    if min < -tol.atol() {
        return Err(Error::Domain(format!("density matrix has negative eigenvalue {min:e}")));
    }
    Ok(())
}

/// Euclidean projection of a real vector onto the probability simplex.
pub fn project_to_simplex(values: &[f64]) -> Vec<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (j, &mu) in sorted.iter().enumerate() {
        cumulative += mu;
        let candidate = (cumulative - 1.0) / (j as f64 + 1.0);
        if mu - candidate > 0.0 {
            theta = candidate;
        }
    }
    values.iter().map(|&x| (x - theta).max(0.0)).collect()
}

/// Nearest (Frobenius) unit-trace PSD matrix to the Hermitian part of `m`.
pub fn project_to_density(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(m)?;
    let projected = project_to_simplex(&eig.eigenvalues);
    let n = projected.len();
    let mut out = ComplexMatrix::zeros(n, n);
    for (k, &w) in projected.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        for i in 0..n {
            let vik: Complex64 = eig.eigenvectors[(i, k)] * w;
            for j in 0..n {
                out[(i, j)] += vik * eig.eigenvectors[(j, k)].conj();
            }
        }
    }
    Ok(out)
}

use num_complex::Complex64;

use super::{gate_matrix, Circuit, Gate, NoiseConfig};
use crate::error::{Error, Result};
use crate::numkit::{c64, validate_density, ComplexMatrix, Tolerance, ZERO};

/// Largest register for which [`unitary_of`] builds the full matrix.
pub const MAX_UNITARY_QUBITS: usize = 6;

/// Bit mask of qubit `q` in an `n`-qubit basis index (qubit 0 is the MSB).
#[inline]
fn mask(n: usize, q: usize) -> usize {
    1 << (n - 1 - q)
}

/// Offsets of the `2^k` local basis states; `qubits[0]` is the local MSB.
fn local_offsets(n: usize, qubits: &[usize]) -> Vec<usize> {
    let k = qubits.len();
    (0..1usize << k)
        .map(|l| {
            qubits
                .iter()
                .enumerate()
                .filter(|(b, _)| (l >> (k - 1 - b)) & 1 == 1)
                .map(|(_, &q)| mask(n, q))
                .sum()
        })
        .collect()
}

fn bases(n: usize, qubits: &[usize]) -> impl Iterator<Item = usize> {
    let all: usize = qubits.iter().map(|&q| mask(n, q)).sum();
    (0..1usize << n).filter(move |i| i & all == 0)
}

/// `buf ← (u ⊗ I) buf` on the row index of a `2^n × ncols` row-major buffer.
fn apply_rows(buf: &mut [Complex64], n: usize, ncols: usize, qubits: &[usize], u: &ComplexMatrix) {
    let offs = local_offsets(n, qubits);
    let m = offs.len();
    let mut v = vec![ZERO; m];
    for base in bases(n, qubits) {
        for c in 0..ncols {
            for (l, &o) in offs.iter().enumerate() {
                v[l] = buf[(base + o) * ncols + c];
            }
            for (r, &o) in offs.iter().enumerate() {
                let mut acc = ZERO;
                for (l, &x) in v.iter().enumerate() {
                    acc += u[(r, l)] * x;
                }
                buf[(base + o) * ncols + c] = acc;
            }
        }
    }
    debug_assert_eq!(m, u.rows());
}

/// `buf ← buf (u ⊗ I)†` on the column index of a `nrows × 2^n` row-major buffer.
fn apply_cols_dagger(buf: &mut [Complex64], n: usize, nrows: usize, qubits: &[usize], u: &ComplexMatrix) {
    let dim = 1usize << n;
    let offs = local_offsets(n, qubits);
    let mut v = vec![ZERO; offs.len()];
    for r in 0..nrows {
        let row = &mut buf[r * dim..(r + 1) * dim];
        for base in bases(n, qubits) {
            for (l, &o) in offs.iter().enumerate() {
                v[l] = row[base + o];
            }
            for (j, &o) in offs.iter().enumerate() {
                let mut acc = ZERO;
                for (l, &x) in v.iter().enumerate() {
                    acc += u[(j, l)].conj() * x;
                }
                row[base + o] = acc;
            }
        }
    }
}

fn conjugate_in_place(rho: &mut [Complex64], n: usize, qubits: &[usize], u: &ComplexMatrix) {
    let dim = 1usize << n;
    apply_rows(rho, n, dim, qubits, u);
    apply_cols_dagger(rho, n, dim, qubits, u);
}

/// `ρ ← Σ_k w_k K_k ρ K_k†` on one qubit.
fn kraus_in_place(rho: &mut Vec<Complex64>, n: usize, q: usize, ops: &[(f64, ComplexMatrix)]) {
    let mut out = vec![ZERO; rho.len()];
    for (w, k) in ops {
        if *w == 0.0 {
            continue;
        }
        let mut term = rho.clone();
        conjugate_in_place(&mut term, n, &[q], k);
        for (o, t) in out.iter_mut().zip(&term) {
            *o += t * *w;
        }
    }
    *rho = out;
}

fn depolarize(rho: &mut Vec<Complex64>, n: usize, q: usize, p: f64) {
    if p == 0.0 {
        return;
    }
    let paulis = [
        (1.0 - 0.75 * p, ComplexMatrix::identity(2)),
        (0.25 * p, gate_matrix(&Gate::x(0))),
        (0.25 * p, gate_matrix(&Gate::y(0))),
        (0.25 * p, gate_matrix(&Gate::z(0))),
    ];
    kraus_in_place(rho, n, q, &paulis);
}

fn amplitude_damp(rho: &mut Vec<Complex64>, n: usize, q: usize, gamma: f64) {
    if gamma == 0.0 {
        return;
    }
    let k0 = ComplexMatrix::diag(&[c64(1.0, 0.0), c64((1.0 - gamma).sqrt(), 0.0)]);
    let mut k1 = ComplexMatrix::zeros(2, 2);
    k1[(0, 1)] = c64(gamma.sqrt(), 0.0);
    kraus_in_place(rho, n, q, &[(1.0, k0), (1.0, k1)]);
}

/// Full `2^n × 2^n` unitary of a circuit (gates applied in list order).
pub fn unitary_of(c: &Circuit) -> Result<ComplexMatrix> {
    let n = c.n_qubits();
    if n > MAX_UNITARY_QUBITS {
        return Err(Error::Resource(format!(
            "unitary_of supports at most {MAX_UNITARY_QUBITS} qubits, circuit has {n}"
        )));
    }
    let dim = 1usize << n;
    let mut buf = ComplexMatrix::identity(dim).into_data();
    for g in c.gates() {
        apply_rows(&mut buf, n, dim, g.qubits(), &gate_matrix(g));
    }
    ComplexMatrix::new(dim, dim, buf)
}

/// Evolves a normalized column vector gate by gate.
pub fn simulate_state(c: &Circuit, input: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = c.n_qubits();
    let dim = 1usize << n;
    if input.shape() != (dim, 1) {
        return Err(Error::Shape(format!(
            "state must be a {dim}x1 column, got {}x{}",
            input.rows(),
            input.cols()
        )));
    }
    let norm = input.frobenius_norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::Domain(format!("input state has norm {norm}")));
    }
    let mut buf = input.data().to_vec();
    for g in c.gates() {
        apply_rows(&mut buf, n, 1, g.qubits(), &gate_matrix(g));
    }
    ComplexMatrix::new(dim, 1, buf)
}

/// Evolves a density matrix through the circuit, optionally with gate noise.
///
/// Readout error is not applied here; see [`super::sample_counts`].
pub fn simulate_density(c: &Circuit, rho: &ComplexMatrix, noise: Option<&NoiseConfig>) -> Result<ComplexMatrix> {
    let dim = 1usize << c.n_qubits();
    if rho.shape() != (dim, dim) {
        return Err(Error::Shape(format!(
            "density must be {dim}x{dim}, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    validate_density(rho, Tolerance::DENSITY)?;
    Ok(evolve_density(c, rho, noise))
}

/// [`simulate_density`] without validating the input.
pub(crate) fn evolve_density(c: &Circuit, rho: &ComplexMatrix, noise: Option<&NoiseConfig>) -> ComplexMatrix {
    let n = c.n_qubits();
    let dim = 1usize << n;
    let mut buf = rho.data().to_vec();
    let noise = noise.filter(|nz| nz.has_gate_noise());
    for g in c.gates() {
        conjugate_in_place(&mut buf, n, g.qubits(), &gate_matrix(g));
        if let Some(nz) = noise {
            let p = if g.is_cnot() { nz.p2 } else { nz.p1 };
            for &q in g.qubits() {
                depolarize(&mut buf, n, q, p);
                amplitude_damp(&mut buf, n, q, nz.gamma);
            }
        }
    }
    ComplexMatrix::new(dim, dim, buf).expect("buffer has 2^n x 2^n entries")
}

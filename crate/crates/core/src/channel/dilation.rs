use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::{c64, is_unitary, kron, partial_trace, validate_density, ComplexMatrix, Tolerance, ZERO};

/// Tensor order of the joint system–environment space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvOrdering {
    /// `ρ ⊗ ρ_env`, joint index `sys·env_dim + env`.
    SystemFirst,
    /// `ρ_env ⊗ ρ`, joint index `env·sys_dim + sys`.
    EnvFirst,
}

/// A channel written as `Tr_env(U (ρ ⊗ ρ_env) U†)` (or the env-first order).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DilationJson", into = "DilationJson")]
pub struct StinespringDilation {
    u: ComplexMatrix,
    rho_env: ComplexMatrix,
    ordering: EnvOrdering,
    sys_dim: usize,
    env_dim: usize,
}

impl StinespringDilation {
    pub fn new(u: ComplexMatrix, rho_env: ComplexMatrix, ordering: EnvOrdering, sys_dim: usize) -> Result<Self> {
        if sys_dim == 0 || rho_env.rows() == 0 {
            return Err(Error::Dimension("dilation dimensions must be positive".into()));
        }
        let env_dim = rho_env.rows();
        if !u.is_square() || u.rows() != sys_dim * env_dim {
            return Err(Error::Dimension(format!(
                "dilation unitary is {}x{}, expected {}",
                u.rows(),
                u.cols(),
                sys_dim * env_dim
            )));
        }
        if !is_unitary(&u, Tolerance::DEFAULT) {
            return Err(Error::Domain("dilation matrix is not unitary".into()));
        }
        validate_density(&rho_env, Tolerance::DENSITY)?;
        Ok(StinespringDilation {
            u,
            rho_env,
            ordering,
            sys_dim,
            env_dim,
        })
    }

    pub fn u(&self) -> &ComplexMatrix {
        &self.u
    }

    pub fn rho_env(&self) -> &ComplexMatrix {
        &self.rho_env
    }

    pub fn ordering(&self) -> EnvOrdering {
        self.ordering
    }

    pub fn sys_dim(&self) -> usize {
        self.sys_dim
    }

    pub fn env_dim(&self) -> usize {
        self.env_dim
    }

    /// Applies the dilation to any `sys_dim × sys_dim` matrix (linear, no validation).
    pub fn map(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        if m.shape() != (self.sys_dim, self.sys_dim) {
            return Err(Error::Shape(format!(
                "dilation acts on {0}x{0} matrices, got {1}x{2}",
                self.sys_dim,
                m.rows(),
                m.cols()
            )));
        }
        let (joint, dims, keep) = match self.ordering {
            EnvOrdering::SystemFirst => (kron(m, &self.rho_env), [self.sys_dim, self.env_dim], 0),
            EnvOrdering::EnvFirst => (kron(&self.rho_env, m), [self.env_dim, self.sys_dim], 1),
        };
        partial_trace(&self.u.conjugate(&joint), &dims, &[keep])
    }

    /// Kraus operators `⟨e|U|ψ_env⟩`, available when `ρ_env` is a pure state.
    pub fn kraus_operators(&self) -> Result<Vec<ComplexMatrix>> {
        let eig = crate::numkit::hermitian_eig(&self.rho_env)?;
        let mut ops = Vec::new();
        for (k, &p) in eig.eigenvalues.iter().enumerate() {
            if p <= 1e-12 {
                continue;
            }
            let amp = p.sqrt();
            for e in 0..self.env_dim {
                let mut op = ComplexMatrix::zeros(self.sys_dim, self.sys_dim);
                for s_out in 0..self.sys_dim {
                    for s_in in 0..self.sys_dim {
                        let mut acc = ZERO;
                        for f in 0..self.env_dim {
                            let (r, c) = match self.ordering {
                                EnvOrdering::SystemFirst => (s_out * self.env_dim + e, s_in * self.env_dim + f),
                                EnvOrdering::EnvFirst => (e * self.sys_dim + s_out, f * self.sys_dim + s_in),
                            };
                            acc += self.u[(r, c)] * eig.eigenvectors[(f, k)];
                        }
                        op[(s_out, s_in)] = acc * amp;
                    }
                }
                if op.max_abs() > 1e-14 {
                    ops.push(op);
                }
            }
        }
        Ok(ops)
    }
}

#[derive(Serialize, Deserialize)]
struct DilationJson {
    u: ComplexMatrix,
    rho_env: ComplexMatrix,
    ordering: EnvOrdering,
    sys_dim: usize,
    env_dim: usize,
}

impl TryFrom<DilationJson> for StinespringDilation {
    type Error = Error;

    fn try_from(j: DilationJson) -> Result<Self> {
        if j.env_dim != j.rho_env.rows() {
            return Err(Error::Parse(format!("env_dim {} disagrees with rho_env", j.env_dim)));
        }
        StinespringDilation::new(j.u, j.rho_env, j.ordering, j.sys_dim)
    }
}

impl From<StinespringDilation> for DilationJson {
    fn from(d: StinespringDilation) -> Self {
        DilationJson {
            u: d.u,
            rho_env: d.rho_env,
            ordering: d.ordering,
            sys_dim: d.sys_dim,
            env_dim: d.env_dim,
        }
    }
}

fn env_ground_state() -> ComplexMatrix {
    ComplexMatrix::diag_real(&[1.0, 0.0, 0.0])
}

/// The reference 9×9 LS dilation, system-first, environment in `|0⟩`.
pub fn ls_stinespring() -> StinespringDilation {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let h = 0.5;
    let q = 0.5 * s;
    let z = ZERO;
    let r = |x: f64| c64(x, 0.0);
    let i = |x: f64| c64(0.0, x);
    let blocks: [[[[num_complex::Complex64; 3]; 3]; 3]; 3] = [
        [
            [[z, z, z], [z, z, i(s)], [r(s), z, z]],
            [[r(h), z, z], [i(-h), z, z], [z, c64(-q, h), i(-q)]],
            [[z, i(s), i(-h)], [z, z, r(h)], [z, z, z]],
        ],
        [
            [[r(h), z, z], [i(h), z, z], [z, r(1.0), z]],
            [[z, c64(h, -q), r(q)], [z, r(q), c64(-h, -q)], [z, z, z]],
            [[r(h), z, z], [i(-h), z, z], [z, z, z]],
        ],
        [
            [[z, z, r(s)], [z, z, z], [z, z, z]],
            [[r(h), z, z], [i(h), z, z], [z, r(q), c64(h, -q)]],
            [[z, z, i(h)], [z, r(s), r(h)], [r(-s), z, z]],
        ],
    ];
    let mut u = ComplexMatrix::zeros(9, 9);
    for (br, row) in blocks.iter().enumerate() {
        for (bc, block) in row.iter().enumerate() {
            for (a, line) in block.iter().enumerate() {
                for (b, &v) in line.iter().enumerate() {
                    u[(3 * br + a, 3 * bc + b)] = v;
                }
            }
        }
    }
    StinespringDilation::new(u, env_ground_state(), EnvOrdering::SystemFirst, 3)
        .expect("reference LS dilation is unitary")
}

/// WH dilation, env-first, with the fixed first block-column and a
/// Gram–Schmidt completion over the standard basis.
pub fn wh_stinespring() -> StinespringDilation {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut columns: Vec<Vec<num_complex::Complex64>> = Vec::with_capacity(9);
    // column s_in: Σ_e |e⟩ ⊗ K_e|s_in⟩ with K_0 = (E01−E10)/√2, K_1 = (E02−E20)/√2, K_2 = (E12−E21)/√2
    let kraus_pairs = [(0usize, 1usize), (0, 2), (1, 2)];
    for s_in in 0..3 {
        let mut col = vec![ZERO; 9];
        for (e, &(a, b)) in kraus_pairs.iter().enumerate() {
            if s_in == b {
                col[e * 3 + a] = c64(s, 0.0);
            }
            if s_in == a {
                col[e * 3 + b] = c64(-s, 0.0);
            }
        }
        columns.push(col);
    }
    for k in 0..9 {
        if columns.len() == 9 {
            break;
        }
        let mut v = vec![ZERO; 9];
        v[k] = c64(1.0, 0.0);
        for c in &columns {
            let overlap: num_complex::Complex64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ci) in v.iter_mut().zip(c) {
                *vi -= overlap * ci;
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            columns.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    let mut u = ComplexMatrix::zeros(9, 9);
    for (c, col) in columns.iter().enumerate() {
        for (r, &v) in col.iter().enumerate() {
            u[(r, c)] = v;
        }
    }
    StinespringDilation::new(u, env_ground_state(), EnvOrdering::EnvFirst, 3).expect("completion is unitary")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{ls_map, wh_map};

    #[test]
    fn ls_dilation_entries_and_unitarity() {
        let d = ls_stinespring();
        assert!((d.u()[(2, 0)] - c64(std::f64::consts::FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!(is_unitary(d.u(), Tolerance::new(1e-12).unwrap()));
        let p0 = ComplexMatrix::diag_real(&[1.0, 0.0, 0.0]);
        assert!(d
            .map(&p0)
            .unwrap()
            .approx_eq(&ComplexMatrix::diag_real(&[0.5, 0.5, 0.0]), 1e-12));
    }

    #[test]
    fn wh_dilation_first_block_column() {
        let d = wh_stinespring();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let col0: Vec<_> = (0..9).map(|r| d.u()[(r, 0)]).collect();
        let mut expected = vec![ZERO; 9];
        expected[1] = c64(-s, 0.0);
        expected[5] = c64(-s, 0.0);
        assert_eq!(col0, expected);
        assert!(is_unitary(d.u(), Tolerance::new(1e-12).unwrap()));
        let p0 = ComplexMatrix::diag_real(&[1.0, 0.0, 0.0]);
        assert!(d
            .map(&p0)
            .unwrap()
            .approx_eq(&ComplexMatrix::diag_real(&[0.0, 0.5, 0.5]), 1e-12));
    }

    #[test]
    fn dilations_match_analytic_maps_on_matrix_units() {
        let ls = ls_stinespring();
        let wh = wh_stinespring();
        for i in 0..3 {
            for j in 0..3 {
                let e = ComplexMatrix::unit(3, i, j);
                assert!(ls.map(&e).unwrap().approx_eq(&ls_map(&e).unwrap(), 1e-12));
                assert!(wh.map(&e).unwrap().approx_eq(&wh_map(&e).unwrap(), 1e-12));
            }
        }
    }

    #[test]
    fn kraus_extraction_has_three_operators() {
        assert_eq!(ls_stinespring().kraus_operators().unwrap().len(), 3);
        assert_eq!(wh_stinespring().kraus_operators().unwrap().len(), 3);
    }

    #[test]
    fn rejects_non_unitary_and_bad_dims() {
        let env = ComplexMatrix::diag_real(&[1.0, 0.0]);
        assert!(StinespringDilation::new(ComplexMatrix::identity(6), env.clone(), EnvOrdering::EnvFirst, 2).is_err());
        let bad = ComplexMatrix::diag_real(&[1.0, 1.0, 0.5, 1.0]);
        assert!(matches!(
            StinespringDilation::new(bad, env, EnvOrdering::EnvFirst, 2),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn json_roundtrip() {
        let d = wh_stinespring();
        let text = serde_json::to_string(&d).unwrap();
        let back: StinespringDilation = serde_json::from_str(&text).unwrap();
        assert_eq!(back, d);
    }
}

use serde::{Deserialize, Serialize};

use super::{ls_map, wh_map, StinespringDilation};
use crate::error::{Error, Result};
use crate::numkit::{is_psd, kron, partial_trace, validate_density, ComplexMatrix, Tolerance};

/// Closed-form channels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnalyticChannel {
    Ls,
    Wh,
    #[serde(rename = "id")]
    Identity,
}

/// A trace-preserving set of Kraus operators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<ComplexMatrix>", into = "Vec<ComplexMatrix>")]
pub struct KrausSet {
    operators: Vec<ComplexMatrix>,
}

impl KrausSet {
    /// Validates shapes and `Σ K†K = I` within `tol`.
    pub fn new(operators: Vec<ComplexMatrix>, tol: Tolerance) -> Result<Self> {
        let set = KrausSet::unchecked(operators)?;
        let defect = set.completeness().max_abs_diff(&ComplexMatrix::identity(set.in_dim()));
        if defect > tol.atol() {
            return Err(Error::Domain(format!(
                "Kraus operators are not trace preserving (defect {defect:e})"
            )));
        }
        Ok(set)
    }

    /// Checks shapes only; used to model maps that are not trace preserving.
    pub fn unchecked(operators: Vec<ComplexMatrix>) -> Result<Self> {
        let first = operators
            .first()
            .ok_or_else(|| Error::Shape("empty Kraus set".into()))?;
        let shape = first.shape();
        if operators.iter().any(|k| k.shape() != shape) {
            return Err(Error::Shape("Kraus operators have mismatched shapes".into()));
        }
        Ok(KrausSet { operators })
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn in_dim(&self) -> usize {
        self.operators[0].cols()
    }

    pub fn out_dim(&self) -> usize {
        self.operators[0].rows()
    }

    /// `Σ K†K`
    pub fn completeness(&self) -> ComplexMatrix {
        self.operators
            .iter()
            .fold(ComplexMatrix::zeros(self.in_dim(), self.in_dim()), |acc, k| {
                &acc + &k.dagger().matmul(k)
            })
    }

    pub fn map(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        if m.shape() != (self.in_dim(), self.in_dim()) {
            return Err(Error::Shape(format!(
                "Kraus set acts on {0}x{0} matrices",
                self.in_dim()
            )));
        }
        Ok(self
            .operators
            .iter()
            .fold(ComplexMatrix::zeros(self.out_dim(), self.out_dim()), |acc, k| {
                &acc + &k.conjugate(m)
            }))
    }
}

impl TryFrom<Vec<ComplexMatrix>> for KrausSet {
    type Error = Error;

    fn try_from(ops: Vec<ComplexMatrix>) -> Result<Self> {
        KrausSet::unchecked(ops)
    }
}

impl From<KrausSet> for Vec<ComplexMatrix> {
    fn from(k: KrausSet) -> Self {
        k.operators
    }
}

/// One channel in any of the four supported representations.
///
/// Choi matrices use input ⊗ output ordering and unit trace.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChannelRep {
    Analytic { name: AnalyticChannel, dim: usize },
    Kraus { operators: KrausSet },
    Stinespring { dilation: StinespringDilation },
    Choi { matrix: ComplexMatrix, dim: usize },
}

impl ChannelRep {
    pub fn ls() -> Self {
        ChannelRep::Analytic {
            name: AnalyticChannel::Ls,
            dim: 3,
        }
    }

    pub fn wh() -> Self {
        ChannelRep::Analytic {
            name: AnalyticChannel::Wh,
            dim: 3,
        }
    }

    pub fn identity(dim: usize) -> Self {
        ChannelRep::Analytic {
            name: AnalyticChannel::Identity,
            dim,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            ChannelRep::Analytic { dim, .. } | ChannelRep::Choi { dim, .. } => *dim,
            ChannelRep::Kraus { operators } => operators.in_dim(),
            ChannelRep::Stinespring { dilation } => dilation.sys_dim(),
        }
    }

    /// Applies the linear extension of the channel to an arbitrary square matrix.
    pub fn map(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        let d = self.dim();
        if m.shape() != (d, d) {
            return Err(Error::Shape(format!(
                "channel acts on {d}x{d} matrices, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        match self {
            ChannelRep::Analytic { name, dim } => match name {
                AnalyticChannel::Identity => Ok(m.clone()),
                AnalyticChannel::Wh => wh_map(m),
                AnalyticChannel::Ls if *dim == 3 => ls_map(m),
                AnalyticChannel::Ls => Err(Error::Domain(format!("LS channel is defined for d = 3, not {dim}"))),
            },
            ChannelRep::Kraus { operators } => operators.map(m),
            ChannelRep::Stinespring { dilation } => dilation.map(m),
            ChannelRep::Choi { matrix, dim } => {
                if matrix.shape() != (dim * dim, dim * dim) {
                    return Err(Error::Shape(format!("Choi matrix must be {0}x{0}", dim * dim)));
                }
                let joint = kron(&m.transpose(), &ComplexMatrix::identity(*dim)).matmul(matrix);
                Ok(partial_trace(&joint, &[*dim, *dim], &[1])?.scale_real(*dim as f64))
            }
        }
    }
}

/// Applies a channel to a density matrix.
pub fn apply_channel(rep: &ChannelRep, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = rep.dim();
    if rho.shape() != (d, d) {
        return Err(Error::Shape(format!(
            "channel acts on {d}x{d} matrices, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    validate_density(rho, Tolerance::DENSITY)?;
    rep.map(rho)
}

/// Unit-trace Choi matrix `(1/d) Σ E_ik ⊗ Φ(E_ik)` of any representation.
pub fn choi_of(rep: &ChannelRep) -> Result<ComplexMatrix> {
    if let ChannelRep::Choi { matrix, .. } = rep {
        return Ok(matrix.clone());
    }
    let d = rep.dim();
    let mut omega = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for k in 0..d {
            let out = rep.map(&ComplexMatrix::unit(d, i, k))?;
            omega = &omega + &kron(&ComplexMatrix::unit(d, i, k), &out);
        }
    }
    Ok(omega.scale_real(1.0 / d as f64))
}

/// True iff the Choi matrix is PSD and its output marginal is `I/d`, both within `tol`.
pub fn is_cptp(rep: &ChannelRep, tol: Tolerance) -> bool {
    let Ok(omega) = choi_of(rep) else {
        return false;
    };
    let d = rep.dim();
    if omega.shape() != (d * d, d * d) || !is_psd(&omega, tol) {
        return false;
    }
    match partial_trace(&omega, &[d, d], &[0]) {
        Ok(marginal) => marginal.max_abs_diff(&ComplexMatrix::identity(d).scale_real(1.0 / d as f64)) <= tol.atol(),
        Err(_) => false,
    }
}

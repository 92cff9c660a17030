//! Analytic Landau-Streater and Werner-Holevo channels, their dilations, and
//! the representation-agnostic [`ChannelRep`].

mod dilation;
mod rep;

pub use dilation::{ls_stinespring, wh_stinespring, EnvOrdering, StinespringDilation};
pub use rep::{apply_channel, choi_of, is_cptp, AnalyticChannel, ChannelRep, KrausSet};

use crate::error::{Error, Result};
use crate::numkit::{c64, validate_density, ComplexMatrix, Tolerance, ONE, ZERO};

/// The spin-1 angular momentum matrices (ħ = 1).
#[derive(Clone, Debug)]
pub struct SpinGenerators {
    pub jx: ComplexMatrix,
    pub jy: ComplexMatrix,
    pub jz: ComplexMatrix,
}

impl SpinGenerators {
    pub fn as_array(&self) -> [&ComplexMatrix; 3] {
        [&self.jx, &self.jy, &self.jz]
    }
}

pub fn spin1_generators() -> SpinGenerators {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let jx = ComplexMatrix::from_real(&[&[0.0, r, 0.0], &[r, 0.0, r], &[0.0, r, 0.0]]);
    let jy = ComplexMatrix::from_complex(&[
        &[ZERO, c64(0.0, -r), ZERO],
        &[c64(0.0, r), ZERO, c64(0.0, -r)],
        &[ZERO, c64(0.0, r), ZERO],
    ]);
    let jz = ComplexMatrix::diag_real(&[1.0, 0.0, -1.0]);
    SpinGenerators { jx, jy, jz }
}

/// `(Jx ρ Jx + Jy ρ Jy + Jz ρ Jz) / 2`, extended linearly to any 3×3 matrix.
pub fn ls_map(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if m.shape() != (3, 3) {
        return Err(Error::Shape(format!(
            "LS channel acts on 3x3 matrices, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let g = spin1_generators();
    let mut out = ComplexMatrix::zeros(3, 3);
    for j in g.as_array() {
        out = &out + &j.matmul(m).matmul(j);
    }
    Ok(out.scale_real(0.5))
}

/// `(Tr[m]·I − mᵀ) / (d − 1)`, extended linearly to any d×d matrix.
pub fn wh_map(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::Shape(format!(
            "WH channel acts on square matrices, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let d = m.rows();
    if d < 2 {
        return Err(Error::Domain(format!("WH channel needs d >= 2, got {d}")));
    }
    let tr = m.trace();
    let mut out = m.transpose().scale_real(-1.0);
    for i in 0..d {
        out[(i, i)] += tr;
    }
    Ok(out.scale_real(1.0 / (d as f64 - 1.0)))
}

/// The Landau-Streater channel on a qutrit density matrix.
pub fn ls_apply(rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    if rho.shape() != (3, 3) {
        return Err(Error::Shape(format!(
            "LS channel acts on 3x3 matrices, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    validate_density(rho, Tolerance::DENSITY)?;
    ls_map(rho)
}

/// The Werner-Holevo channel on a d-dimensional density matrix.
pub fn wh_apply(rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    if rho.is_square() && rho.rows() < 2 {
        return Err(Error::Domain(format!("WH channel needs d >= 2, got {}", rho.rows())));
    }
    validate_density(rho, Tolerance::DENSITY)?;
    wh_map(rho)
}

/// `W` with `LS(ρ) = WH(WρW†)`.
pub fn covariance_unitary() -> ComplexMatrix {
    ComplexMatrix::from_complex(&[&[ZERO, ZERO, ONE], &[ZERO, -ONE, ZERO], &[ONE, ZERO, ZERO]])
}

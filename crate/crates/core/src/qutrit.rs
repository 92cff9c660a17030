//! Qutrit ↔ two-qubit encoding (`0 ↔ |00⟩`, `1 ↔ |01⟩`, `2 ↔ |10⟩`, `|11⟩`
//! unused), post-selection back onto the qutrit subspace, and channels induced
//! by four-qubit circuits.

use serde::{Deserialize, Serialize};

use crate::circuit::{evolve_density, Circuit, NoiseConfig};
use crate::error::{Error, Result};
use crate::numkit::{c64, reduce_qubits, validate_density, ComplexMatrix, Tolerance, ZERO};

/// Two-qubit basis index of each qutrit level.
pub const QUTRIT_LEVELS: [usize; 3] = [0b00, 0b01, 0b10];
/// The two-qubit basis state with no logical meaning.
pub const EXCLUDED_LEVEL: usize = 0b11;

/// Places a normalized 3-vector into the first three amplitudes of a 4-vector.
pub fn embed_state(v: &ComplexMatrix) -> Result<ComplexMatrix> {
    if v.shape() != (3, 1) {
        return Err(Error::Shape(format!(
            "qutrit state must be 3x1, got {}x{}",
            v.rows(),
            v.cols()
        )));
    }
    let norm = v.frobenius_norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::Domain(format!("qutrit state has norm {norm}")));
    }
    let mut out = vec![ZERO; 4];
    for (k, &idx) in QUTRIT_LEVELS.iter().enumerate() {
        out[idx] = v[(k, 0)];
    }
    Ok(ComplexMatrix::column(out))
}

/// Embeds a qutrit density matrix; row and column `|11⟩` are zero.
pub fn embed_density(rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    if rho.shape() != (3, 3) {
        return Err(Error::Shape(format!(
            "qutrit density must be 3x3, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    validate_density(rho, Tolerance::DENSITY)?;
    Ok(embed_operator(rho))
}

pub(crate) fn embed_operator(m: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(4, 4);
    for (a, &ia) in QUTRIT_LEVELS.iter().enumerate() {
        for (b, &ib) in QUTRIT_LEVELS.iter().enumerate() {
            out[(ia, ib)] = m[(a, b)];
        }
    }
    out
}

/// Post-selects a two-qubit density matrix onto the qutrit subspace.
///
/// Returns the renormalized 3×3 block and the discarded weight `1 − Tr(PρP)`.
pub fn project_qutrit(rho4: &ComplexMatrix) -> Result<(ComplexMatrix, f64)> {
    if rho4.shape() != (4, 4) {
        return Err(Error::Shape(format!(
            "two-qubit density must be 4x4, got {}x{}",
            rho4.rows(),
            rho4.cols()
        )));
    }
    let block = rho4.select(&QUTRIT_LEVELS, &QUTRIT_LEVELS);
    let kept = block.trace().re;
    if kept < 1e-12 {
        return Err(Error::DegenerateProjection(kept));
    }
    let total = rho4.trace().re;
    let leakage = ((total - kept) / total).clamp(0.0, 1.0);
    Ok((block.scale_real(1.0 / kept), leakage))
}

/// Kets of the nine qutrit input states: `|0⟩, |1⟩, |2⟩`, then `(|a⟩+|b⟩)/√2`
/// and `(|a⟩+i|b⟩)/√2` over the pairs `(0,1), (0,2), (1,2)`.
pub fn basis_kets() -> Vec<ComplexMatrix> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut out: Vec<ComplexMatrix> = (0..3).map(|i| ComplexMatrix::basis_ket(3, i)).collect();
    for phase in [c64(r, 0.0), c64(0.0, r)] {
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            let mut v = vec![ZERO; 3];
            v[a] = c64(r, 0.0);
            v[b] = phase;
            out.push(ComplexMatrix::column(v));
        }
    }
    out
}

/// The nine input density matrices `ρ₁ … ρ₉` (index 0 holds `ρ₁`).
pub fn basis_densities() -> Vec<ComplexMatrix> {
    basis_kets().iter().map(ComplexMatrix::projector).collect()
}

/// A circuit together with the wires holding the system and environment qutrits.
///
/// Wires listed in neither pair start in `|0⟩` and are traced out with the environment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelCircuit {
    pub circuit: Circuit,
    pub system: [usize; 2],
    pub env: [usize; 2],
}

impl ChannelCircuit {
    pub fn new(circuit: Circuit, system: [usize; 2], env: [usize; 2]) -> Result<Self> {
        let n = circuit.n_qubits();
        let all = [system[0], system[1], env[0], env[1]];
        for (i, &q) in all.iter().enumerate() {
            if q >= n || all[..i].contains(&q) {
                return Err(Error::Domain(format!(
                    "invalid role assignment system {system:?}, env {env:?}"
                )));
            }
        }
        Ok(ChannelCircuit { circuit, system, env })
    }

    pub fn n_qubits(&self) -> usize {
        self.circuit.n_qubits()
    }
}

/// Register density with `rho4` on `system` (first entry = high qubit) and every other wire in `|0⟩`.
pub fn register_density(n_qubits: usize, system: [usize; 2], rho4: &ComplexMatrix) -> Result<ComplexMatrix> {
    if rho4.shape() != (4, 4) {
        return Err(Error::Shape("system density must be 4x4".into()));
    }
    if system[0] == system[1] || system.iter().any(|&q| q >= n_qubits) {
        return Err(Error::Domain(format!("invalid system wires {system:?}")));
    }
    let dim = 1usize << n_qubits;
    let bit = |q: usize| 1usize << (n_qubits - 1 - q);
    let idx = |s: usize| (if s & 2 != 0 { bit(system[0]) } else { 0 }) | (if s & 1 != 0 { bit(system[1]) } else { 0 });
    let mut out = ComplexMatrix::zeros(dim, dim);
    for a in 0..4 {
        for b in 0..4 {
            out[(idx(a), idx(b))] = rho4[(a, b)];
        }
    }
    Ok(out)
}

/// The qutrit map realized by a [`ChannelCircuit`].
#[derive(Clone, Debug)]
pub struct InducedChannel {
    circuit: ChannelCircuit,
    noise: Option<NoiseConfig>,
}

impl InducedChannel {
    pub fn circuit(&self) -> &ChannelCircuit {
        &self.circuit
    }

    /// Two-qubit system state after the circuit, before post-selection.
    pub fn system_state(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.circuit.n_qubits();
        let full = register_density(n, self.circuit.system, &embed_density(rho)?)?;
        let out = evolve_density(&self.circuit.circuit, &full, self.noise.as_ref());
        reduce_qubits(&out, n, &self.circuit.system)
    }

    /// `(Φ(ρ), leakage)`
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<(ComplexMatrix, f64)> {
        project_qutrit(&self.system_state(rho)?)
    }

    /// Outputs for every input plus the mean leakage.
    pub fn apply_all(&self, inputs: &[ComplexMatrix]) -> Result<(Vec<ComplexMatrix>, f64)> {
        let mut outputs = Vec::with_capacity(inputs.len());
        let mut leak = 0.0;
        for rho in inputs {
            let (out, l) = self.apply(rho)?;
            outputs.push(out);
            leak += l;
        }
        Ok((outputs, leak / inputs.len().max(1) as f64))
    }
}

/// embed → environment in `|00⟩` → simulate → trace out environment → post-select.
pub fn induced_channel(circuit: &ChannelCircuit, noise: Option<&NoiseConfig>) -> InducedChannel {
    InducedChannel {
        circuit: circuit.clone(),
        noise: noise.copied(),
    }
}

//! Qutrit Choi matrices: analytic, from channel outputs on the nine
//! tomography inputs, and directly from an entangled-ancilla circuit.

use serde::{Deserialize, Serialize};

use crate::channel::{choi_of, ChannelRep};
use crate::circuit::{Circuit, NoiseConfig};
use crate::decomp::{prep_basis_circuit, prep_max_entangled_circuit};
use crate::error::{Error, Result};
use crate::layout::{place_and_route, CouplingMap};
use crate::numkit::{
    c64, is_psd, kron, partial_trace, project_to_density, validate_density, ComplexMatrix, MatrixJson, Tolerance, ONE,
    ZERO,
};
use crate::qutrit::{basis_densities, ChannelCircuit, QUTRIT_LEVELS};
use crate::tomography::{collect_streams, fidelity, reconstruct, reconstruct_qutrit};

/// A unit-trace Choi matrix with input ⊗ output ordering.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChoiJson", into = "ChoiJson")]
pub struct ChoiMatrix {
    omega: ComplexMatrix,
    dim: usize,
}

#[derive(Serialize, Deserialize)]
struct ChoiJson {
    #[serde(flatten)]
    matrix: MatrixJson,
    ordering: String,
    normalization: String,
}

impl TryFrom<ChoiJson> for ChoiMatrix {
    type Error = Error;

    fn try_from(j: ChoiJson) -> Result<Self> {
        if j.ordering != "input_output" || j.normalization != "trace_one" {
            return Err(Error::Parse(format!(
                "unsupported Choi convention {}/{}",
                j.ordering, j.normalization
            )));
        }
        ChoiMatrix::new(ComplexMatrix::try_from(j.matrix)?)
    }
}

impl From<ChoiMatrix> for ChoiJson {
    fn from(c: ChoiMatrix) -> Self {
        ChoiJson {
            matrix: c.omega.into(),
            ordering: "input_output".into(),
            normalization: "trace_one".into(),
        }
    }
}

impl ChoiMatrix {
    /// Checks shape `d² × d²`, hermiticity and unit trace within 1e−8.
    pub fn new(omega: ComplexMatrix) -> Result<Self> {
        let n = omega.rows();
        let dim = (n as f64).sqrt().round() as usize;
        if !omega.is_square() || dim * dim != n || dim == 0 {
            return Err(Error::Shape(format!(
                "Choi matrix must be d²×d², got {}x{}",
                n,
                omega.cols()
            )));
        }
        if !omega.is_hermitian(Tolerance::DENSITY) {
            return Err(Error::Domain("Choi matrix is not Hermitian".into()));
        }
        let tr = omega.trace();
        if (tr.re - 1.0).abs() > Tolerance::DENSITY.atol() || tr.im.abs() > Tolerance::DENSITY.atol() {
            return Err(Error::Domain(format!("Choi matrix has trace {tr}")));
        }
        Ok(ChoiMatrix { omega, dim })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.omega
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// PSD with input marginal `Tr_out Ω = I/d`, both within `tol`.
    pub fn is_physical(&self, tol: Tolerance) -> bool {
        is_psd(&self.omega, tol) && self.input_marginal_error() <= tol.atol()
    }

    /// `‖Tr_out Ω − I/d‖_max`, zero for trace-preserving maps.
    pub fn input_marginal_error(&self) -> f64 {
        let d = self.dim;
        let marginal = partial_trace(&self.omega, &[d, d], &[0]).expect("square d²");
        marginal.max_abs_diff(&ComplexMatrix::identity(d).scale_real(1.0 / d as f64))
    }

    /// Nearest unit-trace PSD matrix.
    pub fn projected(&self) -> Result<ChoiMatrix> {
        ChoiMatrix::new(project_to_density(&self.omega)?)
    }

    pub fn to_rep(&self) -> ChannelRep {
        ChannelRep::Choi {
            matrix: self.omega.clone(),
            dim: self.dim,
        }
    }
}

/// `(1/d) Σ E_ik ⊗ Φ(E_ik)` from the linear extension of the channel.
pub fn analytic_choi(channel: &ChannelRep) -> Result<ChoiMatrix> {
    ChoiMatrix::new(choi_of(channel)?)
}

/// Coefficients expressing each `E_ij` in the frame of the nine input states.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisDecomposition {
    /// Row `3i + j` holds `a_ij^k` for `k = 1..9`.
    pub coeffs: ComplexMatrix,
    pub basis_states: Vec<ComplexMatrix>,
}

impl BasisDecomposition {
    /// `Σ_k a_ij^k ℜ_k`
    pub fn reconstruct(&self, i: usize, j: usize) -> ComplexMatrix {
        let row = 3 * i + j;
        self.basis_states
            .iter()
            .enumerate()
            .fold(ComplexMatrix::zeros(3, 3), |acc, (k, r)| {
                &acc + &r.scale(self.coeffs[(row, k)])
            })
    }
}

/// The stored coefficient table for the inputs of [`basis_densities`].
pub fn basis_decomposition() -> BasisDecomposition {
    let h = 0.5;
    let p = c64(-h, -h); // −(1+i)/2
    let m = c64(-h, h); // −(1−i)/2
    let i = c64(0.0, 1.0);
    let (o, z) = (ONE, ZERO);
    let rows: [[num_complex::Complex64; 9]; 9] = [
        [o, z, z, z, z, z, z, z, z],
        [p, p, z, o, z, z, i, z, z],
        [p, z, p, z, o, z, z, i, z],
        [m, m, z, o, z, z, -i, z, z],
        [z, o, z, z, z, z, z, z, z],
        [z, p, p, z, z, o, z, z, i],
        [m, z, m, z, o, z, z, -i, z],
        [z, m, m, z, z, o, z, z, -i],
        [z, z, o, z, z, z, z, z, z],
    ];
    let coeffs = ComplexMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).expect("9x9");
    BasisDecomposition {
        coeffs,
        basis_states: basis_densities(),
    }
}

/// Assembles `Ω = (1/3) Σ E_ij ⊗ Σ_k a_ij^k Φ(ℜ_k)` from the channel outputs on the nine inputs.
///
/// Each output must have unit trace within 1e−6; the result is rescaled to unit trace.
pub fn choi_linear(outputs: &[ComplexMatrix]) -> Result<ChoiMatrix> {
    if outputs.len() != 9 {
        return Err(Error::Arity {
            expected: 9,
            got: outputs.len(),
        });
    }
    for (k, out) in outputs.iter().enumerate() {
        if out.shape() != (3, 3) {
            return Err(Error::Shape(format!(
                "output {} is {}x{}, expected 3x3",
                k + 1,
                out.rows(),
                out.cols()
            )));
        }
        let tr = out.trace();
        if (tr.re - 1.0).abs() > 1e-6 || tr.im.abs() > 1e-6 {
            return Err(Error::Domain(format!("output {} has trace {tr}", k + 1)));
        }
    }
    let dec = basis_decomposition();
    let mut omega = ComplexMatrix::zeros(9, 9);
    for i in 0..3 {
        for j in 0..3 {
            let block = outputs
                .iter()
                .enumerate()
                .fold(ComplexMatrix::zeros(3, 3), |acc, (k, out)| {
                    &acc + &out.scale(dec.coeffs[(3 * i + j, k)])
                });
            omega = &omega + &kron(&ComplexMatrix::unit(3, i, j), &block);
        }
    }
    let tr = omega.trace().re;
    ChoiMatrix::new(omega.scale_real(1.0 / tr).hermitian_part())
}

fn ground_state(n_qubits: usize) -> ComplexMatrix {
    let dim = 1usize << n_qubits;
    let mut rho = ComplexMatrix::zeros(dim, dim);
    rho[(0, 0)] = ONE;
    rho
}

/// `(Ω, mean leakage)` from tomography of the channel's outputs on the nine inputs.
///
/// Input `k` uses RNG streams `81·k + setting`; `shots == 0` is exact.
pub fn choi_linear_from_circuit(
    channel: &ChannelCircuit,
    shots: u64,
    seed: u64,
    noise: Option<&NoiseConfig>,
) -> Result<(ChoiMatrix, f64)> {
    let n = channel.n_qubits();
    let input = ground_state(n);
    let mut outputs = Vec::with_capacity(9);
    let mut leak = 0.0;
    for k in 1..=9 {
        let mut c = prep_basis_circuit(k)?.embedded(n, &channel.system)?;
        c.append(&channel.circuit)?;
        let rec = collect_streams(&c, &input, &channel.system, shots, seed, 81 * k as u64, noise)?;
        let (rho, l) = reconstruct_qutrit(&rec)?;
        outputs.push(rho);
        leak += l / 9.0;
    }
    Ok((choi_linear(&outputs)?, leak))
}

/// Six-qubit circuit for direct Choi estimation and its wires
/// `(system, ancilla)`: entangle system with ancilla, then run the channel.
///
/// Without a layout the ancilla pair is appended after the channel's wires.
/// With a layout the channel must be a four-qubit circuit; its system,
/// environment and the ancilla go to the map's placement and the result is routed.
pub fn choi_direct_circuit(
    channel: &ChannelCircuit,
    layout: Option<&CouplingMap>,
) -> Result<(Circuit, [usize; 2], [usize; 2])> {
    let n = channel.n_qubits();
    let ancilla = [n, n + 1];
    let mut logical = prep_max_entangled_circuit(n + 2, channel.system, ancilla)?;
    logical.append_mapped(&channel.circuit, &(0..n).collect::<Vec<_>>())?;
    let Some(map) = layout else {
        return Ok((logical, channel.system, ancilla));
    };
    let placement = map
        .placement()
        .ok_or_else(|| Error::Routing("coupling map has no placement".into()))?;
    let phys_anc = placement
        .ancilla
        .ok_or_else(|| Error::Routing("coupling map placement has no ancilla pair".into()))?;
    if n != 4 {
        return Err(Error::Routing(format!(
            "placement needs a 4-qubit channel circuit, got {n}"
        )));
    }
    let mut wires = vec![0; n + 2];
    for (k, &q) in channel.system.iter().enumerate() {
        wires[q] = placement.system[k];
    }
    for (k, &q) in channel.env.iter().enumerate() {
        wires[q] = placement.env[k];
    }
    wires[n] = phys_anc[0];
    wires[n + 1] = phys_anc[1];
    let routed = place_and_route(&logical, &wires, map)?;
    Ok((routed, placement.system, phys_anc))
}

/// `(Ω, leakage)` by tomography of the ancilla ⊗ system state over 81 settings.
///
/// Both qutrit factors are post-selected; leakage is the discarded weight.
pub fn choi_direct(
    channel: &ChannelCircuit,
    shots: u64,
    seed: u64,
    noise: Option<&NoiseConfig>,
    layout: Option<&CouplingMap>,
) -> Result<(ChoiMatrix, f64)> {
    let (c, system, ancilla) = choi_direct_circuit(channel, layout)?;
    let zero = ground_state(c.n_qubits());
    let measured = [ancilla[0], ancilla[1], system[0], system[1]];
    let rec = collect_streams(&c, &zero, &measured, shots, seed, 0, noise)?;
    let rho = reconstruct(&rec)?;
    let keep: Vec<usize> = QUTRIT_LEVELS
        .iter()
        .flat_map(|&a| QUTRIT_LEVELS.iter().map(move |&b| 4 * a + b))
        .collect();
    let block = rho.select(&keep, &keep);
    let weight = block.trace().re;
    if weight < 1e-12 {
        return Err(Error::DegenerateProjection(weight));
    }
    Ok((
        ChoiMatrix::new(block.scale_real(1.0 / weight).hermitian_part())?,
        1.0 - weight,
    ))
}

/// `d · Tr₁((ρᵀ ⊗ I) Ω)`, the inverse of the unit-trace Choi map.
pub fn channel_from_choi(omega: &ChoiMatrix, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = omega.dim;
    if rho.shape() != (d, d) {
        return Err(Error::Shape(format!(
            "expected a {d}x{d} density, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    validate_density(rho, Tolerance::DENSITY)?;
    omega.to_rep().map(rho)
}

/// Uhlmann fidelity of two Choi states.
pub fn choi_fidelity(th: &ChoiMatrix, exp: &ChoiMatrix) -> Result<f64> {
    fidelity(&th.omega, &exp.omega)
}

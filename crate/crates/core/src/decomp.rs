//! Gate-level constructions of the qutrit channels: the quasi-Toffoli gate,
//! the covariance unitary on two qubits, the row permutation S, the four
//! factorizable configurations and the state-preparation circuits.
//!
//! Channel circuits use a four-qubit register with the system qutrit on
//! qubits 0, 1 and the environment qutrit on qubits 2, 3. The tensor-product
//! forms of [`s_config_unitary`] are written environment first, as
//! `e0 ⊗ e1 ⊗ s0 ⊗ s1`; [`env_major`] converts between the two orders.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::layout::{place_and_route, CouplingMap};
use crate::numkit::{c64, kron_all, permute_qubits, ComplexMatrix, ONE, ZERO};
use crate::qutrit::ChannelCircuit;

/// Register wires of the system qutrit in channel circuits.
pub const SYSTEM_WIRES: [usize; 2] = [0, 1];
/// Register wires of the environment qutrit in channel circuits.
pub const ENV_WIRES: [usize; 2] = [2, 3];

// Register qubit holding each of e0, e1, s0, s1.
const ENV_MAJOR: [usize; 4] = [2, 3, 0, 1];

/// Reorders a 16×16 operator between register order (s0 s1 e0 e1) and the
/// environment-major order (e0 e1 s0 s1). The map is its own inverse.
pub fn env_major(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    permute_qubits(m, 4, &ENV_MAJOR)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QuasiToffoliVariant {
    A,
    B,
}

/// Toffoli up to a sign on `|100⟩`: identity except `[4][4] = −1` and the
/// `|110⟩ ↔ |111⟩` swap. Qubit 0 is the control that carries the sign.
pub fn quasi_toffoli_matrix() -> ComplexMatrix {
    let mut m = ComplexMatrix::identity(8);
    m[(4, 4)] = -ONE;
    m[(6, 6)] = ZERO;
    m[(7, 7)] = ZERO;
    m[(6, 7)] = ONE;
    m[(7, 6)] = ONE;
    m
}

/// Three-qubit circuit (controls 0 and 1, target 2) equal to [`quasi_toffoli_matrix`]
/// with no global phase. Both variants use three CNOTs and four Y rotations
/// on the target: `A = U3(π/4, 0, 0)` and its inverse for variant A,
/// `U3(±3π/4, 0, 0)` for variant B.
pub fn quasi_toffoli_circuit(v: QuasiToffoliVariant) -> Circuit {
    let (a, b) = match v {
        QuasiToffoliVariant::A => (-FRAC_PI_4, FRAC_PI_4),
        QuasiToffoliVariant::B => (3.0 * FRAC_PI_4, -3.0 * FRAC_PI_4),
    };
    let gates = [
        Gate::u3(a, 0.0, 0.0, 2),
        Gate::cnot(1, 2),
        Gate::u3(a, 0.0, 0.0, 2),
        Gate::cnot(0, 2),
        Gate::u3(b, 0.0, 0.0, 2),
        Gate::cnot(1, 2),
        Gate::u3(b, 0.0, 0.0, 2),
    ];
    Circuit::from_gates(3, gates).expect("static circuit")
}

fn push_quasi_toffoli(c: &mut Circuit, c1: usize, c2: usize, t: usize) {
    c.append_mapped(&quasi_toffoli_circuit(QuasiToffoliVariant::A), &[c1, c2, t])
        .expect("wires inside register");
}

/// The covariance unitary on the encoded qutrit with a free phase on `|11⟩`.
pub fn w_tilde_matrix(phi: f64) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4, 4);
    m[(0, 2)] = ONE;
    m[(2, 0)] = ONE;
    m[(1, 1)] = -ONE;
    m[(3, 3)] = c64(phi.cos(), phi.sin());
    m
}

/// `Z₁ X₁ CNOT(1→0) X₁` on two qubits, which equals `w_tilde_matrix(π)`.
pub fn w_tilde_circuit() -> Circuit {
    Circuit::from_gates(2, [Gate::x(1), Gate::cnot(1, 0), Gate::x(1), Gate::z(1)]).expect("static circuit")
}

/// The three dilation columns (inputs `|a⟩` with the environment in `|00⟩`)
/// in environment-major rows `4·env + sys`.
pub fn u_tilde_columns() -> ComplexMatrix {
    let r = FRAC_1_SQRT_2;
    let mut m = ComplexMatrix::zeros(16, 3);
    m[(1, 0)] = c64(-r, 0.0);
    m[(6, 0)] = c64(-r, 0.0);
    m[(0, 1)] = c64(r, 0.0);
    m[(10, 1)] = c64(-r, 0.0);
    m[(4, 2)] = c64(r, 0.0);
    m[(9, 2)] = c64(r, 0.0);
    m
}

/// The permuted columns `S·Ũ`, environment-major.
pub fn s_u_tilde_columns() -> ComplexMatrix {
    let r = FRAC_1_SQRT_2;
    let mut m = ComplexMatrix::zeros(16, 3);
    m[(3, 0)] = c64(-r, 0.0);
    m[(11, 0)] = c64(-r, 0.0);
    m[(2, 1)] = c64(r, 0.0);
    m[(10, 1)] = c64(-r, 0.0);
    m[(1, 2)] = c64(r, 0.0);
    m[(9, 2)] = c64(r, 0.0);
    m
}

/// Row permutation S built from quasi-Toffoli, CNOT and X gates, mapping
/// [`u_tilde_columns`] exactly onto [`s_u_tilde_columns`].
pub fn s_permutation_circuit() -> Circuit {
    let [e0, e1, s0, s1] = ENV_MAJOR;
    let mut c = Circuit::new(4).expect("4 qubits");
    c.push(Gate::x(e0)).expect("in range");
    c.push(Gate::cnot(e0, s0)).expect("in range");
    push_quasi_toffoli(&mut c, s0, s1, e0);
    c.push(Gate::cnot(e1, s0)).expect("in range");
    c.push(Gate::cnot(e1, s1)).expect("in range");
    push_quasi_toffoli(&mut c, e0, s1, e1);
    c
}

/// One of the four configurations whose permuted dilation factorizes into one-qubit gates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct SConfig(u8);

impl SConfig {
    pub const ALL: [SConfig; 4] = [SConfig(1), SConfig(2), SConfig(3), SConfig(4)];

    pub fn new(k: u8) -> Result<Self> {
        if (1..=4).contains(&k) {
            Ok(SConfig(k))
        } else {
            Err(Error::Domain(format!("configuration index {k} outside 1..=4")))
        }
    }

    pub fn k(self) -> u8 {
        self.0
    }
}

impl Default for SConfig {
    fn default() -> Self {
        SConfig(4)
    }
}

impl TryFrom<u8> for SConfig {
    type Error = Error;

    fn try_from(k: u8) -> Result<Self> {
        SConfig::new(k)
    }
}

impl From<SConfig> for u8 {
    fn from(c: SConfig) -> u8 {
        c.0
    }
}

impl fmt::Display for SConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S{}", self.0)
    }
}

#[derive(Clone, Copy)]
enum Factor {
    Id,
    H,
    X,
    /// `U3(θ, 0, 0)`
    Ry(f64),
}

// Factors of the tensor product, e0 e1 s0 s1.
fn config_layer(cfg: SConfig) -> [Factor; 4] {
    if cfg.0 <= 2 {
        [Factor::Ry(-FRAC_PI_2), Factor::Id, Factor::X, Factor::Ry(-PI)]
    } else {
        [Factor::H, Factor::Id, Factor::X, Factor::Ry(PI)]
    }
}

fn layer_gate(f: Factor, q: usize) -> Option<Gate> {
    match f {
        Factor::Id => None,
        Factor::H => Some(Gate::h(q)),
        Factor::X => Some(Gate::x(q)),
        Factor::Ry(t) => Some(Gate::u3(t, 0.0, 0.0, q)),
    }
}

fn factor_matrix(f: Factor) -> ComplexMatrix {
    let r = FRAC_1_SQRT_2;
    match f {
        Factor::Id => ComplexMatrix::identity(2),
        Factor::H => ComplexMatrix::from_real(&[&[r, r], &[r, -r]]),
        Factor::X => ComplexMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]),
        Factor::Ry(t) => {
            let (s, c) = (t / 2.0).sin_cos();
            ComplexMatrix::from_real(&[&[c, -s], &[s, c]])
        }
    }
}

/// `S_k·Ũ` as the tensor product `e0 ⊗ e1 ⊗ s0 ⊗ s1` (environment-major).
pub fn s_config_unitary(cfg: SConfig) -> ComplexMatrix {
    let factors: Vec<ComplexMatrix> = config_layer(cfg).iter().map(|&f| factor_matrix(f)).collect();
    kron_all(&factors)
}

// Quasi-Toffoli wires (phase control, control, target) in e0 e1 s0 s1 numbering.
type Qt = [usize; 3];

fn config_permutation(cfg: SConfig) -> (Qt, Qt, bool) {
    match cfg.0 {
        1 => ([0, 2, 1], [2, 3, 0], false),
        2 => ([2, 0, 1], [3, 2, 0], false),
        3 => ([2, 0, 1], [2, 3, 0], true),
        _ => ([2, 0, 1], [3, 2, 0], true),
    }
}

/// The inverse permutation `S_k⁻¹` as a register-order circuit.
pub fn s_config_inverse_circuit(cfg: SConfig) -> Circuit {
    let w = |p: usize| ENV_MAJOR[p];
    let (a, b, second_cnot) = config_permutation(cfg);
    let mut c = Circuit::new(4).expect("4 qubits");
    push_quasi_toffoli(&mut c, w(a[0]), w(a[1]), w(a[2]));
    c.push(Gate::cnot(w(1), w(2))).expect("in range");
    if second_cnot {
        c.push(Gate::cnot(w(1), w(3))).expect("in range");
    } else {
        c.push(Gate::x(w(3))).expect("in range");
    }
    push_quasi_toffoli(&mut c, w(b[0]), w(b[1]), w(b[2]));
    c.push(Gate::cnot(w(0), w(3))).expect("in range");
    c
}

/// Werner–Holevo channel circuit: the one-qubit layer of `S_k·Ũ` followed by `S_k⁻¹`.
///
/// Without a layout the register is four qubits with system on 0, 1 and
/// environment on 2, 3. With a layout the circuit is placed on the map's
/// placement (or the first four qubits) and routed.
pub fn wh_channel_circuit(cfg: SConfig, layout: Option<&CouplingMap>) -> Result<ChannelCircuit> {
    let mut c = Circuit::new(4)?;
    for (p, &f) in config_layer(cfg).iter().enumerate() {
        if let Some(g) = layer_gate(f, ENV_MAJOR[p]) {
            c.push(g)?;
        }
    }
    c.append(&s_config_inverse_circuit(cfg))?;
    finish(c, layout)
}

/// Landau–Streater channel circuit: [`w_tilde_circuit`] on the system, then the WH circuit.
pub fn ls_channel_circuit(cfg: SConfig, layout: Option<&CouplingMap>) -> Result<ChannelCircuit> {
    let mut c = Circuit::new(4)?;
    c.append_mapped(&w_tilde_circuit(), &SYSTEM_WIRES)?;
    c.append(&wh_channel_circuit(cfg, None)?.circuit)?;
    finish(c, layout)
}

fn finish(c: Circuit, layout: Option<&CouplingMap>) -> Result<ChannelCircuit> {
    match layout {
        None => ChannelCircuit::new(c, SYSTEM_WIRES, ENV_WIRES),
        Some(map) => {
            let (system, env) = match map.placement() {
                Some(p) => (p.system, p.env),
                None => (SYSTEM_WIRES, ENV_WIRES),
            };
            let routed = place_and_route(&c, &[system[0], system[1], env[0], env[1]], map)?;
            ChannelCircuit::new(routed, system, env)
        }
    }
}

/// Two-qubit circuit preparing the `i`-th tomography input state from `|00⟩`,
/// in the order of [`crate::qutrit::basis_kets`].
pub fn prep_basis_circuit(i: usize) -> Result<Circuit> {
    let s = |q| Gate::u1(FRAC_PI_2, q);
    let gates = match i {
        1 => vec![],
        2 => vec![Gate::x(1)],
        3 => vec![Gate::x(0)],
        4 => vec![Gate::h(1)],
        5 => vec![Gate::h(0)],
        6 => vec![Gate::h(0), Gate::x(1), Gate::cnot(0, 1)],
        7 => vec![Gate::h(1), s(1)],
        8 => vec![Gate::h(0), s(0)],
        9 => vec![Gate::h(0), s(0), Gate::x(1), Gate::cnot(0, 1)],
        _ => return Err(Error::Domain(format!("basis state index {i} outside 1..=9"))),
    };
    Circuit::from_gates(2, gates)
}

/// Angle of the first rotation in [`prep_superposition_circuit`], `2·arccos(1/√3)`.
pub fn superposition_angle() -> f64 {
    2.0 * (1.0 / 3f64.sqrt()).acos()
}

/// Two-qubit circuit preparing `(|00⟩ + |01⟩ + |10⟩)/√3` from `|00⟩`.
pub fn prep_superposition_circuit() -> Circuit {
    let gates = [
        Gate::u3(superposition_angle(), 0.0, 0.0, 0),
        Gate::u3(FRAC_PI_4, 0.0, 0.0, 1),
        Gate::cnot(0, 1),
        Gate::u3(-FRAC_PI_4, 0.0, 0.0, 1),
        Gate::cnot(1, 0),
    ];
    Circuit::from_gates(2, gates).expect("static circuit")
}

/// Prepares the maximally entangled qutrit pair `Σ_a |a⟩_system |a⟩_ancilla / √3`
/// on an `n_qubits` register.
pub fn prep_max_entangled_circuit(n_qubits: usize, system: [usize; 2], ancilla: [usize; 2]) -> Result<Circuit> {
    let mut c = Circuit::new(n_qubits)?;
    c.append_mapped(&prep_superposition_circuit(), &system)?;
    c.push(Gate::cnot(system[0], ancilla[0]))?;
    c.push(Gate::cnot(system[1], ancilla[1]))?;
    Ok(c)
}

/// Register layout used for direct Choi estimation: system, environment, ancilla.
pub const CHOI_LAYOUT: ([usize; 2], [usize; 2], [usize; 2]) = ([0, 1], [2, 3], [4, 5]);

/// Named circuits: `wh_s4`, `ls_s4`, `prep_1`..`prep_9` and
/// `prep_psi_plus_system` (system ⊗ ancilla entangled state on the six-qubit Choi layout).
pub fn circuit_manifest() -> Vec<(String, Circuit)> {
    let cfg = SConfig::default();
    let mut out = vec![
        (
            "wh_s4".to_string(),
            wh_channel_circuit(cfg, None).expect("static").circuit,
        ),
        (
            "ls_s4".to_string(),
            ls_channel_circuit(cfg, None).expect("static").circuit,
        ),
    ];
    for i in 1..=9 {
        out.push((format!("prep_{i}"), prep_basis_circuit(i).expect("in range")));
    }
    let (system, _, ancilla) = CHOI_LAYOUT;
    out.push((
        "prep_psi_plus_system".to_string(),
        prep_max_entangled_circuit(6, system, ancilla).expect("static"),
    ));
    out
}

/// The manifest as a JSON object mapping names to circuits.
pub fn manifest_json() -> Result<String> {
    let map: serde_json::Map<String, serde_json::Value> = circuit_manifest()
        .into_iter()
        .map(|(k, c)| Ok((k, serde_json::to_value(&c)?)))
        .collect::<Result<_>>()?;
    Ok(serde_json::to_string_pretty(&map)?)
}

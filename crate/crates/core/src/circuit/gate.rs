use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::{c64, ComplexMatrix, ONE, ZERO};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    U1,
    U2,
    U3,
    X,
    Y,
    Z,
    H,
    #[serde(alias = "cx")]
    Cnot,
}

impl GateKind {
    pub fn param_count(self) -> usize {
        match self {
            GateKind::U1 => 1,
            GateKind::U2 => 2,
            GateKind::U3 => 3,
            _ => 0,
        }
    }

    pub fn arity(self) -> usize {
        if self == GateKind::Cnot {
            2
        } else {
            1
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GateKind::U1 => "u1",
            GateKind::U2 => "u2",
            GateKind::U3 => "u3",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::H => "h",
            GateKind::Cnot => "cnot",
        };
        f.write_str(s)
    }
}

/// A named gate with its angles (radians) and register indices.
///
/// For `Cnot`, `qubits = [control, target]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GateJson")]
pub struct Gate {
    name: GateKind,
    #[serde(default)]
    params: Vec<f64>,
    qubits: Vec<usize>,
}

#[derive(Deserialize)]
struct GateJson {
    name: GateKind,
    #[serde(default)]
    params: Vec<f64>,
    qubits: Vec<usize>,
}

impl TryFrom<GateJson> for Gate {
    type Error = Error;

    fn try_from(j: GateJson) -> Result<Self> {
        Gate::new(j.name, j.params, j.qubits)
    }
}

impl Gate {
    pub fn new(name: GateKind, params: Vec<f64>, qubits: Vec<usize>) -> Result<Self> {
        if params.len() != name.param_count() {
            return Err(Error::Arity {
                expected: name.param_count(),
                got: params.len(),
            });
        }
        if params.iter().any(|p| !p.is_finite()) {
            return Err(Error::Domain(format!("{name} has a non-finite angle")));
        }
        if qubits.len() != name.arity() {
            return Err(Error::Arity {
                expected: name.arity(),
                got: qubits.len(),
            });
        }
        if name.arity() == 2 && qubits[0] == qubits[1] {
            return Err(Error::Domain(format!(
                "{name} control and target coincide on qubit {}",
                qubits[0]
            )));
        }
        Ok(Gate { name, params, qubits })
    }

    fn one(name: GateKind, params: Vec<f64>, q: usize) -> Self {
        Gate {
            name,
            params,
            qubits: vec![q],
        }
    }

    pub fn u1(lambda: f64, q: usize) -> Self {
        Gate::one(GateKind::U1, vec![lambda], q)
    }

    pub fn u2(phi: f64, lambda: f64, q: usize) -> Self {
        Gate::one(GateKind::U2, vec![phi, lambda], q)
    }

    pub fn u3(theta: f64, phi: f64, lambda: f64, q: usize) -> Self {
        Gate::one(GateKind::U3, vec![theta, phi, lambda], q)
    }

    pub fn x(q: usize) -> Self {
        Gate::one(GateKind::X, vec![], q)
    }

    pub fn y(q: usize) -> Self {
        Gate::one(GateKind::Y, vec![], q)
    }

    pub fn z(q: usize) -> Self {
        Gate::one(GateKind::Z, vec![], q)
    }

    pub fn h(q: usize) -> Self {
        Gate::one(GateKind::H, vec![], q)
    }

    /// # Panics
    /// If `control == target`.
    pub fn cnot(control: usize, target: usize) -> Self {
        assert_ne!(control, target, "cnot control and target must differ");
        Gate {
            name: GateKind::Cnot,
            params: vec![],
            qubits: vec![control, target],
        }
    }

    pub fn name(&self) -> GateKind {
        self.name
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn is_cnot(&self) -> bool {
        self.name == GateKind::Cnot
    }

    /// The same gate on relabelled qubits.
    pub fn remapped(&self, map: impl Fn(usize) -> usize) -> Gate {
        Gate {
            name: self.name,
            params: self.params.clone(),
            qubits: self.qubits.iter().map(|&q| map(q)).collect(),
        }
    }
}

/// `U3(θ,φ,λ) = [[cos θ/2, −e^{iλ} sin θ/2], [e^{iφ} sin θ/2, e^{i(φ+λ)} cos θ/2]]`;
/// `Cnot` is the 4×4 controlled-X with the control as the high bit.
pub fn gate_matrix(g: &Gate) -> ComplexMatrix {
    let u3 = |theta: f64, phi: f64, lambda: f64| {
        let (s, c) = (theta / 2.0).sin_cos();
        ComplexMatrix::from_complex(&[
            &[c64(c, 0.0), -Complex::from_polar(s, lambda)],
            &[Complex::from_polar(s, phi), Complex::from_polar(c, phi + lambda)],
        ])
    };
    let p = &g.params;
    match g.name {
        GateKind::U3 => u3(p[0], p[1], p[2]),
        GateKind::U2 => u3(std::f64::consts::FRAC_PI_2, p[0], p[1]),
        GateKind::U1 => ComplexMatrix::diag(&[ONE, Complex::from_polar(1.0, p[0])]),
        GateKind::X => ComplexMatrix::from_complex(&[&[ZERO, ONE], &[ONE, ZERO]]),
        GateKind::Y => ComplexMatrix::from_complex(&[&[ZERO, c64(0.0, -1.0)], &[c64(0.0, 1.0), ZERO]]),
        GateKind::Z => ComplexMatrix::diag(&[ONE, -ONE]),
        GateKind::H => {
            let r = std::f64::consts::FRAC_1_SQRT_2;
            ComplexMatrix::from_real(&[&[r, r], &[r, -r]])
        }
        GateKind::Cnot => ComplexMatrix::from_real(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 1.0, 0.0],
        ]),
    }
}

type Complex = num_complex::Complex64;

/// An ordered gate list on `n_qubits` wires.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CircuitJson")]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

#[derive(Deserialize)]
struct CircuitJson {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl TryFrom<CircuitJson> for Circuit {
    type Error = Error;

    fn try_from(j: CircuitJson) -> Result<Self> {
        let mut c = Circuit::new(j.n_qubits)?;
        for g in j.gates {
            c.push(g)?;
        }
        Ok(c)
    }
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::Domain("a circuit needs at least one qubit".into()));
        }
        Ok(Circuit {
            n_qubits,
            gates: Vec::new(),
        })
    }

    pub fn from_gates(n_qubits: usize, gates: impl IntoIterator<Item = Gate>) -> Result<Self> {
        let mut c = Circuit::new(n_qubits)?;
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, g: Gate) -> Result<()> {
        if let Some(&q) = g.qubits.iter().find(|&&q| q >= self.n_qubits) {
            return Err(Error::Domain(format!(
                "{} on qubit {q} outside a {}-qubit register",
                g.name, self.n_qubits
            )));
        }
        self.gates.push(g);
        Ok(())
    }

    /// Appends `other`, sending its qubit `k` to `wires[k]`.
    pub fn append_mapped(&mut self, other: &Circuit, wires: &[usize]) -> Result<()> {
        if wires.len() != other.n_qubits {
            return Err(Error::Arity {
                expected: other.n_qubits,
                got: wires.len(),
            });
        }
        for g in &other.gates {
            self.push(g.remapped(|q| wires[q]))?;
        }
        Ok(())
    }

    /// Appends `other` on the same wires.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        let wires: Vec<usize> = (0..other.n_qubits).collect();
        self.append_mapped(other, &wires)
    }

    /// Copy of this circuit on a register of `n_qubits` wires, qubit `k` moved to `wires[k]`.
    pub fn embedded(&self, n_qubits: usize, wires: &[usize]) -> Result<Circuit> {
        let mut c = Circuit::new(n_qubits)?;
        c.append_mapped(self, wires)?;
        Ok(c)
    }

    pub fn cnot_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_cnot()).count()
    }

    pub fn count(&self, kind: GateKind) -> usize {
        self.gates.iter().filter(|g| g.name == kind).count()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Circuit> {
        Ok(serde_json::from_str(text)?)
    }
}

impl Extend<Gate> for Circuit {
    /// # Panics
    /// If a gate touches a qubit outside the register.
    fn extend<T: IntoIterator<Item = Gate>>(&mut self, iter: T) {
        for g in iter {
            self.push(g).expect("gate outside register");
        }
    }
}

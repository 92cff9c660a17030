//! Coupling maps and CNOT legalization: direction reversal with Hadamards and
//! relays through a shared neighbour for missing edges.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};

/// Where the qutrit pairs live on a device.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Placement {
    pub system: [usize; 2],
    pub env: [usize; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ancilla: Option<[usize; 2]>,
}

impl Placement {
    fn wires(&self) -> Vec<usize> {
        let mut w = vec![self.system[0], self.system[1], self.env[0], self.env[1]];
        if let Some(a) = self.ancilla {
            w.extend(a);
        }
        w
    }
}

/// Directed CNOT connectivity: `(c, t)` allows a CNOT with control `c` and target `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CouplingJson", into = "CouplingJson")]
pub struct CouplingMap {
    n_qubits: usize,
    edges: BTreeSet<(usize, usize)>,
    placement: Option<Placement>,
    physical: Option<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct CouplingJson {
    n_qubits: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    placement: Option<Placement>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    physical: Option<Vec<usize>>,
}

impl TryFrom<CouplingJson> for CouplingMap {
    type Error = Error;

    fn try_from(j: CouplingJson) -> Result<Self> {
        let mut m = CouplingMap::new(j.n_qubits, j.edges.iter().map(|e| (e[0], e[1])))?;
        if let Some(p) = j.placement {
            m = m.with_placement(p)?;
        }
        if let Some(phys) = j.physical {
            if phys.len() != m.n_qubits {
                return Err(Error::Parse("physical label list must cover every qubit".into()));
            }
            m.physical = Some(phys);
        }
        Ok(m)
    }
}

impl From<CouplingMap> for CouplingJson {
    fn from(m: CouplingMap) -> Self {
        CouplingJson {
            n_qubits: m.n_qubits,
            edges: m.edges.iter().map(|&(c, t)| [c, t]).collect(),
            placement: m.placement,
            physical: m.physical,
        }
    }
}

const IBMQX4: &str = include_str!("../data/ibmqx4.json");
const TOKYO: &str = include_str!("../data/tokyo.json");
const TOKYO6: &str = include_str!("../data/tokyo6.json");

/// Names accepted by [`CouplingMap::preset`].
pub const PRESETS: [&str; 3] = ["ibmqx4", "tokyo", "tokyo6"];

impl CouplingMap {
    pub fn new(n_qubits: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::Domain("coupling map needs at least one qubit".into()));
        }
        let mut set = BTreeSet::new();
        for (c, t) in edges {
            if c >= n_qubits || t >= n_qubits {
                return Err(Error::Domain(format!("edge ({c}, {t}) outside {n_qubits} qubits")));
            }
            if c == t {
                return Err(Error::Domain(format!("self-loop on qubit {c}")));
            }
            set.insert((c, t));
        }
        Ok(CouplingMap {
            n_qubits,
            edges: set,
            placement: None,
            physical: None,
        })
    }

    /// All-to-all connectivity in both directions.
    pub fn full(n_qubits: usize) -> Result<Self> {
        let edges = (0..n_qubits).flat_map(|c| (0..n_qubits).filter(move |&t| t != c).map(move |t| (c, t)));
        CouplingMap::new(n_qubits, edges)
    }

    /// Bundled maps: `ibmqx4` (5 qubits, directed), `tokyo` (20 qubits,
    /// bidirected) and `tokyo6` (a 6-qubit bidirected region of `tokyo`).
    pub fn preset(name: &str) -> Result<Self> {
        let text = match name {
            "ibmqx4" => IBMQX4,
            "tokyo" => TOKYO,
            "tokyo6" => TOKYO6,
            other => return Err(Error::Domain(format!("unknown coupling preset {other:?}"))),
        };
        Ok(serde_json::from_str(text)?)
    }

    /// A preset name or a path to a coupling-map JSON file.
    pub fn load(name_or_path: &str) -> Result<Self> {
        if PRESETS.contains(&name_or_path) {
            return CouplingMap::preset(name_or_path);
        }
        let text = std::fs::read_to_string(Path::new(name_or_path))
            .map_err(|e| Error::Parse(format!("cannot read coupling map {name_or_path}: {e}")))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn with_placement(mut self, p: Placement) -> Result<Self> {
        let wires = p.wires();
        for (i, &q) in wires.iter().enumerate() {
            if q >= self.n_qubits || wires[..i].contains(&q) {
                return Err(Error::Domain(format!("placement {p:?} does not fit the map")));
            }
        }
        self.placement = Some(p);
        Ok(self)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn placement(&self) -> Option<&Placement> {
        self.placement.as_ref()
    }

    /// Device labels of the map's qubits when it is a region of a larger device.
    pub fn physical_labels(&self) -> Option<&[usize]> {
        self.physical.as_deref()
    }

    pub fn has_edge(&self, control: usize, target: usize) -> bool {
        self.edges.contains(&(control, target))
    }

    pub fn connected(&self, a: usize, b: usize) -> bool {
        self.has_edge(a, b) || self.has_edge(b, a)
    }

    /// Qubits coupled to `q` in either direction, ascending.
    pub fn neighbors(&self, q: usize) -> Vec<usize> {
        (0..self.n_qubits).filter(|&m| m != q && self.connected(q, m)).collect()
    }

    /// Lowest-index qubit coupled to both `a` and `b`.
    pub fn common_neighbor(&self, a: usize, b: usize) -> Option<usize> {
        (0..self.n_qubits).find(|&m| m != a && m != b && self.connected(a, m) && self.connected(m, b))
    }
}

/// `CNOT(c→t)` built from `CNOT(t→c)` and four Hadamards.
pub fn reverse_cnot(control: usize, target: usize) -> Vec<Gate> {
    vec![
        Gate::h(control),
        Gate::h(target),
        Gate::cnot(target, control),
        Gate::h(control),
        Gate::h(target),
    ]
}

/// An illegal CNOT found by [`validate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub gate_index: usize,
    pub control: usize,
    pub target: usize,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "gate {}: cnot {} -> {} is not a coupling",
            self.gate_index, self.control, self.target
        )
    }
}

/// Every CNOT that is not a directed edge of `map` (or touches a qubit outside it).
pub fn validate(c: &Circuit, map: &CouplingMap) -> Vec<Violation> {
    c.gates()
        .iter()
        .enumerate()
        .filter(|(_, g)| g.is_cnot() && !map.has_edge(g.qubits()[0], g.qubits()[1]))
        .map(|(i, g)| Violation {
            gate_index: i,
            control: g.qubits()[0],
            target: g.qubits()[1],
        })
        .collect()
}

fn legal_cnot(control: usize, target: usize, map: &CouplingMap) -> Option<Vec<Gate>> {
    if map.has_edge(control, target) {
        Some(vec![Gate::cnot(control, target)])
    } else if map.has_edge(target, control) {
        Some(reverse_cnot(control, target))
    } else {
        None
    }
}

/// Rewrites every CNOT so it lies on a directed edge of `map`.
///
/// Reversed edges use [`reverse_cnot`]. A missing edge `(a, b)` goes through
/// the lowest-index common neighbour `m` as
/// `CNOT(a→m) CNOT(m→b) CNOT(a→m) CNOT(m→b)`, which is exact for any state of
/// `m`. Adjacent inverse pairs are cancelled afterwards. Qubit `k` of `c` is
/// qubit `k` of the map.
pub fn route_circuit(c: &Circuit, map: &CouplingMap) -> Result<Circuit> {
    if c.n_qubits() > map.n_qubits() {
        return Err(Error::Routing(format!(
            "circuit uses {} qubits, map has {}",
            c.n_qubits(),
            map.n_qubits()
        )));
    }
    let mut gates = Vec::with_capacity(c.len());
    for g in c.gates() {
        if !g.is_cnot() {
            gates.push(g.clone());
            continue;
        }
        let (a, b) = (g.qubits()[0], g.qubits()[1]);
        if let Some(frag) = legal_cnot(a, b, map) {
            gates.extend(frag);
            continue;
        }
        let m = map
            .common_neighbor(a, b)
            .ok_or_else(|| Error::Routing(format!("no coupling or shared neighbour for cnot {a} -> {b}")))?;
        for (x, y) in [(a, m), (m, b), (a, m), (m, b)] {
            gates.extend(legal_cnot(x, y, map).expect("neighbour is coupled"));
        }
    }
    Circuit::from_gates(map.n_qubits(), cancel_adjacent_inverses(gates))
}

fn self_inverse(g: &Gate) -> bool {
    matches!(
        g.name(),
        GateKind::X | GateKind::Y | GateKind::Z | GateKind::H | GateKind::Cnot
    )
}

/// Drops pairs of identical self-inverse gates with nothing between them on their wires.
pub fn cancel_adjacent_inverses(gates: Vec<Gate>) -> Vec<Gate> {
    let mut out: Vec<Gate> = Vec::with_capacity(gates.len());
    for g in gates {
        let prev = out
            .iter()
            .rposition(|p| p.qubits().iter().any(|q| g.qubits().contains(q)));
        if let Some(i) = prev {
            if self_inverse(&g) && out[i] == g {
                out.remove(i);
                continue;
            }
        }
        out.push(g);
    }
    out
}

/// Routes `c` after moving its qubit `k` to physical qubit `wires[k]`.
pub fn place_and_route(c: &Circuit, wires: &[usize], map: &CouplingMap) -> Result<Circuit> {
    if wires.iter().any(|&w| w >= map.n_qubits()) {
        return Err(Error::Routing(format!(
            "placement {wires:?} outside the {}-qubit map",
            map.n_qubits()
        )));
    }
    route_circuit(&c.embedded(map.n_qubits(), wires)?, map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::unitary_of;
    use crate::numkit::{equal_up_to_global_phase, ComplexMatrix};

    #[test]
    fn reverse_cnot_is_exact() {
        let frag = Circuit::from_gates(2, reverse_cnot(0, 1)).unwrap();
        let direct = Circuit::from_gates(2, [Gate::cnot(0, 1)]).unwrap();
        assert!(unitary_of(&frag)
            .unwrap()
            .approx_eq(&unitary_of(&direct).unwrap(), 1e-12));
        assert_eq!(frag.cnot_count(), 1);
        assert_eq!(frag.count(GateKind::H), 4);
        let out = crate::circuit::simulate_state(&frag, &ComplexMatrix::basis_ket(4, 0b10)).unwrap();
        assert!(out.approx_eq(&ComplexMatrix::basis_ket(4, 0b11), 1e-12));
    }

    #[test]
    fn presets_load() {
        let q = CouplingMap::preset("ibmqx4").unwrap();
        assert_eq!(q.n_qubits(), 5);
        assert_eq!(q.edges().len(), 6);
        assert!(q.has_edge(1, 0) && !q.has_edge(0, 1));
        assert_eq!(q.placement().unwrap().system, [3, 0]);
        let t = CouplingMap::preset("tokyo").unwrap();
        assert_eq!(t.n_qubits(), 20);
        assert!(t.edges().iter().all(|&(a, b)| t.has_edge(b, a)));
        let t6 = CouplingMap::preset("tokyo6").unwrap();
        let phys = t6.physical_labels().unwrap();
        for &(a, b) in t6.edges() {
            assert!(t.has_edge(phys[a], phys[b]));
        }
        assert!(CouplingMap::preset("nope").is_err());
    }

    #[test]
    fn legal_cnot_unchanged_and_flip() {
        let map = CouplingMap::preset("ibmqx4").unwrap();
        let c = Circuit::from_gates(5, [Gate::cnot(1, 0)]).unwrap();
        assert_eq!(route_circuit(&c, &map).unwrap(), c);
        let flipped = Circuit::from_gates(5, [Gate::cnot(0, 1)]).unwrap();
        let routed = route_circuit(&flipped, &map).unwrap();
        assert_eq!(routed.len(), 5);
        assert!(unitary_of(&routed)
            .unwrap()
            .approx_eq(&unitary_of(&flipped).unwrap(), 1e-12));
    }

    #[test]
    fn relay_through_neighbor() {
        let map = CouplingMap::preset("ibmqx4").unwrap();
        let c = Circuit::from_gates(5, [Gate::cnot(3, 0)]).unwrap();
        let routed = route_circuit(&c, &map).unwrap();
        assert!(validate(&routed, &map).is_empty());
        assert_eq!(routed.cnot_count(), 4);
        assert!(equal_up_to_global_phase(
            &unitary_of(&routed).unwrap(),
            &unitary_of(&c).unwrap(),
            1e-9
        ));
    }

    #[test]
    fn unroutable_is_routing_error() {
        let map = CouplingMap::new(4, [(0, 1), (2, 3)]).unwrap();
        let c = Circuit::from_gates(4, [Gate::cnot(0, 3)]).unwrap();
        assert!(matches!(route_circuit(&c, &map), Err(Error::Routing(_))));
    }

    #[test]
    fn validate_reports_violations() {
        let map = CouplingMap::preset("ibmqx4").unwrap();
        let ok = Circuit::from_gates(5, [Gate::cnot(2, 1), Gate::h(3)]).unwrap();
        assert!(validate(&ok, &map).is_empty());
        let bad = Circuit::from_gates(5, [Gate::h(0), Gate::cnot(0, 4)]).unwrap();
        assert_eq!(
            validate(&bad, &map),
            vec![Violation {
                gate_index: 1,
                control: 0,
                target: 4
            }]
        );
    }

    #[test]
    fn peephole_respects_intervening_gates() {
        let gates = vec![Gate::h(0), Gate::h(0), Gate::cnot(0, 1), Gate::x(1), Gate::cnot(0, 1)];
        assert_eq!(cancel_adjacent_inverses(gates).len(), 3);
        let gates = vec![Gate::cnot(0, 1), Gate::x(2), Gate::cnot(0, 1)];
        assert_eq!(cancel_adjacent_inverses(gates), vec![Gate::x(2)]);
    }

    #[test]
    fn map_validation() {
        assert!(CouplingMap::new(2, [(0, 0)]).is_err());
        assert!(CouplingMap::new(2, [(0, 2)]).is_err());
        let m = CouplingMap::new(3, [(0, 1)]).unwrap();
        let p = Placement {
            system: [0, 1],
            env: [2, 3],
            ancilla: None,
        };
        assert!(m.with_placement(p).is_err());
        let text = serde_json::to_string(&CouplingMap::preset("ibmqx4").unwrap()).unwrap();
        assert_eq!(
            serde_json::from_str::<CouplingMap>(&text).unwrap(),
            CouplingMap::preset("ibmqx4").unwrap()
        );
    }
}

//! Gate-list circuits, exact state-vector and density-matrix simulation,
//! gate-level noise and shot sampling.
//!
//! Qubit 0 is the most significant bit of every basis label: on two qubits
//! `|q0 q1⟩ = |10⟩` is index 2.

mod gate;
mod noise;
mod sampling;
mod sim;

pub use gate::{gate_matrix, Circuit, Gate, GateKind};
pub use noise::NoiseConfig;
pub use sampling::{apply_readout_flip, born_probabilities, rng_for, sample_counts, sample_distribution, Counts};
pub(crate) use sim::evolve_density;
pub use sim::{simulate_density, simulate_state, unitary_of, MAX_UNITARY_QUBITS};

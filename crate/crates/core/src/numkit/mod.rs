//! Dense complex linear algebra shared by every other module.

mod eig;
mod matrix;
mod random;

pub use eig::{
    eigvalsh, hermitian_eig, is_psd, is_unitary, project_to_density, project_to_simplex, roundoff_floor, sqrtm_psd,
    validate_density, HermitianEig,
};
pub use matrix::{
    c64, equal_up_to_global_phase, kron, kron_all, partial_trace, permute_qubits, reduce_qubits, ComplexMatrix,
    MatrixJson, Tolerance, I, ONE, ZERO,
};
pub use random::{random_density, random_ket};

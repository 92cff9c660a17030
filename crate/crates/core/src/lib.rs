//! Qutrit Landau-Streater and Werner-Holevo channels realized on qubit
//! registers: analytic channel models, circuit constructions, a density-matrix
//! simulator with gate noise, state tomography and Choi reconstruction.

pub mod channel;
pub mod choi;
pub mod circuit;
pub mod decomp;
pub mod error;
pub mod layout;
pub mod numkit;
pub mod qutrit;
pub mod tomography;

pub use error::{Error, Result};
pub use num_complex::Complex64;

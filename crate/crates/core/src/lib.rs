//! Loop-propagator and high-temperature series engine for the Ising model on
//! the plane-triangular and simple-cubic lattices, with brute-force oracles.

pub mod cli;
pub mod config;
pub mod error;
pub mod golden;
pub mod ht_expansion;
pub mod oracle;
pub mod ring;
pub mod sc_series;
pub mod pt_solver;
pub mod report;
pub mod walker;

pub use error::{Error, Result};

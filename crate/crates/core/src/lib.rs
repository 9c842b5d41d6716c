//! Exactly solvable pure-dephasing dynamics of open quantum systems.
//!
//! A system Hamiltonian `H` and a coupling operator `L` that commute are
//! driven by a harmonic bath. The time-local master equation then has a
//! closed-form solution, which [`dynamics::exact_propagate`] evaluates and
//! [`dynamics::integrate_master_equation`] checks by brute-force RK4.
//! The [`twoqubit`] module specialises everything to two Ising-coupled
//! qubits with collective dephasing `L = σ_z^A + σ_z^B` and tracks how
//! concurrence and single-qubit coherence decay.

pub mod bath;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod quadrature;
pub mod twoqubit;

pub use error::{Error, Result};

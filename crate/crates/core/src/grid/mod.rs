//! Finite-difference discretization of `H = κp² + V(x)` on a truncated
//! interval and its numerical spectrum.

pub mod band;
pub mod convergence;
pub mod eigen;
pub mod hamiltonian;
pub mod matrix;
pub mod spectrum;

pub use convergence::{convergence_study, ConvergenceTable};
pub use eigen::{eig_general, EigenDecomposition};
pub use hamiltonian::{build_hamiltonian, Discretization, FdOrder};
pub use matrix::ComplexMatrix;
pub use spectrum::{solve_spectrum, SpectrumResult};

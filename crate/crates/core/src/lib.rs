pub mod cli;
pub mod error;
pub mod grid;
pub mod orthogonality;
pub mod potential;
pub mod quadrature;
pub mod shift;
pub mod special;
pub mod spectra;

pub use error::{Error, Result};

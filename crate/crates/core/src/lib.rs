//! Solitary waves of the NLS, 1D Soler (nonlinear Dirac) and NLW equations,
//! their linearizations, spectra and stability diagnostics.

pub mod app;
pub mod config;
pub mod derrick;
pub mod error;
pub mod grid;
pub mod io;
pub mod nonlinearity;
pub mod operators;
pub mod profiles;
pub mod spectra;
pub mod stability;
pub mod symmetry;

pub use error::{Error, Result};
pub use grid::{Grid1D, Scheme};
pub use nonlinearity::{NonlinearityModel, WaveNonlinearity};
pub use profiles::{Equation, SolitaryWaveProfile, SolverOptions};

//! Quantized periodic harmonic chain: normal-mode decomposition, Fock-state
//! algebra, position-space wavefunctions and Monte Carlo parallel-axes
//! rendering.
//!
//! The usual pipeline is
//! [`ChainParams`] → [`ModeBasis`] → [`FockState`] → [`EvalContext`] →
//! [`SampleBatch`] → [`render`].

pub mod chain;
pub mod color;
pub mod error;
pub mod fock;
pub mod par;
pub mod psi;
pub mod render;
pub mod sample;

pub use chain::{
    build_coupling_matrix, mode_spectrum, real_mode_basis, ChainParams, ModeBasis, ModeIndex,
};
pub use error::{Error, Result};
pub use fock::{energy_eigenvalue, FockState, Occupation};
pub use par::Execution;
pub use psi::{
    eigenfunction_1d, evaluate, hamiltonian_residual, hermite_phys, EvalContext, Oscillator2d,
    Oscillator2dState, Wavefunction,
};
pub use render::{render, render_parallel_axes, render_scatter2d};
pub use sample::{
    default_window, draw_samples, ColorMode, OutputFormat, PlotMode, RenderSpec, SampleBatch,
};

pub use num_complex::Complex64;

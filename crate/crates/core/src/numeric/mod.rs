//! Grid-based numerical machinery used to verify the analytic construction independently:
//! root bracketing, cumulative quadrature, a tridiagonal Schrödinger eigensolver
//! (Sturm-sequence bisection plus inverse iteration), residuals, node counting and a
//! normalizability probe.

mod grid;
mod probe;
mod quadrature;
mod residual;
mod roots;
mod tridiag;

use thiserror::Error;

pub use grid::Grid;
pub use probe::{norm_growth_probe, ProbeVerdict};
pub use quadrature::{cumulative_integral, cumulative_integral_samples};
pub use residual::{count_nodes, derivative_7pt, schrodinger_residual};
pub use roots::{find_zero, scan_sign_changes, SCAN_SUBINTERVALS};
pub use tridiag::{
    discretize, lowest_eigenpairs, lowest_eigenvalues, lowest_eigenvalues_with, sturm_count,
    SpectrumResult, TridiagonalOperator,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("no sign change on [{a}, {b}]")]
    NoSignChange { a: f64, b: f64 },
    #[error("{count} sign changes found on [{a}, {b}], expected exactly one")]
    MultipleZeros { count: usize, a: f64, b: f64 },
    #[error("non-finite sample at index {index} (x = {x})")]
    NonFiniteSample { index: usize, x: f64 },
    #[error("non-finite potential at x = {x}")]
    NonFinitePotential { x: f64 },
    #[error("eigenvalue {index} not resolved to tolerance (bracket width {width:e})")]
    ToleranceNotReached { index: usize, width: f64 },
    #[error("norm growth probe inconclusive: increment ratios {ratios:?}")]
    Inconclusive { ratios: Vec<f64> },
    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, NumericError>;

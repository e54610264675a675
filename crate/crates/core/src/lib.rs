//! Quadratic integral functionals `∫ρ ξ² dt` of the Wiener process `ξ`
//! with a signed weight `ρ`.
//!
//! The crate computes the norms of `ρ` that control such functionals, the
//! spectrum of the boundary problem `-y'' = λ ρ y`, `y(0) = 0`, and the law
//! of the functional as the chi-square series `Σ ζ_n² / λ_n`. It also builds
//! comb weights for which `Σ |1/λ_n|` diverges while `Σ 1/λ_n²` stays finite.
//!
//! Numerical code is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix `f64`.

pub mod cli;
pub mod error;
pub mod klbasis;
pub mod linalg;
pub mod measure;
pub mod nonnuclear;
pub mod quadform;
pub mod report;
pub mod sampling;
pub mod scalar;
pub mod spectral;

pub use error::{Error, Result};
pub use measure::{combine, dstar_inner, dstar_norm, m_norm_sq, Atom, Density, MeasureSpec};
pub use quadform::{ChiSquareSeries, MomentSummary};
pub use scalar::Real;
pub use spectral::{BoundaryCondition, Method};

pub type Measure = measure::SignedMeasure<f64>;
pub type Measure32 = measure::SignedMeasure<f32>;
pub type Primitive = measure::Primitive<f64>;
pub type Spectrum = spectral::Spectrum<f64>;
pub type EigenPair = spectral::EigenPair<f64>;
pub type EigenProblem = spectral::EigenProblem<f64>;
pub type CoeffMatrix = linalg::SymMatrix<f64>;

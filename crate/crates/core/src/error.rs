use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("cutoff {cutoff} requires {needed} modes but the ensemble has {modes}")]
    CutoffExceedsModes {
        cutoff: usize,
        needed: usize,
        modes: usize,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("eigenvalue window must be positive, got {0}")]
    InvalidWindow(f64),
    #[error("lambda = {lambda} is not an eigenvalue (boundary residual {residual:e})")]
    NotAnEigenvalue { lambda: f64, residual: f64 },
    #[error("spectrum contains a zero eigenvalue")]
    ZeroEigenvalue,
    #[error("spectrum is flagged for suspected multiplicities; refusing to build a series")]
    MultiplicitySuspected,
    #[error("spectrum is empty")]
    EmptySpectrum,
    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("diagonal entry {index} is {value}, expected zero")]
    NonzeroDiagonal { index: usize, value: f64 },
    #[error("all weights are zero")]
    DegenerateWeights,
    #[error("sample is empty")]
    EmptySample,
    #[error("iteration cap of {0} reached")]
    IterationCap(usize),
    #[error("json: {0}")]
    Json(String),
    #[error("io: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable tag.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidMeasure(_) => "invalid_measure",
            Error::CutoffExceedsModes { .. } => "cutoff_exceeds_modes",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::InvalidWindow(_) => "invalid_window",
            Error::NotAnEigenvalue { .. } => "not_an_eigenvalue",
            Error::ZeroEigenvalue => "zero_eigenvalue",
            Error::MultiplicitySuspected => "multiplicity_suspected",
            Error::EmptySpectrum => "empty_spectrum",
            Error::NotSymmetric { .. } => "not_symmetric",
            Error::NonzeroDiagonal { .. } => "nonzero_diagonal",
            Error::DegenerateWeights => "degenerate_weights",
            Error::EmptySample => "empty_sample",
            Error::IterationCap(_) => "iteration_cap",
            Error::Json(_) => "json",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

//! Crate-wide error type.

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across the lattice, action, game,
/// amplitude, and reference modules.
///
/// The CLI maps these onto process exit codes: domain errors exit 1,
/// numerical failures ([`Error::NoConvergence`]) exit 2, I/O exits 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("path enumeration would produce {predicted} paths, above the cap of {max_paths}")]
    PathExplosion { predicted: u128, max_paths: u64 },

    #[error(
        "no path connects site {start} to site {end} in {steps} steps with branching {branching}"
    )]
    InfeasibleEndpoints {
        start: i64,
        end: i64,
        steps: usize,
        branching: u32,
    },

    #[error("step {index} moves {delta} sites, outside the momentum window ±{max_level}")]
    StepOutOfRange {
        index: usize,
        delta: i64,
        max_level: i64,
    },

    #[error("potential table has no entry for grid index {index}")]
    ModelDomain { index: i64 },

    #[error("action matrix would be {n}x{n}, above the cap of {cap}")]
    MatrixTooLarge { n: usize, cap: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("solver did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("generator index {index} out of range 1..={num_generators}")]
    IndexOutOfRange { index: usize, num_generators: usize },

    #[error("operands live in algebras with {left} and {right} generators")]
    GeneratorMismatch { left: usize, right: usize },

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("caustic: |sin(omega*T)| = {sin_abs:.3e} is numerically zero")]
    Caustic { sin_abs: f64 },

    #[error("grid mismatch: inner dimensions {left} vs {right}")]
    GridMismatch { left: usize, right: usize },

    #[error("mixed-path pair uses {found:?} normalization where {expected:?} is required")]
    WrongNormMode {
        expected: crate::game::NormMode,
        found: crate::game::NormMode,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code the CLI reports for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NoConvergence { .. } => 2,
            Error::Io(_) => 3,
            _ => 1,
        }
    }

    /// Short machine-readable tag for JSON diagnostics.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::InvalidSpec(_) => "InvalidSpec",
            Error::PathExplosion { .. } => "PathExplosion",
            Error::InfeasibleEndpoints { .. } => "InfeasibleEndpoints",
            Error::StepOutOfRange { .. } => "StepOutOfRange",
            Error::ModelDomain { .. } => "ModelDomain",
            Error::MatrixTooLarge { .. } => "MatrixTooLarge",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::GeneratorMismatch { .. } => "GeneratorMismatch",
            Error::DomainError(_) => "DomainError",
            Error::Caustic { .. } => "Caustic",
            Error::GridMismatch { .. } => "GridMismatch",
            Error::WrongNormMode { .. } => "WrongNormMode",
            Error::Config(_) => "Config",
            Error::Io(_) => "Io",
        }
    }
}

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("variable index {index} out of range for ambient n={n}")]
    VariableOutOfRange { index: usize, n: usize },

    #[error("ambient mismatch: n={left} vs n={right}")]
    AmbientMismatch { left: usize, right: usize },

    #[error("operation `{0}` is undefined on the zero polynomial")]
    ZeroPolynomial(&'static str),

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("polynomial is not isobaric")]
    NotIsobaric,

    #[error("polynomial is not annihilated by the derivation")]
    NotInKernel,

    #[error("level {level} exceeds the admissible bound {bound}")]
    LevelOutOfRange { level: usize, bound: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("modules are not dual")]
    NotDual,

    #[error("module matrix does not describe the action of the derivation on basis element {0}")]
    ActionMismatch(usize),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

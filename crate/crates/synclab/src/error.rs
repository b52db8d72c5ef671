use thiserror::Error;

/// Errors reported by the synchronization-subspace toolkit.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: |A - A'| = {deviation:.3e} exceeds threshold {threshold:.3e}")]
    NotHermitian { deviation: f64, threshold: f64 },

    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("initial state lies outside ker(K): residual {residual:.3e} exceeds threshold {threshold:.3e}")]
    NotInKernel { residual: f64, threshold: f64 },

    #[error("total tensor dimension {dim} exceeds the configured cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("multiplicity of irrep `{label}` is not integral: raw value {raw} (residual {residual:.3e})")]
    NonIntegerMultiplicity {
        label: String,
        raw: f64,
        residual: f64,
    },

    #[error("invalid representation: {reason} (violation {violation:.3e})")]
    InvalidRep { reason: String, violation: f64 },

    #[error("representations belong to different groups")]
    GroupMismatch,

    #[error("irrep label mismatch: {0}")]
    LabelMismatch(String),

    #[error("representation is not multiplicity-free: irrep `{label}` occurs {multiplicity} times")]
    MultiplicityNotFree { label: String, multiplicity: usize },

    #[error("observable is not G-equivariant: commutator norm {violation:.3e} exceeds {threshold:.3e}")]
    NotEquivariant { violation: f64, threshold: f64 },

    #[error("invalid group data: {0}")]
    InvalidGroup(String),

    #[error("invalid character table: {0}")]
    InvalidIrrepTable(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numerical check failed in {context}: residual {residual:.3e} exceeds {threshold:.3e}")]
    NumericalFailure {
        context: String,
        residual: f64,
        threshold: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("amplitude vector has zero norm")]
    ZeroVector,

    #[error("amplitude length {actual} does not match layout dimension {expected}")]
    LayoutMismatch { expected: usize, actual: usize },

    #[error("register '{0}' is not part of the layout")]
    UnknownRegister(String),

    #[error("register '{0}' already exists")]
    DuplicateRegister(String),

    #[error("outcome {outcome} is out of range for register '{register}' of dimension {dim}")]
    InvalidOutcome { register: String, outcome: usize, dim: usize },

    #[error("rotation amplitude {value} at basis index {index} is outside [-1, 1]")]
    RotationOutOfRange { index: usize, value: f64 },

    #[error("post-selected branch is empty (probability {probability:e})")]
    EmptyBranch { probability: f64 },

    #[error("vector length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("eigenvector matrix is not orthonormal (max deviation {0:e})")]
    NotOrthonormal(f64),

    #[error("eigenvalue {value} is outside [{lo}, {hi}]")]
    EigenvalueOutOfRange { value: f64, lo: f64, hi: f64 },

    #[error("input vector is not unit norm (norm {0})")]
    NotUnitNorm(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("CSV parse error: {0}")]
    Parse(String),

    #[error("row {row} has zero norm and cannot be normalized")]
    ZeroRow { row: usize },

    #[error("need at least 2 samples, got {0}")]
    TooFewSamples(usize),

    #[error("sample count {0} is not a power of two; truncate or augment the training set")]
    SamplesNotPowerOfTwo(usize),

    #[error("training rows are not unit-normalized; quantum pipelines require normalized data")]
    RowsNotNormalized,

    #[error("feature column {column} has variance {variance:e} below the floor {floor:e}")]
    DegenerateFeature { column: usize, variance: f64, floor: f64 },

    #[error("covariance is rank deficient: eigenvalue {eigenvalue:e} below floor {floor:e}")]
    RankDeficient { eigenvalue: f64, floor: f64 },

    #[error("ln sigma of feature {column} = {value} lies outside bounds [{lo}, {hi}]")]
    OutOfBounds { column: usize, value: f64, lo: f64, hi: f64 },

    #[error("every phase-estimation component fell below 1/kappa; nothing left to invert")]
    AllWeightDiscarded,
}

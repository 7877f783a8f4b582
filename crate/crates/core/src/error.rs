use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by lattice, Mukai-algebra, chamber, and criterion operations.
///
/// Scalar payloads are carried as strings so the enum stays independent of
/// the scalar type parameter.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vector has length {got}, lattice has rank {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("gram matrix is not square: {rows} rows, row {row} has {cols} entries")]
    NotSquare { rows: usize, row: usize, cols: usize },
    #[error("gram matrix is not symmetric at ({row},{col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("gram matrix is empty")]
    EmptyGram,
    #[error("operation requires a nonzero vector")]
    ZeroVector,
    #[error("saturation requires at least one generator")]
    EmptyGenerators,
    #[error("saturation requires a nonzero generator")]
    AllGeneratorsZero,
    #[error("reflection root must have norm -2, got {norm}")]
    RootNormNotMinusTwo { norm: String },
    #[error("twist class has odd norm {norm}; the ambient lattice must be even")]
    OddNormTwist { norm: String },
    #[error("Euler characteristic of a line bundle needs an even self-intersection, got {norm}")]
    OddNormChi { norm: String },
    #[error("chain requires H^2 = 8, got {norm}")]
    PolarizationNormNotEight { norm: String },
    #[error("chain requires (H+2D)^2 = {expected}, got {got}")]
    ChainNormMismatch { expected: i64, got: String },
    #[error("certificate missing or failed: {which}")]
    BadCertificate { which: &'static str },
    #[error("chain step {step} is inconsistent: {reason}")]
    ChainStep { step: usize, reason: &'static str },
    #[error("h1 - H has an odd coordinate at index {index}: counterexample to the h1 = H + 2D bridge")]
    BridgeOddCoordinate { index: usize },
    #[error("normalization requires D^2 + H·D = -3, got {got}")]
    NormalizePrecondition { got: String },
    #[error("root orientation is ambiguous: the reference class lies on the wall")]
    AmbiguousOrientation,
    #[error("nef certification requires norm >= 0, got {norm}")]
    NegativeNormNefTest { norm: String },
    #[error("wall generator is only defined in rank 2, got rank {rank}")]
    WallGeneratorRank { rank: usize },
    #[error("wall generator requires a negative-norm class, got {norm}")]
    WallGeneratorNorm { norm: String },
    #[error("pseudo-effectivity test requires norm -4, got {norm}")]
    EffectivityNorm { norm: String },
    #[error("orbit seed fails the witness conditions: {reason}")]
    OrbitSeed { reason: &'static str },
    #[error("input rejected: {reason}")]
    InvalidInput { reason: String },
}

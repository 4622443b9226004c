use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty root system: rank must be at least 1")]
    EmptySystem,

    #[error("type {label}{rank} is not a valid finite-type label")]
    InvalidType { label: String, rank: usize },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),

    #[error("inconsistent multiplicities: {0}")]
    InconsistentMultiplicities(String),

    #[error(
        "dimension identity fails for `{name}`: dim g = {dim_g} but dim m + rank + 2 sum m(gamma) = {computed}"
    )]
    DimensionIdentity {
        name: String,
        dim_g: usize,
        computed: usize,
    },

    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("weight is not dominant")]
    NotDominant,

    #[error("weight is not integral: fundamental-weight coefficient {0} is not an integer")]
    NotIntegral(String),

    #[error("operation requires a split real form (restricted = absolute root system)")]
    NotSplit,

    #[error("{0}")]
    NotSpherical(String),

    #[error("subset {0} is not E0-connected")]
    NotE0Connected(String),

    #[error("simple-root index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("real-form metadata (dim g, dim k, dim m) is required")]
    MissingMetadata,

    #[error("the chamber face for E = all simple roots is the zero space; no interior sample exists")]
    EmptyFace,

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("predicted dimension {dim} exceeds the cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("numerical rank ambiguous: singular value ratio {ratio:e} lies in the band [{lo:e}, {hi:e}]")]
    RankAmbiguous { ratio: f64, lo: f64, hi: f64 },

    #[error("irrep construction produced dimension {built}, Weyl dimension formula gives {expected}")]
    IrrepDimension { built: usize, expected: usize },

    #[error("K-fixed space has dimension {0} (at most 1 expected in an irreducible representation)")]
    KFixedDimension(usize),

    #[error("matrix is not in sl(n): {0}")]
    NotTraceless(String),

    #[error("matrix is not in SL(n): det = {0}")]
    NotUnimodular(f64),

    #[error("representation has no K-fixed vector")]
    NoKFixedVector,

    #[error("direction H is not admissible: {0}")]
    BadDirection(String),

    #[error("point lies outside the affine chart: <v, e> = {0:e}")]
    OutsideChart(f64),

    #[error("Monte Carlo average inconsistent with sphericity: norm {norm:e}, noise floor {floor:e}, spherical = {spherical}")]
    NoiseFloor {
        norm: f64,
        floor: f64,
        spherical: bool,
    },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

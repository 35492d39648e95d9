//! Error types, one enum per module plus a crate-wide umbrella.

use thiserror::Error;

/// Exact-arithmetic and orbit-walk failures.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum TripleError {
    #[error("integer overflow in exact triple arithmetic")]
    Overflow,
    #[error("invalid query triple ({d},{n},{r}): {reason}")]
    InvalidQuery {
        d: i128,
        n: i128,
        r: i128,
        reason: &'static str,
    },
    /// The minimal-point search terminates well before the cap on every
    /// valid input; hitting it indicates a logic error, not bad data.
    #[error("orbit walk exceeded the step cap {cap}; this is an internal error")]
    WalkCap { cap: u32 },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("cyclic factor modulus must be >= 1, got {0}")]
    InvalidModulus(u64),
    #[error("group order {order} exceeds the cap {cap}")]
    OrderCap { order: u64, cap: u64 },
    #[error("element has {got} coordinates, group has {expected} factors")]
    CoordLength { expected: usize, got: usize },
    #[error("coordinate {value} out of range for modulus {modulus}")]
    CoordRange { value: u64, modulus: u64 },
    #[error("vector length {got} does not match group order {expected}")]
    VectorLength { expected: usize, got: usize },
    #[error("element set is not a subgroup: {reason}")]
    NotASubgroup { reason: &'static str },
    #[error("elements belong to different groups")]
    MismatchedParents,
    #[error("cannot parse group literal {0:?}")]
    BadLiteral(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DesignError {
    #[error("a difference family needs at least one block")]
    EmptyFamily,
    #[error("blocks must share one size: found {first} and {other}")]
    UnequalBlockSizes { first: usize, other: usize },
    #[error("block size must be at least 2, got {0}")]
    BlockTooSmall(usize),
    #[error("block contains a repeated element")]
    RepeatedElement,
    #[error("set may not be empty")]
    EmptySet,
    #[error("block count lambda(v-1)/(k(k-1)) = {lambda}*{vm1}/{kk} is not a positive integer")]
    NonIntegralBlockCount { lambda: u64, vm1: u64, kk: u64 },
    #[error("search group order {v} exceeds the cap {cap}")]
    SearchCap { v: u64, cap: u64 },
    #[error("incidence structure is not a BIBD: {0}")]
    InvalidBibd(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Error)]
pub enum FrameError {
    #[error("block {index} is {rows}x{cols}, expected {exp_rows}x{exp_cols}")]
    ShapeMismatch {
        index: usize,
        rows: usize,
        cols: usize,
        exp_rows: usize,
        exp_cols: usize,
    },
    #[error("block {index} columns are not orthonormal (deviation {deviation:.3e})")]
    NonOrthonormal { index: usize, deviation: f64 },
    #[error("frame tagged real has imaginary parts up to {max_imag:.3e}")]
    NotReal { max_imag: f64 },
    #[error("frame is not tight (residual {residual:.3e})")]
    NotTight { residual: f64 },
    #[error("D = NR leaves no Naimark complement")]
    NoNaimarkComplement,
    #[error("R = D leaves no spatial complement")]
    NoSpatialComplement,
    #[error("subspace ranks differ: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("direct sum needs equal block counts: {0} vs {1}")]
    BlockCountMismatch(usize, usize),
    #[error("direct sum needs R1/D1 = R2/D2 exactly: {r1}/{d1} vs {r2}/{d2}")]
    RatioMismatch {
        d1: usize,
        r1: usize,
        d2: usize,
        r2: usize,
    },
    #[error("trivial construction needs R = D/N or R = D, got ({d},{n},{r})")]
    NotTrivialShape { d: i128, n: i128, r: i128 },
    #[error("real variant requires even R (R = {0}): a real EITFF(2R,4,R) exists if and only if R is even")]
    OddRealR(u32),
    #[error("eigenvalue split produced rank {got}, expected {expected}")]
    NumericalRank { expected: usize, got: usize },
    #[error("frame JSON: {0}")]
    Json(String),
    #[error("need at least {need} blocks, got {got}")]
    TooFewBlocks { need: usize, got: usize },
}

#[derive(Debug, Error)]
pub enum HarmonicError {
    #[error("subset may not be empty")]
    EmptySubset,
    #[error(
        "subset meets coset of {rep_a} in {card_a} elements but coset of {rep_b} in {card_b}; \
         blocks would not be orthonormal"
    )]
    NonConstantCosetCardinality {
        rep_a: String,
        card_a: usize,
        rep_b: String,
        card_b: usize,
    },
    #[error("combinatorial flag {flag} = {combinatorial} disagrees with numerical verification {numerical}")]
    FlagDisagreement {
        flag: &'static str,
        combinatorial: bool,
        numerical: bool,
    },
    #[error("cross-block inner products are not constant-modulus: expected |.|^2 = {expected:.6e}, found {got:.6e}")]
    NonConstantModulus { expected: f64, got: f64 },
    #[error("divisible difference set is not semiregular")]
    NotSemiregular,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error(transparent)]
    Frame(#[from] FrameError),
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown rule id {0:?}")]
    UnknownRule(String),
    #[error("catalog data: {0}")]
    BadData(String),
    #[error("invalid certification query ({d},{n},{r}): {reason}")]
    InvalidQuery {
        d: i128,
        n: i128,
        r: i128,
        reason: &'static str,
    },
    #[error(transparent)]
    Triple(#[from] TripleError),
}

/// Crate-wide umbrella error.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Triple(#[from] TripleError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Harmonic(#[from] HarmonicError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

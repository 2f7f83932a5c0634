use thiserror::Error;

/// Errors surfaced by the engine. `InvalidInput`-style variants map to CLI
/// exit status 2, mathematical failures to status 1.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix shapes incompatible: {0}")]
    ShapeMismatch(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("division by zero in field arithmetic")]
    DivisionByZero,

    #[error("operation {op} is not defined over {field}")]
    UnsupportedField { op: &'static str, field: String },

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("rewriting budget exceeded while normalizing a product (non-confluent relations?)")]
    RewriteBudgetExceeded,

    #[error("multiplication table is not associative at basis triple ({i}, {j}, {k})")]
    NotAssociative { i: usize, j: usize, k: usize },

    #[error("multiplication table is not commutative at basis pair ({i}, {j})")]
    NotCommutative { i: usize, j: usize },

    #[error("unit vector is not a two-sided unit at basis index {0}")]
    BadUnit(usize),

    #[error("counit is not an algebra map: {0}")]
    BadCounit(String),

    #[error("subspace is not an ideal: basis vector {vec} times basis element {by} leaves the span")]
    NotAnIdeal { vec: usize, by: usize },

    #[error("Hopf axiom failed: {axiom} at basis index {index}")]
    HopfAxiom { axiom: &'static str, index: usize },

    #[error("subgroup data invalid: {0}")]
    BadSubgroup(String),

    #[error("cocycle table invalid: {0}")]
    BadCocycle(String),

    #[error("extension is not cleft: product defect at basis pair ({i}, {j}) is not in the image of τ·φ")]
    NotCleft { i: usize, j: usize },

    #[error("Hopf algebra is not local (augmentation ideal is not nilpotent)")]
    NotLocal,

    #[error("decomposition verification failed: {0}")]
    DecompositionFailed(String),

    #[error("input exceeds supported size: augmentation ideal dimension {dim} > {max}")]
    TooLarge { dim: usize, max: usize },

    #[error("linear system has no solution")]
    NoSolution,

    #[error("cannot parse scalar {text:?} over {field}")]
    BadScalar { text: String, field: String },

    #[error("JSON error: {0}")]
    Json(String),

    #[error("I/O error reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("corpus entry {id}: {msg}")]
    Corpus { id: String, msg: String },

    #[error("{0}")]
    InvalidInput(String),
}

impl Error {
    /// True for errors that indicate bad user input rather than a failed
    /// mathematical check; the CLI maps these to exit status 2.
    pub fn is_input_error(&self) -> bool {
        !matches!(
            self,
            Error::NotCleft { .. }
                | Error::DecompositionFailed(_)
                | Error::NotLocal
                | Error::BadCocycle(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

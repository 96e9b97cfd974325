//! Crate-wide error type.

use thiserror::Error;

/// Errors reported by construction, evaluation and I/O routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("unknown id `{0}`")]
    UnknownId(String),
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("reserved id `{0}`")]
    ReservedId(String),
    #[error("duplicate generator: `{0}` and `{1}` canonicalize to the same partition")]
    DuplicateGenerator(String, String),
    #[error("invalid arrow {from} -> {to}: {reason}")]
    InvalidArrow {
        from: String,
        to: String,
        reason: String,
    },
    #[error("inconsistent composites: paths {from} -> {to} disagree")]
    InconsistentComposite { from: String, to: String },
    #[error("ambiguous meet of `{x}` and `{y}`: maximal common refinements {candidates:?}")]
    AmbiguousMeet {
        x: String,
        y: String,
        candidates: Vec<String>,
    },
    #[error("no meet of `{x}` and `{y}` in the structure")]
    MissingMeet { x: String, y: String },
    #[error("terminal object expected to have exactly one value, `{0}` has {1}")]
    BadTerminal(String, usize),
    #[error("invalid law: {0}")]
    InvalidLaw(String),
    #[error("law not on the denominator-{n} grid of `{var}`: {law}")]
    LawOffGrid { var: String, law: String, n: u32 },
    #[error("support family for `{0}` is empty or exceeds the value set")]
    InvalidSupport(String),
    #[error("probability family not adapted: {0}")]
    NotAdapted(String),
    #[error("cochain degree {0} exceeds the configured maximum {1}")]
    DegreeCap(usize, usize),
    #[error("cochain table missing tuple [{0}]")]
    MissingTuple(String),
    #[error("variable `{0}` is terminal; operation needs a non-terminal variable")]
    TerminalOperand(String),
    #[error("morphism invalid: {0}")]
    InvalidMorphism(String),
    #[error("id clash between summands: `{0}` appears on both sides; rename required")]
    IdClash(String),
    #[error("model obstruction: {0}")]
    ModelObstruction(String),
    #[error("matrix is not in PGL2(Z) with determinant +-1: {0}")]
    BadMatrix(String),
    #[error("orbit target must be a reduced fraction, got {p}/{q}")]
    NotReduced { p: i64, q: i64 },
    #[error("input error: {0}")]
    Input(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

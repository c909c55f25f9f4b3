use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("input graph is disconnected; component representatives: {representatives:?}")]
    DisconnectedInput { representatives: Vec<u32> },

    #[error("vertex {v} out of range (n = {n})")]
    VertexOutOfRange { v: u32, n: usize },

    #[error("explicit hypergraph storage refused: n = {n} exceeds cap {cap}")]
    SizeGuardExceeded { n: usize, cap: usize },

    #[error("shatter search budget exceeded ({spent} > {budget} candidate checks)")]
    BudgetExceeded { spent: u64, budget: u64 },

    #[error("component of size {size} exceeds the 2n/3 bound {limit}")]
    UnbalancedComponent { size: usize, limit: usize },

    #[error("division size r = {r} below configured minimum {min}")]
    RTooSmall { r: usize, min: usize },

    #[error("path family has no entry for level {level}")]
    MissingLevel { level: u32 },

    #[error("{groups} signature groups exceed the cap {cap:.0}; assumed VC-dimension too low")]
    GroupExplosion { groups: usize, cap: f64 },

    #[error("{traces} distinct block traces exceed the cap {cap}; assumed VC-dimension too low")]
    TraceOverflow { traces: usize, cap: usize },

    #[error("generator failed to produce a connected graph after {attempts} attempts")]
    ResampleLimit { attempts: usize },

    #[error("{0}")]
    Invalid(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("answer {got} disagrees with oracle {expected} on {what}")]
    OracleMismatch {
        what: String,
        got: String,
        expected: String,
    },
}

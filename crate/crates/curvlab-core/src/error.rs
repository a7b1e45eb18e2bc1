//! Crate error type. Precondition violations are reported as dedicated
//! variants so callers (and the CLI) can distinguish bad input from
//! internal inconsistency.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {v} out of range for graph on {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },

    #[error("self-loop at vertex {0} not allowed")]
    SelfLoop(usize),

    #[error("pair ({x}, {y}) must be two distinct vertices")]
    NotAPair { x: usize, y: usize },

    #[error("vertices {x} and {y} are not adjacent")]
    NotAdjacent { x: usize, y: usize },

    #[error("vertices {x} and {y} lie in different components")]
    Unreachable { x: usize, y: usize },

    #[error("graph is not connected")]
    Disconnected,

    #[error("idleness alpha = {0} outside [0, 1)")]
    AlphaOutOfRange(String),

    #[error("graph6 parse error at byte {offset}: {reason}")]
    Graph6 { offset: usize, reason: String },

    #[error("graph6 encoding supports at most 62 vertices, got {0}")]
    Graph6TooLarge(usize),

    #[error("adjacency list parse error on line {line}: {reason}")]
    AdjacencyList { line: usize, reason: String },

    #[error("transport instance unbalanced: supply {supply} != demand {demand}")]
    UnbalancedTransport { supply: String, demand: String },

    #[error("negative mass {mass} at vertex {v}")]
    NegativeMass { v: usize, mass: String },

    #[error("coupling does not have the required marginals: {0}")]
    BadCoupling(String),

    #[error("star-coupling condition ({condition}) violated: {detail}")]
    StarCoupling { condition: u8, detail: String },

    #[error("graph is not outerplanar")]
    NotOuterplanar,

    #[error("({u}, {v}) is not an edge of the embedding")]
    NotAnEmbeddedEdge { u: usize, v: usize },

    #[error("suppression requires degree 2 at {v}, found {degree}")]
    SuppressNotDegreeTwo { v: usize, degree: usize },

    #[error("suppression requires {v} on an inner facial 4-cycle")]
    SuppressNoQuadFace { v: usize },

    #[error("suppression requires the opposite neighbors {a} and {b} to be non-adjacent")]
    SuppressChordPresent { a: usize, b: usize },

    #[error("order {n} outside supported range [{lo}, {hi}]")]
    OrderOutOfRange { n: usize, lo: usize, hi: usize },

    #[error("methods disagree on ({x}, {y}): {detail}")]
    MethodDisagreement { x: usize, y: usize, detail: String },

    #[error("unknown lemma id {id:?} (known ids: 3.1 through 3.6)")]
    UnknownLemma { id: String },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

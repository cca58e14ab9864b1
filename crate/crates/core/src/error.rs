//! Error type shared by the whole crate.

use crate::graph::Graph;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Two systems claim the same vertex with different states.
    #[error("well-namedness violation: vertex `{vertex}` carries both `{first}` and `{second}`")]
    WellNamednessViolation {
        vertex: String,
        first: String,
        second: String,
    },

    /// Graph union would put two different states on one vertex.
    #[error("incompatible union: vertex `{vertex}` carries `{left}` on one side and `{right}` on the other")]
    IncompatibleUnion {
        vertex: String,
        left: String,
        right: String,
    },

    /// The universe's basis exceeds the enumeration cap.
    #[error("universe too large: {count} basis graphs exceeds cap {cap}")]
    UniverseTooLarge { count: u128, cap: u128 },

    /// A selector returned systems that are not part of its input graph.
    #[error("restriction `{label}` returned a non-subgraph on {graph}")]
    SubsetViolation { label: String, graph: Graph },

    /// An operation whose output is guaranteed valid produced an invalid value.
    #[error("internal contract violation: {what}")]
    InternalContractViolation { what: String },

    /// Entropy requires a normalized state.
    #[error("ket is not normalized: norm = {norm}")]
    NotNormalized { norm: f64 },

    /// Two supposedly equivalent characterizations disagreed.
    #[error("equivalence violation in {what}: {detail}")]
    EquivalenceViolation { what: String, detail: String },

    /// A decider requiring a unitary input got a non-unitary operator.
    #[error("operator is not unitary (max deviation {max_deviation:e})")]
    NotUnitary { max_deviation: f64 },

    /// A construction requiring a pointwise restriction got a non-pointwise one.
    #[error("restriction `{label}` is not pointwise")]
    NotPointwise { label: String },

    /// A construction requiring a name-preserving operator got one that is not.
    #[error("operator is not name-preserving")]
    NotNamePreserving,

    /// The operator is not unitary on the subspace it is supposed to act on.
    #[error("operator is not unitary on the selected subspace (max deviation {max_deviation:e})")]
    NotUnitaryOnRange { max_deviation: f64 },

    /// A guaranteed construction was invoked with a failed hypothesis.
    #[error("prerequisite violation: {hypothesis}")]
    PrerequisiteViolation { hypothesis: String },

    /// Gate reconstruction missed the target operator.
    #[error("reconstruction failure: max deviation {max_deviation:e} on basis vector {witness}")]
    ReconstructionFailure { max_deviation: f64, witness: Graph },

    /// Malformed input file or token.
    #[error("input error: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use alloc::string::String;

use crate::net::TransceiverId;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("unknown transceiver id {0}")]
    UnknownTransceiver(TransceiverId),
    #[error("duplicate transceiver id {0}")]
    DuplicateTransceiver(TransceiverId),
    #[error("transceiver {id} has {count} neighbors, more than the cap of {cap}")]
    NeighborCapExceeded { id: TransceiverId, count: usize, cap: usize },
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("edge ({0}, {1}) is already present")]
    EdgeAlreadyPresent(usize, usize),
    #[error("vertex weights must be finite and strictly positive (vertex {0})")]
    NonPositiveWeight(usize),
    #[error("vertex order is not a permutation of the vertex set")]
    InvalidPermutation,
    #[error("exact solver exceeded its budget of {0} node expansions")]
    BudgetExceeded(u64),
    #[error("topology spec violation: {0}")]
    SpecViolation(String),
}

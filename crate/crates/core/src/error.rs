use thiserror::Error;

/// Errors raised by graph construction, surgery, enumeration and the cache.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed graph: {0}")]
    MalformedGraph(String),
    #[error("edge {0} is a loop and cannot be collapsed")]
    LoopCollapse(usize),
    #[error("vertex of valence {0} cannot be expanded")]
    NotExpandable(usize),
    #[error("permutation is not an automorphism of the graph")]
    NotAnAutomorphism,
    #[error("expected a graph with {expected} boundary cycle(s), found {found}")]
    WrongType { expected: usize, found: usize },
    #[error("the Kontsevich form needs exactly one boundary cycle, found {0}")]
    WrongBoundaryCount(usize),
    #[error("doubling needs an odd number (at least 3) of branch points, found {0}")]
    BadLeafCount(usize),
    #[error("graph is not symmetric under the involution: {0}")]
    NotSymmetric(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("census cache error: {0}")]
    Cache(String),
    #[error("volume computations disagree: {0}")]
    VolumeMismatch(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

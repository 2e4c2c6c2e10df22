use alloc::string::String;

use thiserror::Error;

use crate::network::{EdgeId, NodeId, ValidationReport};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid network: {0}")]
    InvalidNetwork(ValidationReport),
    #[error("negative-cost cycle in the residual network")]
    NegativeCycle,
    #[error("augmenting would exceed the capacity of edge {0}")]
    CapacityExceeded(EdgeId),
    #[error("augmenting would make the flow on edge {0} negative")]
    NegativeFlow(EdgeId),
    #[error("path is not connected at arc {0}")]
    BrokenPath(usize),
    #[error("unreachable supply: source {0} cannot reach the sink")]
    UnreachableSupply(NodeId),
    #[error("node {0} is not a source")]
    NotASource(NodeId),
    #[error("source subset is empty")]
    EmptySubset,
    #[error("tuple is empty or longer than the sink in-degree")]
    InvalidTuple,
    #[error("{found} augmenting paths exceed the sink in-degree {degree}")]
    TooManyPaths { found: usize, degree: usize },
    #[error("time step {step} does not divide {what}")]
    NonDivisibleStep { step: Rational, what: String },
    #[error("time horizon must be nonnegative, got {0}")]
    NegativeHorizon(Rational),
    #[error("instance too large for exhaustive search: {0} sources")]
    TooManySources(usize),
    #[error("no forward intersection while the point is not a vertex")]
    NoForwardIntersection,
    #[error("tight set cannot be nested into the constraint chain")]
    ChainViolation,
    #[error("flows live on different time grids")]
    GridMismatch,
    #[error("value does not fit the integer range of the max-flow kernel")]
    Overflow,
    #[error("oracle disagreement: {0}")]
    OracleDisagreement(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

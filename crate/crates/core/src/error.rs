use thiserror::Error;

use crate::rootsys::{CartanType, Family};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid rank {rank} for family {family}")]
    InvalidRank { family: Family, rank: usize },
    #[error("cannot parse Cartan type {0:?}")]
    ParseType(String),
    #[error("{ctype} has {positives} positive roots; at most {max} are supported")]
    TooLarge {
        ctype: CartanType,
        positives: usize,
        max: usize,
    },
    #[error("root index {0} out of range")]
    InvalidRoot(usize),
    #[error("root subset is not span-closed")]
    NotSpanClosed,
    #[error("unrecognized Dynkin diagram: {0}")]
    UnrecognizedDiagram(String),
    #[error("flat budget of {budget} exceeded ({reached} flats enumerated)")]
    ResourceLimit { budget: usize, reached: usize },
    #[error("flat id {0} out of range")]
    InvalidId(usize),
    #[error("k = {k} outside 0..={rank}")]
    RankOutOfRange { k: usize, rank: usize },
    #[error("subsystem is not k-step good")]
    NotGood,
    #[error("{0} is not of classical type")]
    NotClassical(CartanType),
    #[error("malformed descriptor: {0}")]
    MalformedDescriptor(String),
    #[error("parameter set violates the star conditions")]
    StarViolation,
    #[error("classes belong to different lattices")]
    LatticeMismatch,
    #[error("simple reflection index {0} out of range")]
    MalformedWord(usize),
    #[error("point is not in the compactification")]
    NotInVariety,
    #[error("root does not complete the span of the target flat")]
    SpanDeficient,
    #[error("cannot parse coordinate {0:?}")]
    ParseValue(String),
    #[error("point has {found} coordinates, expected {expected}")]
    PointLength { expected: usize, found: usize },
}

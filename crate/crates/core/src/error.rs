use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid rook element {entries:?}: {reason}")]
    InvalidElement { entries: Vec<u32>, reason: String },

    #[error("invalid rook matrix: {0}")]
    InvalidMatrix(String),

    #[error("edge label ({first},{second}) has a zero second coordinate")]
    ZeroLabelSecond { first: u8, second: u8 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("{to} does not cover {from}")]
    NotACover { from: String, to: String },

    #[error("n = {n} exceeds the configured bound {bound}")]
    BoundExceeded { n: usize, bound: usize },

    #[error("n must be at least 1")]
    ZeroDimension,

    #[error("cover edge {from} -> {to} jumps from rank {from_rank} to rank {to_rank}")]
    RankGap {
        from: usize,
        to: usize,
        from_rank: u32,
        to_rank: u32,
    },

    #[error("duplicate element at indices {first} and {second}")]
    DuplicateElement { first: usize, second: usize },

    #[error("cover edge points at unknown element index {0}")]
    UnknownIndex(usize),

    #[error("duplicate cover edge {from} -> {to}")]
    DuplicateCover { from: usize, to: usize },

    #[error("elements {bottom} and {top} are not comparable")]
    Incomparable { bottom: usize, top: usize },

    #[error("interval has length {0}, expected 2")]
    NotLength2(u32),

    #[error("length-2 interval [{bottom}, {top}] has {members} members; it is neither a chain nor a diamond")]
    NotChainOrDiamond {
        bottom: usize,
        top: usize,
        members: usize,
    },

    #[error("interval has more than {cutoff} maximal chains")]
    CutoffExceeded { cutoff: u64 },

    #[error("subposet selection is empty")]
    EmptySelection,

    #[error("poset has no unique minimum and maximum")]
    Unbounded,

    #[error("operation needs a graded poset, but this one is ungraded")]
    Ungraded,

    #[error("operation needs edge labels, but edge {from} -> {to} is unlabeled")]
    Unlabeled { from: usize, to: usize },

    #[error("verification scope has {intervals} intervals, above the budget of {budget}")]
    ScopeTooLarge { intervals: u64, budget: u64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

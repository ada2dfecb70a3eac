use alloc::boxed::Box;
use alloc::string::String;

use crate::minimize::OverlapReport;

/// Errors raised by the core algorithms.
#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("letter {letter:?} is outside the alphabet of rank {rank}")]
    LetterOutOfRange { letter: char, rank: usize },
    #[error("rank must be between 2 and 26, got {0}")]
    BadRank(usize),
    #[error("invalid character {0:?} in word")]
    BadChar(char),
    #[error("word must be nonempty")]
    EmptyWord,
    #[error("length must be at least 1")]
    ZeroLength,
    #[error("exact count overflowed 128-bit arithmetic")]
    Overflow,
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph is not folded")]
    NotFolded,
    #[error("edge references vertex {0} which does not exist")]
    BadVertex(usize),
    #[error("relator {0} is not cyclically reduced or is empty")]
    BadRelator(usize),
    #[error("presentation does not satisfy C'({0})")]
    NotSmallCancellation(String),
    #[error("parameter out of range: {0}")]
    BadParameter(String),
    #[error("word {0:?} is not λ-reduced")]
    NotLambdaReduced(String),
    #[error("arc is invalid for an AO-move: {0}")]
    BadArc(String),
    #[error("resource cap exceeded: need {required}, cap is {cap}")]
    CapExceeded { required: u64, cap: u64 },
    #[error("subgroup representation is not minimal-certified")]
    NotCertified,
    #[error("subgroup representations use different presentations or parameters")]
    MismatchedPresentations,
    #[error("budget must be at least 1")]
    ZeroBudget,
    #[error("no edge-reducing AO-move along the relator fragment {}", .0.label)]
    ReadableHalfRelator(Box<OverlapReport>),
    #[error("too many generators: {got} > k = {k}")]
    TooManyGenerators { got: usize, k: usize },
}

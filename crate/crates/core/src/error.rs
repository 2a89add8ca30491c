use thiserror::Error;

use crate::disk::Chord;
use crate::slalom::{XPair, XPoint};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid surface: {0}")]
    InvalidSurface(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("dangling slot: point {owner} has no slot {position}")]
    DanglingSlot { owner: usize, position: usize },

    #[error("slot {position} at point {owner} is used by more than one arc end")]
    DuplicateSlot { owner: usize, position: usize },

    #[error("chord {0} has both ends in the same slot")]
    DegenerateChord(Chord),

    #[error("arcs {first} and {second} cross")]
    CrossingArcs { first: Chord, second: Chord },

    #[error("face {face} has no boundary segment on its boundary")]
    InadmissibleFace { face: usize },

    #[error("arc {0} crosses no dual arc")]
    DegenerateArc(XPair),

    #[error("{0} is not a slalom")]
    NotSlalom(XPair),

    #[error("x-point {0} lies outside the refined window")]
    OutsideWindow(XPoint),

    #[error("slalom {0} appears more than once")]
    DuplicateMember(XPair),

    #[error(
        "brute force for n={n}, d={d} exceeds the size guard ({slaloms} slaloms, {expected} expected collections); use count-only mode or raise the guard"
    )]
    SizeLimit {
        n: usize,
        d: usize,
        slaloms: usize,
        expected: String,
    },

    #[error("model inconsistency: {0}")]
    ModelInconsistency(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),
}

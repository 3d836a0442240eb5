//! Crate-wide error type.
//!
//! `Undecidable` is special: it does not mean "invalid input" but "the
//! certified interval comparison ran out of precision". Callers are expected
//! to either raise the precision cap of the symbol table or reject the input.

use thiserror::Error;

/// Why a vertex list failed Delzant validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NotDelzantReason {
    TooFewVertices,
    DegenerateEdge,
    IrrationalSlope,
    NonConvex,
    NonUnimodularVertex,
}

impl std::fmt::Display for NotDelzantReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            NotDelzantReason::TooFewVertices => "fewer than three vertices",
            NotDelzantReason::DegenerateEdge => "degenerate edge",
            NotDelzantReason::IrrationalSlope => "irrational slope",
            NotDelzantReason::NonConvex => "non-convex",
            NotDelzantReason::NonUnimodularVertex => "non-unimodular vertex",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a Delzant polygon: {reason} (index {location})")]
    NotDelzant {
        reason: NotDelzantReason,
        location: usize,
    },

    #[error("comparison undecided after {rounds} refinement rounds: {context}")]
    Undecidable { context: String, rounds: u32 },

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("invalid symbol table: {0}")]
    InvalidSymbol(String),

    #[error("chop size must be positive and strictly smaller than both incident edge lengths")]
    ChopTooLarge,

    #[error("edge {edge} has self-intersection {self_intersection}, not -1; cannot blow down")]
    NotBlowDownable { edge: usize, self_intersection: i64 },

    #[error("polygon has too few edges for this operation")]
    TooFewEdges,

    #[error("no edge of self-intersection -1 on a polygon with five or more edges")]
    NoBlowDownableEdge,

    #[error("four-edge polygon is not congruent to a Hirzebruch trapezoid")]
    NotTrapezoid,

    #[error("edge classes refer to different polygons")]
    MismatchedPolygons,

    #[error("inconsistent chop record: {0}")]
    InconsistentChopRecord(String),

    #[error("inconsistent decomposition: {0}")]
    InconsistentDecomposition(String),

    #[error("total volume is not positive: the form does not describe a symplectic class")]
    NotProperInput,

    #[error("blow-up count {0} outside the supported range 1..=8")]
    DelPezzoRange(u32),

    #[error("intersection pairing reduction failed: {0}")]
    ReductionFailure(String),

    #[error("resource cap exceeded: {0}")]
    ResourceCapExceeded(String),

    #[error("invalid input: {0}")]
    Parse(String),

    #[error("internal contract violation: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

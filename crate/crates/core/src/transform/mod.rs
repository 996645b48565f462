//! Removal of an arena's least color, and the rank/slice analyses behind it.
//!
//! Two rewritings trade the bottom color of an arena for extra structure:
//!
//! * [`remove_even_min_color`] — for arenas whose least color is 0: every
//!   vertex is split into an "attractor" and a "safe" mode plus a choice
//!   vertex where Eve picks the next mode, and an appended counter charges
//!   her for every forced exit from the safe mode. The output uses no
//!   color 0.
//! * [`remove_odd_min_color`] — for chronological arenas whose least color
//!   is 1: a two-state flag rides along with the play and remembers whether
//!   a color above 1 has appeared since the last slice column; holding the
//!   flagless copies of slice-column vertices forbidden forces such a color
//!   between consecutive slices. The output maps color 1 to 2.
//!
//! The analyses feeding them are [`compute_ranks`] — an alternating
//! safety / must-reach fixpoint chain over graphs that visit a designated
//! set only finitely often — and [`compute_slices`] — low-color depths and
//! the slice columns of a strategy-restricted configuration graph.
//!
//! All transformations are pure and deterministic; output vertex and edge
//! ids follow documented arithmetic layouts so callers can map results
//! back without lookups.

pub mod ranks;
pub mod removal;
pub mod slices;

pub use ranks::{compute_ranks, RankAssignment};
pub use removal::{remove_even_min_color, remove_odd_min_color, EvenPart, EvenRemoval, OddRemoval};
pub use slices::{compute_slices, SliceAssignment};

use core::fmt;

/// Failure modes of the transformations in this module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransformError {
    /// The graph has a cycle through the set that every path must leave
    /// behind, so the fixpoint chain cannot cover it.
    TransientCycle,
    /// The fixpoint chain failed to cover every vertex within the permitted
    /// number of steps (twice the stated width).
    RankOverrun {
        /// The step budget that was exhausted.
        limit: u32,
    },
    /// The arena carries no (or only partial) chronological ranks.
    MissingRanks,
    /// The restricted graph has a cycle confined to colors 0 and 1, so the
    /// strategy it came from does not win the parity objective.
    LowColorCycle,
    /// The arena's least color is not the one this removal handles.
    WrongMinColor {
        /// The least color actually present.
        found: u32,
        /// The least color the removal expects.
        expected: u32,
    },
    /// A strategy machine does not fit the transformed arena it is being
    /// lifted from.
    ForeignMachine(&'static str),
    /// A computed column index exceeds the supported range.
    Overflow,
}

impl fmt::Display for TransformError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransformError::TransientCycle => {
                write!(f, "a cycle passes through the transient set")
            }
            TransformError::RankOverrun { limit } => {
                write!(f, "rank chain failed to cover every vertex within {limit} steps")
            }
            TransformError::MissingRanks => {
                write!(f, "the arena carries no complete chronological ranking")
            }
            TransformError::LowColorCycle => {
                write!(f, "the restricted graph has a cycle confined to colors 0 and 1")
            }
            TransformError::WrongMinColor { found, expected } => {
                write!(f, "least color is {found}, this removal expects {expected}")
            }
            TransformError::ForeignMachine(what) => {
                write!(f, "machine does not fit the transformed arena: {what}")
            }
            TransformError::Overflow => write!(f, "a column index exceeds the supported range"),
        }
    }
}

impl core::error::Error for TransformError {}

//! Hand-built game families with known values and memory requirements,
//! their arithmetic, and the strategies that witness the published bounds.
//!
//! Every generator is deterministic: the same parameters produce the same
//! arena, vertex by vertex and edge by edge. Strategy constructors take the
//! generated arena and resolve vertices by the generator's naming scheme.

pub mod arith;
pub mod games;
pub mod strategies;

pub use arith::{level_step, suffix_length, tradeoff_bound, tradeoff_bound_with, tradeoff_memory};
pub use games::{cyclic_counter_game, g1_game, gkn_game, tradeoff_game};
pub use strategies::{
    calibrate_gkn_phases, g1_strategy_3state, g1_strategy_4state, gkn_strategy,
};

use core::fmt;

/// Failure modes of the family constructors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyError {
    /// A parameter is outside the family's domain.
    OutOfRange(&'static str),
    /// The requested instance does not fit in machine arithmetic or exceeds
    /// the size guard.
    Overflow,
    /// A strategy constructor was handed an arena that does not follow the
    /// expected generator's shape.
    MalformedArena(&'static str),
}

impl fmt::Display for FamilyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyError::OutOfRange(what) => write!(f, "parameter out of range: {what}"),
            FamilyError::Overflow => write!(f, "instance too large"),
            FamilyError::MalformedArena(what) => {
                write!(f, "arena does not match the expected family shape: {what}")
            }
        }
    }
}

impl core::error::Error for FamilyError {}

//! Two-player games on finite graphs whose edges carry counter instructions.
//!
//! An *arena* is a finite directed graph with vertices owned by Eve or Adam,
//! a priority (color) per vertex, and a vector of counter instructions
//! (skip / increment / reset) per edge. Objectives combine a hard cap on the
//! counters with parity or reachability goals; strategies are finite-state
//! machines over the arena's edges.
//!
//! The crate is organized around four layers:
//!
//! * [`arena`], [`counter`], [`play`], [`condition`] — the basic objects:
//!   arenas, counter actions and valuations, plays and their values, and
//!   winning-condition descriptors.
//! * [`machine`], [`config`] — memory structures, strategy machines, the
//!   product of an arena with a memory structure, and evaluation of a
//!   strategy machine by expanding the graph of configurations it induces.
//! * [`solve`] — exact solvers: attractors, reachability/safety games,
//!   parity games (Zielonka), the capped configuration arena used to decide
//!   counter-bounded objectives, value search, memoryless-witness extraction,
//!   backward induction on well-founded arenas, and exhaustive synthesis of
//!   bounded-memory strategies.
//! * [`families`], [`transform`] — parameterized arena families with known
//!   optimal strategies, and arena transformations (rank/slice analysis,
//!   removal of extremal colors).
//!
//! The crate is `no_std`-compatible (requires `alloc`); the `std` feature
//! (default) only switches error types onto `std::error::Error` via
//! `core::error::Error`, which is implemented unconditionally.
//!
//! Determinism: every algorithm in this crate is deterministic. Iteration
//! orders are index-based or `BTreeMap`-based throughout, so equal inputs
//! produce identical outputs, including synthesized witnesses.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]
#![warn(missing_docs)]

extern crate alloc;

pub mod arena;
pub mod condition;
pub mod config;
pub mod counter;
pub mod families;
mod graphutil;
pub mod machine;
pub mod play;
pub mod random;
pub mod solve;
pub mod transform;

pub use arena::{Arena, ArenaBuilder, Edge, EdgeId, Owner, Vertex, VertexId};
pub use condition::{ConditionKind, ConditionSpec};
pub use counter::{CounterAction, CounterValuation, CounterValue, Op, Value};
pub use machine::{MemoryStructure, StateId, StrategyMachine};

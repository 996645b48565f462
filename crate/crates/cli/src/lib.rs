//! Command-line companion to [`bgames_core`]: JSON file formats for arenas
//! and strategy machines, Graphviz export, and the claim-verification
//! harness behind `verify-paper`.

pub mod dot;
pub mod formats;
pub mod verify;

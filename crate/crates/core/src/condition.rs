//! Winning-condition descriptors.
//!
//! A condition pairs one of three objective kinds with an optional counter
//! bound and an optional safety set. Solvers interpret the combination; the
//! descriptor itself performs no checking beyond what its constructors
//! enforce.

use alloc::collections::BTreeSet;

use crate::arena::VertexId;

/// The shape of the objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionKind {
    /// All counters stay within the bound until the play reaches the target
    /// set, where it stops (and wins). Plays that never reach the target
    /// lose, as do plays that exceed the bound before reaching it.
    BoundedUntilTarget,
    /// All counters stay within the bound forever, and the parity objective
    /// holds (largest color seen infinitely often is even).
    BoundedAndParity,
    /// Parity alone; counters are ignored.
    ParityOnly,
}

/// A full condition: kind, optional bound, optional avoidance set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionSpec {
    /// Objective kind.
    pub kind: ConditionKind,
    /// The counter bound `N` (counters must stay `<= N`). Required by the
    /// two bounded kinds; ignored by [`ConditionKind::ParityOnly`].
    pub bound: Option<u32>,
    /// Vertices the play must never visit, on top of the main objective.
    pub forbidden: Option<BTreeSet<VertexId>>,
}

impl ConditionSpec {
    /// Counters bounded by `n` until the target set is reached.
    pub fn bounded_until(n: u32) -> Self {
        ConditionSpec {
            kind: ConditionKind::BoundedUntilTarget,
            bound: Some(n),
            forbidden: None,
        }
    }

    /// Counters bounded by `n` forever, plus parity.
    pub fn bounded_and_parity(n: u32) -> Self {
        ConditionSpec {
            kind: ConditionKind::BoundedAndParity,
            bound: Some(n),
            forbidden: None,
        }
    }

    /// Parity alone.
    pub fn parity() -> Self {
        ConditionSpec {
            kind: ConditionKind::ParityOnly,
            bound: None,
            forbidden: None,
        }
    }

    /// Add a safety set: the play must avoid these vertices entirely.
    pub fn avoiding(mut self, forbidden: BTreeSet<VertexId>) -> Self {
        self.forbidden = Some(forbidden);
        self
    }

    /// Same condition with the bound replaced.
    pub fn with_bound(mut self, n: u32) -> Self {
        self.bound = Some(n);
        self
    }

    /// True if `v` is forbidden by the safety part.
    pub fn forbids(&self, v: VertexId) -> bool {
        self.forbidden.as_ref().is_some_and(|s| s.contains(&v))
    }
}

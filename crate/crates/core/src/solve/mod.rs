//! Exact solvers on finite arenas.
//!
//! The base layer is the attractor fixpoint, from which reachability and
//! safety games are solved with positional witnesses for both players.
//! [`zielonka`] solves parity games; [`capped`] reduces counter-bounded
//! objectives to parity/reachability over the capped configuration arena;
//! [`dag`] handles well-founded arenas by backward induction; [`search`]
//! synthesizes (or refutes the existence of) bounded-memory strategies by
//! exhaustive backtracking.
//!
//! Every solver asserts determinacy (the two regions partition the vertex
//! set) and self-checks the positional witnesses it returns: the Eve witness
//! must force the objective from everywhere in her region, the Adam witness
//! must refute it from everywhere in his. The checks are cheap (linear or
//! near-linear) and always on.

pub mod capped;
pub mod dag;
pub mod search;
pub mod zielonka;

pub use capped::{
    capped_configuration_arena, decide_bparity, lemma1_strategy, value_search, BparityDecision,
    CappedArena, CappedSource, Lemma1Strategy, ValueOutcome, ValueSearch,
};
pub use dag::solve_dag_bgame;
pub use search::{search_memory_strategy, SearchOutcome, SynthesisQuery};
pub use zielonka::solve_parity_game;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::arena::{Arena, EdgeId, Owner, VertexId};
use crate::config::EvalError;

/// A positional strategy: one outgoing edge per (owned) vertex.
pub type PositionalStrategy = BTreeMap<VertexId, EdgeId>;

/// Failure modes shared by the solvers in this module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveError {
    /// The condition needs a counter bound and none was given.
    MissingBound,
    /// A reach-style condition needs a nonempty target set.
    MissingTarget,
    /// The condition kind is not handled by this solver.
    UnsupportedCondition,
    /// Strategy extraction was asked for on an instance the player loses.
    NotWinning,
    /// The DAG solver was given a cyclic arena.
    CyclicInput,
    /// Exhaustive search exceeded its exploration budget.
    BudgetExceeded {
        /// Configurations explored before giving up.
        explored: u64,
        /// The budget that was exceeded.
        budget: u64,
    },
    /// An internal evaluation failed (indicates a malformed input arena).
    Eval(EvalError),
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::MissingBound => write!(f, "condition requires a counter bound"),
            SolveError::MissingTarget => write!(f, "condition requires a nonempty target set"),
            SolveError::UnsupportedCondition => {
                write!(f, "condition kind not supported by this solver")
            }
            SolveError::NotWinning => {
                write!(f, "strategy extraction requested but Eve does not win")
            }
            SolveError::CyclicInput => write!(f, "arena must be acyclic"),
            SolveError::BudgetExceeded { explored, budget } => {
                write!(f, "search budget exceeded ({explored} > {budget} configurations)")
            }
            SolveError::Eval(e) => write!(f, "internal evaluation failed: {e}"),
        }
    }
}

impl core::error::Error for SolveError {}

impl From<EvalError> for SolveError {
    fn from(e: EvalError) -> Self {
        SolveError::Eval(e)
    }
}

/// Outcome of solving a game: winning regions and positional witnesses for
/// both players.
///
/// `eve_strategy` is defined on the Eve-owned vertices of Eve's region where
/// a move matters (vertices whose play is already decided, such as reached
/// targets, may be absent); `adam_strategy` likewise on Adam's region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    /// The winner from the arena's initial vertex.
    pub winner: Owner,
    /// Vertices from which Eve wins.
    pub eve_region: BTreeSet<VertexId>,
    /// Vertices from which Adam wins (the complement of `eve_region`).
    pub adam_region: BTreeSet<VertexId>,
    /// Eve's positional witness on her region.
    pub eve_strategy: PositionalStrategy,
    /// Adam's positional witness on his region.
    pub adam_strategy: PositionalStrategy,
}

impl SolveResult {
    /// The region of `player`.
    pub fn region(&self, player: Owner) -> &BTreeSet<VertexId> {
        match player {
            Owner::Eve => &self.eve_region,
            Owner::Adam => &self.adam_region,
        }
    }

    /// The positional witness of `player`.
    pub fn strategy(&self, player: Owner) -> &PositionalStrategy {
        match player {
            Owner::Eve => &self.eve_strategy,
            Owner::Adam => &self.adam_strategy,
        }
    }

    /// Eve's witness as a one-state strategy machine on `arena`.
    pub fn eve_machine(&self, arena: &Arena) -> crate::machine::StrategyMachine {
        crate::machine::StrategyMachine::positional(arena.edge_count(), &self.eve_strategy)
    }

    fn assert_determinacy(&self, arena: &Arena) {
        assert_eq!(
            self.eve_region.len() + self.adam_region.len(),
            arena.vertex_count(),
            "regions must partition the vertex set"
        );
        assert!(
            self.eve_region.is_disjoint(&self.adam_region),
            "regions must be disjoint"
        );
    }
}

/// Attractor of `player` to `target`, restricted to the sub-arena induced by
/// `within` (only edges with both endpoints inside `within` are considered;
/// `target` must be a subset of `within`).
///
/// Returns the attracted set and, for each newly attracted `player`-owned
/// vertex, an attracting edge (an out-edge into the previously attracted
/// set). Vertices of `target` get no edge.
pub(crate) fn attractor(
    arena: &Arena,
    player: Owner,
    target: &[bool],
    within: &[bool],
) -> (Vec<bool>, Vec<Option<EdgeId>>) {
    let n = arena.vertex_count();
    debug_assert_eq!(target.len(), n);
    debug_assert_eq!(within.len(), n);
    let mut attracted = alloc::vec![false; n];
    let mut strategy: Vec<Option<EdgeId>> = alloc::vec![None; n];
    // For opponent vertices: number of within-edges not yet known to lead
    // into the attractor. When it reaches zero the opponent cannot avoid it.
    let mut escapes = alloc::vec![0usize; n];
    for v in arena.vertex_ids() {
        if !within[v.index()] {
            continue;
        }
        escapes[v.index()] = arena
            .out_edges(v)
            .iter()
            .filter(|&&e| within[arena.edge(e).to.index()])
            .count();
    }
    let mut queue: Vec<VertexId> = Vec::new();
    for v in arena.vertex_ids() {
        if within[v.index()] && target[v.index()] {
            attracted[v.index()] = true;
            queue.push(v);
        }
    }
    while let Some(t) = queue.pop() {
        for &e in arena.in_edges(t) {
            let u = arena.edge(e).from;
            if !within[u.index()] || attracted[u.index()] {
                continue;
            }
            if arena.owner(u) == player {
                attracted[u.index()] = true;
                strategy[u.index()] = Some(e);
                queue.push(u);
            } else {
                escapes[u.index()] -= 1;
                if escapes[u.index()] == 0 {
                    attracted[u.index()] = true;
                    queue.push(u);
                }
            }
        }
    }
    (attracted, strategy)
}

/// Check that following `strategy` from every vertex of `region` forces a
/// visit to `target`: the one-choice graph (strategy edges at `player`
/// vertices, all edges elsewhere) must have no cycle and no dead end before
/// the target, staying inside `region`.
fn verify_forced_reach(
    arena: &Arena,
    player: Owner,
    region: &BTreeSet<VertexId>,
    strategy: &PositionalStrategy,
    target: &BTreeSet<VertexId>,
) {
    // Backward fixpoint: a vertex is good once all its (restricted) edges
    // lead to good vertices; targets are good outright.
    let n = arena.vertex_count();
    let mut pending = alloc::vec![usize::MAX; n];
    let mut queue: Vec<VertexId> = Vec::new();
    let restricted: Vec<Vec<EdgeId>> = arena
        .vertex_ids()
        .map(|v| {
            if !region.contains(&v) || target.contains(&v) {
                Vec::new()
            } else if arena.owner(v) == player {
                strategy.get(&v).map(|&e| alloc::vec![e]).unwrap_or_default()
            } else {
                arena.out_edges(v).to_vec()
            }
        })
        .collect();
    for v in arena.vertex_ids() {
        if !region.contains(&v) {
            continue;
        }
        if target.contains(&v) {
            pending[v.index()] = 0;
            queue.push(v);
            continue;
        }
        let deg = restricted[v.index()].len();
        assert!(
            deg > 0,
            "witness strategy leaves {} without a move before the target",
            arena.name(v)
        );
        for &e in &restricted[v.index()] {
            let t = arena.edge(e).to;
            assert!(
                region.contains(&t),
                "witness strategy leaves the winning region at {}",
                arena.name(v)
            );
        }
        pending[v.index()] = deg;
    }
    // Propagate goodness backwards along restricted edges.
    let uses: Vec<Vec<VertexId>> = {
        let mut uses = alloc::vec![Vec::new(); n];
        for v in arena.vertex_ids() {
            for &e in &restricted[v.index()] {
                uses[arena.edge(e).to.index()].push(v);
            }
        }
        uses
    };
    let mut good = 0usize;
    let mut head = 0usize;
    while head < queue.len() {
        let t = queue[head];
        head += 1;
        good += 1;
        for &u in &uses[t.index()] {
            if pending[u.index()] == usize::MAX || pending[u.index()] == 0 {
                continue;
            }
            pending[u.index()] -= 1;
            if pending[u.index()] == 0 {
                queue.push(u);
            }
        }
    }
    assert_eq!(
        good,
        region.len(),
        "witness strategy does not force the target from the whole region"
    );
}

/// Check that following `strategy` from every vertex of `region` avoids
/// `target` forever: strategy edges (and all opponent edges) must stay in
/// `region`, which is disjoint from `target`.
fn verify_forced_avoid(
    arena: &Arena,
    player: Owner,
    region: &BTreeSet<VertexId>,
    strategy: &PositionalStrategy,
    target: &BTreeSet<VertexId>,
) {
    for &v in region {
        assert!(
            !target.contains(&v),
            "avoidance region contains a target vertex {}",
            arena.name(v)
        );
        if arena.owner(v) == player {
            if arena.out_edges(v).is_empty() {
                continue; // play ends here; target was never visited
            }
            let e = strategy
                .get(&v)
                .copied()
                .unwrap_or_else(|| panic!("avoidance witness missing a move at {}", arena.name(v)));
            assert!(
                region.contains(&arena.edge(e).to),
                "avoidance witness leaves the region at {}",
                arena.name(v)
            );
        } else {
            for &e in arena.out_edges(v) {
                assert!(
                    region.contains(&arena.edge(e).to),
                    "opponent can escape the avoidance region at {}",
                    arena.name(v)
                );
            }
        }
    }
}

/// Solve the reachability game: Eve wins from the vertices out of which she
/// can force a visit to `target`. Plays that die in a terminal vertex
/// outside the target never visit it, so such vertices are Adam's.
pub fn solve_reachability_game(arena: &Arena, target: &BTreeSet<VertexId>) -> SolveResult {
    let n = arena.vertex_count();
    let mut target_mask = alloc::vec![false; n];
    for &v in target {
        target_mask[v.index()] = true;
    }
    let within = alloc::vec![true; n];
    let (attracted, strat) = attractor(arena, Owner::Eve, &target_mask, &within);
    let mut eve_region = BTreeSet::new();
    let mut adam_region = BTreeSet::new();
    let mut eve_strategy = PositionalStrategy::new();
    let mut adam_strategy = PositionalStrategy::new();
    for v in arena.vertex_ids() {
        if attracted[v.index()] {
            eve_region.insert(v);
            if arena.owner(v) == Owner::Eve {
                if let Some(e) = strat[v.index()] {
                    eve_strategy.insert(v, e);
                }
            }
        } else {
            adam_region.insert(v);
            if arena.owner(v) == Owner::Adam {
                // Adam keeps the play outside the attractor; a non-attracted
                // Adam vertex with edges always has an escape edge.
                if let Some(&e) = arena
                    .out_edges(v)
                    .iter()
                    .find(|&&e| !attracted[arena.edge(e).to.index()])
                {
                    adam_strategy.insert(v, e);
                }
            }
        }
    }
    let result = SolveResult {
        winner: if attracted[arena.initial().index()] {
            Owner::Eve
        } else {
            Owner::Adam
        },
        eve_region,
        adam_region,
        eve_strategy,
        adam_strategy,
    };
    result.assert_determinacy(arena);
    verify_forced_reach(arena, Owner::Eve, &result.eve_region, &result.eve_strategy, target);
    verify_forced_avoid(arena, Owner::Adam, &result.adam_region, &result.adam_strategy, target);
    result
}

/// Solve the safety game: Eve wins from the vertices out of which she can
/// avoid `forbidden` forever (plays that end in a terminal vertex without
/// having visited `forbidden` are safe).
pub fn solve_safety_game(arena: &Arena, forbidden: &BTreeSet<VertexId>) -> SolveResult {
    let n = arena.vertex_count();
    let mut forbidden_mask = alloc::vec![false; n];
    for &v in forbidden {
        forbidden_mask[v.index()] = true;
    }
    let within = alloc::vec![true; n];
    let (attracted, strat) = attractor(arena, Owner::Adam, &forbidden_mask, &within);
    let mut eve_region = BTreeSet::new();
    let mut adam_region = BTreeSet::new();
    let mut eve_strategy = PositionalStrategy::new();
    let mut adam_strategy = PositionalStrategy::new();
    for v in arena.vertex_ids() {
        if attracted[v.index()] {
            adam_region.insert(v);
            if arena.owner(v) == Owner::Adam {
                if let Some(e) = strat[v.index()] {
                    adam_strategy.insert(v, e);
                }
            }
        } else {
            eve_region.insert(v);
            if arena.owner(v) == Owner::Eve {
                if let Some(&e) = arena
                    .out_edges(v)
                    .iter()
                    .find(|&&e| !attracted[arena.edge(e).to.index()])
                {
                    eve_strategy.insert(v, e);
                }
            }
        }
    }
    let result = SolveResult {
        winner: if attracted[arena.initial().index()] {
            Owner::Adam
        } else {
            Owner::Eve
        },
        eve_region,
        adam_region,
        eve_strategy,
        adam_strategy,
    };
    result.assert_determinacy(arena);
    verify_forced_avoid(arena, Owner::Eve, &result.eve_region, &result.eve_strategy, forbidden);
    verify_forced_reach(arena, Owner::Adam, &result.adam_region, &result.adam_strategy, forbidden);
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::ArenaBuilder;

    fn named(arena: &Arena, name: &str) -> VertexId {
        arena.vertex_by_name(name).unwrap()
    }

    #[test]
    fn initial_in_target_wins_immediately() {
        let mut b = ArenaBuilder::new(0);
        b.vertex("v", Owner::Adam, 0)
            .edge_epsilon("v", "v")
            .initial("v")
            .target("v");
        let arena = b.finish().unwrap();
        let result = solve_reachability_game(&arena, arena.target());
        assert_eq!(result.winner, Owner::Eve);
    }

    #[test]
    fn adam_escapes_through_his_own_loop() {
        // Adam can loop at "a" forever instead of moving to the target.
        let mut b = ArenaBuilder::new(0);
        b.vertex("a", Owner::Adam, 0)
            .vertex("f", Owner::Eve, 0)
            .edge_epsilon("a", "a")
            .edge_epsilon("a", "f")
            .initial("a")
            .target("f");
        let arena = b.finish().unwrap();
        let result = solve_reachability_game(&arena, arena.target());
        assert_eq!(result.winner, Owner::Adam);
        // His witness is the self-loop.
        let a = named(&arena, "a");
        assert_eq!(result.adam_strategy.get(&a), Some(&EdgeId(0)));
    }

    #[test]
    fn eve_threads_through_adam_forced_moves() {
        // a(Eve) -> b(Adam) -> {f, c}; c -> f. Adam cannot avoid f.
        let mut b = ArenaBuilder::new(0);
        b.vertex("a", Owner::Eve, 0)
            .vertex("b", Owner::Adam, 0)
            .vertex("c", Owner::Adam, 0)
            .vertex("f", Owner::Eve, 0)
            .vertex("trap", Owner::Eve, 0)
            .edge_epsilon("a", "b")
            .edge_epsilon("a", "trap")
            .edge_epsilon("trap", "trap")
            .edge_epsilon("b", "f")
            .edge_epsilon("b", "c")
            .edge_epsilon("c", "f")
            .initial("a");
        b.target("f");
        let arena = b.finish().unwrap();
        let result = solve_reachability_game(&arena, arena.target());
        assert_eq!(result.winner, Owner::Eve);
        // Eve's move at "a" must be the edge towards "b", not the trap.
        assert_eq!(result.eve_strategy.get(&named(&arena, "a")), Some(&EdgeId(0)));
        assert!(result.adam_region.contains(&named(&arena, "trap")));
    }

    #[test]
    fn dead_ends_never_reach() {
        // Terminal non-target vertex: the play ends there, Adam's.
        let mut b = ArenaBuilder::new(0);
        b.vertex("a", Owner::Eve, 0)
            .vertex("dead", Owner::Adam, 0)
            .vertex("f", Owner::Eve, 0)
            .edge_epsilon("a", "dead")
            .edge_epsilon("a", "f")
            .initial("a")
            .target("f");
        let arena = b.finish().unwrap();
        let result = solve_reachability_game(&arena, arena.target());
        assert_eq!(result.winner, Owner::Eve);
        assert!(result.adam_region.contains(&named(&arena, "dead")));
    }

    #[test]
    fn safety_mirrors_reachability() {
        // Same arena solved both ways: Eve-safety == Adam fails to reach.
        let mut b = ArenaBuilder::new(0);
        b.vertex("a", Owner::Eve, 0)
            .vertex("b", Owner::Adam, 0)
            .vertex("bad", Owner::Eve, 0)
            .edge_epsilon("a", "b")
            .edge_epsilon("a", "a")
            .edge_epsilon("b", "bad")
            .edge_epsilon("b", "a")
            .edge_epsilon("bad", "bad")
            .initial("a");
        let arena = b.finish().unwrap();
        let bad: BTreeSet<VertexId> = [named(&arena, "bad")].into_iter().collect();
        let safety = solve_safety_game(&arena, &bad);
        // Eve survives by looping at "a" (never handing the play to Adam).
        assert_eq!(safety.winner, Owner::Eve);
        assert_eq!(safety.eve_strategy.get(&named(&arena, "a")), Some(&EdgeId(1)));
        // Adam's reachability dual: roles swapped means Adam attracts to bad.
        assert!(safety.adam_region.contains(&named(&arena, "b")));
        assert!(!safety.adam_region.contains(&named(&arena, "a")));
    }

    #[test]
    fn safety_terminal_is_safe() {
        let mut b = ArenaBuilder::new(0);
        b.vertex("a", Owner::Eve, 0)
            .vertex("end", Owner::Adam, 0)
            .vertex("bad", Owner::Eve, 0)
            .edge_epsilon("a", "end")
            .edge_epsilon("a", "bad")
            .edge_epsilon("bad", "bad")
            .initial("a");
        let arena = b.finish().unwrap();
        let bad: BTreeSet<VertexId> = [named(&arena, "bad")].into_iter().collect();
        let result = solve_safety_game(&arena, &bad);
        // Eve moves to the terminal vertex; the play ends safely.
        assert_eq!(result.winner, Owner::Eve);
        assert!(result.eve_region.contains(&named(&arena, "end")));
    }
}

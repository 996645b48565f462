//! Alternating safety / must-reach fixpoint chain and the ranks it induces.
//!
//! The chain analyses a directed graph together with a *transient* vertex
//! set — one that every path is allowed to visit only finitely often. It
//! grows an increasing sequence of vertex sets: odd steps add the vertices
//! all of whose paths avoid the transient set until they reach the previous
//! set (if they ever do), even steps add the vertices all of whose paths
//! are finite or reach the previous set. On a chronological arena of width
//! `W` the chain covers every vertex within `2W` steps; the least step at
//! which a vertex enters the chain is its rank.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use super::TransformError;
use crate::arena::{Arena, VertexId};
use crate::graphutil::{component_has_cycle, strongly_connected_components};

/// The fixpoint chain of [`compute_ranks`] and the vertex ranks it induces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankAssignment {
    /// The increasing chain of vertex sets, starting at the empty set and
    /// ending at the full vertex set.
    pub chain: Vec<BTreeSet<VertexId>>,
    /// For every vertex, the least chain index (at least 1) whose set
    /// contains it.
    pub rank: BTreeMap<VertexId, u32>,
}

/// Run the alternating fixpoint chain on `arena`'s underlying digraph.
///
/// Owners, counter actions, colors, and the initial vertex play no role;
/// only the edge relation and `transient` do. `width` bounds the chain: the
/// computation fails with [`TransformError::RankOverrun`] if the chain has
/// not covered every vertex after `2 * width` steps (on a chronological
/// arena of width `width` it always has).
///
/// # Errors
///
/// [`TransformError::TransientCycle`] if some cycle passes through
/// `transient` (then a path visits it infinitely often and no rank exists);
/// [`TransformError::RankOverrun`] as above.
pub fn compute_ranks(
    arena: &Arena,
    transient: &BTreeSet<VertexId>,
    width: u32,
) -> Result<RankAssignment, TransformError> {
    let n = arena.vertex_count();
    let adjacency: Vec<Vec<usize>> = arena
        .vertex_ids()
        .map(|v| {
            arena
                .out_edges(v)
                .iter()
                .map(|&e| arena.edge(e).to.index())
                .collect()
        })
        .collect();
    for component in strongly_connected_components(&adjacency) {
        if component_has_cycle(&adjacency, &component)
            && component
                .iter()
                .any(|&v| transient.contains(&VertexId(v as u32)))
        {
            return Err(TransformError::TransientCycle);
        }
    }

    let all: BTreeSet<VertexId> = arena.vertex_ids().collect();
    let limit = 2 * width;
    let mut chain = vec![BTreeSet::new()];
    while chain.last() != Some(&all) {
        let step = chain.len();
        if step > limit as usize {
            return Err(TransformError::RankOverrun { limit });
        }
        let previous = chain.last().expect("chain starts nonempty");
        let next = if step % 2 == 1 {
            avoid_until(arena, transient, previous)
        } else {
            reach_or_die(arena, previous, n)
        };
        // A single step may add nothing while the other operator still can
        // (when every vertex reaches the transient set, the first avoid
        // step is empty and the following must-reach step covers); only the
        // step budget decides when the chain is truly stuck.
        chain.push(next);
    }

    let mut rank = BTreeMap::new();
    for (step, set) in chain.iter().enumerate().skip(1) {
        for &v in set {
            rank.entry(v).or_insert(step as u32);
        }
    }
    Ok(RankAssignment { chain, rank })
}

/// Vertices all of whose paths avoid `transient` until the first vertex of
/// `previous`, if any: the complement of the least set that contains the
/// uncovered transient vertices and is closed under taking uncovered
/// predecessors.
fn avoid_until(
    arena: &Arena,
    transient: &BTreeSet<VertexId>,
    previous: &BTreeSet<VertexId>,
) -> BTreeSet<VertexId> {
    let mut bad = vec![false; arena.vertex_count()];
    let mut queue: Vec<VertexId> = Vec::new();
    for &v in transient {
        if !previous.contains(&v) {
            bad[v.index()] = true;
            queue.push(v);
        }
    }
    while let Some(w) = queue.pop() {
        for &e in arena.in_edges(w) {
            let u = arena.edge(e).from;
            if !bad[u.index()] && !previous.contains(&u) {
                bad[u.index()] = true;
                queue.push(u);
            }
        }
    }
    arena.vertex_ids().filter(|v| !bad[v.index()]).collect()
}

/// Vertices all of whose paths are finite or reach `previous`: the least
/// set containing `previous` and the terminal vertices that is closed under
/// "every out-edge leads into the set".
fn reach_or_die(arena: &Arena, previous: &BTreeSet<VertexId>, n: usize) -> BTreeSet<VertexId> {
    let mut good = vec![false; n];
    let mut remaining: Vec<usize> = arena.vertex_ids().map(|v| arena.out_edges(v).len()).collect();
    let mut queue: Vec<VertexId> = Vec::new();
    for v in arena.vertex_ids() {
        if previous.contains(&v) || remaining[v.index()] == 0 {
            good[v.index()] = true;
            queue.push(v);
        }
    }
    while let Some(w) = queue.pop() {
        for &e in arena.in_edges(w) {
            let u = arena.edge(e).from;
            if good[u.index()] {
                continue;
            }
            remaining[u.index()] -= 1;
            if remaining[u.index()] == 0 {
                good[u.index()] = true;
                queue.push(u);
            }
        }
    }
    arena.vertex_ids().filter(|v| good[v.index()]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::{ArenaBuilder, Owner};
    use crate::counter::CounterAction;

    /// A counter-free arena used purely as a digraph.
    fn digraph(vertices: &[&str], edges: &[(&str, &str)]) -> Arena {
        let mut builder = ArenaBuilder::new(0);
        for name in vertices {
            builder.vertex(*name, Owner::Adam, 2);
        }
        for (from, to) in edges {
            builder.edge(*from, *to, CounterAction::epsilon(0));
        }
        builder.initial(vertices[0]);
        builder.finish().expect("test digraph is well-formed")
    }

    fn set(arena: &Arena, names: &[&str]) -> BTreeSet<VertexId> {
        names
            .iter()
            .map(|n| arena.vertex_by_name(n).expect("known vertex"))
            .collect()
    }

    #[test]
    fn empty_transient_ranks_everything_first() {
        let arena = digraph(&["a", "b"], &[("a", "b"), ("b", "a")]);
        let ranks = compute_ranks(&arena, &BTreeSet::new(), 2).expect("chain covers");
        assert_eq!(ranks.chain.len(), 2);
        assert!(ranks.chain[0].is_empty());
        assert_eq!(ranks.chain[1].len(), 2);
        assert!(ranks.rank.values().all(|&r| r == 1));
    }

    #[test]
    fn pinned_two_step_chain() {
        // u -> f -> u' with f transient: u' is clean outright; f and u must
        // first walk their transient prefix off, entering at the even step.
        let arena = digraph(&["u", "f", "u'"], &[("u", "f"), ("f", "u'")]);
        let transient = set(&arena, &["f"]);
        let ranks = compute_ranks(&arena, &transient, 2).expect("chain covers");
        assert_eq!(ranks.chain[1], set(&arena, &["u'"]));
        assert_eq!(ranks.chain[2], set(&arena, &["u", "f", "u'"]));
        let rank_of = |n: &str| ranks.rank[&arena.vertex_by_name(n).unwrap()];
        assert_eq!(rank_of("u'"), 1);
        assert_eq!(rank_of("f"), 2);
        assert_eq!(rank_of("u"), 2);
    }

    #[test]
    fn a_safe_loop_ranks_third() {
        // v can loop forever without touching f, so v is neither clean (one
        // of its paths hits f) nor must-reach (the loop never arrives); it
        // enters only at the second odd step, once f is already covered.
        let arena = digraph(&["v", "f", "t"], &[("v", "v"), ("v", "f"), ("f", "t")]);
        let transient = set(&arena, &["f"]);
        let ranks = compute_ranks(&arena, &transient, 2).expect("chain covers");
        let rank_of = |n: &str| ranks.rank[&arena.vertex_by_name(n).unwrap()];
        assert_eq!(rank_of("t"), 1);
        assert_eq!(rank_of("f"), 2);
        assert_eq!(rank_of("v"), 3);
    }

    #[test]
    fn chain_is_monotone_and_ranks_are_least_indices() {
        let arena = digraph(&["v", "f", "t"], &[("v", "v"), ("v", "f"), ("f", "t")]);
        let transient = set(&arena, &["f"]);
        let ranks = compute_ranks(&arena, &transient, 2).expect("chain covers");
        for window in ranks.chain.windows(2) {
            assert!(window[0].is_subset(&window[1]));
        }
        assert_eq!(ranks.chain.last().unwrap().len(), arena.vertex_count());
        for v in arena.vertex_ids() {
            let r = ranks.rank[&v] as usize;
            assert!(ranks.chain[r].contains(&v));
            assert!(!ranks.chain[r - 1].contains(&v));
        }
    }

    #[test]
    fn a_stalled_avoid_step_does_not_end_the_chain() {
        // Every vertex reaches the terminal transient f, so the first avoid
        // step adds nothing — but the following must-reach step covers the
        // whole (acyclic) graph. The empty step must not abort the chain.
        let arena = digraph(&["u", "w", "f"], &[("u", "w"), ("w", "f")]);
        let transient = set(&arena, &["f"]);
        let ranks = compute_ranks(&arena, &transient, 2).expect("chain covers");
        assert_eq!(ranks.chain[1].len(), 0);
        assert_eq!(ranks.chain[2].len(), 3);
        assert!(ranks.rank.values().all(|&r| r == 2));
    }

    #[test]
    fn a_chain_deeper_than_the_budget_overruns() {
        // The safe-loop instance needs three steps; a width-1 budget allows
        // only two, so the chain must give up rather than spin.
        let arena = digraph(&["v", "f", "t"], &[("v", "v"), ("v", "f"), ("f", "t")]);
        let transient = set(&arena, &["f"]);
        let err = compute_ranks(&arena, &transient, 1).unwrap_err();
        assert_eq!(err, TransformError::RankOverrun { limit: 2 });
    }

    #[test]
    fn transient_cycles_are_refused() {
        let looped = digraph(&["a"], &[("a", "a")]);
        let err = compute_ranks(&looped, &set(&looped, &["a"]), 2).unwrap_err();
        assert_eq!(err, TransformError::TransientCycle);

        let two_cycle = digraph(&["a", "b"], &[("a", "b"), ("b", "a")]);
        let err = compute_ranks(&two_cycle, &set(&two_cycle, &["b"]), 2).unwrap_err();
        assert_eq!(err, TransformError::TransientCycle);
    }

    #[test]
    fn tight_width_overruns() {
        // Covering needs three steps; width 1 only grants two.
        let arena = digraph(&["v", "f", "t"], &[("v", "v"), ("v", "f"), ("f", "t")]);
        let transient = set(&arena, &["f"]);
        let err = compute_ranks(&arena, &transient, 1).unwrap_err();
        assert_eq!(err, TransformError::RankOverrun { limit: 2 });
    }
}

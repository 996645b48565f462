//! Exact values of bounded-counter games on acyclic arenas.
//!
//! On a well-founded arena every play is finite, so the value — the least
//! sup of counter values Eve can guarantee — is computed by backward
//! induction over configurations `(vertex, valuation)`, with no cap: Eve
//! minimizes, Adam maximizes, and a finished play is worth the largest
//! counter value it ever saw.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::arena::{Arena, Owner, VertexId};
use crate::counter::{CounterAction, Op};
use crate::solve::SolveError;

/// Apply an action to an exact (uncapped) valuation.
fn step(valuation: &[u32], action: &CounterAction) -> Vec<u32> {
    valuation
        .iter()
        .enumerate()
        .map(|(i, &c)| match action.op(i) {
            Op::Skip => c,
            Op::Inc => c + 1,
            Op::Reset => 0,
        })
        .collect()
}

/// The minimax value of the game from `(v, valuation)`: the largest counter
/// value seen from here on (including the current valuation), with Eve
/// minimizing and Adam maximizing. Plays stop at target vertices when the
/// arena has any, and at terminal vertices always.
fn minimax(
    arena: &Arena,
    stop_at_target: bool,
    memo: &mut BTreeMap<(VertexId, Vec<u32>), u32>,
    v: VertexId,
    valuation: Vec<u32>,
) -> u32 {
    if let Some(&known) = memo.get(&(v, valuation.clone())) {
        return known;
    }
    let here = valuation.iter().copied().max().unwrap_or(0);
    let stopped =
        (stop_at_target && arena.is_target(v)) || arena.out_edges(v).is_empty();
    let value = if stopped {
        here
    } else {
        let continuations = arena.out_edges(v).iter().map(|&e| {
            let edge = arena.edge(e);
            minimax(arena, stop_at_target, memo, edge.to, step(&valuation, &edge.action))
        });
        let best = match arena.owner(v) {
            Owner::Eve => continuations.min(),
            Owner::Adam => continuations.max(),
        }
        .expect("non-terminal vertices have successors");
        here.max(best)
    };
    memo.insert((v, valuation), value);
    value
}

/// Value of the bounded game from every vertex of an acyclic arena, each
/// starting from the all-zero valuation.
///
/// Returns one value per vertex, indexed by vertex id. Plays stop at target
/// vertices when the arena has a target set; otherwise they run until a
/// terminal vertex. Errors with [`SolveError::CyclicInput`] on cyclic
/// arenas — values there need the capped construction, not induction.
pub fn solve_dag_bgame(arena: &Arena) -> Result<Vec<u32>, SolveError> {
    if !arena.is_acyclic() {
        return Err(SolveError::CyclicInput);
    }
    let stop_at_target = !arena.target().is_empty();
    let mut memo = BTreeMap::new();
    let zero = alloc::vec![0u32; arena.counters()];
    Ok(arena
        .vertex_ids()
        .map(|v| minimax(arena, stop_at_target, &mut memo, v, zero.clone()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::ArenaBuilder;

    #[test]
    fn chain_of_increments_counts_its_length() {
        let mut b = ArenaBuilder::new(1);
        b.vertex("a", Owner::Eve, 0)
            .vertex("b", Owner::Eve, 0)
            .vertex("c", Owner::Eve, 0)
            .edge("a", "b", CounterAction::single(Op::Inc))
            .edge("b", "c", CounterAction::single(Op::Inc))
            .initial("a");
        let arena = b.finish().unwrap();
        assert_eq!(solve_dag_bgame(&arena).unwrap(), alloc::vec![2, 1, 0]);
    }

    #[test]
    fn eve_minimizes_adam_maximizes() {
        let mut b = ArenaBuilder::new(1);
        b.vertex("eve", Owner::Eve, 0)
            .vertex("adam", Owner::Adam, 0)
            .vertex("cheap", Owner::Eve, 0)
            .vertex("steep", Owner::Eve, 0)
            .edge_epsilon("eve", "cheap")
            .edge("eve", "steep", CounterAction::single(Op::Inc))
            .edge_epsilon("adam", "cheap")
            .edge("adam", "steep", CounterAction::single(Op::Inc))
            .initial("eve");
        let arena = b.finish().unwrap();
        let values = solve_dag_bgame(&arena).unwrap();
        let eve = arena.vertex_by_name("eve").unwrap();
        let adam = arena.vertex_by_name("adam").unwrap();
        assert_eq!(values[eve.index()], 0);
        assert_eq!(values[adam.index()], 1);
    }

    #[test]
    fn resets_do_not_erase_the_peak() {
        // The sup is over the whole play: a reset after two increments
        // still leaves the peak at two.
        let mut b = ArenaBuilder::new(1);
        b.vertex("a", Owner::Eve, 0)
            .vertex("b", Owner::Eve, 0)
            .vertex("c", Owner::Eve, 0)
            .vertex("d", Owner::Eve, 0)
            .edge("a", "b", CounterAction::single(Op::Inc))
            .edge("b", "c", CounterAction::single(Op::Inc))
            .edge("c", "d", CounterAction::single(Op::Reset))
            .initial("a");
        let arena = b.finish().unwrap();
        assert_eq!(solve_dag_bgame(&arena).unwrap()[0], 2);
    }

    #[test]
    fn plays_stop_at_the_target() {
        // f is a target with an expensive outgoing edge; stopping there
        // means the edge is never taken.
        let mut b = ArenaBuilder::new(1);
        b.vertex("a", Owner::Eve, 0)
            .vertex("f", Owner::Eve, 0)
            .vertex("z", Owner::Eve, 0)
            .edge_epsilon("a", "f")
            .edge("f", "z", CounterAction::single(Op::Inc))
            .initial("a")
            .target("f");
        let arena = b.finish().unwrap();
        assert_eq!(solve_dag_bgame(&arena).unwrap()[0], 0);
    }

    #[test]
    fn cyclic_arenas_are_rejected() {
        let mut b = ArenaBuilder::new(1);
        b.vertex("a", Owner::Eve, 0)
            .edge("a", "a", CounterAction::single(Op::Inc))
            .initial("a");
        let arena = b.finish().unwrap();
        assert!(matches!(
            solve_dag_bgame(&arena),
            Err(SolveError::CyclicInput)
        ));
    }

    #[test]
    fn two_counters_track_independently() {
        // Counter 0 increments twice, counter 1 once with a reset of 0.
        let mut b = ArenaBuilder::new(2);
        b.vertex("a", Owner::Eve, 0)
            .vertex("b", Owner::Eve, 0)
            .vertex("c", Owner::Eve, 0)
            .edge("a", "b", CounterAction(alloc::vec![Op::Inc, Op::Skip]))
            .edge("b", "c", CounterAction(alloc::vec![Op::Reset, Op::Inc]))
            .initial("a");
        let arena = b.finish().unwrap();
        assert_eq!(solve_dag_bgame(&arena).unwrap()[0], 1);
    }
}

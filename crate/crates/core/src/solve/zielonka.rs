//! Parity game solving by Zielonka's recursive algorithm, with positional
//! witnesses for both players and an always-on self-check.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::arena::{Arena, ArenaBuilder, EdgeId, Owner, VertexId};
use crate::counter::CounterAction;
use crate::graphutil::{component_has_cycle, strongly_connected_components};
use crate::solve::{attractor, PositionalStrategy, SolveResult};

/// Solve the parity game on `arena`: Eve wins a play iff the largest color
/// visited infinitely often is even. Finite plays (the arena may have
/// terminal vertices) count for Eve: a play that ends satisfies the parity
/// objective vacuously, matching the conventions of the strategy evaluators.
///
/// Returns winning regions and positional witnesses for both players.
/// Witness entries are omitted for terminal vertices (there is nothing to
/// choose).
pub fn solve_parity_game(arena: &Arena) -> SolveResult {
    // Terminal vertices would break the recursion (attractors assume the
    // opponent can always move). Give them even self-loops on a private
    // copy: the loop is the only cycle through them and its color is the
    // terminal's own, so recolor terminals to 0 — they lie on no other
    // cycle, hence their color never decides a verdict.
    let has_terminals = arena.vertex_ids().any(|v| arena.out_edges(v).is_empty());
    let solved: Arena;
    let work: &Arena = if has_terminals {
        let mut b = ArenaBuilder::new(arena.counters());
        for v in arena.vertex_ids() {
            let color = if arena.out_edges(v).is_empty() {
                0
            } else {
                arena.color(v)
            };
            b.vertex(arena.name(v), arena.owner(v), color);
        }
        for e in arena.edge_ids() {
            let edge = arena.edge(e);
            b.edge(
                arena.name(edge.from),
                arena.name(edge.to),
                edge.action.clone(),
            );
        }
        for v in arena.vertex_ids() {
            if arena.out_edges(v).is_empty() {
                b.edge(
                    arena.name(v),
                    arena.name(v),
                    CounterAction::epsilon(arena.counters()),
                );
            }
        }
        b.initial(arena.name(arena.initial()));
        solved = b.finish().expect("augmenting a valid arena stays valid");
        &solved
    } else {
        arena
    };

    let n = work.vertex_count();
    let mut eve_strat: Vec<Option<EdgeId>> = alloc::vec![None; n];
    let mut adam_strat: Vec<Option<EdgeId>> = alloc::vec![None; n];
    let within = alloc::vec![true; n];
    let (eve_mask, adam_mask) = zielonka(work, &within, &mut eve_strat, &mut adam_strat);

    let mut eve_region = BTreeSet::new();
    let mut adam_region = BTreeSet::new();
    let mut eve_strategy = PositionalStrategy::new();
    let mut adam_strategy = PositionalStrategy::new();
    for v in work.vertex_ids() {
        if eve_mask[v.index()] {
            eve_region.insert(v);
        } else {
            debug_assert!(adam_mask[v.index()], "every vertex is decided");
            adam_region.insert(v);
        }
    }
    verify_parity_witness(work, Owner::Eve, &eve_region, &eve_strat);
    verify_parity_witness(work, Owner::Adam, &adam_region, &adam_strat);
    for v in work.vertex_ids() {
        // Drop augmentation artifacts: moves for terminal vertices point at
        // self-loops that do not exist on the caller's arena.
        if arena.out_edges(v).is_empty() {
            continue;
        }
        match (eve_mask[v.index()], work.owner(v)) {
            (true, Owner::Eve) => {
                if let Some(e) = eve_strat[v.index()] {
                    eve_strategy.insert(v, e);
                }
            }
            (false, Owner::Adam) => {
                if let Some(e) = adam_strat[v.index()] {
                    adam_strategy.insert(v, e);
                }
            }
            _ => {}
        }
    }
    let result = SolveResult {
        winner: if eve_mask[arena.initial().index()] {
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
    result
}

/// The recursion. `within` selects the current subgame (always a total
/// sub-arena); strategy entries are written for every vertex a player wins,
/// bottom-up, so the last write for a vertex comes from the call that
/// settled its region.
fn zielonka(
    arena: &Arena,
    within: &[bool],
    eve_strat: &mut Vec<Option<EdgeId>>,
    adam_strat: &mut Vec<Option<EdgeId>>,
) -> (Vec<bool>, Vec<bool>) {
    let n = arena.vertex_count();
    let mut top_color = None;
    for v in arena.vertex_ids() {
        if within[v.index()] {
            top_color = Some(top_color.map_or(arena.color(v), |c: u32| c.max(arena.color(v))));
        }
    }
    let Some(p) = top_color else {
        return (alloc::vec![false; n], alloc::vec![false; n]);
    };
    let player = if p % 2 == 0 { Owner::Eve } else { Owner::Adam };
    let strat_of = |player: Owner,
                    eve_strat: &mut Vec<Option<EdgeId>>,
                    adam_strat: &mut Vec<Option<EdgeId>>,
                    v: VertexId,
                    e: EdgeId| {
        match player {
            Owner::Eve => eve_strat[v.index()] = Some(e),
            Owner::Adam => adam_strat[v.index()] = Some(e),
        }
    };

    let mut top_mask = alloc::vec![false; n];
    for v in arena.vertex_ids() {
        if within[v.index()] && arena.color(v) == p {
            top_mask[v.index()] = true;
        }
    }
    let (a_mask, a_strat) = attractor(arena, player, &top_mask, within);
    let sub: Vec<bool> = (0..n).map(|i| within[i] && !a_mask[i]).collect();
    let (we, wa) = zielonka(arena, &sub, eve_strat, adam_strat);
    let sub_opponent = match player {
        Owner::Eve => &wa,
        Owner::Adam => &we,
    };
    if sub_opponent.iter().all(|&x| !x) {
        // The opponent wins nothing below: `player` wins all of `within`.
        // Strategy: attractor edges towards the top color, any within-edge
        // on the top color itself, recursion's strategy elsewhere.
        for v in arena.vertex_ids() {
            if !within[v.index()] || arena.owner(v) != player {
                continue;
            }
            if top_mask[v.index()] {
                let e = arena
                    .out_edges(v)
                    .iter()
                    .copied()
                    .find(|&e| within[arena.edge(e).to.index()])
                    .expect("subgames of total arenas are total");
                strat_of(player, eve_strat, adam_strat, v, e);
            } else if a_mask[v.index()] {
                if let Some(e) = a_strat[v.index()] {
                    strat_of(player, eve_strat, adam_strat, v, e);
                }
            }
            // Vertices in `sub` keep the recursion's entries.
        }
        let within_mask: Vec<bool> = within.to_vec();
        let empty = alloc::vec![false; n];
        return match player {
            Owner::Eve => (within_mask, empty),
            Owner::Adam => (empty, within_mask),
        };
    }
    // The opponent wins part of the subgame; they also win its attractor
    // inside `within`. Re-solve the rest.
    let opponent = player.opponent();
    let (b_mask, b_strat) = attractor(arena, opponent, sub_opponent, within);
    for v in arena.vertex_ids() {
        if b_mask[v.index()] && arena.owner(v) == opponent {
            if let Some(e) = b_strat[v.index()] {
                strat_of(opponent, eve_strat, adam_strat, v, e);
            }
        }
    }
    let sub2: Vec<bool> = (0..n).map(|i| within[i] && !b_mask[i]).collect();
    let (we2, wa2) = zielonka(arena, &sub2, eve_strat, adam_strat);
    let (player2, opponent2) = match player {
        Owner::Eve => (&we2, &wa2),
        Owner::Adam => (&wa2, &we2),
    };
    let player_final: Vec<bool> = player2.clone();
    let opponent_final: Vec<bool> = (0..n).map(|i| b_mask[i] || opponent2[i]).collect();
    match player {
        Owner::Eve => (player_final, opponent_final),
        Owner::Adam => (opponent_final, player_final),
    }
}

/// Panic unless `strategy` wins the parity objective for `player` from every
/// vertex of `region`: the strategy-restricted subgraph must stay inside the
/// region, keep a move available everywhere, and contain no cycle whose
/// largest color has the opponent's parity.
fn verify_parity_witness(
    arena: &Arena,
    player: Owner,
    region: &BTreeSet<VertexId>,
    strategy: &[Option<EdgeId>],
) {
    if region.is_empty() {
        return;
    }
    let n = arena.vertex_count();
    let mut restricted: Vec<Vec<usize>> = alloc::vec![Vec::new(); n];
    for &v in region {
        let edges: Vec<EdgeId> = if arena.owner(v) == player {
            let e = strategy[v.index()]
                .unwrap_or_else(|| panic!("parity witness missing a move at {}", arena.name(v)));
            alloc::vec![e]
        } else {
            arena.out_edges(v).to_vec()
        };
        assert!(!edges.is_empty(), "parity subgame must be total");
        for e in edges {
            let t = arena.edge(e).to;
            assert!(
                region.contains(&t),
                "parity witness lets the play escape at {}",
                arena.name(v)
            );
            restricted[v.index()].push(t.index());
        }
    }
    // No cycle in the restricted graph may be dominated by an opponent
    // color: for each such color c, the subgraph on colors <= c must have no
    // cycle through a color-c vertex.
    let bad_parity = match player {
        Owner::Eve => 1,
        Owner::Adam => 0,
    };
    let mut bad_colors: Vec<u32> = region
        .iter()
        .map(|&v| arena.color(v))
        .filter(|c| c % 2 == bad_parity)
        .collect();
    bad_colors.sort_unstable();
    bad_colors.dedup();
    for c in bad_colors {
        let mut adj: Vec<Vec<usize>> = alloc::vec![Vec::new(); n];
        for &v in region {
            if arena.color(v) > c {
                continue;
            }
            for &t in &restricted[v.index()] {
                if arena.color(VertexId(t as u32)) <= c {
                    adj[v.index()].push(t);
                }
            }
        }
        for component in strongly_connected_components(&adj) {
            if !component_has_cycle(&adj, &component) {
                continue;
            }
            if component
                .iter()
                .any(|&v| region.contains(&VertexId(v as u32)) && arena.color(VertexId(v as u32)) == c)
            {
                panic!(
                    "parity witness for {player} admits a cycle dominated by color {c}"
                );
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::ArenaBuilder;

    #[test]
    fn single_even_loop_is_eves() {
        let mut b = ArenaBuilder::new(0);
        b.vertex("v", Owner::Adam, 2).edge_epsilon("v", "v").initial("v");
        let arena = b.finish().unwrap();
        assert_eq!(solve_parity_game(&arena).winner, Owner::Eve);
    }

    #[test]
    fn single_odd_loop_is_adams() {
        let mut b = ArenaBuilder::new(0);
        b.vertex("v", Owner::Eve, 1).edge_epsilon("v", "v").initial("v");
        let arena = b.finish().unwrap();
        assert_eq!(solve_parity_game(&arena).winner, Owner::Adam);
    }

    #[test]
    fn eve_picks_the_even_loop() {
        // Eve at a fork: an odd loop and an even loop.
        let mut b = ArenaBuilder::new(0);
        b.vertex("fork", Owner::Eve, 0)
            .vertex("odd", Owner::Eve, 1)
            .vertex("even", Owner::Eve, 2)
            .edge_epsilon("fork", "odd")
            .edge_epsilon("fork", "even")
            .edge_epsilon("odd", "odd")
            .edge_epsilon("even", "even")
            .initial("fork");
        let arena = b.finish().unwrap();
        let result = solve_parity_game(&arena);
        assert_eq!(result.winner, Owner::Eve);
        let fork = arena.vertex_by_name("fork").unwrap();
        assert_eq!(result.eve_strategy.get(&fork), Some(&EdgeId(1)));
        // The odd loop vertex itself is Adam's region.
        let odd = arena.vertex_by_name("odd").unwrap();
        assert!(result.adam_region.contains(&odd));
    }

    #[test]
    fn adam_escalates_to_his_color() {
        // Cycle alternating colors 2 and 3: max infinitely-often color is 3.
        let mut b = ArenaBuilder::new(0);
        b.vertex("x", Owner::Eve, 2)
            .vertex("y", Owner::Adam, 3)
            .edge_epsilon("x", "y")
            .edge_epsilon("y", "x")
            .initial("x");
        let arena = b.finish().unwrap();
        assert_eq!(solve_parity_game(&arena).winner, Owner::Adam);
    }

    #[test]
    fn priority_nesting() {
        // Adam may stay on color 1, but staying forever lets Eve's larger
        // even color never appear — except Adam's loop passes through a
        // color-2 vertex, so looping is good for Eve; Adam must exit to the
        // odd sink, which he owns, to win... but the sink favors him. Eve's
        // region must be exactly the part from which she forces the 2-cycle.
        let mut b = ArenaBuilder::new(0);
        b.vertex("a", Owner::Adam, 1)
            .vertex("b", Owner::Eve, 2)
            .vertex("sink", Owner::Adam, 3)
            .edge_epsilon("a", "b")
            .edge_epsilon("b", "a")
            .edge_epsilon("a", "sink")
            .edge_epsilon("sink", "sink")
            .initial("a");
        let arena = b.finish().unwrap();
        let result = solve_parity_game(&arena);
        // Adam escapes to the odd sink from "a".
        assert_eq!(result.winner, Owner::Adam);
        assert_eq!(result.adam_region.len(), 3);
    }

    #[test]
    fn terminal_vertices_count_for_eve() {
        // A play that ends satisfies parity vacuously, whoever is stuck.
        let mut b = ArenaBuilder::new(0);
        b.vertex("a", Owner::Adam, 1)
            .vertex("end", Owner::Adam, 1)
            .edge_epsilon("a", "end")
            .initial("a");
        let arena = b.finish().unwrap();
        let result = solve_parity_game(&arena);
        assert_eq!(result.winner, Owner::Eve);
        // No witness entries refer to edges that do not exist.
        for (_, &e) in result.eve_strategy.iter().chain(result.adam_strategy.iter()) {
            assert!(e.index() < arena.edge_count());
        }
    }

    #[test]
    fn three_color_chain() {
        // v3 (color 3, Adam) -> v2 (color 2, Eve) -> v1 (color 1, Eve) -> v3
        // and v2 -> v2. Eve wins everywhere by looping at v2.
        let mut b = ArenaBuilder::new(0);
        b.vertex("v3", Owner::Adam, 3)
            .vertex("v2", Owner::Eve, 2)
            .vertex("v1", Owner::Eve, 1)
            .edge_epsilon("v3", "v2")
            .edge_epsilon("v2", "v1")
            .edge_epsilon("v2", "v2")
            .edge_epsilon("v1", "v3")
            .initial("v3");
        let arena = b.finish().unwrap();
        let result = solve_parity_game(&arena);
        assert_eq!(result.winner, Owner::Eve);
        assert_eq!(result.eve_region.len(), 3);
        let v2 = arena.vertex_by_name("v2").unwrap();
        assert_eq!(result.eve_strategy.get(&v2), Some(&EdgeId(2)));
    }
}

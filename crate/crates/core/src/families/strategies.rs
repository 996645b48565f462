//! Strategy machines witnessing the memory bounds of the layered families.
//!
//! The constructors read the generated arena and key their behavior off the
//! generator's naming scheme ([`super::games`]): memory updates watch which
//! choice column `v_{n}` an edge enters, and moves prefer increment or reset
//! edges depending on the current state. Moves themselves are
//! name-independent where possible so the machines stay total on the family's
//! truncated boundary columns.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{arith, FamilyError};
use crate::arena::{Arena, EdgeId, Owner, VertexId};
use crate::counter::Op;
use crate::machine::{MemoryStructure, StateId, StrategyMachine};

/// Column index of a choice vertex `v_{n}`.
fn column_of(name: &str) -> Option<u64> {
    name.strip_prefix("v_")?.parse().ok()
}

/// Level and column of a layered counter vertex `u_{p}_{n}`.
fn level_column_of(name: &str) -> Option<(u32, u64)> {
    let (level, column) = name.strip_prefix("u_")?.split_once('_')?;
    Some((level.parse().ok()?, column.parse().ok()?))
}

/// The move at an Eve vertex: the first edge carrying `prefer`, falling back
/// to the first increment edge and then to the first edge of any kind, so
/// the machine is total wherever the preferred instruction is unavailable.
fn preferred_edge(arena: &Arena, v: VertexId, prefer: Op) -> Option<EdgeId> {
    let find = |op: Op| {
        arena
            .out_edges(v)
            .iter()
            .copied()
            .find(|&e| arena.edge(e).action.op(0) == op)
    };
    let choice = match prefer {
        Op::Reset => find(Op::Reset).or_else(|| find(Op::Inc)),
        _ => find(Op::Inc),
    };
    choice.or_else(|| arena.out_edges(v).first().copied())
}

/// Move table for a machine whose states either accumulate increments or
/// demand a reset: `resetting(state)` picks the preference.
fn counter_moves(
    arena: &Arena,
    states: usize,
    resetting: impl Fn(usize) -> bool,
) -> BTreeMap<(VertexId, StateId), EdgeId> {
    let mut moves = BTreeMap::new();
    for v in arena.vertex_ids() {
        if arena.owner(v) != Owner::Eve || arena.out_edges(v).is_empty() {
            continue;
        }
        for s in 0..states {
            let prefer = if resetting(s) { Op::Reset } else { Op::Inc };
            let e = preferred_edge(arena, v, prefer).expect("vertex has out-edges");
            moves.insert((v, StateId(s as u32)), e);
        }
    }
    moves
}

fn require_one_counter(arena: &Arena) -> Result<(), FamilyError> {
    if arena.counters() != 1 {
        return Err(FamilyError::MalformedArena("expected a one-counter arena"));
    }
    Ok(())
}

/// Four-state machine for the single-level layered game: three increments,
/// then insist on a reset.
///
/// States `i1 < i2 < i3 < r` advance on every increment and fall back to
/// `i1` on every reset, so the machine tolerates exactly three increments
/// between resets. On [`super::games::g1_game`] it keeps the counter at 3
/// no matter how large the game is.
pub fn g1_strategy_4state(arena: &Arena) -> Result<StrategyMachine, FamilyError> {
    require_one_counter(arena)?;
    let names = vec!["i1", "i2", "i3", "r"]
        .into_iter()
        .map(String::from)
        .collect();
    let mut update = Vec::with_capacity(4);
    for s in 0..4usize {
        let row = arena
            .edge_ids()
            .map(|e| match arena.edge(e).action.op(0) {
                Op::Reset => StateId(0),
                Op::Inc => StateId(s.min(2) as u32 + 1),
                Op::Skip => StateId(s as u32),
            })
            .collect();
        update.push(row);
    }
    let memory = MemoryStructure::new(names, StateId(0), update)
        .expect("four fixed states form a valid structure");
    let moves = counter_moves(arena, 4, |s| s == 3);
    Ok(StrategyMachine::new(memory, moves))
}

/// Three-state machine for the single-level layered game: advance only at
/// every second column.
///
/// The memory ignores most of the play and steps `i -> j -> r` whenever an
/// edge enters a choice column `v_{n}` with `n` congruent to `phase` mod 2;
/// resets send it back to `i`. Counting gray columns instead of increments
/// costs one extra unit: on [`super::games::g1_game`] the counter stays at
/// the game's bound plus one (at most 4 for bound 3).
pub fn g1_strategy_3state(arena: &Arena, phase: u32) -> Result<StrategyMachine, FamilyError> {
    require_one_counter(arena)?;
    let names = vec!["i", "j", "r"].into_iter().map(String::from).collect();
    let gray = u64::from(phase) % 2;
    let mut update = Vec::with_capacity(3);
    for s in 0..3usize {
        let row = arena
            .edge_ids()
            .map(|e| {
                let edge = arena.edge(e);
                if edge.action.op(0) == Op::Reset {
                    return StateId(0);
                }
                match column_of(arena.name(edge.to)) {
                    Some(col) if col % 2 == gray => StateId(s.min(1) as u32 + 1),
                    _ => StateId(s as u32),
                }
            })
            .collect();
        update.push(row);
    }
    let memory = MemoryStructure::new(names, StateId(0), update)
        .expect("three fixed states form a valid structure");
    let moves = counter_moves(arena, 3, |s| s == 2);
    Ok(StrategyMachine::new(memory, moves))
}

/// Gray-column period of each level: level `p` advances its component every
/// `(p + 1) * level_step(p, bound)` columns.
fn level_periods(levels: u32, bound: u32) -> Result<Vec<u64>, FamilyError> {
    (1..=levels)
        .map(|p| {
            arith::level_step(p, bound)?
                .checked_mul(u64::from(p) + 1)
                .ok_or(FamilyError::Overflow)
        })
        .collect()
}

/// Product machine for the layered game: one three-state component per
/// level, `3^levels` states in total.
///
/// Component `p` advances `i -> j -> r` whenever an edge enters a choice
/// column congruent to `phases[p - 1]` modulo the level's gray period, and
/// every reset returns *all* components to `i`. At a counter vertex of level
/// `p`, component `p` alone picks the move. On
/// [`super::games::gkn_game`]`(levels, bound)` the per-level costs add up,
/// keeping every reachable configuration within `levels * (levels + 3)`.
///
/// Note that reaching the target cannot be enforced on the layered game with
/// two or more levels: interior columns below a level's increment stride
/// have the reset as their only move, so the adversary may stall there
/// forever at zero cost. The bound on reachable configurations is therefore
/// the guarantee this machine offers; plays the adversary lets progress
/// reach the target within it.
pub fn gkn_strategy(
    arena: &Arena,
    levels: u32,
    bound: u32,
    phases: &[u64],
) -> Result<StrategyMachine, FamilyError> {
    require_one_counter(arena)?;
    if levels < 1 {
        return Err(FamilyError::OutOfRange("levels must be at least 1"));
    }
    if phases.len() != levels as usize {
        return Err(FamilyError::OutOfRange("need one phase per level"));
    }
    let periods = level_periods(levels, bound)?;
    let states = 3u64
        .checked_pow(levels)
        .filter(|&s| s <= 100_000)
        .ok_or(FamilyError::Overflow)? as usize;
    let levels = levels as usize;

    let names: Vec<String> = (0..states)
        .map(|id| {
            digits_of(id, levels)
                .iter()
                .map(|&d| LETTERS[d as usize])
                .collect()
        })
        .collect();
    let mut update = Vec::with_capacity(states);
    for id in 0..states {
        let row = arena
            .edge_ids()
            .map(|e| {
                let edge = arena.edge(e);
                if edge.action.op(0) == Op::Reset {
                    return StateId(0);
                }
                match column_of(arena.name(edge.to)) {
                    Some(col) => {
                        let mut digits = digits_of(id, levels);
                        for (p, digit) in digits.iter_mut().enumerate() {
                            if col % periods[p] == phases[p] % periods[p] {
                                *digit = (*digit + 1).min(2);
                            }
                        }
                        StateId(id_of(&digits) as u32)
                    }
                    None => StateId(id as u32),
                }
            })
            .collect();
        update.push(row);
    }
    let memory = MemoryStructure::new(names, StateId(0), update)
        .expect("product states are distinct and well-shaped");

    let mut moves = BTreeMap::new();
    for v in arena.vertex_ids() {
        if arena.owner(v) != Owner::Eve || arena.out_edges(v).is_empty() {
            continue;
        }
        let Some((level, _)) = level_column_of(arena.name(v)) else {
            return Err(FamilyError::MalformedArena(
                "counter vertices must be named u_{level}_{column}",
            ));
        };
        if level < 1 || level as usize > levels {
            return Err(FamilyError::MalformedArena(
                "counter vertex level exceeds the machine's levels",
            ));
        }
        for id in 0..states {
            let digit = digits_of(id, levels)[level as usize - 1];
            let prefer = if digit == 2 { Op::Reset } else { Op::Inc };
            let e = preferred_edge(arena, v, prefer).expect("vertex has out-edges");
            moves.insert((v, StateId(id as u32)), e);
        }
    }
    Ok(StrategyMachine::new(memory, moves))
}

const LETTERS: [char; 3] = ['i', 'j', 'r'];

/// Per-level component states of product state `id`, level 1 first.
fn digits_of(mut id: usize, levels: usize) -> Vec<u8> {
    (0..levels)
        .map(|_| {
            let d = (id % 3) as u8;
            id /= 3;
            d
        })
        .collect()
}

fn id_of(digits: &[u8]) -> usize {
    digits
        .iter()
        .rev()
        .fold(0usize, |acc, &d| acc * 3 + d as usize)
}

/// Scan phase assignments lexicographically and return the first product
/// machine that keeps every reachable configuration within `target`,
/// together with its phases; `None` if no assignment does.
///
/// Bounded occupancy is the criterion (rather than the evaluated
/// reach-the-target cost) because the adversary can stall forever at zero
/// cost in the layered game's reset-only columns, making every evaluation
/// infinite regardless of phases; see [`gkn_strategy`].
pub fn calibrate_gkn_phases(
    arena: &Arena,
    levels: u32,
    bound: u32,
    target: u32,
) -> Result<Option<(Vec<u64>, StrategyMachine)>, FamilyError> {
    let periods = level_periods(levels, bound)?;
    periods
        .iter()
        .try_fold(1u64, |acc, &p| acc.checked_mul(p))
        .filter(|&c| c <= 10_000)
        .ok_or(FamilyError::Overflow)?;

    let mut phases = vec![0u64; levels as usize];
    loop {
        let machine = gkn_strategy(arena, levels, bound, &phases)?;
        let graph = crate::config::restrict_by_strategy(arena, &machine, target)
            .map_err(|_| FamilyError::MalformedArena("strategy restriction failed"))?;
        if graph.first_exceeded().is_none() {
            return Ok(Some((phases, machine)));
        }
        // Odometer step over the mixed-radix phase space.
        let mut i = 0;
        loop {
            phases[i] += 1;
            if phases[i] < periods[i] {
                break;
            }
            phases[i] = 0;
            i += 1;
            if i == levels as usize {
                return Ok(None);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{evaluate_strategy_reachability, restrict_by_strategy, ConfigGraph};
    use crate::counter::Value;
    use crate::families::games::{cyclic_counter_game, g1_game, gkn_game};

    fn value_of(arena: &Arena, machine: &StrategyMachine, cap: u32) -> Value {
        evaluate_strategy_reachability(arena, machine, cap)
            .expect("strategy evaluates")
            .value
    }

    #[test]
    fn four_states_realize_the_bound() {
        let arena = g1_game(3).unwrap();
        let machine = g1_strategy_4state(&arena).unwrap();
        assert_eq!(machine.state_count(), 4);
        assert_eq!(value_of(&arena, &machine, 3), Value::Finite(3));

        let small = g1_game(2).unwrap();
        let machine = g1_strategy_4state(&small).unwrap();
        assert!(value_of(&small, &machine, 4).at_most(3));
    }

    #[test]
    fn three_states_cost_one_extra() {
        let arena = g1_game(3).unwrap();
        let machine = g1_strategy_3state(&arena, 0).unwrap();
        assert!(value_of(&arena, &machine, 5).at_most(4));

        let small = g1_game(2).unwrap();
        let machine = g1_strategy_3state(&small, 0).unwrap();
        assert_eq!(value_of(&small, &machine, 5), Value::Finite(4));
    }

    /// Column of the counter vertex a configuration sits at, if any.
    fn row_of(arena: &Arena, graph: &ConfigGraph, c: crate::config::ConfigId) -> Option<u64> {
        arena
            .name(graph.node(c).vertex)
            .strip_prefix("u_")?
            .parse()
            .ok()
    }

    /// Every reset taken after another reset happens at a strictly smaller
    /// column — resets make irreversible progress toward the target, which
    /// is why the play cannot cycle.
    fn assert_resets_march_toward_the_target(arena: &Arena, graph: &ConfigGraph) {
        let mut resets = Vec::new();
        for (c, _) in graph.nodes() {
            for &(e, landing) in graph.successors(c) {
                if arena.edge(e).action.op(0) == Op::Reset {
                    resets.push((row_of(arena, graph, c).expect("resets leave u rows"), landing));
                }
            }
        }
        assert!(!resets.is_empty(), "the strategy should reset somewhere");
        for &(column, landing) in &resets {
            let mut seen = alloc::vec![false; graph.len()];
            let mut stack = alloc::vec![landing];
            seen[landing.index()] = true;
            while let Some(c) = stack.pop() {
                for &(e, next) in graph.successors(c) {
                    if arena.edge(e).action.op(0) == Op::Reset {
                        let later = row_of(arena, graph, c).expect("resets leave u rows");
                        assert!(
                            later < column,
                            "reset at column {later} does not progress past the \
                             earlier reset at column {column}"
                        );
                    }
                    if !seen[next.index()] {
                        seen[next.index()] = true;
                        stack.push(next);
                    }
                }
            }
        }
    }

    #[test]
    fn resets_march_toward_the_target() {
        let arena = g1_game(3).unwrap();
        for machine in [
            g1_strategy_4state(&arena).unwrap(),
            g1_strategy_3state(&arena, 0).unwrap(),
        ] {
            let graph = restrict_by_strategy(&arena, &machine, 5).unwrap();
            assert_resets_march_toward_the_target(&arena, &graph);
        }
    }

    #[test]
    fn layered_strategy_is_a_product_of_cyclic_components() {
        let arena = gkn_game(2, 2).unwrap();
        let machine = gkn_strategy(&arena, 2, 2, &[0, 0]).unwrap();
        assert_eq!(machine.state_count(), 9);
        assert_eq!(machine.memory.state_name(StateId(0)), "ii");
        assert!(machine.memory.state_by_name("rr").is_some());

        // Two levels cost at most 2 * (2 + 3): no reachable configuration
        // exceeds 10.
        let graph = restrict_by_strategy(&arena, &machine, 10).unwrap();
        assert!(graph.first_exceeded().is_none());
        assert!(graph.max_within() <= 10);

        // Reaching the target is a different matter: the adversary can stall
        // forever at zero cost in a reset-only column (u_2_1 and u_2_2 have
        // no increment), so the evaluated cost is infinite for any machine.
        assert_eq!(value_of(&arena, &machine, 10), Value::Infinite);
    }

    #[test]
    fn single_level_product_collapses_to_the_three_state_machine() {
        let layered = gkn_game(1, 2).unwrap();
        let single = g1_game(2).unwrap();
        let a = gkn_strategy(&layered, 1, 2, &[0]).unwrap();
        let b = g1_strategy_3state(&single, 0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn calibration_scans_phases_in_order() {
        let arena = gkn_game(2, 2).unwrap();
        let (phases, machine) = calibrate_gkn_phases(&arena, 2, 2, 10)
            .unwrap()
            .expect("some phase assignment meets the bound");
        assert_eq!(phases, alloc::vec![0, 0]);
        let graph = restrict_by_strategy(&arena, &machine, 10).unwrap();
        assert!(graph.first_exceeded().is_none());
        // A tighter target than the strategy's guarantee is unattainable.
        assert!(calibrate_gkn_phases(&arena, 2, 2, 3).unwrap().is_none());
    }

    #[test]
    fn foreign_arenas_are_rejected() {
        let two_counters = cyclic_counter_game(2).unwrap();
        assert_eq!(
            g1_strategy_4state(&two_counters).unwrap_err(),
            FamilyError::MalformedArena("expected a one-counter arena")
        );
        let single = g1_game(2).unwrap();
        assert!(gkn_strategy(&single, 1, 2, &[0]).is_err());
        let layered = gkn_game(2, 2).unwrap();
        assert_eq!(
            gkn_strategy(&layered, 2, 2, &[0]).unwrap_err(),
            FamilyError::OutOfRange("need one phase per level")
        );
    }
}

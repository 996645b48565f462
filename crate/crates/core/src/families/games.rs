//! Generators for the benchmark game families.
//!
//! Naming schemes are part of the contract: strategy constructors and tests
//! resolve vertices by these names.
//!
//! * [`tradeoff_game`]: entry chain `in_0..`, hub `v`, loop vertices
//!   `u{option}_{step}`, exit chain `out_1..`, target `F`.
//! * [`cyclic_counter_game`]: a single vertex `v`.
//! * [`g1_game`]: columns `v_{n}` (choice) and `u_{n}` (counter), target `F`.
//! * [`gkn_game`]: columns `v_{n}` and per-level `u_{p}_{n}`, target `F`.
//!
//! [`g1_game`] is written out explicitly rather than delegating to
//! [`gkn_game`] with one level, so the test that the two agree cross-checks
//! the schema instantiation against the concrete edge list.

use alloc::format;
use alloc::vec;

use super::{arith, FamilyError};
use crate::arena::{Arena, ArenaBuilder, BuildError, Owner};
use crate::counter::{CounterAction, Op};

/// Finish a generated arena; the generators only build well-formed graphs,
/// so any violation here is a bug in this module.
fn finish(builder: ArenaBuilder) -> Arena {
    let arena = builder
        .finish()
        .unwrap_or_else(|e: BuildError| panic!("family generator built a bad arena: {e}"));
    debug_assert!(arena.validate().is_empty());
    arena
}

/// One-counter game whose value is `bound` while every strategy machine
/// trades memory against the counter bound it can guarantee.
///
/// An entry chain of `bound` increments leads to the hub `v`. For each
/// `option` in `1..=bound` a loop through `u{option}_1..` performs
/// `bound - option` increments, one reset, and `option - 1` increments before
/// returning to the hub; an exit chain of `bound` further increments reaches
/// the target. Stopping at the target caps the play's cost at twice `bound`
/// for a memoryless player, while `bound + 1` states suffice to realize the
/// optimal cost of exactly `bound`.
pub fn tradeoff_game(bound: u32) -> Result<Arena, FamilyError> {
    if bound < 1 {
        return Err(FamilyError::OutOfRange("bound must be at least 1"));
    }
    if bound > 1_000 {
        return Err(FamilyError::Overflow);
    }
    let n = bound as usize;
    let mut b = ArenaBuilder::new(1);

    for step in 0..n {
        b.vertex(format!("in_{step}"), Owner::Eve, 2);
    }
    b.vertex("v", Owner::Eve, 2);
    for option in 1..=n {
        for step in 1..n {
            b.vertex(format!("u{option}_{step}"), Owner::Eve, 2);
        }
    }
    for step in 1..n {
        b.vertex(format!("out_{step}"), Owner::Eve, 2);
    }
    b.vertex("F", Owner::Eve, 2);

    for step in 0..n {
        let from = format!("in_{step}");
        let to = if step + 1 < n {
            format!("in_{}", step + 1)
        } else {
            "v".into()
        };
        b.edge(from, to, CounterAction::single(Op::Inc));
    }
    for option in 1..=n {
        // `bound - option` increments, one reset, `option - 1` increments.
        let mut ops = vec![Op::Inc; n - option];
        ops.push(Op::Reset);
        ops.extend(vec![Op::Inc; option - 1]);
        for (step, op) in ops.iter().enumerate() {
            let from = if step == 0 {
                "v".into()
            } else {
                format!("u{option}_{step}")
            };
            let to = if step + 1 < n {
                format!("u{option}_{}", step + 1)
            } else {
                "v".into()
            };
            b.edge(from, to, CounterAction::single(*op));
        }
    }
    for step in 0..n {
        let from = if step == 0 {
            "v".into()
        } else {
            format!("out_{step}")
        };
        let to = if step + 1 < n {
            format!("out_{}", step + 1)
        } else {
            "F".into()
        };
        b.edge(from, to, CounterAction::single(Op::Inc));
    }

    b.initial("in_0").target("F");
    Ok(finish(b))
}

/// One vertex, `counters` self-loops: loop `j` increments counter `j` and
/// resets counter `j - 1` (cyclically).
///
/// Keeping every counter at most 1 requires playing the loops round-robin,
/// which takes exactly `counters` memory states; fewer states force some
/// counter above any bound.
pub fn cyclic_counter_game(counters: usize) -> Result<Arena, FamilyError> {
    if counters < 2 {
        return Err(FamilyError::OutOfRange("counters must be at least 2"));
    }
    if counters > 64 {
        return Err(FamilyError::Overflow);
    }
    let mut b = ArenaBuilder::new(counters);
    b.vertex("v", Owner::Eve, 2);
    for j in 0..counters {
        let mut ops = vec![Op::Skip; counters];
        ops[j] = Op::Inc;
        ops[(j + counters - 1) % counters] = Op::Reset;
        b.edge("v", "v", CounterAction(ops));
    }
    b.initial("v");
    Ok(finish(b))
}

/// Single-level layered game with `2 * bound` columns: the adversary walks
/// down choice columns `v_{n}`, Eve answers at counter columns `u_{n}` with
/// an increment one column down or a reset two columns up.
///
/// From the top column Eve can reach `F` with cost `bound` using `bound + 1`
/// memory states, with cost `bound + 1` using three states, and cannot keep
/// the cost below `2 * bound` with one state.
pub fn g1_game(bound: u32) -> Result<Arena, FamilyError> {
    if bound < 1 {
        return Err(FamilyError::OutOfRange("bound must be at least 1"));
    }
    if bound > 10_000 {
        return Err(FamilyError::Overflow);
    }
    let top = 2 * bound as usize;
    let mut b = ArenaBuilder::new(1);

    for n in 0..=top {
        b.vertex(format!("v_{n}"), Owner::Adam, 2);
    }
    for n in 0..=top {
        b.vertex(format!("u_{n}"), Owner::Eve, 2);
    }
    b.vertex("F", Owner::Eve, 2);

    // The adversary steps down one column at a time...
    for n in 0..top {
        b.edge_epsilon(format!("v_{}", n + 1), format!("v_{n}"));
    }
    // ...or stops at the current column.
    for n in 0..=top {
        b.edge_epsilon(format!("v_{n}"), format!("u_{n}"));
    }
    // Increments go one column down; from the bottom they reach the target.
    for n in 0..top {
        b.edge(
            format!("u_{}", n + 1),
            format!("v_{n}"),
            CounterAction::single(Op::Inc),
        );
    }
    b.edge("u_0", "F", CounterAction::single(Op::Inc));
    // Resets jump two columns up, where that column exists.
    for n in 0..=top {
        if n + 2 <= top {
            b.edge(
                format!("u_{n}"),
                format!("v_{}", n + 2),
                CounterAction::single(Op::Reset),
            );
        }
    }

    b.initial(format!("v_{top}")).target("F");
    Ok(finish(b))
}

/// Layered game with `levels` levels and `suffix_length(levels, bound) + 1`
/// columns, generalizing [`g1_game`].
///
/// The adversary walks down choice columns `v_{n}` one step at a time and may
/// stop at any level's counter column `u_{p}_{n}`. Level `p` increments jump
/// down [`arith::level_step`]`(p, bound)` columns and its resets jump up
/// `p + 1` times that distance, so higher levels move in coarser strides.
/// Eve needs products of per-level cyclic memories to keep the single counter
/// bounded.
pub fn gkn_game(levels: u32, bound: u32) -> Result<Arena, FamilyError> {
    if levels < 1 {
        return Err(FamilyError::OutOfRange("levels must be at least 1"));
    }
    if bound < 1 {
        return Err(FamilyError::OutOfRange("bound must be at least 1"));
    }
    let top = arith::suffix_length(levels, bound)?;
    let vertex_count = top
        .checked_add(1)
        .and_then(|cols| cols.checked_mul(u64::from(levels) + 1))
        .and_then(|n| n.checked_add(1))
        .ok_or(FamilyError::Overflow)?;
    if vertex_count > 200_000 {
        return Err(FamilyError::Overflow);
    }
    let top = top as usize;
    let step: vec::Vec<usize> = (1..=levels)
        .map(|p| arith::level_step(p, bound).map(|d| d as usize))
        .collect::<Result<_, _>>()?;

    let mut b = ArenaBuilder::new(1);
    for n in 0..=top {
        b.vertex(format!("v_{n}"), Owner::Adam, 2);
    }
    for n in 0..=top {
        for p in 1..=levels {
            b.vertex(format!("u_{p}_{n}"), Owner::Eve, 2);
        }
    }
    b.vertex("F", Owner::Eve, 2);

    // The adversary steps down one column at a time...
    for n in 0..top {
        b.edge_epsilon(format!("v_{}", n + 1), format!("v_{n}"));
    }
    // ...or stops at any level of the current column.
    for n in 0..=top {
        for p in 1..=levels {
            b.edge_epsilon(format!("v_{n}"), format!("u_{p}_{n}"));
        }
    }
    // Level-p increments jump down d(p) columns.
    for n in 0..top {
        for p in 1..=levels {
            let d = step[p as usize - 1];
            if n + d <= top {
                b.edge(
                    format!("u_{p}_{}", n + d),
                    format!("v_{n}"),
                    CounterAction::single(Op::Inc),
                );
            }
        }
    }
    // From the bottom column, one increment reaches the target.
    for p in 1..=levels {
        b.edge(format!("u_{p}_0"), "F", CounterAction::single(Op::Inc));
    }
    // Level-p resets jump up (p + 1) * d(p) columns.
    for n in 0..=top {
        for p in 1..=levels {
            let jump = (p as usize + 1) * step[p as usize - 1];
            if n + jump <= top {
                b.edge(
                    format!("u_{p}_{n}"),
                    format!("v_{}", n + jump),
                    CounterAction::single(Op::Reset),
                );
            }
        }
    }

    b.initial(format!("v_{top}")).target("F");
    Ok(finish(b))
}

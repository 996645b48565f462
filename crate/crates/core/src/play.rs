//! Plays and their values.
//!
//! A play is a walk through the arena: either a finite edge sequence or a
//! lasso (finite prefix plus a cycle repeated forever). The *value* of a play
//! is the supremum of all counter values it ever reaches; the parity verdict
//! of a lasso is decided by the largest color occurring on its cycle.

use alloc::vec::Vec;
use core::fmt;

use crate::arena::{Arena, EdgeId, Owner, VertexId};
use crate::counter::{Value};

/// A finite or ultimately-periodic walk, given as edge sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Play {
    /// A finite walk.
    Finite(Vec<EdgeId>),
    /// `prefix` followed by `cycle` repeated forever. The cycle must be
    /// nonempty and closed.
    Lasso {
        /// Edges before the loop; may be empty.
        prefix: Vec<EdgeId>,
        /// The loop; nonempty, and its last edge returns to its first
        /// edge's source.
        cycle: Vec<EdgeId>,
    },
}

impl Play {
    /// The vertex the play starts from, if it has any edge.
    pub fn start(&self, arena: &Arena) -> Option<VertexId> {
        let first = match self {
            Play::Finite(edges) => edges.first(),
            Play::Lasso { prefix, cycle } => prefix.first().or_else(|| cycle.first()),
        };
        first.map(|&e| arena.edge(e).from)
    }
}

/// A malformed play: edges that do not chain, or a degenerate lasso.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlayError {
    /// Edge `second` does not start where edge `first` ends.
    NotChained {
        /// Offset of the earlier edge within the play (prefix then cycle).
        position: usize,
    },
    /// A lasso with an empty cycle.
    EmptyCycle,
    /// The cycle's last edge does not return to the cycle's first vertex.
    CycleNotClosed,
    /// An edge id out of range for the arena.
    UnknownEdge(EdgeId),
    /// An edge action's arity does not match the arena (the arena should be
    /// validated first; reported here for robustness).
    BadArity,
}

impl fmt::Display for PlayError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlayError::NotChained { position } => {
                write!(f, "edges at offsets {position} and {} do not chain", position + 1)
            }
            PlayError::EmptyCycle => write!(f, "lasso cycle is empty"),
            PlayError::CycleNotClosed => write!(f, "lasso cycle does not close"),
            PlayError::UnknownEdge(e) => write!(f, "edge {e} does not exist"),
            PlayError::BadArity => write!(f, "edge action arity does not match the arena"),
        }
    }
}

impl core::error::Error for PlayError {}

fn check_play(arena: &Arena, play: &Play) -> Result<(), PlayError> {
    let (prefix, cycle): (&[EdgeId], &[EdgeId]) = match play {
        Play::Finite(edges) => (edges.as_slice(), &[]),
        Play::Lasso { prefix, cycle } => {
            if cycle.is_empty() {
                return Err(PlayError::EmptyCycle);
            }
            (prefix.as_slice(), cycle.as_slice())
        }
    };
    let all: Vec<EdgeId> = prefix.iter().chain(cycle.iter()).copied().collect();
    for &e in &all {
        if e.index() >= arena.edge_count() {
            return Err(PlayError::UnknownEdge(e));
        }
    }
    for (position, pair) in all.windows(2).enumerate() {
        if arena.edge(pair[0]).to != arena.edge(pair[1]).from {
            return Err(PlayError::NotChained { position });
        }
    }
    if !cycle.is_empty() {
        let last = arena.edge(*cycle.last().unwrap()).to;
        let first = arena.edge(cycle[0]).from;
        if last != first {
            return Err(PlayError::CycleNotClosed);
        }
    }
    Ok(())
}

/// Exact value of a play: the supremum over time and counters of the counter
/// values along it, starting from zero.
///
/// A lasso has infinite value iff its cycle increments some counter it never
/// resets. Otherwise the supremum is realized within the prefix plus *two*
/// traversals of the cycle: after one traversal each counter's entry value
/// repeats (it is either reset inside the cycle or untouched by it), so the
/// second traversal reproduces the eventual periodic peaks. One traversal is
/// not enough — a counter can enter the second round carrying a higher value
/// than it entered the first.
pub fn play_value(arena: &Arena, play: &Play) -> Result<Value, PlayError> {
    check_play(arena, play)?;
    let k = arena.counters();
    let simulate = |edges: &mut dyn Iterator<Item = EdgeId>,
                    current: &mut Vec<u64>,
                    sup: &mut u64|
     -> Result<(), PlayError> {
        for e in edges {
            let action = &arena.edge(e).action;
            if action.arity() != k {
                return Err(PlayError::BadArity);
            }
            for (value, &op) in current.iter_mut().zip(action.0.iter()) {
                match op {
                    crate::counter::Op::Skip => {}
                    crate::counter::Op::Reset => *value = 0,
                    crate::counter::Op::Inc => {
                        *value += 1;
                        *sup = (*sup).max(*value);
                    }
                }
            }
        }
        Ok(())
    };
    let mut current = alloc::vec![0u64; k];
    let mut sup = 0u64;
    match play {
        Play::Finite(edges) => {
            simulate(&mut edges.iter().copied(), &mut current, &mut sup)?;
            Ok(Value::Finite(sup as u32))
        }
        Play::Lasso { prefix, cycle } => {
            // Divergence check: a counter incremented somewhere in the cycle
            // and reset nowhere in it grows forever.
            for i in 0..k {
                let mut inced = false;
                let mut reset = false;
                for &e in cycle {
                    let action = &arena.edge(e).action;
                    if action.arity() != k {
                        return Err(PlayError::BadArity);
                    }
                    match action.op(i) {
                        crate::counter::Op::Inc => inced = true,
                        crate::counter::Op::Reset => reset = true,
                        crate::counter::Op::Skip => {}
                    }
                }
                if inced && !reset {
                    return Ok(Value::Infinite);
                }
            }
            simulate(&mut prefix.iter().copied(), &mut current, &mut sup)?;
            simulate(&mut cycle.iter().copied(), &mut current, &mut sup)?;
            simulate(&mut cycle.iter().copied(), &mut current, &mut sup)?;
            Ok(Value::Finite(sup as u32))
        }
    }
}

/// Parity verdict of a lasso: the winner decided by the largest color among
/// the vertices visited infinitely often, i.e. the vertices on the cycle.
///
/// Even largest color means Eve wins. Finite plays have no parity verdict;
/// passing one is an error (`EmptyCycle`).
pub fn parity_of_lasso(arena: &Arena, play: &Play) -> Result<Owner, PlayError> {
    check_play(arena, play)?;
    let cycle = match play {
        Play::Finite(_) => return Err(PlayError::EmptyCycle),
        Play::Lasso { cycle, .. } => cycle,
    };
    // The vertices on the cycle are exactly the targets of its edges (the
    // source of the first edge is the target of the last).
    let max_color = cycle
        .iter()
        .map(|&e| arena.color(arena.edge(e).to))
        .max()
        .expect("cycle is nonempty");
    if max_color % 2 == 0 {
        Ok(Owner::Eve)
    } else {
        Ok(Owner::Adam)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::ArenaBuilder;
    use crate::counter::{CounterAction, Op};

    /// A single-vertex arena with one self-loop per action in `ops`.
    fn loop_arena(ops: &[&str]) -> Arena {
        let k = ops[0].len();
        let mut b = ArenaBuilder::new(k);
        b.vertex("v", Owner::Eve, 2).initial("v");
        for spec in ops {
            let action =
                CounterAction(spec.chars().map(|c| Op::from_symbol(c).unwrap()).collect());
            b.edge("v", "v", action);
        }
        b.finish().unwrap()
    }

    fn ids(xs: &[u32]) -> Vec<EdgeId> {
        xs.iter().map(|&x| EdgeId(x)).collect()
    }

    #[test]
    fn finite_play_value() {
        let arena = loop_arena(&["i", "r", "e"]);
        // i i i r i -> sup 3
        let play = Play::Finite(ids(&[0, 0, 0, 1, 0]));
        assert_eq!(play_value(&arena, &play).unwrap(), Value::Finite(3));
        // Empty play
        assert_eq!(
            play_value(&arena, &Play::Finite(Vec::new())).unwrap(),
            Value::Finite(0)
        );
    }

    #[test]
    fn lasso_diverges_without_reset() {
        let arena = loop_arena(&["i", "r"]);
        let play = Play::Lasso {
            prefix: Vec::new(),
            cycle: ids(&[0]),
        };
        assert_eq!(play_value(&arena, &play).unwrap(), Value::Infinite);
        // With a reset in the cycle the value is finite.
        let play = Play::Lasso {
            prefix: ids(&[0, 0]),
            cycle: ids(&[0, 1]),
        };
        assert_eq!(play_value(&arena, &play).unwrap(), Value::Finite(3));
    }

    #[test]
    fn lasso_needs_two_traversals() {
        // Cycle i i r i i i from zero: first pass peaks at 3 (i i -> 2? no:
        // 1,2 then reset, then 1,2,3). Entering the second pass at 3, the
        // two leading increments reach 5 before the reset. Sup = 5.
        let arena = loop_arena(&["i", "r"]);
        let play = Play::Lasso {
            prefix: Vec::new(),
            cycle: ids(&[0, 0, 1, 0, 0, 0]),
        };
        assert_eq!(play_value(&arena, &play).unwrap(), Value::Finite(5));
    }

    #[test]
    fn malformed_plays_are_rejected() {
        let mut b = ArenaBuilder::new(0);
        b.vertex("a", Owner::Eve, 0)
            .vertex("b", Owner::Adam, 0)
            .vertex("c", Owner::Eve, 0)
            .edge_epsilon("a", "b")
            .edge_epsilon("b", "c")
            .edge_epsilon("c", "a")
            .edge_epsilon("a", "c")
            .initial("a");
        let arena = b.finish().unwrap();
        // 0 then 3: edge 3 starts at "a" but edge 0 ends at "b".
        assert_eq!(
            play_value(&arena, &Play::Finite(ids(&[0, 3]))).unwrap_err(),
            PlayError::NotChained { position: 0 }
        );
        assert_eq!(
            play_value(
                &arena,
                &Play::Lasso {
                    prefix: Vec::new(),
                    cycle: Vec::new()
                }
            )
            .unwrap_err(),
            PlayError::EmptyCycle
        );
        // Cycle a->b->c does not close.
        assert_eq!(
            play_value(
                &arena,
                &Play::Lasso {
                    prefix: Vec::new(),
                    cycle: ids(&[0, 1])
                }
            )
            .unwrap_err(),
            PlayError::CycleNotClosed
        );
        assert_eq!(
            play_value(&arena, &Play::Finite(ids(&[9]))).unwrap_err(),
            PlayError::UnknownEdge(EdgeId(9))
        );
    }

    #[test]
    fn lasso_parity_uses_cycle_colors_only() {
        let mut b = ArenaBuilder::new(0);
        b.vertex("bad", Owner::Eve, 5)
            .vertex("x", Owner::Eve, 1)
            .vertex("y", Owner::Adam, 2)
            .edge_epsilon("bad", "x")
            .edge_epsilon("x", "y")
            .edge_epsilon("y", "x")
            .initial("bad");
        let arena = b.finish().unwrap();
        // Prefix passes color 5, but the cycle's max color is 2: Eve wins.
        let play = Play::Lasso {
            prefix: ids(&[0]),
            cycle: ids(&[1, 2]),
        };
        assert_eq!(parity_of_lasso(&arena, &play).unwrap(), Owner::Eve);
        // A self-contained odd cycle loses.
        let mut b = ArenaBuilder::new(0);
        b.vertex("x", Owner::Eve, 3)
            .vertex("y", Owner::Adam, 2)
            .edge_epsilon("x", "y")
            .edge_epsilon("y", "x")
            .initial("x");
        let arena = b.finish().unwrap();
        let play = Play::Lasso {
            prefix: Vec::new(),
            cycle: ids(&[0, 1]),
        };
        assert_eq!(parity_of_lasso(&arena, &play).unwrap(), Owner::Adam);
        // Finite plays have no verdict.
        assert!(parity_of_lasso(&arena, &Play::Finite(ids(&[0]))).is_err());
    }
}

//! Removal of the least color: mode split (even) and flag product (odd).

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::{SliceAssignment, TransformError};
use crate::arena::{Arena, ArenaBuilder, EdgeId, Owner, VertexId};
use crate::condition::ConditionSpec;
use crate::counter::{CounterAction, Op};
use crate::machine::{fresh_name, MemoryStructure, StateId, StrategyMachine};

/// Which copy of an original vertex a vertex of the even-removal output is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvenPart {
    /// The attractor-mode copy: the play is heading for safer ground, all
    /// colors are masked to 1.
    Attractor,
    /// The safe-mode copy: the play claims to stay clear of bad colors;
    /// color 0 reads as 2 here, every other color keeps its value.
    Safe,
    /// The choice vertex where Eve picks the next mode.
    Choice,
}

/// The even-removal output and the layout mapping it back to its input.
///
/// Vertex ids follow the input: vertex `v` becomes `3v` (attractor copy),
/// `3v + 1` (safe copy), and `3v + 2` (choice). Edge `e` becomes `2e` (the
/// attractor copy, into the successor's choice vertex) and `2e + 1` (the
/// safe copy, mode and counter action decided by the entered color); after
/// those come two choice edges per vertex, in vertex order.
#[derive(Debug, Clone)]
pub struct EvenRemoval {
    /// The transformed arena. It uses no color 0, carries one extra counter
    /// (appended last) that increments whenever a color 1 throws the safe
    /// mode back into attractor mode, and starts at the initial vertex's
    /// choice vertex.
    pub arena: Arena,
    original_edges: usize,
}

impl EvenRemoval {
    /// The attractor-mode copy of `v`.
    pub fn attractor_copy(&self, v: VertexId) -> VertexId {
        VertexId(3 * v.0)
    }

    /// The safe-mode copy of `v`.
    pub fn safe_copy(&self, v: VertexId) -> VertexId {
        VertexId(3 * v.0 + 1)
    }

    /// The choice vertex of `v`.
    pub fn choice(&self, v: VertexId) -> VertexId {
        VertexId(3 * v.0 + 2)
    }

    /// The original vertex behind a transformed vertex, and which copy it is.
    pub fn parts(&self, pv: VertexId) -> (VertexId, EvenPart) {
        let part = match pv.0 % 3 {
            0 => EvenPart::Attractor,
            1 => EvenPart::Safe,
            _ => EvenPart::Choice,
        };
        (VertexId(pv.0 / 3), part)
    }

    /// The original edge a transformed edge copies, or `None` on the choice
    /// edges, which have no original.
    pub fn source_edge(&self, pe: EdgeId) -> Option<EdgeId> {
        if pe.index() < 2 * self.original_edges {
            Some(EdgeId(pe.0 / 2))
        } else {
            None
        }
    }

    /// Index of the appended counter that counts safe-mode breakdowns.
    pub fn switch_counter(&self) -> usize {
        self.arena.counters() - 1
    }
}

/// Split every vertex of an arena whose least color is 0 into a safe and an
/// attractor mode, downgrading the objective to one without color 0.
///
/// In safe mode the play keeps its colors, except that color 0 — the reason
/// the mode is worth being in — reads as the even color 2. Entering a
/// color-1 vertex breaks the safe mode: the play is thrown into attractor
/// mode and the appended counter increments. Attractor mode masks every
/// color to 1, and after each step Eve chooses the next mode at a choice
/// vertex (Eve-owned, color 1, two silent edges). Entering a color above 1
/// in safe mode resets the appended counter: the objective starts over at a
/// more important color. A play that settles in safe mode forever realizes
/// its real colors; one that returns to attractor mode forever sees color 1
/// infinitely often and loses parity, so bounding the appended counter
/// bounds how often Eve may misjudge where the safe stretches are.
///
/// Targets carry over to the two mode copies (not to choice vertices);
/// chronological ranks do not survive the split and are dropped.
///
/// # Errors
///
/// [`TransformError::WrongMinColor`] if the least color is not 0.
pub fn remove_even_min_color(arena: &Arena) -> Result<EvenRemoval, TransformError> {
    let min_color = arena
        .vertex_ids()
        .map(|v| arena.color(v))
        .min()
        .expect("arenas are nonempty");
    if min_color != 0 {
        return Err(TransformError::WrongMinColor {
            found: min_color,
            expected: 0,
        });
    }

    let k = arena.counters();
    let mut builder = ArenaBuilder::new(k + 1);
    let mut taken = BTreeSet::new();
    let mut names: Vec<String> = Vec::with_capacity(3 * arena.vertex_count());
    for v in arena.vertex_ids() {
        let base = arena.name(v);
        let owner = arena.owner(v);
        let color = arena.color(v);
        let attractor = fresh_name(format!("{base}#A"), &mut taken);
        let safe = fresh_name(format!("{base}#S"), &mut taken);
        let choice = fresh_name(format!("{base}#C"), &mut taken);
        builder.vertex(attractor.clone(), owner, 1);
        builder.vertex(safe.clone(), owner, if color == 0 { 2 } else { color });
        builder.vertex(choice.clone(), Owner::Eve, 1);
        if arena.is_target(v) {
            builder.target(attractor.clone());
            builder.target(safe.clone());
        }
        names.push(attractor);
        names.push(safe);
        names.push(choice);
    }

    let extend = |action: &CounterAction, op: Op| {
        let mut ops = action.0.clone();
        ops.push(op);
        CounterAction(ops)
    };
    for e in arena.edge_ids() {
        let edge = arena.edge(e);
        let from = edge.from.index();
        let to = edge.to.index();
        // Attractor mode: keep moving, hand the mode choice to Eve.
        builder.edge(
            names[3 * from].clone(),
            names[3 * to + 2].clone(),
            extend(&edge.action, Op::Skip),
        );
        // Safe mode: the entered color decides mode and appended counter.
        match arena.color(edge.to) {
            0 => builder.edge(
                names[3 * from + 1].clone(),
                names[3 * to + 1].clone(),
                extend(&edge.action, Op::Skip),
            ),
            1 => builder.edge(
                names[3 * from + 1].clone(),
                names[3 * to].clone(),
                extend(&edge.action, Op::Inc),
            ),
            _ => builder.edge(
                names[3 * from + 1].clone(),
                names[3 * to + 1].clone(),
                extend(&edge.action, Op::Reset),
            ),
        };
    }
    for v in arena.vertex_ids() {
        let choice = names[3 * v.index() + 2].clone();
        builder.edge(
            choice.clone(),
            names[3 * v.index()].clone(),
            CounterAction::epsilon(k + 1),
        );
        builder.edge(
            choice,
            names[3 * v.index() + 1].clone(),
            CounterAction::epsilon(k + 1),
        );
    }
    builder.initial(names[3 * arena.initial().index() + 2].clone());
    let product = builder.finish().expect("mode split is a closed construction");
    Ok(EvenRemoval {
        arena: product,
        original_edges: arena.edge_count(),
    })
}

/// The odd-removal output: flag product, forbidden set, and the flag itself.
///
/// Vertex ids follow the input: vertex `v` becomes `2v` (flag fresh: no
/// color above 1 seen since the last slice column) and `2v + 1` (flag set).
/// Edge `e` becomes `2e` (taken with a fresh flag at its source) and
/// `2e + 1` (taken with the flag set).
#[derive(Debug, Clone)]
pub struct OddRemoval {
    /// The transformed arena: the flag product, with color 1 promoted to 2,
    /// chronological ranks and targets carried over.
    pub arena: Arena,
    /// The flag-fresh copies of slice-column vertices. Keeping the play out
    /// of this set forces a color above 1 strictly inside every window
    /// between consecutive slice columns (colors exactly at a slice column
    /// count for the window they close, since the flag resets only on the
    /// edges *leaving* that column).
    pub forbidden: BTreeSet<VertexId>,
    /// The two-state flag over the *original* arena's edges: state 0
    /// (fresh) at the start, to 1 (set) on edges entering a color above 1,
    /// back to 0 on edges leaving a slice column.
    pub flag: MemoryStructure,
}

impl OddRemoval {
    /// The copy of `v` with the flag set (`seen`) or fresh.
    pub fn with_flag(&self, v: VertexId, seen: bool) -> VertexId {
        VertexId(2 * v.0 + u32::from(seen))
    }

    /// The original vertex behind a transformed vertex and its flag value.
    pub fn parts(&self, pv: VertexId) -> (VertexId, bool) {
        (VertexId(pv.0 / 2), pv.0 % 2 == 1)
    }

    /// The original edge a transformed edge copies.
    pub fn source_edge(&self, pe: EdgeId) -> EdgeId {
        EdgeId(pe.0 / 2)
    }

    /// The transformed copy of edge `e` taken when the flag at its source
    /// reads `seen`.
    pub fn product_edge(&self, e: EdgeId, seen: bool) -> EdgeId {
        EdgeId(2 * e.0 + u32::from(seen))
    }

    /// The objective the transformed arena is to be solved under: counters
    /// bounded by `bound`, parity, and staying clear of [`Self::forbidden`].
    pub fn condition(&self, bound: u32) -> ConditionSpec {
        ConditionSpec::bounded_and_parity(bound).avoiding(self.forbidden.clone())
    }

    /// Carry a winning strategy machine on the transformed arena back to
    /// the original arena by folding the flag into its memory: the lifted
    /// machine remembers the pair (machine state, flag) and plays whatever
    /// the given machine plays at the flagged copy, doubling the state
    /// count.
    ///
    /// # Errors
    ///
    /// [`TransformError::ForeignMachine`] if the machine does not read the
    /// transformed arena's edges or moves off its vertices.
    pub fn lift(&self, machine: &StrategyMachine) -> Result<StrategyMachine, TransformError> {
        if machine.memory.edge_count() != self.arena.edge_count() {
            return Err(TransformError::ForeignMachine(
                "memory reads a different edge set",
            ));
        }
        machine.validate(&self.arena).map_err(|_| {
            TransformError::ForeignMachine("moves do not fit the transformed arena")
        })?;
        let original_edges = self.arena.edge_count() / 2;
        let states = machine.state_count();

        let mut taken = BTreeSet::new();
        let mut names = Vec::with_capacity(2 * states);
        let mut update = Vec::with_capacity(2 * states);
        for m in 0..states as u32 {
            for f in 0..2u32 {
                names.push(fresh_name(
                    format!(
                        "{}#{}",
                        machine.memory.state_name(StateId(m)),
                        self.flag.state_name(StateId(f))
                    ),
                    &mut taken,
                ));
                let mut row = Vec::with_capacity(original_edges);
                for e in 0..original_edges as u32 {
                    let flag_next = self.flag.next(StateId(f), EdgeId(e));
                    let machine_next = machine
                        .memory
                        .next(StateId(m), self.product_edge(EdgeId(e), f == 1));
                    row.push(StateId(2 * machine_next.0 + flag_next.0));
                }
                update.push(row);
            }
        }
        let initial = StateId(2 * machine.memory.initial().0 + self.flag.initial().0);
        let memory =
            MemoryStructure::new(names, initial, update).expect("lifted memory is well-formed");

        let mut moves = BTreeMap::new();
        for ((pv, m), pe) in machine.moves() {
            let (v, seen) = self.parts(pv);
            moves.insert(
                (v, StateId(2 * m.0 + u32::from(seen))),
                self.source_edge(pe),
            );
        }
        Ok(StrategyMachine::new(memory, moves))
    }
}

/// Ride a two-state flag along a chronological arena whose least color is
/// 1, promoting color 1 to 2 and forcing a color above 1 between
/// consecutive slice columns instead.
///
/// The flag starts fresh, is set by edges entering a color above 1, and is
/// cleared by edges leaving a slice column. Reaching a slice column with
/// the flag still fresh means the window just ending saw no color above 1
/// — those configurations make up [`OddRemoval::forbidden`], and the
/// transformed objective adds their avoidance to the bounded-parity
/// condition ([`OddRemoval::condition`]). A strategy winning that objective
/// passes a color above 1 in every window, so the promoted colors never
/// let an original color 1 dominate forever; folding the flag back into
/// the strategy's memory ([`OddRemoval::lift`]) wins the original parity
/// objective with twice the states.
///
/// # Errors
///
/// [`TransformError::WrongMinColor`] if the least color is not 1;
/// [`TransformError::MissingRanks`] if the arena lacks a complete
/// chronological ranking.
pub fn remove_odd_min_color(
    arena: &Arena,
    slices: &SliceAssignment,
) -> Result<OddRemoval, TransformError> {
    let min_color = arena
        .vertex_ids()
        .map(|v| arena.color(v))
        .min()
        .expect("arenas are nonempty");
    if min_color != 1 {
        return Err(TransformError::WrongMinColor {
            found: min_color,
            expected: 1,
        });
    }
    let ranks = arena.rank().ok_or(TransformError::MissingRanks)?;
    for v in arena.vertex_ids() {
        if !ranks.contains_key(&v) {
            return Err(TransformError::MissingRanks);
        }
    }

    let mut update = vec![Vec::with_capacity(arena.edge_count()); 2];
    for m in 0..2u32 {
        for e in arena.edge_ids() {
            let edge = arena.edge(e);
            let cleared = if slices.is_slice(ranks[&edge.from]) {
                0
            } else {
                m
            };
            let next = if arena.color(edge.to) > 1 { 1 } else { cleared };
            update[m as usize].push(StateId(next));
        }
    }
    let flag = MemoryStructure::new(
        vec!["0".to_string(), "1".to_string()],
        StateId(0),
        update,
    )
    .expect("flag memory is well-formed");

    let mut builder = ArenaBuilder::new(arena.counters());
    let mut taken = BTreeSet::new();
    let mut names: Vec<String> = Vec::with_capacity(2 * arena.vertex_count());
    for v in arena.vertex_ids() {
        for f in 0..2u32 {
            let name = fresh_name(format!("{}#{f}", arena.name(v)), &mut taken);
            let color = arena.color(v);
            builder.vertex(name.clone(), arena.owner(v), if color == 1 { 2 } else { color });
            builder.rank(name.clone(), ranks[&v]);
            if arena.is_target(v) {
                builder.target(name.clone());
            }
            names.push(name);
        }
    }
    for e in arena.edge_ids() {
        let edge = arena.edge(e);
        for f in 0..2u32 {
            let to_flag = flag.next(StateId(f), e);
            builder.edge(
                names[2 * edge.from.index() + f as usize].clone(),
                names[2 * edge.to.index() + to_flag.index()].clone(),
                edge.action.clone(),
            );
        }
    }
    builder.initial(names[2 * arena.initial().index()].clone());
    let product = builder.finish().expect("flag product is a closed construction");

    let forbidden = arena
        .vertex_ids()
        .filter(|v| slices.is_slice(ranks[v]))
        .map(|v| VertexId(2 * v.0))
        .collect();
    Ok(OddRemoval {
        arena: product,
        forbidden,
        flag,
    })
}

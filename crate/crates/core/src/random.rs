//! Deterministic pseudo-random instances for randomized test corpora.
//!
//! Everything here is driven by an explicit [`Rng`] owned by the caller: the
//! same seed always reproduces the same instance, on every platform, so a
//! failing randomized test can be replayed from its seed alone.  The
//! generators cover the shapes the test suites need — unstructured arenas,
//! acyclic arenas, chronologically ranked arenas, counter words and their
//! block partitions, and positional strategy profiles.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::arena::{Arena, ArenaBuilder, Owner};
use crate::counter::{CounterAction, Op};
use crate::machine::StrategyMachine;

/// A small deterministic generator (SplitMix64) with a fixed output stream.
///
/// The stream depends only on the seed, never on the platform, the standard
/// library, or crate versions, which keeps frozen test expectations stable.
#[derive(Debug, Clone)]
pub struct Rng {
    state: u64,
}

impl Rng {
    /// A generator whose stream is determined by `seed`.
    pub fn new(seed: u64) -> Self {
        Rng { state: seed }
    }

    /// The next raw 64-bit draw.
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// A draw uniform over `0..bound`.  `bound` must be positive.
    pub fn below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0, "empty draw range");
        // Multiply-shift keeps the draw unbiased enough for test corpora
        // without a rejection loop, and avoids `%`'s low-bit bias.
        ((u128::from(self.next_u64()) * u128::from(bound)) >> 64) as u64
    }

    /// A draw uniform over `0..bound`, as a `usize` index.
    pub fn index(&mut self, bound: usize) -> usize {
        self.below(bound as u64) as usize
    }

    /// True with probability `numerator / denominator`.
    pub fn chance(&mut self, numerator: u64, denominator: u64) -> bool {
        self.below(denominator) < numerator
    }

    /// A uniformly chosen element of a non-empty slice.
    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.index(items.len())]
    }
}

/// A uniformly random counter action over `counters` counters.
pub fn random_action(rng: &mut Rng, counters: usize) -> CounterAction {
    CounterAction(
        (0..counters)
            .map(|_| match rng.below(3) {
                0 => Op::Skip,
                1 => Op::Inc,
                _ => Op::Reset,
            })
            .collect(),
    )
}

/// A random word of `length` counter actions over `counters` counters.
pub fn random_word(rng: &mut Rng, counters: usize, length: usize) -> Vec<CounterAction> {
    (0..length).map(|_| random_action(rng, counters)).collect()
}

/// A random partition of `length` into consecutive block lengths.
///
/// Every block length is at least 1 and the lengths sum to `length`; an
/// empty word has the empty partition.  Blocks are kept short (at most 5)
/// so that multi-block structure shows up even in short words.
pub fn random_split(rng: &mut Rng, length: usize) -> Vec<usize> {
    let mut blocks = Vec::new();
    let mut remaining = length;
    while remaining > 0 {
        let block = 1 + rng.index(remaining.min(5));
        blocks.push(block);
        remaining -= block;
    }
    blocks
}

/// A random arena with up to `max_vertices` vertices over `counters`
/// counters, colors drawn from `0..=max_color`.
///
/// Owners are split evenly, each vertex carries 1–3 outgoing edges with
/// uniformly random endpoints and actions (self-loops and parallel edges
/// included), and roughly one vertex in eight is a terminal.  When
/// `with_target` is set, each vertex is a target with probability 1/4, and
/// at least one vertex is always a target.  The initial vertex is `v0`.
pub fn random_arena(
    rng: &mut Rng,
    max_vertices: usize,
    counters: usize,
    max_color: u32,
    with_target: bool,
) -> Arena {
    debug_assert!(max_vertices > 0);
    let n = 1 + rng.index(max_vertices);
    let mut builder = ArenaBuilder::new(counters);
    for v in 0..n {
        let owner = if rng.chance(1, 2) { Owner::Eve } else { Owner::Adam };
        builder.vertex(format!("v{v}"), owner, rng.below(u64::from(max_color) + 1) as u32);
    }
    for v in 0..n {
        if rng.chance(1, 8) {
            continue; // terminal vertex
        }
        let degree = 1 + rng.index(3);
        for _ in 0..degree {
            let to = rng.index(n);
            let action = random_action(rng, counters);
            builder.edge(format!("v{v}"), format!("v{to}"), action);
        }
    }
    if with_target {
        let mut any = false;
        for v in 0..n {
            if rng.chance(1, 4) {
                builder.target(format!("v{v}"));
                any = true;
            }
        }
        if !any {
            let v = rng.index(n);
            builder.target(format!("v{v}"));
        }
    }
    builder.initial("v0");
    builder.finish().expect("generated arena is well formed")
}

/// A random acyclic arena: every edge goes from `vi` to some `vj` with
/// `j > i`, so plays are finite and end in sinks.
///
/// The arena has between 2 and `max_vertices` vertices, no targets, and
/// colors drawn from `0..=max_color`.  The last vertex is always a sink and
/// interior vertices go dead early once in a while, so generated games mix
/// long and short plays.
pub fn random_dag(rng: &mut Rng, max_vertices: usize, counters: usize, max_color: u32) -> Arena {
    debug_assert!(max_vertices >= 2);
    let n = 2 + rng.index(max_vertices - 1);
    let mut builder = ArenaBuilder::new(counters);
    for v in 0..n {
        let owner = if rng.chance(1, 2) { Owner::Eve } else { Owner::Adam };
        builder.vertex(format!("v{v}"), owner, rng.below(u64::from(max_color) + 1) as u32);
    }
    for v in 0..n - 1 {
        if v > 0 && rng.chance(1, 6) {
            continue; // early sink
        }
        let reachable = n - 1 - v;
        let degree = 1 + rng.index(reachable.min(3));
        for _ in 0..degree {
            let to = v + 1 + rng.index(reachable);
            let action = random_action(rng, counters);
            builder.edge(format!("v{v}"), format!("v{to}"), action);
        }
    }
    builder.initial("v0");
    builder.finish().expect("generated arena is well formed")
}

/// A random chronologically ranked arena: `columns` columns of up to
/// `max_width` vertices each, with every edge stepping from one column to
/// the next.
///
/// Vertex `c{col}_{row}` sits in column `col` and carries rank `col`, a
/// random owner, and a color drawn uniformly from `palette`.  Each vertex
/// outside the last column has 1–3 outgoing edges into the next column.
/// Each vertex is a target with probability `target_chance.0 /
/// target_chance.1`; if no vertex is drawn, one last-column vertex is made
/// a target so the target set is never empty.  The initial vertex is
/// `c0_0`.
pub fn random_chronological(
    rng: &mut Rng,
    max_width: usize,
    columns: usize,
    counters: usize,
    palette: &[u32],
    target_chance: (u64, u64),
) -> Arena {
    debug_assert!(max_width > 0 && columns > 0 && !palette.is_empty());
    let widths: Vec<usize> = (0..columns).map(|_| 1 + rng.index(max_width)).collect();
    let mut builder = ArenaBuilder::new(counters);
    let mut any_target = false;
    for (col, &width) in widths.iter().enumerate() {
        for row in 0..width {
            let name = format!("c{col}_{row}");
            let owner = if rng.chance(1, 2) { Owner::Eve } else { Owner::Adam };
            builder.vertex(name.clone(), owner, *rng.pick(palette));
            builder.rank(name.clone(), col as u32);
            if rng.chance(target_chance.0, target_chance.1) {
                builder.target(name);
                any_target = true;
            }
        }
    }
    for (col, &width) in widths.iter().enumerate().take(columns - 1) {
        for row in 0..width {
            let degree = 1 + rng.index(3);
            for _ in 0..degree {
                let to = rng.index(widths[col + 1]);
                let action = random_action(rng, counters);
                builder.edge(format!("c{col}_{row}"), format!("c{}_{to}", col + 1), action);
            }
        }
    }
    if !any_target {
        let row = rng.index(widths[columns - 1]);
        builder.target(format!("c{}_{row}", columns - 1));
    }
    builder.initial("c0_0");
    builder.finish().expect("generated arena is well formed")
}

/// A uniformly random positional strategy profile for Eve on `arena`.
///
/// Every Eve vertex with at least one outgoing edge gets a uniformly chosen
/// move; terminals and Adam vertices get none.
pub fn random_positional(rng: &mut Rng, arena: &Arena) -> StrategyMachine {
    let mut moves = BTreeMap::new();
    for v in arena.vertex_ids() {
        if arena.owner(v) != Owner::Eve {
            continue;
        }
        let out = arena.out_edges(v);
        if out.is_empty() {
            continue;
        }
        moves.insert(v, out[rng.index(out.len())]);
    }
    StrategyMachine::positional(arena.edge_count(), &moves)
}

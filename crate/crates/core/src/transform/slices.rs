//! Low-color depths and slice columns of a restricted configuration graph.
//!
//! On a chronological arena, a strategy that wins the parity objective can
//! keep plays from lingering on colors 0 and 1: every low-color run in its
//! restricted configuration graph is finite. The *slice columns* chop the
//! column axis so that between two consecutive slices, every consistent
//! play either dies or passes a color above 1. They are computed from the
//! first column, taking from each column the latest column by which all
//! runs of low colors started just after it must have ended.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::TransformError;
use crate::arena::{Arena, VertexId};
use crate::config::ConfigGraph;
use crate::graphutil::{component_has_cycle, strongly_connected_components};

/// Slice columns and per-vertex low-color depths of a restricted graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceAssignment {
    /// Strictly increasing column indices. Between consecutive entries (and
    /// before the first), every consistent play of the restricted graph
    /// meets a color above 1 or ends.
    pub slices: Vec<u32>,
    /// Per vertex, the longest path length within the subgraph of colors at
    /// most 1 starting there (0 on vertices colored above 1). Only vertices
    /// the restricted graph reaches appear.
    pub depth: BTreeMap<VertexId, u32>,
}

impl SliceAssignment {
    /// Whether `column` is one of the slice columns.
    pub fn is_slice(&self, column: u32) -> bool {
        self.slices.binary_search(&column).is_ok()
    }
}

/// Compute the slice columns of `restricted`, a configuration graph of
/// `arena` under some strategy machine.
///
/// The arena must carry a complete chronological ranking; the slice
/// recurrence starts at the initial vertex's column. Thresholds measure the
/// longest run of colors at most 1 among a vertex's *strict successors*, so
/// each inter-slice obligation refers to colors strictly inside its window
/// — the flag product of
/// [`remove_odd_min_color`](super::remove_odd_min_color) opens a window
/// only after its starting column is left.
///
/// # Errors
///
/// [`TransformError::MissingRanks`] if the arena has no (or only partial)
/// ranking; [`TransformError::LowColorCycle`] if the restricted graph can
/// cycle through colors at most 1 (the strategy does not win parity, and no
/// finite slice covers it); [`TransformError::Overflow`] if a column index
/// leaves `u32` range.
pub fn compute_slices(
    arena: &Arena,
    restricted: &ConfigGraph,
) -> Result<SliceAssignment, TransformError> {
    let ranks = arena.rank().ok_or(TransformError::MissingRanks)?;
    let node_count = restricted.len();

    // Adjacency restricted to edges entering low colors: exactly the edges
    // that extend a low-color run, so a cycle here is a low-color cycle.
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); node_count];
    for (c, _) in restricted.nodes() {
        for &(_, s) in restricted.successors(c) {
            if arena.color(restricted.node(s).vertex) <= 1 {
                adjacency[c.index()].push(s.index());
            }
        }
    }
    let components = strongly_connected_components(&adjacency);
    for component in &components {
        if component_has_cycle(&adjacency, component) {
            return Err(TransformError::LowColorCycle);
        }
    }

    // Longest low-color run starting at each configuration's successors;
    // components arrive successors-first, so a single pass suffices.
    let mut runs = vec![0u32; node_count];
    for component in &components {
        for &c in component {
            runs[c] = adjacency[c].iter().map(|&s| 1 + runs[s]).max().unwrap_or(0);
        }
    }

    let mut depth: BTreeMap<VertexId, u32> = BTreeMap::new();
    let mut run_after: BTreeMap<VertexId, u32> = BTreeMap::new();
    for (c, node) in restricted.nodes() {
        if !ranks.contains_key(&node.vertex) {
            return Err(TransformError::MissingRanks);
        }
        let own = if arena.color(node.vertex) <= 1 {
            runs[c.index()]
        } else {
            0
        };
        let entry = depth.entry(node.vertex).or_insert(0);
        *entry = (*entry).max(own);
        let entry = run_after.entry(node.vertex).or_insert(0);
        *entry = (*entry).max(runs[c.index()]);
    }

    let threshold = |v: VertexId| -> Result<u32, TransformError> {
        let column = u64::from(ranks[&v]) + u64::from(run_after[&v]) + 1;
        u32::try_from(column).map_err(|_| TransformError::Overflow)
    };

    let initial_vertex = restricted.node(restricted.initial()).vertex;
    let mut slices = vec![threshold(initial_vertex)?];
    loop {
        let current = *slices.last().expect("slice sequence starts nonempty");
        let mut next: Option<u32> = None;
        for &v in run_after.keys() {
            if ranks[&v] == current {
                let column = threshold(v)?;
                next = Some(next.map_or(column, |m| m.max(column)));
            }
        }
        match next {
            // Thresholds exceed their own column, so the sequence strictly
            // increases and leaves the graph's column range eventually.
            Some(column) => slices.push(column),
            None => break,
        }
    }

    Ok(SliceAssignment { slices, depth })
}

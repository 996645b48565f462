//! Arenas: finite two-player game graphs with colored vertices and
//! counter-instruction edges.
//!
//! Vertices and edges are referenced by dense integer ids ([`VertexId`],
//! [`EdgeId`]); names are kept for IO and diagnostics only. Arenas are
//! immutable once built — construct them through [`ArenaBuilder`], which
//! resolves names and rejects dangling references, then run
//! [`Arena::validate`] for the semantic well-formedness checks (action
//! arities, dead ends, rank chronology).

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::counter::CounterAction;

/// Dense index of a vertex within its arena.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

/// Dense index of an edge within its arena.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

impl VertexId {
    /// The id as a usize, for indexing.
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    /// The id as a usize, for indexing.
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// The two players. Eve owns the existential choices and the objectives;
/// Adam is the antagonist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Owner {
    /// The protagonist; wins when the objective holds.
    Eve,
    /// The antagonist.
    Adam,
}

impl Owner {
    /// The other player.
    pub fn opponent(self) -> Owner {
        match self {
            Owner::Eve => Owner::Adam,
            Owner::Adam => Owner::Eve,
        }
    }
}

impl fmt::Display for Owner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Owner::Eve => write!(f, "Eve"),
            Owner::Adam => write!(f, "Adam"),
        }
    }
}

/// A vertex: a name (unique within the arena), an owner, and a color.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    /// Display/IO name; unique within the arena.
    pub name: String,
    /// Who moves here.
    pub owner: Owner,
    /// Priority for parity objectives; the *largest* color visited
    /// infinitely often decides, even is good for Eve.
    pub color: u32,
}

/// A directed edge carrying one counter instruction per counter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    /// Source vertex.
    pub from: VertexId,
    /// Target vertex.
    pub to: VertexId,
    /// Counter instructions; arity must equal the arena's counter count.
    pub action: CounterAction,
}

/// An immutable game arena.
#[derive(Debug, Clone)]
pub struct Arena {
    k: usize,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    out: Vec<Vec<EdgeId>>,
    into: Vec<Vec<EdgeId>>,
    initial: VertexId,
    target: BTreeSet<VertexId>,
    rank: Option<BTreeMap<VertexId, u32>>,
    by_name: BTreeMap<String, VertexId>,
}

impl Arena {
    /// Number of counters.
    pub fn counters(&self) -> usize {
        self.k
    }

    /// Number of vertices.
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// All vertex ids, in order.
    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertices.len() as u32).map(VertexId)
    }

    /// All edge ids, in order.
    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    /// The vertex record for `v`.
    pub fn vertex(&self, v: VertexId) -> &Vertex {
        &self.vertices[v.index()]
    }

    /// The edge record for `e`.
    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.index()]
    }

    /// Outgoing edges of `v`, in insertion order.
    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out[v.index()]
    }

    /// Incoming edges of `v`, in insertion order.
    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.into[v.index()]
    }

    /// The designated initial vertex.
    pub fn initial(&self) -> VertexId {
        self.initial
    }

    /// The target set `F` (may be empty when the objective has no
    /// reachability part).
    pub fn target(&self) -> &BTreeSet<VertexId> {
        &self.target
    }

    /// True if `v` is in the target set.
    pub fn is_target(&self, v: VertexId) -> bool {
        self.target.contains(&v)
    }

    /// Optional rank (chronology) labeling, present on layered arenas.
    pub fn rank(&self) -> Option<&BTreeMap<VertexId, u32>> {
        self.rank.as_ref()
    }

    /// Shorthand for the owner of `v`.
    pub fn owner(&self, v: VertexId) -> Owner {
        self.vertices[v.index()].owner
    }

    /// Shorthand for the color of `v`.
    pub fn color(&self, v: VertexId) -> u32 {
        self.vertices[v.index()].color
    }

    /// Shorthand for the name of `v`.
    pub fn name(&self, v: VertexId) -> &str {
        &self.vertices[v.index()].name
    }

    /// Look a vertex up by name.
    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.by_name.get(name).copied()
    }

    /// The largest color used by any vertex (0 for the impossible empty arena).
    pub fn max_color(&self) -> u32 {
        self.vertices.iter().map(|v| v.color).max().unwrap_or(0)
    }

    /// True if the edge relation has no directed cycle.
    pub fn is_acyclic(&self) -> bool {
        // Kahn's algorithm; the arena is acyclic iff all vertices drain.
        let mut indegree: Vec<usize> = self.into.iter().map(Vec::len).collect();
        let mut queue: Vec<VertexId> = self
            .vertex_ids()
            .filter(|v| indegree[v.index()] == 0)
            .collect();
        let mut drained = 0usize;
        while let Some(v) = queue.pop() {
            drained += 1;
            for &e in self.out_edges(v) {
                let t = self.edge(e).to;
                indegree[t.index()] -= 1;
                if indegree[t.index()] == 0 {
                    queue.push(t);
                }
            }
        }
        drained == self.vertex_count()
    }

    /// Vertices in reverse topological order (successors first).
    ///
    /// `None` if the arena has a cycle.
    pub fn reverse_topological(&self) -> Option<Vec<VertexId>> {
        let mut indegree: Vec<usize> = self.into.iter().map(Vec::len).collect();
        let mut queue: Vec<VertexId> = self
            .vertex_ids()
            .filter(|v| indegree[v.index()] == 0)
            .collect();
        // Keep the output deterministic: smallest id first.
        queue.sort_unstable();
        queue.reverse();
        let mut order = Vec::with_capacity(self.vertex_count());
        while let Some(v) = queue.pop() {
            order.push(v);
            let mut newly: Vec<VertexId> = Vec::new();
            for &e in self.out_edges(v) {
                let t = self.edge(e).to;
                indegree[t.index()] -= 1;
                if indegree[t.index()] == 0 {
                    newly.push(t);
                }
            }
            newly.sort_unstable();
            newly.reverse();
            queue.append(&mut newly);
            queue.sort_unstable();
            queue.reverse();
        }
        if order.len() == self.vertex_count() {
            order.reverse();
            Some(order)
        } else {
            None
        }
    }

    /// Semantic well-formedness checks. An empty result means the arena is
    /// valid; each violation is independently reportable.
    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        for e in self.edge_ids() {
            let arity = self.edge(e).action.arity();
            if arity != self.k {
                violations.push(Violation::ActionArity {
                    edge: e,
                    expected: self.k,
                    found: arity,
                });
            }
        }
        // Terminal vertices are only meaningful where the play is allowed to
        // stop: inside the target set, or anywhere in a well-founded arena.
        let acyclic = self.is_acyclic();
        for v in self.vertex_ids() {
            if self.out_edges(v).is_empty() && !self.is_target(v) && !acyclic {
                violations.push(Violation::DeadEnd { vertex: v });
            }
        }
        if let Some(rank) = &self.rank {
            for v in self.vertex_ids() {
                if !rank.contains_key(&v) {
                    violations.push(Violation::MissingRank { vertex: v });
                }
            }
            for e in self.edge_ids() {
                let edge = self.edge(e);
                if let (Some(&rf), Some(&rt)) = (rank.get(&edge.from), rank.get(&edge.to)) {
                    if rt != rf + 1 {
                        violations.push(Violation::BrokenChronology { edge: e });
                    }
                }
            }
        }
        violations
    }

    /// First edge from `from` to `to`, if any. Parallel edges are possible;
    /// this returns the one with the smallest id.
    pub fn find_edge(&self, from: VertexId, to: VertexId) -> Option<EdgeId> {
        self.out_edges(from)
            .iter()
            .copied()
            .find(|&e| self.edge(e).to == to)
    }

    /// All edges from `from` to `to`, in id order.
    pub fn find_edges(&self, from: VertexId, to: VertexId) -> Vec<EdgeId> {
        self.out_edges(from)
            .iter()
            .copied()
            .filter(|&e| self.edge(e).to == to)
            .collect()
    }

    /// Ordinal of `e` among the parallel edges sharing its endpoints.
    pub fn parallel_ordinal(&self, e: EdgeId) -> usize {
        let edge = self.edge(e);
        self.find_edges(edge.from, edge.to)
            .iter()
            .position(|&x| x == e)
            .expect("edge present among its own parallels")
    }
}

/// A semantic defect reported by [`Arena::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// An edge action's arity differs from the arena's counter count.
    ActionArity {
        /// Offending edge.
        edge: EdgeId,
        /// The arena's counter count.
        expected: usize,
        /// The action's arity.
        found: usize,
    },
    /// A vertex with no outgoing edge, outside the target set, in an arena
    /// that is not well-founded.
    DeadEnd {
        /// Offending vertex.
        vertex: VertexId,
    },
    /// With ranks present: an edge whose target rank is not source rank + 1.
    BrokenChronology {
        /// Offending edge.
        edge: EdgeId,
    },
    /// A rank labeling is present but does not cover this vertex.
    MissingRank {
        /// Offending vertex.
        vertex: VertexId,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ActionArity {
                edge,
                expected,
                found,
            } => write!(
                f,
                "edge {edge} carries an action of arity {found}, expected {expected}"
            ),
            Violation::DeadEnd { vertex } => write!(
                f,
                "vertex {vertex} has no outgoing edge, is not a target, and the arena has cycles"
            ),
            Violation::BrokenChronology { edge } => {
                write!(f, "edge {edge} does not advance the rank by exactly one")
            }
            Violation::MissingRank { vertex } => {
                write!(f, "rank labeling is partial: vertex {vertex} has no rank")
            }
        }
    }
}

/// Error from [`ArenaBuilder::finish`]: the description does not resolve to
/// an arena at all (name problems, missing initial vertex).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuildError {
    /// Two vertices share a name.
    DuplicateVertex(String),
    /// An edge, the initial marker, a target entry, or a rank entry names an
    /// unknown vertex.
    UnknownVertex(String),
    /// No initial vertex was designated.
    MissingInitial,
    /// The arena has no vertices.
    Empty,
}

impl fmt::Display for BuildError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuildError::DuplicateVertex(name) => write!(f, "duplicate vertex name {name:?}"),
            BuildError::UnknownVertex(name) => write!(f, "unknown vertex name {name:?}"),
            BuildError::MissingInitial => write!(f, "no initial vertex designated"),
            BuildError::Empty => write!(f, "arena has no vertices"),
        }
    }
}

impl core::error::Error for BuildError {}

/// Incremental arena construction by name; resolves to dense ids on
/// [`ArenaBuilder::finish`].
#[derive(Debug, Clone)]
pub struct ArenaBuilder {
    k: usize,
    vertices: Vec<Vertex>,
    edges: Vec<(String, String, CounterAction)>,
    initial: Option<String>,
    target: Vec<String>,
    ranks: Vec<(String, u32)>,
    has_ranks: bool,
}

impl ArenaBuilder {
    /// Start building a `k`-counter arena.
    pub fn new(k: usize) -> Self {
        ArenaBuilder {
            k,
            vertices: Vec::new(),
            edges: Vec::new(),
            initial: None,
            target: Vec::new(),
            ranks: Vec::new(),
            has_ranks: false,
        }
    }

    /// Add a vertex. Duplicate names are reported by `finish`.
    pub fn vertex(&mut self, name: impl Into<String>, owner: Owner, color: u32) -> &mut Self {
        self.vertices.push(Vertex {
            name: name.into(),
            owner,
            color,
        });
        self
    }

    /// Add an edge by endpoint names.
    pub fn edge(
        &mut self,
        from: impl Into<String>,
        to: impl Into<String>,
        action: CounterAction,
    ) -> &mut Self {
        self.edges.push((from.into(), to.into(), action));
        self
    }

    /// Add an edge that leaves all counters unchanged.
    pub fn edge_epsilon(&mut self, from: impl Into<String>, to: impl Into<String>) -> &mut Self {
        let k = self.k;
        self.edge(from, to, CounterAction::epsilon(k))
    }

    /// Designate the initial vertex.
    pub fn initial(&mut self, name: impl Into<String>) -> &mut Self {
        self.initial = Some(name.into());
        self
    }

    /// Add a vertex to the target set.
    pub fn target(&mut self, name: impl Into<String>) -> &mut Self {
        self.target.push(name.into());
        self
    }

    /// Record a rank for a vertex; calling this at least once marks the
    /// arena as ranked.
    pub fn rank(&mut self, name: impl Into<String>, rank: u32) -> &mut Self {
        self.has_ranks = true;
        self.ranks.push((name.into(), rank));
        self
    }

    /// Resolve names and produce the arena.
    ///
    /// Only structural resolution happens here; run [`Arena::validate`] for
    /// the semantic checks.
    pub fn finish(self) -> Result<Arena, BuildError> {
        if self.vertices.is_empty() {
            return Err(BuildError::Empty);
        }
        let mut by_name: BTreeMap<String, VertexId> = BTreeMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if by_name.insert(v.name.clone(), VertexId(i as u32)).is_some() {
                return Err(BuildError::DuplicateVertex(v.name.clone()));
            }
        }
        let resolve = |name: &String| -> Result<VertexId, BuildError> {
            by_name
                .get(name)
                .copied()
                .ok_or_else(|| BuildError::UnknownVertex(name.clone()))
        };
        let mut edges = Vec::with_capacity(self.edges.len());
        let mut out = alloc::vec![Vec::new(); self.vertices.len()];
        let mut into = alloc::vec![Vec::new(); self.vertices.len()];
        for (i, (from, to, action)) in self.edges.iter().enumerate() {
            let from = resolve(from)?;
            let to = resolve(to)?;
            let id = EdgeId(i as u32);
            out[from.index()].push(id);
            into[to.index()].push(id);
            edges.push(Edge {
                from,
                to,
                action: action.clone(),
            });
        }
        let initial = resolve(self.initial.as_ref().ok_or(BuildError::MissingInitial)?)?;
        let mut target = BTreeSet::new();
        for name in &self.target {
            target.insert(resolve(name)?);
        }
        let rank = if self.has_ranks {
            let mut map = BTreeMap::new();
            for (name, r) in &self.ranks {
                map.insert(resolve(name)?, *r);
            }
            Some(map)
        } else {
            None
        };
        Ok(Arena {
            k: self.k,
            vertices: self.vertices,
            edges,
            out,
            into,
            initial,
            target,
            rank,
            by_name,
        })
    }
}

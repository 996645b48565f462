//! Memory structures, strategy machines, and the arena–memory product.
//!
//! A *memory structure* is a deterministic automaton reading the edges of a
//! fixed arena. A *strategy machine* couples one with a move function that
//! picks an outgoing edge for every (Eve vertex, memory state) pair it
//! intends to visit; pairs that cannot occur under the strategy may be left
//! out, and evaluation reports an error if a missing pair is in fact
//! reachable.
//!
//! [`product_with_memory`] expands an arena with a memory structure into the
//! synchronized product arena, on which positional strategies correspond
//! exactly to machine strategies on the original ([`MemoryProduct::lift_positional`]
//! / [`MemoryProduct::to_positional`]).

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::arena::{Arena, ArenaBuilder, EdgeId, Owner, VertexId};

/// Dense index of a memory state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub u32);

impl StateId {
    /// The id as a usize, for indexing.
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{}", self.0)
    }
}

/// A deterministic automaton over the edges of one arena.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemoryStructure {
    names: Vec<String>,
    initial: StateId,
    /// `update[state][edge]` = next state.
    update: Vec<Vec<StateId>>,
}

/// A malformed machine (dimensions, names, or moves that do not fit the
/// arena).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MachineError {
    /// The update table is not `|states| x |edges|`, or a next-state is out
    /// of range.
    UpdateShape,
    /// Two states share a name.
    DuplicateState(String),
    /// The initial state is out of range.
    BadInitial,
    /// No states at all.
    NoStates,
    /// A move is attached to a vertex Adam owns.
    MoveOnAdamVertex(VertexId),
    /// A move picks an edge that does not leave its vertex.
    MoveNotOutEdge {
        /// The vertex the move is for.
        vertex: VertexId,
        /// The chosen edge.
        edge: EdgeId,
    },
    /// A move refers to a vertex, state, or edge outside the arena/machine.
    OutOfRange,
    /// The memory structure's edge dimension does not match the arena.
    WrongArena {
        /// Edges the update table covers.
        expected: usize,
        /// Edges the arena has.
        found: usize,
    },
}

impl fmt::Display for MachineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MachineError::UpdateShape => write!(f, "update table has wrong shape"),
            MachineError::DuplicateState(name) => write!(f, "duplicate state name {name:?}"),
            MachineError::BadInitial => write!(f, "initial state out of range"),
            MachineError::NoStates => write!(f, "memory structure has no states"),
            MachineError::MoveOnAdamVertex(v) => {
                write!(f, "move attached to Adam-owned vertex {v}")
            }
            MachineError::MoveNotOutEdge { vertex, edge } => {
                write!(f, "move at {vertex} picks {edge}, which does not leave it")
            }
            MachineError::OutOfRange => write!(f, "vertex, state, or edge id out of range"),
            MachineError::WrongArena { expected, found } => write!(
                f,
                "memory structure reads {expected} edges but the arena has {found}"
            ),
        }
    }
}

impl core::error::Error for MachineError {}

impl MemoryStructure {
    /// Build and validate a memory structure. `update[state][edge]` gives the
    /// successor state after reading that edge.
    pub fn new(
        names: Vec<String>,
        initial: StateId,
        update: Vec<Vec<StateId>>,
    ) -> Result<Self, MachineError> {
        if names.is_empty() {
            return Err(MachineError::NoStates);
        }
        let mut seen = alloc::collections::BTreeSet::new();
        for name in &names {
            if !seen.insert(name) {
                return Err(MachineError::DuplicateState(name.clone()));
            }
        }
        if initial.index() >= names.len() {
            return Err(MachineError::BadInitial);
        }
        if update.len() != names.len() {
            return Err(MachineError::UpdateShape);
        }
        let edge_count = update.first().map_or(0, Vec::len);
        for row in &update {
            if row.len() != edge_count {
                return Err(MachineError::UpdateShape);
            }
            if row.iter().any(|s| s.index() >= names.len()) {
                return Err(MachineError::UpdateShape);
            }
        }
        Ok(MemoryStructure {
            names,
            initial,
            update,
        })
    }

    /// The one-state (positional) memory for an arena with `edge_count` edges.
    pub fn singleton(edge_count: usize) -> Self {
        MemoryStructure {
            names: alloc::vec![String::from("m0")],
            initial: StateId(0),
            update: alloc::vec![alloc::vec![StateId(0); edge_count]],
        }
    }

    /// Number of states.
    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    /// Number of edges the update table reads.
    pub fn edge_count(&self) -> usize {
        self.update.first().map_or(0, Vec::len)
    }

    /// The initial state.
    pub fn initial(&self) -> StateId {
        self.initial
    }

    /// State reached from `m` after reading edge `e`.
    pub fn next(&self, m: StateId, e: EdgeId) -> StateId {
        self.update[m.index()][e.index()]
    }

    /// The name of state `m`.
    pub fn state_name(&self, m: StateId) -> &str {
        &self.names[m.index()]
    }

    /// All state names, in id order.
    pub fn state_names(&self) -> &[String] {
        &self.names
    }

    /// Look a state up by name.
    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| StateId(i as u32))
    }

    /// Check this structure against an arena (edge dimension).
    pub fn check_arena(&self, arena: &Arena) -> Result<(), MachineError> {
        if self.edge_count() != arena.edge_count() {
            return Err(MachineError::WrongArena {
                expected: self.edge_count(),
                found: arena.edge_count(),
            });
        }
        Ok(())
    }
}

/// A finite-memory strategy for Eve: a memory structure plus a partial move
/// function on (Eve vertex, state) pairs.
///
/// Partiality is deliberate: pairs unreachable under the strategy need no
/// move. Evaluation fails with a precise error if a missing pair turns out
/// to be reachable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategyMachine {
    /// The underlying memory structure.
    pub memory: MemoryStructure,
    moves: BTreeMap<(VertexId, StateId), EdgeId>,
}

impl StrategyMachine {
    /// Couple a memory structure with a move table.
    pub fn new(memory: MemoryStructure, moves: BTreeMap<(VertexId, StateId), EdgeId>) -> Self {
        StrategyMachine { memory, moves }
    }

    /// A positional strategy as a one-state machine.
    pub fn positional(edge_count: usize, moves: &BTreeMap<VertexId, EdgeId>) -> Self {
        let memory = MemoryStructure::singleton(edge_count);
        let moves = moves
            .iter()
            .map(|(&v, &e)| ((v, StateId(0)), e))
            .collect();
        StrategyMachine { memory, moves }
    }

    /// The move at (vertex, state), if one is defined.
    pub fn move_for(&self, v: VertexId, m: StateId) -> Option<EdgeId> {
        self.moves.get(&(v, m)).copied()
    }

    /// Number of memory states.
    pub fn state_count(&self) -> usize {
        self.memory.state_count()
    }

    /// All defined moves, in (vertex, state) order.
    pub fn moves(&self) -> impl Iterator<Item = ((VertexId, StateId), EdgeId)> + '_ {
        self.moves.iter().map(|(&k, &e)| (k, e))
    }

    /// Validate against an arena: dimensions, ownership, and that every move
    /// picks an outgoing edge of its vertex.
    pub fn validate(&self, arena: &Arena) -> Result<(), MachineError> {
        self.memory.check_arena(arena)?;
        for (&(v, m), &e) in &self.moves {
            if v.index() >= arena.vertex_count()
                || m.index() >= self.memory.state_count()
                || e.index() >= arena.edge_count()
            {
                return Err(MachineError::OutOfRange);
            }
            if arena.owner(v) != Owner::Eve {
                return Err(MachineError::MoveOnAdamVertex(v));
            }
            if arena.edge(e).from != v {
                return Err(MachineError::MoveNotOutEdge { vertex: v, edge: e });
            }
        }
        Ok(())
    }
}

/// The synchronized product of an arena with a memory structure.
///
/// Product vertices are all (vertex, state) pairs; product edges copy the
/// original actions and advance the memory. Colors, owners, targets, and
/// ranks are inherited from the arena component.
#[derive(Debug, Clone)]
pub struct MemoryProduct {
    /// The product arena.
    pub arena: Arena,
    /// The memory structure the product was built with.
    pub memory: MemoryStructure,
    pairs: Vec<(VertexId, StateId)>,
    index: BTreeMap<(VertexId, StateId), VertexId>,
    source_edge: Vec<EdgeId>,
}

impl MemoryProduct {
    /// The product vertex for (vertex, state).
    pub fn product_vertex(&self, v: VertexId, m: StateId) -> VertexId {
        self.index[&(v, m)]
    }

    /// The (vertex, state) pair a product vertex stands for.
    pub fn parts(&self, pv: VertexId) -> (VertexId, StateId) {
        self.pairs[pv.index()]
    }

    /// The original edge a product edge copies.
    pub fn source_edge(&self, pe: EdgeId) -> EdgeId {
        self.source_edge[pe.index()]
    }

    /// Turn a positional strategy on the product into a machine strategy on
    /// the original arena. Entries on Adam-owned vertices are ignored.
    pub fn lift_positional(&self, positional: &BTreeMap<VertexId, EdgeId>) -> StrategyMachine {
        let mut moves = BTreeMap::new();
        for (&pv, &pe) in positional {
            let (v, m) = self.parts(pv);
            if self.arena.owner(pv) == Owner::Eve {
                moves.insert((v, m), self.source_edge(pe));
            }
        }
        StrategyMachine::new(self.memory.clone(), moves)
    }

    /// Turn a machine strategy on the original arena into a positional
    /// strategy on the product. Inverse of [`MemoryProduct::lift_positional`]
    /// on defined pairs.
    pub fn to_positional(&self, machine: &StrategyMachine) -> BTreeMap<VertexId, EdgeId> {
        let mut positional = BTreeMap::new();
        for ((v, m), e) in machine.moves() {
            let pv = self.product_vertex(v, m);
            // Find the product copy of `e` leaving `pv`.
            let pe = self
                .arena
                .out_edges(pv)
                .iter()
                .copied()
                .find(|&pe| self.source_edge(pe) == e)
                .expect("every original out-edge has a product copy");
            positional.insert(pv, pe);
        }
        positional
    }
}

/// Pick a vertex name not yet in `taken`, starting from `base`.
///
/// Generated names only collide if the input arena already uses the
/// separator convention; the tick suffix keeps construction total without
/// affecting semantics.
pub(crate) fn fresh_name(base: String, taken: &mut alloc::collections::BTreeSet<String>) -> String {
    let mut name = base;
    while !taken.insert(name.clone()) {
        name.push('\'');
    }
    name
}

/// Build the full synchronized product (all pairs, reachable or not).
pub fn product_with_memory(
    arena: &Arena,
    memory: &MemoryStructure,
) -> Result<MemoryProduct, MachineError> {
    memory.check_arena(arena)?;
    let states = memory.state_count();
    let mut builder = ArenaBuilder::new(arena.counters());
    let mut pairs = Vec::with_capacity(arena.vertex_count() * states);
    let mut index = BTreeMap::new();
    let mut taken = alloc::collections::BTreeSet::new();
    let mut names = Vec::with_capacity(arena.vertex_count() * states);
    for v in arena.vertex_ids() {
        for s in 0..states as u32 {
            let m = StateId(s);
            let name = fresh_name(
                format!("{}.{}", arena.name(v), memory.state_name(m)),
                &mut taken,
            );
            let pv = VertexId(pairs.len() as u32);
            pairs.push((v, m));
            index.insert((v, m), pv);
            builder.vertex(name.clone(), arena.owner(v), arena.color(v));
            names.push(name);
            if arena.is_target(v) {
                builder.target(names.last().unwrap().clone());
            }
            if let Some(rank) = arena.rank() {
                if let Some(&r) = rank.get(&v) {
                    builder.rank(names.last().unwrap().clone(), r);
                }
            }
        }
    }
    let mut source_edge = Vec::new();
    for &(v, m) in &pairs {
        let pv = index[&(v, m)];
        for &e in arena.out_edges(v) {
            let edge = arena.edge(e);
            let m2 = memory.next(m, e);
            let pt = index[&(edge.to, m2)];
            builder.edge(
                names[pv.index()].clone(),
                names[pt.index()].clone(),
                edge.action.clone(),
            );
            source_edge.push(e);
        }
    }
    builder.initial(names[index[&(arena.initial(), memory.initial())].index()].clone());
    let product = builder.finish().expect("product construction is closed");
    Ok(MemoryProduct {
        arena: product,
        memory: memory.clone(),
        pairs,
        index,
        source_edge,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counter::{CounterAction, Op};

    fn toggle_arena() -> Arena {
        // Eve vertex with two self-loops (inc, reset) and an exit to a target.
        let mut b = ArenaBuilder::new(1);
        b.vertex("v", Owner::Eve, 2)
            .vertex("f", Owner::Eve, 2)
            .edge("v", "v", CounterAction::single(Op::Inc))
            .edge("v", "v", CounterAction::single(Op::Reset))
            .edge("v", "f", CounterAction::single(Op::Skip))
            .initial("v")
            .target("f");
        b.finish().unwrap()
    }

    /// Two states that swap on every edge.
    fn flip_memory(edge_count: usize) -> MemoryStructure {
        MemoryStructure::new(
            alloc::vec![String::from("even"), String::from("odd")],
            StateId(0),
            alloc::vec![
                alloc::vec![StateId(1); edge_count],
                alloc::vec![StateId(0); edge_count],
            ],
        )
        .unwrap()
    }

    #[test]
    fn memory_structure_validation() {
        assert_eq!(
            MemoryStructure::new(Vec::new(), StateId(0), Vec::new()).unwrap_err(),
            MachineError::NoStates
        );
        assert_eq!(
            MemoryStructure::new(
                alloc::vec![String::from("a"), String::from("a")],
                StateId(0),
                alloc::vec![Vec::new(), Vec::new()],
            )
            .unwrap_err(),
            MachineError::DuplicateState(String::from("a"))
        );
        assert_eq!(
            MemoryStructure::new(
                alloc::vec![String::from("a")],
                StateId(1),
                alloc::vec![Vec::new()],
            )
            .unwrap_err(),
            MachineError::BadInitial
        );
        // Ragged rows.
        assert_eq!(
            MemoryStructure::new(
                alloc::vec![String::from("a"), String::from("b")],
                StateId(0),
                alloc::vec![alloc::vec![StateId(0)], Vec::new()],
            )
            .unwrap_err(),
            MachineError::UpdateShape
        );
    }

    #[test]
    fn strategy_validation_catches_bad_moves() {
        let arena = toggle_arena();
        let mem = MemoryStructure::singleton(arena.edge_count());
        let v = arena.vertex_by_name("v").unwrap();
        let f = arena.vertex_by_name("f").unwrap();

        let mut moves = BTreeMap::new();
        moves.insert((v, StateId(0)), EdgeId(2));
        assert!(StrategyMachine::new(mem.clone(), moves).validate(&arena).is_ok());

        // Edge 0 leaves "v", not "f".
        let mut moves = BTreeMap::new();
        moves.insert((f, StateId(0)), EdgeId(0));
        assert_eq!(
            StrategyMachine::new(mem.clone(), moves)
                .validate(&arena)
                .unwrap_err(),
            MachineError::MoveNotOutEdge {
                vertex: f,
                edge: EdgeId(0)
            }
        );

        // Wrong arena dimension.
        let mem_small = MemoryStructure::singleton(1);
        assert!(matches!(
            StrategyMachine::new(mem_small, BTreeMap::new())
                .validate(&arena)
                .unwrap_err(),
            MachineError::WrongArena { .. }
        ));
    }

    #[test]
    fn product_shape_and_round_trip() {
        let arena = toggle_arena();
        let memory = flip_memory(arena.edge_count());
        let product = product_with_memory(&arena, &memory).unwrap();
        assert_eq!(product.arena.vertex_count(), 2 * 2);
        assert_eq!(product.arena.edge_count(), 3 * 2);
        assert!(product.arena.validate().is_empty());

        let v = arena.vertex_by_name("v").unwrap();
        // Initial product vertex is (initial, initial state).
        assert_eq!(
            product.parts(product.arena.initial()),
            (v, StateId(0))
        );
        // Product targets are exactly the pairs whose arena part is a target.
        assert_eq!(product.arena.target().len(), 2);

        // Positional strategy on the product: at (v, even) increment, at
        // (v, odd) leave. Lift, then push back down.
        let mut positional = BTreeMap::new();
        let pv0 = product.product_vertex(v, StateId(0));
        let pv1 = product.product_vertex(v, StateId(1));
        let pick = |pv: VertexId, orig: EdgeId| {
            product
                .arena
                .out_edges(pv)
                .iter()
                .copied()
                .find(|&pe| product.source_edge(pe) == orig)
                .unwrap()
        };
        positional.insert(pv0, pick(pv0, EdgeId(0)));
        positional.insert(pv1, pick(pv1, EdgeId(2)));
        let machine = product.lift_positional(&positional);
        assert_eq!(machine.state_count(), 2);
        assert_eq!(machine.move_for(v, StateId(0)), Some(EdgeId(0)));
        assert_eq!(machine.move_for(v, StateId(1)), Some(EdgeId(2)));
        assert_eq!(product.to_positional(&machine), positional);
    }

    #[test]
    fn product_inherits_ranks() {
        let mut b = ArenaBuilder::new(0);
        b.vertex("a", Owner::Eve, 0)
            .vertex("b", Owner::Adam, 0)
            .edge_epsilon("a", "b")
            .initial("a")
            .rank("a", 0)
            .rank("b", 1);
        let arena = b.finish().unwrap();
        let product = product_with_memory(&arena, &flip_memory(arena.edge_count())).unwrap();
        let rank = product.arena.rank().unwrap();
        assert_eq!(rank.len(), 4);
        assert!(product.arena.validate().is_empty());
    }
}

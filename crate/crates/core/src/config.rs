//! Configuration graphs: the reachable state space of an arena under a
//! strategy machine, with capped counter valuations.
//!
//! A *configuration* is a triple (arena vertex, memory state, capped counter
//! valuation). Fixing Eve's moves to a [`StrategyMachine`] leaves Adam's
//! choices as the only branching, so the configuration graph contains every
//! play consistent with the strategy. The evaluators answer, exactly:
//!
//! * [`evaluate_strategy_reachability`] — does every consistent play keep all
//!   counters within the cap *until it reaches the target set*, and if so,
//!   what is the largest counter value reached on the way?
//! * [`evaluate_strategy_parity`] — does every consistent play keep all
//!   counters within the cap forever *and* satisfy the parity objective?
//!
//! Both return either the exact finite value (the supremum over consistent
//! plays of the supremum of counter values) or [`Value::Infinite`] together
//! with a concrete offending play, ready to be replayed with
//! [`crate::play::play_value`] / [`crate::play::parity_of_lasso`].

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::arena::{Arena, EdgeId, Owner, VertexId};
use crate::counter::{ArityMismatch, CounterValuation, Value};
use crate::graphutil::{component_has_cycle, strongly_connected_components};
use crate::machine::{MachineError, StateId, StrategyMachine};
use crate::play::Play;

/// Dense index of a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConfigId(pub u32);

impl ConfigId {
    /// The id as a usize, for indexing.
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// One configuration: where the play is, what the strategy remembers, and
/// what the counters hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigNode {
    /// Arena vertex.
    pub vertex: VertexId,
    /// Memory state of the strategy machine.
    pub state: StateId,
    /// Capped counter valuation.
    pub valuation: CounterValuation,
}

/// The reachable configuration graph of an arena under a strategy machine.
///
/// Expansion stops at target vertices when the arena has a target set (the
/// play is over there), at configurations whose valuation has exceeded the
/// cap (the objective is lost for good), and at terminal arena vertices.
#[derive(Debug, Clone)]
pub struct ConfigGraph {
    nodes: Vec<ConfigNode>,
    succ: Vec<Vec<(EdgeId, ConfigId)>>,
    parent: Vec<Option<(ConfigId, EdgeId)>>,
    initial: ConfigId,
    missing_move: Option<(VertexId, StateId)>,
    cap: u32,
}

/// Evaluation failure: the machine does not fit the arena, or the play can
/// reach an (Eve vertex, state) pair the machine defines no move for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalError {
    /// Structural mismatch between machine and arena.
    Machine(MachineError),
    /// A reachable Eve configuration has no move.
    MissingMove {
        /// The Eve-owned vertex.
        vertex: VertexId,
        /// The memory state.
        state: StateId,
    },
    /// Reachability evaluation on an arena without a target set.
    NoTarget,
    /// An edge action does not match the arena's counter count.
    Arity(ArityMismatch),
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::Machine(e) => write!(f, "machine does not fit the arena: {e}"),
            EvalError::MissingMove { vertex, state } => write!(
                f,
                "strategy has no move for reachable configuration ({vertex}, {state})"
            ),
            EvalError::NoTarget => write!(f, "reachability evaluation needs a target set"),
            EvalError::Arity(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for EvalError {}

impl From<MachineError> for EvalError {
    fn from(e: MachineError) -> Self {
        EvalError::Machine(e)
    }
}

impl From<ArityMismatch> for EvalError {
    fn from(e: ArityMismatch) -> Self {
        EvalError::Arity(e)
    }
}

/// Why a strategy evaluation came out infinite, with a concrete consistent
/// play exhibiting it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InfinityWitness {
    /// A finite consistent play pushing some counter past the cap.
    CounterExceeded(Play),
    /// A consistent lasso that never reaches the target set.
    AvoidsTarget(Play),
    /// A consistent lasso whose largest cycle color is odd.
    OddDominatedCycle(Play),
    /// A finite consistent play ending in a terminal vertex outside the
    /// target set.
    DeadEnd(Play),
}

impl InfinityWitness {
    /// The offending play.
    pub fn play(&self) -> &Play {
        match self {
            InfinityWitness::CounterExceeded(p)
            | InfinityWitness::AvoidsTarget(p)
            | InfinityWitness::OddDominatedCycle(p)
            | InfinityWitness::DeadEnd(p) => p,
        }
    }
}

/// Result of evaluating a strategy machine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    /// The exact value (supremum over consistent plays), or infinite.
    pub value: Value,
    /// Present iff the value is infinite.
    pub witness: Option<InfinityWitness>,
}

impl ConfigGraph {
    /// Number of configurations.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// True if the graph is empty (never: the initial configuration exists).
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// The initial configuration.
    pub fn initial(&self) -> ConfigId {
        self.initial
    }

    /// The configuration record for `c`.
    pub fn node(&self, c: ConfigId) -> &ConfigNode {
        &self.nodes[c.index()]
    }

    /// All configurations, in discovery (BFS) order.
    pub fn nodes(&self) -> impl Iterator<Item = (ConfigId, &ConfigNode)> {
        self.nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (ConfigId(i as u32), n))
    }

    /// Successors of `c`: the arena edge taken and the configuration reached.
    pub fn successors(&self, c: ConfigId) -> &[(EdgeId, ConfigId)] {
        &self.succ[c.index()]
    }

    /// The cap valuations saturate at.
    pub fn cap(&self) -> u32 {
        self.cap
    }

    /// The first (in discovery order) reachable Eve configuration the
    /// machine defines no move for, if any.
    pub fn missing_move(&self) -> Option<(VertexId, StateId)> {
        self.missing_move
    }

    /// The arena-edge path from the initial configuration to `c`, along BFS
    /// parents (a shortest path in the configuration graph).
    pub fn path_to(&self, c: ConfigId) -> Vec<EdgeId> {
        let mut edges = Vec::new();
        let mut cursor = c;
        while let Some((p, e)) = self.parent[cursor.index()] {
            edges.push(e);
            cursor = p;
        }
        edges.reverse();
        edges
    }

    /// First configuration (discovery order) whose arena vertex lies in
    /// `set`, if any is reachable.
    pub fn first_visit(&self, set: &BTreeSet<VertexId>) -> Option<ConfigId> {
        self.nodes()
            .find(|(_, n)| set.contains(&n.vertex))
            .map(|(c, _)| c)
    }

    /// Largest within-cap counter value over all configurations.
    pub fn max_within(&self) -> u32 {
        self.nodes
            .iter()
            .flat_map(|n| n.valuation.values().iter())
            .filter_map(|v| v.finite())
            .max()
            .unwrap_or(0)
    }

    /// First configuration whose valuation exceeded the cap, if any.
    pub fn first_exceeded(&self) -> Option<ConfigId> {
        self.nodes()
            .find(|(_, n)| n.valuation.any_exceeded())
            .map(|(c, _)| c)
    }

    /// A consistent lasso that stays within this graph forever, if one
    /// exists (i.e. if the graph has a cycle). Leaves of the graph (target
    /// stops, exceeded valuations, terminals) have no successors, so any
    /// cycle consists of interior configurations only.
    fn find_lasso(&self) -> Option<Play> {
        // Iterative DFS keeping the explicit path for witness extraction.
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            White,
            OnPath,
            Done,
        }
        let mut marks = alloc::vec![Mark::White; self.nodes.len()];
        // (config, next successor offset, edge that entered this frame)
        let mut frames: Vec<(ConfigId, usize, Option<EdgeId>)> = Vec::new();
        let mut depth_of = alloc::vec![usize::MAX; self.nodes.len()];
        for root in 0..self.nodes.len() {
            let root = ConfigId(root as u32);
            if marks[root.index()] != Mark::White {
                continue;
            }
            frames.push((root, 0, None));
            marks[root.index()] = Mark::OnPath;
            depth_of[root.index()] = 0;
            while let Some(&mut (c, ref mut next, _)) = frames.last_mut() {
                if *next < self.succ[c.index()].len() {
                    let (e, w) = self.succ[c.index()][*next];
                    *next += 1;
                    match marks[w.index()] {
                        Mark::White => {
                            marks[w.index()] = Mark::OnPath;
                            depth_of[w.index()] = frames.len();
                            frames.push((w, 0, Some(e)));
                        }
                        Mark::OnPath => {
                            // Cycle: frames[j..] plus the back edge, where
                            // frames[j] holds w.
                            let j = depth_of[w.index()];
                            let mut cycle: Vec<EdgeId> = frames[j + 1..]
                                .iter()
                                .map(|&(_, _, e)| e.expect("non-root frame has an entry edge"))
                                .collect();
                            cycle.push(e);
                            // The prefix must be a real play from the initial
                            // configuration; the DFS path from `root` only
                            // works when the DFS rooted at the initial node
                            // found the cycle. Use BFS parents instead: they
                            // always lead back to the initial configuration.
                            let prefix = self.path_to(w);
                            return Some(Play::Lasso { prefix, cycle });
                        }
                        Mark::Done => {}
                    }
                } else {
                    marks[c.index()] = Mark::Done;
                    frames.pop();
                }
            }
        }
        None
    }
}

/// Expand the reachable configuration graph of `arena` under `machine`, with
/// counters capped at `cap`.
///
/// Expansion stops at target vertices (when the arena has a target set), at
/// exceeded valuations, at terminal vertices, and at Eve configurations with
/// no defined move (recorded, not an error here — see
/// [`ConfigGraph::missing_move`]).
pub fn restrict_by_strategy(
    arena: &Arena,
    machine: &StrategyMachine,
    cap: u32,
) -> Result<ConfigGraph, EvalError> {
    machine.validate(arena)?;
    let stop_at_target = !arena.target().is_empty();
    let mut nodes: Vec<ConfigNode> = Vec::new();
    let mut succ: Vec<Vec<(EdgeId, ConfigId)>> = Vec::new();
    let mut parent: Vec<Option<(ConfigId, EdgeId)>> = Vec::new();
    let mut index: alloc::collections::BTreeMap<(VertexId, StateId, u64), ConfigId> =
        alloc::collections::BTreeMap::new();
    let mut missing_move = None;

    let initial_node = ConfigNode {
        vertex: arena.initial(),
        state: machine.memory.initial(),
        valuation: CounterValuation::zero(arena.counters(), cap),
    };
    index.insert(
        (initial_node.vertex, initial_node.state, initial_node.valuation.code()),
        ConfigId(0),
    );
    nodes.push(initial_node);
    succ.push(Vec::new());
    parent.push(None);

    let mut cursor = 0usize;
    while cursor < nodes.len() {
        let c = ConfigId(cursor as u32);
        let node = nodes[cursor].clone();
        cursor += 1;
        if node.valuation.any_exceeded() {
            continue; // objective lost; leaf
        }
        if stop_at_target && arena.is_target(node.vertex) {
            continue; // play over; leaf
        }
        let edges: Vec<EdgeId> = match arena.owner(node.vertex) {
            Owner::Eve => match machine.move_for(node.vertex, node.state) {
                Some(e) => alloc::vec![e],
                None => {
                    if !arena.out_edges(node.vertex).is_empty() && missing_move.is_none() {
                        missing_move = Some((node.vertex, node.state));
                    }
                    Vec::new()
                }
            },
            Owner::Adam => arena.out_edges(node.vertex).to_vec(),
        };
        for e in edges {
            let edge = arena.edge(e);
            let next_state = machine.memory.next(node.state, e);
            let next_val = node.valuation.apply(&edge.action)?;
            let key = (edge.to, next_state, next_val.code());
            let target = *index.entry(key).or_insert_with(|| {
                let id = ConfigId(nodes.len() as u32);
                nodes.push(ConfigNode {
                    vertex: edge.to,
                    state: next_state,
                    valuation: next_val,
                });
                succ.push(Vec::new());
                parent.push(Some((c, e)));
                id
            });
            succ[c.index()].push((e, target));
        }
    }
    Ok(ConfigGraph {
        nodes,
        succ,
        parent,
        initial: ConfigId(0),
        missing_move,
        cap,
    })
}

/// Exact value of `machine` for the bounded-until-target objective: the
/// supremum over consistent plays of counter values, provided every
/// consistent play reaches the target within the cap.
///
/// Infinite (with witness) when some consistent play exceeds `cap` before
/// the target ([`InfinityWitness::CounterExceeded`] — the true value may be
/// finite but larger than `cap`), never reaches the target
/// ([`InfinityWitness::AvoidsTarget`] / [`InfinityWitness::DeadEnd`]).
pub fn evaluate_strategy_reachability(
    arena: &Arena,
    machine: &StrategyMachine,
    cap: u32,
) -> Result<Evaluation, EvalError> {
    if arena.target().is_empty() {
        return Err(EvalError::NoTarget);
    }
    let graph = restrict_by_strategy(arena, machine, cap)?;
    if let Some((vertex, state)) = graph.missing_move() {
        return Err(EvalError::MissingMove { vertex, state });
    }
    if let Some(c) = graph.first_exceeded() {
        return Ok(Evaluation {
            value: Value::Infinite,
            witness: Some(InfinityWitness::CounterExceeded(Play::Finite(
                graph.path_to(c),
            ))),
        });
    }
    // A terminal non-target configuration: the play dies before the target.
    if let Some((c, _)) = graph.nodes().find(|(_, n)| {
        !arena.is_target(n.vertex) && arena.out_edges(n.vertex).is_empty()
    }) {
        return Ok(Evaluation {
            value: Value::Infinite,
            witness: Some(InfinityWitness::DeadEnd(Play::Finite(graph.path_to(c)))),
        });
    }
    // Any cycle is a consistent play that never reaches the target (target
    // configurations are leaves, so cycles avoid them).
    if let Some(lasso) = graph.find_lasso() {
        return Ok(Evaluation {
            value: Value::Infinite,
            witness: Some(InfinityWitness::AvoidsTarget(lasso)),
        });
    }
    Ok(Evaluation {
        value: Value::Finite(graph.max_within()),
        witness: None,
    })
}

/// Exact value of `machine` for the bounded-and-parity objective: the
/// supremum over consistent plays of counter values, provided every
/// consistent play stays within the cap and satisfies parity (largest color
/// repeating is even).
///
/// Expansion stops at target vertices if the arena declares any (a finished
/// play trivially satisfies parity); on arenas without targets every
/// consistent play is infinite or ends at a terminal vertex, where the
/// parity objective is vacuously met.
pub fn evaluate_strategy_parity(
    arena: &Arena,
    machine: &StrategyMachine,
    cap: u32,
) -> Result<Evaluation, EvalError> {
    let graph = restrict_by_strategy(arena, machine, cap)?;
    if let Some((vertex, state)) = graph.missing_move() {
        return Err(EvalError::MissingMove { vertex, state });
    }
    if let Some(c) = graph.first_exceeded() {
        return Ok(Evaluation {
            value: Value::Infinite,
            witness: Some(InfinityWitness::CounterExceeded(Play::Finite(
                graph.path_to(c),
            ))),
        });
    }
    // Parity check: for each odd color c (largest first), look for a cycle
    // confined to colors <= c that passes through a color-c configuration.
    // Such a cycle yields a consistent play whose largest recurring color is
    // exactly c.
    let mut odd_colors: Vec<u32> = graph
        .nodes()
        .map(|(_, n)| arena.color(n.vertex))
        .filter(|c| c % 2 == 1)
        .collect();
    odd_colors.sort_unstable();
    odd_colors.dedup();
    for &c in odd_colors.iter().rev() {
        let included: Vec<bool> = graph
            .nodes()
            .map(|(_, n)| arena.color(n.vertex) <= c)
            .collect();
        let mut adj = alloc::vec![Vec::new(); graph.len()];
        for (id, _) in graph.nodes() {
            if !included[id.index()] {
                continue;
            }
            for &(_, w) in graph.successors(id) {
                if included[w.index()] {
                    adj[id.index()].push(w.index());
                }
            }
        }
        for component in strongly_connected_components(&adj) {
            if !component_has_cycle(&adj, &component) {
                continue;
            }
            let anchor = component
                .iter()
                .copied()
                .find(|&n| arena.color(graph.node(ConfigId(n as u32)).vertex) == c);
            let Some(anchor) = anchor else { continue };
            let lasso = cycle_through(&graph, &component, ConfigId(anchor as u32));
            return Ok(Evaluation {
                value: Value::Infinite,
                witness: Some(InfinityWitness::OddDominatedCycle(lasso)),
            });
        }
    }
    Ok(Evaluation {
        value: Value::Finite(graph.max_within()),
        witness: None,
    })
}

/// Build a lasso witness through `anchor` staying inside `component`
/// (a strongly connected set of configurations with at least one cycle
/// through the anchor).
fn cycle_through(graph: &ConfigGraph, component: &[usize], anchor: ConfigId) -> Play {
    let in_component = {
        let mut mask = alloc::vec![false; graph.len()];
        for &n in component {
            mask[n] = true;
        }
        mask
    };
    // BFS from the anchor's successors back to the anchor, inside the
    // component.
    let mut back: alloc::collections::BTreeMap<usize, (usize, EdgeId)> =
        alloc::collections::BTreeMap::new();
    let mut queue: Vec<usize> = Vec::new();
    let mut closing: Option<Vec<EdgeId>> = None;
    'search: for &(e, w) in graph.successors(anchor) {
        if !in_component[w.index()] {
            continue;
        }
        if w == anchor {
            closing = Some(alloc::vec![e]); // self-loop
            break 'search;
        }
        if !back.contains_key(&w.index()) {
            back.insert(w.index(), (anchor.index(), e));
            queue.push(w.index());
        }
    }
    let mut head = 0usize;
    while closing.is_none() && head < queue.len() {
        let u = queue[head];
        head += 1;
        for &(e, w) in graph.successors(ConfigId(u as u32)) {
            if !in_component[w.index()] {
                continue;
            }
            if w == anchor {
                // Reconstruct anchor -> ... -> u, then e closes the cycle.
                let mut edges = alloc::vec![e];
                let mut cursor = u;
                while cursor != anchor.index() {
                    let (p, pe) = back[&cursor];
                    edges.push(pe);
                    cursor = p;
                }
                edges.reverse();
                closing = Some(edges);
                break;
            }
            if let alloc::collections::btree_map::Entry::Vacant(slot) = back.entry(w.index()) {
                slot.insert((u, e));
                queue.push(w.index());
            }
        }
    }
    let cycle = closing.expect("strongly connected component has a cycle through its anchor");
    Play::Lasso {
        prefix: graph.path_to(anchor),
        cycle,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::{ArenaBuilder, Owner};
    use crate::counter::{CounterAction, Op};
    use crate::machine::{MemoryStructure, StrategyMachine};
    use crate::play::{parity_of_lasso, play_value};
    use alloc::collections::BTreeMap;
    use alloc::string::String;

    /// Eve vertex with inc and reset self-loops plus an exit to the target.
    fn counter_arena() -> Arena {
        let mut b = ArenaBuilder::new(1);
        b.vertex("v", Owner::Eve, 2)
            .vertex("f", Owner::Eve, 2)
            .edge("v", "v", CounterAction::single(Op::Inc)) // edge 0
            .edge("v", "v", CounterAction::single(Op::Reset)) // edge 1
            .edge("v", "f", CounterAction::single(Op::Skip)) // edge 2
            .initial("v")
            .target("f");
        b.finish().unwrap()
    }

    /// Machine that counts its own steps: state i moves to i+1, last state
    /// exits. Moves: inc until the last state, then take the exit edge.
    fn count_then_exit(arena: &Arena, incs: usize) -> StrategyMachine {
        let states = incs + 1;
        let names: Vec<String> = (0..states).map(|i| alloc::format!("s{i}")).collect();
        let mut update = alloc::vec![alloc::vec![StateId(0); arena.edge_count()]; states];
        for (s, row) in update.iter_mut().enumerate() {
            let next = StateId(((s + 1).min(states - 1)) as u32);
            row.fill(next);
        }
        let memory = MemoryStructure::new(names, StateId(0), update).unwrap();
        let v = arena.vertex_by_name("v").unwrap();
        let mut moves = BTreeMap::new();
        for s in 0..states {
            let edge = if s < incs { EdgeId(0) } else { EdgeId(2) };
            moves.insert((v, StateId(s as u32)), edge);
        }
        StrategyMachine::new(memory, moves)
    }

    #[test]
    fn reachability_counts_exactly() {
        let arena = counter_arena();
        for incs in 0..4usize {
            let machine = count_then_exit(&arena, incs);
            let eval = evaluate_strategy_reachability(&arena, &machine, 10).unwrap();
            assert_eq!(eval.value, Value::Finite(incs as u32));
            assert!(eval.witness.is_none());
        }
    }

    #[test]
    fn reachability_reports_exceeded_with_replayable_witness() {
        let arena = counter_arena();
        let machine = count_then_exit(&arena, 3);
        let eval = evaluate_strategy_reachability(&arena, &machine, 2).unwrap();
        assert_eq!(eval.value, Value::Infinite);
        let Some(InfinityWitness::CounterExceeded(play)) = eval.witness else {
            panic!("expected a counter-exceeded witness");
        };
        // The witness replays to a value strictly above the cap.
        let v = play_value(&arena, &play).unwrap();
        assert_eq!(v, Value::Finite(3));
        assert!(!v.at_most(2));
    }

    #[test]
    fn reachability_detects_avoidance_cycles() {
        let arena = counter_arena();
        // One state, always reset: never exits.
        let memory = MemoryStructure::singleton(arena.edge_count());
        let v = arena.vertex_by_name("v").unwrap();
        let mut moves = BTreeMap::new();
        moves.insert((v, StateId(0)), EdgeId(1));
        let machine = StrategyMachine::new(memory, moves);
        let eval = evaluate_strategy_reachability(&arena, &machine, 5).unwrap();
        assert_eq!(eval.value, Value::Infinite);
        let Some(InfinityWitness::AvoidsTarget(play)) = eval.witness else {
            panic!("expected an avoids-target witness");
        };
        assert!(matches!(play, Play::Lasso { .. }));
        assert_eq!(play_value(&arena, &play).unwrap(), Value::Finite(0));
    }

    #[test]
    fn missing_move_is_an_error_not_a_value() {
        let arena = counter_arena();
        let memory = MemoryStructure::singleton(arena.edge_count());
        let machine = StrategyMachine::new(memory, BTreeMap::new());
        let err = evaluate_strategy_reachability(&arena, &machine, 5).unwrap_err();
        let v = arena.vertex_by_name("v").unwrap();
        assert_eq!(
            err,
            EvalError::MissingMove {
                vertex: v,
                state: StateId(0)
            }
        );
    }

    #[test]
    fn dead_end_before_target_is_infinite() {
        let mut b = ArenaBuilder::new(0);
        b.vertex("a", Owner::Adam, 0)
            .vertex("dead", Owner::Eve, 0)
            .vertex("f", Owner::Eve, 0)
            .edge_epsilon("a", "dead")
            .edge_epsilon("a", "f")
            .edge_epsilon("a", "a")
            .initial("a")
            .target("f");
        let arena = b.finish().unwrap();
        let machine =
            StrategyMachine::new(MemoryStructure::singleton(arena.edge_count()), BTreeMap::new());
        let eval = evaluate_strategy_reachability(&arena, &machine, 0).unwrap();
        assert_eq!(eval.value, Value::Infinite);
        // Adam can go to "dead"; the dead-end witness is found before the
        // self-loop lasso in discovery order.
        assert!(matches!(eval.witness, Some(InfinityWitness::DeadEnd(_))));
    }

    /// Arena where Adam chooses between an even loop and an odd loop.
    fn parity_choice_arena() -> Arena {
        let mut b = ArenaBuilder::new(1);
        b.vertex("a", Owner::Adam, 0)
            .vertex("even", Owner::Adam, 2)
            .vertex("odd", Owner::Adam, 1)
            .edge("a", "even", CounterAction::single(Op::Skip))
            .edge("a", "odd", CounterAction::single(Op::Skip))
            .edge("even", "even", CounterAction::single(Op::Skip))
            .edge("odd", "odd", CounterAction::single(Op::Skip))
            .initial("a");
        b.finish().unwrap()
    }

    #[test]
    fn parity_finds_the_dominating_odd_cycle() {
        let arena = parity_choice_arena();
        let machine =
            StrategyMachine::new(MemoryStructure::singleton(arena.edge_count()), BTreeMap::new());
        let eval = evaluate_strategy_parity(&arena, &machine, 3).unwrap();
        assert_eq!(eval.value, Value::Infinite);
        let Some(InfinityWitness::OddDominatedCycle(play)) = eval.witness else {
            panic!("expected an odd-cycle witness");
        };
        assert_eq!(parity_of_lasso(&arena, &play).unwrap(), Owner::Adam);
    }

    #[test]
    fn parity_accepts_even_cycles_and_reports_the_value() {
        // Eve loops: inc, inc, reset, with color 2 everywhere.
        let mut b = ArenaBuilder::new(1);
        b.vertex("x", Owner::Eve, 2)
            .vertex("y", Owner::Eve, 2)
            .vertex("z", Owner::Eve, 2)
            .edge("x", "y", CounterAction::single(Op::Inc))
            .edge("y", "z", CounterAction::single(Op::Inc))
            .edge("z", "x", CounterAction::single(Op::Reset))
            .initial("x");
        let arena = b.finish().unwrap();
        let mut moves = BTreeMap::new();
        for (name, e) in [("x", 0u32), ("y", 1), ("z", 2)] {
            moves.insert(
                (arena.vertex_by_name(name).unwrap(), StateId(0)),
                EdgeId(e),
            );
        }
        let machine =
            StrategyMachine::new(MemoryStructure::singleton(arena.edge_count()), moves);
        let eval = evaluate_strategy_parity(&arena, &machine, 5).unwrap();
        assert_eq!(eval.value, Value::Finite(2));
        // With a cap below the loop's peak, the verdict flips to exceeded.
        let eval = evaluate_strategy_parity(&arena, &machine, 1).unwrap();
        assert_eq!(eval.value, Value::Infinite);
        assert!(matches!(
            eval.witness,
            Some(InfinityWitness::CounterExceeded(_))
        ));
    }

    #[test]
    fn parity_odd_color_on_transient_prefix_is_harmless() {
        // Initial odd vertex leading into an even loop: the odd color does
        // not repeat, so Eve is fine.
        let mut b = ArenaBuilder::new(0);
        b.vertex("start", Owner::Eve, 3)
            .vertex("loop", Owner::Eve, 2)
            .edge_epsilon("start", "loop")
            .edge_epsilon("loop", "loop")
            .initial("start");
        let arena = b.finish().unwrap();
        let mut moves = BTreeMap::new();
        moves.insert((arena.vertex_by_name("start").unwrap(), StateId(0)), EdgeId(0));
        moves.insert((arena.vertex_by_name("loop").unwrap(), StateId(0)), EdgeId(1));
        let machine =
            StrategyMachine::new(MemoryStructure::singleton(arena.edge_count()), moves);
        let eval = evaluate_strategy_parity(&arena, &machine, 0).unwrap();
        assert_eq!(eval.value, Value::Finite(0));
    }

    #[test]
    fn config_graph_stops_at_targets() {
        let arena = counter_arena();
        let machine = count_then_exit(&arena, 1);
        let graph = restrict_by_strategy(&arena, &machine, 4).unwrap();
        // Configurations: (v,s0,0) -> (v,s1,1) -> (f,s1|s2,1). The target
        // configuration has no successors.
        let f = arena.vertex_by_name("f").unwrap();
        let (target_cfg, _) = graph.nodes().find(|(_, n)| n.vertex == f).unwrap();
        assert!(graph.successors(target_cfg).is_empty());
        assert_eq!(graph.max_within(), 1);
    }
}

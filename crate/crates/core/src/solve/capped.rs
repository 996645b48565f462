//! Deciding bounded-counter games through the capped configuration arena.
//!
//! For a bound `N`, the capped arena tracks `(vertex, valuation)` pairs with
//! every counter at most `N`. Any transition that would push a counter past
//! the bound — or visit a forbidden vertex — is redirected to a losing sink.
//! The result is a finite counter-free game: reachability or parity solvers
//! decide it, and an Eve win converts back into a strategy machine whose
//! memory is exactly the set of counter valuations she visits.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::arena::{Arena, ArenaBuilder, EdgeId, Owner, VertexId};
use crate::condition::{ConditionKind, ConditionSpec};
use crate::config::{evaluate_strategy_parity, evaluate_strategy_reachability, restrict_by_strategy, Evaluation};
use crate::counter::{CounterAction, CounterValuation};
use crate::machine::{fresh_name, MemoryStructure, StateId, StrategyMachine};
use crate::solve::zielonka::solve_parity_game;
use crate::solve::{solve_reachability_game, SolveError, SolveResult};

/// What a vertex of the capped arena stands for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CappedSource {
    /// A reachable configuration: original vertex plus counter valuation
    /// (all values within the cap).
    Node {
        /// The original vertex.
        vertex: VertexId,
        /// The counter valuation at this configuration.
        valuation: CounterValuation,
    },
    /// The losing sink that absorbs capped-out and forbidden transitions.
    Bottom,
}

/// The capped configuration arena, keeping the link back to the original.
///
/// Only configurations reachable from the initial one are materialized, so
/// the vertex count is at most `|V| * (N+1)^k`, plus one for the sink. The
/// sink carries an odd self-loop: reaching it loses every objective this
/// module decides. Configurations at a target vertex (when stopping there)
/// and at terminal vertices become absorbing with an even self-loop: a play
/// that ends, ends well.
#[derive(Debug, Clone)]
pub struct CappedArena {
    /// The counter-free game arena over configurations.
    arena: Arena,
    /// For each capped vertex, what it represents.
    source: Vec<CappedSource>,
    /// The sink vertex.
    bottom: VertexId,
    /// For each capped edge, the original edge it simulates. `None` for the
    /// self-loops added to absorbing configurations and the sink.
    source_edge: Vec<Option<EdgeId>>,
    /// Lookup from `(original vertex, valuation code)` to capped vertex.
    index: BTreeMap<(VertexId, u64), VertexId>,
}

impl CappedArena {
    /// The configuration game itself (zero counters, all actions empty).
    pub fn arena(&self) -> &Arena {
        &self.arena
    }

    /// The losing sink.
    pub fn bottom(&self) -> VertexId {
        self.bottom
    }

    /// What capped vertex `v` represents.
    pub fn source(&self, v: VertexId) -> &CappedSource {
        &self.source[v.index()]
    }

    /// The original edge behind capped edge `e`, if any.
    pub fn source_edge(&self, e: EdgeId) -> Option<EdgeId> {
        self.source_edge[e.index()]
    }

    /// The capped vertex for `(vertex, valuation)`, if that configuration is
    /// reachable.
    pub fn config_id(&self, vertex: VertexId, valuation: &CounterValuation) -> Option<VertexId> {
        self.index.get(&(vertex, valuation.code())).copied()
    }

    /// Number of materialized configurations, sink included.
    pub fn config_count(&self) -> usize {
        self.arena.vertex_count()
    }
}

/// Human-readable name for a configuration: vertex name plus counter values.
fn config_name(arena: &Arena, v: VertexId, valuation: &CounterValuation) -> String {
    if arena.counters() == 0 {
        return arena.name(v).to_string();
    }
    let digits: Vec<String> = valuation
        .values()
        .iter()
        .map(|c| c.finite().expect("materialized valuations stay within cap").to_string())
        .collect();
    let mut name = String::from(arena.name(v));
    name.push('@');
    name.push_str(&digits.join(","));
    name
}

/// Core construction. `stop_at_target` makes configurations at target
/// vertices absorbing wins; `forbidden` redirects any step into the given
/// vertices to the sink.
fn build_capped(
    arena: &Arena,
    n: u32,
    stop_at_target: bool,
    forbidden: Option<&BTreeSet<VertexId>>,
) -> CappedArena {
    const BOTTOM_NAME: &str = "_bot";
    let k = arena.counters();
    let mut builder = ArenaBuilder::new(0);
    let mut taken: BTreeSet<String> = BTreeSet::new();
    taken.insert(String::from(BOTTOM_NAME));

    let mut index: BTreeMap<(VertexId, u64), VertexId> = BTreeMap::new();
    let mut source: Vec<CappedSource> = Vec::new();
    let mut names: Vec<String> = Vec::new();
    let mut source_edge: Vec<Option<EdgeId>> = Vec::new();
    let mut queue: Vec<(VertexId, CounterValuation)> = Vec::new();
    let is_forbidden = |v: VertexId| forbidden.is_some_and(|f| f.contains(&v));
    // A configuration where the play ends: at a target when stopping there,
    // or at a terminal vertex. Absorbing configurations get an even
    // self-loop — a play that ends, ends well.
    let is_absorbing =
        |v: VertexId| (stop_at_target && arena.is_target(v)) || arena.out_edges(v).is_empty();

    let discover = |v: VertexId,
                        val: CounterValuation,
                        builder: &mut ArenaBuilder,
                        index: &mut BTreeMap<(VertexId, u64), VertexId>,
                        source: &mut Vec<CappedSource>,
                        names: &mut Vec<String>,
                        taken: &mut BTreeSet<String>,
                        queue: &mut Vec<(VertexId, CounterValuation)>|
     -> VertexId {
        if let Some(&id) = index.get(&(v, val.code())) {
            return id;
        }
        let id = VertexId(source.len() as u32);
        let name = fresh_name(config_name(arena, v, &val), taken);
        let color = if is_absorbing(v) { 2 } else { arena.color(v) };
        builder.vertex(&name, arena.owner(v), color);
        index.insert((v, val.code()), id);
        names.push(name);
        source.push(CappedSource::Node {
            vertex: v,
            valuation: val.clone(),
        });
        queue.push((v, val));
        id
    };

    let initial_capped: Option<VertexId> = if is_forbidden(arena.initial()) {
        None
    } else {
        Some(discover(
            arena.initial(),
            CounterValuation::zero(k, n),
            &mut builder,
            &mut index,
            &mut source,
            &mut names,
            &mut taken,
            &mut queue,
        ))
    };

    let mut head = 0;
    while head < queue.len() {
        let (v, val) = queue[head].clone();
        head += 1;
        let here = index[&(v, val.code())];
        if is_absorbing(v) {
            builder.edge(
                &names[here.index()],
                &names[here.index()],
                CounterAction::epsilon(0),
            );
            source_edge.push(None);
            if arena.is_target(v) {
                builder.target(&names[here.index()]);
            }
            continue;
        }
        for &e in arena.out_edges(v) {
            let edge = arena.edge(e);
            let next = val
                .apply(&edge.action)
                .expect("edge actions match the arena arity");
            let to_name: String = if next.any_exceeded() || is_forbidden(edge.to) {
                String::from(BOTTOM_NAME)
            } else {
                let to = discover(
                    edge.to,
                    next,
                    &mut builder,
                    &mut index,
                    &mut source,
                    &mut names,
                    &mut taken,
                    &mut queue,
                );
                names[to.index()].clone()
            };
            builder.edge(&names[here.index()], &to_name, CounterAction::epsilon(0));
            source_edge.push(Some(e));
        }
    }

    // The sink is always materialized, last, so configuration ids stay
    // contiguous in discovery order.
    let bottom = VertexId(source.len() as u32);
    builder.vertex(BOTTOM_NAME, Owner::Adam, 1);
    builder.edge(BOTTOM_NAME, BOTTOM_NAME, CounterAction::epsilon(0));
    source.push(CappedSource::Bottom);
    source_edge.push(None);
    builder.initial(match initial_capped {
        Some(id) => names[id.index()].clone(),
        None => String::from(BOTTOM_NAME),
    });
    let arena = builder
        .finish()
        .expect("capped construction produces a valid arena");
    CappedArena {
        arena,
        source,
        bottom,
        source_edge,
        index,
    }
}

/// Build the capped configuration arena for bound `n`, with no extra
/// avoidance set. Plays stop (and win) at target vertices when the arena has
/// any; otherwise every configuration keeps playing.
pub fn capped_configuration_arena(arena: &Arena, n: u32) -> CappedArena {
    build_capped(arena, n, !arena.target().is_empty(), None)
}

/// The outcome of deciding a bounded game: the capped arena the decision was
/// made on and the solved result over it.
#[derive(Debug, Clone)]
pub struct BparityDecision {
    /// The capped configuration arena.
    pub capped: CappedArena,
    /// Winning regions and positional witnesses over [`CappedArena::arena`].
    pub result: SolveResult,
}

impl BparityDecision {
    /// Who wins from the initial configuration.
    pub fn winner(&self) -> Owner {
        self.result.winner
    }
}

/// Decide who wins `arena` under `condition` from the initial vertex.
///
/// Both bounded kinds are decided on the capped arena for the condition's
/// bound: the until-target kind as a reachability game to the target
/// configurations, the parity kind as a parity game. The condition must
/// carry a bound, and the until-target kind needs a nonempty target set.
pub fn decide_bparity(
    arena: &Arena,
    condition: &ConditionSpec,
) -> Result<BparityDecision, SolveError> {
    if condition.kind == ConditionKind::ParityOnly {
        return Err(SolveError::UnsupportedCondition);
    }
    let n = condition.bound.ok_or(SolveError::MissingBound)?;
    match condition.kind {
        ConditionKind::BoundedUntilTarget => {
            if arena.target().is_empty() {
                return Err(SolveError::MissingTarget);
            }
            let capped = build_capped(arena, n, true, condition.forbidden.as_ref());
            let target = capped.arena.target().clone();
            let result = solve_reachability_game(&capped.arena, &target);
            Ok(BparityDecision { capped, result })
        }
        ConditionKind::BoundedAndParity => {
            let capped = build_capped(
                arena,
                n,
                !arena.target().is_empty(),
                condition.forbidden.as_ref(),
            );
            let result = solve_parity_game(&capped.arena);
            Ok(BparityDecision { capped, result })
        }
        ConditionKind::ParityOnly => unreachable!("rejected above"),
    }
}

/// Result of a bounded search for the least winning bound.
#[derive(Debug, Clone)]
pub struct ValueSearch {
    /// The verdict.
    pub outcome: ValueOutcome,
    /// The decision at the winning bound, when one was found.
    pub decision: Option<BparityDecision>,
}

/// Verdict of [`value_search`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValueOutcome {
    /// The least bound `n <= n_max` for which Eve wins.
    Value(u32),
    /// Eve wins for no bound up to `n_max` (she may still win some larger
    /// one, or none at all).
    ExceedsMax,
}

/// Find the least bound `n <= n_max` under which Eve wins `condition` (its
/// own bound, if any, is ignored and replaced by the scanned one).
pub fn value_search(
    arena: &Arena,
    condition: &ConditionSpec,
    n_max: u32,
) -> Result<ValueSearch, SolveError> {
    for n in 0..=n_max {
        let decision = decide_bparity(arena, &condition.clone().with_bound(n))?;
        if decision.winner() == Owner::Eve {
            return Ok(ValueSearch {
                outcome: ValueOutcome::Value(n),
                decision: Some(decision),
            });
        }
    }
    Ok(ValueSearch {
        outcome: ValueOutcome::ExceedsMax,
        decision: None,
    })
}

/// A strategy machine extracted from a winning capped-arena strategy.
#[derive(Debug, Clone)]
pub struct Lemma1Strategy {
    /// The machine: one memory state per counter valuation Eve's play can
    /// reach, at most `(N+1)^k` states.
    pub machine: StrategyMachine,
    /// The bound it was built for.
    pub bound: u32,
    /// Re-evaluation of the machine on the original arena (independent of
    /// the capped construction).
    pub evaluation: Evaluation,
}

/// Turn a winning decision into a strategy machine whose memory is the set
/// of counter valuations visited under Eve's positional capped strategy.
///
/// Errors with [`SolveError::NotWinning`] if Adam wins the capped game. The
/// returned machine is validated and re-evaluated against the original
/// arena; the construction asserts the value stays within the bound and the
/// state count within `(N+1)^k`.
pub fn lemma1_strategy(
    arena: &Arena,
    condition: &ConditionSpec,
) -> Result<Lemma1Strategy, SolveError> {
    let n = condition.bound.ok_or(SolveError::MissingBound)?;
    let decision = decide_bparity(arena, condition)?;
    if decision.winner() != Owner::Eve {
        return Err(SolveError::NotWinning);
    }
    let capped = &decision.capped;
    let game = capped.arena();

    // Walk the capped arena under Eve's strategy: her configurations follow
    // the chosen edge, Adam's keep every edge. The visited configurations
    // are exactly the memory the machine needs.
    let mut visited = alloc::vec![false; game.vertex_count()];
    let mut stack = alloc::vec![game.initial()];
    visited[game.initial().index()] = true;
    let mut reached: Vec<VertexId> = Vec::new();
    while let Some(v) = stack.pop() {
        reached.push(v);
        assert!(
            v != capped.bottom(),
            "a winning strategy never reaches the sink"
        );
        let edges: Vec<EdgeId> = match game.owner(v) {
            Owner::Eve => decision
                .result
                .eve_strategy
                .get(&v)
                .into_iter()
                .copied()
                .collect(),
            Owner::Adam => game.out_edges(v).to_vec(),
        };
        for e in edges {
            // Self-loops on absorbing configurations have no original edge;
            // the play has ended there.
            if capped.source_edge(e).is_none() {
                continue;
            }
            let to = game.edge(e).to;
            if !visited[to.index()] {
                visited[to.index()] = true;
                stack.push(to);
            }
        }
    }

    // Memory states: the distinct valuations among reached configurations,
    // sorted by code so the all-zero valuation is state 0.
    let k = arena.counters();
    let mut codes: Vec<u64> = reached
        .iter()
        .filter_map(|&c| match capped.source(c) {
            CappedSource::Node { valuation, .. } => Some(valuation.code()),
            CappedSource::Bottom => None,
        })
        .collect();
    codes.sort_unstable();
    codes.dedup();
    assert_eq!(codes.first(), Some(&0), "the initial valuation is all-zero");
    if let Some(space) = CounterValuation::space_size(k, n) {
        assert!(
            codes.len() as u64 <= space,
            "memory exceeds the valuation space"
        );
    }
    let state_of: BTreeMap<u64, StateId> = codes
        .iter()
        .enumerate()
        .map(|(i, &c)| (c, StateId(i as u32)))
        .collect();

    let state_names: Vec<String> = codes
        .iter()
        .map(|&c| {
            let val = CounterValuation::from_code(c, k, n);
            if k == 0 {
                String::from("0")
            } else {
                let digits: Vec<String> = val
                    .values()
                    .iter()
                    .map(|x| x.finite().expect("codes come from within-cap valuations").to_string())
                    .collect();
                digits.join(",")
            }
        })
        .collect();

    // Update: apply the edge action to the state's valuation. Transitions
    // that leave the reached set are never taken from a reachable pair;
    // they go to state 0 as a harmless default.
    let mut update: Vec<Vec<StateId>> = Vec::with_capacity(codes.len());
    for &c in &codes {
        let val = CounterValuation::from_code(c, k, n);
        let mut row = Vec::with_capacity(arena.edge_count());
        for e in arena.edge_ids() {
            let next = val
                .apply(&arena.edge(e).action)
                .expect("edge actions match the arena arity");
            let target = if next.any_exceeded() {
                StateId(0)
            } else {
                state_of.get(&next.code()).copied().unwrap_or(StateId(0))
            };
            row.push(target);
        }
        update.push(row);
    }
    let memory = MemoryStructure::new(state_names, StateId(0), update)
        .expect("construction satisfies the memory shape");

    // Moves: Eve's capped strategy, translated back to original edges.
    let mut moves: BTreeMap<(VertexId, StateId), EdgeId> = BTreeMap::new();
    for &c in &reached {
        if game.owner(c) != Owner::Eve {
            continue;
        }
        let CappedSource::Node { vertex, valuation } = capped.source(c) else {
            continue;
        };
        let Some(&choice) = decision.result.eve_strategy.get(&c) else {
            continue;
        };
        // Absorbing configurations have ended the play; their self-loop has
        // no original counterpart and the machine needs no move there.
        let Some(original) = capped.source_edge(choice) else {
            continue;
        };
        moves.insert((*vertex, state_of[&valuation.code()]), original);
    }
    let machine = StrategyMachine::new(memory, moves);
    machine
        .validate(arena)
        .expect("extracted machine fits the original arena");

    // Independent re-evaluation on the original arena.
    let evaluation = match condition.kind {
        ConditionKind::BoundedUntilTarget => evaluate_strategy_reachability(arena, &machine, n),
        ConditionKind::BoundedAndParity => evaluate_strategy_parity(arena, &machine, n),
        ConditionKind::ParityOnly => unreachable!("rejected by the decision step"),
    }
    .map_err(SolveError::Eval)?;
    assert!(
        evaluation.value.at_most(n),
        "extracted machine must achieve the bound it was built for"
    );
    if let Some(forbidden) = &condition.forbidden {
        let graph = restrict_by_strategy(arena, &machine, n).map_err(SolveError::Eval)?;
        assert!(
            graph.first_visit(forbidden).is_none(),
            "extracted machine must avoid the forbidden set"
        );
    }
    Ok(Lemma1Strategy {
        machine,
        bound: n,
        evaluation,
    })
}

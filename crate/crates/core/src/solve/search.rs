//! Exhaustive synthesis of strategy machines with a fixed number of memory
//! states.
//!
//! The search walks the configuration space `(vertex, state, valuation)` the
//! machine would induce, deciding moves and memory updates lazily, in the
//! order the play first needs them. Each partial assignment is explored from
//! the initial configuration; the first missing entry becomes the next
//! decision point, and violations (a counter past the bound, a forbidden
//! vertex, a play that dies or cycles before the target, a cycle dominated
//! by an odd color) cut the branch. Entries the play never reaches stay
//! undecided — moves are omitted from the result, update cells default to
//! the initial state.
//!
//! New states are introduced in first-use order, so machines differing only
//! by a renaming of memory states are tried once. The search is sequential
//! and deterministic: the first machine found is the least one in
//! depth-first order.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::arena::{Arena, EdgeId, Owner, VertexId};
use crate::condition::{ConditionKind, ConditionSpec};
use crate::config::{evaluate_strategy_parity, evaluate_strategy_reachability, restrict_by_strategy};
use crate::counter::CounterValuation;
use crate::machine::{MemoryStructure, StateId, StrategyMachine};
use crate::solve::SolveError;

/// Hard ceiling on the dense configuration-space marks the search allocates:
/// `|V| * M * (N+2)^k` must stay at or below this.
const MARK_GUARD: u64 = 2_000_000;

/// What to synthesize: a machine with exactly `memory` states satisfying
/// `condition` on `arena`, giving up after `budget` explored configurations.
#[derive(Debug, Clone)]
pub struct SynthesisQuery<'a> {
    /// The arena to play on.
    pub arena: &'a Arena,
    /// The objective; must be one of the bounded kinds, with a bound.
    pub condition: ConditionSpec,
    /// Number of memory states the machine may use.
    pub memory: usize,
    /// Exploration budget, counted in configurations entered across the
    /// whole search (all backtracking included).
    pub budget: u64,
}

/// Verdict of the search.
#[derive(Debug, Clone)]
pub enum SearchOutcome {
    /// A machine with the requested number of states that satisfies the
    /// condition. Moves are present only for the (vertex, state) pairs the
    /// induced play reaches.
    Found(StrategyMachine),
    /// No machine with that many states satisfies the condition.
    NoneExists,
}

/// Where the search ran out of assignment: a missing move or a missing
/// memory update.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Entry {
    Move { vertex: VertexId, state: StateId },
    Update { state: StateId, edge: EdgeId },
}

/// One backtrackable choice.
#[derive(Debug, Clone, Copy)]
struct Decision {
    entry: Entry,
    option: usize,
    used_before: usize,
}

/// Outcome of one exploration of the current partial assignment.
enum Explored {
    Violation,
    Undecided(Entry),
    Accepted,
}

/// One DFS frame: a configuration and a cursor over the edges it plays.
/// The configuration's vertex is implicit in `choices` and `mark`.
struct Frame {
    state: StateId,
    valuation: CounterValuation,
    color: u32,
    mark: usize,
    /// The edges to play through: Eve's chosen move, or all of Adam's.
    choices: Vec<EdgeId>,
    cursor: usize,
}

/// What entering a configuration did.
enum Entered {
    /// The configuration ends the play acceptably; nothing was pushed.
    Leaf,
    /// A frame was pushed.
    Pushed,
    /// The configuration violates the condition.
    Violation,
    /// A needed entry is unassigned.
    Undecided(Entry),
}

const GRAY: u8 = 1;
const BLACK: u8 = 2;

struct Searcher<'a> {
    arena: &'a Arena,
    kind: ConditionKind,
    bound: u32,
    memory: usize,
    stop_at_target: bool,
    forbidden: Option<&'a alloc::collections::BTreeSet<VertexId>>,
    moves: Vec<Option<EdgeId>>,
    updates: Vec<Option<StateId>>,
    used_states: usize,
    val_space: u64,
    epoch: u64,
    mark_epoch: Vec<u64>,
    mark_color: Vec<u8>,
    explored: u64,
    budget: u64,
}

impl<'a> Searcher<'a> {
    fn mark_index(&self, v: VertexId, m: StateId, valuation: &CounterValuation) -> usize {
        ((v.index() * self.memory + m.index()) as u64 * self.val_space + valuation.code()) as usize
    }

    fn move_slot(&self, v: VertexId, m: StateId) -> usize {
        v.index() * self.memory + m.index()
    }

    fn update_slot(&self, m: StateId, e: EdgeId) -> usize {
        m.index() * self.arena.edge_count() + e.index()
    }

    fn is_forbidden(&self, v: VertexId) -> bool {
        self.forbidden.is_some_and(|f| f.contains(&v))
    }

    /// Enter configuration `(v, m, valuation)`: classify it, and push a
    /// frame unless the play ends here.
    fn enter(
        &mut self,
        v: VertexId,
        m: StateId,
        valuation: CounterValuation,
        stack: &mut Vec<Frame>,
    ) -> Result<Entered, SolveError> {
        self.explored += 1;
        if self.explored > self.budget {
            return Err(SolveError::BudgetExceeded {
                explored: self.explored,
                budget: self.budget,
            });
        }
        if valuation.any_exceeded() || self.is_forbidden(v) {
            return Ok(Entered::Violation);
        }
        let mark = self.mark_index(v, m, &valuation);
        if self.stop_at_target && self.arena.is_target(v) {
            // The play stops here, objective satisfied so far: a win.
            self.mark_epoch[mark] = self.epoch;
            self.mark_color[mark] = BLACK;
            return Ok(Entered::Leaf);
        }
        if self.arena.out_edges(v).is_empty() {
            // The play dies. Vacuously fine for parity; fatal before the
            // target for the until kind.
            self.mark_epoch[mark] = self.epoch;
            self.mark_color[mark] = BLACK;
            return Ok(match self.kind {
                ConditionKind::BoundedUntilTarget => Entered::Violation,
                _ => Entered::Leaf,
            });
        }
        let choices: Vec<EdgeId> = match self.arena.owner(v) {
            Owner::Eve => match self.moves[self.move_slot(v, m)] {
                Some(e) => alloc::vec![e],
                None => return Ok(Entered::Undecided(Entry::Move { vertex: v, state: m })),
            },
            Owner::Adam => self.arena.out_edges(v).to_vec(),
        };
        self.mark_epoch[mark] = self.epoch;
        self.mark_color[mark] = GRAY;
        stack.push(Frame {
            state: m,
            valuation,
            color: self.arena.color(v),
            mark,
            choices,
            cursor: 0,
        });
        Ok(Entered::Pushed)
    }

    /// Explore the whole configuration space induced by the current partial
    /// assignment, from the initial configuration.
    fn explore(&mut self) -> Result<Explored, SolveError> {
        self.epoch += 1;
        let mut stack: Vec<Frame> = Vec::new();
        let zero = CounterValuation::zero(self.arena.counters(), self.bound);
        match self.enter(self.arena.initial(), StateId(0), zero, &mut stack)? {
            Entered::Leaf => return Ok(Explored::Accepted),
            Entered::Violation => return Ok(Explored::Violation),
            Entered::Undecided(entry) => return Ok(Explored::Undecided(entry)),
            Entered::Pushed => {}
        }
        while let Some(top) = stack.last() {
            if top.cursor >= top.choices.len() {
                self.mark_color[top.mark] = BLACK;
                stack.pop();
                continue;
            }
            let e = top.choices[top.cursor];
            let state = top.state;
            let valuation = top.valuation.clone();
            stack.last_mut().expect("just observed").cursor += 1;

            let next_state = match self.updates[self.update_slot(state, e)] {
                Some(s) => s,
                None => return Ok(Explored::Undecided(Entry::Update { state, edge: e })),
            };
            let edge = self.arena.edge(e);
            let next_val = valuation
                .apply(&edge.action)
                .expect("edge actions match the arena arity");
            if next_val.any_exceeded() || self.is_forbidden(edge.to) {
                return Ok(Explored::Violation);
            }
            let mark = self.mark_index(edge.to, next_state, &next_val);
            if self.mark_epoch[mark] == self.epoch {
                if self.mark_color[mark] == GRAY {
                    // A cycle through the configurations currently on the
                    // stack, from the revisited one to the top.
                    match self.kind {
                        ConditionKind::BoundedUntilTarget => return Ok(Explored::Violation),
                        _ => {
                            let mut maxc = 0;
                            for frame in stack.iter().rev() {
                                maxc = maxc.max(frame.color);
                                if frame.mark == mark {
                                    break;
                                }
                            }
                            if maxc % 2 == 1 {
                                return Ok(Explored::Violation);
                            }
                        }
                    }
                }
                continue;
            }
            match self.enter(edge.to, next_state, next_val, &mut stack)? {
                Entered::Leaf | Entered::Pushed => {}
                Entered::Violation => return Ok(Explored::Violation),
                Entered::Undecided(entry) => return Ok(Explored::Undecided(entry)),
            }
        }
        Ok(Explored::Accepted)
    }

    fn option_count(&self, entry: Entry, used_before: usize) -> usize {
        match entry {
            Entry::Move { vertex, .. } => self.arena.out_edges(vertex).len(),
            // Reuse any state already introduced, or introduce the next
            // fresh one — never a later state, so renamings are tried once.
            Entry::Update { .. } => {
                if used_before < self.memory {
                    used_before + 1
                } else {
                    self.memory
                }
            }
        }
    }

    fn assign(&mut self, entry: Entry, option: usize, used_before: usize) {
        match entry {
            Entry::Move { vertex, state } => {
                let e = self.arena.out_edges(vertex)[option];
                let slot = self.move_slot(vertex, state);
                self.moves[slot] = Some(e);
            }
            Entry::Update { state, edge } => {
                let slot = self.update_slot(state, edge);
                self.updates[slot] = Some(StateId(option as u32));
                self.used_states = used_before.max(option + 1);
            }
        }
    }

    fn unassign(&mut self, entry: Entry, used_before: usize) {
        match entry {
            Entry::Move { vertex, state } => {
                let slot = self.move_slot(vertex, state);
                self.moves[slot] = None;
            }
            Entry::Update { state, edge } => {
                let slot = self.update_slot(state, edge);
                self.updates[slot] = None;
            }
        }
        self.used_states = used_before;
    }

    /// Move the most recent decision to its next option, popping exhausted
    /// ones. False when the whole space is exhausted.
    fn advance(&mut self, decisions: &mut Vec<Decision>) -> bool {
        while let Some(mut d) = decisions.pop() {
            self.unassign(d.entry, d.used_before);
            d.option += 1;
            if d.option < self.option_count(d.entry, d.used_before) {
                self.assign(d.entry, d.option, d.used_before);
                decisions.push(d);
                return true;
            }
        }
        false
    }

    fn build_machine(&self) -> StrategyMachine {
        let names: Vec<String> = (0..self.memory).map(|i| format!("m{i}")).collect();
        let edge_count = self.arena.edge_count();
        let update: Vec<Vec<StateId>> = (0..self.memory)
            .map(|m| {
                (0..edge_count)
                    .map(|e| {
                        self.updates[m * edge_count + e].unwrap_or(StateId(0))
                    })
                    .collect()
            })
            .collect();
        let memory = MemoryStructure::new(names, StateId(0), update)
            .expect("search builds well-shaped memory");
        let mut moves: BTreeMap<(VertexId, StateId), EdgeId> = BTreeMap::new();
        for v in self.arena.vertex_ids() {
            for m in 0..self.memory {
                if let Some(e) = self.moves[v.index() * self.memory + m] {
                    moves.insert((v, StateId(m as u32)), e);
                }
            }
        }
        StrategyMachine::new(memory, moves)
    }

    /// The authoritative acceptance test, independent of the exploration:
    /// re-evaluate the machine with the real evaluators.
    fn final_check(&self, machine: &StrategyMachine) -> Result<bool, SolveError> {
        let evaluation = match self.kind {
            ConditionKind::BoundedUntilTarget => {
                evaluate_strategy_reachability(self.arena, machine, self.bound)?
            }
            ConditionKind::BoundedAndParity => {
                evaluate_strategy_parity(self.arena, machine, self.bound)?
            }
            ConditionKind::ParityOnly => unreachable!("rejected before searching"),
        };
        let won = evaluation.value.at_most(self.bound);
        if self.kind == ConditionKind::BoundedUntilTarget {
            // Exploration's cycle and dead-end detection is complete for
            // the until kind; a disagreement is a bug, not a search miss.
            assert!(won, "accepted assignment fails the until objective");
        }
        if won {
            if let Some(forbidden) = self.forbidden {
                let graph = restrict_by_strategy(self.arena, machine, self.bound)?;
                assert!(
                    graph.first_visit(forbidden).is_none(),
                    "accepted assignment visits a forbidden vertex"
                );
            }
        }
        Ok(won)
    }

    fn run(&mut self) -> Result<SearchOutcome, SolveError> {
        let mut decisions: Vec<Decision> = Vec::new();
        loop {
            match self.explore()? {
                Explored::Undecided(entry) => {
                    let used_before = self.used_states;
                    self.assign(entry, 0, used_before);
                    decisions.push(Decision {
                        entry,
                        option: 0,
                        used_before,
                    });
                }
                Explored::Violation => {
                    if !self.advance(&mut decisions) {
                        return Ok(SearchOutcome::NoneExists);
                    }
                }
                Explored::Accepted => {
                    let machine = self.build_machine();
                    if self.final_check(&machine)? {
                        return Ok(SearchOutcome::Found(machine));
                    }
                    if !self.advance(&mut decisions) {
                        return Ok(SearchOutcome::NoneExists);
                    }
                }
            }
        }
    }
}

/// Search for a strategy machine with exactly `query.memory` states that
/// satisfies `query.condition` from the arena's initial vertex.
///
/// Returns [`SearchOutcome::NoneExists`] when the space is exhausted — a
/// proof that no such machine exists — and
/// [`SolveError::BudgetExceeded`] when the search gave up first, which
/// proves nothing. The condition must be one of the bounded kinds and carry
/// a bound; the until kind needs a nonempty target set.
pub fn search_memory_strategy(query: &SynthesisQuery<'_>) -> Result<SearchOutcome, SolveError> {
    let arena = query.arena;
    if query.condition.kind == ConditionKind::ParityOnly {
        return Err(SolveError::UnsupportedCondition);
    }
    let bound = query.condition.bound.ok_or(SolveError::MissingBound)?;
    if query.condition.kind == ConditionKind::BoundedUntilTarget && arena.target().is_empty() {
        return Err(SolveError::MissingTarget);
    }
    if query.memory == 0 {
        return Ok(SearchOutcome::NoneExists);
    }
    let val_space = CounterValuation::space_size(arena.counters(), bound).ok_or(
        SolveError::BudgetExceeded {
            explored: 0,
            budget: query.budget,
        },
    )?;
    let total = (arena.vertex_count() as u64)
        .checked_mul(query.memory as u64)
        .and_then(|x| x.checked_mul(val_space))
        .filter(|&x| x <= MARK_GUARD)
        .ok_or(SolveError::BudgetExceeded {
            explored: 0,
            budget: query.budget,
        })?;
    let mut searcher = Searcher {
        arena,
        kind: query.condition.kind,
        bound,
        memory: query.memory,
        stop_at_target: !arena.target().is_empty(),
        forbidden: query.condition.forbidden.as_ref(),
        moves: alloc::vec![None; arena.vertex_count() * query.memory],
        updates: alloc::vec![None; query.memory * arena.edge_count()],
        used_states: 1,
        val_space,
        epoch: 0,
        mark_epoch: alloc::vec![0; total as usize],
        mark_color: alloc::vec![0; total as usize],
        explored: 0,
        budget: query.budget,
    };
    searcher.run()
}

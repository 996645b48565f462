//! The claim-verification harness behind `verify-paper` and the acceptance
//! test suite.
//!
//! Every documented claim about the bundled game families, solvers, and
//! transformations is registered here as a desk-scale check: it runs the
//! library against an independent oracle (positional brute force, bare
//! game-tree minimax, exhaustive path walks) or against frozen constants,
//! and reports PASS/FAIL with measured numbers. Failing claims stay in the
//! registry on purpose: where a documented bound does not survive the
//! implemented semantics, the claim runs the literal check, fails honestly,
//! and the details explain what was measured instead.
//!
//! All corpora are seeded, so every run checks the same instances.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use anyhow::{bail, Result};
use bgames_core::condition::ConditionSpec;
use bgames_core::config::{evaluate_strategy_parity, evaluate_strategy_reachability, restrict_by_strategy};
use bgames_core::counter::{summarize, word_value, Value};
use bgames_core::families::{
    calibrate_gkn_phases, g1_game, g1_strategy_3state, g1_strategy_4state, gkn_game,
    tradeoff_game,
};
use bgames_core::random::{
    random_arena, random_chronological, random_dag, random_positional, random_split, random_word,
    Rng,
};
use bgames_core::solve::{
    decide_bparity, lemma1_strategy, search_memory_strategy, solve_dag_bgame, solve_parity_game,
    solve_reachability_game, value_search, SearchOutcome, SynthesisQuery, ValueOutcome,
};
use bgames_core::transform::{compute_ranks, compute_slices, remove_even_min_color, remove_odd_min_color};
use bgames_core::{Arena, ArenaBuilder, EdgeId, Op, Owner, VertexId};

/// The scopes `verify-paper --scope` accepts.
pub const SCOPES: &[&str] = &[
    "fig1", "g1", "gkn", "lemma1", "summary", "ranks", "transforms", "dag", "all",
];

/// Verdict of one registered claim.
#[derive(Debug)]
pub struct ClaimOutcome {
    /// Stable claim identifier.
    pub id: &'static str,
    /// The scope the claim runs under.
    pub scope: &'static str,
    /// Whether the check passed.
    pub passed: bool,
    /// Measured numbers, and the analysis when the check fails.
    pub details: Vec<String>,
}

struct Claim {
    id: &'static str,
    scope: &'static str,
    slow: bool,
    run: fn() -> (bool, Vec<String>),
}

fn registry() -> Vec<Claim> {
    vec![
        Claim { id: "tradeoff-value", scope: "fig1", slow: false, run: tradeoff_value },
        Claim { id: "tradeoff-memory", scope: "fig1", slow: false, run: tradeoff_memory },
        Claim { id: "tradeoff-positional", scope: "fig1", slow: false, run: tradeoff_positional },
        Claim { id: "g1-4state", scope: "g1", slow: false, run: g1_four_state },
        Claim { id: "g1-3state", scope: "g1", slow: false, run: g1_three_state },
        Claim { id: "g1-2state-none", scope: "g1", slow: false, run: g1_two_state_none },
        Claim { id: "g1-n3-4state", scope: "g1", slow: true, run: g1_n3_four_state },
        Claim { id: "g1-n3-3state", scope: "g1", slow: true, run: g1_n3_three_state },
        Claim { id: "g1-n3-2state-none", scope: "g1", slow: true, run: g1_n3_two_state_none },
        Claim { id: "gkn-evaluation", scope: "gkn", slow: false, run: gkn_evaluation },
        Claim { id: "lemma1-roundtrip", scope: "lemma1", slow: false, run: lemma1_roundtrip },
        Claim { id: "solver-cross-validation", scope: "lemma1", slow: false, run: solver_cross_validation },
        Claim { id: "summary-soundness", scope: "summary", slow: false, run: summary_soundness },
        Claim { id: "summary-recomposition", scope: "summary", slow: false, run: summary_recomposition },
        Claim { id: "rank-chain-budget", scope: "ranks", slow: false, run: rank_chain_budget },
        Claim { id: "even-removal-shape", scope: "transforms", slow: false, run: even_removal_shape },
        Claim { id: "even-removal-solve", scope: "transforms", slow: false, run: even_removal_solve },
        Claim { id: "odd-removal-safety", scope: "transforms", slow: false, run: odd_removal_safety },
        Claim { id: "odd-removal-lift", scope: "transforms", slow: false, run: odd_removal_lift },
        Claim { id: "dag-backward-induction", scope: "dag", slow: false, run: dag_backward_induction },
        Claim { id: "dag-two-state-witness", scope: "dag", slow: false, run: dag_two_state_witness },
    ]
}

/// Run every claim registered under `scope` (`"all"` runs the full suite).
///
/// `slow` additionally runs the claims marked as slow. The result lists one
/// outcome per claim, in registry order.
pub fn run_scope(scope: &str, slow: bool) -> Result<Vec<ClaimOutcome>> {
    if !SCOPES.contains(&scope) {
        bail!("unknown scope {scope:?} (expected one of {})", SCOPES.join(", "));
    }
    Ok(registry()
        .into_iter()
        .filter(|claim| scope == "all" || claim.scope == scope)
        .filter(|claim| slow || !claim.slow)
        .map(|claim| {
            let (passed, details) = (claim.run)();
            ClaimOutcome { id: claim.id, scope: claim.scope, passed, details }
        })
        .collect())
}

// ---------------------------------------------------------------------------
// Small shared helpers.

/// Evaluate a machine under the reach-the-target objective at `cap`,
/// reporting the value or the reason it diverged.
fn reach_value(arena: &Arena, machine: &bgames_core::StrategyMachine, cap: u32) -> Value {
    evaluate_strategy_reachability(arena, machine, cap)
        .expect("the machine fits the arena")
        .value
}

/// `check!`-style helper: push a detail line, tracking overall success.
fn expect(ok: &mut bool, details: &mut Vec<String>, passed: bool, line: String) {
    if !passed {
        *ok = false;
    }
    details.push(format!("{} {line}", if passed { "ok:" } else { "FAIL:" }));
}

// ---------------------------------------------------------------------------
// fig1: the memory-versus-bound trade-off family.

fn tradeoff_value() -> (bool, Vec<String>) {
    let mut ok = true;
    let mut details = Vec::new();
    for n in [2u32, 3] {
        let arena = tradeoff_game(n).expect("family parameters are valid");
        let search = value_search(&arena, &ConditionSpec::bounded_until(0), 2 * n + 2)
            .expect("the arena has a target");
        expect(
            &mut ok,
            &mut details,
            search.outcome == ValueOutcome::Value(n),
            format!("bound {n}: least winning bound is {:?}, expected Value({n})", search.outcome),
        );
    }
    (ok, details)
}

fn tradeoff_memory() -> (bool, Vec<String>) {
    let mut ok = true;
    let mut details = Vec::new();
    for n in [2u32, 3] {
        let arena = tradeoff_game(n).expect("family parameters are valid");
        let found = search_memory_strategy(&SynthesisQuery {
            arena: &arena,
            condition: ConditionSpec::bounded_until(n),
            memory: (n + 1) as usize,
            budget: 200_000_000,
        });
        match found {
            Ok(SearchOutcome::Found(machine)) => {
                let value = reach_value(&arena, &machine, n);
                expect(
                    &mut ok,
                    &mut details,
                    matches!(value, Value::Finite(v) if v <= n),
                    format!("bound {n}: {}-state machine found, evaluates to {value}", n + 1),
                );
            }
            other => expect(
                &mut ok,
                &mut details,
                false,
                format!("bound {n}: no {}-state machine found ({other:?})", n + 1),
            ),
        }
        let none = search_memory_strategy(&SynthesisQuery {
            arena: &arena,
            condition: ConditionSpec::bounded_until(n),
            memory: n as usize,
            budget: 200_000_000,
        });
        expect(
            &mut ok,
            &mut details,
            matches!(none, Ok(SearchOutcome::NoneExists)),
            format!("bound {n}: {n}-state machines refuted: {}", matches!(none, Ok(SearchOutcome::NoneExists))),
        );
    }
    (ok, details)
}

fn tradeoff_positional() -> (bool, Vec<String>) {
    let mut ok = true;
    let mut details = Vec::new();
    for n in [2u32, 3] {
        let arena = tradeoff_game(n).expect("family parameters are valid");
        let found = search_memory_strategy(&SynthesisQuery {
            arena: &arena,
            condition: ConditionSpec::bounded_until(2 * n),
            memory: 1,
            budget: 50_000_000,
        });
        match found {
            Ok(SearchOutcome::Found(machine)) => {
                let value = reach_value(&arena, &machine, 2 * n);
                expect(
                    &mut ok,
                    &mut details,
                    matches!(value, Value::Finite(v) if v <= 2 * n),
                    format!("bound {n}: positional machine reaches the target at cost {value} <= {}", 2 * n),
                );
            }
            other => expect(
                &mut ok,
                &mut details,
                false,
                format!("bound {n}: no positional machine at bound {} ({other:?})", 2 * n),
            ),
        }
    }
    (ok, details)
}

// ---------------------------------------------------------------------------
// g1: the staircase game.

fn g1_eval_claim(bound: u32, states: usize, cap: u32) -> (bool, Vec<String>) {
    let mut ok = true;
    let mut details = Vec::new();
    let arena = g1_game(bound).expect("family parameters are valid");
    let machine = if states == 4 {
        g1_strategy_4state(&arena)
    } else {
        g1_strategy_3state(&arena, 0)
    }
    .expect("the construction applies");
    expect(
        &mut ok,
        &mut details,
        machine.state_count() == states,
        format!("the constructed machine has {} states", machine.state_count()),
    );
    let value = reach_value(&arena, &machine, cap);
    expect(
        &mut ok,
        &mut details,
        matches!(value, Value::Finite(v) if v <= cap),
        format!("on the bound-{bound} game it evaluates to {value} (<= {cap} required)"),
    );
    (ok, details)
}

fn g1_four_state() -> (bool, Vec<String>) {
    g1_eval_claim(2, 4, 3)
}

fn g1_three_state() -> (bool, Vec<String>) {
    g1_eval_claim(2, 3, 4)
}

fn g1_two_state_refutation(bound: u32) -> (bool, Vec<String>) {
    let mut ok = true;
    let mut details = Vec::new();
    let arena = g1_game(bound).expect("family parameters are valid");
    // The bound-3 refutation explores just under 10^9 configurations
    // (about a minute); the bound-2 one is thousands of times smaller.
    let none = search_memory_strategy(&SynthesisQuery {
        arena: &arena,
        condition: ConditionSpec::bounded_until(bound),
        memory: 2,
        budget: 2_000_000_000,
    });
    match none {
        Ok(SearchOutcome::NoneExists) => {
            details.push(format!("ok: no 2-state machine keeps the bound-{bound} game within {bound}"));
        }
        Ok(SearchOutcome::Found(machine)) => expect(
            &mut ok,
            &mut details,
            false,
            format!("a 2-state machine unexpectedly achieves {bound}: {} moves", machine.state_count()),
        ),
        Err(e) => expect(&mut ok, &mut details, false, format!("search did not finish: {e}")),
    }
    (ok, details)
}

fn g1_two_state_none() -> (bool, Vec<String>) {
    g1_two_state_refutation(2)
}

fn g1_n3_four_state() -> (bool, Vec<String>) {
    g1_eval_claim(3, 4, 3)
}

fn g1_n3_three_state() -> (bool, Vec<String>) {
    g1_eval_claim(3, 3, 4)
}

fn g1_n3_two_state_none() -> (bool, Vec<String>) {
    g1_two_state_refutation(3)
}

// ---------------------------------------------------------------------------
// gkn: the layered game.

fn gkn_evaluation() -> (bool, Vec<String>) {
    let mut ok = true;
    let mut details = Vec::new();
    let arena = gkn_game(2, 2).expect("family parameters are valid");
    details.push(format!(
        "layered game (2 levels, bound 2): {} vertices, initial {}",
        arena.vertex_count(),
        arena.name(arena.initial()),
    ));
    let calibrated = calibrate_gkn_phases(&arena, 2, 2, 10).expect("calibration parameters are valid");
    let Some((phases, machine)) = calibrated else {
        return (false, vec!["FAIL: no phase assignment keeps the occupancy within 10".into()]);
    };
    expect(
        &mut ok,
        &mut details,
        machine.state_count() == 9,
        format!("calibrated machine has {} states (3^2 required), phases {phases:?}", machine.state_count()),
    );
    let graph = restrict_by_strategy(&arena, &machine, 10).expect("the machine fits the arena");
    expect(
        &mut ok,
        &mut details,
        graph.first_exceeded().is_none(),
        format!(
            "occupancy: all {} reachable configurations stay within 10 (max {})",
            graph.len(),
            graph.max_within(),
        ),
    );
    let value = reach_value(&arena, &machine, 10);
    expect(
        &mut ok,
        &mut details,
        matches!(value, Value::Finite(v) if v <= 10),
        format!("literal check: reach-the-target evaluation at cap 10 is {value}, required <= 10"),
    );
    if !ok {
        details.push(
            "analysis: interior columns below a level's increment stride offer only the reset \
             move, so the adversary can stall there forever at zero cost; every consistent play \
             that stalls never reaches the target and the strict evaluation is infinite for every \
             machine. The occupancy check above is the guarantee the construction does offer: no \
             reachable configuration ever exceeds 10."
                .into(),
        );
    }
    (ok, details)
}

// ---------------------------------------------------------------------------
// lemma1: witness extraction and solver cross-validation.

fn lemma1_roundtrip() -> (bool, Vec<String>) {
    let mut ok = true;
    let mut details = Vec::new();
    let mut rng = Rng::new(41);
    let mut winning = 0usize;
    let mut failures = 0usize;
    for _ in 0..200 {
        let k = 1 + rng.index(2);
        let arena = random_arena(&mut rng, 6, k, 3, true);
        let search = value_search(&arena, &ConditionSpec::bounded_until(0), 4)
            .expect("the arena has a target");
        let ValueOutcome::Value(n) = search.outcome else { continue };
        winning += 1;
        let witness = match lemma1_strategy(&arena, &ConditionSpec::bounded_until(n)) {
            Ok(w) => w,
            Err(e) => {
                failures += 1;
                details.push(format!("FAIL: extraction failed at value {n}: {e}"));
                continue;
            }
        };
        let budget = ((n + 1) as usize).pow(k as u32);
        if witness.machine.state_count() > budget {
            failures += 1;
            details.push(format!(
                "FAIL: witness uses {} states, budget ({}+1)^{k} = {budget}",
                witness.machine.state_count(),
                n,
            ));
        }
        if !matches!(witness.evaluation.value, Value::Finite(v) if v <= n) {
            failures += 1;
            details.push(format!(
                "FAIL: witness re-evaluates to {} at claimed value {n}",
                witness.evaluation.value,
            ));
        }
    }
    expect(
        &mut ok,
        &mut details,
        failures == 0,
        format!("200 random arenas, {winning} with value <= 4, {failures} round-trip failures"),
    );
    (ok, details)
}

/// Eve's winning region for reach-the-target, by positional brute force.
///
/// Enumerates every positional Eve strategy and keeps, per strategy, the
/// vertices from which the adversary has no way to keep the play out of the
/// target forever (greatest-fixpoint avoidance, entirely independent of the
/// attractor solver).
fn oracle_reach_region(arena: &Arena) -> BTreeSet<VertexId> {
    let mut region: BTreeSet<VertexId> = arena.target().clone();
    for_each_eve_profile(arena, |sigma| {
        // avoid[v]: the adversary can keep every play from v out of the
        // target (the play may also die outside it).
        let mut avoid: Vec<bool> = arena
            .vertex_ids()
            .map(|v| !arena.is_target(v))
            .collect();
        loop {
            let mut changed = false;
            for v in arena.vertex_ids() {
                if !avoid[v.index()] || arena.is_target(v) {
                    continue;
                }
                let survivors = |e: &EdgeId| {
                    let to = arena.edge(*e).to;
                    !arena.is_target(to) && avoid[to.index()]
                };
                let keeps = match arena.owner(v) {
                    Owner::Eve => sigma.get(&v).map_or(true, |e| survivors(e)),
                    Owner::Adam => {
                        arena.out_edges(v).is_empty() || arena.out_edges(v).iter().any(|e| survivors(e))
                    }
                };
                if !keeps {
                    avoid[v.index()] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        for v in arena.vertex_ids() {
            if !avoid[v.index()] {
                region.insert(v);
            }
        }
    });
    region
}

/// Eve's winning region for the parity objective, by positional brute force.
///
/// A strategy wins from `v` when no play consistent with it can settle on a
/// cycle whose largest color is odd: for every odd color `c`, no cycle
/// through a color-`c` vertex confined to colors `<= c` is reachable.
fn oracle_parity_region(arena: &Arena) -> BTreeSet<VertexId> {
    let mut region = BTreeSet::new();
    let mut odd_colors: Vec<u32> = arena
        .vertex_ids()
        .map(|v| arena.color(v))
        .filter(|c| c % 2 == 1)
        .collect();
    odd_colors.sort_unstable();
    odd_colors.dedup();

    for_each_eve_profile(arena, |sigma| {
        let succs: Vec<Vec<VertexId>> = arena
            .vertex_ids()
            .map(|v| match arena.owner(v) {
                Owner::Eve => sigma.get(&v).map(|&e| vec![arena.edge(e).to]).unwrap_or_default(),
                Owner::Adam => arena.out_edges(v).iter().map(|&e| arena.edge(e).to).collect(),
            })
            .collect();

        // Vertices that sit on a cycle through color c within colors <= c.
        let mut bad = vec![false; arena.vertex_count()];
        for &c in &odd_colors {
            for start in arena.vertex_ids() {
                if arena.color(start) != c || bad[start.index()] {
                    continue;
                }
                // Reach `start` again inside the colors-<= c subgraph.
                let mut stack = vec![start];
                let mut seen = vec![false; arena.vertex_count()];
                let mut cycles = false;
                while let Some(v) = stack.pop() {
                    for &to in &succs[v.index()] {
                        if arena.color(to) > c {
                            continue;
                        }
                        if to == start {
                            cycles = true;
                            stack.clear();
                            break;
                        }
                        if !seen[to.index()] {
                            seen[to.index()] = true;
                            stack.push(to);
                        }
                    }
                }
                if cycles {
                    bad[start.index()] = true;
                }
            }
        }
        // Everything that can reach a bad cycle loses too.
        loop {
            let mut changed = false;
            for v in arena.vertex_ids() {
                if !bad[v.index()] && succs[v.index()].iter().any(|to| bad[to.index()]) {
                    bad[v.index()] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        for v in arena.vertex_ids() {
            if !bad[v.index()] {
                region.insert(v);
            }
        }
    });
    region
}

/// Run `body` once per positional Eve strategy (map from each Eve vertex
/// with outgoing edges to one of them).
fn for_each_eve_profile(arena: &Arena, mut body: impl FnMut(&BTreeMap<VertexId, EdgeId>)) {
    let slots: Vec<VertexId> = arena
        .vertex_ids()
        .filter(|&v| arena.owner(v) == Owner::Eve && !arena.out_edges(v).is_empty())
        .collect();
    let mut choice = vec![0usize; slots.len()];
    loop {
        let sigma: BTreeMap<VertexId, EdgeId> = slots
            .iter()
            .zip(&choice)
            .map(|(&v, &i)| (v, arena.out_edges(v)[i]))
            .collect();
        body(&sigma);
        // Odometer step.
        let mut i = 0;
        loop {
            if i == slots.len() {
                return;
            }
            choice[i] += 1;
            if choice[i] < arena.out_edges(slots[i]).len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

fn solver_cross_validation() -> (bool, Vec<String>) {
    let mut ok = true;
    let mut details = Vec::new();
    let mut rng = Rng::new(97);

    let mut reach_mismatches = 0usize;
    for _ in 0..500 {
        let arena = random_arena(&mut rng, 6, 0, 3, true);
        let solved = solve_reachability_game(&arena, &arena.target().clone());
        let eve = solved.region(Owner::Eve);
        let adam = solved.region(Owner::Adam);
        assert_eq!(eve.len() + adam.len(), arena.vertex_count(), "regions must partition");
        if *eve != oracle_reach_region(&arena) {
            reach_mismatches += 1;
        }
    }
    expect(
        &mut ok,
        &mut details,
        reach_mismatches == 0,
        format!("attractor vs positional brute force: {reach_mismatches} mismatches in 500 games"),
    );

    let mut parity_mismatches = 0usize;
    for _ in 0..500 {
        let arena = random_arena(&mut rng, 6, 0, 3, false);
        let solved = solve_parity_game(&arena);
        let eve = solved.region(Owner::Eve);
        let adam = solved.region(Owner::Adam);
        assert_eq!(eve.len() + adam.len(), arena.vertex_count(), "regions must partition");
        if *eve != oracle_parity_region(&arena) {
            parity_mismatches += 1;
        }
    }
    expect(
        &mut ok,
        &mut details,
        parity_mismatches == 0,
        format!("parity solver vs positional brute force: {parity_mismatches} mismatches in 500 games"),
    );
    (ok, details)
}

// ---------------------------------------------------------------------------
// summary: the block-summary inequalities.

/// One decomposition: blocks of a random word, with its exact value, the
/// summary-word value N, and the per-block bound N'.
fn summary_corpus_scan() -> (usize, usize, usize, usize, Option<String>) {
    let mut rng = Rng::new(7);
    let mut soundness_violations = 0usize;
    let mut loose = 0usize; // violations of N * N'
    let mut literal = 0usize; // violations of (N+1) * N'
    let mut proven = 0usize; // violations of (N+2) * N'
    let mut example = None;
    for _ in 0..10_000 {
        let k = 1 + rng.index(3);
        let len = 1 + rng.index(40);
        let word = random_word(&mut rng, k, len);
        let blocks = random_split(&mut rng, len);
        let mut start = 0usize;
        let mut summary = Vec::new();
        let mut n_prime = 0u32;
        for &b in &blocks {
            let block = &word[start..start + b];
            summary.push(summarize(k, block).expect("arity fits"));
            n_prime = n_prime.max(word_value(k, block).expect("arity fits"));
            start += b;
        }
        let value = word_value(k, &word).expect("arity fits");
        let n = word_value(k, &summary).expect("arity fits");
        if n > value {
            soundness_violations += 1;
        }
        if value > n * n_prime {
            loose += 1;
        }
        if value > (n + 1) * n_prime {
            literal += 1;
            if example.is_none() {
                let rendering: String = word
                    .iter()
                    .map(|a| {
                        let s: String = a.0.iter().map(|op| op.symbol()).collect();
                        format!("{s} ")
                    })
                    .collect();
                example = Some(format!(
                    "word [{}] split {:?}: value {value}, N {n}, N' {n_prime}",
                    rendering.trim_end(),
                    blocks,
                ));
            }
        }
        if value > (n + 2) * n_prime {
            proven += 1;
        }
    }
    (soundness_violations, loose, literal, proven, example)
}

fn summary_soundness() -> (bool, Vec<String>) {
    let (violations, _, _, _, _) = summary_corpus_scan();
    let mut ok = true;
    let mut details = Vec::new();
    expect(
        &mut ok,
        &mut details,
        violations == 0,
        format!("summary-word value <= word value on 10000 decompositions: {violations} exceptions"),
    );
    (ok, details)
}

fn summary_recomposition() -> (bool, Vec<String>) {
    let (_, loose, literal, proven, example) = summary_corpus_scan();
    let mut ok = true;
    let mut details = Vec::new();
    expect(
        &mut ok,
        &mut details,
        literal == 0,
        format!("literal check val(w) <= (N+1)*N' on 10000 decompositions: {literal} exceptions"),
    );
    details.push(format!("the stricter N*N' form fails on {loose} decompositions"));
    details.push(format!("the proven (N+2)*N' bound fails on {proven} decompositions (0 required)"));
    if let Some(example) = example {
        details.push(format!("smallest-seed counterexample to (N+1)*N': {example}"));
    }
    if proven > 0 {
        ok = false;
    }
    if !ok {
        details.push(
            "analysis: a block that increments without resetting can both carry N' increments \
             and close at a boundary the summary word counts only once; chaining one reset \
             block, N increment blocks and one trailing reset block realizes (N+2)*N' exactly, \
             so (N+1)*N' is the documented-but-unattainable form and (N+2)*N' is tight."
                .into(),
        );
    }
    (ok, details)
}

// ---------------------------------------------------------------------------
// ranks: the alternating fixpoint chain.

fn rank_chain_budget() -> (bool, Vec<String>) {
    let mut ok = true;
    let mut details = Vec::new();
    let mut rng = Rng::new(29);
    let mut max_steps = 0usize;
    let mut failures = 0usize;
    for _ in 0..500 {
        let columns = 3 + rng.index(6);
        let arena = random_chronological(&mut rng, 4, columns, 1, &[0, 1, 2], (1, 5));
        let ranks_by_vertex = arena.rank().expect("generated arenas carry ranks");
        let mut widths: BTreeMap<u32, usize> = BTreeMap::new();
        for (_, &r) in ranks_by_vertex {
            *widths.entry(r).or_insert(0) += 1;
        }
        let width = *widths.values().max().expect("arena is non-empty") as u32;
        let assignment = match compute_ranks(&arena, &arena.target().clone(), width) {
            Ok(a) => a,
            Err(e) => {
                failures += 1;
                details.push(format!("FAIL: chain did not stabilize within 2*{width}: {e}"));
                continue;
            }
        };
        let chain = &assignment.chain;
        max_steps = max_steps.max(chain.len() - 1);
        let monotone = chain.windows(2).all(|w| w[0].is_subset(&w[1]));
        let covers = chain.last().map_or(false, |last| last.len() == arena.vertex_count());
        let least_index = assignment.rank.iter().all(|(v, &r)| {
            chain[r as usize].contains(v) && !chain[r as usize - 1].contains(v)
        });
        if !(monotone && covers && least_index && chain.len() as u32 <= 2 * width + 1) {
            failures += 1;
            details.push(format!(
                "FAIL: monotone={monotone} covers={covers} least-index={least_index} steps={}",
                chain.len() - 1,
            ));
        }
    }
    expect(
        &mut ok,
        &mut details,
        failures == 0,
        format!("500 chronological instances: {failures} chain violations, deepest chain {max_steps} steps"),
    );
    details.push(
        "note: on acyclic instances the must-reach step covers everything by step 2; the \
         deeper chains that exercise the 2W budget come from cyclic graphs and are pinned by \
         unit tests"
            .into(),
    );
    (ok, details)
}

// ---------------------------------------------------------------------------
// transforms: removal of the extremal colors.

/// Collect small two-color instances (minimal color 0) where Eve wins the
/// bounded parity objective, together with the winning bound.
fn cobuchi_winners(count: usize) -> Vec<(Arena, u32)> {
    let mut rng = Rng::new(53);
    let mut found = Vec::new();
    let mut attempts = 0usize;
    while found.len() < count && attempts < 20_000 {
        attempts += 1;
        let arena = random_arena(&mut rng, 5, 1, 1, false);
        if arena.vertex_ids().map(|v| arena.color(v)).min() != Some(0) {
            continue;
        }
        let winning = (0..=2u32).find(|&n| {
            decide_bparity(&arena, &ConditionSpec::bounded_and_parity(n))
                .expect("bounded conditions decide")
                .winner()
                == Owner::Eve
        });
        if let Some(n) = winning {
            found.push((arena, n));
        }
    }
    found
}

fn even_removal_shape() -> (bool, Vec<String>) {
    let mut ok = true;
    let mut details = Vec::new();
    let instances = cobuchi_winners(50);
    expect(
        &mut ok,
        &mut details,
        instances.len() == 50,
        format!("collected {} two-color instances Eve wins", instances.len()),
    );
    let mut shape_failures = 0usize;
    for (arena, _) in &instances {
        let removal = remove_even_min_color(arena).expect("minimal color is 0");
        let out = &removal.arena;
        let vertices_ok = out.vertex_count() == 3 * arena.vertex_count();
        let edges_ok = out.edge_count() == 2 * arena.edge_count() + 2 * arena.vertex_count();
        let colors_ok = out.vertex_ids().all(|v| out.color(v) >= 1);
        let counters_ok = out.counters() == arena.counters() + 1;
        if !(vertices_ok && edges_ok && colors_ok && counters_ok) {
            shape_failures += 1;
        }
    }
    expect(
        &mut ok,
        &mut details,
        shape_failures == 0,
        format!("structural checks (3|V| vertices, 2|E|+2|V| edges, no color 0, k+1 counters): {shape_failures} failures"),
    );
    (ok, details)
}

fn even_removal_solve() -> (bool, Vec<String>) {
    let mut ok = true;
    let mut details = Vec::new();
    let instances = cobuchi_winners(50);
    let mut losses = 0usize;
    let mut largest_bound = 0u32;
    for (arena, n) in &instances {
        let removal = remove_even_min_color(arena).expect("minimal color is 0");
        let out = &removal.arena;
        let w = out.vertex_count() as u32;
        let bound = w * (n + 1).pow(arena.counters() as u32);
        largest_bound = largest_bound.max(bound);
        let decision = decide_bparity(out, &ConditionSpec::bounded_and_parity(bound))
            .expect("bounded conditions decide");
        if decision.winner() != Owner::Eve {
            losses += 1;
        }
    }
    expect(
        &mut ok,
        &mut details,
        losses == 0 && instances.len() == 50,
        format!(
            "{} instances: Eve wins the transformed game at bound W*(N+1)^k in all but {losses} \
             (largest bound exercised {largest_bound})",
            instances.len(),
        ),
    );
    (ok, details)
}

/// Walk one path of original-arena vertices and check the window rule: a
/// color > 1 appears between consecutive slice columns (the flag view:
/// cleared when leaving a slice column, set when entering a color > 1,
/// checked on arrival at a slice column).
fn window_violation(
    arena: &Arena,
    slices: &bgames_core::transform::SliceAssignment,
    path: &[VertexId],
) -> Option<String> {
    let ranks = arena.rank().expect("odd-removal inputs are ranked");
    let mut seen_high = false;
    for pair in path.windows(2) {
        let (prev, cur) = (pair[0], pair[1]);
        if slices.is_slice(ranks[&prev]) {
            seen_high = false;
        }
        if arena.color(cur) > 1 {
            seen_high = true;
        }
        if slices.is_slice(ranks[&cur]) && !seen_high {
            return Some(format!(
                "no color > 1 before the slice column {} (vertex {})",
                ranks[&cur],
                arena.name(cur),
            ));
        }
    }
    None
}

/// Build the odd-removal pipeline on one random chronological instance:
/// a positional strategy, its slices, the flag product, and a winning
/// product strategy at the positional strategy's own value.
struct OddPipeline {
    arena: Arena,
    slices: bgames_core::transform::SliceAssignment,
    removal: bgames_core::transform::OddRemoval,
    bound: u32,
    product_machine: bgames_core::StrategyMachine,
}

fn odd_pipeline(rng: &mut Rng) -> Option<Result<OddPipeline, String>> {
    let columns = 4 + rng.index(4);
    let arena = random_chronological(rng, 3, columns, 1, &[1, 1, 2], (0, 1));
    if arena.vertex_ids().map(|v| arena.color(v)).min() != Some(1) {
        return None; // the palette happened to avoid color 1 entirely
    }
    let sigma = random_positional(rng, &arena);
    let restricted = restrict_by_strategy(&arena, &sigma, 12).expect("the profile is total");
    if restricted.first_exceeded().is_some() {
        return None; // implausibly expensive profile; not a usable instance
    }
    let bound = restricted.max_within();
    let slices = match compute_slices(&arena, &restricted) {
        Ok(s) => s,
        Err(e) => return Some(Err(format!("slices failed: {e}"))),
    };
    let removal = match remove_odd_min_color(&arena, &slices) {
        Ok(r) => r,
        Err(e) => return Some(Err(format!("flag product failed: {e}"))),
    };
    let decision = decide_bparity(&removal.arena, &removal.condition(bound))
        .expect("bounded conditions decide");
    if decision.winner() != Owner::Eve {
        return Some(Err(format!(
            "Eve lost the transformed game at the profile's own value {bound}"
        )));
    }
    let witness = match lemma1_strategy(&removal.arena, &removal.condition(bound)) {
        Ok(w) => w,
        Err(e) => return Some(Err(format!("witness extraction failed: {e}"))),
    };
    Some(Ok(OddPipeline {
        arena,
        slices,
        removal,
        bound,
        product_machine: witness.machine,
    }))
}

fn odd_removal_safety() -> (bool, Vec<String>) {
    let mut ok = true;
    let mut details = Vec::new();
    let mut rng = Rng::new(61);
    let mut checked = 0usize;
    let mut paths_walked = 0usize;
    let mut failures = 0usize;
    while checked < 20 {
        let pipeline = match odd_pipeline(&mut rng) {
            None => continue,
            Some(Err(e)) => {
                failures += 1;
                details.push(format!("FAIL: {e}"));
                checked += 1;
                continue;
            }
            Some(Ok(p)) => p,
        };
        checked += 1;
        let graph = restrict_by_strategy(&pipeline.removal.arena, &pipeline.product_machine, pipeline.bound)
            .expect("the witness fits the product");
        // Enumerate every maximal consistent path (the product of a
        // chronological arena is acyclic, so there are finitely many).
        let mut stack = vec![(graph.initial(), vec![graph.initial()])];
        while let Some((c, trail)) = stack.pop() {
            let node = graph.node(c);
            if pipeline.removal.forbidden.contains(&node.vertex) {
                failures += 1;
                details.push(format!(
                    "FAIL: a consistent play reaches the forbidden configuration {}",
                    pipeline.removal.arena.name(node.vertex),
                ));
            }
            if graph.successors(c).is_empty() {
                paths_walked += 1;
                let originals: Vec<VertexId> = trail
                    .iter()
                    .map(|&c| pipeline.removal.parts(graph.node(c).vertex).0)
                    .collect();
                if let Some(violation) = window_violation(&pipeline.arena, &pipeline.slices, &originals)
                {
                    failures += 1;
                    details.push(format!("FAIL: window rule broken: {violation}"));
                }
                continue;
            }
            for &(_, to) in graph.successors(c) {
                let mut next = trail.clone();
                next.push(to);
                stack.push((to, next));
            }
        }
    }
    expect(
        &mut ok,
        &mut details,
        failures == 0,
        format!("20 strategy-restricted instances, {paths_walked} maximal paths walked, {failures} violations"),
    );
    (ok, details)
}

fn odd_removal_lift() -> (bool, Vec<String>) {
    let mut ok = true;
    let mut details = Vec::new();
    let mut rng = Rng::new(61);
    let mut checked = 0usize;
    let mut failures = 0usize;
    while checked < 20 {
        let pipeline = match odd_pipeline(&mut rng) {
            None => continue,
            Some(Err(e)) => {
                failures += 1;
                details.push(format!("FAIL: {e}"));
                checked += 1;
                continue;
            }
            Some(Ok(p)) => p,
        };
        checked += 1;
        let lifted = match pipeline.removal.lift(&pipeline.product_machine) {
            Ok(l) => l,
            Err(e) => {
                failures += 1;
                details.push(format!("FAIL: lifting failed: {e}"));
                continue;
            }
        };
        if lifted.state_count() != 2 * pipeline.product_machine.state_count() {
            failures += 1;
            details.push(format!(
                "FAIL: lifted machine has {} states, expected doubled {}",
                lifted.state_count(),
                2 * pipeline.product_machine.state_count(),
            ));
        }
        let evaluation = evaluate_strategy_parity(&pipeline.arena, &lifted, pipeline.bound)
            .expect("the lifted machine fits the original arena");
        if !matches!(evaluation.value, Value::Finite(v) if v <= pipeline.bound) {
            failures += 1;
            details.push(format!(
                "FAIL: lifted machine evaluates to {} at bound {}",
                evaluation.value, pipeline.bound,
            ));
        }
    }
    expect(
        &mut ok,
        &mut details,
        failures == 0,
        format!("20 lifted witnesses with doubled memory, {failures} failures"),
    );
    (ok, details)
}

// ---------------------------------------------------------------------------
// dag: backward induction versus bare minimax.

/// Game-tree minimax without memoization: the value of the play from `v`
/// with current counter values `vals` (no cap). Independent of the solver.
fn dag_minimax(arena: &Arena, v: VertexId, vals: &[u32]) -> u32 {
    let here = vals.iter().copied().max().unwrap_or(0);
    if arena.is_target(v) || arena.out_edges(v).is_empty() {
        return here;
    }
    let mut best: Option<u32> = None;
    for &e in arena.out_edges(v) {
        let edge = arena.edge(e);
        let next: Vec<u32> = vals
            .iter()
            .zip(edge.action.0.iter())
            .map(|(&x, op)| match op {
                Op::Skip => x,
                Op::Inc => x + 1,
                Op::Reset => 0,
            })
            .collect();
        let value = here.max(dag_minimax(arena, edge.to, &next));
        best = Some(match (best, arena.owner(v)) {
            (None, _) => value,
            (Some(b), Owner::Eve) => b.min(value),
            (Some(b), Owner::Adam) => b.max(value),
        });
    }
    best.expect("the vertex has outgoing edges")
}

fn dag_backward_induction() -> (bool, Vec<String>) {
    let mut ok = true;
    let mut details = Vec::new();
    let mut rng = Rng::new(83);
    let mut mismatches = 0usize;
    for _ in 0..500 {
        let k = 1 + rng.index(2);
        let arena = random_dag(&mut rng, 10, k, 2);
        let solved = solve_dag_bgame(&arena).expect("the arena is acyclic");
        for v in arena.vertex_ids() {
            let oracle = dag_minimax(&arena, v, &vec![0; k]);
            if solved[v.index()] != oracle {
                mismatches += 1;
                if mismatches <= 3 {
                    details.push(format!(
                        "FAIL: vertex {} solves to {} but bare minimax gives {oracle}",
                        arena.name(v),
                        solved[v.index()],
                    ));
                }
            }
        }
    }
    expect(
        &mut ok,
        &mut details,
        mismatches == 0,
        format!("500 random acyclic games, every vertex cross-checked: {mismatches} mismatches"),
    );
    (ok, details)
}

fn dag_two_state_witness() -> (bool, Vec<String>) {
    let mut ok = true;
    let mut details = Vec::new();
    let mut rng = Rng::new(89);
    let mut failures = 0usize;
    for _ in 0..50 {
        let arena = random_dag(&mut rng, 7, 2, 2);
        let solved = solve_dag_bgame(&arena).expect("the arena is acyclic");
        let value = solved[arena.initial().index()];
        // Re-target the sinks so the bounded reach objective speaks about
        // the same plays the backward induction valued.
        let mut builder = ArenaBuilder::new(arena.counters());
        for v in arena.vertex_ids() {
            builder.vertex(arena.name(v).to_owned(), arena.owner(v), arena.color(v));
            if arena.out_edges(v).is_empty() {
                builder.target(arena.name(v).to_owned());
            }
        }
        for e in arena.edge_ids() {
            let edge = arena.edge(e);
            builder.edge(
                arena.name(edge.from).to_owned(),
                arena.name(edge.to).to_owned(),
                edge.action.clone(),
            );
        }
        builder.initial(arena.name(arena.initial()).to_owned());
        let targeted = builder.finish().expect("the rebuilt arena is well formed");

        let outcome = search_memory_strategy(&SynthesisQuery {
            arena: &targeted,
            condition: ConditionSpec::bounded_until(value),
            memory: 2,
            budget: 50_000_000,
        });
        match outcome {
            Ok(SearchOutcome::Found(machine)) => {
                let observed = reach_value(&targeted, &machine, value.max(1));
                if !matches!(observed, Value::Finite(v) if v <= value) {
                    failures += 1;
                    details.push(format!(
                        "finding: a found 2-state machine re-evaluates to {observed} at value {value}"
                    ));
                }
            }
            Ok(SearchOutcome::NoneExists) => {
                failures += 1;
                details.push(format!(
                    "finding: a 2-counter acyclic game of value {value} admits no 2-state machine \
                     at that bound — two memory states did not suffice on this instance"
                ));
            }
            Err(e) => {
                failures += 1;
                details.push(format!("finding: search did not finish: {e}"));
            }
        }
    }
    expect(
        &mut ok,
        &mut details,
        failures == 0,
        format!("50 two-counter acyclic games: 2-state witnesses at the exact value, {failures} findings"),
    );
    (ok, details)
}

// ---------------------------------------------------------------------------

/// Render outcomes as the harness's PASS/FAIL report.
pub fn render_report(outcomes: &[ClaimOutcome], verbose: bool) -> String {
    let mut out = String::new();
    for outcome in outcomes {
        let _ = writeln!(
            out,
            "{} {} [{}]",
            if outcome.passed { "PASS" } else { "FAIL" },
            outcome.id,
            outcome.scope,
        );
        for line in &outcome.details {
            if verbose || !outcome.passed || line.starts_with("FAIL") {
                let _ = writeln!(out, "    {line}");
            }
        }
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    let _ = writeln!(out, "{} claims, {} failed", outcomes.len(), failed);
    out
}

//! `bgames`: generate, solve, evaluate, transform, and verify counter-bound
//! parity games from the command line.
//!
//! Every verdict goes to standard output as a single JSON object (pretty
//! only behind `--pretty`), so scripts and the test harness share one
//! parser. Exit codes: 0 on success, 1 on parse or validation failures, 2
//! when an exhaustive search gives up on its exploration budget.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use bgames_cli::dot::{arena_dot, config_dot};
use bgames_cli::formats::{arena_to_json, load_arena, load_machine, machine_to_json};
use bgames_cli::verify::{render_report, run_scope};
use bgames_core::condition::ConditionSpec;
use bgames_core::config::{
    evaluate_strategy_parity, evaluate_strategy_reachability, restrict_by_strategy, Evaluation,
    InfinityWitness,
};
use bgames_core::counter::Value;
use bgames_core::families::{
    calibrate_gkn_phases, cyclic_counter_game, g1_game, g1_strategy_4state, gkn_game,
    tradeoff_game,
};
use bgames_core::solve::{
    decide_bparity, lemma1_strategy, search_memory_strategy, solve_parity_game, value_search,
    SearchOutcome, SolveError, SynthesisQuery, ValueOutcome,
};
use bgames_core::transform::{compute_ranks, compute_slices, remove_even_min_color, remove_odd_min_color};
use bgames_core::{Arena, Owner, StrategyMachine};

#[derive(Parser)]
#[command(name = "bgames", version, about = "Games with bounded counters: solvers, synthesis, transformations")]
struct Cli {
    /// Pretty-print JSON verdicts.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write one of the built-in game families to disk.
    Generate {
        /// Which family to build.
        family: Family,
        /// Counter bound parameter (tradeoff, g1, gkn).
        #[arg(long)]
        n: Option<u32>,
        /// Level or counter count (gkn, cyclic).
        #[arg(long)]
        k: Option<u32>,
        /// Also write the family's constructed strategy machine next to the
        /// arena (g1 and gkn only).
        #[arg(long)]
        with_strategy: bool,
        /// Output path for the arena.
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Decide the winner from the initial vertex.
    Solve {
        arena: PathBuf,
        #[command(flatten)]
        cond: CondArgs,
        /// Write Eve's witness machine here when she wins.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Find the least counter bound under which Eve wins.
    Value {
        arena: PathBuf,
        #[command(flatten)]
        cond: CondArgs,
        /// Largest bound to try.
        #[arg(long)]
        nmax: u32,
    },
    /// Evaluate a strategy machine: the exact value of its worst
    /// consistent play, measured at cap `--nmax`.
    Eval {
        arena: PathBuf,
        machine: PathBuf,
        #[command(flatten)]
        cond: CondArgs,
        /// Evaluation cap; values above it report as unbounded.
        #[arg(long)]
        nmax: u32,
    },
    /// Exhaustively search for a strategy machine with a given memory size.
    Search {
        arena: PathBuf,
        /// Number of memory states.
        #[arg(long)]
        mem: usize,
        #[command(flatten)]
        cond: CondArgs,
        /// Exploration budget (configurations entered, backtracking included).
        #[arg(long, default_value_t = 1_000_000_000)]
        budget: u64,
        /// Write the found machine here.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Remove the extremal color from an arena.
    Transform {
        /// Which removal to apply.
        kind: TransformKind,
        arena: PathBuf,
        /// Strategy machine whose restriction drives the odd removal.
        #[arg(long)]
        strategy: Option<PathBuf>,
        /// Counter cap for the odd removal's strategy restriction.
        #[arg(long)]
        cap: Option<u32>,
        /// Output path for the transformed arena.
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Compute the alternating reach/safe rank chain of a ranked arena.
    Ranks {
        arena: PathBuf,
        /// Width budget: the chain must stabilize within 2*width steps.
        #[arg(long)]
        width: u32,
    },
    /// Run the claim-verification suite.
    #[command(name = "verify-paper")]
    VerifyPaper {
        /// Claim scope to run.
        #[arg(long, default_value = "all")]
        scope: String,
        /// Also run the slow claims.
        #[arg(long)]
        slow: bool,
        /// Print measured details for passing claims too.
        #[arg(long)]
        verbose: bool,
    },
    /// Render an arena (or a strategy restriction of it) as Graphviz DOT.
    #[command(name = "export-dot")]
    ExportDot {
        arena: PathBuf,
        /// Render the configuration graph under this machine instead.
        #[arg(long)]
        strategy: Option<PathBuf>,
        /// Counter cap for the strategy restriction (defaults to 16).
        #[arg(long)]
        cap: Option<u32>,
        /// Output path (standard output when omitted).
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum Family {
    /// The memory-versus-bound trade-off chain.
    Tradeoff,
    /// The two-counter staircase game.
    G1,
    /// The layered game with per-level increment strides.
    Gkn,
    /// One vertex with a counter-rotating self-loop per counter.
    Cyclic,
}

#[derive(Copy, Clone, ValueEnum)]
enum TransformKind {
    /// Replace the minimal even color by one more counter.
    Even,
    /// Replace the minimal odd color by a slice-window safety flag.
    Odd,
}

#[derive(Copy, Clone, ValueEnum)]
enum CondKind {
    /// Reach the target before any counter passes the bound.
    #[value(name = "b-until")]
    BUntil,
    /// Keep every counter within the bound and satisfy parity.
    #[value(name = "b-parity")]
    BParity,
    /// Parity alone, no counter bound.
    Parity,
}

#[derive(Args)]
struct CondArgs {
    /// Objective to play for.
    #[arg(long, value_enum, default_value_t = CondKind::BUntil)]
    cond: CondKind,
    /// Counter bound of the objective (where one is needed).
    #[arg(long)]
    bound: Option<u32>,
}

impl CondArgs {
    /// The condition with its bound, or without one for plain parity and
    /// for the commands that scan or substitute the bound themselves.
    fn build(&self) -> ConditionSpec {
        let spec = match self.cond {
            CondKind::BUntil => ConditionSpec::bounded_until(0),
            CondKind::BParity => ConditionSpec::bounded_and_parity(0),
            CondKind::Parity => return ConditionSpec::parity(),
        };
        match self.bound {
            Some(n) => spec.with_bound(n),
            None => ConditionSpec { bound: None, ..spec },
        }
    }

    fn require_bound(&self) -> Result<u32> {
        self.bound.ok_or_else(|| anyhow!("this objective needs --bound"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = check_thread_cap() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

/// Validate `CG_THREADS` when set. The pipeline is sequential (and thereby
/// deterministic), so any positive cap is honored trivially; the value is
/// still checked so misconfigurations fail loudly.
fn check_thread_cap() -> Result<()> {
    match std::env::var("CG_THREADS") {
        Err(_) => Ok(()),
        Ok(raw) => match raw.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(()),
            _ => bail!("CG_THREADS must be a positive integer, got {raw:?}"),
        },
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Generate { family, n, k, with_strategy, out } => {
            cmd_generate(*family, *n, *k, *with_strategy, out, cli.pretty)
        }
        Command::Solve { arena, cond, out } => cmd_solve(arena, cond, out.as_deref(), cli.pretty),
        Command::Value { arena, cond, nmax } => cmd_value(arena, cond, *nmax, cli.pretty),
        Command::Eval { arena, machine, cond, nmax } => {
            cmd_eval(arena, machine, cond, *nmax, cli.pretty)
        }
        Command::Search { arena, mem, cond, budget, out } => {
            cmd_search(arena, *mem, cond, *budget, out.as_deref(), cli.pretty)
        }
        Command::Transform { kind, arena, strategy, cap, out } => {
            cmd_transform(*kind, arena, strategy.as_deref(), *cap, out, cli.pretty)
        }
        Command::Ranks { arena, width } => cmd_ranks(arena, *width, cli.pretty),
        Command::VerifyPaper { scope, slow, verbose } => cmd_verify(scope, *slow, *verbose),
        Command::ExportDot { arena, strategy, cap, out } => {
            cmd_export_dot(arena, strategy.as_deref(), *cap, out.as_deref())
        }
    }
}

/// Print `value` as the command's single JSON verdict.
fn verdict(value: &serde_json::Value, pretty: bool) -> Result<ExitCode> {
    let rendered = if pretty {
        serde_json::to_string_pretty(value)?
    } else {
        serde_json::to_string(value)?
    };
    println!("{rendered}");
    Ok(ExitCode::SUCCESS)
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn owner_name(owner: Owner) -> &'static str {
    match owner {
        Owner::Eve => "eve",
        Owner::Adam => "adam",
    }
}

/// Render an evaluation as the `{"value": ...}` verdict body: the finite
/// value, or `null` with the reason the play diverged.
fn evaluation_json(evaluation: &Evaluation) -> serde_json::Value {
    match evaluation.value {
        Value::Finite(v) => json!({ "value": v }),
        Value::Infinite => {
            let reason = match evaluation.witness {
                Some(InfinityWitness::CounterExceeded(_)) => "counter-exceeded",
                Some(InfinityWitness::AvoidsTarget(_)) => "avoids-target",
                Some(InfinityWitness::OddDominatedCycle(_)) => "odd-dominated-cycle",
                Some(InfinityWitness::DeadEnd(_)) => "dead-end",
                None => "diverges",
            };
            json!({ "value": serde_json::Value::Null, "reason": reason })
        }
    }
}

fn cmd_generate(
    family: Family,
    n: Option<u32>,
    k: Option<u32>,
    with_strategy: bool,
    out: &Path,
    pretty: bool,
) -> Result<ExitCode> {
    let need_n = || n.ok_or_else(|| anyhow!("this family needs --n"));
    let need_k = || k.ok_or_else(|| anyhow!("this family needs --k"));
    let (arena, machine): (Arena, Option<StrategyMachine>) = match family {
        Family::Tradeoff => {
            let arena = tradeoff_game(need_n()?)?;
            if with_strategy {
                bail!("the tradeoff family has no closed-form machine; use `search`");
            }
            (arena, None)
        }
        Family::G1 => {
            let arena = g1_game(need_n()?)?;
            let machine = with_strategy.then(|| g1_strategy_4state(&arena)).transpose()?;
            (arena, machine)
        }
        Family::Gkn => {
            let (levels, bound) = (need_k()?, need_n()?);
            let arena = gkn_game(levels, bound)?;
            let machine = if with_strategy {
                let target = levels * (levels + 3);
                let calibrated = calibrate_gkn_phases(&arena, levels, bound, target)?
                    .ok_or_else(|| {
                        anyhow!("no phase assignment keeps the occupancy within {target}")
                    })?;
                Some(calibrated.1)
            } else {
                None
            };
            (arena, machine)
        }
        Family::Cyclic => {
            let arena = cyclic_counter_game(need_k()? as usize)?;
            if with_strategy {
                bail!("the cyclic family has no constructed machine");
            }
            (arena, None)
        }
    };
    write_text(out, &arena_to_json(&arena, pretty)?)?;
    let mut body = json!({ "arena": out.display().to_string() });
    if let Some(machine) = machine {
        let machine_path = out.with_extension("strategy.json");
        write_text(&machine_path, &machine_to_json(&machine, &arena, pretty)?)?;
        body["strategy"] = json!(machine_path.display().to_string());
    }
    verdict(&body, pretty)
}

fn cmd_solve(
    arena_path: &Path,
    cond: &CondArgs,
    out: Option<&Path>,
    pretty: bool,
) -> Result<ExitCode> {
    let arena = load_arena(arena_path)?;
    let spec = cond.build();
    let (winner, witness): (Owner, Option<StrategyMachine>) = match cond.cond {
        CondKind::Parity => {
            let solved = solve_parity_game(&arena);
            let machine = (solved.winner == Owner::Eve && out.is_some())
                .then(|| solved.eve_machine(&arena));
            (solved.winner, machine)
        }
        _ => {
            cond.require_bound()?;
            let decision = decide_bparity(&arena, &spec)?;
            let machine = if decision.winner() == Owner::Eve && out.is_some() {
                Some(lemma1_strategy(&arena, &spec)?.machine)
            } else {
                None
            };
            (decision.winner(), machine)
        }
    };
    let mut body = json!({ "winner": owner_name(winner) });
    if let (Some(out), Some(machine)) = (out, witness) {
        write_text(out, &machine_to_json(&machine, &arena, pretty)?)?;
        body["witness"] = json!(out.display().to_string());
    }
    verdict(&body, pretty)
}

fn cmd_value(arena_path: &Path, cond: &CondArgs, nmax: u32, pretty: bool) -> Result<ExitCode> {
    if matches!(cond.cond, CondKind::Parity) {
        bail!("`value` scans counter bounds; use a bounded objective");
    }
    let arena = load_arena(arena_path)?;
    let search = value_search(&arena, &cond.build(), nmax)?;
    let body = match search.outcome {
        ValueOutcome::Value(n) => json!({ "value": n }),
        ValueOutcome::ExceedsMax => json!({ "value": serde_json::Value::Null, "nmax": nmax }),
    };
    verdict(&body, pretty)
}

fn cmd_eval(
    arena_path: &Path,
    machine_path: &Path,
    cond: &CondArgs,
    nmax: u32,
    pretty: bool,
) -> Result<ExitCode> {
    let arena = load_arena(arena_path)?;
    let machine = load_machine(machine_path, &arena)?;
    let evaluation = match cond.cond {
        CondKind::BUntil => evaluate_strategy_reachability(&arena, &machine, nmax)?,
        CondKind::BParity | CondKind::Parity => evaluate_strategy_parity(&arena, &machine, nmax)?,
    };
    verdict(&evaluation_json(&evaluation), pretty)
}

fn cmd_search(
    arena_path: &Path,
    mem: usize,
    cond: &CondArgs,
    budget: u64,
    out: Option<&Path>,
    pretty: bool,
) -> Result<ExitCode> {
    if matches!(cond.cond, CondKind::Parity) {
        bail!("`search` needs a bounded objective");
    }
    cond.require_bound()?;
    let arena = load_arena(arena_path)?;
    let query = SynthesisQuery { arena: &arena, condition: cond.build(), memory: mem, budget };
    match search_memory_strategy(&query) {
        Ok(SearchOutcome::Found(machine)) => {
            let mut body = json!({ "exists": true });
            if let Some(out) = out {
                write_text(out, &machine_to_json(&machine, &arena, pretty)?)?;
                body["witness"] = json!(out.display().to_string());
            }
            verdict(&body, pretty)
        }
        Ok(SearchOutcome::NoneExists) => verdict(&json!({ "exists": false }), pretty),
        Err(SolveError::BudgetExceeded { explored, budget }) => {
            eprintln!("error: search budget exceeded ({explored} of {budget} configurations)");
            Ok(ExitCode::from(2))
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_transform(
    kind: TransformKind,
    arena_path: &Path,
    strategy: Option<&Path>,
    cap: Option<u32>,
    out: &Path,
    pretty: bool,
) -> Result<ExitCode> {
    let arena = load_arena(arena_path)?;
    let body = match kind {
        TransformKind::Even => {
            let removal = remove_even_min_color(&arena)?;
            write_text(out, &arena_to_json(&removal.arena, pretty)?)?;
            json!({
                "arena": out.display().to_string(),
                "vertices": removal.arena.vertex_count(),
                "edges": removal.arena.edge_count(),
                "counters": removal.arena.counters(),
            })
        }
        TransformKind::Odd => {
            let strategy =
                strategy.ok_or_else(|| anyhow!("the odd removal needs --strategy"))?;
            let cap = cap.ok_or_else(|| anyhow!("the odd removal needs --cap"))?;
            let machine = load_machine(strategy, &arena)?;
            let restricted = restrict_by_strategy(&arena, &machine, cap)?;
            let slices = compute_slices(&arena, &restricted)?;
            let removal = remove_odd_min_color(&arena, &slices)?;
            write_text(out, &arena_to_json(&removal.arena, pretty)?)?;
            json!({
                "arena": out.display().to_string(),
                "vertices": removal.arena.vertex_count(),
                "edges": removal.arena.edge_count(),
                "slices": slices.slices,
                "forbidden": removal.forbidden.len(),
            })
        }
    };
    verdict(&body, pretty)
}

fn cmd_ranks(arena_path: &Path, width: u32, pretty: bool) -> Result<ExitCode> {
    let arena = load_arena(arena_path)?;
    let assignment = compute_ranks(&arena, &arena.target().clone(), width)?;
    let named: BTreeMap<String, u32> = assignment
        .rank
        .iter()
        .map(|(&v, &r)| (arena.name(v).to_owned(), r))
        .collect();
    let body = json!({ "steps": assignment.chain.len() - 1, "ranks": named });
    verdict(&body, pretty)
}

fn cmd_verify(scope: &str, slow: bool, verbose: bool) -> Result<ExitCode> {
    let outcomes = run_scope(scope, slow)?;
    print!("{}", render_report(&outcomes, verbose));
    let all_passed = outcomes.iter().all(|o| o.passed);
    Ok(if all_passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_export_dot(
    arena_path: &Path,
    strategy: Option<&Path>,
    cap: Option<u32>,
    out: Option<&Path>,
) -> Result<ExitCode> {
    let arena = load_arena(arena_path)?;
    let rendered = match strategy {
        None => arena_dot(&arena),
        Some(strategy) => {
            let machine = load_machine(strategy, &arena)?;
            let graph = restrict_by_strategy(&arena, &machine, cap.unwrap_or(16))?;
            config_dot(&arena, &graph)
        }
    };
    match out {
        Some(path) => write_text(path, &rendered)?,
        None => print!("{rendered}"),
    }
    Ok(ExitCode::SUCCESS)
}

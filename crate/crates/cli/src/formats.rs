//! On-disk JSON formats for arenas and strategy machines.
//!
//! Field names and value encodings are fixed: an arena is
//! `{"k", "initial", "vertices": [{"id", "owner": "E"|"A", "color"}],
//! "edges": [{"from", "to", "act": ["e"|"i"|"r", ...]}], "target": [...]?,
//! "rank": {...}?}`, a machine is `{"states": [...], "initial", "update":
//! [{"state", "from", "to", "next"}], "moves": [{"vertex", "state",
//! "to"}]}`. Update and move entries name edges by their endpoints; when a
//! vertex pair carries parallel edges, the optional `"edge"` field selects
//! one by its ordinal among them, and an update entry without it applies to
//! all of them (a move without it is ambiguous and refused).
//!
//! Loading validates everything — unknown names, arity mismatches, partial
//! update tables, duplicate entries — and saving emits keys in a fixed
//! order, so byte-identical inputs produce byte-identical files.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use bgames_core::machine::MemoryStructure;
use bgames_core::{
    Arena, ArenaBuilder, CounterAction, EdgeId, Op, Owner, StateId, StrategyMachine, VertexId,
};
use serde::{Deserialize, Serialize};

/// Serialized arena.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArenaDoc {
    /// Number of counters.
    pub k: usize,
    /// Name of the initial vertex.
    pub initial: String,
    /// Vertices, in identity order.
    pub vertices: Vec<VertexDoc>,
    /// Edges, in identity order.
    pub edges: Vec<EdgeDoc>,
    /// Target vertex names, if the arena has a target set.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<Vec<String>>,
    /// Chronological ranks by vertex name, if assigned.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<BTreeMap<String, u32>>,
}

/// One vertex of a serialized arena.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDoc {
    /// Vertex name.
    pub id: String,
    /// `"E"` for Eve, `"A"` for Adam.
    pub owner: String,
    /// Parity color.
    pub color: u32,
}

/// One edge of a serialized arena.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    /// Source vertex name.
    pub from: String,
    /// Destination vertex name.
    pub to: String,
    /// One symbol per counter: `"e"` skip, `"i"` increment, `"r"` reset.
    pub act: Vec<String>,
}

/// Serialized strategy machine.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MachineDoc {
    /// Memory state names, in identity order.
    pub states: Vec<String>,
    /// Name of the initial state.
    pub initial: String,
    /// Memory update entries; together they must cover every (state, edge)
    /// pair exactly once.
    pub update: Vec<UpdateDoc>,
    /// Next-move entries, one per (vertex, state) pair with a move.
    pub moves: Vec<MoveDoc>,
}

/// One memory update entry: in `state`, reading the edge `from → to`, go to
/// `next`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UpdateDoc {
    /// State the entry applies in.
    pub state: String,
    /// Edge source vertex name.
    pub from: String,
    /// Edge destination vertex name.
    pub to: String,
    /// Ordinal among parallel `from → to` edges; absent means the entry
    /// covers all of them.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge: Option<usize>,
    /// Successor state.
    pub next: String,
}

/// One move entry: at `vertex` in `state`, take the edge to `to`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoveDoc {
    /// Vertex the move applies at.
    pub vertex: String,
    /// Memory state the move applies in.
    pub state: String,
    /// Destination vertex name of the chosen edge.
    pub to: String,
    /// Ordinal among parallel `vertex → to` edges; required when the pair
    /// has more than one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge: Option<usize>,
}

fn owner_code(owner: Owner) -> &'static str {
    match owner {
        Owner::Eve => "E",
        Owner::Adam => "A",
    }
}

fn parse_owner(code: &str) -> Result<Owner> {
    match code {
        "E" => Ok(Owner::Eve),
        "A" => Ok(Owner::Adam),
        other => bail!("unknown owner {other:?} (expected \"E\" or \"A\")"),
    }
}

fn parse_action(act: &[String]) -> Result<CounterAction> {
    let ops = act
        .iter()
        .map(|s| {
            let mut chars = s.chars();
            match (chars.next().and_then(Op::from_symbol), chars.next()) {
                (Some(op), None) => Ok(op),
                _ => bail!("unknown counter instruction {s:?} (expected \"e\", \"i\" or \"r\")"),
            }
        })
        .collect::<Result<Vec<Op>>>()?;
    Ok(CounterAction(ops))
}

/// Convert an arena to its serialized form.
pub fn arena_to_doc(arena: &Arena) -> ArenaDoc {
    ArenaDoc {
        k: arena.counters(),
        initial: arena.name(arena.initial()).to_owned(),
        vertices: arena
            .vertex_ids()
            .map(|v| VertexDoc {
                id: arena.name(v).to_owned(),
                owner: owner_code(arena.owner(v)).to_owned(),
                color: arena.color(v),
            })
            .collect(),
        edges: arena
            .edge_ids()
            .map(|e| {
                let edge = arena.edge(e);
                EdgeDoc {
                    from: arena.name(edge.from).to_owned(),
                    to: arena.name(edge.to).to_owned(),
                    act: edge.action.0.iter().map(|op| op.symbol().to_string()).collect(),
                }
            })
            .collect(),
        target: if arena.target().is_empty() {
            None
        } else {
            Some(arena.target().iter().map(|&t| arena.name(t).to_owned()).collect())
        },
        rank: arena.rank().map(|ranks| {
            ranks
                .iter()
                .map(|(&v, &r)| (arena.name(v).to_owned(), r))
                .collect()
        }),
    }
}

/// Build and validate an arena from its serialized form.
pub fn doc_to_arena(doc: &ArenaDoc) -> Result<Arena> {
    let mut builder = ArenaBuilder::new(doc.k);
    for vertex in &doc.vertices {
        builder.vertex(vertex.id.clone(), parse_owner(&vertex.owner)?, vertex.color);
    }
    for edge in &doc.edges {
        builder.edge(edge.from.clone(), edge.to.clone(), parse_action(&edge.act)?);
    }
    if let Some(target) = &doc.target {
        for name in target {
            builder.target(name.clone());
        }
    }
    if let Some(ranks) = &doc.rank {
        for (name, &rank) in ranks {
            builder.rank(name.clone(), rank);
        }
    }
    builder.initial(doc.initial.clone());
    let arena = builder.finish().map_err(|e| anyhow!("invalid arena: {e}"))?;
    for edge in &doc.edges {
        if edge.act.len() != doc.k {
            bail!(
                "edge {} -> {} carries {} instructions for {} counters",
                edge.from,
                edge.to,
                edge.act.len(),
                doc.k
            );
        }
    }
    Ok(arena)
}

/// Convert a machine to its serialized form, naming edges by endpoints of
/// `arena` (ordinals only where a vertex pair has parallel edges).
pub fn machine_to_doc(machine: &StrategyMachine, arena: &Arena) -> MachineDoc {
    let memory = &machine.memory;
    let parallel: BTreeSet<(VertexId, VertexId)> = {
        let mut seen = BTreeSet::new();
        let mut parallel = BTreeSet::new();
        for e in arena.edge_ids() {
            let edge = arena.edge(e);
            if !seen.insert((edge.from, edge.to)) {
                parallel.insert((edge.from, edge.to));
            }
        }
        parallel
    };
    let ordinal = |e: EdgeId| {
        let edge = arena.edge(e);
        parallel
            .contains(&(edge.from, edge.to))
            .then(|| arena.parallel_ordinal(e))
    };

    let mut update = Vec::new();
    for s in 0..memory.state_count() {
        let state = StateId(s as u32);
        // Group parallel-edge entries sharing a successor into one.
        let mut pending: BTreeMap<(VertexId, VertexId), Vec<EdgeId>> = BTreeMap::new();
        for e in arena.edge_ids() {
            let edge = arena.edge(e);
            pending.entry((edge.from, edge.to)).or_default().push(e);
        }
        for e in arena.edge_ids() {
            let edge = arena.edge(e);
            let group = &pending[&(edge.from, edge.to)];
            let first = group[0];
            if e != first {
                continue; // the group is emitted at its first edge
            }
            let nexts: BTreeSet<StateId> = group.iter().map(|&g| memory.next(state, g)).collect();
            if nexts.len() == 1 {
                update.push(UpdateDoc {
                    state: memory.state_name(state).to_owned(),
                    from: arena.name(edge.from).to_owned(),
                    to: arena.name(edge.to).to_owned(),
                    edge: None,
                    next: memory.state_name(memory.next(state, e)).to_owned(),
                });
            } else {
                for &g in group {
                    update.push(UpdateDoc {
                        state: memory.state_name(state).to_owned(),
                        from: arena.name(edge.from).to_owned(),
                        to: arena.name(edge.to).to_owned(),
                        edge: Some(arena.parallel_ordinal(g)),
                        next: memory.state_name(memory.next(state, g)).to_owned(),
                    });
                }
            }
        }
    }

    let mut moves = Vec::new();
    for s in 0..memory.state_count() {
        let state = StateId(s as u32);
        for v in arena.vertex_ids() {
            if let Some(e) = machine.move_for(v, state) {
                let edge = arena.edge(e);
                moves.push(MoveDoc {
                    vertex: arena.name(v).to_owned(),
                    state: memory.state_name(state).to_owned(),
                    to: arena.name(edge.to).to_owned(),
                    edge: ordinal(e),
                });
            }
        }
    }

    MachineDoc {
        states: memory.state_names().to_vec(),
        initial: memory.state_name(memory.initial()).to_owned(),
        update,
        moves,
    }
}

/// Build and validate a machine from its serialized form against `arena`.
///
/// The update entries must cover every (state, edge) pair exactly once;
/// missing pairs and double definitions are errors, as are moves that name
/// a non-edge or an ambiguous parallel pair.
pub fn doc_to_machine(doc: &MachineDoc, arena: &Arena) -> Result<StrategyMachine> {
    let state_index: BTreeMap<&str, StateId> = doc
        .states
        .iter()
        .enumerate()
        .map(|(i, name)| (name.as_str(), StateId(i as u32)))
        .collect();
    if state_index.len() != doc.states.len() {
        bail!("duplicate state names");
    }
    let state = |name: &str| {
        state_index
            .get(name)
            .copied()
            .ok_or_else(|| anyhow!("unknown state {name:?}"))
    };
    let vertex = |name: &str| {
        arena
            .vertex_by_name(name)
            .ok_or_else(|| anyhow!("unknown vertex {name:?}"))
    };

    // Resolve an endpoint-named edge entry to concrete edge ids.
    let resolve = |from: &str, to: &str, ordinal: Option<usize>| -> Result<Vec<EdgeId>> {
        let group = arena.find_edges(vertex(from)?, vertex(to)?);
        if group.is_empty() {
            bail!("no edge {from} -> {to} in the arena");
        }
        match ordinal {
            None => Ok(group),
            Some(i) => group
                .get(i)
                .map(|&e| vec![e])
                .ok_or_else(|| anyhow!("edge {from} -> {to} has no parallel ordinal {i}")),
        }
    };

    let states = doc.states.len();
    let mut table: Vec<Vec<Option<StateId>>> = vec![vec![None; arena.edge_count()]; states];
    for entry in &doc.update {
        let s = state(&entry.state)?;
        let next = state(&entry.next)?;
        for e in resolve(&entry.from, &entry.to, entry.edge)? {
            let slot = &mut table[s.index()][e.index()];
            if slot.is_some() {
                bail!(
                    "duplicate update entry for state {:?}, edge {} -> {}",
                    entry.state,
                    entry.from,
                    entry.to
                );
            }
            *slot = Some(next);
        }
    }
    let update = table
        .into_iter()
        .enumerate()
        .map(|(s, row)| {
            row.into_iter()
                .enumerate()
                .map(|(e, slot)| {
                    slot.ok_or_else(|| {
                        let edge = arena.edge(EdgeId(e as u32));
                        anyhow!(
                            "update table misses state {:?}, edge {} -> {}",
                            doc.states[s],
                            arena.name(edge.from),
                            arena.name(edge.to)
                        )
                    })
                })
                .collect::<Result<Vec<StateId>>>()
        })
        .collect::<Result<Vec<Vec<StateId>>>>()?;

    let memory = MemoryStructure::new(doc.states.clone(), state(&doc.initial)?, update)
        .map_err(|e| anyhow!("invalid memory structure: {e}"))?;

    let mut moves = BTreeMap::new();
    for entry in &doc.moves {
        let v = vertex(&entry.vertex)?;
        let s = state(&entry.state)?;
        let group = resolve(&entry.vertex, &entry.to, entry.edge)?;
        if group.len() > 1 {
            bail!(
                "move at {} -> {} is ambiguous: parallel edges need an \"edge\" ordinal",
                entry.vertex,
                entry.to
            );
        }
        let e = group[0];
        if arena.edge(e).from != v {
            bail!("move at {} names an edge leaving a different vertex", entry.vertex);
        }
        if moves.insert((v, s), e).is_some() {
            bail!(
                "duplicate move for vertex {:?}, state {:?}",
                entry.vertex,
                entry.state
            );
        }
    }

    let machine = StrategyMachine::new(memory, moves);
    machine
        .validate(arena)
        .map_err(|e| anyhow!("machine does not fit the arena: {e}"))?;
    Ok(machine)
}

fn render<T: Serialize>(doc: &T, pretty: bool) -> Result<String> {
    let mut text = if pretty {
        serde_json::to_string_pretty(doc)?
    } else {
        serde_json::to_string(doc)?
    };
    text.push('\n');
    Ok(text)
}

/// Serialize an arena to a JSON string (compact unless `pretty`).
pub fn arena_to_json(arena: &Arena, pretty: bool) -> Result<String> {
    render(&arena_to_doc(arena), pretty)
}

/// Serialize a machine to a JSON string (compact unless `pretty`).
pub fn machine_to_json(machine: &StrategyMachine, arena: &Arena, pretty: bool) -> Result<String> {
    render(&machine_to_doc(machine, arena), pretty)
}

/// Load and validate an arena from a JSON file.
pub fn load_arena(path: &Path) -> Result<Arena> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading arena file {}", path.display()))?;
    let doc: ArenaDoc = serde_json::from_str(&text)
        .with_context(|| format!("parsing arena file {}", path.display()))?;
    doc_to_arena(&doc).with_context(|| format!("validating arena file {}", path.display()))
}

/// Load and validate a machine from a JSON file, against an arena.
pub fn load_machine(path: &Path, arena: &Arena) -> Result<StrategyMachine> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading machine file {}", path.display()))?;
    let doc: MachineDoc = serde_json::from_str(&text)
        .with_context(|| format!("parsing machine file {}", path.display()))?;
    doc_to_machine(&doc, arena).with_context(|| format!("validating machine file {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use bgames_core::random::{random_arena, random_positional, Rng};

    fn sample() -> Arena {
        let mut builder = ArenaBuilder::new(2);
        builder.vertex("a", Owner::Eve, 0);
        builder.vertex("b", Owner::Adam, 1);
        builder.edge("a", "b", CounterAction(vec![Op::Inc, Op::Skip]));
        builder.edge("a", "b", CounterAction(vec![Op::Reset, Op::Inc]));
        builder.edge("b", "a", CounterAction::epsilon(2));
        builder.target("b");
        builder.initial("a");
        builder.finish().unwrap()
    }

    #[test]
    fn arenas_round_trip() {
        let arena = sample();
        let json = arena_to_json(&arena, false).unwrap();
        let doc: ArenaDoc = serde_json::from_str(&json).unwrap();
        let back = doc_to_arena(&doc).unwrap();
        assert_eq!(arena_to_json(&back, false).unwrap(), json);
    }

    #[test]
    fn random_arenas_round_trip_bytewise() {
        let mut rng = Rng::new(15);
        for _ in 0..25 {
            let arena = random_arena(&mut rng, 8, 2, 3, true);
            let json = arena_to_json(&arena, false).unwrap();
            let back = doc_to_arena(&serde_json::from_str(&json).unwrap()).unwrap();
            assert_eq!(arena_to_json(&back, false).unwrap(), json);
        }
    }

    #[test]
    fn machines_round_trip_through_endpoint_naming() {
        let arena = sample();
        // A 2-state machine that distinguishes the parallel edges a -> b.
        let memory = MemoryStructure::new(
            vec!["fresh".into(), "seen".into()],
            StateId(0),
            vec![
                vec![StateId(1), StateId(0), StateId(0)],
                vec![StateId(1), StateId(1), StateId(0)],
            ],
        )
        .unwrap();
        let mut moves = BTreeMap::new();
        moves.insert((VertexId(0), StateId(0)), EdgeId(0));
        moves.insert((VertexId(0), StateId(1)), EdgeId(1));
        let machine = StrategyMachine::new(memory, moves);

        let doc = machine_to_doc(&machine, &arena);
        // Parallel edges with different successors carry ordinals.
        assert!(doc.update.iter().any(|u| u.edge.is_some()));
        let back = doc_to_machine(&doc, &arena).unwrap();
        assert_eq!(
            machine_to_json(&back, &arena, false).unwrap(),
            machine_to_json(&machine, &arena, false).unwrap()
        );
    }

    #[test]
    fn random_machines_round_trip() {
        let mut rng = Rng::new(23);
        for _ in 0..25 {
            let arena = random_arena(&mut rng, 7, 1, 2, false);
            let machine = random_positional(&mut rng, &arena);
            let doc = machine_to_doc(&machine, &arena);
            let back = doc_to_machine(&doc, &arena).unwrap();
            assert_eq!(
                machine_to_json(&back, &arena, false).unwrap(),
                machine_to_json(&machine, &arena, false).unwrap()
            );
        }
    }

    #[test]
    fn partial_update_tables_are_refused() {
        let arena = sample();
        let machine = StrategyMachine::positional(arena.edge_count(), &BTreeMap::new());
        let mut doc = machine_to_doc(&machine, &arena);
        doc.update.pop();
        let err = doc_to_machine(&doc, &arena).unwrap_err();
        assert!(err.to_string().contains("misses"), "got: {err}");
    }

    #[test]
    fn ambiguous_moves_are_refused() {
        let arena = sample();
        let mut moves = BTreeMap::new();
        moves.insert(VertexId(0), EdgeId(0));
        let machine = StrategyMachine::positional(arena.edge_count(), &moves);
        let mut doc = machine_to_doc(&machine, &arena);
        assert_eq!(doc.moves.len(), 1);
        doc.moves[0].edge = None;
        let err = doc_to_machine(&doc, &arena).unwrap_err();
        assert!(err.to_string().contains("ambiguous"), "got: {err}");
    }

    #[test]
    fn unknown_owners_are_refused() {
        let doc = ArenaDoc {
            k: 0,
            initial: "a".into(),
            vertices: vec![VertexDoc { id: "a".into(), owner: "X".into(), color: 0 }],
            edges: vec![],
            target: None,
            rank: None,
        };
        assert!(doc_to_arena(&doc).is_err());
    }

    #[test]
    fn saving_is_deterministic() {
        let arena = sample();
        assert_eq!(
            arena_to_json(&arena, true).unwrap(),
            arena_to_json(&arena, true).unwrap()
        );
    }
}

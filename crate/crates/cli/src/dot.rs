//! GraphViz DOT rendering of arenas and configuration graphs.
//!
//! Eve's vertices are ellipses, Adam's are boxes; target vertices get a
//! double outline, the initial vertex a bold one. Edge labels show the
//! counter instructions. Output is deterministic: nodes and edges are
//! emitted in identity order.

use std::fmt::Write as _;

use bgames_core::config::ConfigGraph;
use bgames_core::counter::CounterValue;
use bgames_core::{Arena, Owner};

fn escape(text: &str) -> String {
    text.replace('\\', "\\\\").replace('"', "\\\"")
}

fn quoted(name: &str) -> String {
    format!("\"{}\"", escape(name))
}

/// Quote a multi-line label, one line per part.
fn label(parts: &[String]) -> String {
    let escaped: Vec<String> = parts.iter().map(|p| escape(p)).collect();
    format!("\"{}\"", escaped.join("\\n"))
}

fn action_label(arena: &Arena, e: bgames_core::EdgeId) -> String {
    arena.edge(e).action.0.iter().map(|op| op.symbol()).collect()
}

/// Render an arena as a DOT digraph.
pub fn arena_dot(arena: &Arena) -> String {
    let mut out = String::from("digraph arena {\n");
    out.push_str("  rankdir=LR;\n");
    for v in arena.vertex_ids() {
        let shape = match arena.owner(v) {
            Owner::Eve => "ellipse",
            Owner::Adam => "box",
        };
        let peripheries = if arena.is_target(v) { 2 } else { 1 };
        let style = if v == arena.initial() { ", style=bold" } else { "" };
        let mut parts = vec![arena.name(v).to_owned(), arena.color(v).to_string()];
        if let Some(rank) = arena.rank().and_then(|r| r.get(&v)) {
            parts.push(format!("r={rank}"));
        }
        let _ = writeln!(
            out,
            "  {} [shape={shape}, peripheries={peripheries}{style}, label={}];",
            quoted(arena.name(v)),
            label(&parts),
        );
    }
    for e in arena.edge_ids() {
        let edge = arena.edge(e);
        let _ = writeln!(
            out,
            "  {} -> {} [label={}];",
            quoted(arena.name(edge.from)),
            quoted(arena.name(edge.to)),
            quoted(&action_label(arena, e)),
        );
    }
    out.push_str("}\n");
    out
}

/// Render a strategy-restricted configuration graph as a DOT digraph.
///
/// Each node shows the arena vertex, the memory state, and the counter
/// valuation; the configuration the play starts in is bold.
pub fn config_dot(arena: &Arena, graph: &ConfigGraph) -> String {
    let mut out = String::from("digraph configurations {\n");
    out.push_str("  rankdir=LR;\n  node [shape=box];\n");
    for (c, node) in graph.nodes() {
        let valuation: Vec<String> = node
            .valuation
            .values()
            .iter()
            .map(|v| match v {
                CounterValue::Within(x) => x.to_string(),
                CounterValue::Exceeded => String::from(">cap"),
            })
            .collect();
        let style = if c == graph.initial() { ", style=bold" } else { "" };
        let parts = vec![
            arena.name(node.vertex).to_owned(),
            format!("m{}", node.state.index()),
            format!("[{}]", valuation.join(",")),
        ];
        let _ = writeln!(out, "  c{} [label={}{style}];", c.index(), label(&parts));
    }
    for (c, _) in graph.nodes() {
        for &(e, to) in graph.successors(c) {
            let _ = writeln!(
                out,
                "  c{} -> c{} [label={}];",
                c.index(),
                to.index(),
                quoted(&action_label(arena, e)),
            );
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use bgames_core::config::restrict_by_strategy;
    use bgames_core::random::{random_arena, random_positional, Rng};

    #[test]
    fn arena_rendering_mentions_every_vertex() {
        let mut rng = Rng::new(2);
        let arena = random_arena(&mut rng, 6, 1, 2, true);
        let dot = arena_dot(&arena);
        assert!(dot.starts_with("digraph arena {"));
        assert!(dot.ends_with("}\n"));
        for v in arena.vertex_ids() {
            assert!(dot.contains(&quoted(arena.name(v))));
        }
    }

    #[test]
    fn config_rendering_walks_the_restriction() {
        let mut rng = Rng::new(3);
        let arena = random_arena(&mut rng, 5, 1, 2, true);
        let machine = random_positional(&mut rng, &arena);
        let graph = restrict_by_strategy(&arena, &machine, 3).unwrap();
        let dot = config_dot(&arena, &graph);
        assert!(dot.contains("c0 [label="));
        assert!(dot.matches(" [label=").count() >= graph.len());
    }

    #[test]
    fn quoting_escapes_special_names() {
        assert_eq!(quoted("a\"b"), "\"a\\\"b\"");
        assert_eq!(label(&["x".into(), "y".into()]), "\"x\\ny\"");
    }
}

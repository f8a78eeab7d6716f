//! Graphviz output for decorated trees. Inner levels are dashed clusters
//! labeled by the partition coordinates; `d`-colored edges are dashed.

use std::fmt::Write as _;

use super::deloop::DeloopElement;
use super::realize::RealizationPoint;
use super::BarElement;
use crate::partitions::Partition;
use crate::sets::Color;
use crate::trees::Tree;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn node(i: usize, k: usize, m: usize) -> String {
    if i == m {
        format!("l{k}")
    } else {
        format!("v{i}_{k}")
    }
}

/// Shared layout: `root_label` on the root node, `vertex(i, k)` on inner
/// vertices and `leaf(k)` on the leaves.
fn render(
    name: &str,
    tree: &Tree,
    partition: Option<&Partition>,
    root_label: &str,
    vertex: &dyn Fn(usize, usize) -> String,
    leaf: &dyn Fn(usize) -> String,
) -> String {
    let m = tree.height();
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", quote(name));
    let _ = writeln!(out, "  rankdir=LR;");
    let _ = writeln!(out, "  node [shape=box, fontsize=10];");
    let _ = writeln!(out, "  r [label={}, shape=ellipse];", quote(root_label));
    for i in 0..m {
        let _ = writeln!(out, "  subgraph cluster_level_{i} {{");
        let _ = writeln!(out, "    style=dashed;");
        let label = match partition {
            Some(t) if t.level() == m => format!("t{i} = {}", t.coords()[i]),
            _ => format!("level {i}"),
        };
        let _ = writeln!(out, "    label={};", quote(&label));
        for k in 0..tree.level(i).len() {
            let _ = writeln!(out, "    {} [label={}];", node(i, k, m), quote(&vertex(i, k)));
        }
        let _ = writeln!(out, "  }}");
    }
    for k in 0..tree.leaves().len() {
        let _ = writeln!(out, "  l{k} [label={}, shape=plaintext];", quote(&leaf(k)));
    }
    for i in 0..=m {
        let level = tree.level(i);
        for (k, (label, color)) in level.iter().enumerate() {
            let from = if i == 0 { "r".to_string() } else { node(i - 1, tree.parent(i, k), m) };
            let style = if color == Color::D { ", style=dashed" } else { "" };
            let _ = writeln!(out, "  {from} -> {} [label={}{style}];", node(i, k, m), quote(&label.to_string()));
        }
    }
    out.push_str("}\n");
    out
}

/// A bare tree: vertices and leaves are named by their edges.
pub fn tree_to_dot(tree: &Tree, partition: Option<&Partition>) -> String {
    let name = |i: usize, k: usize| tree.level(i).label(k).to_string();
    render("tree", tree, partition, "root", &name, &|k| name(tree.height(), k))
}

pub fn bar_to_dot<E, X>(
    b: &BarElement<E, X>,
    partition: Option<&Partition>,
    describe: &dyn Fn(&E) -> String,
    leaf: &dyn Fn(&X) -> String,
) -> String {
    render("bar", &b.tree, partition, &describe(&b.root), &|i, k| describe(&b.vertices[i][k]), &|k| leaf(&b.leaves[k]))
}

pub fn point_to_dot<E, X>(
    p: &RealizationPoint<E, X>,
    describe: &dyn Fn(&E) -> String,
    leaf: &dyn Fn(&X) -> String,
) -> String {
    bar_to_dot(&p.element, Some(&p.partition), describe, leaf)
}

/// The root carries the vector; `∞` is a single node.
pub fn deloop_to_dot<E, X>(
    d: &DeloopElement<E, X>,
    partition: Option<&Partition>,
    describe: &dyn Fn(&E) -> String,
    leaf: &dyn Fn(&X) -> String,
) -> String {
    match d {
        DeloopElement::Infinity(c) => format!("digraph \"deloop\" {{\n  r [label=\"∞_{c}\", shape=ellipse];\n}}\n"),
        DeloopElement::At { tree, vertices, leaves, vector } => {
            let v: Vec<String> = vector.iter().map(|x| format!("{x:.4}")).collect();
            render(
                "deloop",
                tree,
                partition,
                &format!("u = ({})", v.join(", ")),
                &|i, k| describe(&vertices[i][k]),
                &|k| leaf(&leaves[k]),
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::Color::{C, D};

    #[test]
    fn levels_are_dashed_clusters() {
        let t = Tree::new(C, vec![vec![("a".into(), C)], vec![("x".into(), C), ("y".into(), D)]], vec![vec![0, 0]])
            .unwrap();
        let b =
            BarElement { tree: t, root: "r".to_string(), vertices: vec![vec!["m".to_string()]], leaves: vec![1, 2] };
        let p = Partition::from_fracs(&[(1, 3)]).unwrap();
        let dot = bar_to_dot(&b, Some(&p), &|e: &String| e.clone(), &|x: &i32| x.to_string());
        assert!(dot.contains("subgraph cluster_level_0"));
        assert!(dot.contains("t0 = 1/3"));
        assert!(dot.contains("v0_0 -> l1 [label=\"y\", style=dashed]"));
        assert!(dot.contains("r -> v0_0 [label=\"a\"]"));
        assert_eq!(dot.matches("->").count(), 3);
    }
}

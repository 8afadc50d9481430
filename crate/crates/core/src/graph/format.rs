//! The `planted-graph v1` text format.
//!
//! ```text
//! # planted-graph v1
//! type clique            | type biclique
//! nodes N                | nodes M N
//! planted i1 i2 ...      | planted-left ...
//!                        | planted-right ...
//! edge u v               (repeated; biclique: u left, v right)
//! ```
//!
//! Lines end with LF. Any other line is an error.

use super::{BipartiteGraph, GenerationParams, Graph, InstanceGraph, PlantedInstance, VertexSet};
use crate::error::{Error, Result};
use std::fmt::Write as _;

pub const FORMAT_HEADER: &str = "# planted-graph v1";

fn join(members: &[usize]) -> String {
    let mut s = String::new();
    for v in members {
        write!(s, " {v}").unwrap();
    }
    s
}

/// Serializes an instance. Edges are written in sorted order, so equal
/// instances produce byte-identical output.
pub fn write_instance(inst: &PlantedInstance) -> String {
    let mut out = String::new();
    out.push_str(FORMAT_HEADER);
    out.push('\n');
    match &inst.graph {
        InstanceGraph::Clique(g) => {
            out.push_str("type clique\n");
            writeln!(out, "nodes {}", g.num_vertices()).unwrap();
            writeln!(out, "planted{}", join(inst.planted_left.members())).unwrap();
            for &(i, j) in g.edges() {
                writeln!(out, "edge {i} {j}").unwrap();
            }
        }
        InstanceGraph::Biclique(g) => {
            out.push_str("type biclique\n");
            writeln!(out, "nodes {} {}", g.left_count(), g.right_count()).unwrap();
            writeln!(out, "planted-left{}", join(inst.planted_left.members())).unwrap();
            let right = inst
                .planted_right
                .as_ref()
                .map(|r| r.members().to_vec())
                .unwrap_or_default();
            writeln!(out, "planted-right{}", join(&right)).unwrap();
            for &(u, v) in g.edges() {
                writeln!(out, "edge {u} {v}").unwrap();
            }
        }
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Split<'a, char>>,
}

impl<'a> Lines<'a> {
    fn next_line(&mut self, expect: &str) -> Result<(usize, &'a str)> {
        match self.inner.next() {
            Some((k, l)) => Ok((k + 1, l)),
            None => Err(Error::Parse {
                line: 0,
                message: format!("unexpected end of input, expected {expect}"),
            }),
        }
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn keyword_list(line_no: usize, line: &str, keyword: &str) -> Result<Vec<usize>> {
    let mut it = line.split(' ');
    if it.next() != Some(keyword) {
        return Err(parse_err(line_no, format!("expected `{keyword}`, got `{line}`")));
    }
    it.map(|t| {
        t.parse::<usize>()
            .map_err(|_| parse_err(line_no, format!("bad integer `{t}`")))
    })
    .collect()
}

/// Parses a `planted-graph v1` document. A single trailing LF is allowed;
/// blank or unknown lines are rejected.
pub fn read_instance(text: &str) -> Result<PlantedInstance> {
    let body = text.strip_suffix('\n').unwrap_or(text);
    let mut lines = Lines {
        inner: body.split('\n').enumerate(),
    };

    let (n, header) = lines.next_line("header")?;
    if header != FORMAT_HEADER {
        return Err(parse_err(n, format!("expected `{FORMAT_HEADER}`")));
    }
    let (n, kind) = lines.next_line("type line")?;
    let is_clique = match kind {
        "type clique" => true,
        "type biclique" => false,
        other => return Err(parse_err(n, format!("unknown type line `{other}`"))),
    };

    let (n, nodes_line) = lines.next_line("nodes line")?;
    let nodes = keyword_list(n, nodes_line, "nodes")?;
    let expected = if is_clique { 1 } else { 2 };
    if nodes.len() != expected {
        return Err(parse_err(n, format!("`nodes` expects {expected} count(s)")));
    }

    let (n, planted_line) = lines.next_line("planted line")?;
    let left_list = keyword_list(n, planted_line, if is_clique { "planted" } else { "planted-left" })?;
    let right_list = if is_clique {
        None
    } else {
        let (n, l) = lines.next_line("planted-right line")?;
        Some(keyword_list(n, l, "planted-right")?)
    };

    let mut edges = Vec::new();
    for (k, line) in lines.inner {
        let list = keyword_list(k + 1, line, "edge")?;
        if list.len() != 2 {
            return Err(parse_err(k + 1, "`edge` expects two indices"));
        }
        edges.push((list[0], list[1]));
    }

    let params = GenerationParams::default();
    if is_clique {
        let g = Graph::new(nodes[0], edges)?;
        let planted = VertexSet::new(nodes[0], left_list)?;
        PlantedInstance::clique(g, planted, params)
    } else {
        let g = BipartiteGraph::new(nodes[0], nodes[1], edges)?;
        let left = VertexSet::new(nodes[0], left_list)?;
        let right = VertexSet::new(nodes[1], right_list.unwrap_or_default())?;
        PlantedInstance::biclique(g, left, right, params)
    }
}

use std::collections::{HashMap, HashSet};
use std::fmt::Write;

use super::DirectedGraph;
use crate::error::{Error, Result};

/// Parses the edge-list format: one `tail head` pair per line, `#` comments
/// and blank lines ignored. Vertices are numbered by first appearance and
/// keep their tokens as labels.
pub fn parse_edge_list<'a>(text: &'a str) -> Result<DirectedGraph> {
    let mut ids: HashMap<&'a str, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut seen = HashSet::new();
    let mut edges = Vec::new();

    for (lineno, line) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (tail, head) = match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(t), Some(h), None) => (t, h),
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected exactly two tokens, got '{trimmed}'"),
                })
            }
        };
        let mut intern = |tok: &'a str| -> usize {
            let next = labels.len();
            *ids.entry(tok).or_insert_with(|| {
                labels.push(tok.to_string());
                next
            })
        };
        let (t, h) = (intern(tail), intern(head));
        if !seen.insert((t, h)) {
            return Err(Error::DuplicateEdge {
                line: line_no,
                tail: tail.to_string(),
                head: head.to_string(),
            });
        }
        edges.push((t, h));
    }

    if edges.is_empty() {
        return Err(Error::EmptyGraph);
    }
    DirectedGraph::from_edges(labels.len(), edges)?.with_labels(labels)
}

/// Writes edges in (tail, head) order using labels when the graph has them.
pub fn write_edge_list(g: &DirectedGraph) -> String {
    let mut out = String::new();
    for (t, h) in g.edges() {
        let _ = writeln!(out, "{} {}", g.label(t), g.label(h));
    }
    out
}

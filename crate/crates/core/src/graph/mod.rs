//! Directed graphs, their strongly connected structure, generators and the
//! edge-list text format.

mod generate;
mod parse;
mod scc;

pub use generate::{generate, Family};
pub use parse::{parse_edge_list, write_edge_list};
pub(crate) use scc::component_count_within;
pub use scc::{is_strongly_connected, period, scc, SccDecomposition};

use std::fmt;

use crate::error::{Error, Result};

/// A directed graph on vertices `0..n` with a set of ordered edges.
///
/// Self-loops are allowed, parallel edges are not. Isolated vertices are
/// representable even though the edge-list format cannot express them.
#[derive(Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    n: usize,
    // sorted, deduplicated heads per tail
    out: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
}

impl DirectedGraph {
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "graph needs at least one vertex".into(),
            ));
        }
        let mut out = vec![Vec::new(); n];
        for (tail, head) in edges {
            if tail >= n || head >= n {
                return Err(Error::EdgeOutOfRange { tail, head, n });
            }
            out[tail].push(head);
        }
        for (tail, heads) in out.iter_mut().enumerate() {
            heads.sort_unstable();
            if let Some(w) = heads.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateEdgeIndex { tail, head: w[0] });
            }
        }
        Ok(DirectedGraph {
            n,
            out,
            labels: None,
        })
    }

    /// Attaches one label per vertex.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::InvalidParameter(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Label of `v`, falling back to its index.
    pub fn label(&self, v: usize) -> String {
        match &self.labels {
            Some(labels) => labels[v].clone(),
            None => v.to_string(),
        }
    }

    /// Resolves a token as a vertex label first, then as a 0-based index.
    pub fn resolve_vertex(&self, token: &str) -> Result<usize> {
        if let Some(labels) = &self.labels {
            if let Some(v) = labels.iter().position(|l| l == token) {
                return Ok(v);
            }
        }
        match token.parse::<usize>() {
            Ok(v) if v < self.n => Ok(v),
            _ => Err(Error::UnknownVertex(token.to_string())),
        }
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].len()
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for heads in &self.out {
            for &h in heads {
                deg[h] += 1;
            }
        }
        deg
    }

    pub fn has_edge(&self, tail: usize, head: usize) -> bool {
        self.out[tail].binary_search(&head).is_ok()
    }

    /// Edges in (tail, head) lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(t, heads)| heads.iter().map(move |&h| (t, h)))
    }

    /// True if every edge has its reverse.
    pub fn is_symmetric(&self) -> bool {
        self.edges().all(|(t, h)| self.has_edge(h, t))
    }

    /// Common degree `k` if the graph is symmetric and every vertex has
    /// in- and out-degree `k`.
    pub fn symmetric_regular_degree(&self) -> Option<usize> {
        if !self.is_symmetric() {
            return None;
        }
        let k = self.out_degree(0);
        let in_deg = self.in_degrees();
        (0..self.n)
            .all(|v| self.out_degree(v) == k && in_deg[v] == k)
            .then_some(k)
    }

    /// Adjacency masks, bit `h` of entry `t` set for each edge `t -> h`.
    /// Only valid for `n <= 64`.
    pub(crate) fn adjacency_masks(&self) -> Vec<u64> {
        debug_assert!(self.n <= 64);
        self.out
            .iter()
            .map(|heads| heads.iter().fold(0u64, |m, &h| m | (1 << h)))
            .collect()
    }

    /// Subgraph induced by `keep`, reindexed in ascending original order.
    pub fn induced_subgraph(&self, keep: &[usize]) -> Result<DirectedGraph> {
        let mut keep: Vec<usize> = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if keep.is_empty() {
            return Err(Error::EmptySubset);
        }
        if let Some(&v) = keep.iter().find(|&&v| v >= self.n) {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n,
            });
        }
        let mut index = vec![usize::MAX; self.n];
        for (new, &old) in keep.iter().enumerate() {
            index[old] = new;
        }
        let out = keep
            .iter()
            .map(|&old| {
                self.out[old]
                    .iter()
                    .filter_map(|&h| (index[h] != usize::MAX).then_some(index[h]))
                    .collect()
            })
            .collect();
        let labels = self
            .labels
            .as_ref()
            .map(|labels| keep.iter().map(|&v| labels[v].clone()).collect());
        Ok(DirectedGraph {
            n: keep.len(),
            out,
            labels,
        })
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<DirectedGraph> {
        let mut seen = vec![false; self.n];
        if perm.len() != self.n
            || perm
                .iter()
                .any(|&p| p >= self.n || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::InvalidParameter("not a permutation".into()));
        }
        let g = DirectedGraph::from_edges(self.n, self.edges().map(|(t, h)| (perm[t], perm[h])))?;
        match &self.labels {
            Some(labels) => {
                let mut relabeled = vec![String::new(); self.n];
                for (v, l) in labels.iter().enumerate() {
                    relabeled[perm[v]] = l.clone();
                }
                g.with_labels(relabeled)
            }
            None => Ok(g),
        }
    }
}

impl fmt::Debug for DirectedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DirectedGraph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

use std::collections::VecDeque;

use super::DirectedGraph;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccDecomposition {
    /// Component of each vertex. Components are numbered in order of their
    /// smallest member vertex.
    pub component_id: Vec<usize>,
    pub component_count: usize,
}

const UNVISITED: usize = usize::MAX;

/// Tarjan's algorithm with an explicit stack.
pub fn scc(g: &DirectedGraph) -> SccDecomposition {
    let n = g.vertex_count();
    let mut index = vec![UNVISITED; n];
    let mut lowlink = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut raw_id = vec![UNVISITED; n];
    let mut count = 0;
    let mut next_index = 0;
    // (vertex, position in its neighbor list)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        lowlink[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            let neighbors = g.out_neighbors(v);
            if let Some(&w) = neighbors.get(*pos) {
                *pos += 1;
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    lowlink[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    lowlink[v] = lowlink[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                lowlink[parent] = lowlink[parent].min(lowlink[v]);
            }
            if lowlink[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    raw_id[w] = count;
                    if w == v {
                        break;
                    }
                }
                count += 1;
            }
        }
    }

    // renumber by smallest member
    let mut remap = vec![UNVISITED; count];
    let mut next = 0;
    for &r in &raw_id {
        if remap[r] == UNVISITED {
            remap[r] = next;
            next += 1;
        }
    }
    SccDecomposition {
        component_id: raw_id.into_iter().map(|r| remap[r]).collect(),
        component_count: count,
    }
}

pub fn is_strongly_connected(g: &DirectedGraph) -> bool {
    scc(g).component_count == 1
}

/// Greatest common divisor of all directed cycle lengths.
///
/// Uses BFS depths from vertex 0: the period is the gcd over all edges
/// `(u, v)` of `depth(u) + 1 - depth(v)`.
pub fn period(g: &DirectedGraph) -> Result<usize> {
    let components = scc(g).component_count;
    if components != 1 {
        return Err(Error::NotStronglyConnected { components });
    }
    let n = g.vertex_count();
    let mut depth = vec![UNVISITED; n];
    depth[0] = 0;
    let mut queue = VecDeque::from([0]);
    while let Some(u) = queue.pop_front() {
        for &v in g.out_neighbors(u) {
            if depth[v] == UNVISITED {
                depth[v] = depth[u] + 1;
                queue.push_back(v);
            }
        }
    }
    let d = g.edges().fold(0usize, |acc, (u, v)| {
        gcd(
            acc,
            (depth[u] as i64 + 1 - depth[v] as i64).unsigned_abs() as usize,
        )
    });
    // a strongly connected graph with at least one edge has a cycle, so d > 0
    Ok(if d == 0 { 1 } else { d })
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Number of strongly connected components of the subgraph induced by the
/// vertices in `keep`. `adj[v]` is the out-neighbour mask of `v`.
///
/// Tarjan over bitmasks, for the subset sweeps where `n <= 64`.
pub(crate) fn component_count_within(adj: &[u64], keep: u64) -> usize {
    let n = adj.len();
    let mut index = [u8::MAX; 64];
    let mut lowlink = [0u8; 64];
    let mut on_stack = 0u64;
    let mut stack = [0u8; 64];
    let mut sp = 0;
    let mut call = [(0u8, 0u64); 64];
    let mut cp;
    let mut next_index = 0u8;
    let mut count = 0;

    for root in 0..n {
        if keep & (1 << root) == 0 || index[root] != u8::MAX {
            continue;
        }
        index[root] = next_index;
        lowlink[root] = next_index;
        next_index += 1;
        stack[sp] = root as u8;
        sp += 1;
        on_stack |= 1 << root;
        call[0] = (root as u8, adj[root] & keep);
        cp = 1;

        while cp > 0 {
            let (v, pending) = call[cp - 1];
            let v = v as usize;
            if pending != 0 {
                let w = pending.trailing_zeros() as usize;
                call[cp - 1].1 = pending & (pending - 1);
                if index[w] == u8::MAX {
                    index[w] = next_index;
                    lowlink[w] = next_index;
                    next_index += 1;
                    stack[sp] = w as u8;
                    sp += 1;
                    on_stack |= 1 << w;
                    call[cp] = (w as u8, adj[w] & keep);
                    cp += 1;
                } else if on_stack & (1 << w) != 0 {
                    lowlink[v] = lowlink[v].min(index[w]);
                }
                continue;
            }
            cp -= 1;
            if cp > 0 {
                let parent = call[cp - 1].0 as usize;
                lowlink[parent] = lowlink[parent].min(lowlink[v]);
            }
            if lowlink[v] == index[v] {
                loop {
                    sp -= 1;
                    let w = stack[sp] as usize;
                    on_stack &= !(1 << w);
                    if w == v {
                        break;
                    }
                }
                count += 1;
            }
        }
    }
    count
}

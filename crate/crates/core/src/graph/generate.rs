use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{is_strongly_connected, DirectedGraph};
use crate::error::{Error, Result};

/// Maximum number of samples drawn for [`Family::RandomStronglyConnected`].
pub const RANDOM_RETRY_BUDGET: usize = 10_000;

/// Graph families. Undirected families are emitted as digraphs with both
/// orientations of every edge.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    CompleteBidirected {
        n: usize,
    },
    UndirectedCycle {
        n: usize,
    },
    Petersen,
    /// Words of length `word_len` over `symbols` letters, edge `w -> w[1..]s`.
    DeBruijn {
        symbols: usize,
        word_len: usize,
    },
    /// Directed cycle `0 -> 1 -> .. -> n-1 -> 0` plus extra chords.
    ChordCycle {
        n: usize,
        chords: Vec<(usize, usize)>,
    },
    /// Each ordered pair `i != j` is an edge with probability `p`; resampled
    /// until strongly connected. The stream is ChaCha8 seeded through
    /// `SeedableRng::seed_from_u64`.
    RandomStronglyConnected {
        n: usize,
        p: f64,
        seed: u64,
    },
}

pub fn generate(family: &Family) -> Result<DirectedGraph> {
    match *family {
        Family::CompleteBidirected { n } => {
            check_n(n)?;
            DirectedGraph::from_edges(
                n,
                (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))),
            )
        }
        Family::UndirectedCycle { n } => {
            // n = 2 would produce the same undirected edge twice
            if n < 3 {
                return Err(Error::InvalidParameter(format!(
                    "undirected cycle needs n >= 3, got {n}"
                )));
            }
            DirectedGraph::from_edges(n, (0..n).flat_map(|i| [(i, (i + 1) % n), ((i + 1) % n, i)]))
        }
        Family::Petersen => {
            let mut undirected = Vec::with_capacity(15);
            for i in 0..5 {
                undirected.push((i, (i + 1) % 5));
                undirected.push((i, i + 5));
                undirected.push((5 + i, 5 + (i + 2) % 5));
            }
            DirectedGraph::from_edges(
                10,
                undirected.into_iter().flat_map(|(a, b)| [(a, b), (b, a)]),
            )
        }
        Family::DeBruijn { symbols, word_len } => de_bruijn(symbols, word_len),
        Family::ChordCycle { n, ref chords } => {
            check_n(n)?;
            let cycle = (0..n).map(|i| (i, (i + 1) % n));
            DirectedGraph::from_edges(n, cycle.chain(chords.iter().copied()))
        }
        Family::RandomStronglyConnected { n, p, seed } => random_strongly_connected(n, p, seed),
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("need n >= 2, got {n}")));
    }
    Ok(())
}

fn de_bruijn(symbols: usize, word_len: usize) -> Result<DirectedGraph> {
    if symbols < 2 || word_len < 1 {
        return Err(Error::InvalidParameter(format!(
            "de Bruijn graph needs symbols >= 2 and word length >= 1, got ({symbols}, {word_len})"
        )));
    }
    let n = u32::try_from(word_len)
        .ok()
        .and_then(|len| symbols.checked_pow(len))
        .filter(|&n| n <= 1 << 16)
        .ok_or_else(|| Error::InvalidParameter("de Bruijn graph too large".into()))?;
    let edges = (0..n).flat_map(|v| (0..symbols).map(move |s| (v, (v * symbols) % n + s)));
    let g = DirectedGraph::from_edges(n, edges)?;
    let labels = (0..n)
        .map(|v| {
            let mut digits = vec![0; word_len];
            let mut rest = v;
            for d in digits.iter_mut().rev() {
                *d = rest % symbols;
                rest /= symbols;
            }
            let sep = if symbols > 10 { "." } else { "" };
            digits
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(sep)
        })
        .collect();
    g.with_labels(labels)
}

fn random_strongly_connected(n: usize, p: f64, seed: u64) -> Result<DirectedGraph> {
    check_n(n)?;
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "edge probability must lie in (0, 1], got {p}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_RETRY_BUDGET {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && rng.random::<f64>() < p {
                    edges.push((i, j));
                }
            }
        }
        let g = DirectedGraph::from_edges(n, edges)?;
        if is_strongly_connected(&g) {
            return Ok(g);
        }
    }
    Err(Error::RetryBudgetExhausted {
        attempts: RANDOM_RETRY_BUDGET,
    })
}

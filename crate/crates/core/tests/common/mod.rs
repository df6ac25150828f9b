//! Test corpus and independent oracles shared by the integration tests.
#![allow(dead_code)]

use dgspec::graph::{generate, Family};
use dgspec::linalg::{ComplexMatrix, RealMatrix};
use dgspec::{
    build_transition_matrix, spectral_profile, DirectedGraph, SpectralConfig, SpectralProfile,
};
use num_complex::Complex64;

pub struct Case {
    pub name: String,
    pub graph: DirectedGraph,
}

fn case(name: impl Into<String>, family: Family) -> Case {
    Case {
        name: name.into(),
        graph: generate(&family).unwrap(),
    }
}

pub fn chord_cycle() -> DirectedGraph {
    generate(&Family::ChordCycle {
        n: 3,
        chords: vec![(0, 2)],
    })
    .unwrap()
}

pub fn profile(g: &DirectedGraph) -> SpectralProfile {
    spectral_profile(
        &build_transition_matrix(g).unwrap(),
        &SpectralConfig::default(),
    )
    .unwrap()
}

/// Seeded random strongly connected digraphs whose walk is aperiodic and
/// diagonalizable, in seed order.
pub fn random_cases(count: usize) -> Vec<Case> {
    let mut out = Vec::new();
    let mut seed = 0u64;
    while out.len() < count {
        let n = 4 + (seed % 6) as usize;
        let p = if seed.is_multiple_of(2) { 0.3 } else { 0.5 };
        let family = Family::RandomStronglyConnected { n, p, seed };
        seed += 1;
        let g = generate(&family).unwrap();
        if spectral_profile(
            &build_transition_matrix(&g).unwrap(),
            &SpectralConfig::default(),
        )
        .is_ok()
        {
            out.push(Case {
                name: format!("random(n={n}, p={p}, seed={})", seed - 1),
                graph: g,
            });
        }
    }
    out
}

/// complete_bidirected(3..=6), C5, C7, chord-cycle, Petersen and 20 random graphs.
pub fn corpus() -> Vec<Case> {
    let mut cases: Vec<Case> = (3..=6)
        .map(|n| {
            case(
                format!("complete_bidirected({n})"),
                Family::CompleteBidirected { n },
            )
        })
        .collect();
    cases.push(case(
        "undirected_cycle(5)",
        Family::UndirectedCycle { n: 5 },
    ));
    cases.push(case(
        "undirected_cycle(7)",
        Family::UndirectedCycle { n: 7 },
    ));
    cases.push(case(
        "chord_cycle(3)",
        Family::ChordCycle {
            n: 3,
            chords: vec![(0, 2)],
        },
    ));
    cases.push(case("petersen", Family::Petersen));
    cases.extend(random_cases(20));
    cases
}

pub fn transition(g: &DirectedGraph) -> Vec<Vec<f64>> {
    let n = g.vertex_count();
    (0..n)
        .map(|i| {
            let d = g.out_degree(i) as f64;
            (0..n)
                .map(|j| if g.has_edge(i, j) { 1.0 / d } else { 0.0 })
                .collect()
        })
        .collect()
}

/// Kosaraju on the subgraph induced by `keep`; returns the component count.
pub fn kosaraju_count(g: &DirectedGraph, keep: &[bool]) -> usize {
    let n = g.vertex_count();
    let mut reverse = vec![Vec::new(); n];
    for (t, h) in g.edges() {
        if keep[t] && keep[h] {
            reverse[h].push(t);
        }
    }
    let mut seen = vec![false; n];
    let mut order = Vec::new();
    for s in 0..n {
        if !keep[s] || seen[s] {
            continue;
        }
        // iterative post-order
        let mut stack = vec![(s, 0usize)];
        seen[s] = true;
        while let Some(&mut (v, ref mut i)) = stack.last_mut() {
            let heads = g.out_neighbors(v);
            if *i < heads.len() {
                let h = heads[*i];
                *i += 1;
                if keep[h] && !seen[h] {
                    seen[h] = true;
                    stack.push((h, 0));
                }
            } else {
                order.push(v);
                stack.pop();
            }
        }
    }
    let mut assigned = vec![false; n];
    let mut count = 0;
    for &s in order.iter().rev() {
        if assigned[s] {
            continue;
        }
        count += 1;
        let mut stack = vec![s];
        assigned[s] = true;
        while let Some(v) = stack.pop() {
            for &t in &reverse[v] {
                if !assigned[t] {
                    assigned[t] = true;
                    stack.push(t);
                }
            }
        }
    }
    count
}

/// Exact toughness by descending-mask enumeration with Kosaraju, compared
/// as fractions. `None` means infinite.
pub fn toughness_oracle(g: &DirectedGraph) -> Option<(usize, usize)> {
    let n = g.vertex_count();
    let mut best: Option<(usize, usize)> = None;
    for s in (1..(1u64 << n) - 1).rev() {
        let keep: Vec<bool> = (0..n).map(|v| s & (1 << v) == 0).collect();
        let c = kosaraju_count(g, &keep);
        if c < 2 {
            continue;
        }
        let size = s.count_ones() as usize;
        best = match best {
            Some((bs, bc)) if bs * c <= size * bc => Some((bs, bc)),
            _ => Some((size, c)),
        };
    }
    best
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.
#[allow(clippy::needless_range_loop)]
pub fn jacobi_eigenvalues(a: &[Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    let mut a: Vec<Vec<f64>> = a.to_vec();
    for _ in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

/// Largest singular value of a complex matrix via the real symmetric
/// embedding of `C^H C`.
pub fn spectral_norm_oracle(c: &ComplexMatrix) -> f64 {
    let (m, n) = (c.rows(), c.cols());
    let mut h = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for (i, row) in h.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = (0..m).map(|k| c[(k, i)].conj() * c[(k, j)]).sum();
        }
    }
    let mut e = vec![vec![0.0; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            e[i][j] = h[i][j].re;
            e[i + n][j + n] = h[i][j].re;
            e[i][j + n] = -h[i][j].im;
            e[i + n][j] = h[i][j].im;
        }
    }
    jacobi_eigenvalues(&e)
        .into_iter()
        .fold(0.0, f64::max)
        .max(0.0)
        .sqrt()
}

pub fn real_matrix(rows: &[Vec<f64>]) -> RealMatrix {
    RealMatrix::from_rows(rows)
}

/// Direct double sum for the mixing lhs.
pub fn eml_lhs_oracle(p: &[Vec<f64>], pi: &[f64], u: &[usize], w: &[usize]) -> f64 {
    let flow: f64 = u
        .iter()
        .flat_map(|&i| w.iter().map(move |&j| p[i][j]))
        .sum();
    let pi_w: f64 = w.iter().map(|&j| pi[j]).sum();
    (flow - u.len() as f64 * pi_w).abs()
}

pub fn mask_to_set(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|&v| mask & (1 << v) != 0).collect()
}

/// Applies a permutation to a vertex set.
pub fn permute_set(set: &[usize], perm: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = set.iter().map(|&v| perm[v]).collect();
    out.sort_unstable();
    out
}

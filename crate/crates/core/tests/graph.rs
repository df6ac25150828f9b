mod common;

use dgspec::graph::{
    generate, is_strongly_connected, parse_edge_list, period, scc, write_edge_list, Family,
};
use dgspec::{DirectedGraph, Error, ErrorClass};
use proptest::prelude::*;

fn arb_graph(max_n: usize) -> impl Strategy<Value = DirectedGraph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let edges = (0..n * n).filter(|&k| bits[k]).map(|k| (k / n, k % n));
            DirectedGraph::from_edges(n, edges).unwrap()
        })
    })
}

fn arb_strongly_connected(max_n: usize) -> impl Strategy<Value = DirectedGraph> {
    // a Hamiltonian cycle plus random extras
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
            edges.extend(
                (0..n * n)
                    .filter(|&k| bits[k] && k % n != (k / n + 1) % n)
                    .map(|k| (k / n, k % n)),
            );
            DirectedGraph::from_edges(n, edges).unwrap()
        })
    })
}

#[allow(clippy::needless_range_loop)]
fn reachability(g: &DirectedGraph) -> Vec<Vec<bool>> {
    let n = g.vertex_count();
    let mut r = vec![vec![false; n]; n];
    for (i, row) in r.iter_mut().enumerate() {
        row[i] = true;
    }
    for (t, h) in g.edges() {
        r[t][h] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if r[i][k] && r[k][j] {
                    r[i][j] = true;
                }
            }
        }
    }
    r
}

// gcd over k <= n of closed-walk lengths
fn period_oracle(g: &DirectedGraph) -> usize {
    let n = g.vertex_count();
    let a: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| g.has_edge(i, j)).collect())
        .collect();
    let mut power = a.clone();
    let mut d = 0usize;
    for k in 1..=n {
        if (0..n).any(|i| power[i][i]) {
            d = gcd(d, k);
        }
        power = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).any(|m| power[i][m] && a[m][j]))
                    .collect()
            })
            .collect();
    }
    d
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

proptest! {
    #[test]
    fn scc_matches_transitive_closure(g in arb_graph(7)) {
        let r = reachability(&g);
        let d = scc(&g);
        let n = g.vertex_count();
        for (i, ci) in d.component_id.iter().enumerate() {
            for (j, cj) in d.component_id.iter().enumerate() {
                prop_assert_eq!(ci == cj, r[i][j] && r[j][i]);
            }
        }
        prop_assert_eq!(is_strongly_connected(&g), d.component_count == 1);
        let keep = vec![true; n];
        prop_assert_eq!(common::kosaraju_count(&g, &keep), d.component_count);
    }

    #[test]
    fn period_matches_cycle_lengths(g in arb_strongly_connected(7)) {
        prop_assert_eq!(period(&g).unwrap(), period_oracle(&g));
    }

    #[test]
    fn edge_list_round_trip(g in arb_graph(7)) {
        prop_assume!(g.edge_count() > 0);
        let text = write_edge_list(&g);
        prop_assert_eq!(text.lines().count(), g.edge_count());
        let back = parse_edge_list(&text).unwrap();
        prop_assert_eq!(back.edge_count(), g.edge_count());
        for (t, h) in back.edges() {
            let t: usize = back.label(t).parse().unwrap();
            let h: usize = back.label(h).parse().unwrap();
            prop_assert!(g.has_edge(t, h));
        }
    }

    #[test]
    fn induced_edge_count(g in arb_graph(7), mask in any::<u8>()) {
        let n = g.vertex_count();
        let keep = common::mask_to_set(mask as u64 & ((1 << n) - 1), n);
        prop_assume!(!keep.is_empty());
        let sub = g.induced_subgraph(&keep).unwrap();
        let expected = g.edges().filter(|(t, h)| keep.contains(t) && keep.contains(h)).count();
        prop_assert_eq!(sub.edge_count(), expected);
        prop_assert_eq!(sub.vertex_count(), keep.len());
    }

    #[test]
    fn relabeling_preserves_structure(g in arb_graph(7), seed in any::<u64>()) {
        let n = g.vertex_count();
        let mut perm: Vec<usize> = (0..n).collect();
        // Fisher-Yates with a fixed LCG
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let h = g.permuted(&perm).unwrap();
        prop_assert_eq!(scc(&h).component_count, scc(&g).component_count);
        if is_strongly_connected(&g) {
            prop_assert_eq!(period(&h).unwrap(), period(&g).unwrap());
        }
    }
}

#[test]
fn parse_examples() {
    let g = parse_edge_list("# header\na b\n\n  b c\nc a\na c\n").unwrap();
    assert_eq!(g.vertex_count(), 3);
    assert_eq!(g.edge_count(), 4);
    assert_eq!(g.labels().unwrap(), ["a", "b", "c"]);
    assert!(g.has_edge(0, 2));

    let err = parse_edge_list("0 1\n1 2 3\n").unwrap_err();
    assert!(matches!(err, Error::Parse { line: 2, .. }));
    assert_eq!(err.class(), ErrorClass::Parse);
    let err = parse_edge_list("0 1\n0 1\n").unwrap_err();
    assert!(matches!(err, Error::DuplicateEdge { line: 2, .. }));
    assert!(matches!(
        parse_edge_list("# nothing\n"),
        Err(Error::EmptyGraph)
    ));
}

#[test]
fn family_sizes() {
    let count = |f: Family| generate(&f).unwrap().edge_count();
    assert_eq!(count(Family::CompleteBidirected { n: 5 }), 20);
    assert_eq!(count(Family::UndirectedCycle { n: 5 }), 10);
    assert_eq!(count(Family::Petersen), 30);
    assert_eq!(
        count(Family::DeBruijn {
            symbols: 2,
            word_len: 2
        }),
        8
    );
    let a = generate(&Family::RandomStronglyConnected {
        n: 8,
        p: 0.3,
        seed: 42,
    })
    .unwrap();
    let b = generate(&Family::RandomStronglyConnected {
        n: 8,
        p: 0.3,
        seed: 42,
    })
    .unwrap();
    assert_eq!(a, b);
    assert!(is_strongly_connected(&a));
}

#[test]
fn periods_of_families() {
    let p = |f: Family| period(&generate(&f).unwrap()).unwrap();
    assert_eq!(p(Family::UndirectedCycle { n: 5 }), 1);
    assert_eq!(p(Family::UndirectedCycle { n: 6 }), 2);
    assert_eq!(
        p(Family::ChordCycle {
            n: 4,
            chords: vec![]
        }),
        4
    );
    assert_eq!(
        p(Family::ChordCycle {
            n: 3,
            chords: vec![(0, 2)]
        }),
        1
    );
    assert_eq!(p(Family::Petersen), 1);
}

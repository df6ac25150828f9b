//! Directed expander mixing bounds over vertex subset pairs.
//!
//! For subsets `U`, `W` the deviation `|sum_{i in U, j in W} p_ij - |U| pi(W)|`
//! is bounded by
//!
//! ```text
//! rho * sqrt((||C||^2 |U| - |U|^2 / n) (||C^-1||^2 |W| - pi(W)^2 n))
//! ```
//!
//! and, more loosely, by `rho * sqrt(|U| |W|) * kappa(C)`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::DirectedGraph;
use crate::linalg::{eigenvalues, EigenConfig, RealMatrix};
use crate::markov::SpectralProfile;

/// Radicand factors down to this value are rounding noise and clipped to 0.
pub const RADICAND_FLOOR: f64 = -1e-9;
const ROUNDING_ULPS: f64 = 16.0;
pub const DEFAULT_EXHAUSTIVE_CAP: usize = 13;
pub const DEFAULT_SLACK_TOL: f64 = 1e-9;

/// Two vertex subsets, stored as sorted index lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetPair {
    pub u: Vec<usize>,
    pub w: Vec<usize>,
}

impl SubsetPair {
    pub fn new(mut u: Vec<usize>, mut w: Vec<usize>, n: usize) -> Result<Self> {
        for set in [&mut u, &mut w] {
            set.sort_unstable();
            set.dedup();
            if let Some(&v) = set.iter().find(|&&v| v >= n) {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
        }
        Ok(SubsetPair { u, w })
    }

    pub fn from_masks(u: u64, w: u64) -> Self {
        SubsetPair {
            u: mask_members(u),
            w: mask_members(w),
        }
    }
}

fn mask_members(mut m: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(m.count_ones() as usize);
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}

/// `sum_{i in U, j in W} p_ij`
fn transition_mass(p: &RealMatrix, pair: &SubsetPair) -> f64 {
    pair.u
        .iter()
        .map(|&i| pair.w.iter().map(|&j| p[(i, j)]).sum::<f64>())
        .sum()
}

/// `|sum_{i in U, j in W} p_ij - |U| pi(W)|`
pub fn eml_lhs(profile: &SpectralProfile, pair: &SubsetPair) -> f64 {
    (transition_mass(&profile.p, pair) - pair.u.len() as f64 * profile.pi_mass(&pair.w)).abs()
}

/// The same deviation centred on `|U| pi(U)` instead of `|U| pi(W)`.
/// Reported next to [`eml_lhs`] for comparison only; no bound is claimed.
pub fn eml_lhs_u_centered(profile: &SpectralProfile, pair: &SubsetPair) -> f64 {
    (transition_mass(&profile.p, pair) - pair.u.len() as f64 * profile.pi_mass(&pair.u)).abs()
}

fn radicand_factors(
    profile: &SpectralProfile,
    u_len: f64,
    w_len: f64,
    pi_w: f64,
) -> Result<(f64, f64)> {
    let n = profile.n as f64;
    let (au, bu) = (profile.norm_c.powi(2) * u_len, u_len * u_len / n);
    let (aw, bw) = (profile.norm_c_inv.powi(2) * w_len, pi_w * pi_w * n);
    let mut factors = [(au - bu, au + bu), (aw - bw, aw + bw)];
    for (value, scale) in &mut factors {
        if *value < RADICAND_FLOOR {
            return Err(Error::NegativeRadicand { value: *value });
        }
        // a difference below its own rounding error is indistinguishable from
        // zero, and the square root would blow that noise up to ~1e-8
        if *value <= ROUNDING_ULPS * f64::EPSILON * *scale {
            *value = 0.0;
        }
    }
    Ok((factors[0].0, factors[1].0))
}

/// `rho sqrt((||C||^2 |U| - |U|^2/n)(||C^-1||^2 |W| - pi(W)^2 n))`
pub fn eml_bound(profile: &SpectralProfile, pair: &SubsetPair) -> Result<f64> {
    let (fu, fw) = radicand_factors(
        profile,
        pair.u.len() as f64,
        pair.w.len() as f64,
        profile.pi_mass(&pair.w),
    )?;
    Ok(profile.rho * (fu * fw).sqrt())
}

/// `rho sqrt(|U| |W|) kappa(C)`
pub fn eml_bound_simple(profile: &SpectralProfile, pair: &SubsetPair) -> f64 {
    profile.rho * ((pair.u.len() * pair.w.len()) as f64).sqrt() * profile.kappa
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SamplingPolicy {
    Exhaustive,
    Sample { count: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub policy: SamplingPolicy,
    pub nonempty_only: bool,
    pub slack_tol: f64,
    pub exhaustive_cap: usize,
    /// Keep one row per evaluated pair.
    pub keep_rows: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            policy: SamplingPolicy::Exhaustive,
            nonempty_only: false,
            slack_tol: DEFAULT_SLACK_TOL,
            exhaustive_cap: DEFAULT_EXHAUSTIVE_CAP,
            keep_rows: false,
        }
    }
}

/// Aggregate of `slack = bound - lhs` for one bound form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormSummary {
    /// `max(lhs - bound)`; positive means the bound failed somewhere.
    pub max_violation: f64,
    pub worst_pair: SubsetPair,
    pub min_slack: f64,
    pub mean_slack: f64,
    /// `max(lhs / bound)` over pairs with a positive bound.
    pub tightness_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmlRow {
    pub u: Vec<usize>,
    pub w: Vec<usize>,
    pub lhs: f64,
    pub lhs_u_centered: f64,
    pub bound: f64,
    pub bound_simple: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmlReport {
    pub n: usize,
    pub policy: SamplingPolicy,
    pub nonempty_only: bool,
    pub pair_count: u64,
    pub slack_tol: f64,
    /// Worst violation over both bound forms.
    pub max_violation: f64,
    pub worst_pair: SubsetPair,
    /// The eigenbasis-norm bound.
    pub full: FormSummary,
    /// The condition-number bound.
    pub simple: FormSummary,
    /// Pairs where the eigenbasis-norm bound exceeds the condition-number
    /// bound by more than `slack_tol`.
    pub ordering_violations: u64,
    #[serde(default)]
    pub rows: Option<Vec<EmlRow>>,
}

impl EmlReport {
    pub fn passed(&self) -> bool {
        self.max_violation <= self.slack_tol && self.ordering_violations == 0
    }
}

#[derive(Debug, Clone, Copy)]
struct FormAcc {
    min_slack: f64,
    worst: (u64, u64),
    sum_slack: f64,
    max_ratio: f64,
}

impl FormAcc {
    fn new() -> Self {
        FormAcc {
            min_slack: f64::INFINITY,
            worst: (0, 0),
            sum_slack: 0.0,
            max_ratio: 0.0,
        }
    }

    fn push(&mut self, lhs: f64, bound: f64, pair: (u64, u64)) {
        let slack = bound - lhs;
        if slack < self.min_slack {
            self.min_slack = slack;
            self.worst = pair;
        }
        self.sum_slack += slack;
        if bound > 0.0 {
            self.max_ratio = self.max_ratio.max(lhs / bound);
        }
    }

    // `other` covers pairs enumerated after `self`
    fn merge(&mut self, other: &FormAcc) {
        if other.min_slack < self.min_slack {
            self.min_slack = other.min_slack;
            self.worst = other.worst;
        }
        self.sum_slack += other.sum_slack;
        self.max_ratio = self.max_ratio.max(other.max_ratio);
    }

    fn summary(&self, count: u64, pair_of: impl Fn((u64, u64)) -> SubsetPair) -> FormSummary {
        let min_slack = if count > 0 { self.min_slack } else { 0.0 };
        FormSummary {
            max_violation: 0.0 - min_slack,
            worst_pair: pair_of(self.worst),
            min_slack,
            mean_slack: if count > 0 {
                self.sum_slack / count as f64
            } else {
                0.0
            },
            tightness_ratio: self.max_ratio,
        }
    }
}

#[derive(Debug, Clone)]
struct Acc {
    count: u64,
    full: FormAcc,
    simple: FormAcc,
    ordering_violations: u64,
    rows: Vec<EmlRow>,
}

impl Acc {
    fn new() -> Self {
        Acc {
            count: 0,
            full: FormAcc::new(),
            simple: FormAcc::new(),
            ordering_violations: 0,
            rows: Vec::new(),
        }
    }

    fn merge(mut self, other: Acc) -> Acc {
        self.count += other.count;
        self.full.merge(&other.full);
        self.simple.merge(&other.simple);
        self.ordering_violations += other.ordering_violations;
        self.rows.extend(other.rows);
        self
    }
}

// maps the accumulator's pair handle back to vertex sets
type PairKey = Box<dyn Fn((u64, u64)) -> SubsetPair>;

/// Evaluates both bound forms over subset pairs and aggregates the slack.
pub fn verify_eml(profile: &SpectralProfile, options: &VerifyOptions) -> Result<EmlReport> {
    let n = profile.n;
    let (acc, key): (Acc, PairKey) = match options.policy {
        SamplingPolicy::Exhaustive => {
            if n > options.exhaustive_cap || n > 31 {
                return Err(Error::CapExceeded {
                    what: "exhaustive EML verification",
                    n,
                    cap: options.exhaustive_cap.min(31),
                });
            }
            (
                exhaustive(profile, options)?,
                Box::new(|(u, w)| SubsetPair::from_masks(u, w)),
            )
        }
        SamplingPolicy::Sample { count, seed } => {
            let (acc, pairs) = sampled(profile, options, count, seed)?;
            (acc, Box::new(move |(i, _)| pairs[i as usize].clone()))
        }
    };

    let full = acc.full.summary(acc.count, &key);
    let simple = acc.simple.summary(acc.count, &key);
    let (max_violation, worst_pair) = if simple.max_violation > full.max_violation {
        (simple.max_violation, simple.worst_pair.clone())
    } else {
        (full.max_violation, full.worst_pair.clone())
    };
    Ok(EmlReport {
        n,
        policy: options.policy,
        nonempty_only: options.nonempty_only,
        pair_count: acc.count,
        slack_tol: options.slack_tol,
        max_violation,
        worst_pair,
        full,
        simple,
        ordering_violations: acc.ordering_violations,
        rows: options.keep_rows.then_some(acc.rows),
    })
}

fn exhaustive(profile: &SpectralProfile, options: &VerifyOptions) -> Result<Acc> {
    let n = profile.n;
    let full = 1u64 << n;
    let start = u64::from(options.nonempty_only);

    // pi(W) for every mask, built from the mask with its lowest bit cleared
    let mut pi_w = vec![0.0; full as usize];
    for w in 1..full {
        pi_w[w as usize] = pi_w[(w & (w - 1)) as usize] + profile.pi[w.trailing_zeros() as usize];
    }
    let partials: Vec<Result<Acc>> = (start..full)
        .into_par_iter()
        .map(|u| {
            let mut acc = Acc::new();
            let u_len = u.count_ones() as f64;
            let mut row = vec![0.0; n];
            for i in mask_members(u) {
                for (r, &pij) in row.iter_mut().zip(profile.p.row(i)) {
                    *r += pij;
                }
            }
            let mut mass = vec![0.0; full as usize];
            for w in 1..full {
                mass[w as usize] = mass[(w & (w - 1)) as usize] + row[w.trailing_zeros() as usize];
            }
            for w in start..full {
                let w_len = w.count_ones() as f64;
                let pw = pi_w[w as usize];
                let (fu, fw) = radicand_factors(profile, u_len, w_len, pw)?;
                let lhs = (mass[w as usize] - u_len * pw).abs();
                let bound = profile.rho * (fu * fw).sqrt();
                let simple = profile.rho * (u_len * w_len).sqrt() * profile.kappa;
                acc.count += 1;
                acc.full.push(lhs, bound, (u, w));
                acc.simple.push(lhs, simple, (u, w));
                if bound > simple + options.slack_tol {
                    acc.ordering_violations += 1;
                }
                if options.keep_rows {
                    let pi_u: f64 = pi_w[u as usize];
                    acc.rows.push(EmlRow {
                        u: mask_members(u),
                        w: mask_members(w),
                        lhs,
                        lhs_u_centered: (mass[w as usize] - u_len * pi_u).abs(),
                        bound,
                        bound_simple: simple,
                    });
                }
            }
            Ok(acc)
        })
        .collect();

    partials
        .into_iter()
        .try_fold(Acc::new(), |total, part| Ok(total.merge(part?)))
}

fn sampled(
    profile: &SpectralProfile,
    options: &VerifyOptions,
    count: usize,
    seed: u64,
) -> Result<(Acc, Vec<SubsetPair>)> {
    if count == 0 {
        return Err(Error::InvalidParameter(
            "sample count must be positive".into(),
        ));
    }
    let n = profile.n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| -> Vec<usize> {
        loop {
            let set: Vec<usize> = (0..n).filter(|_| rng.random::<bool>()).collect();
            if !(options.nonempty_only && set.is_empty()) {
                return set;
            }
        }
    };
    let pairs: Vec<SubsetPair> = (0..count)
        .map(|_| {
            let u = draw(&mut rng);
            let w = draw(&mut rng);
            SubsetPair { u, w }
        })
        .collect();

    let evaluated: Vec<Result<(f64, f64, f64, f64)>> = pairs
        .par_iter()
        .map(|pair| {
            Ok((
                eml_lhs(profile, pair),
                eml_bound(profile, pair)?,
                eml_bound_simple(profile, pair),
                eml_lhs_u_centered(profile, pair),
            ))
        })
        .collect();

    let mut acc = Acc::new();
    for (i, result) in evaluated.into_iter().enumerate() {
        let (lhs, bound, simple, lhs_u) = result?;
        let key = (i as u64, 0);
        acc.count += 1;
        acc.full.push(lhs, bound, key);
        acc.simple.push(lhs, simple, key);
        if bound > simple + options.slack_tol {
            acc.ordering_violations += 1;
        }
        if options.keep_rows {
            acc.rows.push(EmlRow {
                u: pairs[i].u.clone(),
                w: pairs[i].w.clone(),
                lhs,
                lhs_u_centered: lhs_u,
                bound,
                bound_simple: simple,
            });
        }
    }
    Ok((acc, pairs))
}

/// Edge-count form of the mixing bound for a symmetric `k`-regular digraph.
#[derive(Debug, Clone)]
pub struct AlonChung {
    pub n: usize,
    pub k: usize,
    /// Largest modulus among the adjacency eigenvalues other than `k`.
    pub mu: f64,
    adjacency: Vec<u64>,
    edges: Vec<Vec<usize>>,
}

impl AlonChung {
    pub fn new(g: &DirectedGraph) -> Result<Self> {
        let k = g
            .symmetric_regular_degree()
            .ok_or(Error::NotRegularSymmetric)?;
        let n = g.vertex_count();
        let mut a = RealMatrix::zeros(n, n);
        for (t, h) in g.edges() {
            a[(t, h)] = 1.0;
        }
        let mut theta = eigenvalues(&a, &EigenConfig::default())?;
        let kc = Complex64::new(k as f64, 0.0);
        let top = (0..n)
            .min_by(|&x, &y| (theta[x] - kc).norm().total_cmp(&(theta[y] - kc).norm()))
            .expect("n >= 1");
        theta.remove(top);
        let mu = theta.iter().map(|z| z.norm()).fold(0.0, f64::max);
        Ok(AlonChung {
            n,
            k,
            mu,
            adjacency: if n <= 64 {
                g.adjacency_masks()
            } else {
                Vec::new()
            },
            edges: (0..n).map(|v| g.out_neighbors(v).to_vec()).collect(),
        })
    }

    /// Directed edges from `U` to `W`; an undirected edge inside `U ∩ W`
    /// counts once per direction.
    pub fn edge_count(&self, pair: &SubsetPair) -> usize {
        if self.n <= 64 {
            let w = pair.w.iter().fold(0u64, |m, &v| m | (1 << v));
            pair.u
                .iter()
                .map(|&i| (self.adjacency[i] & w).count_ones() as usize)
                .sum()
        } else {
            pair.u
                .iter()
                .map(|&i| {
                    pair.w
                        .iter()
                        .filter(|&&j| self.edges[i].binary_search(&j).is_ok())
                        .count()
                })
                .sum()
        }
    }

    /// `(|e(U,W) - k|U||W|/n|, mu sqrt(|U||W|(1 - |U|/n)(1 - |W|/n)))`
    pub fn evaluate(&self, pair: &SubsetPair) -> (f64, f64) {
        let (u, w, n) = (pair.u.len() as f64, pair.w.len() as f64, self.n as f64);
        let lhs = (self.edge_count(pair) as f64 - self.k as f64 * u * w / n).abs();
        let rhs = self.mu * (u * w * (1.0 - u / n) * (1.0 - w / n)).max(0.0).sqrt();
        (lhs, rhs)
    }
}

pub fn alon_chung_bound(g: &DirectedGraph, pair: &SubsetPair) -> Result<(f64, f64)> {
    Ok(AlonChung::new(g)?.evaluate(pair))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Family};
    use crate::markov::{build_transition_matrix, spectral_profile, SpectralConfig};

    fn profile(family: Family) -> SpectralProfile {
        let g = generate(&family).unwrap();
        spectral_profile(
            &build_transition_matrix(&g).unwrap(),
            &SpectralConfig::default(),
        )
        .unwrap()
    }

    fn chord() -> SpectralProfile {
        profile(Family::ChordCycle {
            n: 3,
            chords: vec![(0, 2)],
        })
    }

    #[test]
    fn lhs_examples() {
        let p = chord();
        assert_eq!(eml_lhs(&p, &SubsetPair::from_masks(0, 0)), 0.0);
        let pair = SubsetPair::new(vec![0], vec![1, 2], 3).unwrap();
        assert!((eml_lhs(&p, &pair) - 0.4).abs() < 1e-12);

        let k3 = profile(Family::CompleteBidirected { n: 3 });
        let pair = SubsetPair::new(vec![0], vec![0], 3).unwrap();
        assert!((eml_lhs(&k3, &pair) - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn bound_examples() {
        let p = chord();
        let empty_u = SubsetPair::new(vec![], vec![1], 3).unwrap();
        assert_eq!(eml_bound(&p, &empty_u).unwrap(), 0.0);
        assert_eq!(eml_bound_simple(&p, &empty_u), 0.0);

        let k3 = profile(Family::CompleteBidirected { n: 3 });
        let all = SubsetPair::new(vec![0, 1, 2], vec![0, 1, 2], 3).unwrap();
        assert!(eml_bound(&k3, &all).unwrap() < 1e-6);
        let single = SubsetPair::new(vec![0], vec![1], 3).unwrap();
        assert!((eml_bound_simple(&k3, &single) - k3.rho).abs() < 1e-8);
    }

    #[test]
    fn exhaustive_counts() {
        let report = verify_eml(&chord(), &VerifyOptions::default()).unwrap();
        assert_eq!(report.pair_count, 64);
        assert!(report.passed());
        let report = verify_eml(
            &chord(),
            &VerifyOptions {
                nonempty_only: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(report.pair_count, 49);
    }

    #[test]
    fn exhaustive_rows_match_pairwise_functions() {
        let p = chord();
        let report = verify_eml(
            &p,
            &VerifyOptions {
                keep_rows: true,
                ..Default::default()
            },
        )
        .unwrap();
        for row in report.rows.unwrap() {
            let pair = SubsetPair { u: row.u, w: row.w };
            assert!((row.lhs - eml_lhs(&p, &pair)).abs() < 1e-14);
            assert!((row.lhs_u_centered - eml_lhs_u_centered(&p, &pair)).abs() < 1e-14);
            assert!((row.bound - eml_bound(&p, &pair).unwrap()).abs() < 1e-14);
            assert!((row.bound_simple - eml_bound_simple(&p, &pair)).abs() < 1e-14);
        }
    }

    #[test]
    fn cap_enforced() {
        let p = profile(Family::CompleteBidirected { n: 5 });
        let options = VerifyOptions {
            exhaustive_cap: 4,
            ..Default::default()
        };
        assert!(matches!(
            verify_eml(&p, &options),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn sampling_is_seeded() {
        let p = profile(Family::UndirectedCycle { n: 5 });
        let options = VerifyOptions {
            policy: SamplingPolicy::Sample {
                count: 500,
                seed: 7,
            },
            nonempty_only: true,
            ..Default::default()
        };
        let a = verify_eml(&p, &options).unwrap();
        assert_eq!(a, verify_eml(&p, &options).unwrap());
        assert_eq!(a.pair_count, 500);
        assert!(a.passed());
    }

    #[test]
    fn alon_chung_cycle() {
        let g = generate(&Family::UndirectedCycle { n: 5 }).unwrap();
        let all: Vec<usize> = (0..5).collect();
        let (lhs, _) =
            alon_chung_bound(&g, &SubsetPair::new(all.clone(), all, 5).unwrap()).unwrap();
        assert!(lhs.abs() < 1e-12);
        let (lhs, rhs) =
            alon_chung_bound(&g, &SubsetPair::new(vec![0], vec![1], 5).unwrap()).unwrap();
        assert!((lhs - 0.6).abs() < 1e-12);
        let mu = 2.0 * (std::f64::consts::PI / 5.0).cos();
        assert!((rhs - mu * 0.8).abs() < 1e-10);

        let chord = generate(&Family::ChordCycle {
            n: 3,
            chords: vec![(0, 2)],
        })
        .unwrap();
        assert!(matches!(
            AlonChung::new(&chord),
            Err(Error::NotRegularSymmetric)
        ));
    }
}

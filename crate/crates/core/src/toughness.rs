//! Directed toughness: exact values by subset enumeration and spectral
//! lower bounds.
//!
//! The toughness of a strongly connected digraph is the minimum of
//! `|S| / c(G - S)` over vertex sets `S` whose removal leaves at least two
//! strongly connected components. Graphs with no such `S` (complete
//! digraphs) have infinite toughness.

use std::cmp::Ordering;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{scc, DirectedGraph};
use crate::markov::SpectralProfile;
use crate::mixing::AlonChung;

pub const DEFAULT_TOUGHNESS_CAP: usize = 20;
/// Subset masks are `u64`, and the full vertex mask must fit.
pub const HARD_TOUGHNESS_CAP: usize = 63;
pub const HOLDS_TOL: f64 = 1e-9;
pub const INFINITE_BOUND_NOTE: &str = "rho = 0, the spectral bound is unbounded";

/// A real number or `+infinity`. Serializes the infinite case as the string
/// `"infinite"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    Infinite,
}

impl ExtReal {
    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(x) => Some(x),
            ExtReal::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtReal::Infinite)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(x) => fmt::Display::fmt(x, f),
            ExtReal::Infinite => f.write_str("infinite"),
        }
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtReal::Finite(x) => serializer.serialize_f64(*x),
            ExtReal::Infinite => serializer.serialize_str("infinite"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Number(f64),
            Text(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Number(x) => Ok(ExtReal::Finite(x)),
            Repr::Text(s) if s == "infinite" => Ok(ExtReal::Infinite),
            Repr::Text(s) => Err(serde::de::Error::custom(format!(
                "expected a number or \"infinite\", got \"{s}\""
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToughnessResult {
    pub value: ExtReal,
    /// Minimizing vertex set; ties go to the smaller set, then the smaller
    /// bitmask.
    pub witness: Option<Vec<usize>>,
    /// Vertex labels of the witness, in the same order.
    pub witness_labels: Option<Vec<String>>,
    pub component_count_at_witness: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ToughnessOptions {
    pub cap: usize,
    /// Permit `cap < n <= HARD_TOUGHNESS_CAP`.
    pub allow_over_cap: bool,
}

impl Default for ToughnessOptions {
    fn default() -> Self {
        ToughnessOptions {
            cap: DEFAULT_TOUGHNESS_CAP,
            allow_over_cap: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Candidate {
    size: u32,
    components: u32,
    mask: u64,
}

impl Candidate {
    // ratio first (exact cross-multiplication), then |S|, then mask
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = u64::from(self.size) * u64::from(other.components);
        let rhs = u64::from(other.size) * u64::from(self.components);
        lhs.cmp(&rhs)
            .then(self.size.cmp(&other.size))
            .then(self.mask.cmp(&other.mask))
    }
}

pub fn exact_toughness(g: &DirectedGraph, options: &ToughnessOptions) -> Result<ToughnessResult> {
    let n = g.vertex_count();
    let components = scc(g).component_count;
    if components != 1 {
        return Err(Error::NotStronglyConnected { components });
    }
    let limit = if options.allow_over_cap {
        HARD_TOUGHNESS_CAP
    } else {
        options.cap.min(HARD_TOUGHNESS_CAP)
    };
    if n > limit {
        return Err(Error::CapExceeded {
            what: "exact toughness",
            n,
            cap: limit,
        });
    }

    let adj = g.adjacency_masks();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let best = (1..full)
        .into_par_iter()
        .filter_map(|s| {
            let components = crate::graph::component_count_within(&adj, full & !s) as u32;
            (components >= 2).then_some(Candidate {
                size: s.count_ones(),
                components,
                mask: s,
            })
        })
        .min_by(Candidate::cmp);

    Ok(match best {
        Some(c) => {
            let witness: Vec<usize> = (0..n).filter(|&v| c.mask & (1 << v) != 0).collect();
            ToughnessResult {
                value: ExtReal::Finite(f64::from(c.size) / f64::from(c.components)),
                witness_labels: Some(witness.iter().map(|&v| g.label(v)).collect()),
                witness: Some(witness),
                component_count_at_witness: Some(c.components as usize),
            }
        }
        None => ToughnessResult {
            value: ExtReal::Infinite,
            witness: None,
            witness_labels: None,
            component_count_at_witness: None,
        },
    })
}

/// Spectral lower bound on directed toughness:
///
/// ```text
/// (1/3) (pi_min / (pi_max rho kappa) - 1 / (1 + rho ||C||^2 pi_min / (kappa pi_max)) - 1)
/// ```
///
/// `rho = 0` makes the first term unbounded and yields [`ExtReal::Infinite`].
pub fn toughness_spectral_bound(profile: &SpectralProfile) -> ExtReal {
    let SpectralProfile {
        rho,
        kappa,
        norm_c,
        pi_min,
        pi_max,
        ..
    } = *profile;
    if rho == 0.0 {
        return ExtReal::Infinite;
    }
    let ratio = pi_min / pi_max;
    let first = ratio / (rho * kappa);
    let second = 1.0 / (1.0 + rho * norm_c * norm_c * ratio / kappa);
    ExtReal::Finite((first - second - 1.0) / 3.0)
}

/// `(1/3)(k^2 / (k mu + mu^2) - 1)` for a symmetric `k`-regular digraph,
/// with `mu` the second largest adjacency eigenvalue modulus.
pub fn alon_toughness_bound(g: &DirectedGraph) -> Result<ExtReal> {
    let ac = AlonChung::new(g)?;
    Ok(alon_formula(ac.k as f64, ac.mu))
}

pub(crate) fn alon_formula(k: f64, mu: f64) -> ExtReal {
    if mu == 0.0 {
        return ExtReal::Infinite;
    }
    ExtReal::Finite((k * k / (k * mu + mu * mu) - 1.0) / 3.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundComparison {
    pub exact: ToughnessResult,
    pub spectral_bound: ExtReal,
    /// `exact - bound`; absent when the bound itself is infinite.
    pub gap: Option<ExtReal>,
    /// `exact >= bound - 1e-9`
    pub holds: bool,
    pub note: Option<String>,
}

pub fn compare(exact: ToughnessResult, spectral_bound: ExtReal) -> BoundComparison {
    let (gap, holds) = match (exact.value, spectral_bound) {
        (ExtReal::Finite(t), ExtReal::Finite(b)) => {
            (Some(ExtReal::Finite(t - b)), t >= b - HOLDS_TOL)
        }
        (ExtReal::Infinite, ExtReal::Finite(_)) => (Some(ExtReal::Infinite), true),
        (ExtReal::Infinite, ExtReal::Infinite) => (None, true),
        (ExtReal::Finite(_), ExtReal::Infinite) => (None, false),
    };
    let note = spectral_bound
        .is_infinite()
        .then(|| INFINITE_BOUND_NOTE.to_string());
    BoundComparison {
        exact,
        spectral_bound,
        gap,
        holds,
        note,
    }
}

/// Runs the exact enumeration and the spectral bound side by side. A bound
/// that fails is reported through `holds`, never as an error.
pub fn compare_bounds(
    g: &DirectedGraph,
    profile: &SpectralProfile,
    options: &ToughnessOptions,
) -> Result<BoundComparison> {
    let exact = exact_toughness(g, options)?;
    Ok(compare(exact, toughness_spectral_bound(profile)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Family};
    use crate::markov::{build_transition_matrix, spectral_profile, SpectralConfig};

    fn exact(family: Family) -> ToughnessResult {
        exact_toughness(&generate(&family).unwrap(), &ToughnessOptions::default()).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(
            exact(Family::CompleteBidirected { n: 4 }).value,
            ExtReal::Infinite
        );

        let c5 = exact(Family::UndirectedCycle { n: 5 });
        assert_eq!(c5.value, ExtReal::Finite(1.0));
        assert_eq!(c5.witness, Some(vec![0, 2]));
        assert_eq!(c5.component_count_at_witness, Some(2));

        let chord = exact(Family::ChordCycle {
            n: 3,
            chords: vec![(0, 2)],
        });
        assert_eq!(chord.value, ExtReal::Finite(0.5));
        assert_eq!(chord.witness, Some(vec![0]));

        assert_eq!(exact(Family::Petersen).value, ExtReal::Finite(4.0 / 3.0));
    }

    #[test]
    fn preconditions() {
        let path = DirectedGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert!(matches!(
            exact_toughness(&path, &ToughnessOptions::default()),
            Err(Error::NotStronglyConnected { .. })
        ));
        let g = generate(&Family::UndirectedCycle { n: 6 }).unwrap();
        let options = ToughnessOptions {
            cap: 5,
            allow_over_cap: false,
        };
        assert!(matches!(
            exact_toughness(&g, &options),
            Err(Error::CapExceeded { .. })
        ));
        let forced = ToughnessOptions {
            allow_over_cap: true,
            ..options
        };
        assert_eq!(
            exact_toughness(&g, &forced).unwrap().value,
            ExtReal::Finite(1.0)
        );
    }

    #[test]
    fn alon_examples() {
        let petersen = generate(&Family::Petersen).unwrap();
        let b = alon_toughness_bound(&petersen).unwrap().finite().unwrap();
        assert!((b + 1.0 / 30.0).abs() < 1e-9);
        let k4 = generate(&Family::CompleteBidirected { n: 4 }).unwrap();
        let b = alon_toughness_bound(&k4).unwrap().finite().unwrap();
        assert!((b - 5.0 / 12.0).abs() < 1e-9);
    }

    #[test]
    fn cycle_spectral_bound() {
        let g = generate(&Family::UndirectedCycle { n: 5 }).unwrap();
        let profile = spectral_profile(
            &build_transition_matrix(&g).unwrap(),
            &SpectralConfig::default(),
        )
        .unwrap();
        let mu = 2.0 * (std::f64::consts::PI / 5.0).cos();
        let expected = (4.0 / (2.0 * mu + mu * mu) - 1.0) / 3.0;
        let got = toughness_spectral_bound(&profile).finite().unwrap();
        assert!((got - expected).abs() < 1e-9);
        assert!((got + 0.10557).abs() < 1e-5);
        let cmp = compare_bounds(&g, &profile, &ToughnessOptions::default()).unwrap();
        assert!(cmp.holds);
    }

    #[test]
    fn comparison_cases() {
        let exact = |v| ToughnessResult {
            value: v,
            witness: None,
            witness_labels: None,
            component_count_at_witness: None,
        };
        assert!(compare(exact(ExtReal::Infinite), ExtReal::Finite(3.0)).holds);
        assert!(!compare(exact(ExtReal::Finite(0.5)), ExtReal::Finite(0.6)).holds);
        assert!(!compare(exact(ExtReal::Finite(0.5)), ExtReal::Infinite).holds);
        let c = compare(exact(ExtReal::Finite(1.0)), ExtReal::Finite(0.25));
        assert_eq!(c.gap, Some(ExtReal::Finite(0.75)));
    }

    #[test]
    fn ext_real_json() {
        assert_eq!(
            serde_json::to_string(&ExtReal::Infinite).unwrap(),
            "\"infinite\""
        );
        assert_eq!(serde_json::to_string(&ExtReal::Finite(0.5)).unwrap(), "0.5");
        let back: ExtReal = serde_json::from_str("\"infinite\"").unwrap();
        assert_eq!(back, ExtReal::Infinite);
        assert!(serde_json::from_str::<ExtReal>("\"huge\"").is_err());
    }
}

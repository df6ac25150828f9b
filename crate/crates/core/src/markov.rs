//! Random-walk transition matrices and the spectral quantities derived from
//! them.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::{period, scc, DirectedGraph};
use crate::linalg::{
    eigendecompose_nonsymmetric, invert, operator_norm, EigenConfig, EigenDecomposition, RealMatrix,
};

/// Row-stochastic matrix with `p_ij = 1 / outdeg(i)` for every edge `i -> j`.
#[derive(Debug, Clone)]
pub struct TransitionMatrix<'g> {
    graph: &'g DirectedGraph,
    p: RealMatrix,
}

impl<'g> TransitionMatrix<'g> {
    pub fn graph(&self) -> &'g DirectedGraph {
        self.graph
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.p
    }

    pub fn n(&self) -> usize {
        self.p.rows()
    }
}

pub fn build_transition_matrix(g: &DirectedGraph) -> Result<TransitionMatrix<'_>> {
    let n = g.vertex_count();
    let mut p = RealMatrix::zeros(n, n);
    for v in 0..n {
        let heads = g.out_neighbors(v);
        if heads.is_empty() {
            return Err(Error::ZeroOutdegree { vertex: g.label(v) });
        }
        let w = 1.0 / heads.len() as f64;
        for &h in heads {
            p[(v, h)] = w;
        }
    }
    Ok(TransitionMatrix { graph: g, p })
}

fn require_ergodic(g: &DirectedGraph) -> Result<()> {
    let components = scc(g).component_count;
    if components != 1 {
        return Err(Error::NotStronglyConnected { components });
    }
    match period(g)? {
        1 => Ok(()),
        period => Err(Error::Periodic { period }),
    }
}

const STATIONARY_STEP_TOL: f64 = 1e-14;
const STATIONARY_MAX_ITER: usize = 1_000_000;
const STATIONARY_CHECK_TOL: f64 = 1e-12;

/// Left Perron vector of `P`, by power iteration from the uniform vector.
pub fn stationary_distribution(t: &TransitionMatrix<'_>) -> Result<Vec<f64>> {
    require_ergodic(t.graph)?;
    let n = t.n();
    let p = &t.p;
    let mut pi = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    let mut converged = false;
    for _ in 0..STATIONARY_MAX_ITER {
        left_multiply(p, &pi, &mut next);
        let change = pi
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        std::mem::swap(&mut pi, &mut next);
        if change < STATIONARY_STEP_TOL {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::StationaryNoConvergence {
            iterations: STATIONARY_MAX_ITER,
        });
    }
    let total: f64 = pi.iter().sum();
    pi.iter_mut().for_each(|x| *x /= total);

    left_multiply(p, &pi, &mut next);
    let deviation = pi
        .iter()
        .zip(&next)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if deviation > STATIONARY_CHECK_TOL {
        return Err(Error::StationaryCheck { deviation });
    }
    Ok(pi)
}

// out = x^T P
fn left_multiply(p: &RealMatrix, x: &[f64], out: &mut [f64]) {
    out.iter_mut().for_each(|o| *o = 0.0);
    for (i, &xi) in x.iter().enumerate() {
        for (o, &pij) in out.iter_mut().zip(p.row(i)) {
            *o += xi * pij;
        }
    }
}

/// Tolerances for [`spectral_profile`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralConfig {
    pub eigen: EigenConfig,
    /// `rho >= 1 - rho_margin` is treated as a periodic chain.
    pub rho_margin: f64,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig {
            eigen: EigenConfig::default(),
            rho_margin: 1e-12,
        }
    }
}

/// Everything the mixing and toughness bounds consume.
///
/// The first column of the eigenbasis is exactly `(1/sqrt(n)) 1`, the
/// Perron eigenvector of a row-stochastic matrix, and the first row of its
/// inverse is then `sqrt(n) pi^T`.
#[derive(Debug, Clone)]
pub struct SpectralProfile {
    pub n: usize,
    /// Transition matrix entries.
    pub p: RealMatrix,
    pub decomposition: EigenDecomposition,
    /// Largest modulus among the eigenvalues other than the dominant one.
    pub rho: f64,
    pub pi: Vec<f64>,
    pub pi_min: f64,
    pub pi_max: f64,
    pub norm_c: f64,
    pub norm_c_inv: f64,
    pub kappa: f64,
}

impl SpectralProfile {
    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.decomposition.eigenvalues
    }

    /// `pi(S)` for a vertex subset.
    pub fn pi_mass(&self, subset: &[usize]) -> f64 {
        subset.iter().map(|&v| self.pi[v]).sum()
    }
}

pub fn spectral_profile(
    t: &TransitionMatrix<'_>,
    config: &SpectralConfig,
) -> Result<SpectralProfile> {
    require_ergodic(t.graph)?;
    let n = t.n();
    let mut dec = eigendecompose_nonsymmetric(&t.p, &config.eigen)?;

    let one = Complex64::new(1.0, 0.0);
    let dominant = (0..n)
        .min_by(|&a, &b| {
            (dec.eigenvalues[a] - one)
                .norm()
                .total_cmp(&(dec.eigenvalues[b] - one).norm())
        })
        .expect("n >= 1");

    // move the dominant pair to the front and pin its vector
    let lambda1 = dec.eigenvalues.remove(dominant);
    dec.eigenvalues.insert(0, lambda1);
    let mut basis = dec.basis.clone();
    for j in (1..=dominant).rev() {
        basis.set_column(j, &dec.basis.column(j - 1));
    }
    basis.set_column(0, &vec![Complex64::new(1.0 / (n as f64).sqrt(), 0.0); n]);
    dec.basis_inverse = invert(&basis)?;
    dec.residual =
        crate::linalg::diagonalization_residual(&t.p.to_complex(), &basis, &dec.eigenvalues);
    dec.basis = basis;

    let rho = dec.eigenvalues[1..]
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if rho >= 1.0 - config.rho_margin {
        return Err(Error::NumericallyPeriodic { rho });
    }

    let pi = stationary_distribution(t)?;
    let pi_min = pi.iter().copied().fold(f64::INFINITY, f64::min);
    let pi_max = pi.iter().copied().fold(0.0, f64::max);
    let norm_c = operator_norm(&dec.basis);
    let norm_c_inv = operator_norm(&dec.basis_inverse);

    Ok(SpectralProfile {
        n,
        p: t.p.clone(),
        decomposition: dec,
        rho,
        pi,
        pi_min,
        pi_max,
        norm_c,
        norm_c_inv,
        kappa: norm_c * norm_c_inv,
    })
}

/// Measured deviations from the identities the dominant eigenpair must satisfy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolCheck {
    /// `max_j |(C^-1)_{0j} - sqrt(n) pi_j|`
    pub dual_row_deviation: f64,
    /// `|lambda_1 - 1|`
    pub dominant_deviation: f64,
}

pub fn eml_symbol_check(profile: &SpectralProfile) -> SymbolCheck {
    let sqrt_n = (profile.n as f64).sqrt();
    let row = profile.decomposition.basis_inverse.row(0);
    let dual_row_deviation = row
        .iter()
        .zip(&profile.pi)
        .map(|(y, &pi)| (y - Complex64::new(sqrt_n * pi, 0.0)).norm())
        .fold(0.0, f64::max);
    SymbolCheck {
        dual_row_deviation,
        dominant_deviation: (profile.decomposition.eigenvalues[0] - 1.0).norm(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Family};

    fn chord_cycle() -> DirectedGraph {
        generate(&Family::ChordCycle {
            n: 3,
            chords: vec![(0, 2)],
        })
        .unwrap()
    }

    #[test]
    fn transition_entries() {
        let g = generate(&Family::CompleteBidirected { n: 3 }).unwrap();
        let t = build_transition_matrix(&g).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(t.matrix()[(i, j)], if i == j { 0.0 } else { 0.5 });
            }
        }
        let g = chord_cycle();
        let t = build_transition_matrix(&g).unwrap();
        assert_eq!(
            t.matrix(),
            &RealMatrix::from_rows(&[
                vec![0.0, 0.5, 0.5],
                vec![0.0, 0.0, 1.0],
                vec![1.0, 0.0, 0.0]
            ])
        );
    }

    #[test]
    fn zero_outdegree() {
        let path = DirectedGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let err = build_transition_matrix(&path).unwrap_err();
        assert_eq!(err.to_string(), "vertex 2 has outdegree 0");
    }

    #[test]
    fn stationary_examples() {
        let g = chord_cycle();
        let pi = stationary_distribution(&build_transition_matrix(&g).unwrap()).unwrap();
        for (got, want) in pi.iter().zip([0.4, 0.2, 0.4]) {
            assert!((got - want).abs() < 1e-10);
        }
        let c5 = generate(&Family::UndirectedCycle { n: 5 }).unwrap();
        let pi = stationary_distribution(&build_transition_matrix(&c5).unwrap()).unwrap();
        assert!(pi.iter().all(|&x| (x - 0.2).abs() < 1e-12));
    }

    #[test]
    fn periodic_rejected() {
        let c4 = generate(&Family::UndirectedCycle { n: 4 }).unwrap();
        let t = build_transition_matrix(&c4).unwrap();
        assert!(matches!(
            stationary_distribution(&t),
            Err(Error::Periodic { period: 2 })
        ));
        assert!(matches!(
            spectral_profile(&t, &SpectralConfig::default()),
            Err(Error::Periodic { period: 2 })
        ));
    }

    #[test]
    fn chord_cycle_profile() {
        let g = chord_cycle();
        let profile = spectral_profile(
            &build_transition_matrix(&g).unwrap(),
            &SpectralConfig::default(),
        )
        .unwrap();
        assert!((profile.rho - 0.5f64.sqrt()).abs() < 1e-12);
        assert_eq!(profile.pi_min, profile.pi[1]);
        assert!((profile.pi_max - 0.4).abs() < 1e-12);
        let check = eml_symbol_check(&profile);
        assert!(check.dual_row_deviation < 1e-8);
        assert!(check.dominant_deviation < 1e-10);
        assert!(profile.kappa >= 1.0);
    }

    #[test]
    fn complete_graph_profile() {
        let g = generate(&Family::CompleteBidirected { n: 3 }).unwrap();
        let profile = spectral_profile(
            &build_transition_matrix(&g).unwrap(),
            &SpectralConfig::default(),
        )
        .unwrap();
        assert!((profile.rho - 0.5).abs() < 1e-12);
        assert!((profile.kappa - 1.0).abs() < 1e-8);
        let check = eml_symbol_check(&profile);
        assert!(check.dual_row_deviation <= 1e-9 && check.dominant_deviation <= 1e-9);
    }
}

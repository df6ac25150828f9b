//! Eigendecomposition of real nonsymmetric matrices.
//!
//! The matrix is reduced to upper Hessenberg form by Householder
//! similarities, then driven to real Schur form by Francis double-shift QR
//! steps. Eigenvectors of the quasi-triangular factor come from
//! back-substitution and are mapped back through the accumulated orthogonal
//! transformations. This follows the EISPACK `orthes`/`hqr2` pair.

use num_complex::Complex64;

use super::{condition_number_parts, invert, vec_norm, ComplexMatrix, LinalgError, RealMatrix};

/// Tolerances for [`eigendecompose_nonsymmetric`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenConfig {
    /// Accepted `||A C - C diag(lambda)||_F`, relative to `||A||_F`.
    pub residual_tol: f64,
    /// Eigenvalues closer than this (relative to `||A||_F`) share an eigenspace.
    pub cluster_tol: f64,
    /// QR sweeps allowed per dimension.
    pub max_iter_per_dim: usize,
    /// Smallest singular value of C below which the basis is rank deficient.
    pub defect_sigma_min: f64,
    /// Condition number of C above which the matrix is treated as defective.
    pub defect_kappa: f64,
    /// Within an eigenspace, a vector whose component orthogonal to the
    /// previous ones is shorter than this is a missing direction.
    pub cluster_rank_tol: f64,
    /// Two distinct eigenvalues closer than this many times their combined
    /// rounding uncertainty `(s_i + s_j) n eps ||A||_F`, with `s` the
    /// eigenvalue condition numbers, cannot be told apart from a defective
    /// double eigenvalue.
    pub separation_factor: f64,
}

impl Default for EigenConfig {
    fn default() -> Self {
        EigenConfig {
            residual_tol: 1e-10,
            cluster_tol: 1e-8,
            max_iter_per_dim: 100,
            defect_sigma_min: 1e-10,
            defect_kappa: 1e10,
            cluster_rank_tol: 1e-6,
            separation_factor: 1.0,
        }
    }
}

/// `A = C diag(eigenvalues) C^-1` with unit-norm columns in `basis`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<Complex64>,
    pub basis: ComplexMatrix,
    pub basis_inverse: ComplexMatrix,
    /// `||A C - C diag(eigenvalues)||_F`
    pub residual: f64,
}

/// Eigenvalues only, in the same order as [`eigendecompose_nonsymmetric`].
pub fn eigenvalues(a: &RealMatrix, config: &EigenConfig) -> Result<Vec<Complex64>, LinalgError> {
    let schur = real_schur(a, config.max_iter_per_dim, false)?;
    let mut values = schur.eigenvalues();
    values.sort_by_key(|&z| order_key(z));
    Ok(values)
}

/// Full diagonalization of a real square matrix.
///
/// Eigenpairs are ordered by descending modulus, then descending real part,
/// then descending imaginary part, so conjugate pairs sit next to each other.
/// Each column of the basis has unit norm and its largest-modulus entry is
/// real positive. Eigenvalues within `cluster_tol` are treated as one
/// eigenspace whose basis is orthonormalized.
pub fn eigendecompose_nonsymmetric(
    a: &RealMatrix,
    config: &EigenConfig,
) -> Result<EigenDecomposition, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::DimensionMismatch(format!(
            "eigendecomposition of a non-square {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let scale = a.frobenius_norm();
    let schur = real_schur(a, config.max_iter_per_dim, true)?;

    let ac = a.to_complex();
    let mut pairs = schur.eigenpairs(&ac);
    pairs.sort_by_key(|(z, _)| order_key(*z));

    for (_, v) in pairs.iter_mut() {
        normalize(v);
    }

    let groups = clusters(&pairs, config.cluster_tol * scale.max(f64::MIN_POSITIVE));
    let mut group_of = vec![0; n];
    for (g, cluster) in groups.iter().enumerate() {
        for &j in cluster {
            group_of[j] = g;
        }
        if cluster.len() > 1 {
            orthonormalize(&mut pairs, cluster, config.cluster_rank_tol)?;
        }
    }

    let mut basis = ComplexMatrix::zeros(n, n);
    let mut eigenvalues = Vec::with_capacity(n);
    for (j, (lambda, v)) in pairs.into_iter().enumerate() {
        basis.set_column(j, &v);
        eigenvalues.push(lambda);
    }

    let basis_inverse = match invert(&basis) {
        Ok(inv) => inv,
        Err(LinalgError::Singular { .. }) => {
            return Err(LinalgError::Defective {
                reason: "eigenvector matrix is singular".into(),
            })
        }
        Err(e) => return Err(e),
    };
    check_separation(
        &eigenvalues,
        &group_of,
        &basis_inverse,
        config.separation_factor * n as f64 * f64::EPSILON * scale,
    )?;
    let (norm_c, norm_c_inv) = condition_number_parts(&basis, &basis_inverse);
    let sigma_min = 1.0 / norm_c_inv;
    let kappa = norm_c * norm_c_inv;
    if sigma_min < config.defect_sigma_min || kappa > config.defect_kappa {
        return Err(LinalgError::Defective {
            reason: format!(
                "eigenvector matrix has sigma_min {sigma_min:.3e}, condition number {kappa:.3e}"
            ),
        });
    }

    let residual = diagonalization_residual(&ac, &basis, &eigenvalues);
    let tolerance = config.residual_tol * scale;
    if residual > tolerance {
        return Err(LinalgError::Inaccurate {
            residual,
            tolerance,
        });
    }
    let inverse_error = basis
        .matmul(&basis_inverse)?
        .sub(&ComplexMatrix::identity(n))
        .frobenius_norm();
    if inverse_error > 1e-9 * n as f64 {
        return Err(LinalgError::Inaccurate {
            residual: inverse_error,
            tolerance: 1e-9 * n as f64,
        });
    }

    Ok(EigenDecomposition {
        eigenvalues,
        basis,
        basis_inverse,
        residual,
    })
}

/// Columns of C have unit norm, so the condition number of eigenvalue `j`
/// is the norm of row `j` of `C^-1`. A split Jordan block shows up as two
/// eigenvalues whose distance is within their own error bars.
fn check_separation(
    eigenvalues: &[Complex64],
    group_of: &[usize],
    basis_inverse: &ComplexMatrix,
    unit: f64,
) -> Result<(), LinalgError> {
    let n = eigenvalues.len();
    let cond: Vec<f64> = (0..n)
        .map(|j| {
            (0..n)
                .map(|k| basis_inverse[(j, k)].norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    for i in 0..n {
        for j in i + 1..n {
            if group_of[i] == group_of[j] {
                continue;
            }
            let gap = (eigenvalues[i] - eigenvalues[j]).norm();
            if gap <= (cond[i] + cond[j]) * unit {
                return Err(LinalgError::Defective {
                    reason: format!(
                        "eigenvalues {:.6} and {:.6} are not separated beyond rounding (gap {gap:.3e}, condition numbers {:.3e}, {:.3e})",
                        eigenvalues[i], eigenvalues[j], cond[i], cond[j]
                    ),
                });
            }
        }
    }
    Ok(())
}

/// `||A C - C diag(lambda)||_F`
pub fn diagonalization_residual(a: &ComplexMatrix, c: &ComplexMatrix, lambda: &[Complex64]) -> f64 {
    let ac = a.matmul(c).expect("square operands");
    let n = c.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..c.cols() {
            sum += (ac[(i, j)] - c[(i, j)] * lambda[j]).norm_sqr();
        }
    }
    sum.sqrt()
}

/// Sort key: descending modulus, real part, imaginary part, on a 1e-10 grid
/// so rounding noise does not reorder ties.
pub(crate) fn order_key(z: Complex64) -> (i64, i64, i64) {
    let q = |x: f64| -(x * 1e10).round() as i64;
    (q(z.norm()), q(z.re), q(z.im))
}

/// Unit Euclidean norm, largest-modulus entry rotated onto the positive real axis.
fn normalize(v: &mut [Complex64]) {
    let norm = vec_norm(v);
    if norm == 0.0 {
        return;
    }
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    // first entry within rounding of the maximum, so ties resolve by index
    let pivot = v
        .iter()
        .position(|z| z.norm() >= max * (1.0 - 1e-12))
        .unwrap_or(0);
    let phase = v[pivot].conj() / v[pivot].norm();
    for z in v.iter_mut() {
        *z = *z * phase / norm;
    }
    v[pivot].im = 0.0;
}

/// Index groups of eigenvalues linked by distance `<= tol` (single linkage).
fn clusters(pairs: &[(Complex64, Vec<Complex64>)], tol: f64) -> Vec<Vec<usize>> {
    let n = pairs.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n {
        for j in i + 1..n {
            if (pairs[i].0 - pairs[j].0).norm() <= tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        let r = find(&mut parent, i);
        groups[r].push(i);
    }
    groups.into_iter().filter(|g| !g.is_empty()).collect()
}

/// Modified Gram-Schmidt, two passes, over the vectors of one eigenspace.
fn orthonormalize(
    pairs: &mut [(Complex64, Vec<Complex64>)],
    cluster: &[usize],
    rank_tol: f64,
) -> Result<(), LinalgError> {
    for (pos, &j) in cluster.iter().enumerate() {
        let mut v = pairs[j].1.clone();
        let before = vec_norm(&v);
        for _ in 0..2 {
            for &k in &cluster[..pos] {
                let u = &pairs[k].1;
                let dot: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(u) {
                    *x -= dot * y;
                }
            }
        }
        let after = vec_norm(&v);
        if after < rank_tol * before {
            return Err(LinalgError::Defective {
                reason: format!(
                    "eigenvalue {:.6} has {} computed eigenvectors spanning fewer dimensions",
                    pairs[j].0,
                    cluster.len()
                ),
            });
        }
        normalize(&mut v);
        pairs[j].1 = v;
    }
    // one common eigenvalue for the whole eigenspace
    let mean = cluster.iter().map(|&j| pairs[j].0).sum::<Complex64>() / cluster.len() as f64;
    for &j in cluster {
        pairs[j].0 = mean;
    }
    Ok(())
}

/// Real Schur form `A = V T V^T` with eigenvalues in `d + i e`.
struct RealSchur {
    n: usize,
    d: Vec<f64>,
    e: Vec<f64>,
    /// Eigenvector data of the original matrix when requested: a real
    /// eigenvalue owns one column, a complex pair owns two consecutive
    /// columns holding real and imaginary parts.
    v: RealMatrix,
}

impl RealSchur {
    fn eigenvalues(&self) -> Vec<Complex64> {
        (0..self.n)
            .map(|i| Complex64::new(self.d[i], self.e[i]))
            .collect()
    }

    fn eigenpairs(&self, a: &ComplexMatrix) -> Vec<(Complex64, Vec<Complex64>)> {
        let n = self.n;
        let mut out = Vec::with_capacity(n);
        let mut j = 0;
        while j < n {
            if self.e[j] == 0.0 {
                let col = self.v.column(j).into_iter().map(Complex64::from).collect();
                out.push((Complex64::new(self.d[j], 0.0), col));
                j += 1;
                continue;
            }
            let re = self.v.column(j);
            let im = self.v.column(j + 1);
            let lambda = Complex64::new(self.d[j], self.e[j].abs());
            let v: Vec<Complex64> = re
                .iter()
                .zip(&im)
                .map(|(&r, &i)| Complex64::new(r, i))
                .collect();
            let w: Vec<Complex64> = v.iter().map(|z| z.conj()).collect();
            // the stored pair spans both conjugate vectors; keep the one
            // that matches lambda
            let (upper, lower) = if pair_residual(a, &v, lambda) <= pair_residual(a, &w, lambda) {
                (v, w)
            } else {
                (w, v)
            };
            out.push((lambda, upper));
            out.push((lambda.conj(), lower));
            j += 2;
        }
        out
    }
}

fn pair_residual(a: &ComplexMatrix, v: &[Complex64], lambda: Complex64) -> f64 {
    let av = a.matvec(v);
    av.iter()
        .zip(v)
        .map(|(x, y)| (x - lambda * y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

fn real_schur(
    a: &RealMatrix,
    max_iter_per_dim: usize,
    vectors: bool,
) -> Result<RealSchur, LinalgError> {
    let n = a.rows();
    if a.as_slice().iter().any(|x| !x.is_finite()) {
        return Err(LinalgError::NonFinite);
    }
    let mut h = a.clone();
    let mut v = RealMatrix::identity(n);
    if n == 0 {
        return Ok(RealSchur {
            n,
            d: vec![],
            e: vec![],
            v,
        });
    }
    orthes(&mut h, &mut v);
    let mut schur = RealSchur {
        n,
        d: vec![0.0; n],
        e: vec![0.0; n],
        v,
    };
    hqr2(&mut h, &mut schur, max_iter_per_dim * n, vectors)?;
    Ok(schur)
}

/// Householder reduction to upper Hessenberg form; accumulates the
/// orthogonal similarity in `v`.
fn orthes(h: &mut RealMatrix, v: &mut RealMatrix) {
    let n = h.rows();
    if n < 3 {
        return;
    }
    let high = n - 1;
    let mut ort = vec![0.0; n];

    for m in 1..high {
        let scale: f64 = (m..=high).map(|i| h[(i, m - 1)].abs()).sum();
        if scale == 0.0 {
            continue;
        }
        let mut hh = 0.0;
        for i in (m..=high).rev() {
            ort[i] = h[(i, m - 1)] / scale;
            hh += ort[i] * ort[i];
        }
        let mut g = hh.sqrt();
        if ort[m] > 0.0 {
            g = -g;
        }
        hh -= ort[m] * g;
        ort[m] -= g;

        // H = (I - u u^T / hh) H (I - u u^T / hh)
        for j in m..n {
            let f = (m..=high).rev().map(|i| ort[i] * h[(i, j)]).sum::<f64>() / hh;
            for i in m..=high {
                h[(i, j)] -= f * ort[i];
            }
        }
        for i in 0..=high {
            let f = (m..=high).rev().map(|j| ort[j] * h[(i, j)]).sum::<f64>() / hh;
            for j in m..=high {
                h[(i, j)] -= f * ort[j];
            }
        }
        ort[m] *= scale;
        h[(m, m - 1)] = scale * g;
    }

    for m in (1..high).rev() {
        if h[(m, m - 1)] == 0.0 {
            continue;
        }
        for i in m + 1..=high {
            ort[i] = h[(i, m - 1)];
        }
        for j in m..=high {
            let g = (m..=high).map(|i| ort[i] * v[(i, j)]).sum::<f64>();
            // double division avoids underflow
            let g = (g / ort[m]) / h[(m, m - 1)];
            for i in m..=high {
                v[(i, j)] += g * ort[i];
            }
        }
    }
}

/// Complex division `(xr + i xi) / (yr + i yi)` by Smith's method.
fn cdiv(xr: f64, xi: f64, yr: f64, yi: f64) -> (f64, f64) {
    if yr.abs() > yi.abs() {
        let r = yi / yr;
        let d = yr + r * yi;
        ((xr + r * xi) / d, (xi - r * xr) / d)
    } else {
        let r = yr / yi;
        let d = yi + r * yr;
        ((r * xr + xi) / d, (r * xi - xr) / d)
    }
}

/// Francis double-shift QR on a Hessenberg matrix, followed by
/// back-substitution for the eigenvectors.
#[allow(clippy::many_single_char_names, unused_assignments)]
fn hqr2(
    h: &mut RealMatrix,
    out: &mut RealSchur,
    max_iter: usize,
    vectors: bool,
) -> Result<(), LinalgError> {
    let nn = out.n;
    let d = &mut out.d;
    let e = &mut out.e;
    let v = &mut out.v;
    let low = 0usize;
    let high = nn - 1;
    let eps = f64::EPSILON;
    let mut exshift = 0.0;
    let (mut p, mut q, mut r, mut s, mut z) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let (mut w, mut x, mut y);

    let mut norm = 0.0;
    for i in 0..nn {
        for j in i.saturating_sub(1)..nn {
            norm += h[(i, j)].abs();
        }
    }

    // n is the index of the eigenvalue being isolated; signed so the loop can
    // run down past zero
    let mut n = nn as isize - 1;
    let mut iter = 0usize;
    let mut total_iter = 0usize;
    while n >= low as isize {
        let nu = n as usize;
        // look for a single small subdiagonal element
        let mut l = nu;
        while l > low {
            s = h[(l - 1, l - 1)].abs() + h[(l, l)].abs();
            if s == 0.0 {
                s = norm;
            }
            if h[(l, l - 1)].abs() < eps * s {
                break;
            }
            l -= 1;
        }

        if l == nu {
            // one root
            h[(nu, nu)] += exshift;
            d[nu] = h[(nu, nu)];
            e[nu] = 0.0;
            n -= 1;
            iter = 0;
        } else if l + 1 == nu {
            // two roots
            w = h[(nu, nu - 1)] * h[(nu - 1, nu)];
            p = (h[(nu - 1, nu - 1)] - h[(nu, nu)]) / 2.0;
            q = p * p + w;
            z = q.abs().sqrt();
            h[(nu, nu)] += exshift;
            h[(nu - 1, nu - 1)] += exshift;
            x = h[(nu, nu)];

            if q >= 0.0 {
                // real pair
                z = if p >= 0.0 { p + z } else { p - z };
                d[nu - 1] = x + z;
                d[nu] = d[nu - 1];
                if z != 0.0 {
                    d[nu] = x - w / z;
                }
                e[nu - 1] = 0.0;
                e[nu] = 0.0;
                x = h[(nu, nu - 1)];
                s = x.abs() + z.abs();
                if s == 0.0 {
                    // block is already upper triangular
                    n -= 2;
                    iter = 0;
                    continue;
                }
                p = x / s;
                q = z / s;
                r = (p * p + q * q).sqrt();
                p /= r;
                q /= r;

                for j in nu - 1..nn {
                    z = h[(nu - 1, j)];
                    h[(nu - 1, j)] = q * z + p * h[(nu, j)];
                    h[(nu, j)] = q * h[(nu, j)] - p * z;
                }
                for i in 0..=nu {
                    z = h[(i, nu - 1)];
                    h[(i, nu - 1)] = q * z + p * h[(i, nu)];
                    h[(i, nu)] = q * h[(i, nu)] - p * z;
                }
                for i in low..=high {
                    z = v[(i, nu - 1)];
                    v[(i, nu - 1)] = q * z + p * v[(i, nu)];
                    v[(i, nu)] = q * v[(i, nu)] - p * z;
                }
            } else {
                // complex pair
                d[nu - 1] = x + p;
                d[nu] = x + p;
                e[nu - 1] = z;
                e[nu] = -z;
            }
            n -= 2;
            iter = 0;
        } else {
            // no convergence yet: form shift
            x = h[(nu, nu)];
            y = 0.0;
            w = 0.0;
            if l < nu {
                y = h[(nu - 1, nu - 1)];
                w = h[(nu, nu - 1)] * h[(nu - 1, nu)];
            }

            // Wilkinson's ad hoc shift
            if iter == 10 {
                exshift += x;
                for i in low..=nu {
                    h[(i, i)] -= x;
                }
                s = h[(nu, nu - 1)].abs() + h[(nu - 1, nu - 2)].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }

            // MATLAB's ad hoc shift
            if iter == 30 {
                s = (y - x) / 2.0;
                s = s * s + w;
                if s > 0.0 {
                    s = s.sqrt();
                    if y < x {
                        s = -s;
                    }
                    s = x - w / ((y - x) / 2.0 + s);
                    for i in low..=nu {
                        h[(i, i)] -= s;
                    }
                    exshift += s;
                    x = 0.964;
                    y = x;
                    w = x;
                }
            }

            iter += 1;
            total_iter += 1;
            if total_iter > max_iter {
                return Err(LinalgError::NoConvergence {
                    iterations: max_iter,
                });
            }

            // look for two consecutive small subdiagonal elements
            let mut m = nu - 2;
            loop {
                z = h[(m, m)];
                r = x - z;
                s = y - z;
                p = (r * s - w) / h[(m + 1, m)] + h[(m, m + 1)];
                q = h[(m + 1, m + 1)] - z - r - s;
                r = h[(m + 2, m + 1)];
                s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                if h[(m, m - 1)].abs() * (q.abs() + r.abs())
                    < eps
                        * (p.abs() * (h[(m - 1, m - 1)].abs() + z.abs() + h[(m + 1, m + 1)].abs()))
                {
                    break;
                }
                m -= 1;
            }

            for i in m + 2..=nu {
                h[(i, i - 2)] = 0.0;
                if i > m + 2 {
                    h[(i, i - 3)] = 0.0;
                }
            }

            // double QR step on rows l..=n and columns m..=n
            for k in m..nu {
                let notlast = k != nu - 1;
                if k != m {
                    p = h[(k, k - 1)];
                    q = h[(k + 1, k - 1)];
                    r = if notlast { h[(k + 2, k - 1)] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x == 0.0 {
                        continue;
                    }
                    p /= x;
                    q /= x;
                    r /= x;
                }

                s = (p * p + q * q + r * r).sqrt();
                if p < 0.0 {
                    s = -s;
                }
                if s != 0.0 {
                    if k != m {
                        h[(k, k - 1)] = -s * x;
                    } else if l != m {
                        h[(k, k - 1)] = -h[(k, k - 1)];
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;

                    for j in k..nn {
                        p = h[(k, j)] + q * h[(k + 1, j)];
                        if notlast {
                            p += r * h[(k + 2, j)];
                            h[(k + 2, j)] -= p * z;
                        }
                        h[(k, j)] -= p * x;
                        h[(k + 1, j)] -= p * y;
                    }
                    for i in 0..=nu.min(k + 3) {
                        p = x * h[(i, k)] + y * h[(i, k + 1)];
                        if notlast {
                            p += z * h[(i, k + 2)];
                            h[(i, k + 2)] -= p * r;
                        }
                        h[(i, k)] -= p;
                        h[(i, k + 1)] -= p * q;
                    }
                    for i in low..=high {
                        p = x * v[(i, k)] + y * v[(i, k + 1)];
                        if notlast {
                            p += z * v[(i, k + 2)];
                            v[(i, k + 2)] -= p * r;
                        }
                        v[(i, k)] -= p;
                        v[(i, k + 1)] -= p * q;
                    }
                }
            }
        }
    }

    if !vectors || norm == 0.0 {
        return Ok(());
    }

    // back-substitute to find the vectors of the upper triangular form
    for nu in (0..nn).rev() {
        p = d[nu];
        q = e[nu];

        if q == 0.0 {
            // real vector
            let mut l = nu;
            h[(nu, nu)] = 1.0;
            for i in (0..nu).rev() {
                w = h[(i, i)] - p;
                r = (l..=nu).map(|j| h[(i, j)] * h[(j, nu)]).sum();
                if e[i] < 0.0 {
                    z = w;
                    s = r;
                } else {
                    l = i;
                    if e[i] == 0.0 {
                        h[(i, nu)] = if w != 0.0 { -r / w } else { -r / (eps * norm) };
                    } else {
                        // 2x2 block: solve real equations
                        x = h[(i, i + 1)];
                        y = h[(i + 1, i)];
                        q = (d[i] - p) * (d[i] - p) + e[i] * e[i];
                        let t = (x * s - z * r) / q;
                        h[(i, nu)] = t;
                        h[(i + 1, nu)] = if x.abs() > z.abs() {
                            (-r - w * t) / x
                        } else {
                            (-s - y * t) / z
                        };
                    }
                    // overflow control
                    let t = h[(i, nu)].abs();
                    if (eps * t) * t > 1.0 {
                        for j in i..=nu {
                            h[(j, nu)] /= t;
                        }
                    }
                }
            }
        } else if q < 0.0 {
            // complex vector, stored in columns nu-1 (real) and nu (imaginary)
            let mut l = nu - 1;
            if h[(nu, nu - 1)].abs() > h[(nu - 1, nu)].abs() {
                h[(nu - 1, nu - 1)] = q / h[(nu, nu - 1)];
                h[(nu - 1, nu)] = -(h[(nu, nu)] - p) / h[(nu, nu - 1)];
            } else {
                let (cr, ci) = cdiv(0.0, -h[(nu - 1, nu)], h[(nu - 1, nu - 1)] - p, q);
                h[(nu - 1, nu - 1)] = cr;
                h[(nu - 1, nu)] = ci;
            }
            h[(nu, nu - 1)] = 0.0;
            h[(nu, nu)] = 1.0;
            for i in (0..nu.saturating_sub(1)).rev() {
                let mut ra = 0.0;
                let mut sa = 0.0;
                for j in l..=nu {
                    ra += h[(i, j)] * h[(j, nu - 1)];
                    sa += h[(i, j)] * h[(j, nu)];
                }
                w = h[(i, i)] - p;

                if e[i] < 0.0 {
                    z = w;
                    r = ra;
                    s = sa;
                } else {
                    l = i;
                    if e[i] == 0.0 {
                        let (cr, ci) = cdiv(-ra, -sa, w, q);
                        h[(i, nu - 1)] = cr;
                        h[(i, nu)] = ci;
                    } else {
                        // 2x2 block: solve complex equations
                        x = h[(i, i + 1)];
                        y = h[(i + 1, i)];
                        let mut vr = (d[i] - p) * (d[i] - p) + e[i] * e[i] - q * q;
                        let vi = (d[i] - p) * 2.0 * q;
                        if vr == 0.0 && vi == 0.0 {
                            vr = eps * norm * (w.abs() + q.abs() + x.abs() + y.abs() + z.abs());
                        }
                        let (cr, ci) =
                            cdiv(x * r - z * ra + q * sa, x * s - z * sa - q * ra, vr, vi);
                        h[(i, nu - 1)] = cr;
                        h[(i, nu)] = ci;
                        if x.abs() > z.abs() + q.abs() {
                            h[(i + 1, nu - 1)] = (-ra - w * h[(i, nu - 1)] + q * h[(i, nu)]) / x;
                            h[(i + 1, nu)] = (-sa - w * h[(i, nu)] - q * h[(i, nu - 1)]) / x;
                        } else {
                            let (cr, ci) = cdiv(-r - y * h[(i, nu - 1)], -s - y * h[(i, nu)], z, q);
                            h[(i + 1, nu - 1)] = cr;
                            h[(i + 1, nu)] = ci;
                        }
                    }

                    let t = h[(i, nu - 1)].abs().max(h[(i, nu)].abs());
                    if (eps * t) * t > 1.0 {
                        for j in i..=nu {
                            h[(j, nu - 1)] /= t;
                            h[(j, nu)] /= t;
                        }
                    }
                }
            }
        }
    }

    // back transformation to eigenvectors of the original matrix
    for j in (low..nn).rev() {
        for i in low..=high {
            z = (low..=j.min(high)).map(|k| v[(i, k)] * h[(k, j)]).sum();
            v[(i, j)] = z;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decompose(rows: &[Vec<f64>]) -> Result<EigenDecomposition, LinalgError> {
        eigendecompose_nonsymmetric(&RealMatrix::from_rows(rows), &EigenConfig::default())
    }

    #[test]
    fn diagonal() {
        let dec = decompose(&[vec![3.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(
            dec.eigenvalues,
            vec![Complex64::new(3.0, 0.0), Complex64::new(1.0, 0.0)]
        );
        assert_eq!(dec.basis, ComplexMatrix::identity(2));
    }

    #[test]
    fn chord_cycle_spectrum() {
        let dec = decompose(&[
            vec![0.0, 0.5, 0.5],
            vec![0.0, 0.0, 1.0],
            vec![1.0, 0.0, 0.0],
        ])
        .unwrap();
        // (lambda - 1)(lambda^2 + lambda + 1/2)
        let expected = [
            Complex64::new(1.0, 0.0),
            Complex64::new(-0.5, 0.5),
            Complex64::new(-0.5, -0.5),
        ];
        for (got, want) in dec.eigenvalues.iter().zip(&expected) {
            assert!((got - want).norm() < 1e-12, "{got} vs {want}");
        }
        for j in 0..3 {
            assert!((vec_norm(&dec.basis.column(j)) - 1.0).abs() < 1e-12);
        }
        // conjugate columns
        for i in 0..3 {
            assert!((dec.basis[(i, 1)] - dec.basis[(i, 2)].conj()).norm() < 1e-12);
        }
    }

    #[test]
    fn de_bruijn_is_defective() {
        let p = vec![
            vec![0.5, 0.5, 0.0, 0.0],
            vec![0.0, 0.0, 0.5, 0.5],
            vec![0.5, 0.5, 0.0, 0.0],
            vec![0.0, 0.0, 0.5, 0.5],
        ];
        assert!(matches!(decompose(&p), Err(LinalgError::Defective { .. })));
    }

    #[test]
    fn jordan_block_is_defective() {
        let j = vec![vec![2.0, 1.0], vec![0.0, 2.0]];
        assert!(matches!(decompose(&j), Err(LinalgError::Defective { .. })));
    }

    #[test]
    fn symmetric_repeated_eigenvalue_gets_orthonormal_basis() {
        // (J - I) / 2 on three vertices
        let p = vec![
            vec![0.0, 0.5, 0.5],
            vec![0.5, 0.0, 0.5],
            vec![0.5, 0.5, 0.0],
        ];
        let dec = decompose(&p).unwrap();
        let gram = dec.basis.conj_transpose().matmul(&dec.basis).unwrap();
        assert!(gram.sub(&ComplexMatrix::identity(3)).frobenius_norm() < 1e-12);
        assert!((dec.eigenvalues[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((dec.eigenvalues[1] - Complex64::new(-0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn zero_and_one_by_one() {
        let dec = decompose(&[vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(dec.eigenvalues, vec![Complex64::new(0.0, 0.0); 2]);
        let dec = decompose(&[vec![-4.0]]).unwrap();
        assert_eq!(dec.eigenvalues, vec![Complex64::new(-4.0, 0.0)]);
    }

    #[test]
    fn rotation_has_complex_pair() {
        let dec = decompose(&[vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap();
        assert!((dec.eigenvalues[0] - Complex64::new(0.0, 1.0)).norm() < 1e-14);
        assert!((dec.eigenvalues[1] - Complex64::new(0.0, -1.0)).norm() < 1e-14);
    }
}

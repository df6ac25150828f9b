use super::{invert, vec_norm, LinalgError, Matrix, Scalar};

const REL_TOL: f64 = 1e-11;
const MAX_ITER: usize = 200_000;

/// Result of the power iteration behind [`operator_norm`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormEstimate {
    /// Estimated largest singular value.
    pub value: f64,
    /// Rayleigh quotient `x^H A^H A x` at the final iterate; never exceeds
    /// `sigma_max^2`.
    pub rayleigh: f64,
    /// `||A^H A x - rayleigh x||`: some eigenvalue of `A^H A` lies within
    /// this distance of `rayleigh`.
    pub residual: f64,
    pub iterations: usize,
}

impl NormEstimate {
    /// Certified lower bound on the largest singular value.
    pub fn lower(&self) -> f64 {
        self.rayleigh.sqrt()
    }

    /// Upper end of the residual interval around the Rayleigh quotient.
    pub fn upper(&self) -> f64 {
        (self.rayleigh + self.residual).sqrt()
    }
}

/// Deterministic start vector with no structure that could make it
/// orthogonal to a dominant singular vector of a graph-derived matrix.
fn start_vector<T: Scalar>(n: usize) -> Vec<T> {
    let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
    (0..n)
        .map(|_| {
            // splitmix64
            state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
            z ^= z >> 31;
            T::from_real(0.5 + (z >> 11) as f64 / (1u64 << 53) as f64)
        })
        .collect()
}

/// Power iteration on `A^H A`, stopped once the Rayleigh residual falls
/// below `1e-11` of the Rayleigh quotient.
pub fn operator_norm_estimate<T: Scalar>(a: &Matrix<T>) -> NormEstimate {
    let zero = NormEstimate {
        value: 0.0,
        rayleigh: 0.0,
        residual: 0.0,
        iterations: 0,
    };
    if a.rows() == 0 || a.cols() == 0 || a.as_slice().iter().all(|&x| x == T::zero()) {
        return zero;
    }
    let mut x = start_vector::<T>(a.cols());
    let scale = 1.0 / vec_norm(&x);
    x.iter_mut().for_each(|v| *v = *v * T::from_real(scale));

    let mut estimate = zero;
    let mut previous = 0.0;
    let mut stalled = 0;
    for it in 1..=MAX_ITER {
        let y = a.matvec(&x);
        let rayleigh = y.iter().map(|v| v.modulus().powi(2)).sum::<f64>();
        let z = a.conj_transpose_matvec(&y);
        let residual = z
            .iter()
            .zip(&x)
            .map(|(&zi, &xi)| (zi - xi * T::from_real(rayleigh)).modulus().powi(2))
            .sum::<f64>()
            .sqrt();
        estimate = NormEstimate {
            value: rayleigh.sqrt(),
            rayleigh,
            residual,
            iterations: it,
        };
        if residual <= REL_TOL * rayleigh {
            break;
        }
        // the quotient converges twice as fast as the vector; once it no
        // longer moves the value is as good as it will get
        if (rayleigh - previous).abs() <= 1e-15 * rayleigh {
            stalled += 1;
            if stalled >= 50 {
                break;
            }
        } else {
            stalled = 0;
        }
        previous = rayleigh;
        let nz = vec_norm(&z);
        if nz == 0.0 {
            break;
        }
        x = z.into_iter().map(|v| v * T::from_real(1.0 / nz)).collect();
    }
    estimate
}

/// Largest singular value.
pub fn operator_norm<T: Scalar>(a: &Matrix<T>) -> f64 {
    operator_norm_estimate(a).value
}

/// `||c|| ||c^-1||` in the Euclidean operator norm.
pub fn condition_number<T: Scalar>(c: &Matrix<T>) -> Result<f64, LinalgError> {
    let inv = invert(c)?;
    let (a, b) = condition_number_parts(c, &inv);
    Ok(a * b)
}

pub(crate) fn condition_number_parts<T: Scalar>(c: &Matrix<T>, inv: &Matrix<T>) -> (f64, f64) {
    (operator_norm(c), operator_norm(inv))
}

use super::{LinalgError, Matrix, Scalar};

/// Relative pivot threshold, scaled by `||a||_inf`.
const PIVOT_TOL: f64 = 1e-13;

struct Lu<T> {
    lu: Matrix<T>,
    perm: Vec<usize>,
    swaps: usize,
}

fn factor<T: Scalar>(a: &Matrix<T>) -> Result<Lu<T>, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::DimensionMismatch(format!(
            "LU of a non-square {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let threshold = PIVOT_TOL * a.inf_norm();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut swaps = 0;

    for k in 0..n {
        let (p, pivot) = (k..n)
            .map(|i| (i, lu[(i, k)].modulus()))
            .fold(
                (k, -1.0),
                |best, cur| if cur.1 > best.1 { cur } else { best },
            );
        if pivot <= threshold || pivot == 0.0 {
            return Err(LinalgError::Singular { column: k, pivot });
        }
        if p != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(p, j)];
                lu[(p, j)] = tmp;
            }
            perm.swap(k, p);
            swaps += 1;
        }
        let d = lu[(k, k)];
        for i in k + 1..n {
            let f = lu[(i, k)] / d;
            lu[(i, k)] = f;
            if f == T::zero() {
                continue;
            }
            for j in k + 1..n {
                let u = lu[(k, j)];
                lu[(i, j)] = lu[(i, j)] - f * u;
            }
        }
    }
    Ok(Lu { lu, perm, swaps })
}

impl<T: Scalar> Lu<T> {
    #[allow(clippy::needless_range_loop)]
    fn solve(&self, b: &Matrix<T>) -> Matrix<T> {
        let n = self.lu.rows();
        let mut x = Matrix::zeros(n, b.cols());
        for c in 0..b.cols() {
            let mut y: Vec<T> = self.perm.iter().map(|&p| b[(p, c)]).collect();
            for i in 0..n {
                let mut s = y[i];
                for j in 0..i {
                    s = s - self.lu[(i, j)] * y[j];
                }
                y[i] = s;
            }
            for i in (0..n).rev() {
                let mut s = y[i];
                for j in i + 1..n {
                    s = s - self.lu[(i, j)] * y[j];
                }
                y[i] = s / self.lu[(i, i)];
            }
            x.set_column(c, &y);
        }
        x
    }
}

/// Solves `a x = b` by LU with partial pivoting.
pub fn lu_solve<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>, LinalgError> {
    if b.rows() != a.rows() {
        return Err(LinalgError::DimensionMismatch(format!(
            "right-hand side has {} rows, matrix has {}",
            b.rows(),
            a.rows()
        )));
    }
    Ok(factor(a)?.solve(b))
}

pub fn invert<T: Scalar>(a: &Matrix<T>) -> Result<Matrix<T>, LinalgError> {
    let lu = factor(a)?;
    Ok(lu.solve(&Matrix::identity(a.rows())))
}

/// Determinant from the LU factors; a singular matrix gives zero.
pub fn determinant<T: Scalar>(a: &Matrix<T>) -> Result<T, LinalgError> {
    match factor(a) {
        Ok(lu) => {
            let mut det = (0..a.rows()).fold(T::one(), |acc, i| acc * lu.lu[(i, i)]);
            if lu.swaps % 2 == 1 {
                det = -det;
            }
            Ok(det)
        }
        Err(LinalgError::Singular { .. }) => Ok(T::zero()),
        Err(e) => Err(e),
    }
}

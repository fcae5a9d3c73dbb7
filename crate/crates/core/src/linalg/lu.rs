#![allow(clippy::needless_range_loop)]

use super::matrix::{DenseMatrix, C64};
use super::LinalgError;

/// Pivots whose magnitude falls below `SINGULAR_RTOL · max|A|` are treated as zero.
pub const SINGULAR_RTOL: f64 = 1e-14;

/// LU factorization with partial pivoting, `P A = L U`.
#[derive(Clone, Debug)]
pub struct Lu {
    n: usize,
    // L (unit lower, below diagonal) and U packed together.
    lu: DenseMatrix,
    perm: Vec<usize>,
}

impl Lu {
    /// Factors `a`, failing with `Singular` when a pivot underflows the
    /// relative singularity threshold.
    pub fn factor(a: &DenseMatrix) -> Result<Self, LinalgError> {
        let scale = a.max_abs();
        Self::factor_inner(a, Some(SINGULAR_RTOL * scale))
    }

    /// Factors `a`, replacing (near-)zero pivots with a tiny floor instead of
    /// failing. Used by inverse iteration, where the shifted matrix is
    /// singular to working precision on purpose.
    pub(crate) fn factor_floored(a: &DenseMatrix) -> Result<Self, LinalgError> {
        Self::factor_inner(a, None)
    }

    fn factor_inner(a: &DenseMatrix, threshold: Option<f64>) -> Result<Self, LinalgError> {
        if !a.is_square() {
            return Err(LinalgError::ShapeMismatch(
                "LU needs a square matrix".into(),
            ));
        }
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let floor = f64::EPSILON * a.max_abs().max(f64::MIN_POSITIVE);
        for k in 0..n {
            let (piv, pmag) =
                (k..n)
                    .map(|i| (i, lu[(i, k)].norm()))
                    .fold(
                        (k, -1.0),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );
            match threshold {
                Some(t) if pmag <= t || pmag == 0.0 => {
                    return Err(LinalgError::Singular {
                        pivot: k,
                        magnitude: pmag,
                    })
                }
                _ => {}
            }
            if piv != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(piv, j)];
                    lu[(piv, j)] = tmp;
                }
                perm.swap(k, piv);
            }
            if lu[(k, k)].norm() < floor {
                lu[(k, k)] = C64::new(floor, 0.0);
            }
            let pivot = lu[(k, k)];
            for i in (k + 1)..n {
                let m = lu[(i, k)] / pivot;
                lu[(i, k)] = m;
                if m == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in (k + 1)..n {
                    let ukj = lu[(k, j)];
                    lu[(i, j)] -= m * ukj;
                }
            }
        }
        Ok(Lu { n, lu, perm })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[C64]) -> Result<Vec<C64>, LinalgError> {
        if b.len() != self.n {
            return Err(LinalgError::ShapeMismatch(format!(
                "rhs of length {} for order-{} system",
                b.len(),
                self.n
            )));
        }
        let n = self.n;
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in (i + 1)..n {
                s -= self.lu[(i, j)] * x[j];
            }
            x[i] = s / self.lu[(i, i)];
        }
        Ok(x)
    }

    /// Solves `Aᴴ x = b`.
    pub fn solve_adjoint(&self, b: &[C64]) -> Result<Vec<C64>, LinalgError> {
        if b.len() != self.n {
            return Err(LinalgError::ShapeMismatch("rhs length mismatch".into()));
        }
        let n = self.n;
        // Aᴴ = Uᴴ Lᴴ P, so solve Uᴴ y = b, Lᴴ z = y, x = Pᵀ z.
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for j in 0..i {
                s -= self.lu[(j, i)].conj() * y[j];
            }
            y[i] = s / self.lu[(i, i)].conj();
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for j in (i + 1)..n {
                s -= self.lu[(j, i)].conj() * y[j];
            }
            y[i] = s;
        }
        let mut x = vec![C64::new(0.0, 0.0); n];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = y[k];
        }
        Ok(x)
    }

    pub fn determinant(&self) -> C64 {
        let mut det = C64::new(1.0, 0.0);
        for i in 0..self.n {
            det *= self.lu[(i, i)];
        }
        let mut visited = vec![false; self.n];
        let mut sign = 1.0;
        for start in 0..self.n {
            if visited[start] {
                continue;
            }
            let mut len = 0;
            let mut j = start;
            while !visited[j] {
                visited[j] = true;
                j = self.perm[j];
                len += 1;
            }
            if len % 2 == 0 {
                sign = -sign;
            }
        }
        det * sign
    }
}

/// Solves `A x = b` by LU with partial pivoting.
pub fn solve(a: &DenseMatrix, b: &[C64]) -> Result<Vec<C64>, LinalgError> {
    Lu::factor(a)?.solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::real_vector;

    #[test]
    fn identity_solve_returns_rhs() {
        let b = vec![C64::new(1.0, 2.0), C64::new(-3.0, 0.5), C64::new(0.0, 1.0)];
        let x = solve(&DenseMatrix::identity(3), &b).unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn diagonal_solve() {
        let a = DenseMatrix::from_real_diag(&[2.0, 4.0]);
        let x = solve(&a, &real_vector(&[2.0, 4.0])).unwrap();
        assert!((x[0] - 1.0).norm() < 1e-15 && (x[1] - 1.0).norm() < 1e-15);
    }

    #[test]
    fn singular_matrix_is_reported() {
        let a = DenseMatrix::from_real_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(matches!(
            solve(&a, &real_vector(&[1.0, 1.0])),
            Err(LinalgError::Singular { .. })
        ));
    }

    #[test]
    fn adjoint_solve_and_determinant() {
        let a = DenseMatrix::from_row_major(
            2,
            2,
            vec![
                C64::new(1.0, 1.0),
                C64::new(2.0, 0.0),
                C64::new(0.0, -1.0),
                C64::new(3.0, 0.5),
            ],
        )
        .unwrap();
        let lu = Lu::factor(&a).unwrap();
        let b = vec![C64::new(1.0, 0.0), C64::new(0.0, 2.0)];
        let x = lu.solve_adjoint(&b).unwrap();
        let r = a.adjoint().matvec(&x).unwrap();
        assert!((r[0] - b[0]).norm() < 1e-14 && (r[1] - b[1]).norm() < 1e-14);
        let det = a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)];
        assert!((lu.determinant() - det).norm() < 1e-14);
    }
}

use super::matrix::{DenseMatrix, C64};
use super::LinalgError;

/// Lower-triangular factor `L` with `B = L Lᴴ` (`L Lᵀ` for real `B`).
pub fn cholesky(b: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
    if !b.is_square() {
        return Err(LinalgError::ShapeMismatch(
            "Cholesky needs a square matrix".into(),
        ));
    }
    let n = b.rows();
    let scale = b.max_abs();
    let herm_tol = 1e-12 * scale.max(f64::MIN_POSITIVE);
    for i in 0..n {
        for j in 0..i {
            if (b[(i, j)] - b[(j, i)].conj()).norm() > herm_tol {
                return Err(LinalgError::NotSpd(format!(
                    "matrix is not symmetric at ({i}, {j})"
                )));
            }
        }
    }
    let mut l = DenseMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = b[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > 0.0) || d <= 1e-15 * scale {
            return Err(LinalgError::NotSpd(format!(
                "non-positive pivot {d:e} at column {j}"
            )));
        }
        let ljj = d.sqrt();
        l[(j, j)] = C64::new(ljj, 0.0);
        for i in (j + 1)..n {
            let mut s = b[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / ljj;
        }
    }
    Ok(l)
}

/// Solves `L x = b` for lower-triangular `L`.
pub fn forward_substitute(l: &DenseMatrix, b: &[C64]) -> Vec<C64> {
    let n = l.rows();
    let mut x = b.to_vec();
    for i in 0..n {
        let mut s = x[i];
        for j in 0..i {
            s -= l[(i, j)] * x[j];
        }
        x[i] = s / l[(i, i)];
    }
    x
}

/// Solves `Lᴴ x = b` for lower-triangular `L`.
pub fn backward_substitute_adjoint(l: &DenseMatrix, b: &[C64]) -> Vec<C64> {
    let n = l.rows();
    let mut x = b.to_vec();
    for i in (0..n).rev() {
        let mut s = x[i];
        for j in (i + 1)..n {
            s -= l[(j, i)].conj() * x[j];
        }
        x[i] = s / l[(i, i)].conj();
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reconstruct(l: &DenseMatrix) -> DenseMatrix {
        l.matmul(&l.adjoint()).unwrap()
    }

    #[test]
    fn identity_factor_is_identity() {
        let l = cholesky(&DenseMatrix::identity(3)).unwrap();
        assert_eq!(l, DenseMatrix::identity(3));
    }

    #[test]
    fn diagonal_factor() {
        let l = cholesky(&DenseMatrix::from_real_diag(&[4.0, 9.0])).unwrap();
        assert_eq!(l, DenseMatrix::from_real_diag(&[2.0, 3.0]));
    }

    #[test]
    fn pendulum_mass_matrix_reconstructs() {
        let (ms, mp, ell) = (1.0, 0.5, 2.0);
        let m =
            DenseMatrix::from_real_rows(&[vec![ms + mp, ell * mp], vec![ell * mp, ell * ell * mp]])
                .unwrap();
        let l = cholesky(&m).unwrap();
        assert_eq!(l[(0, 1)], C64::new(0.0, 0.0));
        let err = reconstruct(&l).add_scaled(&m, C64::new(-1.0, 0.0)).unwrap();
        assert!(err.frobenius_norm() <= 1e-14 * m.frobenius_norm());
    }

    #[test]
    fn indefinite_matrix_is_rejected() {
        let m = DenseMatrix::from_real_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(matches!(cholesky(&m), Err(LinalgError::NotSpd(_))));
    }

    #[test]
    fn triangular_solves_invert_factor() {
        let m = DenseMatrix::from_real_rows(&[
            vec![4.0, 1.0, 0.5],
            vec![1.0, 3.0, 0.2],
            vec![0.5, 0.2, 2.0],
        ])
        .unwrap();
        let l = cholesky(&m).unwrap();
        let b = vec![C64::new(1.0, -1.0), C64::new(0.5, 0.0), C64::new(-2.0, 3.0)];
        let y = forward_substitute(&l, &b);
        let x = backward_substitute_adjoint(&l, &y);
        let r = m.matvec(&x).unwrap();
        for (ri, bi) in r.iter().zip(&b) {
            assert!((ri - bi).norm() < 1e-13);
        }
    }
}

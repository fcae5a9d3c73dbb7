use super::matrix::{DenseMatrix, C64};
use super::LinalgError;

/// Full Householder QR of a tall matrix `a` (`m × n`, `m ≥ n`): returns the
/// unitary `Q` (`m × m`) and the `n × n` upper triangle `R` with
/// `a = Q[:, :n] R`.
pub fn householder_qr(a: &DenseMatrix) -> Result<(DenseMatrix, DenseMatrix), LinalgError> {
    let (m, n) = (a.rows(), a.cols());
    if m < n {
        return Err(LinalgError::ShapeMismatch("QR needs rows ≥ cols".into()));
    }
    let mut r = a.clone();
    let mut q = DenseMatrix::identity(m);
    for k in 0..n {
        let mut v: Vec<C64> = (k..m).map(|i| r[(i, k)]).collect();
        let xnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let phase = if v[0].norm() > 0.0 {
            v[0] / v[0].norm()
        } else {
            C64::new(1.0, 0.0)
        };
        v[0] += phase * xnorm;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        for j in 0..n {
            let s: C64 = v
                .iter()
                .enumerate()
                .map(|(i, vi)| vi.conj() * r[(k + i, j)])
                .sum();
            for (i, vi) in v.iter().enumerate() {
                r[(k + i, j)] -= 2.0 * vi * s;
            }
        }
        // Q ← Q (I − 2vvᴴ)
        for i in 0..m {
            let s: C64 = v.iter().enumerate().map(|(j, vj)| q[(i, k + j)] * vj).sum();
            for (j, vj) in v.iter().enumerate() {
                q[(i, k + j)] -= 2.0 * s * vj.conj();
            }
        }
    }
    Ok((q, r.block(0, n, 0, n)))
}

use super::matrix::{DenseMatrix, C64};
use super::schur::eigenvalues;
use super::LinalgError;

/// Evaluates `p(x) = Σ c_k x^k` and `p′(x)` by Horner's rule; coefficients
/// ascending.
pub fn poly_eval(coeffs: &[C64], x: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// Roots of the polynomial with ascending coefficients `coeffs`, from the
/// eigenvalues of its companion matrix, each polished by a few Newton steps.
pub fn companion_roots(coeffs: &[C64]) -> Result<Vec<C64>, LinalgError> {
    let mut trimmed = coeffs.to_vec();
    while trimmed.last().is_some_and(|c| c.norm() == 0.0) {
        trimmed.pop();
    }
    if trimmed.len() < 2 {
        return Err(LinalgError::DegreeZero);
    }
    let deg = trimmed.len() - 1;
    let lead = trimmed[deg];
    let mut comp = DenseMatrix::zeros(deg, deg);
    for j in 0..deg {
        comp[(0, j)] = -trimmed[deg - 1 - j] / lead;
    }
    for i in 1..deg {
        comp[(i, i - 1)] = C64::new(1.0, 0.0);
    }
    let mut roots = eigenvalues(&comp)?;
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = poly_eval(&trimmed, *r);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            let next = *r - step;
            // Accept only steps that do not increase the residual.
            if poly_eval(&trimmed, next).0.norm() <= p.norm() {
                *r = next;
            } else {
                break;
            }
        }
    }
    Ok(roots)
}

//! Eigenvalues of a general complex matrix: Householder reduction to upper
//! Hessenberg form followed by single-shift complex QR with Wilkinson shifts.

use super::matrix::{DenseMatrix, C64};
use super::LinalgError;

const ZERO: C64 = C64::new(0.0, 0.0);

/// Iteration budget per eigenvalue before giving up.
const ITERS_PER_EIGENVALUE: usize = 30;

/// Reduces `a` to upper Hessenberg form by Householder similarity transforms.
pub fn hessenberg(a: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::ShapeMismatch(
            "Hessenberg reduction needs a square matrix".into(),
        ));
    }
    let n = a.rows();
    let mut h = a.clone();
    if n < 3 {
        return Ok(h);
    }
    for k in 0..n - 2 {
        let mut v: Vec<C64> = ((k + 1)..n).map(|i| h[(i, k)]).collect();
        let xnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let phase = if v[0].norm() > 0.0 {
            v[0] / v[0].norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let alpha = -phase * xnorm;
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // H ← (I − 2vvᴴ) H
        for j in 0..n {
            let s: C64 = v
                .iter()
                .enumerate()
                .map(|(i, vi)| vi.conj() * h[(k + 1 + i, j)])
                .sum();
            for (i, vi) in v.iter().enumerate() {
                h[(k + 1 + i, j)] -= 2.0 * vi * s;
            }
        }
        // H ← H (I − 2vvᴴ)
        for i in 0..n {
            let s: C64 = v
                .iter()
                .enumerate()
                .map(|(j, vj)| h[(i, k + 1 + j)] * vj)
                .sum();
            for (j, vj) in v.iter().enumerate() {
                h[(i, k + 1 + j)] -= 2.0 * s * vj.conj();
            }
        }
        for i in (k + 2)..n {
            h[(i, k)] = ZERO;
        }
    }
    Ok(h)
}

/// Eigenvalue of the 2×2 block `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half_tr = (a + d) * 0.5;
    let disc = ((a - d) * 0.5).powi(2) + b * c;
    let root = disc.sqrt();
    let l1 = half_tr + root;
    let l2 = half_tr - root;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Deflation test for `h[k, k−1]`: negligible against `‖H‖`, or against the
/// neighbouring diagonal by the classical and Ahues–Tisseur tests.
fn negligible_subdiagonal(h: &DenseMatrix, k: usize, anorm: f64) -> bool {
    let sub = h[(k, k - 1)].norm();
    if sub <= f64::EPSILON * anorm {
        return true;
    }
    let mut tst = h[(k - 1, k - 1)].norm() + h[(k, k)].norm();
    if tst == 0.0 {
        if k >= 2 {
            tst += h[(k - 1, k - 2)].norm();
        }
        if k + 1 < h.rows() {
            tst += h[(k + 1, k)].norm();
        }
    }
    if tst == 0.0 {
        tst = anorm;
    }
    if sub > f64::EPSILON * tst {
        return false;
    }
    let up = h[(k - 1, k)].norm();
    let ab = sub.max(up);
    let ba = sub.min(up);
    let diff = (h[(k - 1, k - 1)] - h[(k, k)]).norm();
    let aa = h[(k, k)].norm().max(diff);
    let bb = h[(k, k)].norm().min(diff);
    let s = aa + ab;
    ba * (ab / s) <= (f64::MIN_POSITIVE * h.rows() as f64).max(f64::EPSILON * (bb * (aa / s)))
}

/// Both eigenvalues of `[[a, b], [c, d]]`, the second by the product of
/// roots to avoid cancellation.
fn eigenvalues_2x2(a: C64, b: C64, c: C64, d: C64) -> (C64, C64) {
    let half_tr = (a + d) * 0.5;
    let root = (((a - d) * 0.5).powi(2) + b * c).sqrt();
    let l1 = if (half_tr + root).norm() >= (half_tr - root).norm() {
        half_tr + root
    } else {
        half_tr - root
    };
    let det = a * d - b * c;
    let l2 = if l1.norm() > 0.0 {
        det / l1
    } else {
        half_tr - (l1 - half_tr)
    };
    (l1, l2)
}

/// All eigenvalues of a square complex matrix, in the order they deflate.
pub fn eigenvalues(a: &DenseMatrix) -> Result<Vec<C64>, LinalgError> {
    let mut h = hessenberg(a)?;
    let n = h.rows();
    let mut eig = vec![ZERO; n];
    if n == 0 {
        return Ok(eig);
    }
    let anorm = h.max_abs().max(f64::MIN_POSITIVE);
    let budget = ITERS_PER_EIGENVALUE * n.max(1);
    let mut total = 0usize;
    let mut iter = 0usize;
    let mut hi = n - 1;
    loop {
        if hi == 0 {
            eig[0] = h[(0, 0)];
            break;
        }
        // Locate the start of the unreduced trailing block.
        let mut lo = hi;
        while lo > 0 {
            if negligible_subdiagonal(&h, lo, anorm) {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig[hi] = h[(hi, hi)];
            hi -= 1;
            iter = 0;
            continue;
        }
        if lo + 1 == hi {
            let (l1, l2) = eigenvalues_2x2(h[(lo, lo)], h[(lo, hi)], h[(hi, lo)], h[(hi, hi)]);
            eig[lo] = l1;
            eig[hi] = l2;
            if lo == 0 {
                break;
            }
            hi = lo - 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > budget {
            return Err(LinalgError::NoConvergence { iterations: total });
        }
        let mu = if iter.is_multiple_of(10) {
            // Exceptional shift to break cycles.
            h[(hi, hi)] + C64::new(0.75 * h[(hi, hi - 1)].norm(), 0.25 * h[(hi, hi - 1)].norm())
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };
        for k in lo..=hi {
            h[(k, k)] -= mu;
        }
        let mut rots: Vec<(f64, C64)> = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let a = h[(k, k)];
            let b = h[(k + 1, k)];
            let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
            let (c, s) = if r == 0.0 {
                (1.0, ZERO)
            } else if a.norm() == 0.0 {
                (0.0, C64::new(1.0, 0.0))
            } else {
                (a.norm() / r, (a / a.norm()) * b.conj() / r)
            };
            for j in k..=hi {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = x * c + s * y;
                h[(k + 1, j)] = -s.conj() * x + y * c;
            }
            rots.push((c, s));
        }
        for (idx, &(c, s)) in rots.iter().enumerate() {
            let k = lo + idx;
            let last = (k + 2).min(hi);
            for i in lo..=last {
                let x = h[(i, k)];
                let y = h[(i, k + 1)];
                h[(i, k)] = x * c + y * s.conj();
                h[(i, k + 1)] = -s * x + y * c;
            }
        }
        for k in lo..=hi {
            h[(k, k)] += mu;
        }
    }
    Ok(eig)
}

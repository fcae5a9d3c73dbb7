use num_complex::Complex64 as C64;

use super::ModelError;
use crate::charfun::RankOneSystem;
use crate::linalg::{householder_qr, DenseMatrix, LinalgError};

/// Constrained system `M₀ u̇ = (K₀ + ε f(t) a bᵀ) u + Cᵀp`, `C u = 0`.
#[derive(Clone, Debug)]
pub struct KktSystem {
    pub m0: DenseMatrix,
    pub k0: DenseMatrix,
    pub a: Vec<C64>,
    pub b: Vec<C64>,
    pub c: DenseMatrix,
}

/// Null-space reduction of a [`KktSystem`].
#[derive(Clone, Debug)]
pub struct KktReduction {
    /// Orthonormal basis of the null space of `C`.
    pub p: DenseMatrix,
    /// Orthonormal basis of the range of `Cᵀ`.
    pub q: DenseMatrix,
    /// `(PᵀM₀P, PᵀK₀P, Pᵀa, Pᵀb)`.
    pub system: RankOneSystem,
}

impl KktSystem {
    fn check(&self) -> Result<(), ModelError> {
        let n = self.m0.rows();
        let ok = self.m0.is_square()
            && self.k0.rows() == n
            && self.k0.cols() == n
            && self.a.len() == n
            && self.b.len() == n
            && self.c.cols() == n
            && self.c.rows() < n;
        if !ok {
            return Err(ModelError::Linalg(LinalgError::ShapeMismatch(format!(
                "KKT blocks: M0 {}×{}, K0 {}×{}, a {}, b {}, C {}×{} (C needs fewer rows than columns)",
                self.m0.rows(),
                self.m0.cols(),
                self.k0.rows(),
                self.k0.cols(),
                self.a.len(),
                self.b.len(),
                self.c.rows(),
                self.c.cols()
            ))));
        }
        Ok(())
    }

    /// The full singular pencil `B₀ = [[M₀, 0], [0, 0]]`,
    /// `A₀ = [[K₀, Cᵀ], [C, 0]]` and forcing vectors `(a, 0)`, `(b, 0)`.
    pub fn full_pencil(
        &self,
    ) -> Result<(DenseMatrix, DenseMatrix, Vec<C64>, Vec<C64>), ModelError> {
        self.check()?;
        let n = self.m0.rows();
        let m = self.c.rows();
        let mut b0 = DenseMatrix::zeros(n + m, n + m);
        let mut a0 = DenseMatrix::zeros(n + m, n + m);
        for i in 0..n {
            for j in 0..n {
                b0[(i, j)] = self.m0[(i, j)];
                a0[(i, j)] = self.k0[(i, j)];
            }
        }
        for r in 0..m {
            for j in 0..n {
                a0[(n + r, j)] = self.c[(r, j)];
                a0[(j, n + r)] = self.c[(r, j)];
            }
        }
        let pad = |x: &[C64]| {
            let mut v = x.to_vec();
            v.resize(n + m, C64::new(0.0, 0.0));
            v
        };
        Ok((b0, a0, pad(&self.a), pad(&self.b)))
    }
}

/// `Cᵀ = QR`; `P` spans the orthogonal complement of `Q`, and the reduced
/// system is `(PᵀM₀P) ż = (PᵀK₀P + ε f(t)(Pᵀa)(bᵀP)) z`.
pub fn kkt_reduce(k: &KktSystem) -> Result<KktReduction, ModelError> {
    k.check()?;
    let n = k.m0.rows();
    let m = k.c.rows();
    let (qfull, r) = householder_qr(&k.c.transpose())?;
    let rmax = (0..m).map(|i| r[(i, i)].norm()).fold(0.0, f64::max);
    let rank = (0..m).filter(|&i| r[(i, i)].norm() > 1e-12 * rmax).count();
    if rank < m || rmax == 0.0 {
        return Err(ModelError::Linalg(LinalgError::RankDeficientConstraint {
            rank,
            rows: m,
        }));
    }
    let q = qfull.block(0, n, 0, m);
    let p = qfull.block(0, n, m, n);
    let pt = p.transpose();
    let mt = pt.matmul(&k.m0)?.matmul(&p)?;
    let kt = pt.matmul(&k.k0)?.matmul(&p)?;
    let u = pt.matvec(&k.a)?;
    let v = pt.matvec(&k.b)?;
    // PᵀM₀P is symmetric in exact arithmetic; remove rounding asymmetry.
    let msym = mt
        .add_scaled(&mt.adjoint(), C64::new(1.0, 0.0))?
        .scale(C64::new(0.5, 0.0));
    let system = RankOneSystem::new(msym, kt, u, v)?;
    Ok(KktReduction { p, q, system })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn single_constraint_picks_sub_block() {
        let k = KktSystem {
            m0: DenseMatrix::from_real_diag(&[2.0, 3.0]),
            k0: DenseMatrix::from_real_rows(&[vec![-1.0, 0.5], vec![0.25, -4.0]]).unwrap(),
            a: vec![r(1.0), r(2.0)],
            b: vec![r(0.5), r(1.0)],
            c: DenseMatrix::from_real_rows(&[vec![1.0, 0.0]]).unwrap(),
        };
        let red = kkt_reduce(&k).unwrap();
        let s = &red.system;
        assert!((s.b0()[(0, 0)] - 3.0).norm() < 1e-14);
        assert!((s.a0()[(0, 0)] + 4.0).norm() < 1e-14);
        assert!((s.u()[0] * s.v()[0] - 2.0).norm() < 1e-14);
    }

    #[test]
    fn rank_deficient_constraint() {
        let k = KktSystem {
            m0: DenseMatrix::identity(3),
            k0: DenseMatrix::identity(3),
            a: vec![r(1.0); 3],
            b: vec![r(1.0); 3],
            c: DenseMatrix::from_real_rows(&[vec![1.0, 2.0, 0.0], vec![2.0, 4.0, 0.0]]).unwrap(),
        };
        assert!(matches!(
            kkt_reduce(&k),
            Err(ModelError::Linalg(LinalgError::RankDeficientConstraint {
                rank: 1,
                rows: 2
            }))
        ));
    }
}

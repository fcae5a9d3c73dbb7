use std::cmp::Ordering;

use super::cholesky::{backward_substitute_adjoint, cholesky, forward_substitute};
use super::lu::Lu;
use super::matrix::{dot_conj, norm2, DenseMatrix, C64};
use super::schur::eigenvalues;
use super::LinalgError;

/// Tuning for [`eig_general`].
#[derive(Clone, Copy, Debug)]
pub struct EigOptions {
    /// Relative tolerance used for repeated-eigenvalue detection.
    pub tol: f64,
    /// Relative shift perturbation for inverse iteration.
    pub shift_perturbation: f64,
    /// Inverse iteration sweeps per eigenvector.
    pub inverse_iterations: usize,
    /// `|⟨ψ, φ⟩_B| / (‖ψ‖_B ‖φ‖_B)` below this marks a defective pencil.
    pub defect_threshold: f64,
}

impl Default for EigOptions {
    fn default() -> Self {
        EigOptions {
            tol: 1e-10,
            shift_perturbation: 1e-10,
            inverse_iterations: 2,
            defect_threshold: 1e-8,
        }
    }
}

/// Generalized eigenvalues `σ_k`, right eigenvectors `φ_k` and adjoint
/// eigenvectors `ψ_k` of a pencil `(A₀, B₀)`, scaled so that
/// `⟨ψ_i, φ_j⟩_B = δ_ij` with `⟨x, y⟩_B = xᴴ B₀ y`.
#[derive(Clone, Debug)]
pub struct EigenData {
    pub sigma: Vec<C64>,
    pub phi: Vec<Vec<C64>>,
    pub psi: Vec<Vec<C64>>,
}

impl EigenData {
    pub fn order(&self) -> usize {
        self.sigma.len()
    }

    /// Largest relative residuals `(right, adjoint)`:
    /// `‖A₀φ − σB₀φ‖ / (‖A₀‖‖φ‖)` and `‖A₀ᴴψ − σ̄B₀ψ‖ / (‖A₀‖‖ψ‖)`.
    pub fn residuals(&self, a0: &DenseMatrix, b0: &DenseMatrix) -> Result<(f64, f64), LinalgError> {
        let an = a0.frobenius_norm().max(f64::MIN_POSITIVE);
        let a0h = a0.adjoint();
        let mut right: f64 = 0.0;
        let mut left: f64 = 0.0;
        for k in 0..self.order() {
            let s = self.sigma[k];
            let ap = a0.matvec(&self.phi[k])?;
            let bp = b0.matvec(&self.phi[k])?;
            let r: Vec<C64> = ap.iter().zip(&bp).map(|(x, y)| x - s * y).collect();
            right = right.max(norm2(&r) / (an * norm2(&self.phi[k])));
            let ap = a0h.matvec(&self.psi[k])?;
            let bp = b0.matvec(&self.psi[k])?;
            let r: Vec<C64> = ap.iter().zip(&bp).map(|(x, y)| x - s.conj() * y).collect();
            left = left.max(norm2(&r) / (an * norm2(&self.psi[k])));
        }
        Ok((right, left))
    }

    /// `max_ij |⟨ψ_i, φ_j⟩_B − δ_ij|`.
    pub fn biorthonormality_error(&self, b0: &DenseMatrix) -> Result<f64, LinalgError> {
        let mut worst: f64 = 0.0;
        let bphi: Vec<Vec<C64>> = self
            .phi
            .iter()
            .map(|p| b0.matvec(p))
            .collect::<Result<_, _>>()?;
        for i in 0..self.order() {
            for (j, bp) in bphi.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot_conj(&self.psi[i], bp) - want).norm());
            }
        }
        Ok(worst)
    }

    /// Applies `Σ_k σ_k φ_k ⟨ψ_k, x⟩_B`, which equals `B₀⁻¹A₀ x` for a
    /// diagonalizable pencil.
    pub fn apply_spectral(&self, b0: &DenseMatrix, x: &[C64]) -> Result<Vec<C64>, LinalgError> {
        let bx = b0.matvec(x)?;
        let mut out = vec![C64::new(0.0, 0.0); x.len()];
        for k in 0..self.order() {
            let c = self.sigma[k] * dot_conj(&self.psi[k], &bx);
            for (o, p) in out.iter_mut().zip(&self.phi[k]) {
                *o += c * p;
            }
        }
        Ok(out)
    }
}

/// Deterministic ordering: descending real part, ties by descending imaginary
/// part. Real parts equal to ~12 significant digits of the spectral scale
/// count as ties so that conjugate pairs stay adjacent.
pub fn sort_descending_real(sigmas: &mut [C64]) {
    let scale = sigmas
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let key = |z: &C64| (z.re / scale * 1e12).round();
    sigmas.sort_by(|a, b| {
        key(b)
            .partial_cmp(&key(a))
            .unwrap_or(Ordering::Equal)
            .then(b.im.partial_cmp(&a.im).unwrap_or(Ordering::Equal))
    });
}

fn inverse_iteration(
    c: &DenseMatrix,
    sigma: C64,
    opts: &EigOptions,
) -> Result<Vec<C64>, LinalgError> {
    let n = c.rows();
    let cscale = c.max_abs();
    let delta = opts.shift_perturbation * sigma.norm().max(1e-3 * cscale).max(f64::MIN_POSITIVE);
    let shift = sigma + delta;
    let shifted = c.add_scaled(&DenseMatrix::identity(n), -shift)?;
    let lu = Lu::factor_floored(&shifted)?;
    let mut x: Vec<C64> = (0..n)
        .map(|j| C64::new(1.0 + 0.1 * j as f64 / n as f64, 0.3 / (j as f64 + 2.0)))
        .collect();
    for _ in 0..opts.inverse_iterations.max(1) {
        let y = lu.solve(&x)?;
        let nrm = norm2(&y);
        if !nrm.is_finite() || nrm == 0.0 {
            return Err(LinalgError::NoConvergence {
                iterations: opts.inverse_iterations,
            });
        }
        x = y.into_iter().map(|z| z / nrm).collect();
    }
    Ok(x)
}

/// Solves the generalized eigenproblem `A₀ φ = σ B₀ φ`, `A₀ᴴ ψ = σ̄ B₀ ψ` for
/// Hermitian positive definite `B₀` by reduction to `C = L⁻¹A₀L⁻ᴴ` with
/// `B₀ = LLᴴ`.
pub fn eig_general(a0: &DenseMatrix, b0: &DenseMatrix) -> Result<EigenData, LinalgError> {
    eig_general_with(a0, b0, &EigOptions::default())
}

pub fn eig_general_with(
    a0: &DenseMatrix,
    b0: &DenseMatrix,
    opts: &EigOptions,
) -> Result<EigenData, LinalgError> {
    if !a0.is_square() || !b0.is_square() || a0.rows() != b0.rows() {
        return Err(LinalgError::ShapeMismatch(
            "pencil matrices must be square and of equal order".into(),
        ));
    }
    let n = a0.rows();
    let l = cholesky(b0)?;
    // X = L⁻¹ A₀ column by column, then C = X L⁻ᴴ = (L⁻¹ Xᴴ)ᴴ.
    let mut x = DenseMatrix::zeros(n, n);
    for j in 0..n {
        let col = forward_substitute(&l, &a0.column(j));
        for i in 0..n {
            x[(i, j)] = col[i];
        }
    }
    let xh = x.adjoint();
    let mut ch = DenseMatrix::zeros(n, n);
    for j in 0..n {
        let col = forward_substitute(&l, &xh.column(j));
        for i in 0..n {
            ch[(i, j)] = col[i];
        }
    }
    let c = ch.adjoint();

    let mut sigma = eigenvalues(&c)?;
    sort_descending_real(&mut sigma);

    let scale = sigma
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
        .max(c.max_abs());
    for i in 0..n {
        for j in (i + 1)..n {
            if (sigma[i] - sigma[j]).norm() <= opts.tol * scale.max(f64::MIN_POSITIVE) {
                return Err(LinalgError::DefectivePencil(format!(
                    "repeated eigenvalue {} at positions {i} and {j}",
                    sigma[i]
                )));
            }
        }
    }

    let mut phi = Vec::with_capacity(n);
    let mut psi = Vec::with_capacity(n);
    for &s in &sigma {
        let q = inverse_iteration(&c, s, opts)?;
        let p = inverse_iteration(&ch, s.conj(), opts)?;
        let f = backward_substitute_adjoint(&l, &q);
        let mut g = backward_substitute_adjoint(&l, &p);
        let gn = norm2(&g);
        for z in g.iter_mut() {
            *z /= gn;
        }
        // ⟨ψ, φ⟩_B = ψᴴ B₀ φ
        let bf = b0.matvec(&f)?;
        let d = dot_conj(&g, &bf);
        let bg = b0.matvec(&g)?;
        let nb = (dot_conj(&g, &bg).re.max(0.0) * dot_conj(&f, &bf).re.max(0.0)).sqrt();
        if d.norm() < opts.defect_threshold * nb {
            return Err(LinalgError::DefectivePencil(format!(
                "adjoint and right eigenvectors nearly B-orthogonal at σ = {s}"
            )));
        }
        phi.push(f.into_iter().map(|z| z / d).collect());
        psi.push(g);
    }
    Ok(EigenData { sigma, phi, psi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::real_vector;

    #[test]
    fn diagonal_pencil_identity_mass() {
        let a0 = DenseMatrix::from_real_diag(&[-1.0, -2.0]);
        let e = eig_general(&a0, &DenseMatrix::identity(2)).unwrap();
        assert!((e.sigma[0] + 1.0).norm() < 1e-14);
        assert!((e.sigma[1] + 2.0).norm() < 1e-14);
        // φ_k and ψ_k are multiples of e_k; with ψ unit norm and the
        // normalization they coincide up to a phase.
        for k in 0..2 {
            let other = 1 - k;
            assert!(e.phi[k][other].norm() < 1e-12);
            assert!(e.psi[k][other].norm() < 1e-12);
            assert!((e.psi[k][k].norm() - 1.0).abs() < 1e-14);
            assert!(((e.psi[k][k].conj() * e.phi[k][k]) - 1.0).norm() < 1e-14);
        }
    }

    #[test]
    fn diagonal_pencil_with_mass() {
        let a0 = DenseMatrix::from_real_diag(&[-2.0, -6.0]);
        let b0 = DenseMatrix::from_real_diag(&[2.0, 3.0]);
        let e = eig_general(&a0, &b0).unwrap();
        assert!((e.sigma[0] + 1.0).norm() < 1e-14);
        assert!((e.sigma[1] + 2.0).norm() < 1e-14);
        assert!(e.biorthonormality_error(&b0).unwrap() < 1e-14);
    }

    #[test]
    fn repeated_eigenvalue_is_an_error() {
        let a0 = DenseMatrix::from_real_diag(&[-1.0, -1.0]);
        let r = eig_general(&a0, &DenseMatrix::identity(2));
        assert!(matches!(r, Err(LinalgError::DefectivePencil(_))));
    }

    #[test]
    fn damped_oscillator_conjugate_pair() {
        // x'' + 0.2x' + 4x = 0 as a first-order pencil with mass diag(1, 2).
        let b0 = DenseMatrix::from_real_diag(&[1.0, 2.0]);
        let a0 = DenseMatrix::from_real_rows(&[vec![0.0, 1.0], vec![-8.0, -0.4]]).unwrap();
        let e = eig_general(&a0, &b0).unwrap();
        let want = C64::new(-0.1, (4.0f64 - 0.01).sqrt());
        assert!((e.sigma[0] - want).norm() < 1e-13);
        assert!((e.sigma[1] - want.conj()).norm() < 1e-13);
        let (r, l) = e.residuals(&a0, &b0).unwrap();
        assert!(r < 1e-13 && l < 1e-13);
        let x = real_vector(&[0.3, -1.1]);
        let y = e.apply_spectral(&b0, &x).unwrap();
        let lu = Lu::factor(&b0).unwrap();
        let want = lu.solve(&a0.matvec(&x).unwrap()).unwrap();
        for (a, b) in y.iter().zip(&want) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn ordering_is_descending_real_then_imag() {
        let mut s = vec![
            C64::new(-3.0, 0.0),
            C64::new(-1.0, -2.0),
            C64::new(-1.0, 2.0),
            C64::new(-0.5, 0.0),
        ];
        sort_descending_real(&mut s);
        assert_eq!(
            s,
            vec![
                C64::new(-0.5, 0.0),
                C64::new(-1.0, 2.0),
                C64::new(-1.0, -2.0),
                C64::new(-3.0, 0.0)
            ]
        );
    }
}

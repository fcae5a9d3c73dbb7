//! Scalar characteristic functions `f_A(σ)` whose zeros are the eigenvalues
//! of an unforced system and for which forcing `ε u vᵀ` moves the zeros to
//! `f_A(σ) + ε = 0`.

mod rank_one;
mod roots;

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::LinalgError;

pub use rank_one::{MatrixCharFun, RankOneSystem};
pub use roots::{argument_principle_count, find_roots, NewtonOptions, RootSearch};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CharFunError {
    #[error("σ = {sigma} is numerically an eigenvalue; the resolvent is singular")]
    NearEigenvalue { sigma: C64 },
    #[error("f_A has a pole at σ = {sigma}")]
    AtPole { sigma: C64 },
    #[error("f_A′ vanishes at σ = {sigma} (|f_A′| = {derivative:e}); the mode is degenerate")]
    DegenerateMode { sigma: C64, derivative: f64 },
    #[error("found only {found} of {wanted} roots before running out of seeds")]
    SeedExhausted { found: usize, wanted: usize },
    #[error("roots {a} and {b} coincide; simple zeros are required")]
    RootCollision { a: C64, b: C64 },
    #[error("σ = {sigma} lies on the branch cut of the square root")]
    BranchCut { sigma: C64 },
    #[error("eigenvalue enumeration is not available for {0}")]
    NotEnumerable(Provenance),
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Where a characteristic function comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Matrix,
    PendulumClosedForm,
    FaradayFinite,
    FaradayInfinite,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Provenance::Matrix => "matrix",
            Provenance::PendulumClosedForm => "pendulum-closed-form",
            Provenance::FaradayFinite => "faraday-finite",
            Provenance::FaradayInfinite => "faraday-infinite",
        };
        f.write_str(s)
    }
}

/// An evaluable characteristic function with derivative and root
/// enumeration.
pub trait CharacteristicFunction: Send + Sync {
    fn value(&self, sigma: C64) -> Result<C64, CharFunError>;

    fn derivative(&self, sigma: C64) -> Result<C64, CharFunError>;

    /// `f_A′` at a zero of `f_A`. Backends override this where the generic
    /// formula is ill-conditioned on the spectrum.
    fn derivative_at_root(&self, sigma: C64) -> Result<C64, CharFunError> {
        self.derivative(sigma)
    }

    /// Newton correction `g/g′` for some `g` with the same zeros as `f_A`
    /// near `sigma`. Defaults to `f_A/f_A′`.
    fn newton_ratio(&self, sigma: C64) -> Result<C64, CharFunError> {
        Ok(self.value(sigma)? / self.derivative(sigma)?)
    }

    /// The first `count` eigenvalues in this backend's mode order.
    fn eigenvalues(&self, count: usize) -> Result<Vec<C64>, CharFunError>;

    /// Number of eigenvalues available, `None` if unbounded.
    fn spectrum_size(&self) -> Option<usize>;

    fn provenance(&self) -> Provenance;
}

/// `f_p(σ) = −f_A(σ) f_A′(σ_p)`.
pub fn fp_from_fa(
    cf: &dyn CharacteristicFunction,
    sigma_p: C64,
    sigma: C64,
) -> Result<C64, CharFunError> {
    let d = nondegenerate_derivative(cf, sigma_p)?;
    Ok(-cf.value(sigma)? * d)
}

/// `f_A′(σ_p)` at a root, rejecting degenerate (multiple) roots. A root is
/// degenerate when `|f_A′(σ_p)| h` is negligible against `|f_A(σ_p + h)|`.
pub fn nondegenerate_derivative(
    cf: &dyn CharacteristicFunction,
    sigma_p: C64,
) -> Result<C64, CharFunError> {
    let d = cf.derivative_at_root(sigma_p)?;
    let h = 1e-3 * (1.0 + sigma_p.norm());
    let probe = match cf.value(sigma_p + C64::new(0.0, h)) {
        Ok(v) => v.norm(),
        Err(_) => 0.0,
    };
    if !d.is_finite() || d.norm() == 0.0 || d.norm() * h < 1e-12 * probe {
        return Err(CharFunError::DegenerateMode {
            sigma: sigma_p,
            derivative: d.norm(),
        });
    }
    Ok(d)
}

/// Residue of `1/f` at `center` by the trapezoid rule on a circle of radius
/// `radius` with `points` nodes. At a simple zero of `f` this is
/// `1/f′(center)`.
pub(crate) fn reciprocal_residue<F>(
    inv: F,
    center: C64,
    radius: f64,
    points: usize,
) -> Result<C64, CharFunError>
where
    F: Fn(C64) -> Result<C64, CharFunError>,
{
    let mut s = C64::new(0.0, 0.0);
    for j in 0..points {
        let w = C64::from_polar(radius, 2.0 * PI * (j as f64 + 0.5) / points as f64);
        s += inv(center + w)? * w;
    }
    Ok(s / points as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{DenseMatrix, C64 as Z};

    fn diag_system() -> MatrixCharFun {
        let a0 = DenseMatrix::from_real_diag(&[-1.0, -2.0]);
        let e1 = vec![Z::new(1.0, 0.0), Z::new(0.0, 0.0)];
        MatrixCharFun::new(
            RankOneSystem::new(DenseMatrix::identity(2), a0, e1.clone(), e1).unwrap(),
        )
    }

    #[test]
    fn fp_on_diagonal_example() {
        let cf = diag_system();
        let s = Z::new(0.3, -0.7);
        let fp = fp_from_fa(&cf, Z::new(-1.0, 0.0), s).unwrap();
        assert!((fp + (s + 1.0)).norm() < 1e-12);
    }

    #[test]
    fn fp_vanishes_at_eigenvalues() {
        let cf = diag_system();
        let fp = fp_from_fa(&cf, Z::new(-1.0, 0.0), Z::new(-1.0 + 1e-9, 0.0)).unwrap();
        assert!(fp.norm() < 1e-8);
    }

    #[test]
    fn residue_of_reciprocal() {
        let r = reciprocal_residue(
            |z| Ok(1.0 / (3.0 * (z - 2.0) + (z - 2.0).powi(2))),
            Z::new(2.0, 0.0),
            1e-3,
            16,
        )
        .unwrap();
        assert!((r - 1.0 / 3.0).norm() < 1e-13);
    }
}

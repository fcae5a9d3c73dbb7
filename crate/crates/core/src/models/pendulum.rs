use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::ModelError;
use crate::charfun::{CharFunError, CharacteristicFunction, Provenance, RankOneSystem};
use crate::linalg::{companion_roots, poly_eval, sort_descending_real, DenseMatrix};

/// Pendulum hanging from a spring-mounted support, in cgs units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PendulumParams {
    /// Support mass (g).
    pub m_s: f64,
    /// Bob mass (g).
    pub m_p: f64,
    /// Shaft length (cm).
    pub ell: f64,
    /// Support spring constant (g/s²).
    pub k_s: f64,
    /// Support damping (g/s).
    pub gamma_s: f64,
    /// Pendulum damping (g·cm²/s).
    pub gamma_p: f64,
    /// Steady gravity (cm/s²).
    pub g0: f64,
}

impl Default for PendulumParams {
    fn default() -> Self {
        PendulumParams {
            m_s: 10.0,
            m_p: 1.0,
            ell: 5.0,
            k_s: 4000.0,
            gamma_s: 2.0,
            gamma_p: 50.0,
            g0: 981.0,
        }
    }
}

impl PendulumParams {
    pub fn validate(&self) -> Result<(), ModelError> {
        for (name, value) in [
            ("m_s", self.m_s),
            ("m_p", self.m_p),
            ("ell", self.ell),
            ("k_s", self.k_s),
            ("gamma_s", self.gamma_s),
            ("gamma_p", self.gamma_p),
            ("g0", self.g0),
        ] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(ModelError::InvalidParameter { name, value });
            }
        }
        Ok(())
    }

    /// `M = [[m_S + m_P, ℓm_P], [ℓm_P, ℓ²m_P]]`.
    pub fn mass(&self) -> DenseMatrix {
        let l = self.ell;
        DenseMatrix::from_real_rows(&[
            vec![self.m_s + self.m_p, l * self.m_p],
            vec![l * self.m_p, l * l * self.m_p],
        ])
        .expect("2×2")
    }

    pub fn damping(&self) -> DenseMatrix {
        DenseMatrix::from_real_diag(&[self.gamma_s, self.gamma_p])
    }

    /// `K₀ = diag(K_S, g₀ℓ)`.
    pub fn stiffness(&self) -> DenseMatrix {
        DenseMatrix::from_real_diag(&[self.k_s, self.g0 * self.ell])
    }

    /// `K₁ = diag(0, ℓ)`.
    pub fn forcing_stiffness(&self) -> DenseMatrix {
        DenseMatrix::from_real_diag(&[0.0, self.ell])
    }

    /// Ascending coefficients of `h₁(σ) = σ²ℓ(m_P + m_S) + σγ_Sℓ + K_Sℓ`.
    pub fn h1_coeffs(&self) -> [f64; 3] {
        let l = self.ell;
        [self.k_s * l, self.gamma_s * l, l * (self.m_p + self.m_s)]
    }

    /// Ascending coefficients of `h₀(σ) = det(σ²M + σC + K₀)`.
    pub fn h0_coeffs(&self) -> [f64; 5] {
        let (ms, mp, l) = (self.m_s, self.m_p, self.ell);
        let h1 = self.h1_coeffs();
        [
            self.g0 * h1[0],
            self.gamma_p * self.k_s + self.g0 * h1[1],
            self.gamma_s * self.gamma_p + self.k_s * l * l * mp + self.g0 * h1[2],
            self.gamma_p * (mp + ms) + l * l * self.gamma_s * mp,
            l * l * mp * ms,
        ]
    }
}

/// First-order form `B₀ = blockdiag(I, M)`, `A₀ = [[0, I], [−K₀, −C]]`,
/// `u = (0, 0, 0, −ℓ)`, `v = (0, 1, 0, 0)`.
pub fn pendulum_system(p: &PendulumParams) -> Result<RankOneSystem, ModelError> {
    p.validate()?;
    let (m, c, k) = (p.mass(), p.damping(), p.stiffness());
    let mut b0 = DenseMatrix::identity(4);
    let mut a0 = DenseMatrix::zeros(4, 4);
    for i in 0..2 {
        a0[(i, i + 2)] = C64::new(1.0, 0.0);
        for j in 0..2 {
            b0[(i + 2, j + 2)] = m[(i, j)];
            a0[(i + 2, j)] = -k[(i, j)];
            a0[(i + 2, j + 2)] = -c[(i, j)];
        }
    }
    let r = |x: f64| C64::new(x, 0.0);
    let u = vec![r(0.0), r(0.0), r(0.0), r(-p.ell)];
    let v = vec![r(0.0), r(1.0), r(0.0), r(0.0)];
    Ok(RankOneSystem::new(b0, a0, u, v)?)
}

/// Closed-form `f_A = h₀/h₁` of the pendulum.
#[derive(Clone, Debug)]
pub struct PendulumCharFun {
    h0: Vec<C64>,
    h1: Vec<C64>,
}

impl PendulumCharFun {
    pub fn new(p: &PendulumParams) -> Result<Self, ModelError> {
        p.validate()?;
        let c = |v: &[f64]| v.iter().map(|&x| C64::new(x, 0.0)).collect();
        Ok(PendulumCharFun {
            h0: c(&p.h0_coeffs()),
            h1: c(&p.h1_coeffs()),
        })
    }

    pub fn h0(&self, sigma: C64) -> C64 {
        poly_eval(&self.h0, sigma).0
    }

    pub fn h1(&self, sigma: C64) -> C64 {
        poly_eval(&self.h1, sigma).0
    }

    /// Roots of `h₁`, the poles of `f_A`.
    pub fn poles(&self) -> Result<Vec<C64>, CharFunError> {
        Ok(companion_roots(&self.h1)?)
    }
}

impl CharacteristicFunction for PendulumCharFun {
    fn value(&self, sigma: C64) -> Result<C64, CharFunError> {
        let d = self.h1(sigma);
        if d.norm() == 0.0 {
            return Err(CharFunError::AtPole { sigma });
        }
        Ok(self.h0(sigma) / d)
    }

    fn derivative(&self, sigma: C64) -> Result<C64, CharFunError> {
        let (n, dn) = poly_eval(&self.h0, sigma);
        let (d, dd) = poly_eval(&self.h1, sigma);
        if d.norm() == 0.0 {
            return Err(CharFunError::AtPole { sigma });
        }
        Ok((dn * d - n * dd) / (d * d))
    }

    fn derivative_at_root(&self, sigma: C64) -> Result<C64, CharFunError> {
        let d = self.h1(sigma);
        if d.norm() == 0.0 {
            return Err(CharFunError::AtPole { sigma });
        }
        Ok(poly_eval(&self.h0, sigma).1 / d)
    }

    fn newton_ratio(&self, sigma: C64) -> Result<C64, CharFunError> {
        let (n, dn) = poly_eval(&self.h0, sigma);
        Ok(n / dn)
    }

    fn eigenvalues(&self, count: usize) -> Result<Vec<C64>, CharFunError> {
        let mut roots = companion_roots(&self.h0)?;
        if count > roots.len() {
            return Err(CharFunError::SeedExhausted {
                found: roots.len(),
                wanted: count,
            });
        }
        sort_descending_real(&mut roots);
        roots.truncate(count);
        Ok(roots)
    }

    fn spectrum_size(&self) -> Option<usize> {
        Some(4)
    }

    fn provenance(&self) -> Provenance {
        Provenance::PendulumClosedForm
    }
}

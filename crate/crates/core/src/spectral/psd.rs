use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::poles::PoleSet;
use super::quad::{integrate, QuadResult};
use super::SpectralError;

const I: C64 = C64::new(0.0, 1.0);

/// Narrow-band noise spectrum
///
/// `S(ω) = ω⁴a³/(π A_nor) · [1/(a⁸ + (ω−ω₀)⁸) + 1/(a⁸ + (ω+ω₀)⁸)]`
///
/// with bandwidth `a` and center frequency `ω₀` (both rad/s), normalized so
/// that `∫ S dω = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoisePsd {
    a: f64,
    omega0: f64,
    a_nor: f64,
}

/// `γ_k = i e^{−3iπ/8} e^{ikπ/4}`, k = 0..3: the roots of `γ⁸ = −1` with
/// positive imaginary part.
pub fn gammas() -> [C64; 4] {
    let base = I * C64::from_polar(1.0, -3.0 * PI / 8.0);
    [0, 1, 2, 3].map(|k| base * C64::from_polar(1.0, k as f64 * PI / 4.0))
}

impl NoisePsd {
    pub fn new(a: f64, omega0: f64) -> Result<Self, SpectralError> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(SpectralError::InvalidModel(format!(
                "bandwidth a must be positive, got {a}"
            )));
        }
        if !(omega0 >= 0.0) || !omega0.is_finite() {
            return Err(SpectralError::InvalidModel(format!(
                "center frequency omega0 must be nonnegative, got {omega0}"
            )));
        }
        let r = omega0 / a;
        let a_nor = ((1.0 + SQRT_2) * r.powi(4) + 6.0 * r * r + 1.0) * (1.0 - FRAC_1_SQRT_2).sqrt();
        Ok(NoisePsd { a, omega0, a_nor })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn a_nor(&self) -> f64 {
        self.a_nor
    }

    /// `S(ω)`.
    pub fn psd_eval(&self, omega: f64) -> f64 {
        let a8 = self.a.powi(8);
        let lobe = |x: f64| 1.0 / (a8 + x.powi(8));
        omega.powi(4) * self.a.powi(3) / (PI * self.a_nor)
            * (lobe(omega - self.omega0) + lobe(omega + self.omega0))
    }

    /// Extended spectral density `G(z)` from the closed form
    /// `(G₀(z, ω₀) + G₀(z, −ω₀)) / (8iπa⁴A_nor)`,
    /// `G₀(z, w) = Σ_k γ_k(aγ_k + w)⁴ / (z − i(aγ_k + w))`.
    pub fn gz_closed(&self, z: C64) -> Result<C64, SpectralError> {
        let tol = 1e-12 * self.a;
        let mut sum = C64::new(0.0, 0.0);
        for w in [self.omega0, -self.omega0] {
            for g in gammas() {
                let c = self.a * g + w;
                let pole = I * c;
                if (z - pole).norm() <= tol {
                    return Err(SpectralError::AtPole { z, pole });
                }
                sum += g * c.powi(4) / (z - pole);
            }
        }
        Ok(sum / (8.0 * I * PI * self.a.powi(4) * self.a_nor))
    }

    /// Poles and residues of `G`.
    pub fn poles_residues(&self) -> PoleSet {
        let scale = 8.0 * I * PI * self.a.powi(4) * self.a_nor;
        let mut poles = Vec::with_capacity(8);
        let mut residues = Vec::with_capacity(8);
        for w in [self.omega0, -self.omega0] {
            for g in gammas() {
                let c = self.a * g + w;
                poles.push(I * c);
                residues.push(g * c.powi(4) / scale);
            }
        }
        PoleSet::merged(poles, residues, 1e-12 * self.a)
    }

    /// Half-width of the central quadrature window, `ω₀ + 50a`.
    fn window(&self) -> f64 {
        self.omega0 + 50.0 * self.a
    }

    fn breakpoints(&self) -> Vec<f64> {
        let w = self.window();
        let mut pts = vec![-w, 0.0, w];
        for s in [-1.0, 1.0] {
            for k in [-4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0] {
                let x = s * self.omega0 + k * self.a;
                if x.abs() < w {
                    pts.push(x);
                }
            }
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    /// `∫ F(ω) dω` over the real line: adaptive quadrature on `[−W, W]` plus
    /// both tails mapped to `(0, 1]` by `ω = ±W/t`.
    fn integrate_line<F: Fn(f64) -> C64>(
        &self,
        f: F,
        abs_tol: f64,
        rel_tol: f64,
    ) -> (QuadResult, QuadResult) {
        let w = self.window();
        let budget = 2_000_000;
        let core = integrate(&f, &self.breakpoints(), abs_tol, rel_tol, budget);
        let tails = integrate(
            |t: f64| (f(w / t) + f(-w / t)) * (w / (t * t)),
            &[0.0, 0.25, 1.0],
            abs_tol,
            rel_tol,
            budget,
        );
        (core, tails)
    }

    /// `∫ S dω` over the real line.
    pub fn normalization(&self) -> Result<f64, SpectralError> {
        let (core, tails) = self.integrate_line(|w| C64::new(self.psd_eval(w), 0.0), 1e-13, 1e-12);
        check(&core)?;
        check(&tails)?;
        Ok((core.value + tails.value).re)
    }

    /// `G(z) = (1/2π) ∫ S(ω)/(z − iω) dω`, valid for `Re z > 0`; an
    /// independent check on [`NoisePsd::gz_closed`].
    pub fn gz_quadrature(&self, z: C64) -> Result<C64, SpectralError> {
        if !(z.re > 0.0) {
            return Err(SpectralError::OutsideDomain(format!(
                "quadrature form of G needs Re z > 0, got {z}"
            )));
        }
        let scale = 1.0 / (2.0 * PI * z.norm().max(self.a));
        let (core, tails) = self.integrate_line(
            |w| self.psd_eval(w) / (z - I * w) / (2.0 * PI),
            1e-14 * scale,
            1e-12,
        );
        check(&core)?;
        check(&tails)?;
        Ok(core.value + tails.value)
    }
}

fn check(r: &QuadResult) -> Result<(), SpectralError> {
    if r.converged {
        Ok(())
    } else {
        Err(SpectralError::QuadratureFailure {
            error: r.error,
            evaluations: r.evaluations,
        })
    }
}

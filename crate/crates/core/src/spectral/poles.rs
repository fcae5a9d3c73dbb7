use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::SpectralError;

/// Poles `μ_m` and residues `r_m` of a strictly proper rational extended
/// spectral density `G(z) = Σ_m r_m / (z − μ_m)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoleSet {
    poles: Vec<C64>,
    residues: Vec<C64>,
    merge_tol: f64,
}

impl PoleSet {
    /// Builds a pole set, summing residues of poles closer than `merge_tol`.
    pub fn merged(poles: Vec<C64>, residues: Vec<C64>, merge_tol: f64) -> Self {
        let mut p: Vec<C64> = Vec::with_capacity(poles.len());
        let mut r: Vec<C64> = Vec::with_capacity(residues.len());
        for (mu, res) in poles.into_iter().zip(residues) {
            match p.iter().position(|q| (q - mu).norm() <= merge_tol) {
                Some(k) => r[k] += res,
                None => {
                    p.push(mu);
                    r.push(res);
                }
            }
        }
        PoleSet {
            poles: p,
            residues: r,
            merge_tol,
        }
    }

    pub fn poles(&self) -> &[C64] {
        &self.poles
    }

    pub fn residues(&self) -> &[C64] {
        &self.residues
    }

    pub fn len(&self) -> usize {
        self.poles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poles.is_empty()
    }

    pub fn merge_tol(&self) -> f64 {
        self.merge_tol
    }

    pub fn iter(&self) -> impl Iterator<Item = (C64, C64)> + '_ {
        self.poles
            .iter()
            .copied()
            .zip(self.residues.iter().copied())
    }

    /// `Σ_m r_m`, which equals `R(0)`.
    pub fn residue_sum(&self) -> C64 {
        self.residues.iter().sum()
    }

    /// `G(z)` as a partial-fraction sum.
    pub fn eval(&self, z: C64) -> Result<C64, SpectralError> {
        let mut s = C64::new(0.0, 0.0);
        for (mu, r) in self.iter() {
            if (z - mu).norm() <= self.merge_tol {
                return Err(SpectralError::AtPole { z, pole: mu });
            }
            s += r / (z - mu);
        }
        Ok(s)
    }

    /// Distance from `z` to the nearest pole.
    pub fn pole_distance(&self, z: C64) -> f64 {
        self.poles
            .iter()
            .map(|mu| (z - mu).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Autocorrelation `R(τ) = Σ_m r_m e^{μ_m τ}` for `τ ≥ 0`.
    pub fn acf_eval(&self, tau: f64) -> C64 {
        self.iter().map(|(mu, r)| r * (mu * tau).exp()).sum()
    }
}

//! Second-moment growth rate `λ = λ₀ + ε²λ₂` for a mode pair `(p, q)`:
//! the sums `I_p` over eigenvalues or over the poles of `G`, the correction
//! `λ₂` in expanded and brute-force form, pair selection and the critical
//! forcing amplitude.

mod coupling;
mod ip;
mod select;

use std::fmt;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::charfun::{CharFunError, Provenance};
use crate::linalg::LinalgError;
use crate::spectral::SpectralError;

pub use coupling::{lambda2, CharFunCoupling, IpPath, MatrixCoupling, ModeCoupling};
pub use ip::{
    chi_matrix, chi_table, ip_eigensum, ip_residues, lambda2_bruteforce, residue_warnings,
};
pub use select::{select_mode_pair, stability_margin, Margin, DEFAULT_TOP_K};

/// Warn when a resonance distance falls below this fraction of the
/// frequency scale.
pub const RESONANCE_WARN: f64 = 1e-6;
/// Fail when a resonance distance falls below this fraction of the
/// frequency scale.
pub const RESONANCE_ERROR: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StabilityError {
    #[error("G is unbounded at σ_p − σ_k = {z} (pole {pole})")]
    ResonantArgument { z: C64, pole: C64 },
    #[error("f_A(σ_p − μ_m) vanishes at σ_p − μ_m = {z}; I_p diverges")]
    ResonantPole { z: C64 },
    #[error("unforced system is not stable: eigenvalue {sigma} has Re σ ≥ 0")]
    UnstableBase { sigma: C64 },
    #[error("eigen-sum path is unavailable for {0}; use the residue path")]
    EigensumUnavailable(Provenance),
    #[error("truncation N = {requested} exceeds the {available} available eigenvalues")]
    Truncation { requested: usize, available: usize },
    #[error("mode index {index} out of range (have {count})")]
    IndexOutOfRange { index: usize, count: usize },
    #[error(transparent)]
    CharFun(#[from] CharFunError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// How `I_p` is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    EigenSum,
    ResidueSum,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::EigenSum => "eigen-sum",
            Method::ResidueSum => "residue-sum",
        })
    }
}

/// Two modes `p ≤ q` and `λ₀ = σ_p + σ_q`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModePair {
    pub p: usize,
    pub q: usize,
    pub sigma_p: C64,
    pub sigma_q: C64,
    pub lambda0: C64,
}

impl ModePair {
    /// Builds the pair from an eigenvalue list, swapping so that `p ≤ q`.
    pub fn new(sigmas: &[C64], p: usize, q: usize) -> Result<Self, StabilityError> {
        let (p, q) = if p <= q { (p, q) } else { (q, p) };
        if q >= sigmas.len() {
            return Err(StabilityError::IndexOutOfRange {
                index: q,
                count: sigmas.len(),
            });
        }
        let (sp, sq) = (sigmas[p], sigmas[q]);
        Ok(ModePair {
            p,
            q,
            sigma_p: sp,
            sigma_q: sq,
            lambda0: sp + sq,
        })
    }

    pub fn is_diagonal(&self) -> bool {
        self.p == self.q
    }
}

/// Outcome of a stability analysis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub pair: ModePair,
    pub lambda2: C64,
    pub epsilon: Option<f64>,
    pub lambda: Option<C64>,
    /// `√(−Re λ₀ / Re λ₂)` when `Re λ₂ > 0`, otherwise infinite.
    #[serde(with = "infinite_as_null")]
    pub epsilon_crit: f64,
    pub method: Method,
    pub diagnostics: Vec<String>,
}

impl StabilityReport {
    pub fn new(pair: ModePair, lambda2: C64, method: Method, diagnostics: Vec<String>) -> Self {
        StabilityReport {
            pair,
            lambda2,
            epsilon: None,
            lambda: None,
            epsilon_crit: epsilon_crit(pair.lambda0, lambda2),
            method,
            diagnostics,
        }
    }

    /// Sets `ε` and `λ = λ₀ + ε²λ₂`.
    pub fn at_epsilon(mut self, epsilon: f64) -> Self {
        let m = stability_margin(self.pair.lambda0, self.lambda2, epsilon);
        self.epsilon = Some(epsilon);
        self.lambda = Some(m.lambda);
        self
    }

    /// Stable at the report's `ε` (or at `ε = 0` if none is set).
    pub fn is_stable(&self) -> bool {
        self.lambda.unwrap_or(self.pair.lambda0).re < 0.0
    }
}

/// `√(−Re λ₀ / Re λ₂)` for `Re λ₂ > 0`, else `+∞`.
pub fn epsilon_crit(lambda0: C64, lambda2: C64) -> f64 {
    if lambda2.re > 0.0 {
        (-lambda0.re / lambda2.re).max(0.0).sqrt()
    } else {
        f64::INFINITY
    }
}

mod infinite_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

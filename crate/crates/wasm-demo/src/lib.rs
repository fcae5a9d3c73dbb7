//! Browser bindings: each export takes plain numbers and returns a JSON
//! string, or throws a string error.

use paramstab::cli::{analyze, summarize, sweep, AnalysisConfig, ModelConfig, PsdConfig};
use paramstab::models::{Depth, FaradayParams, PendulumParams};
use paramstab::spectral::NoisePsd;
use serde::Serialize;
use wasm_bindgen::prelude::*;

fn js_err<E: std::fmt::Display>(e: E) -> JsValue {
    JsValue::from_str(&e.to_string())
}

fn to_json<T: Serialize>(value: &T) -> Result<String, JsValue> {
    serde_json::to_string(value).map_err(js_err)
}

#[derive(Serialize)]
struct PsdCurve {
    omega: Vec<f64>,
    s: Vec<f64>,
    poles: Vec<[f64; 2]>,
    normalization: f64,
}

/// `S(ω)` on `points` samples of `[0, omega_max]`, the poles of `G` and the
/// integral of `S`.
#[wasm_bindgen]
pub fn psd_curve(a: f64, omega0: f64, omega_max: f64, points: usize) -> Result<String, JsValue> {
    let psd = NoisePsd::new(a, omega0).map_err(js_err)?;
    if omega_max.is_nan() || omega_max <= 0.0 || points < 2 {
        return Err(js_err("need omega_max > 0 and at least 2 points"));
    }
    let omega: Vec<f64> = (0..points)
        .map(|i| omega_max * i as f64 / (points - 1) as f64)
        .collect();
    let s = omega.iter().map(|&w| psd.psd_eval(w)).collect();
    let poles = psd
        .poles_residues()
        .poles()
        .iter()
        .map(|p| [p.re, p.im])
        .collect();
    let normalization = psd.normalization().map_err(js_err)?;
    to_json(&PsdCurve {
        omega,
        s,
        poles,
        normalization,
    })
}

#[derive(Serialize)]
struct MarginCurve {
    p: usize,
    q: usize,
    lambda0: [f64; 2],
    lambda2: [f64; 2],
    epsilon_crit: f64,
    epsilon: Vec<f64>,
    growth: Vec<f64>,
}

/// Least stable pair of the cart–pendulum and `Re(λ₀ + ε²λ₂)` for `ε` in
/// `[0, eps_max]`.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn pendulum_margin(
    m_s: f64,
    m_p: f64,
    ell: f64,
    k_s: f64,
    gamma_s: f64,
    gamma_p: f64,
    a: f64,
    omega0: f64,
    eps_max: f64,
    points: usize,
) -> Result<String, JsValue> {
    let params = PendulumParams {
        m_s,
        m_p,
        ell,
        k_s,
        gamma_s,
        gamma_p,
        ..PendulumParams::default()
    };
    let mut cfg = AnalysisConfig::new(ModelConfig::Pendulum(params));
    cfg.psd = PsdConfig { a, omega0 };
    cfg.validate().map_err(js_err)?;
    let out = analyze(&cfg).map_err(js_err)?;
    let r = out.primary();
    let points = points.max(2);
    let epsilon: Vec<f64> = (0..points)
        .map(|i| eps_max * i as f64 / (points - 1) as f64)
        .collect();
    let growth = epsilon
        .iter()
        .map(|e| (r.pair.lambda0 + e * e * r.lambda2).re)
        .collect();
    to_json(&MarginCurve {
        p: r.pair.p,
        q: r.pair.q,
        lambda0: [r.pair.lambda0.re, r.pair.lambda0.im],
        lambda2: [r.lambda2.re, r.lambda2.im],
        epsilon_crit: r.epsilon_crit,
        epsilon,
        growth,
    })
}

#[derive(Serialize)]
struct SweepPoint {
    alpha: f64,
    epsilon_crit: Option<f64>,
    re_lambda0: Option<f64>,
    error: Option<String>,
}

#[derive(Serialize)]
struct SweepResult {
    points: Vec<SweepPoint>,
    minimum: Option<[f64; 2]>,
}

/// Critical amplitude of a Faraday layer over a wavenumber range. A
/// nonpositive `depth` means infinite depth.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn faraday_sweep(
    rho: f64,
    nu: f64,
    tension: f64,
    g0: f64,
    depth: f64,
    a: f64,
    omega0: f64,
    alpha_min: f64,
    alpha_max: f64,
    steps: usize,
) -> Result<String, JsValue> {
    let depth = if depth > 0.0 {
        Depth::Finite(depth)
    } else {
        Depth::Infinite
    };
    let params = FaradayParams {
        rho,
        nu,
        tension,
        g0,
        alpha: alpha_min,
        depth,
    };
    let mut cfg = AnalysisConfig::new(ModelConfig::Faraday(params));
    cfg.psd = PsdConfig { a, omega0 };
    cfg.validate().map_err(js_err)?;
    let rows = sweep(&cfg, alpha_min, alpha_max, steps).map_err(js_err)?;
    let minimum = summarize(&rows).map(|s| [s.alpha, s.epsilon_crit]);
    let points = rows
        .into_iter()
        .map(|r| SweepPoint {
            alpha: r.alpha,
            epsilon_crit: r.report.as_ref().map(|x| x.epsilon_crit),
            re_lambda0: r.report.as_ref().map(|x| x.pair.lambda0.re),
            error: r.error,
        })
        .collect();
    to_json(&SweepResult { points, minimum })
}

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use super::{CharFunError, CharacteristicFunction};

/// Stopping rules for [`find_roots`].
#[derive(Clone, Copy, Debug)]
pub struct NewtonOptions {
    /// Converged when `|Δσ| ≤ step_tol·(1 + |σ|)`.
    pub step_tol: f64,
    /// Accepted when `|f/f′| ≤ residual_tol·(1 + |σ|)`.
    pub residual_tol: f64,
    pub max_iterations: usize,
    /// Roots closer than this (absolute) are considered the same root.
    pub distinct: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            step_tol: 1e-12,
            residual_tol: 1e-10,
            max_iterations: 60,
            distinct: 1e-8,
        }
    }
}

/// Roots found by [`find_roots`] together with notes on skipped seeds.
#[derive(Clone, Debug, Default)]
pub struct RootSearch {
    pub roots: Vec<C64>,
    pub diagnostics: Vec<String>,
}

/// Newton iteration from each seed in turn, with previously found roots
/// divided out of the working function, until `count` distinct roots are
/// known.
pub fn find_roots(
    cf: &dyn CharacteristicFunction,
    seeds: &[C64],
    count: usize,
    opts: &NewtonOptions,
) -> Result<RootSearch, CharFunError> {
    let mut out = RootSearch::default();
    for &seed in seeds {
        if out.roots.len() >= count {
            break;
        }
        match newton_deflated(cf, seed, &out.roots, opts) {
            Ok(root) => {
                if let Some(prev) = out
                    .roots
                    .iter()
                    .find(|r| (*r - root).norm() <= opts.distinct)
                {
                    out.diagnostics
                        .push(format!("seed {seed} returned to known root {prev}"));
                    continue;
                }
                out.roots.push(root);
            }
            Err(msg) => out.diagnostics.push(format!("seed {seed} skipped: {msg}")),
        }
    }
    if out.roots.len() < count {
        return Err(CharFunError::SeedExhausted {
            found: out.roots.len(),
            wanted: count,
        });
    }
    Ok(out)
}

fn newton_deflated(
    cf: &dyn CharacteristicFunction,
    seed: C64,
    known: &[C64],
    opts: &NewtonOptions,
) -> Result<C64, String> {
    let mut s = seed;
    for _ in 0..opts.max_iterations {
        let ratio = ratio_at(cf, s)?;
        if ratio.norm() == 0.0 {
            return Ok(s);
        }
        let inv = 1.0 / ratio - known.iter().map(|r| 1.0 / (s - r)).sum::<C64>();
        let step = 1.0 / inv;
        if !step.is_finite() {
            return Err("non-finite Newton step".into());
        }
        s -= step;
        if step.norm() <= opts.step_tol * (1.0 + s.norm()) {
            let r = ratio_at(cf, s)?;
            if r.norm() <= opts.residual_tol * (1.0 + s.norm()) {
                return Ok(s);
            }
            return Err(format!("stalled at {s} with |f/f′| = {:e}", r.norm()));
        }
    }
    Err(format!(
        "no convergence in {} iterations (last iterate {s})",
        opts.max_iterations
    ))
}

/// `f/f′` at `s`. A point where the resolvent is numerically singular is
/// numerically an eigenvalue, hence a root, and gets a zero step.
fn ratio_at(cf: &dyn CharacteristicFunction, s: C64) -> Result<C64, String> {
    match cf.newton_ratio(s) {
        Err(CharFunError::NearEigenvalue { .. }) => Ok(C64::new(0.0, 0.0)),
        other => other.map_err(|e| e.to_string()),
    }
}

/// `(1/2πi) ∮ f′/f dσ` over the circle `|σ − center| = radius`: the number
/// of zeros minus poles inside. Returned unrounded as a diagnostic.
pub fn argument_principle_count(
    cf: &dyn CharacteristicFunction,
    center: C64,
    radius: f64,
    points: usize,
) -> Result<f64, CharFunError> {
    let mut s = C64::new(0.0, 0.0);
    for j in 0..points {
        let w = C64::from_polar(radius, 2.0 * PI * (j as f64 + 0.5) / points as f64);
        let z = center + w;
        s += cf.derivative(z)? / cf.value(z)? * w;
    }
    Ok((s / points as f64).re)
}

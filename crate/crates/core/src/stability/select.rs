use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::coupling::{lambda2, ModeCoupling};
use super::{ModePair, StabilityError, StabilityReport};
use crate::spectral::PoleSet;

/// Number of leading modes searched for the destabilizing pair.
pub const DEFAULT_TOP_K: usize = 8;

/// `λ = λ₀ + ε²λ₂` and whether `Re λ < 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Margin {
    pub lambda: C64,
    pub stable: bool,
}

pub fn stability_margin(lambda0: C64, lambda2: C64, epsilon: f64) -> Margin {
    let lambda = lambda0 + epsilon * epsilon * lambda2;
    Margin {
        lambda,
        stable: lambda.re < 0.0,
    }
}

/// Evaluates every pair `p ≤ q` among the first `top_k` modes and returns
/// the one with the smallest critical amplitude. Ties go to the larger
/// `Re λ₀`, then to the smaller indices.
pub fn select_mode_pair(
    coupling: &dyn ModeCoupling,
    poles: &PoleSet,
    top_k: usize,
) -> Result<StabilityReport, StabilityError> {
    let sigmas = coupling.sigmas();
    if let Some(s) = sigmas.iter().find(|s| s.re >= 0.0) {
        return Err(StabilityError::UnstableBase { sigma: *s });
    }
    let k = top_k.min(sigmas.len());
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|p| (p..k).map(move |q| (p, q))).collect();
    let results: Vec<Result<StabilityReport, StabilityError>> = pairs
        .par_iter()
        .map(|&(p, q)| {
            let pair = ModePair::new(sigmas, p, q)?;
            let l2 = lambda2(coupling, poles, &pair)?;
            let mut diag = coupling.diagnostics(&pair);
            if p != q && pair.sigma_p == pair.sigma_q {
                diag.push(format!(
                    "modes {p} and {q} have coincident eigenvalues; treated as distinct"
                ));
            }
            Ok(StabilityReport::new(pair, l2, coupling.method(), diag))
        })
        .collect();

    let mut best: Option<StabilityReport> = None;
    let mut skipped = Vec::new();
    let mut first_err = None;
    for r in results {
        match r {
            Ok(rep) => {
                let better = match &best {
                    None => true,
                    Some(b) => {
                        rep.epsilon_crit < b.epsilon_crit
                            || (rep.epsilon_crit == b.epsilon_crit
                                && rep.pair.lambda0.re > b.pair.lambda0.re)
                    }
                };
                if better {
                    best = Some(rep);
                }
            }
            Err(
                e @ (StabilityError::ResonantArgument { .. } | StabilityError::ResonantPole { .. }),
            ) => {
                skipped.push(e.to_string());
                first_err.get_or_insert(e);
            }
            Err(e) => return Err(e),
        }
    }
    match best {
        Some(mut rep) => {
            rep.diagnostics
                .extend(skipped.into_iter().map(|s| format!("pair skipped: {s}")));
            if rep.epsilon_crit.is_infinite() {
                rep.diagnostics
                    .push("no pair destabilizes at second order in ε".into());
            }
            Ok(rep)
        }
        None => Err(first_err.unwrap_or(StabilityError::IndexOutOfRange { index: 0, count: 0 })),
    }
}

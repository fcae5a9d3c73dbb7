use num_complex::Complex64 as C64;

use super::{ModePair, StabilityError, RESONANCE_ERROR, RESONANCE_WARN};
use crate::charfun::{nondegenerate_derivative, CharFunError, CharacteristicFunction};
use crate::linalg::{dot_conj, DenseMatrix, EigenData};
use crate::spectral::PoleSet;

/// `χ_ij = ψ_iᴴ A₁ φ_j` (standard inner product).
pub fn chi_matrix(
    eig: &EigenData,
    a1: &DenseMatrix,
    i: usize,
    j: usize,
) -> Result<C64, StabilityError> {
    let n = eig.order();
    for idx in [i, j] {
        if idx >= n {
            return Err(StabilityError::IndexOutOfRange {
                index: idx,
                count: n,
            });
        }
    }
    Ok(dot_conj(&eig.psi[i], &a1.matvec(&eig.phi[j])?))
}

/// All `χ_ij` as a matrix.
pub fn chi_table(eig: &EigenData, a1: &DenseMatrix) -> Result<DenseMatrix, StabilityError> {
    let n = eig.order();
    let aphi: Vec<Vec<C64>> = eig
        .phi
        .iter()
        .map(|p| a1.matvec(p))
        .collect::<Result<_, _>>()?;
    let mut chi = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for (j, ap) in aphi.iter().enumerate() {
            chi[(i, j)] = dot_conj(&eig.psi[i], ap);
        }
    }
    Ok(chi)
}

fn frequency_scale(sigma: C64, poles: &PoleSet) -> f64 {
    poles
        .poles()
        .iter()
        .map(|m| m.norm())
        .fold(sigma.norm(), f64::max)
}

/// `G(z)` with a resonance check against the frequency scale.
pub(crate) fn g_checked(poles: &PoleSet, z: C64, scale: f64) -> Result<C64, StabilityError> {
    let (k, dist) = poles
        .poles()
        .iter()
        .enumerate()
        .map(|(k, m)| (k, (z - m).norm()))
        .fold(
            (0, f64::INFINITY),
            |acc, x| if x.1 < acc.1 { x } else { acc },
        );
    if dist <= RESONANCE_ERROR * scale {
        return Err(StabilityError::ResonantArgument {
            z,
            pole: poles.poles()[k],
        });
    }
    Ok(poles.eval(z)?)
}

/// `I_p = Σ_{k<N} χ_pk χ_kp G(σ_p − σ_k)` with `chi_products[k] = χ_pk χ_kp`.
pub fn ip_eigensum(
    sigmas: &[C64],
    chi_products: &[C64],
    poles: &PoleSet,
    p: usize,
    n: usize,
) -> Result<C64, StabilityError> {
    let available = sigmas.len().min(chi_products.len());
    if n > available {
        return Err(StabilityError::Truncation {
            requested: n,
            available,
        });
    }
    if p >= sigmas.len() {
        return Err(StabilityError::IndexOutOfRange {
            index: p,
            count: sigmas.len(),
        });
    }
    let sp = sigmas[p];
    let scale = frequency_scale(sp, poles);
    let mut sum = C64::new(0.0, 0.0);
    for k in 0..n {
        if chi_products[k] == C64::new(0.0, 0.0) {
            continue;
        }
        sum += chi_products[k] * g_checked(poles, sp - sigmas[k], scale)?;
    }
    Ok(sum)
}

/// Distance from `z` to the nearest zero of `f`, estimated as `|f/f′|`.
fn root_distance(cf: &dyn CharacteristicFunction, z: C64) -> Result<Option<f64>, StabilityError> {
    match cf.value(z) {
        Ok(f) => {
            let d = cf.derivative(z)?;
            Ok(Some(if d.norm() == 0.0 {
                f64::INFINITY
            } else {
                f.norm() / d.norm()
            }))
        }
        Err(CharFunError::AtPole { .. }) => Ok(None),
        Err(CharFunError::NearEigenvalue { .. }) => Ok(Some(0.0)),
        Err(e) => Err(e.into()),
    }
}

/// `I_p = (1/f_A′(σ_p)) Σ_m r_m / f_A(σ_p − μ_m)`.
pub fn ip_residues(
    cf: &dyn CharacteristicFunction,
    poles: &PoleSet,
    sigma_p: C64,
) -> Result<C64, StabilityError> {
    let dp = nondegenerate_derivative(cf, sigma_p)?;
    let scale = frequency_scale(sigma_p, poles);
    let mut sum = C64::new(0.0, 0.0);
    for (mu, r) in poles.iter() {
        let z = sigma_p - mu;
        if let Some(d) = root_distance(cf, z)? {
            if d <= RESONANCE_ERROR * scale {
                return Err(StabilityError::ResonantPole { z });
            }
            sum += r / cf.value(z)?;
        }
    }
    Ok(sum / dp)
}

/// Near-resonance warnings for the residue sum at `σ_p`.
pub fn residue_warnings(
    cf: &dyn CharacteristicFunction,
    poles: &PoleSet,
    sigma_p: C64,
) -> Vec<String> {
    let scale = frequency_scale(sigma_p, poles);
    let mut out = Vec::new();
    for mu in poles.poles() {
        let z = sigma_p - mu;
        if let Ok(Some(d)) = root_distance(cf, z) {
            if d <= RESONANCE_WARN * scale {
                out.push(format!(
                    "near resonance: σ_p − μ = {z} is within {d:.3e} of a zero of f_A (frequency scale {scale:.3e})"
                ));
            }
        }
    }
    out
}

/// `λ₂ = 8 Σ_{j,k} C_jkpq C_pqjk / (1 + δ_pq) · G(σ_p + σ_q − σ_j − σ_k)` with
/// `C_jklm = ¼(δ_jm χ_kl + δ_km χ_jl + δ_jl χ_km + δ_kl χ_jm)`.
pub fn lambda2_bruteforce(
    eig: &EigenData,
    a1: &DenseMatrix,
    poles: &PoleSet,
    pair: &ModePair,
) -> Result<C64, StabilityError> {
    let chi = chi_table(eig, a1)?;
    let n = eig.order();
    let (p, q) = (pair.p, pair.q);
    if q >= n {
        return Err(StabilityError::IndexOutOfRange { index: q, count: n });
    }
    let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    let c = |j: usize, k: usize, l: usize, m: usize| {
        0.25 * (d(j, m) * chi[(k, l)]
            + d(k, m) * chi[(j, l)]
            + d(j, l) * chi[(k, m)]
            + d(k, l) * chi[(j, m)])
    };
    let lam0 = eig.sigma[p] + eig.sigma[q];
    let scale = frequency_scale(lam0, poles);
    let mut sum = C64::new(0.0, 0.0);
    for j in 0..n {
        for k in 0..n {
            let w = c(j, k, p, q) * c(p, q, j, k);
            if w == C64::new(0.0, 0.0) {
                continue;
            }
            sum += w * g_checked(poles, lam0 - eig.sigma[j] - eig.sigma[k], scale)?;
        }
    }
    Ok(8.0 * sum / (1.0 + d(p, q)))
}

use std::sync::OnceLock;

use num_complex::Complex64 as C64;

use super::ip::{chi_table, g_checked, ip_eigensum, ip_residues, residue_warnings};
use super::{Method, ModePair, StabilityError};
use crate::charfun::{nondegenerate_derivative, CharacteristicFunction, Provenance};
use crate::linalg::{DenseMatrix, EigenData};
use crate::spectral::PoleSet;

/// Mode data needed by [`lambda2`]: eigenvalues, the coupling products
/// `χ_pq χ_qp` and `χ_pp χ_qq`, and `I_p`.
pub trait ModeCoupling: Send + Sync {
    /// Eigenvalues in mode order.
    fn sigmas(&self) -> &[C64];

    /// `χ_pq χ_qp`.
    fn chi_cross(&self, p: usize, q: usize) -> Result<C64, StabilityError>;

    /// `χ_pp χ_qq`.
    fn chi_diag(&self, p: usize, q: usize) -> Result<C64, StabilityError>;

    fn ip(&self, p: usize) -> Result<C64, StabilityError>;

    fn method(&self) -> Method;

    /// Notes to attach to a report for `pair`.
    fn diagnostics(&self, _pair: &ModePair) -> Vec<String> {
        Vec::new()
    }
}

fn check_index(p: usize, n: usize) -> Result<(), StabilityError> {
    if p >= n {
        Err(StabilityError::IndexOutOfRange { index: p, count: n })
    } else {
        Ok(())
    }
}

/// Eigenvector-backed coupling for matrix systems: `χ` from inner products,
/// `I_p` by the eigen-sum over the first `truncation` modes.
pub struct MatrixCoupling {
    sigmas: Vec<C64>,
    chi: DenseMatrix,
    poles: PoleSet,
    truncation: usize,
    ip: Vec<OnceLock<Result<C64, StabilityError>>>,
}

impl MatrixCoupling {
    pub fn new(
        eig: &EigenData,
        a1: &DenseMatrix,
        poles: &PoleSet,
        truncation: Option<usize>,
    ) -> Result<Self, StabilityError> {
        let n = eig.order();
        let truncation = truncation.unwrap_or(n);
        if truncation > n {
            return Err(StabilityError::Truncation {
                requested: truncation,
                available: n,
            });
        }
        Ok(MatrixCoupling {
            sigmas: eig.sigma.clone(),
            chi: chi_table(eig, a1)?,
            poles: poles.clone(),
            truncation,
            ip: (0..n).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn chi(&self) -> &DenseMatrix {
        &self.chi
    }
}

impl ModeCoupling for MatrixCoupling {
    fn sigmas(&self) -> &[C64] {
        &self.sigmas
    }

    fn chi_cross(&self, p: usize, q: usize) -> Result<C64, StabilityError> {
        check_index(p.max(q), self.sigmas.len())?;
        Ok(self.chi[(p, q)] * self.chi[(q, p)])
    }

    fn chi_diag(&self, p: usize, q: usize) -> Result<C64, StabilityError> {
        check_index(p.max(q), self.sigmas.len())?;
        Ok(self.chi[(p, p)] * self.chi[(q, q)])
    }

    fn ip(&self, p: usize) -> Result<C64, StabilityError> {
        check_index(p, self.sigmas.len())?;
        self.ip[p]
            .get_or_init(|| {
                let n = self.sigmas.len();
                let prods: Vec<C64> = (0..n)
                    .map(|k| self.chi[(p, k)] * self.chi[(k, p)])
                    .collect();
                ip_eigensum(&self.sigmas, &prods, &self.poles, p, self.truncation)
            })
            .clone()
    }

    fn method(&self) -> Method {
        Method::EigenSum
    }

    fn diagnostics(&self, _pair: &ModePair) -> Vec<String> {
        if self.truncation < self.sigmas.len() {
            vec![format!(
                "eigen-sum truncated to N = {} of {} modes",
                self.truncation,
                self.sigmas.len()
            )]
        } else {
            Vec::new()
        }
    }
}

/// How [`CharFunCoupling`] evaluates `I_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IpPath {
    /// Finite sum over the poles of `G`.
    Residues,
    /// Sum over the first `n` eigenvalues.
    EigenSum { n: usize },
}

/// Coupling from a characteristic function alone:
/// `χ_pq χ_qp = χ_pp χ_qq = 1/(f_A′(σ_p) f_A′(σ_q))`.
pub struct CharFunCoupling<'a> {
    cf: &'a dyn CharacteristicFunction,
    sigmas: Vec<C64>,
    derivs: Vec<C64>,
    poles: PoleSet,
    path: IpPath,
    ip: Vec<OnceLock<Result<C64, StabilityError>>>,
}

impl<'a> CharFunCoupling<'a> {
    /// Enumerates `count` modes (at least `n` for the eigen-sum path).
    pub fn new(
        cf: &'a dyn CharacteristicFunction,
        poles: &PoleSet,
        count: usize,
        path: IpPath,
    ) -> Result<Self, StabilityError> {
        let mut count = count;
        if let IpPath::EigenSum { n } = path {
            if cf.provenance() == Provenance::FaradayInfinite {
                return Err(StabilityError::EigensumUnavailable(cf.provenance()));
            }
            if let Some(avail) = cf.spectrum_size() {
                if n > avail {
                    return Err(StabilityError::Truncation {
                        requested: n,
                        available: avail,
                    });
                }
            }
            count = count.max(n);
        }
        if let Some(avail) = cf.spectrum_size() {
            count = count.min(avail);
        }
        let sigmas = cf.eigenvalues(count)?;
        let derivs = sigmas
            .iter()
            .map(|&s| nondegenerate_derivative(cf, s))
            .collect::<Result<Vec<_>, _>>()?;
        let n = sigmas.len();
        Ok(CharFunCoupling {
            cf,
            sigmas,
            derivs,
            poles: poles.clone(),
            path,
            ip: (0..n).map(|_| OnceLock::new()).collect(),
        })
    }

    /// `f_A′(σ_k)` for every enumerated mode.
    pub fn derivatives(&self) -> &[C64] {
        &self.derivs
    }

    pub fn path(&self) -> IpPath {
        self.path
    }
}

impl ModeCoupling for CharFunCoupling<'_> {
    fn sigmas(&self) -> &[C64] {
        &self.sigmas
    }

    fn chi_cross(&self, p: usize, q: usize) -> Result<C64, StabilityError> {
        check_index(p.max(q), self.sigmas.len())?;
        Ok(1.0 / (self.derivs[p] * self.derivs[q]))
    }

    fn chi_diag(&self, p: usize, q: usize) -> Result<C64, StabilityError> {
        self.chi_cross(p, q)
    }

    fn ip(&self, p: usize) -> Result<C64, StabilityError> {
        check_index(p, self.sigmas.len())?;
        self.ip[p]
            .get_or_init(|| match self.path {
                IpPath::Residues => ip_residues(self.cf, &self.poles, self.sigmas[p]),
                IpPath::EigenSum { n } => {
                    let prods: Vec<C64> = self
                        .derivs
                        .iter()
                        .map(|d| 1.0 / (d * self.derivs[p]))
                        .collect();
                    ip_eigensum(&self.sigmas, &prods, &self.poles, p, n)
                }
            })
            .clone()
    }

    fn method(&self) -> Method {
        match self.path {
            IpPath::Residues => Method::ResidueSum,
            IpPath::EigenSum { .. } => Method::EigenSum,
        }
    }

    fn diagnostics(&self, pair: &ModePair) -> Vec<String> {
        match self.path {
            IpPath::Residues => {
                let mut w = residue_warnings(self.cf, &self.poles, pair.sigma_p);
                if !pair.is_diagonal() {
                    w.extend(residue_warnings(self.cf, &self.poles, pair.sigma_q));
                }
                w
            }
            IpPath::EigenSum { n } => vec![format!("eigen-sum truncated to N = {n} modes")],
        }
    }
}

/// `λ₂ = [4χ_ppχ_qq G(0) + 2χ_pqχ_qp (G(σ_p−σ_q) + G(σ_q−σ_p)) + 2(I_p + I_q + 2δ_pq I_p)] / (2(1 + δ_pq))`.
pub fn lambda2(
    coupling: &dyn ModeCoupling,
    poles: &PoleSet,
    pair: &ModePair,
) -> Result<C64, StabilityError> {
    let (p, q) = (pair.p, pair.q);
    let delta = if p == q { 1.0 } else { 0.0 };
    let scale = poles
        .poles()
        .iter()
        .map(|m| m.norm())
        .fold(pair.lambda0.norm(), f64::max);
    let g0 = g_checked(poles, C64::new(0.0, 0.0), scale)?;
    let gpq = g_checked(poles, pair.sigma_p - pair.sigma_q, scale)?;
    let gqp = g_checked(poles, pair.sigma_q - pair.sigma_p, scale)?;
    let ip = coupling.ip(p)?;
    let iq = if p == q { ip } else { coupling.ip(q)? };
    let sum = 4.0 * coupling.chi_diag(p, q)? * g0
        + 2.0 * coupling.chi_cross(p, q)? * (gpq + gqp)
        + 2.0 * (ip + iq + 2.0 * delta * ip);
    Ok(sum / (2.0 * (1.0 + delta)))
}

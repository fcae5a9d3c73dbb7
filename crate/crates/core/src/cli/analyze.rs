use num_complex::Complex64 as C64;
use serde::Serialize;

use super::config::{matrix_system, AnalysisConfig, MethodChoice, ModelConfig};
use super::CliError;
use crate::charfun::{CharacteristicFunction, MatrixCharFun};
use crate::linalg::eig_general;
use crate::models::{faraday_charfun, PendulumCharFun};
use crate::spectral::PoleSet;
use crate::stability::{
    lambda2, select_mode_pair, CharFunCoupling, IpPath, MatrixCoupling, Method, ModeCoupling,
    ModePair, StabilityReport, DEFAULT_TOP_K,
};

/// Eigen-sum truncation for Faraday models when none is configured.
pub const DEFAULT_FARADAY_TRUNCATION: usize = 1280;

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisOutput {
    pub config: AnalysisConfig,
    /// The selecting method first.
    pub reports: Vec<StabilityReport>,
    /// `|λ₂ − λ₂′| / |λ₂|` between the two methods when both ran.
    pub lambda2_relative_difference: Option<f64>,
}

impl AnalysisOutput {
    pub fn primary(&self) -> &StabilityReport {
        &self.reports[0]
    }

    pub fn is_stable(&self) -> bool {
        self.primary().is_stable()
    }
}

/// Everything a coupling borrows from.
struct Backend {
    cf: Box<dyn CharacteristicFunction>,
    matrix: Option<MatrixCoupling>,
}

fn backend(cfg: &AnalysisConfig, poles: &PoleSet, eigensum: bool) -> Result<Backend, CliError> {
    if let ModelConfig::Faraday(p) = &cfg.model {
        return Ok(Backend {
            cf: faraday_charfun(p)?,
            matrix: None,
        });
    }
    let sys = matrix_system(&cfg.model)?.expect("matrix-backed model");
    let matrix = if eigensum {
        let eig = eig_general(sys.a0(), sys.b0())?;
        Some(MatrixCoupling::new(&eig, &sys.a1(), poles, cfg.truncation)?)
    } else {
        None
    };
    let cf: Box<dyn CharacteristicFunction> = match &cfg.model {
        ModelConfig::Pendulum(p) => Box::new(PendulumCharFun::new(p)?),
        _ => Box::new(MatrixCharFun::new(sys)),
    };
    Ok(Backend { cf, matrix })
}

fn coupling<'a>(
    b: &'a Backend,
    cfg: &AnalysisConfig,
    poles: &PoleSet,
    method: Method,
    top_k: usize,
) -> Result<Coupling<'a>, CliError> {
    Ok(match (method, &b.matrix) {
        (Method::EigenSum, Some(m)) => Coupling::Borrowed(m),
        (Method::EigenSum, None) => {
            let n = cfg.truncation.unwrap_or(DEFAULT_FARADAY_TRUNCATION);
            Coupling::Owned(Box::new(CharFunCoupling::new(
                b.cf.as_ref(),
                poles,
                top_k,
                IpPath::EigenSum { n },
            )?))
        }
        (Method::ResidueSum, _) => Coupling::Owned(Box::new(CharFunCoupling::new(
            b.cf.as_ref(),
            poles,
            top_k,
            IpPath::Residues,
        )?)),
    })
}

enum Coupling<'a> {
    Borrowed(&'a dyn ModeCoupling),
    Owned(Box<dyn ModeCoupling + 'a>),
}

impl Coupling<'_> {
    fn get(&self) -> &dyn ModeCoupling {
        match self {
            Coupling::Borrowed(c) => *c,
            Coupling::Owned(c) => c.as_ref(),
        }
    }
}

fn nearest(sigmas: &[C64], s: C64) -> usize {
    let mut best = 0;
    for (k, z) in sigmas.iter().enumerate() {
        if (z - s).norm() < (sigmas[best] - s).norm() {
            best = k;
        }
    }
    best
}

/// The same pair of eigenvalues in another coupling's mode order.
fn match_pair(c: &dyn ModeCoupling, pair: &ModePair) -> Result<ModePair, CliError> {
    let s = c.sigmas();
    let p = nearest(s, pair.sigma_p);
    let q = if pair.is_diagonal() {
        p
    } else {
        nearest(s, pair.sigma_q)
    };
    Ok(ModePair::new(s, p, q)?)
}

pub fn analyze(cfg: &AnalysisConfig) -> Result<AnalysisOutput, CliError> {
    cfg.validate()?;
    let poles = cfg.psd.model()?.poles_residues();
    let top_k = cfg.top_k.unwrap_or(DEFAULT_TOP_K);
    let methods: &[Method] = match cfg.method {
        MethodChoice::Residues => &[Method::ResidueSum],
        MethodChoice::Eigensum => &[Method::EigenSum],
        MethodChoice::Both => &[Method::ResidueSum, Method::EigenSum],
    };
    let b = backend(cfg, &poles, methods.contains(&Method::EigenSum))?;
    let first = coupling(&b, cfg, &poles, methods[0], top_k)?;
    let mut reports = vec![select_mode_pair(first.get(), &poles, top_k)?];
    let mut diff = None;
    if let Some(&m) = methods.get(1) {
        let second = coupling(&b, cfg, &poles, m, top_k)?;
        let pair = match_pair(second.get(), &reports[0].pair)?;
        let l2 = lambda2(second.get(), &poles, &pair)?;
        let base = reports[0].lambda2;
        diff = Some((l2 - base).norm() / base.norm());
        reports.push(StabilityReport::new(
            pair,
            l2,
            second.get().method(),
            second.get().diagnostics(&pair),
        ));
    }
    if let Some(eps) = cfg.epsilon {
        reports = reports.into_iter().map(|r| r.at_epsilon(eps)).collect();
    }
    Ok(AnalysisOutput {
        config: cfg.clone(),
        reports,
        lambda2_relative_difference: diff,
    })
}

/// `I_p` for every enumerated mode by both methods.
#[derive(Clone, Debug, Serialize)]
pub struct CompareRow {
    pub mode: usize,
    pub sigma: C64,
    pub ip_eigensum: C64,
    pub ip_residues: C64,
    pub relative_difference: f64,
}

pub fn compare(cfg: &AnalysisConfig) -> Result<Vec<CompareRow>, CliError> {
    cfg.validate()?;
    let poles = cfg.psd.model()?.poles_residues();
    let top_k = cfg.top_k.unwrap_or(DEFAULT_TOP_K);
    let b = backend(cfg, &poles, true)?;
    let res = coupling(&b, cfg, &poles, Method::ResidueSum, top_k)?;
    let eig = coupling(&b, cfg, &poles, Method::EigenSum, top_k)?;
    let (res, eig) = (res.get(), eig.get());
    let k = top_k.min(res.sigmas().len());
    (0..k)
        .map(|p| {
            let sigma = res.sigmas()[p];
            let ir = res.ip(p)?;
            let ie = eig.ip(nearest(eig.sigmas(), sigma))?;
            Ok(CompareRow {
                mode: p,
                sigma,
                ip_eigensum: ie,
                ip_residues: ir,
                relative_difference: (ie - ir).norm() / ir.norm(),
            })
        })
        .collect()
}

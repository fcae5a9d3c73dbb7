use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::CliError;
use crate::charfun::RankOneSystem;
use crate::linalg::DenseMatrix;
use crate::models::{kkt_reduce, pendulum_system, FaradayParams, KktSystem, PendulumParams};
use crate::spectral::NoisePsd;

/// Bandwidth and center frequency of the noise spectrum (rad/s).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PsdConfig {
    pub a: f64,
    pub omega0: f64,
}

impl Default for PsdConfig {
    /// `a = 20`, `ω₀ = 100`.
    fn default() -> Self {
        PsdConfig {
            a: 20.0,
            omega0: 100.0,
        }
    }
}

impl PsdConfig {
    pub fn model(&self) -> Result<NoisePsd, CliError> {
        NoisePsd::new(self.a, self.omega0).map_err(|e| CliError::Config(format!("psd: {e}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModelConfig {
    Pendulum(PendulumParams),
    Faraday(FaradayParams),
    /// JSON file with keys `B0`, `A0`, `u`, `v`.
    MatrixFile {
        path: PathBuf,
    },
    /// JSON file with keys `M0`, `K0`, `C`, `a`, `b`.
    KktFile {
        path: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum MethodChoice {
    Residues,
    Eigensum,
    Both,
}

/// A complete analysis request.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    pub model: ModelConfig,
    #[serde(default)]
    pub psd: PsdConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default = "default_method")]
    pub method: MethodChoice,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub top_k: Option<usize>,
}

fn default_method() -> MethodChoice {
    MethodChoice::Residues
}

impl AnalysisConfig {
    pub fn new(model: ModelConfig) -> Self {
        AnalysisConfig {
            model,
            psd: PsdConfig::default(),
            epsilon: None,
            method: MethodChoice::Residues,
            truncation: None,
            top_k: None,
        }
    }

    /// Parses a config document; relative file paths are resolved against
    /// `base`.
    pub fn from_json(text: &str, base: Option<&Path>) -> Result<Self, CliError> {
        let mut cfg: AnalysisConfig =
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        if let Some(base) = base {
            match &mut cfg.model {
                ModelConfig::MatrixFile { path } | ModelConfig::KktFile { path }
                    if path.is_relative() =>
                {
                    *path = base.join(&*path);
                }
                _ => {}
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text, path.parent())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if let Some(eps) = self.epsilon {
            if !(eps >= 0.0) || !eps.is_finite() {
                return Err(CliError::Config(format!(
                    "`epsilon` must be a nonnegative number, got {eps}"
                )));
            }
        }
        if self.truncation == Some(0) {
            return Err(CliError::Config("`truncation` must be at least 1".into()));
        }
        if self.top_k == Some(0) {
            return Err(CliError::Config("`top_k` must be at least 1".into()));
        }
        self.psd.model()?;
        match &self.model {
            ModelConfig::Pendulum(p) => p.validate()?,
            ModelConfig::Faraday(p) => p.validate()?,
            ModelConfig::MatrixFile { path } | ModelConfig::KktFile { path } => {
                if !path.exists() {
                    return Err(CliError::Config(format!(
                        "`path`: file {} does not exist",
                        path.display()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    #[serde(rename = "B0")]
    b0: Vec<Vec<f64>>,
    #[serde(rename = "A0")]
    a0: Vec<Vec<f64>>,
    u: Vec<f64>,
    v: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct KktFile {
    #[serde(rename = "M0")]
    m0: Vec<Vec<f64>>,
    #[serde(rename = "K0")]
    k0: Vec<Vec<f64>>,
    #[serde(rename = "C")]
    c: Vec<Vec<f64>>,
    a: Vec<f64>,
    b: Vec<f64>,
}

fn matrix(name: &str, rows: &[Vec<f64>]) -> Result<DenseMatrix, CliError> {
    DenseMatrix::from_real_rows(rows).map_err(|e| CliError::Config(format!("`{name}`: {e}")))
}

fn vector(x: &[f64]) -> Vec<C64> {
    x.iter().map(|&v| C64::new(v, 0.0)).collect()
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

pub fn load_matrix_system(path: &Path) -> Result<RankOneSystem, CliError> {
    let f: MatrixFile = read_json(path)?;
    Ok(RankOneSystem::new(
        matrix("B0", &f.b0)?,
        matrix("A0", &f.a0)?,
        vector(&f.u),
        vector(&f.v),
    )?)
}

pub fn load_kkt_system(path: &Path) -> Result<KktSystem, CliError> {
    let f: KktFile = read_json(path)?;
    Ok(KktSystem {
        m0: matrix("M0", &f.m0)?,
        k0: matrix("K0", &f.k0)?,
        c: matrix("C", &f.c)?,
        a: vector(&f.a),
        b: vector(&f.b),
    })
}

/// The rank-one matrix system behind a non-Faraday model.
pub fn matrix_system(model: &ModelConfig) -> Result<Option<RankOneSystem>, CliError> {
    Ok(match model {
        ModelConfig::Pendulum(p) => Some(pendulum_system(p)?),
        ModelConfig::MatrixFile { path } => Some(load_matrix_system(path)?),
        ModelConfig::KktFile { path } => Some(kkt_reduce(&load_kkt_system(path)?)?.system),
        ModelConfig::Faraday(_) => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_field_is_named() {
        let text = r#"{"model": {"kind": "faraday", "rho": 0.95, "tension": 70, "g0": 1000, "alpha": 5, "depth": 1}}"#;
        match AnalysisConfig::from_json(text, None) {
            Err(CliError::Config(msg)) => assert!(msg.contains("`nu`"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn round_trip() {
        let text = r#"{"model": {"kind": "pendulum", "m_s": 10, "m_p": 1, "ell": 5, "k_s": 4000,
            "gamma_s": 2, "gamma_p": 50, "g0": 981}, "epsilon": 3.5, "method": "both"}"#;
        let cfg = AnalysisConfig::from_json(text, None).unwrap();
        assert_eq!(
            AnalysisConfig::from_json(&cfg.to_json(), None).unwrap(),
            cfg
        );
        assert_eq!(cfg.psd, PsdConfig::default());
    }

    #[test]
    fn negative_epsilon_rejected() {
        let text = r#"{"model": {"kind": "faraday", "rho": 0.95, "nu": 0.1, "tension": 70, "g0": 1000,
            "alpha": 5, "depth": "infinite"}, "epsilon": -1}"#;
        match AnalysisConfig::from_json(text, None) {
            Err(CliError::Config(msg)) => assert!(msg.contains("epsilon")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_model_field_rejected() {
        let text = r#"{"model": {"kind": "faraday", "rho": 0.95, "nu": 0.1, "tension": 70, "g0": 1000,
            "alpha": 5, "depth": 1, "colour": 3}}"#;
        assert!(AnalysisConfig::from_json(text, None).is_err());
    }
}

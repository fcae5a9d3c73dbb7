use rayon::prelude::*;
use serde::Serialize;

use super::analyze::analyze;
use super::config::{AnalysisConfig, ModelConfig};
use super::CliError;
use crate::stability::StabilityReport;

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub report: Option<StabilityReport>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepSummary {
    pub alpha: f64,
    pub epsilon_crit: f64,
}

/// `steps` evenly spaced wavenumbers from `alpha_min` to `alpha_max`.
pub fn alpha_grid(alpha_min: f64, alpha_max: f64, steps: usize) -> Result<Vec<f64>, CliError> {
    if !(alpha_min > 0.0 && alpha_min < alpha_max && alpha_max.is_finite()) {
        return Err(CliError::Config(format!(
            "`alpha-min`/`alpha-max` need 0 < alpha-min < alpha-max, got {alpha_min} and {alpha_max}"
        )));
    }
    if steps < 2 {
        return Err(CliError::Config(format!(
            "`steps` must be at least 2, got {steps}"
        )));
    }
    let h = (alpha_max - alpha_min) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| {
            if i + 1 == steps {
                alpha_max
            } else {
                alpha_min + i as f64 * h
            }
        })
        .collect())
}

/// Runs the single-α analysis at every grid point. Failures are recorded per
/// row and do not stop the sweep.
pub fn sweep(
    cfg: &AnalysisConfig,
    alpha_min: f64,
    alpha_max: f64,
    steps: usize,
) -> Result<Vec<SweepRow>, CliError> {
    let ModelConfig::Faraday(base) = &cfg.model else {
        return Err(CliError::Config(
            "`model`: sweep needs a faraday model".into(),
        ));
    };
    let grid = alpha_grid(alpha_min, alpha_max, steps)?;
    Ok(grid
        .par_iter()
        .map(|&alpha| {
            let mut point = cfg.clone();
            point.model = ModelConfig::Faraday(base.with_alpha(alpha));
            match analyze(&point) {
                Ok(out) => SweepRow {
                    alpha,
                    report: Some(out.reports[0].clone()),
                    error: None,
                },
                Err(e) => SweepRow {
                    alpha,
                    report: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect())
}

/// Grid point with the smallest critical amplitude.
pub fn summarize(rows: &[SweepRow]) -> Option<SweepSummary> {
    rows.iter()
        .filter_map(|r| r.report.as_ref().map(|rep| (r.alpha, rep.epsilon_crit)))
        .fold(None, |best: Option<SweepSummary>, (alpha, e)| match best {
            Some(b) if b.epsilon_crit <= e => Some(b),
            _ => Some(SweepSummary {
                alpha,
                epsilon_crit: e,
            }),
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints() {
        let g = alpha_grid(1.0, 2.0, 3).unwrap();
        assert_eq!(g, vec![1.0, 1.5, 2.0]);
        assert!(alpha_grid(2.0, 1.0, 3).is_err());
        assert!(alpha_grid(1.0, 2.0, 1).is_err());
        assert!(alpha_grid(0.0, 2.0, 2).is_err());
    }
}

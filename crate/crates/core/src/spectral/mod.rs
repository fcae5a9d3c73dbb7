//! Narrow-band noise model: power spectral density, its extended spectral
//! density `G(z)` (closed form and quadrature), poles, residues and
//! autocorrelation.

mod poles;
mod psd;
pub mod quad;

use num_complex::Complex64 as C64;
use thiserror::Error;

pub use poles::PoleSet;
pub use psd::{gammas, NoisePsd};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("invalid noise model: {0}")]
    InvalidModel(String),
    #[error("G evaluated at {z}, on top of its pole {pole}")]
    AtPole { z: C64, pole: C64 },
    #[error("{0}")]
    OutsideDomain(String),
    #[error(
        "quadrature did not converge (error estimate {error:e} after {evaluations} evaluations)"
    )]
    QuadratureFailure { error: f64, evaluations: usize },
}

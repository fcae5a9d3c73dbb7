//! Concrete systems: the spring-mounted pendulum, viscous capillary-gravity
//! (Faraday) waves on a layer of finite or infinite depth, and null-space
//! reduction of constrained (KKT) systems. All quantities are in cgs units;
//! eigenvalues are in 1/s.

mod faraday;
mod kkt;
mod pendulum;

use thiserror::Error;

use crate::charfun::CharFunError;
use crate::linalg::LinalgError;

pub use faraday::{faraday_charfun, Depth, FaradayFinite, FaradayInfinite, FaradayParams};
pub use kkt::{kkt_reduce, KktReduction, KktSystem};
pub use pendulum::{pendulum_system, PendulumCharFun, PendulumParams};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("parameter `{name}` must be positive and finite, got {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error(transparent)]
    CharFun(#[from] CharFunError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

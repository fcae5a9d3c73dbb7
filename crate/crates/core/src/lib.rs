//! Second-moment stability of linear systems `B₀ ẋ = (A₀ + ε f(t) A₁) x`
//! driven by small colored noise `f(t)`.
//!
//! The growth rate of the second moment is `λ = λ₀ + ε²λ₂`. The correction
//! `λ₂` can be computed from the full eigen-decomposition of the pencil
//! `(A₀, B₀)` or, when `A₁ = u vᵀ` has rank one, from a finite sum over the
//! poles of the noise spectrum using only a scalar characteristic function.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod charfun;
pub mod cli;
pub mod linalg;
pub mod models;
pub mod spectral;
pub mod stability;

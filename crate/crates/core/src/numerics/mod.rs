//! Arbitrary-precision special functions on [`ComplexApprox`] values.

mod approx;
mod bernoulli;
mod elliptic;
mod eval;
mod gamma;
mod polylog;
mod zeta;

pub use approx::{ComplexApprox, Precision, Rigor};
pub use bernoulli::{bernoulli, bernoulli_poly};
pub use elliptic::{elliptic_e, elliptic_k, modulus_to_parameter};
pub use eval::{combined_rigor, eval_expression};
pub use gamma::{gamma, gamma_rational};
pub use polylog::polylog;
pub use zeta::{catalan, hurwitz_zeta, zeta_int};

pub(crate) use approx::{complex_abs, unit};
pub(crate) use zeta::hurwitz_core;

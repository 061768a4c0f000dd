//! Special-function and quadrature primitives shared by the rest of the
//! crate: generalized binomial coefficients, the modified Bessel function
//! I₀, the Gauss hypergeometric function ₂F₁ for non-positive argument, and
//! an adaptive Gauss–Kronrod integrator with semi-infinite support.
//!
//! Everything here is a pure function of its inputs.

mod bessel;
mod binomial;
mod hyp2f1;
mod quad;

pub use bessel::{bessel_i0, bessel_i0_scaled};
pub use binomial::gen_binomial;
pub use hyp2f1::gauss_2f1;
pub use quad::{
    integrate, integrate_1d, integrate_semi_inf, nested_integrate, Domain1D, QuadError,
    Quadrature,
};

use thiserror::Error;

/// Errors from series-based special function evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    #[error("series did not converge after {terms} terms (last term {last_term:e})")]
    NonConvergence { terms: usize, last_term: f64 },
    #[error("result overflows f64 for argument {arg}")]
    Overflow { arg: f64 },
    #[error("invalid argument: {0}")]
    Domain(String),
}

/// ln(cosh x), stable for any x (cosh itself overflows near |x| = 710).
pub fn ln_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

/// 1 − tanh s without cancellation: 2/(e^{2s} + 1). In plain f64 arithmetic
/// tanh s rounds to exactly 1 already at s ≈ 19, which would turn conditional
/// variances ∝ 1/(1 − tanh s) into infinities; this form stays positive up
/// to s ≈ 354.
pub fn one_minus_tanh(s: f64) -> f64 {
    2.0 / ((2.0 * s).exp() + 1.0)
}

/// 1 + tanh s in the same stable form, 2/(1 + e^{−2s}).
pub fn one_plus_tanh(s: f64) -> f64 {
    2.0 / (1.0 + (-2.0 * s).exp())
}

/// Compensated (Kahan) accumulator for long series sums.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub fn add(&mut self, term: f64) {
        let y = term - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

//! Numerical substrate: gamma function, Gauss rules, finite differences.

mod diff;
mod gamma;
mod quadrature;

pub use diff::{richardson_derivative, richardson_derivative_complex, Derivative};
pub use gamma::{beta, binomial, factorial, falling_factorial, gamma, ln_gamma};
pub use quadrature::{gauss_jacobi, gauss_jacobi_left, gauss_legendre, QuadratureRule, MAX_NODES};

pub(crate) use gamma::gamma_unchecked;

/// Node count used when the caller does not override it.
pub const DEFAULT_NODES: usize = 64;

//! Special functions and quadrature rules used throughout the crate.
//!
//! Everything here is dependency-free and pure; rules are immutable once
//! built and may be shared between threads.

mod bessel;
pub mod dd;
mod gamma;
mod hermite;
mod quadrature;

pub use dd::{Dd, DdComplex};
pub use bessel::{bessel_j0, bessel_j1, bessel_j1_over_x};
pub use gamma::{ln_gamma, log_binomial};
pub use hermite::{hermite_fn, hermite_fns, HERMITE_MAX_ORDER};
pub use quadrature::{
    gauss_hermite, gauss_legendre, gauss_legendre_panels, QuadratureRule, RuleKind,
    GAUSS_HERMITE_MAX_NODES,
};

/// `π^(-1/4)`, the normalisation of the ground-state Hermite function.
pub const PI_POW_NEG_QUARTER: f64 = 0.751_125_544_464_942_5;

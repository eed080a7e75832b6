//! Superoscillating sequences evolved under the one-dimensional Klein-Gordon
//! equation `(∂²ₜ − ∂²ₓ + m²) u = L`.
//!
//! The crate is organised bottom-up:
//!
//! * [`special`]: Bessel `J₀`/`J₁`, Hermite functions, Gauss-Hermite and
//!   panel Gauss-Legendre rules, log-binomials.
//! * [`superosc`]: the coefficients `C_j(n,a)`, the sequence `F_n(x,a)` in
//!   sum and product form, and the supershift combiner.
//! * [`kg_spectral`]: closed-form evolutions for every initial-data/source
//!   combination, their `n → ∞` limits and the infinite-order operator form.
//! * [`kg_green`]: an independent Green's-function quadrature solver used as
//!   a cross-oracle for the closed forms.
//! * [`bargmann`]: Fock-space kernels, the Segal-Bargmann transform and the
//!   integral representations it yields.
//! * [`stochastic`]: the kernel `r_{m,x}` and the covariance `K_{m,x}(s,t)`.
//! * [`verify`]: residual, ladder and oracle harnesses plus the acceptance
//!   suite.
//! * [`field`]: grid evaluation, CSV export and figure presets.

pub mod bargmann;
pub mod error;
pub mod field;
pub mod kg_green;
pub mod kg_spectral;
pub mod special;
pub mod stochastic;
pub mod superosc;
pub mod verify;

pub use num_complex::Complex64 as Complex;

pub use error::{Error, Result};
pub use kg_spectral::{InitialData, KgEvolution, KgProblem, SourceCase};
pub use special::{QuadratureRule, RuleKind};
pub use superosc::{CoefficientSet, Superoscillation, SuperoscillationParams};

//! Closed-form Klein-Gordon evolutions of superoscillating initial data.
//!
//! Two families of initial data are supported:
//!
//! * [`InitialData::ProblemOne`]: `u(x,0) = F_n(x,a)`, `∂ₜu(x,0) = ∂ₓF_n(x,a)`;
//! * [`InitialData::ProblemTwo`]: `u(x,0) = F_n(x,a)`, `∂ₜu(x,0) = F_n(x,b)`;
//!
//! each with source `L = 0`, `L = δ(x)` or (first family only)
//! `L = δ(x)δ(t)`. Every mode `e^{iλx}` evolves with frequency
//! `w = √(m² + λ²)`; the sourced cases add a particular solution that is
//! independent of `n` and vanishes outside the light cone `|x| < t`.
//!
//! All mode sums run in double-double arithmetic (see
//! [`crate::special::dd`]) and are rounded once at the end.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::special::{bessel_j0, gauss_legendre, Dd, DdComplex, QuadratureRule};
use crate::superosc::{Superoscillation, SuperoscillationParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum InitialData {
    /// `u(x,0) = F_n(x,a)`, `∂ₜu(x,0) = ∂ₓF_n(x,a)`.
    ProblemOne { a: f64 },
    /// `u(x,0) = F_n(x,a)`, `∂ₜu(x,0) = F_n(x,b)`.
    ProblemTwo { a: f64, b: f64 },
}

impl InitialData {
    pub fn a(&self) -> f64 {
        match *self {
            InitialData::ProblemOne { a } | InitialData::ProblemTwo { a, .. } => a,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceCase {
    Zero,
    /// `L(x,t) = δ(x)`.
    DiracSpace,
    /// `L(x,t) = δ(x)δ(t)`.
    DiracSpaceTime,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KgProblem {
    pub m: f64,
    pub initial: InitialData,
    pub source: SourceCase,
}

impl KgProblem {
    pub fn new(m: f64, initial: InitialData, source: SourceCase) -> Result<Self> {
        if !(m.is_finite() && m >= 0.0) {
            return Err(Error::param("m", format!("mass {m} must be finite and non-negative")));
        }
        let finite = match initial {
            InitialData::ProblemOne { a } => a.is_finite(),
            InitialData::ProblemTwo { a, b } => a.is_finite() && b.is_finite(),
        };
        if !finite {
            return Err(Error::param("a/b", "initial-data parameters must be finite"));
        }
        if source == SourceCase::DiracSpaceTime && matches!(initial, InitialData::ProblemTwo { .. }) {
            return Err(Error::InvalidProblem(
                "a space-time Dirac source is only solved for F_n' initial velocity".into(),
            ));
        }
        Ok(KgProblem { m, initial, source })
    }
}

/// `θ_{ω,m}(t) = cos(w t) + i (ω/w) sin(w t)`, `w = √(m² + ω²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaKernel {
    pub omega: f64,
    pub m: f64,
}

impl ThetaKernel {
    pub fn eval(&self, t: f64) -> Complex64 {
        theta_dd(Dd::new(self.omega), self.m, t).to_complex()
    }

    /// `w_m = √(m² + ω²)`.
    pub fn frequency(&self) -> f64 {
        self.m.hypot(self.omega)
    }
}

pub fn theta(omega: f64, m: f64, t: f64) -> Complex64 {
    ThetaKernel { omega, m }.eval(t)
}

fn dispersion(omega: Dd, m: f64) -> Dd {
    (omega * omega + Dd::new(m) * Dd::new(m)).sqrt()
}

fn theta_dd(omega: Dd, m: f64, t: f64) -> DdComplex {
    let w = dispersion(omega, m);
    if w.hi == 0.0 {
        return DdComplex::ONE;
    }
    let (s, c) = w.mul_f64(t).sin_cos();
    DdComplex::new(c, (omega / w) * s)
}

/// `sin(w t)/w`, continuous through `w = 0`.
fn sin_over_w(w: Dd, t: f64) -> Dd {
    let wt = w.mul_f64(t);
    if wt.hi.abs() < 1e-4 {
        let q = wt * wt;
        Dd::new(t) * (Dd::ONE - q.div_f64(6.0) + (q * q).div_f64(120.0))
    } else {
        wt.sin_cos().0 / w
    }
}

/// Quadrature for the causal particular term: a Gauss-Legendre rule of
/// `order` points on each of `panels_per_unit` panels per unit length.
#[derive(Debug, Clone)]
pub struct CausalQuadrature {
    base: QuadratureRule,
    panels_per_unit: usize,
}

impl CausalQuadrature {
    pub fn new(panels_per_unit: usize, order: usize) -> Result<Self> {
        if panels_per_unit == 0 {
            return Err(Error::param("panels_per_unit", "must be at least 1"));
        }
        Ok(CausalQuadrature {
            base: gauss_legendre(order)?,
            panels_per_unit,
        })
    }

    pub fn panels_for(&self, length: f64) -> usize {
        ((self.panels_per_unit as f64 * length).ceil() as usize).max(1)
    }

    pub fn base(&self) -> &QuadratureRule {
        &self.base
    }
}

impl Default for CausalQuadrature {
    fn default() -> Self {
        CausalQuadrature::new(16, 10).expect("static rule")
    }
}

/// Particular solution for `L = δ(x)` with zero initial data:
/// `½ ∫_{|x|}^{t} J₀(m√(s² − x²)) ds` inside the light cone, `0` outside.
///
/// Any `t ≤ |x|`, including negative `t`, returns exactly zero.
pub fn particular_dirac_space(m: f64, x: f64, t: f64, quad: &CausalQuadrature) -> f64 {
    let ax = x.abs();
    if t <= ax {
        return 0.0;
    }
    let panels = quad.panels_for(t - ax);
    let integral: f64 = quad.base.integrate_panels(ax, t, panels, |s| {
        let r2 = (s - ax) * (s + ax);
        bessel_j0(m * r2.max(0.0).sqrt())
    });
    0.5 * integral
}

/// `½ H(t − |x|) J₀(m√(t² − x²))` with `H(0) = 1`; zero at `t = 0`.
pub fn particular_dirac_spacetime(m: f64, x: f64, t: f64) -> f64 {
    let ax = x.abs();
    if t <= 0.0 || t < ax {
        return 0.0;
    }
    0.5 * bessel_j0(m * ((t - ax) * (t + ax)).sqrt())
}

/// A superoscillating initial-value problem ready for pointwise evaluation.
#[derive(Debug, Clone)]
pub struct KgEvolution {
    n: u32,
    problem: KgProblem,
    initial: Superoscillation,
    velocity: Option<Superoscillation>,
    quad: CausalQuadrature,
}

impl KgEvolution {
    pub fn new(n: u32, problem: KgProblem) -> Result<Self> {
        let problem = KgProblem::new(problem.m, problem.initial, problem.source)?;
        let initial = Superoscillation::new(SuperoscillationParams::new(n, problem.initial.a())?)?;
        let velocity = match problem.initial {
            InitialData::ProblemOne { .. } => None,
            InitialData::ProblemTwo { b, .. } => {
                Some(Superoscillation::new(SuperoscillationParams::new(n, b)?)?)
            }
        };
        Ok(KgEvolution {
            n,
            problem,
            initial,
            velocity,
            quad: CausalQuadrature::default(),
        })
    }

    pub fn with_quadrature(mut self, quad: CausalQuadrature) -> Self {
        self.quad = quad;
        self
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn problem(&self) -> &KgProblem {
        &self.problem
    }

    pub fn initial(&self) -> &Superoscillation {
        &self.initial
    }

    /// The source-free part of the solution.
    pub fn homogeneous(&self, x: f64, t: f64) -> Complex64 {
        if t == 0.0 {
            // θ(·,·,0) = 1 and sin(0)/w = 0: the initial profile itself.
            return self.initial.eval_sum(x);
        }
        let m = self.problem.m;
        match &self.velocity {
            None => self
                .initial
                .supershift_dd(|l| DdComplex::cis(l.mul_f64(x)) * theta_dd(l, m, t))
                .to_complex(),
            Some(vel) => {
                let cos_part = self.initial.supershift_dd(|l| {
                    let (_, c) = dispersion(l, m).mul_f64(t).sin_cos();
                    DdComplex::cis(l.mul_f64(x)).scale(c)
                });
                let sin_part = vel.supershift_dd(|l| {
                    DdComplex::cis(l.mul_f64(x)).scale(sin_over_w(dispersion(l, m), t))
                });
                (cos_part + sin_part).to_complex()
            }
        }
    }

    /// The `n`-independent particular solution of the sourced cases.
    pub fn particular(&self, x: f64, t: f64) -> f64 {
        match self.problem.source {
            SourceCase::Zero => 0.0,
            SourceCase::DiracSpace => particular_dirac_space(self.problem.m, x, t, &self.quad),
            SourceCase::DiracSpaceTime => particular_dirac_spacetime(self.problem.m, x, t),
        }
    }

    pub fn eval(&self, x: f64, t: f64) -> Complex64 {
        add_real(self.homogeneous(x, t), self.particular(x, t))
    }

    /// The `n → ∞` limit at the same point.
    pub fn limit(&self, x: f64, t: f64) -> Complex64 {
        let m = self.problem.m;
        let h = match self.problem.initial {
            InitialData::ProblemOne { a } => evolve_homogeneous_limit(a, m, x, t),
            InitialData::ProblemTwo { a, b } => evolve_problem2_limit(a, b, m, x, t),
        };
        add_real(h, self.particular(x, t))
    }

    /// Source-free evolution through the truncated infinite-order operators
    /// `𝒰₁ + D_x 𝒰₂`, applied at eigenvalue level (`D_x e^{iλx} = iλ e^{iλx}`).
    ///
    /// `order` is the number of retained series terms in each operator.
    /// Only meaningful for [`InitialData::ProblemOne`].
    pub fn operator_truncated(&self, x: f64, t: f64, order: usize) -> Result<Complex64> {
        if order == 0 {
            return Err(Error::param("order", "must be at least 1"));
        }
        if self.velocity.is_some() {
            return Err(Error::InvalidProblem(
                "the operator form is stated for F_n' initial velocity".into(),
            ));
        }
        let m = Dd::new(self.problem.m);
        let t2 = Dd::new(t) * Dd::new(t);
        Ok(self
            .initial
            .supershift_dd(|l| {
                let w2 = m * m + l * l;
                let step = -(w2 * t2);
                let mut cos_term = Dd::ONE;
                let mut sin_term = Dd::new(t);
                let mut u1 = cos_term;
                let mut u2 = sin_term;
                for k in 1..order {
                    let k = k as f64;
                    cos_term = (cos_term * step).div_f64((2.0 * k - 1.0) * (2.0 * k));
                    sin_term = (sin_term * step).div_f64((2.0 * k) * (2.0 * k + 1.0));
                    u1 = u1 + cos_term;
                    u2 = u2 + sin_term;
                }
                // 𝒰₁ + (iλ)𝒰₂
                let bracket = DdComplex::new(u1, l * u2);
                DdComplex::cis(l.mul_f64(x)) * bracket
            })
            .to_complex())
    }
}

fn add_real(z: Complex64, p: f64) -> Complex64 {
    if p == 0.0 {
        z
    } else {
        Complex64::new(z.re + p, z.im)
    }
}

fn p1(n: u32, a: f64, m: f64, source: SourceCase) -> Result<KgEvolution> {
    KgEvolution::new(n, KgProblem::new(m, InitialData::ProblemOne { a }, source)?)
}

fn p2(n: u32, a: f64, b: f64, m: f64, source: SourceCase) -> Result<KgEvolution> {
    KgEvolution::new(n, KgProblem::new(m, InitialData::ProblemTwo { a, b }, source)?)
}

/// `u_n(x,t) = Σ_j C_j(n,a) e^{iλ_j x} θ_{λ_j,m}(t)`.
pub fn evolve_homogeneous(n: u32, a: f64, m: f64, x: f64, t: f64) -> Result<Complex64> {
    Ok(p1(n, a, m, SourceCase::Zero)?.eval(x, t))
}

/// `u(x,t) = e^{iax} θ_{a,m}(t)`.
pub fn evolve_homogeneous_limit(a: f64, m: f64, x: f64, t: f64) -> Complex64 {
    Complex64::cis(a * x) * theta(a, m, t)
}

pub fn evolve_operator_truncated(
    n: u32,
    a: f64,
    m: f64,
    x: f64,
    t: f64,
    order: usize,
) -> Result<Complex64> {
    p1(n, a, m, SourceCase::Zero)?.operator_truncated(x, t, order)
}

/// Homogeneous evolution plus the `δ(x)` particular solution.
pub fn evolve_dirac_space(n: u32, a: f64, m: f64, x: f64, t: f64) -> Result<Complex64> {
    Ok(p1(n, a, m, SourceCase::DiracSpace)?.eval(x, t))
}

/// Homogeneous evolution plus `½ H(t−|x|) J₀(m√(t²−x²))`.
pub fn evolve_dirac_spacetime(n: u32, a: f64, m: f64, x: f64, t: f64) -> Result<Complex64> {
    Ok(p1(n, a, m, SourceCase::DiracSpaceTime)?.eval(x, t))
}

/// `Σ C_j(n,a) e^{iλ_j x} cos(w_j t) + Σ C_j(n,b) e^{iλ_j x} sin(w_j t)/w_j`.
pub fn evolve_problem2(n: u32, a: f64, b: f64, m: f64, x: f64, t: f64) -> Result<Complex64> {
    Ok(p2(n, a, b, m, SourceCase::Zero)?.eval(x, t))
}

/// `e^{iax} cos(√(m²+a²) t) + e^{ibx} sin(√(m²+b²) t)/√(m²+b²)`.
pub fn evolve_problem2_limit(a: f64, b: f64, m: f64, x: f64, t: f64) -> Complex64 {
    let wa = m.hypot(a);
    let wb = Dd::new(m.hypot(b));
    Complex64::cis(a * x) * (wa * t).cos() + Complex64::cis(b * x) * sin_over_w(wb, t).to_f64()
}

pub fn evolve_problem2_dirac_space(
    n: u32,
    a: f64,
    b: f64,
    m: f64,
    x: f64,
    t: f64,
) -> Result<Complex64> {
    Ok(p2(n, a, b, m, SourceCase::DiracSpace)?.eval(x, t))
}

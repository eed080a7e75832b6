//! General initial-value solver for `(∂²ₜ − ∂²ₓ + m²)u = L` built from the
//! retarded Green's function and plain quadrature:
//!
//! ```text
//! u(x,t) = ½[f(x−t) + f(x+t)]
//!        + ½ ∫_{x−t}^{x+t} J₀(m√(t²−(x−ξ)²)) g(ξ) dξ
//!        − ½ m² t ∫_{x−t}^{x+t} J₁(ρ)/ρ f(ξ) dξ,     ρ = m√(t²−(x−ξ)²)
//!        + ½ ∫₀ᵗ ∫_{|x−ξ|<t−τ} J₀(m√((t−τ)²−(x−ξ)²)) L(ξ,τ) dξ dτ
//! ```
//!
//! It knows nothing about superoscillations and is used to cross-check the
//! closed forms in [`crate::kg_spectral`].

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kg_spectral::{InitialData, KgProblem, SourceCase};
use crate::special::{bessel_j0, bessel_j1_over_x, gauss_legendre, QuadratureRule};
use crate::superosc::{Superoscillation, SuperoscillationParams};

pub type ScalarFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;
pub type SourceFn = Arc<dyn Fn(f64, f64) -> Complex64 + Send + Sync>;

#[derive(Clone)]
pub enum Source {
    Zero,
    /// `δ(x)`
    DiracSpace,
    /// `δ(x)δ(t)`
    DiracSpaceTime,
    /// A smooth source `L(x, t)`.
    Field(SourceFn),
}

impl fmt::Debug for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Zero => f.write_str("Zero"),
            Source::DiracSpace => f.write_str("DiracSpace"),
            Source::DiracSpaceTime => f.write_str("DiracSpaceTime"),
            Source::Field(_) => f.write_str("Field(..)"),
        }
    }
}

impl From<SourceCase> for Source {
    fn from(c: SourceCase) -> Self {
        match c {
            SourceCase::Zero => Source::Zero,
            SourceCase::DiracSpace => Source::DiracSpace,
            SourceCase::DiracSpaceTime => Source::DiracSpaceTime,
        }
    }
}

/// Composite Gauss-Legendre settings plus the refinement-pair tolerance.
#[derive(Debug, Clone)]
pub struct GreenQuadrature {
    rule: QuadratureRule,
    pub panels_per_unit: usize,
    /// Allowed `|fine − coarse|`, relative to `max(1, |fine|)`.
    pub tol: f64,
}

impl GreenQuadrature {
    pub fn new(panels_per_unit: usize, order: usize, tol: f64) -> Result<Self> {
        if panels_per_unit == 0 {
            return Err(Error::param("panels_per_unit", "must be at least 1"));
        }
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Error::param("tol", "must be positive"));
        }
        Ok(GreenQuadrature {
            rule: gauss_legendre(order)?,
            panels_per_unit,
            tol,
        })
    }

    pub fn order(&self) -> usize {
        self.rule.len()
    }

    fn panels(&self, length: f64, refine: usize) -> usize {
        ((self.panels_per_unit as f64 * length).ceil() as usize).max(1) * refine
    }
}

impl Default for GreenQuadrature {
    fn default() -> Self {
        GreenQuadrature::new(16, 10, 1e-9).expect("static rule")
    }
}

#[derive(Clone)]
pub struct IvpSpec {
    pub m: f64,
    pub f: ScalarFn,
    pub g: ScalarFn,
    pub source: Source,
    pub quad: GreenQuadrature,
}

impl fmt::Debug for IvpSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IvpSpec")
            .field("m", &self.m)
            .field("source", &self.source)
            .field("quad", &self.quad)
            .finish_non_exhaustive()
    }
}

impl IvpSpec {
    pub fn new<F, G>(m: f64, f: F, g: G, source: Source) -> Result<Self>
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
        G: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        if !(m.is_finite() && m >= 0.0) {
            return Err(Error::param("m", format!("mass {m} must be finite and non-negative")));
        }
        Ok(IvpSpec {
            m,
            f: Arc::new(f),
            g: Arc::new(g),
            source,
            quad: GreenQuadrature::default(),
        })
    }

    /// Initial data of a superoscillating problem, as plain callbacks.
    pub fn from_problem(n: u32, problem: &KgProblem) -> Result<Self> {
        let p = KgProblem::new(problem.m, problem.initial, problem.source)?;
        let fa = Arc::new(Superoscillation::new(SuperoscillationParams::new(n, p.initial.a())?)?);
        let f = {
            let fa = Arc::clone(&fa);
            move |x: f64| fa.eval_sum(x)
        };
        match p.initial {
            InitialData::ProblemOne { .. } => {
                IvpSpec::new(p.m, f, move |x: f64| fa.eval_derivative(x), p.source.into())
            }
            InitialData::ProblemTwo { b, .. } => {
                let fb = Superoscillation::new(SuperoscillationParams::new(n, b)?)?;
                IvpSpec::new(p.m, f, move |x: f64| fb.eval_sum(x), p.source.into())
            }
        }
    }

    pub fn with_quadrature(mut self, quad: GreenQuadrature) -> Self {
        self.quad = quad;
        self
    }
}

/// Solution at `(x, t)`; evaluated twice (panel count doubled) and rejected
/// when the pair disagrees beyond `spec.quad.tol`.
pub fn green_solve(spec: &IvpSpec, x: f64, t: f64) -> Result<Complex64> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::param("t", format!("time {t} must be finite and non-negative")));
    }
    if !x.is_finite() {
        return Err(Error::param("x", "must be finite"));
    }
    let coarse = solve_at(spec, x, t, 1);
    let fine = solve_at(spec, x, t, 2);
    check_pair(coarse, fine, spec.quad.tol)?;
    Ok(fine)
}

/// Single evaluation without the refinement check, `refine` × the default panels.
pub fn green_solve_unchecked(spec: &IvpSpec, x: f64, t: f64, refine: usize) -> Complex64 {
    solve_at(spec, x, t, refine.max(1))
}

fn check_pair(coarse: Complex64, fine: Complex64, tol: f64) -> Result<()> {
    if (fine - coarse).norm() > tol * fine.norm().max(1.0) {
        return Err(Error::QuadratureNotConverged {
            coarse: coarse.to_string(),
            fine: fine.to_string(),
            tol,
        });
    }
    Ok(())
}

fn solve_at(spec: &IvpSpec, x: f64, t: f64, refine: usize) -> Complex64 {
    let m = spec.m;
    let (f, g) = (&spec.f, &spec.g);
    let mut u = (f(x - t) + f(x + t)) * 0.5;
    if t > 0.0 {
        let q = &spec.quad;
        let panels = q.panels(2.0 * t, refine);
        // integrate in s = ξ − x so the kernel argument is formed without cancellation
        let rho = |s: f64| m * ((t - s) * (t + s)).max(0.0).sqrt();
        let tg: Complex64 = q
            .rule
            .integrate_panels(-t, t, panels, |s| g(x + s) * bessel_j0(rho(s)));
        u += tg * 0.5;
        if m > 0.0 {
            let tf: Complex64 = q
                .rule
                .integrate_panels(-t, t, panels, |s| f(x + s) * bessel_j1_over_x(rho(s)));
            u -= tf * (0.5 * m * m * t);
        }
    }
    u + source_at(spec, x, t, refine)
}

fn source_at(spec: &IvpSpec, x: f64, t: f64, refine: usize) -> Complex64 {
    match &spec.source {
        Source::Zero => Complex64::new(0.0, 0.0),
        Source::DiracSpace => Complex64::new(dirac_space(spec.m, x, t, &spec.quad, refine), 0.0),
        Source::DiracSpaceTime => Complex64::new(dirac_spacetime(spec.m, x, t), 0.0),
        Source::Field(l) => {
            if t <= 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let q = &spec.quad;
            let m = spec.m;
            let outer = q.panels(t, refine);
            q.rule.integrate_panels(0.0, t, outer, |tau: f64| {
                let r = t - tau;
                let inner = q.panels(2.0 * r, refine);
                q.rule.integrate_panels(-r, r, inner, |s: f64| {
                    l(x + s, tau) * bessel_j0(m * ((r - s) * (r + s)).max(0.0).sqrt())
                })
            }) * 0.5
        }
    }
}

/// `δ(ξ)` collapses the spatial integral: `½ ∫₀^{t−|x|} J₀(m√((t−τ)²−x²)) dτ`.
fn dirac_space(m: f64, x: f64, t: f64, q: &GreenQuadrature, refine: usize) -> f64 {
    let ax = x.abs();
    let len = t - ax;
    if len <= 0.0 {
        return 0.0;
    }
    let panels = q.panels(len, refine);
    0.5 * q.rule.integrate_panels(0.0, len, panels, |tau: f64| {
        let r = t - tau;
        bessel_j0(m * ((r - ax) * (r + ax)).max(0.0).sqrt())
    })
}

/// `δ(ξ)δ(τ)` collapses both integrals: `½ H(t−|x|) J₀(m√(t²−x²))`, with
/// `H(0) = 1` on the light cone for `t > 0` and no contribution at `t = 0`.
fn dirac_spacetime(m: f64, x: f64, t: f64) -> f64 {
    let ax = x.abs();
    if t <= 0.0 || ax > t {
        return 0.0;
    }
    0.5 * bessel_j0(m * ((t - ax) * (t + ax)).sqrt())
}

/// The source contribution alone (zero initial data) for a Dirac source.
pub fn green_source_term(m: f64, source: SourceCase, x: f64, t: f64) -> Result<f64> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::param("t", format!("time {t} must be finite and non-negative")));
    }
    match source {
        SourceCase::Zero => Ok(0.0),
        SourceCase::DiracSpaceTime => Ok(dirac_spacetime(m, x, t)),
        SourceCase::DiracSpace => {
            let q = GreenQuadrature::default();
            let coarse = dirac_space(m, x, t, &q, 1);
            let fine = dirac_space(m, x, t, &q, 2);
            check_pair(coarse.into(), fine.into(), q.tol)?;
            Ok(fine)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kg_spectral::KgEvolution;
    use crate::special::bessel_j0;

    fn zero(_: f64) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }

    #[test]
    fn trivial_data_gives_zero() {
        let spec = IvpSpec::new(2.0, zero, zero, Source::Zero).unwrap();
        assert_eq!(green_solve(&spec, 0.4, 1.3).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn massless_plane_wave_is_dalembert() {
        let a = 1.7;
        let spec = IvpSpec::new(
            0.0,
            move |x| Complex64::cis(a * x),
            move |x| Complex64::new(0.0, a) * Complex64::cis(a * x),
            Source::Zero,
        )
        .unwrap();
        for &(x, t) in &[(0.0, 0.0), (0.3, 0.8), (-2.0, 3.5)] {
            let got = green_solve(&spec, x, t).unwrap();
            assert!((got - Complex64::cis(a * (x + t))).norm() < 1e-10, "({x},{t})");
        }
    }

    #[test]
    fn massive_plane_wave() {
        // f = e^{iωx}, g = 0 ⇒ u = e^{iωx} cos(wt)
        let (om, m): (f64, f64) = (0.8, 2.5);
        let w = m.hypot(om);
        let spec = IvpSpec::new(m, move |x| Complex64::cis(om * x), zero, Source::Zero).unwrap();
        for &(x, t) in &[(0.3, 0.8), (1.0, 2.0)] {
            let got = green_solve(&spec, x, t).unwrap();
            let want = Complex64::cis(om * x) * (w * t).cos();
            assert!((got - want).norm() < 1e-10, "({x},{t}) {got} {want}");
        }
    }

    #[test]
    fn matches_closed_form_homogeneous() {
        let problem = KgProblem::new(3.0, InitialData::ProblemOne { a: 1.5 }, SourceCase::Zero).unwrap();
        let spec = IvpSpec::from_problem(6, &problem).unwrap();
        let ev = KgEvolution::new(6, problem).unwrap();
        let got = green_solve(&spec, 0.3, 0.8).unwrap();
        assert!((got - ev.eval(0.3, 0.8)).norm() < 1e-8);
    }

    #[test]
    fn matches_closed_form_for_every_case() {
        let cases = [
            (InitialData::ProblemOne { a: 1.5 }, SourceCase::Zero),
            (InitialData::ProblemOne { a: 1.5 }, SourceCase::DiracSpace),
            (InitialData::ProblemOne { a: 1.5 }, SourceCase::DiracSpaceTime),
            (InitialData::ProblemTwo { a: 1.5, b: 2.0 }, SourceCase::Zero),
            (InitialData::ProblemTwo { a: 1.5, b: 2.0 }, SourceCase::DiracSpace),
        ];
        for (init, src) in cases {
            let problem = KgProblem::new(2.0, init, src).unwrap();
            let spec = IvpSpec::from_problem(8, &problem).unwrap();
            let ev = KgEvolution::new(8, problem).unwrap();
            for &x in &[-1.0, -0.3, 0.2, 0.9] {
                for &t in &[0.0, 0.4, 1.1] {
                    let d = (green_solve(&spec, x, t).unwrap() - ev.eval(x, t)).norm();
                    assert!(d < 1e-7, "{init:?} {src:?} ({x},{t}) diff {d}");
                }
            }
        }
    }

    #[test]
    fn source_term_examples() {
        assert_eq!(green_source_term(3.0, SourceCase::DiracSpaceTime, 2.0, 1.0).unwrap(), 0.0);
        for &t in &[0.5, 2.0] {
            let v = green_source_term(0.0, SourceCase::DiracSpace, 0.0, t).unwrap();
            assert!((v - t / 2.0).abs() < 1e-14);
            let d = green_source_term(1.5, SourceCase::DiracSpaceTime, 0.0, t).unwrap();
            assert_eq!(d, 0.5 * bessel_j0(1.5 * t));
        }
        let v = green_source_term(3.0, SourceCase::DiracSpace, 0.2, 1.0).unwrap();
        assert!((v - 0.157_413_868_019_709_32).abs() < 1e-12);
        assert!(green_source_term(1.0, SourceCase::DiracSpace, 0.0, -1.0).is_err());
    }

    #[test]
    fn finite_speed_of_propagation() {
        let spec = IvpSpec::new(2.0, zero, zero, Source::DiracSpaceTime).unwrap();
        for &(x, t) in &[(1.5, 1.0), (-3.0, 2.9)] {
            assert_eq!(green_solve(&spec, x, t).unwrap(), Complex64::new(0.0, 0.0));
        }
        let spec = IvpSpec::new(2.0, zero, zero, Source::DiracSpace).unwrap();
        assert_eq!(green_solve(&spec, 1.5, 1.0).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn constant_field_source() {
        // L = 1, zero data ⇒ u = (1 − cos(mt))/m², and t²/2 for m = 0
        let one = |_: f64, _: f64| Complex64::new(1.0, 0.0);
        let spec = IvpSpec::new(2.0, zero, zero, Source::Field(Arc::new(one))).unwrap();
        let t: f64 = 1.3;
        let got = green_solve(&spec, 0.4, t).unwrap();
        assert!((got.re - (1.0 - (2.0 * t).cos()) / 4.0).abs() < 1e-10, "{got}");
        let spec = IvpSpec::new(0.0, zero, zero, Source::Field(Arc::new(one))).unwrap();
        let got = green_solve(&spec, 0.4, t).unwrap();
        assert!((got.re - t * t / 2.0).abs() < 1e-12);
    }

    #[test]
    fn refinement_pair_is_tight_on_smooth_data() {
        let problem =
            KgProblem::new(3.0, InitialData::ProblemTwo { a: 1.5, b: 2.0 }, SourceCase::DiracSpace).unwrap();
        let spec = IvpSpec::from_problem(10, &problem).unwrap();
        for &(x, t) in &[(0.1, 0.5), (-0.7, 2.0)] {
            let c = green_solve_unchecked(&spec, x, t, 1);
            let f = green_solve_unchecked(&spec, x, t, 2);
            assert!((c - f).norm() < 1e-9);
        }
    }

    #[test]
    fn coarse_rule_is_reported() {
        let spec = IvpSpec::new(0.0, |x| Complex64::cis(40.0 * x), |x| Complex64::cis(40.0 * x), Source::Zero)
            .unwrap()
            .with_quadrature(GreenQuadrature::new(1, 2, 1e-12).unwrap());
        match green_solve(&spec, 0.0, 3.0) {
            Err(Error::QuadratureNotConverged { .. }) => {}
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(IvpSpec::new(-1.0, zero, zero, Source::Zero).is_err());
        let spec = IvpSpec::new(1.0, zero, zero, Source::Zero).unwrap();
        assert!(green_solve(&spec, 0.0, -0.1).is_err());
        assert!(GreenQuadrature::new(0, 10, 1e-9).is_err());
    }
}

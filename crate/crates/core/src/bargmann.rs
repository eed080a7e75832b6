//! Fock space, the Segal-Bargmann transform and its inverse.
//!
//! The Fock space carries the probability measure `e^{−|z|²} dλ(z)/π`.
//! Plane integrals use a tensor Gauss-Hermite rule in `(Re z, Im z)`, each
//! axis rescaled so the integrand's own Gaussian envelope matches the rule's
//! weight (see [`PlaneRule`]). Line integrals over `x` use the same scaled
//! Gauss-Hermite rule with scale 1.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kg_spectral::{theta, KgEvolution};
use crate::special::{gauss_hermite, QuadratureRule, PI_POW_NEG_QUARTER};
use crate::superosc::{frequency, Superoscillation, SuperoscillationParams};

/// `π^{1/4}`
const PI_POW_QUARTER: f64 = 1.331_335_363_800_389_7;

/// `K(z,w) = e^{z w̄}`.
pub fn fock_kernel(z: Complex64, w: Complex64) -> Complex64 {
    (z * w.conj()).exp()
}

/// `k_w(z) = e^{z w̄ − |w|²/2}`, the unit-norm coherent state at `w`.
pub fn normalized_kernel(z: Complex64, w: Complex64) -> Complex64 {
    (z * w.conj() - 0.5 * w.norm_sqr()).exp()
}

/// `A(z,x) = π^{−1/4} e^{−(x² + z̄²)/2 + √2 z̄ x}`.
pub fn sb_kernel(z: Complex64, x: f64) -> Complex64 {
    let zb = z.conj();
    PI_POW_NEG_QUARTER * (-(x * x + zb * zb) * 0.5 + zb * (SQRT_2 * x)).exp()
}

/// Integrand of the forward transform without `ψ`; conjugate-free in `z`.
fn forward_kernel(z: Complex64, x: f64) -> Complex64 {
    PI_POW_NEG_QUARTER * (-(x * x + z * z) * 0.5 + z * (SQRT_2 * x)).exp()
}

/// `(Bψ)(z) = π^{−1/4} ∫ e^{−(x²+z²)/2 + √2 z x} ψ(x) dx` with a single
/// Gauss-Hermite rule. The integrand is evaluated whole and divided by the
/// rule's weight, so `ψ` only needs enough decay for the full integrand to
/// be Gaussian-dominated (true for `ψ_k` and for the damped profiles of
/// [`regularized_solution`]).
pub fn sb_forward<F>(psi: F, z: Complex64, rule: &QuadratureRule) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    rule.integrate_scaled(1.0, |x| forward_kernel(z, x) * psi(x))
}

/// A coarse/fine pair of line rules and the allowed disagreement.
#[derive(Debug, Clone)]
pub struct LineQuadrature {
    pub coarse: QuadratureRule,
    pub fine: QuadratureRule,
    pub tol: f64,
}

impl LineQuadrature {
    pub fn new(coarse: usize, fine: usize, tol: f64) -> Result<Self> {
        Ok(LineQuadrature {
            coarse: gauss_hermite(coarse)?,
            fine: gauss_hermite(fine)?,
            tol,
        })
    }
}

impl Default for LineQuadrature {
    fn default() -> Self {
        LineQuadrature::new(64, 96, 1e-9).expect("static rule")
    }
}

pub fn sb_forward_checked<F>(psi: F, z: Complex64, quad: &LineQuadrature) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let c = sb_forward(&psi, z, &quad.coarse);
    let f = sb_forward(&psi, z, &quad.fine);
    check_pair(c, f, quad.tol)?;
    Ok(f)
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

/// Tensor Gauss-Hermite rule for `(1/π) ∬ F(z) dλ(z)`.
///
/// `F` is the whole integrand, weight included. With `z = sᵣ y₁ + i sᵢ y₂`
/// the sum is `sᵣ sᵢ Σ W₁ W₂ F(z)` where `W = w e^{y²}`; the scales should
/// match the Gaussian envelope of `F` along each axis (1 for Fock inner
/// products).
#[derive(Debug, Clone)]
pub struct PlaneRule {
    re: QuadratureRule,
    im: QuadratureRule,
    re_scale: f64,
    im_scale: f64,
}

impl PlaneRule {
    pub fn new(n_re: usize, n_im: usize, re_scale: f64, im_scale: f64) -> Result<Self> {
        if !(re_scale > 0.0 && im_scale > 0.0) {
            return Err(Error::param("scale", "axis scales must be positive"));
        }
        Ok(PlaneRule {
            re: gauss_hermite(n_re)?,
            im: gauss_hermite(n_im)?,
            re_scale,
            im_scale,
        })
    }

    /// Unscaled rule, for integrands whose envelope is `e^{−|z|²}`.
    pub fn fock(n: usize) -> Result<Self> {
        PlaneRule::new(n, n, 1.0, 1.0)
    }

    /// Rule for the inversion integrand, whose envelope is
    /// `e^{−3(Re z)²/2 − (Im z)²/2}`.
    pub fn inversion(n: usize) -> Result<Self> {
        PlaneRule::new(n, n, (2.0f64 / 3.0).sqrt(), SQRT_2)
    }

    pub fn integrate<F>(&self, f: F) -> Complex64
    where
        F: Fn(Complex64) -> Complex64 + Sync,
    {
        let (sr, si) = (self.re_scale, self.im_scale);
        let im_nodes = self.im.nodes();
        let im_w = self.im.scaled_weights();
        let rows: Vec<Complex64> = self
            .re
            .nodes()
            .par_iter()
            .zip(self.re.scaled_weights().par_iter())
            .map(|(&u, &wu)| {
                let mut row = Complex64::new(0.0, 0.0);
                for (&v, &wv) in im_nodes.iter().zip(im_w) {
                    row += f(Complex64::new(sr * u, si * v)) * wv;
                }
                row * wu
            })
            .collect();
        // fixed summation order regardless of thread count
        rows.into_iter().sum::<Complex64>() * (sr * si / PI)
    }
}

#[derive(Debug, Clone)]
pub struct PlaneQuadrature {
    pub coarse: PlaneRule,
    pub fine: PlaneRule,
    pub tol: f64,
}

impl PlaneQuadrature {
    pub fn inversion(coarse: usize, fine: usize, tol: f64) -> Result<Self> {
        Ok(PlaneQuadrature {
            coarse: PlaneRule::inversion(coarse)?,
            fine: PlaneRule::inversion(fine)?,
            tol,
        })
    }

    pub fn integrate<F>(&self, f: F) -> Result<Complex64>
    where
        F: Fn(Complex64) -> Complex64 + Sync,
    {
        let c = self.coarse.integrate(&f);
        let fine = self.fine.integrate(&f);
        check_pair(c, fine, self.tol)?;
        Ok(fine)
    }
}

impl Default for PlaneQuadrature {
    fn default() -> Self {
        PlaneQuadrature::inversion(96, 128, 1e-7).expect("static rule")
    }
}

/// `⟨f, g⟩ = (1/π) ∬ f(z) conj(g(z)) e^{−|z|²} dλ(z)`.
pub fn fock_inner<F, G>(f: F, g: G, rule: &PlaneRule) -> Complex64
where
    F: Fn(Complex64) -> Complex64 + Sync,
    G: Fn(Complex64) -> Complex64 + Sync,
{
    rule.integrate(|z| f(z) * g(z).conj() * (-z.norm_sqr()).exp())
}

/// Inversion integrand without `ξ`: `π^{−1/4} e^{−z̄²/2 + √2 x z̄} e^{−|z|²}`.
fn inverse_kernel(z: Complex64, x: f64) -> Complex64 {
    let zb = z.conj();
    PI_POW_NEG_QUARTER * (-(zb * zb) * 0.5 + zb * (SQRT_2 * x) - z.norm_sqr()).exp()
}

/// `π^{−1/4} (1/π) ∬ e^{−z̄²/2 + √2 x z̄} ξ(z) e^{−|z|²} dλ(z)`.
///
/// This is `e^{x²/2} (B⁻¹ξ)(x)`: the Gaussian damping of the regularized
/// profile is undone, so `ξ_n(·,t)` maps back to `u_n(·,t)` itself. Use
/// [`sb_inverse_l2`] for the plain inverse.
pub fn sb_inverse<F>(xi: F, x: f64, quad: &PlaneQuadrature) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    quad.integrate(|z| inverse_kernel(z, x) * xi(z))
}

/// `(B⁻¹ξ)(x)`.
pub fn sb_inverse_l2<F>(xi: F, x: f64, quad: &PlaneQuadrature) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    Ok(sb_inverse(xi, x, quad)? * (-0.5 * x * x).exp())
}

/// `φ_{n,t}(x) = e^{−x²/2} u_n(x,t)`, the damped profile whose transform is `ξ_n(·,t)`.
pub fn regularized_solution(evolution: KgEvolution, t: f64) -> impl Fn(f64) -> Complex64 + Send + Sync {
    move |x| evolution.homogeneous(x, t) * (-0.5 * x * x).exp()
}

/// `ξ_n(z,t) = π^{1/4} Σ_j C_j θ_{λ_j,m}(t) e^{izλ_j/√2 − λ_j²/4}`.
#[derive(Debug, Clone)]
pub struct XiFunction {
    pub n: u32,
    pub a: f64,
    pub m: f64,
    pub t: f64,
    terms: Vec<(Complex64, f64)>,
}

impl XiFunction {
    pub fn new(n: u32, a: f64, m: f64, t: f64) -> Result<Self> {
        if !(m.is_finite() && m >= 0.0) {
            return Err(Error::param("m", format!("mass {m} must be finite and non-negative")));
        }
        let so = Superoscillation::new(SuperoscillationParams::new(n, a)?)?;
        let values = so.coefficients().values()?;
        let terms = values
            .iter()
            .enumerate()
            .map(|(j, &c)| {
                let l = frequency(n, j);
                let w = theta(l, m, t) * (c * PI_POW_QUARTER * (-0.25 * l * l).exp());
                (w, l)
            })
            .collect();
        Ok(XiFunction { n, a, m, t, terms })
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let iz = Complex64::new(-z.im, z.re) / SQRT_2;
        self.terms.iter().map(|&(w, l)| w * (iz * l).exp()).sum()
    }

    /// `∂_z ξ_n(z,t)`, term by term.
    pub fn dz(&self, z: Complex64) -> Complex64 {
        let iz = Complex64::new(-z.im, z.re) / SQRT_2;
        self.terms
            .iter()
            .map(|&(w, l)| w * Complex64::new(0.0, l / SQRT_2) * (iz * l).exp())
            .sum()
    }
}

pub fn xi_closed_form(n: u32, a: f64, m: f64, t: f64, z: Complex64) -> Result<Complex64> {
    Ok(XiFunction::new(n, a, m, t)?.eval(z))
}

/// `F_n(x,a)` through the inverse transform of `ξ_n(·,0)`.
pub fn fn_integral_rep(n: u32, a: f64, x: f64, quad: &PlaneQuadrature) -> Result<Complex64> {
    let xi = XiFunction::new(n, a, 0.0, 0.0)?;
    sb_inverse(|z| xi.eval(z), x, quad)
}

/// `F_n′(x,a) = √2 π^{−1/4} (1/π) ∬ e^{−z̄²/2 + √2 x z̄} ∂_z ξ_n(z,0) e^{−|z|²} dλ(z)`.
pub fn fn_derivative_integral_rep(n: u32, a: f64, x: f64, quad: &PlaneQuadrature) -> Result<Complex64> {
    let xi = XiFunction::new(n, a, 0.0, 0.0)?;
    Ok(sb_inverse(|z| xi.dz(z), x, quad)? * SQRT_2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kg_spectral::{evolve_homogeneous, InitialData, KgProblem, SourceCase};
    use crate::special::{hermite_fn, hermite_fns};
    use crate::superosc::{eval_fn_derivative, eval_fn_product};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn factorial(k: u32) -> f64 {
        (1..=k).map(f64::from).product()
    }

    fn psi(k: usize) -> impl Fn(f64) -> Complex64 {
        move |x| c(hermite_fn(k, x).unwrap(), 0.0)
    }

    fn samples() -> Vec<Complex64> {
        vec![c(0.0, 0.0), c(1.0, 0.0), c(-0.7, 0.9), c(0.3, -1.2), c(1.1, 1.0)]
    }

    #[test]
    fn kernel_examples() {
        let z = c(0.4, -1.3);
        assert_eq!(fock_kernel(z, c(0.0, 0.0)), c(1.0, 0.0));
        assert!((fock_kernel(c(1.0, 0.0), c(1.0, 0.0)) - std::f64::consts::E).norm() < 1e-15);
        for z in samples() {
            for w in samples() {
                assert!((fock_kernel(z, w) - fock_kernel(w, z).conj()).norm() < 1e-14);
            }
            assert_eq!(normalized_kernel(z, c(0.0, 0.0)), c(1.0, 0.0));
            assert!((normalized_kernel(c(0.0, 0.0), z) - (-0.5 * z.norm_sqr()).exp()).norm() < 1e-15);
        }
        assert!((sb_kernel(c(0.0, 0.0), 0.0).re - PI_POW_NEG_QUARTER).abs() < 1e-16);
    }

    #[test]
    fn gaussian_measure_is_a_probability_measure() {
        let r = PlaneRule::fock(32).unwrap();
        let total = r.integrate(|z| c((-z.norm_sqr()).exp(), 0.0));
        assert!((total - 1.0).norm() < 1e-12);
    }

    #[test]
    fn normalized_kernel_has_unit_norm() {
        let r = PlaneRule::fock(64).unwrap();
        for w in [c(0.0, 0.0), c(1.0, 1.0), c(-2.0, 0.0), c(0.5, -1.9)] {
            let nrm = fock_inner(|z| normalized_kernel(z, w), |z| normalized_kernel(z, w), &r);
            assert!((nrm - 1.0).norm() < 1e-8, "w={w} {nrm}");
        }
    }

    #[test]
    fn monomials_are_orthogonal() {
        let r = PlaneRule::fock(48).unwrap();
        for k in 0..=6 {
            for l in 0..=6 {
                let ip = fock_inner(|z| z.powu(k), |z| z.powu(l), &r);
                let want = if k == l { factorial(k) } else { 0.0 };
                assert!((ip - want).norm() < 1e-7, "({k},{l}) {ip}");
            }
        }
    }

    #[test]
    fn reproducing_property() {
        let r = PlaneRule::fock(64).unwrap();
        for w in samples() {
            for k in 0..3u32 {
                let got = r.integrate(|z| fock_kernel(z, w).conj() * z.powu(k) * (-z.norm_sqr()).exp());
                assert!((got - w.powu(k)).norm() < 1e-8, "w={w} k={k}");
            }
        }
    }

    #[test]
    fn sb_kernel_series() {
        for &x in &[-2.0, -0.5, 0.0, 1.3, 2.0] {
            let h = hermite_fns(40, x);
            for z in [c(0.0, 0.0), c(1.0, 0.0), c(0.6, -0.8), c(-0.3, 0.5)] {
                let zb = z.conj();
                let mut term = c(1.0, 0.0);
                let mut acc = c(0.0, 0.0);
                for (k, &hk) in h.iter().enumerate() {
                    if k > 0 {
                        term = term * zb / (k as f64).sqrt();
                    }
                    acc += term * hk;
                }
                assert!((acc - sb_kernel(z, x)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn coherent_state_overlaps() {
        let rule = gauss_hermite(64).unwrap();
        let pts = [c(0.0, 0.0), c(1.5, 0.0), c(-0.8, 1.2), c(0.5, -1.4)];
        for &z in &pts {
            for &w in &pts {
                let ip: Complex64 = rule.integrate_scaled(1.0, |x| sb_kernel(w, x) * sb_kernel(z, x).conj());
                assert!((ip - fock_kernel(z, w)).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn hermite_functions_map_to_monomials() {
        let q = LineQuadrature::default();
        for k in 0..=8 {
            for z in [c(0.0, 0.0), c(1.5, 0.0), c(0.9, -1.1), c(-1.0, 0.7)] {
                let got = sb_forward_checked(psi(k), z, &q).unwrap();
                let want = z.powu(k as u32) / factorial(k as u32).sqrt();
                assert!((got - want).norm() < 1e-7, "k={k} z={z}");
            }
        }
        let got = sb_forward_checked(psi(0), c(2.0, 0.0), &q).unwrap();
        assert!((got - 1.0).norm() < 1e-9);
        let got = sb_forward_checked(psi(3), c(1.0, 0.0), &q).unwrap();
        assert!((got - 1.0 / 6f64.sqrt()).norm() < 1e-8);
    }

    #[test]
    fn xi_examples() {
        let v = xi_closed_form(1, 2.0, 0.0, 0.0, c(0.0, 0.0)).unwrap();
        assert!((v - PI_POW_QUARTER * (-0.25f64).exp()).norm() < 1e-14);
        // t = 0 removes θ
        let z = c(0.3, -0.4);
        let xi = xi_closed_form(5, 1.5, 3.0, 0.0, z).unwrap();
        let so = Superoscillation::new(SuperoscillationParams::new(5, 1.5).unwrap()).unwrap();
        let vals = so.coefficients().values().unwrap();
        let want: Complex64 = vals
            .iter()
            .enumerate()
            .map(|(j, &cj)| {
                let l = frequency(5, j);
                cj * (c(0.0, l / SQRT_2) * z - 0.25 * l * l).exp()
            })
            .sum::<Complex64>()
            * PI_POW_QUARTER;
        assert!((xi - want).norm() < 1e-13);
    }

    #[test]
    fn forward_transform_of_damped_solution() {
        let problem = KgProblem::new(3.0, InitialData::ProblemOne { a: 1.5 }, SourceCase::Zero).unwrap();
        let ev = KgEvolution::new(6, problem).unwrap();
        let phi = regularized_solution(ev, 0.4);
        let z = c(0.5, 0.3);
        let got = sb_forward_checked(phi, z, &LineQuadrature::default()).unwrap();
        let want = xi_closed_form(6, 1.5, 3.0, 0.4, z).unwrap();
        assert!((got - want).norm() < 1e-7);
    }

    #[test]
    fn time_derivative_is_scaled_z_derivative() {
        let h = 1e-4;
        for z in [c(0.0, 0.0), c(0.7, -0.2), c(-1.0, 0.8)] {
            let xp = xi_closed_form(6, 1.5, 3.0, h, z).unwrap();
            let xm = xi_closed_form(6, 1.5, 3.0, -h, z).unwrap();
            let dt = (xp - xm) / (2.0 * h);
            let zp = xi_closed_form(6, 1.5, 3.0, 0.0, z + h).unwrap();
            let zm = xi_closed_form(6, 1.5, 3.0, 0.0, z - h).unwrap();
            let dz = (zp - zm) / (2.0 * h);
            assert!((dt - SQRT_2 * dz).norm() < 1e-7);
            let exact = XiFunction::new(6, 1.5, 3.0, 0.0).unwrap().dz(z);
            assert!((exact - dz).norm() < 1e-7);
        }
    }

    #[test]
    fn xi_is_entire() {
        let xi = XiFunction::new(6, 1.5, 3.0, 0.7).unwrap();
        let h = 1e-4;
        for z in [c(0.2, 0.1), c(-1.0, 1.5), c(2.0, -0.5)] {
            let du = (xi.eval(z + h) - xi.eval(z - h)) / (2.0 * h);
            let dv = (xi.eval(z + c(0.0, h)) - xi.eval(z - c(0.0, h))) / (2.0 * h);
            let dzbar = (du + c(0.0, 1.0) * dv) * 0.5;
            assert!(dzbar.norm() < 1e-6, "{dzbar}");
        }
    }

    #[test]
    fn inverse_recovers_evolution() {
        let q = PlaneQuadrature::default();
        let xi = XiFunction::new(6, 1.5, 3.0, 0.3).unwrap();
        let got = sb_inverse(|z| xi.eval(z), 0.4, &q).unwrap();
        let want = evolve_homogeneous(6, 1.5, 3.0, 0.4, 0.3).unwrap();
        assert!((got - want).norm() < 1e-6, "{got} {want}");
    }

    #[test]
    fn integral_representations_of_fn() {
        let q = PlaneQuadrature::default();
        for &x in &[-0.8, 0.0, 0.4, 1.5] {
            let f = fn_integral_rep(6, 1.5, x, &q).unwrap();
            let p = SuperoscillationParams::new(6, 1.5).unwrap();
            assert!((f - eval_fn_product(p, x)).norm() < 1e-6);
            let d = fn_derivative_integral_rep(6, 1.5, x, &q).unwrap();
            assert!((d - eval_fn_derivative(p, x).unwrap()).norm() < 1e-6, "x={x}");
        }
        let d = fn_derivative_integral_rep(2, 2.0, 0.0, &q).unwrap();
        assert!((d - c(0.0, 2.0)).norm() < 1e-6);
        let d = fn_derivative_integral_rep(1, 2.0, 0.0, &q).unwrap();
        assert!((d - c(0.0, 2.0)).norm() < 1e-6);
    }

    #[test]
    fn inverse_of_ground_state_is_constant() {
        let q = PlaneQuadrature::default();
        for &x in &[-1.0, 0.0, 0.7] {
            let got = sb_inverse(|_| c(1.0, 0.0), x, &q).unwrap();
            assert!((got - PI_POW_NEG_QUARTER).norm() < 1e-10);
        }
    }

    #[test]
    fn round_trip() {
        // the forward rule must resolve e^{i√2 v x} at every outer node |Im z| = v
        let line = LineQuadrature::new(96, 128, 1e-9).unwrap();
        let plane = PlaneQuadrature::inversion(24, 32, 1e-7).unwrap();
        let so = Superoscillation::new(SuperoscillationParams::new(4, 1.5).unwrap()).unwrap();
        let phi0 = move |x: f64| so.eval_sum(x) * (-0.5 * x * x).exp();
        let cases: Vec<(&str, Box<dyn Fn(f64) -> Complex64 + Sync>)> = vec![
            ("psi0", Box::new(psi(0))),
            ("psi1", Box::new(psi(1))),
            ("phi", Box::new(phi0)),
        ];
        for (name, f) in &cases {
            for &x in &[-0.6, 0.3] {
                let back = sb_inverse_l2(|z| sb_forward(f, z, &line.fine), x, &plane).unwrap();
                assert!((back - f(x)).norm() < 1e-6, "{name} x={x} {back} vs {}", f(x));
            }
        }
    }
}

//! Superoscillating coefficients and sequences.
//!
//! `F_n(x,a) = Σ_j C_j(n,a) e^{iλ_j x}` with `λ_j = 1 − 2j/n` and
//! `C_j(n,a) = C(n,j) ((1+a)/2)^{n−j} ((1−a)/2)^j`.
//!
//! The coefficients are stored three ways: log-magnitude and sign (always
//! available, survives any `n`), plain `f64` values when they fit, and
//! double-double values used by every literal sum in the crate.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::special::{log_binomial, Dd, DdComplex};

/// Largest log-magnitude that still materialises as a finite `f64`.
const LN_F64_MAX: f64 = 709.78;
/// Factors are only multiplied out in double-double inside this range.
const LN_DD_SAFE: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuperoscillationParams {
    /// Number of terms minus one.
    pub n: u32,
    /// Target frequency.
    pub a: f64,
}

impl SuperoscillationParams {
    pub fn new(n: u32, a: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("n", "must be at least 1"));
        }
        if !a.is_finite() {
            return Err(Error::param("a", format!("{a} is not finite")));
        }
        Ok(SuperoscillationParams { n, a })
    }

    /// Fails unless `|a| > 1`, the superoscillatory regime.
    pub fn require_superoscillatory(&self) -> Result<()> {
        if self.a.abs() > 1.0 {
            Ok(())
        } else {
            Err(Error::param("a", format!("|a| = {} must exceed 1", self.a.abs())))
        }
    }
}

/// `λ_j = 1 − 2j/n`.
pub fn frequency(n: u32, j: usize) -> f64 {
    (f64::from(n) - 2.0 * j as f64) / f64::from(n)
}

pub(crate) fn frequency_dd(n: u32, j: usize) -> Dd {
    Dd::ratio(f64::from(n) - 2.0 * j as f64, f64::from(n))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientSet {
    n: u32,
    a: f64,
    values: Option<Vec<f64>>,
    #[serde(skip)]
    precise: Option<Vec<Dd>>,
    log_magnitudes: Vec<f64>,
    signs: Vec<i8>,
}

impl CoefficientSet {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn len(&self) -> usize {
        self.log_magnitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_magnitudes.is_empty()
    }

    /// `ln |C_j|`; `-∞` for an exactly vanishing coefficient.
    pub fn log_magnitudes(&self) -> &[f64] {
        &self.log_magnitudes
    }

    /// `sign(C_j) ∈ {−1, 0, 1}`.
    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.len()).map(|j| frequency(self.n, j)).collect()
    }

    pub fn values(&self) -> Result<&[f64]> {
        self.values.as_deref().ok_or_else(|| self.overflow())
    }

    pub fn precise(&self) -> Result<&[Dd]> {
        self.precise.as_deref().ok_or_else(|| self.overflow())
    }

    fn overflow(&self) -> Error {
        let (index, &log_magnitude) = self
            .log_magnitudes
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("coefficient set is never empty");
        Error::CoefficientOverflow {
            n: self.n,
            a: self.a,
            index,
            log_magnitude,
        }
    }

    /// `Σ_j C_j λ_j^k`, summed in double-double.
    pub fn moment(&self, k: u32) -> Result<f64> {
        let c = self.precise()?;
        let mut acc = Dd::ZERO;
        for (j, &cj) in c.iter().enumerate() {
            acc = acc + cj * frequency_dd(self.n, j).powi(k);
        }
        Ok(acc.to_f64())
    }

    /// `Σ_j C_j`, which is exactly one in exact arithmetic.
    pub fn sum(&self) -> Result<f64> {
        self.moment(0)
    }
}

/// Builds `C_j(n,a)` for `j = 0..=n`.
///
/// Never fails: when some `|C_j|` exceeds the `f64` range the values are
/// omitted and the log-magnitudes retained.
pub fn coefficients(params: SuperoscillationParams) -> CoefficientSet {
    let n = params.n;
    let a = params.a;
    // (1 ± a)/2 exactly, as double-doubles.
    let p = Dd::sum(1.0, a).mul_f64(0.5);
    let q = Dd::sum(1.0, -a).mul_f64(0.5);
    let ln_p = p.to_f64().abs().ln();
    let ln_q = q.to_f64().abs().ln();
    let sign_p: i8 = sign_of(p.to_f64());
    let sign_q: i8 = sign_of(q.to_f64());

    let pow_log = |k: u32, ln_base: f64| if k == 0 { 0.0 } else { f64::from(k) * ln_base };
    let pow_sign = |k: u32, s: i8| -> i8 {
        if k == 0 {
            1
        } else if s == 0 {
            0
        } else if s < 0 && k % 2 == 1 {
            -1
        } else {
            1
        }
    };

    let len = n as usize + 1;
    let mut log_magnitudes = Vec::with_capacity(len);
    let mut signs = Vec::with_capacity(len);
    let mut precise = Vec::with_capacity(len);
    let mut binom = Dd::ONE;
    for j in 0..len {
        let ju = j as u32;
        if j > 0 {
            binom = binom.mul_f64(f64::from(n - ju + 1)).div_f64(f64::from(ju));
        }
        let ln_binom = log_binomial(u64::from(n), j as u64).expect("j ≤ n");
        let lp = pow_log(n - ju, ln_p);
        let lq = pow_log(ju, ln_q);
        let sign = pow_sign(n - ju, sign_p) * pow_sign(ju, sign_q);
        let logm = if sign == 0 { f64::NEG_INFINITY } else { ln_binom + lp + lq };
        log_magnitudes.push(logm);
        signs.push(sign);

        let in_range = [ln_binom, lp, lq, logm]
            .iter()
            .all(|v| v.abs() <= LN_DD_SAFE || *v == f64::NEG_INFINITY);
        let value = if sign == 0 {
            Dd::ZERO
        } else if in_range {
            binom * p.powi(n - ju) * q.powi(ju)
        } else {
            Dd::new(f64::from(sign) * logm.exp())
        };
        precise.push(value);
    }

    let fits = log_magnitudes.iter().all(|&l| l <= LN_F64_MAX);
    let values = fits.then(|| precise.iter().map(|c| c.to_f64()).collect());
    CoefficientSet {
        n,
        a,
        values,
        precise: fits.then_some(precise),
        log_magnitudes,
        signs,
    }
}

fn sign_of(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// A materialised superoscillating sequence `F_n(·, a)`.
#[derive(Debug, Clone)]
pub struct Superoscillation {
    params: SuperoscillationParams,
    coeffs: CoefficientSet,
    freqs: Vec<Dd>,
}

impl Superoscillation {
    pub fn new(params: SuperoscillationParams) -> Result<Self> {
        let coeffs = coefficients(params);
        coeffs.values()?;
        let freqs = (0..coeffs.len()).map(|j| frequency_dd(params.n, j)).collect();
        Ok(Superoscillation {
            params,
            coeffs,
            freqs,
        })
    }

    pub fn params(&self) -> SuperoscillationParams {
        self.params
    }

    pub fn coefficients(&self) -> &CoefficientSet {
        &self.coeffs
    }

    /// `(C_j, λ_j)` pairs in double-double.
    pub fn terms(&self) -> impl Iterator<Item = (Dd, Dd)> + '_ {
        let c = self.coeffs.precise.as_deref().unwrap_or_default();
        c.iter().copied().zip(self.freqs.iter().copied())
    }

    /// `Σ_j C_j φ(λ_j)` with a double-double callback.
    pub fn supershift_dd<F>(&self, mut phi: F) -> DdComplex
    where
        F: FnMut(Dd) -> DdComplex,
    {
        self.terms()
            .fold(DdComplex::ZERO, |acc, (c, l)| acc + phi(l).scale(c))
    }

    /// `Σ_j C_j φ(λ_j)`.
    pub fn supershift<F>(&self, mut phi: F) -> Complex64
    where
        F: FnMut(f64) -> Complex64,
    {
        self.supershift_dd(|l| DdComplex::from(phi(l.to_f64())))
            .to_complex()
    }

    /// Fallible [`Self::supershift`]; the first callback error is returned.
    pub fn try_supershift<F, E>(&self, mut phi: F) -> std::result::Result<Complex64, E>
    where
        F: FnMut(f64) -> std::result::Result<Complex64, E>,
    {
        let mut acc = DdComplex::ZERO;
        for (c, l) in self.terms() {
            acc = acc + DdComplex::from(phi(l.to_f64())?).scale(c);
        }
        Ok(acc.to_complex())
    }

    pub(crate) fn eval_sum_dd(&self, x: f64) -> DdComplex {
        self.supershift_dd(|l| DdComplex::cis(l.mul_f64(x)))
    }

    /// The literal sum `Σ_j C_j e^{iλ_j x}`.
    pub fn eval_sum(&self, x: f64) -> Complex64 {
        self.eval_sum_dd(x).to_complex()
    }

    /// `∂ₓF_n = Σ_j C_j iλ_j e^{iλ_j x}`.
    pub fn eval_derivative(&self, x: f64) -> Complex64 {
        self.supershift_dd(|l| DdComplex::cis(l.mul_f64(x)).scale(l).mul_i())
            .to_complex()
    }

    /// Product form, see [`eval_fn_product`].
    pub fn eval_product(&self, x: f64) -> Complex64 {
        eval_fn_product(self.params, x)
    }
}

/// `Σ_j C_j`-weighted combination of `φ` sampled on `λ_j = 1 − 2j/n`.
pub fn supershift<F>(coeffs: &CoefficientSet, mut phi: F) -> Result<Complex64>
where
    F: FnMut(f64) -> Complex64,
{
    let c = coeffs.precise()?;
    let mut acc = DdComplex::ZERO;
    for (j, &cj) in c.iter().enumerate() {
        acc = acc + DdComplex::from(phi(frequency(coeffs.n, j))).scale(cj);
    }
    Ok(acc.to_complex())
}

pub fn eval_fn_sum(params: SuperoscillationParams, x: f64) -> Result<Complex64> {
    Ok(Superoscillation::new(params)?.eval_sum(x))
}

pub fn eval_fn_derivative(params: SuperoscillationParams, x: f64) -> Result<Complex64> {
    Ok(Superoscillation::new(params)?.eval_derivative(x))
}

/// `(cos(x/n) + i·a·sin(x/n))^n`, the binomial resummation of `F_n`.
pub fn eval_fn_product(params: SuperoscillationParams, x: f64) -> Complex64 {
    let n = params.n;
    let (s, c) = (x / f64::from(n)).sin_cos();
    Complex64::new(c, params.a * s).powu(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn so(n: u32, a: f64) -> Superoscillation {
        Superoscillation::new(SuperoscillationParams::new(n, a).unwrap()).unwrap()
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn rejects_n_zero() {
        assert!(SuperoscillationParams::new(0, 2.0).is_err());
        assert!(SuperoscillationParams::new(3, f64::NAN).is_err());
        assert!(SuperoscillationParams::new(3, 0.5)
            .unwrap()
            .require_superoscillatory()
            .is_err());
    }

    #[test]
    fn first_order_coefficients() {
        let c = coefficients(SuperoscillationParams::new(1, 2.0).unwrap());
        let v = c.values().unwrap();
        assert!((v[0] - 1.5).abs() < 1e-15 && (v[1] + 0.5).abs() < 1e-15);
        assert_eq!(c.signs(), &[1, -1]);
    }

    #[test]
    fn second_order_first_moment() {
        // brute force: C = {2.25, −1.5, 0.25}, λ = {1, 0, −1}
        let c = coefficients(SuperoscillationParams::new(2, 2.0).unwrap());
        let v = c.values().unwrap();
        for (got, want) in v.iter().zip([2.25, -1.5, 0.25]) {
            assert!((got - want).abs() < 1e-15);
        }
        let brute: f64 = v.iter().zip(c.frequencies()).map(|(c, l)| c * l).sum();
        assert!((brute - 2.0).abs() < 1e-14);
        assert!((c.moment(1).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn coefficient_identities_up_to_thirty() {
        for &a in &[1.5, 2.0, 4.0] {
            for n in 1..=30 {
                let c = coefficients(SuperoscillationParams::new(n, a).unwrap());
                assert!((c.sum().unwrap() - 1.0).abs() < 1e-10, "n={n} a={a}");
                assert!((c.moment(1).unwrap() - a).abs() < 1e-10, "n={n} a={a}");
                for (j, &s) in c.signs().iter().enumerate() {
                    assert_eq!(s, if j % 2 == 0 { 1 } else { -1 });
                }
            }
        }
    }

    #[test]
    fn huge_n_keeps_logs_and_reports_overflow() {
        let c = coefficients(SuperoscillationParams::new(2000, 4.0).unwrap());
        assert!(c.values().is_err());
        assert!(matches!(c.values(), Err(Error::CoefficientOverflow { .. })));
        assert_eq!(c.log_magnitudes().len(), 2001);
        assert!(c.log_magnitudes().iter().all(|l| l.is_finite()));
        assert!(Superoscillation::new(SuperoscillationParams::new(2000, 4.0).unwrap()).is_err());
    }

    #[test]
    fn unit_a_has_a_single_term() {
        let c = coefficients(SuperoscillationParams::new(5, 1.0).unwrap());
        assert_eq!(c.values().unwrap(), &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(c.signs()[3], 0);
    }

    #[test]
    fn values_at_origin() {
        for &(n, a) in &[(1, 2.0), (7, 1.5), (30, 4.0)] {
            let f = so(n, a);
            assert!(close(f.eval_sum(0.0), Complex64::new(1.0, 0.0), 1e-12));
            assert!(close(eval_fn_product(f.params(), 0.0), Complex64::new(1.0, 0.0), 1e-15));
        }
        let p = SuperoscillationParams::new(1, 2.0).unwrap();
        let v = eval_fn_product(p, std::f64::consts::FRAC_PI_2);
        assert!(close(v, Complex64::new(0.0, 2.0), 1e-15));
    }

    #[test]
    fn derivative_examples() {
        assert!(close(so(2, 2.0).eval_derivative(0.0), Complex64::new(0.0, 2.0), 1e-14));
        assert!(close(so(1, 2.0).eval_derivative(0.0), Complex64::new(0.0, 2.0), 1e-14));
        let f = so(10, 1.5);
        let h = 1e-5;
        let fd = (eval_fn_product(f.params(), 0.3 + h) - eval_fn_product(f.params(), 0.3 - h))
            / (2.0 * h);
        assert!(close(f.eval_derivative(0.3), fd, 1e-8));
    }

    #[test]
    fn sum_and_product_forms_agree() {
        let f = so(10, 1.5);
        let s = f.eval_sum(0.1);
        assert!(close(s, f.eval_product(0.1), 1e-9 * s.norm()));
        for &a in &[1.5, 2.0, 4.0] {
            for n in [3u32, 12, 30] {
                let f = so(n, a);
                for i in -10..=10 {
                    let x = 0.5 * f64::from(i);
                    let p = f.eval_product(x);
                    assert!(close(f.eval_sum(x), p, 1e-9 * p.norm().max(1e-300)), "n={n} a={a} x={x}");
                }
            }
        }
    }

    #[test]
    fn convergence_to_plane_wave() {
        let target = Complex64::cis(1.5 * 0.5);
        let errs: Vec<f64> = [10u32, 20, 40, 80]
            .iter()
            .map(|&n| (so(n, 1.5).eval_sum(0.5) - target).norm())
            .collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    }

    #[test]
    fn supershift_examples() {
        let f = so(9, 2.5);
        let c = f.coefficients();
        let one = supershift(c, |_| Complex64::new(1.0, 0.0)).unwrap();
        assert!(close(one, Complex64::new(1.0, 0.0), 1e-12));
        let lam = supershift(c, |l| Complex64::new(l, 0.0)).unwrap();
        assert!(close(lam, Complex64::new(2.5, 0.0), 1e-12));
        let x = 0.7;
        let wave = supershift(c, |l| Complex64::cis(l * x)).unwrap();
        assert!(close(wave, f.eval_sum(x), 1e-12));
        let err: std::result::Result<Complex64, &str> = f.try_supershift(|l| {
            if l < 0.0 {
                Err("negative")
            } else {
                Ok(Complex64::new(l, 0.0))
            }
        });
        assert_eq!(err, Err("negative"));
    }

    proptest! {
        #[test]
        fn binomial_identity(n in 1u32..=30, a in 1.0001f64..=4.0, x in -5.0f64..=5.0) {
            let f = so(n, a);
            let p = f.eval_product(x);
            let s = f.eval_sum(x);
            prop_assert!((s - p).norm() <= 1e-9 * p.norm().max(1e-12));
        }

        #[test]
        fn conjugate_symmetry(n in 1u32..=30, a in 1.0001f64..=4.0, x in -5.0f64..=5.0) {
            let f = so(n, a);
            prop_assert!((f.eval_sum(-x) - f.eval_sum(x).conj()).norm() <= 1e-12);
        }
    }
}

//! Verification primitives: finite-difference PDE residuals, convergence
//! ladders and oracle comparisons. [`suite`] assembles them into the
//! acceptance checks.

use std::fmt::Debug;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

pub mod suite;

pub use suite::{run_suite, CheckId, CheckReport, Measurement, SuiteOptions, SuiteReport};

/// Minimum `residual(h)/residual(h/2)` expected of a second-order stencil.
pub const MIN_REFINEMENT_RATIO: f64 = 3.5;

/// Which singular sets to keep away from, at distance `3h`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Exclusions {
    /// `{x = 0}`
    pub source_point: bool,
    /// `{|x| = t}`
    pub light_cone: bool,
}

impl Exclusions {
    pub const NONE: Exclusions = Exclusions { source_point: false, light_cone: false };
    pub const SOURCED: Exclusions = Exclusions { source_point: true, light_cone: true };

    fn excludes(&self, x: f64, t: f64, h: f64) -> bool {
        let r = 3.0 * h;
        (self.source_point && x.abs() < r) || (self.light_cone && (x.abs() - t).abs() < r)
    }

    fn describe(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.source_point {
            v.push("|x| < 3h".to_string());
        }
        if self.light_cone {
            v.push("||x| - t| < 3h".to_string());
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub probes: Vec<(f64, f64)>,
    pub excluded: Vec<(f64, f64)>,
    pub excluded_sets: Vec<String>,
    pub h: f64,
    pub max_abs_residual: f64,
    pub max_abs_residual_half: f64,
    pub refinement_ratio: f64,
    /// Rounding-error scale of the stencil at `h/2`: `16 ε max|u| / (h/2)²`.
    pub noise_floor: f64,
    /// The `h/2` residual is within 10× the noise floor, so the ratio says
    /// nothing about truncation order.
    pub noise_limited: bool,
    /// Ratio below [`MIN_REFINEMENT_RATIO`] on a residual above the noise.
    pub flagged: bool,
}

fn stencil<F, S>(u: &F, src: &S, m: f64, x: f64, t: f64, h: f64) -> (f64, f64)
where
    F: Fn(f64, f64) -> Complex64,
    S: Fn(f64, f64) -> Complex64,
{
    let c = u(x, t);
    let utt = (u(x, t + h) - c * 2.0 + u(x, t - h)) / (h * h);
    let uxx = (u(x + h, t) - c * 2.0 + u(x - h, t)) / (h * h);
    ((utt - uxx + c * (m * m) - src(x, t)).norm(), c.norm())
}

/// Central-difference residual of `(∂²ₜ − ∂²ₓ + m²)u − L` at `h` and `h/2`.
///
/// Probes with `t < 2h` or inside an exclusion zone are skipped and listed.
pub fn residual_check<F, S>(
    field: F,
    source: S,
    m: f64,
    probes: &[(f64, f64)],
    h: f64,
    exclusions: Exclusions,
) -> ResidualReport
where
    F: Fn(f64, f64) -> Complex64,
    S: Fn(f64, f64) -> Complex64,
{
    let (mut used, mut excluded) = (Vec::new(), Vec::new());
    for &(x, t) in probes {
        if t < 2.0 * h || exclusions.excludes(x, t, h) {
            excluded.push((x, t));
        } else {
            used.push((x, t));
        }
    }
    let (mut r1, mut r2, mut umax) = (0.0f64, 0.0f64, 0.0f64);
    for &(x, t) in &used {
        let (a, u) = stencil(&field, &source, m, x, t, h);
        let (b, _) = stencil(&field, &source, m, x, t, 0.5 * h);
        r1 = r1.max(a);
        r2 = r2.max(b);
        umax = umax.max(u);
    }
    let hh = 0.5 * h;
    let noise_floor = 16.0 * f64::EPSILON * umax.max(f64::MIN_POSITIVE) / (hh * hh);
    let ratio = if r2 > 0.0 { r1 / r2 } else { f64::INFINITY };
    let noise_limited = r2 <= 10.0 * noise_floor;
    ResidualReport {
        probes: used,
        excluded,
        excluded_sets: exclusions.describe(),
        h,
        max_abs_residual: r1,
        max_abs_residual_half: r2,
        refinement_ratio: ratio,
        noise_floor,
        noise_limited,
        flagged: !noise_limited && ratio < MIN_REFINEMENT_RATIO,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceLadder {
    pub n_values: Vec<u32>,
    /// Sup-norm error against the limit for each `n`.
    pub errors: Vec<f64>,
    pub monotone: bool,
    /// `(min, max, samples)` of the compact set.
    pub compact_set: (f64, f64, usize),
}

/// Sup-norm distance between `fn_of_n(n)` and `limit` over `compact_set`
/// for each `n`.
pub fn ladder<N, G, L>(fn_of_n: N, limit: L, n_values: &[u32], compact_set: &[f64]) -> Result<ConvergenceLadder>
where
    N: Fn(u32) -> G,
    G: Fn(f64) -> Complex64,
    L: Fn(f64) -> Complex64,
{
    if n_values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param("n_values", "must be strictly increasing"));
    }
    if compact_set.is_empty() {
        return Err(Error::param("compact_set", "needs at least one sample"));
    }
    let lim: Vec<Complex64> = compact_set.iter().map(|&x| limit(x)).collect();
    let errors: Vec<f64> = n_values
        .iter()
        .map(|&n| {
            let f = fn_of_n(n);
            compact_set
                .iter()
                .zip(&lim)
                .map(|(&x, &l)| (f(x) - l).norm())
                .fold(0.0, f64::max)
        })
        .collect();
    let lo = compact_set.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = compact_set.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(ConvergenceLadder {
        n_values: n_values.to_vec(),
        monotone: errors.windows(2).all(|w| w[1] < w[0]),
        errors,
        compact_set: (lo, hi, compact_set.len()),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub probes: usize,
    pub max_diff: f64,
    pub worst_probe: Option<usize>,
    pub tol: f64,
    pub passed: bool,
}

fn compare<P, L, R, W>(lhs: L, rhs: R, probes: &[P], tol: f64, weight: W) -> OracleReport
where
    P: Copy,
    L: Fn(P) -> Complex64,
    R: Fn(P) -> Complex64,
    W: Fn(Complex64) -> f64,
{
    let mut worst = None;
    let mut max_diff = 0.0f64;
    for (i, &p) in probes.iter().enumerate() {
        let (a, b) = (lhs(p), rhs(p));
        let d = (a - b).norm() / weight(b);
        // NaN counts as a failure
        if d.is_nan() || d > max_diff {
            max_diff = if d.is_nan() { f64::INFINITY } else { d };
            worst = Some(i);
        }
    }
    OracleReport {
        probes: probes.len(),
        max_diff,
        worst_probe: worst,
        tol,
        passed: max_diff <= tol,
    }
}

/// `max |lhs(p) − rhs(p)|` over the probes; passes iff `≤ tol`.
pub fn oracle_compare<P, L, R>(lhs: L, rhs: R, probes: &[P], tol: f64) -> OracleReport
where
    P: Copy + Debug,
    L: Fn(P) -> Complex64,
    R: Fn(P) -> Complex64,
{
    compare(lhs, rhs, probes, tol, |_| 1.0)
}

/// As [`oracle_compare`], relative to `max(|rhs(p)|, tiny)`.
pub fn oracle_compare_relative<P, L, R>(lhs: L, rhs: R, probes: &[P], tol: f64) -> OracleReport
where
    P: Copy + Debug,
    L: Fn(P) -> Complex64,
    R: Fn(P) -> Complex64,
{
    compare(lhs, rhs, probes, tol, |b| b.norm().max(f64::MIN_POSITIVE))
}

/// Linearly interpolated sign changes of `values` sampled at `xs`.
pub fn zero_crossings(xs: &[f64], values: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    for i in 1..xs.len().min(values.len()) {
        let (a, b) = (values[i - 1], values[i]);
        if a == 0.0 {
            out.push(xs[i - 1]);
        } else if a * b < 0.0 {
            out.push(xs[i - 1] - a * (xs[i] - xs[i - 1]) / (b - a));
        }
    }
    out
}

/// Largest gap between consecutive zero crossings, `None` with fewer than two.
pub fn max_crossing_spacing(xs: &[f64], values: &[f64]) -> Option<f64> {
    let z = zero_crossings(xs, values);
    z.windows(2).map(|w| w[1] - w[0]).reduce(f64::max)
}

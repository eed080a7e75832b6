//! The kernel `r_{m,x}` and the covariance `K_{m,x}(s,t) = r(s) + r(t) − r(s−t)`,
//! which for `m = x = 0` is the Brownian covariance `min(s,t)`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kg_spectral::{particular_dirac_space, CausalQuadrature};
use crate::special::{gauss_legendre, QuadratureRule};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CovKernelParams {
    pub m: f64,
    pub x: f64,
}

impl CovKernelParams {
    pub fn new(m: f64, x: f64) -> Result<Self> {
        if !(m.is_finite() && m >= 0.0) {
            return Err(Error::param("m", format!("mass {m} must be finite and non-negative")));
        }
        if !x.is_finite() {
            return Err(Error::param("x", "must be finite"));
        }
        Ok(CovKernelParams { m, x })
    }
}

/// `r_{m,x}(t)`, extended evenly to `t < 0` (the Fourier integrand sees `t`
/// only through `cos(w t)`).
pub fn r_kernel(params: CovKernelParams, t: f64) -> f64 {
    r_kernel_with(params, t, &CausalQuadrature::default())
}

fn r_kernel_with(params: CovKernelParams, t: f64, quad: &CausalQuadrature) -> f64 {
    particular_dirac_space(params.m, params.x, t.abs(), quad)
}

/// `K_{m,x}(s,t) = r(s) + r(t) − r(s−t)`.
pub fn cov_kernel(params: CovKernelParams, s: f64, t: f64) -> Result<f64> {
    if !(s >= 0.0 && t >= 0.0) {
        return Err(Error::param("s/t", format!("times ({s}, {t}) must be non-negative")));
    }
    let q = CausalQuadrature::default();
    Ok(r_kernel_with(params, s, &q) + r_kernel_with(params, t, &q) - r_kernel_with(params, s - t, &q))
}

/// `[K(sᵢ, sⱼ)]`.
pub fn gram_matrix(params: CovKernelParams, times: &[f64]) -> Result<DMatrix<f64>> {
    let n = times.len();
    let mut g = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let k = cov_kernel(params, times[i], times[j])?;
            g[(i, j)] = k;
            g[(j, i)] = k;
        }
    }
    Ok(g)
}

/// Eigenvalues of the Gram matrix, ascending.
pub fn gram_eigenvalues(params: CovKernelParams, times: &[f64]) -> Result<Vec<f64>> {
    let g = gram_matrix(params, times)?;
    let mut ev: Vec<f64> = g.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Result of the oscillatory Fourier evaluation of `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FourierEstimate {
    /// Full-line integral over `|ω| ≤ Ω`; its imaginary part measures how
    /// well the odd part cancels.
    pub value: Complex64,
    /// Bound on the discarded tail `|ω| > Ω`: `2/(πΩ)`.
    pub tail_bound: f64,
}

/// Rule for [`r_kernel_fourier_check`]: Gauss-Legendre panels of at most
/// `π/(2 max(|t|,|x|,1))` in length.
#[derive(Debug, Clone)]
pub struct FourierRule {
    base: QuadratureRule,
}

impl FourierRule {
    pub fn new(order: usize) -> Result<Self> {
        Ok(FourierRule {
            base: gauss_legendre(order)?,
        })
    }
}

impl Default for FourierRule {
    fn default() -> Self {
        FourierRule::new(8).expect("static rule")
    }
}

/// `(1/2π) ∫_{−Ω}^{Ω} e^{ixω} (1 − cos(w t))/(m² + ω²) dω`, `w = √(m²+ω²)`.
///
/// Fails when the tail bound `2/(πΩ)` exceeds `tol`.
pub fn r_kernel_fourier_check(
    params: CovKernelParams,
    t: f64,
    omega_max: f64,
    rule: &FourierRule,
    tol: f64,
) -> Result<FourierEstimate> {
    if !(omega_max >= 10.0 && omega_max.is_finite()) {
        return Err(Error::param("omega_max", format!("{omega_max} must be at least 10")));
    }
    let tail_bound = 2.0 / (PI * omega_max);
    if tail_bound > tol {
        return Err(Error::TailBoundExceeded { bound: tail_bound, tol });
    }
    let CovKernelParams { m, x } = params;
    let m2 = m * m;
    let integrand = |om: f64| {
        let w2 = m2 + om * om;
        // (1 − cos(wt))/w² = 2 sin²(wt/2)/w², continuous at w = 0
        let q = if w2 == 0.0 {
            0.5 * t * t
        } else {
            let s = (0.5 * w2.sqrt() * t).sin();
            2.0 * s * s / w2
        };
        Complex64::cis(x * om) * q
    };
    let max_panel = PI / (2.0 * t.abs().max(x.abs()).max(1.0));
    let panels = (2.0 * omega_max / max_panel).ceil() as usize;
    let total: Complex64 = rule.base.integrate_panels(-omega_max, omega_max, panels, integrand);
    Ok(FourierEstimate {
        value: total / (2.0 * PI),
        tail_bound,
    })
}

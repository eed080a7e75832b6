use crate::error::{Error, Result};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// `ln Γ(x)` for `x > 0`.
///
/// Stirling's series after shifting the argument above 16; relative error is
/// a few ulps of the result.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut shift = 0.0;
    let mut y = x;
    while y < 16.0 {
        shift += y.ln();
        y += 1.0;
    }
    let inv = 1.0 / y;
    let inv2 = inv * inv;
    let corr = inv
        * (1.0 / 12.0
            - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 / 1188.0))));
    (y - 0.5) * y.ln() - y + HALF_LN_2PI + corr - shift
}

/// `ln C(n, j)`.
///
/// For `min(j, n-j) ≤ 512` the sum `Σ ln((n-j'+k)/k)` is used; every term is
/// non-negative so there is no cancellation. Larger arguments fall back to
/// the log-gamma difference.
pub fn log_binomial(n: u64, j: u64) -> Result<f64> {
    if j > n {
        return Err(Error::param("j", format!("{j} exceeds n = {n}")));
    }
    let k = j.min(n - j);
    if k <= 512 {
        let base = (n - k) as f64;
        Ok((1..=k).map(|i| ((base + i as f64) / i as f64).ln()).sum())
    } else {
        Ok(ln_gamma(n as f64 + 1.0) - ln_gamma(j as f64 + 1.0) - ln_gamma((n - j) as f64 + 1.0))
    }
}

use super::PI_POW_NEG_QUARTER;
use crate::error::{Error, Result};

/// Largest order accepted by [`hermite_fn`]. The three-term recurrence is
/// forward-stable in this range for all finite `x`.
pub const HERMITE_MAX_ORDER: usize = 200;

/// Normalised Hermite function `ψ_k(x)`, orthonormal in `L²(ℝ)`.
pub fn hermite_fn(k: usize, x: f64) -> Result<f64> {
    if k > HERMITE_MAX_ORDER {
        return Err(Error::param(
            "k",
            format!("order {k} exceeds the recurrence bound {HERMITE_MAX_ORDER}"),
        ));
    }
    Ok(*hermite_fns(k, x).last().unwrap())
}

/// `[ψ_0(x), …, ψ_kmax(x)]` in one pass of the recurrence.
///
/// No order bound is enforced here; callers that build quadrature rules go
/// slightly beyond [`HERMITE_MAX_ORDER`].
pub fn hermite_fns(kmax: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(kmax + 1);
    let mut prev = 0.0;
    let mut cur = PI_POW_NEG_QUARTER * (-0.5 * x * x).exp();
    out.push(cur);
    for k in 0..kmax {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        out.push(cur);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gauss_hermite;

    #[test]
    fn ground_state() {
        assert!((hermite_fn(0, 0.0).unwrap() - 0.751_125_544_464_942_5).abs() < 1e-16);
        assert_eq!(hermite_fn(1, 0.0).unwrap(), 0.0);
        assert!(hermite_fn(HERMITE_MAX_ORDER + 1, 0.0).is_err());
    }

    #[test]
    fn orthonormal_under_gauss_hermite() {
        // ψ_jψ_k = e^{-x²}·poly, so divide out the weight before summing.
        let rule = gauss_hermite(64).unwrap();
        for j in 0..=10 {
            for k in 0..=10 {
                let s: f64 = rule
                    .nodes()
                    .iter()
                    .zip(rule.scaled_weights())
                    .map(|(&x, &w)| {
                        let h = hermite_fns(10, x);
                        w * h[j] * h[k]
                    })
                    .sum();
                let want = if j == k { 1.0 } else { 0.0 };
                assert!((s - want).abs() < 1e-10, "({j},{k}) -> {s}");
            }
        }
    }

    #[test]
    fn satisfies_hermite_ode() {
        // ψ'' + (2k+1-x²)ψ = 0, checked with a central difference.
        let h = 1e-3;
        for k in [0usize, 1, 4, 9] {
            for &x in &[-1.7, -0.3, 0.8, 2.2] {
                let f = |y: f64| hermite_fn(k, y).unwrap();
                let d2 = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
                let r = d2 + (2.0 * k as f64 + 1.0 - x * x) * f(x);
                assert!(r.abs() < 1e-4, "k={k} x={x} r={r}");
            }
        }
    }
}

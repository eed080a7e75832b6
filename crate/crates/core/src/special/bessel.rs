//! Bessel functions of the first kind, orders zero and one.
//!
//! Three regimes, each accurate to ~1e-14 absolute:
//! power series for `|x| < 8`, Miller's backward recurrence normalised by
//! `J₀ + 2ΣJ₂ₖ = 1` for `8 ≤ |x| < 25`, and the Hankel asymptotic expansion
//! beyond.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

const SERIES_LIMIT: f64 = 8.0;
const ASYMPTOTIC_LIMIT: f64 = 25.0;

/// `J₀(x)`.
pub fn bessel_j0(x: f64) -> f64 {
    let ax = x.abs();
    if ax < SERIES_LIMIT {
        series(0, ax)
    } else if ax < ASYMPTOTIC_LIMIT {
        miller(ax).0
    } else {
        hankel(0, ax)
    }
}

/// `J₁(x)`.
pub fn bessel_j1(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax < SERIES_LIMIT {
        series(1, ax)
    } else if ax < ASYMPTOTIC_LIMIT {
        miller(ax).1
    } else {
        hankel(1, ax)
    };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

/// `J₁(x)/x` with the removable singularity filled in (`→ 1/2` as `x → 0`).
///
/// Below `|x| < 1e-4` the first three series terms are used directly.
pub fn bessel_j1_over_x(x: f64) -> f64 {
    let ax = x.abs();
    if ax < 1e-4 {
        let q = 0.25 * ax * ax;
        0.5 * (1.0 - 0.5 * q + q * q / 12.0)
    } else {
        bessel_j1(ax) / ax
    }
}

fn series(order: u32, x: f64) -> f64 {
    let q = 0.25 * x * x;
    // (x/2)^order / order!
    let mut term = if order == 0 { 1.0 } else { 0.5 * x };
    let mut sum = term;
    let mut k = 0u32;
    loop {
        k += 1;
        term *= -q / (f64::from(k) * f64::from(k + order));
        sum += term;
        if term.abs() < 1e-18 && f64::from(k) > q {
            break;
        }
    }
    sum
}

/// Returns `(J₀(x), J₁(x))` for moderate positive `x`.
fn miller(x: f64) -> (f64, f64) {
    let mut start = (x + 30.0 + (20.0 * x).sqrt()) as usize;
    if start % 2 == 1 {
        start += 1;
    }
    let mut next = 0.0; // J_{k+1}
    let mut cur = 1e-30; // J_k
    let mut norm = 0.0;
    let mut j1 = 0.0;
    for k in (1..=start).rev() {
        let prev = 2.0 * k as f64 / x * cur - next;
        next = cur;
        cur = prev;
        let order = k - 1;
        if order == 1 {
            j1 = cur;
        }
        if order > 0 && order % 2 == 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            j1 *= 1e-250;
        }
    }
    norm += cur;
    (cur / norm, j1 / norm)
}

fn hankel(order: u32, x: f64) -> f64 {
    let mu = 4.0 * f64::from(order * order);
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0; // a_k / x^k
    let mut last = f64::INFINITY;
    for k in 1..60u32 {
        let odd = f64::from(2 * k - 1);
        a *= (mu - odd * odd) / (f64::from(k) * 8.0 * x);
        let mag = a.abs();
        if mag > last {
            break;
        }
        last = mag;
        // P = a0 - a2 + a4 - ..., Q = a1 - a3 + ...
        match k % 4 {
            0 => p += a,
            1 => q += a,
            2 => p -= a,
            _ => q -= a,
        }
        if mag < 1e-17 {
            break;
        }
    }
    let (s, c) = x.sin_cos();
    // χ = x − π/4 for J₀ and x − 3π/4 for J₁.
    let (cos_chi, sin_chi) = if order == 0 {
        ((c + s) * FRAC_1_SQRT_2, (s - c) * FRAC_1_SQRT_2)
    } else {
        ((s - c) * FRAC_1_SQRT_2, -(s + c) * FRAC_1_SQRT_2)
    };
    (2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi)
}

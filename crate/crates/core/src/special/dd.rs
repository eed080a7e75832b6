//! Double-double arithmetic (~106-bit significand).
//!
//! The coefficients `C_j(n,a)` alternate in sign and grow like `a^n` while
//! summing to one, so the literal sums lose `log10(a^n)` digits in plain
//! `f64`. Carrying terms as unevaluated `hi + lo` pairs keeps those sums
//! accurate to ~1e-30 relative to the largest term.

use std::f64::consts::FRAC_PI_2;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

const PIO2_HI: f64 = FRAC_PI_2;
const PIO2_MID: f64 = 6.123_233_995_736_766e-17;
const PIO2_LO: f64 = -1.497_384_904_859_169_8e-33;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub const fn new(hi: f64) -> Dd {
        Dd { hi, lo: 0.0 }
    }

    /// Exact sum of two doubles.
    pub fn sum(a: f64, b: f64) -> Dd {
        let (hi, lo) = two_sum(a, b);
        Dd { hi, lo }
    }

    /// `p / q` correctly rounded to double-double.
    pub fn ratio(p: f64, q: f64) -> Dd {
        Dd::new(p).div_f64(q)
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn div_f64(self, b: f64) -> Dd {
        let q1 = self.hi / b;
        let r = self - Dd::new(q1).mul_f64(b);
        let q2 = r.hi / b;
        let r = r - Dd::new(q2).mul_f64(b);
        let q3 = r.hi / b;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::new(q3)
    }

    pub fn sqrt(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd::ZERO;
        }
        let s = self.hi.sqrt();
        let (p, e) = two_prod(s, s);
        let resid = (self - Dd { hi: p, lo: e }).hi;
        Dd::sum(s, resid / (2.0 * s))
    }

    pub fn powi(self, mut k: u32) -> Dd {
        let mut base = self;
        let mut acc = Dd::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        acc
    }

    /// `(sin x, cos x)`.
    pub fn sin_cos(self) -> (Dd, Dd) {
        if self.hi == 0.0 {
            return (Dd::ZERO, Dd::ONE);
        }
        let k = (self.hi / PIO2_HI).round();
        let r = self - Dd::new(PIO2_HI).mul_f64(k) - Dd::new(PIO2_MID).mul_f64(k)
            - Dd::new(PIO2_LO).mul_f64(k);
        let r2 = r * r;
        // Taylor series on |r| ≤ π/4; 16 terms reach ~1e-34.
        let mut sin = r;
        let mut cos = Dd::ONE;
        let mut term_s = r;
        let mut term_c = Dd::ONE;
        for i in 1..=16u32 {
            let i = f64::from(i);
            term_c = -(term_c * r2).div_f64((2.0 * i - 1.0) * (2.0 * i));
            term_s = -(term_s * r2).div_f64((2.0 * i) * (2.0 * i + 1.0));
            cos = cos + term_c;
            sin = sin + term_s;
            if term_s.hi.abs() < 1e-34 && term_c.hi.abs() < 1e-34 {
                break;
            }
        }
        match (k as i64).rem_euclid(4) {
            0 => (sin, cos),
            1 => (cos, -sin),
            2 => (-sin, -cos),
            _ => (-cos, sin),
        }
    }
}

impl From<f64> for Dd {
    fn from(v: f64) -> Dd {
        Dd::new(v)
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

/// Complex number with double-double parts.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DdComplex {
    pub re: Dd,
    pub im: Dd,
}

impl DdComplex {
    pub const ZERO: DdComplex = DdComplex {
        re: Dd::ZERO,
        im: Dd::ZERO,
    };
    pub const ONE: DdComplex = DdComplex {
        re: Dd::ONE,
        im: Dd::ZERO,
    };

    pub fn new(re: Dd, im: Dd) -> Self {
        DdComplex { re, im }
    }

    /// `e^{iφ}`.
    pub fn cis(phase: Dd) -> Self {
        let (s, c) = phase.sin_cos();
        DdComplex { re: c, im: s }
    }

    pub fn scale(self, k: Dd) -> Self {
        DdComplex {
            re: self.re * k,
            im: self.im * k,
        }
    }

    /// Multiplication by `i`.
    pub fn mul_i(self) -> Self {
        DdComplex {
            re: -self.im,
            im: self.re,
        }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl From<Complex64> for DdComplex {
    fn from(z: Complex64) -> Self {
        DdComplex {
            re: Dd::new(z.re),
            im: Dd::new(z.im),
        }
    }
}

impl Add for DdComplex {
    type Output = DdComplex;
    fn add(self, b: DdComplex) -> DdComplex {
        DdComplex {
            re: self.re + b.re,
            im: self.im + b.im,
        }
    }
}

impl Mul for DdComplex {
    type Output = DdComplex;
    fn mul(self, b: DdComplex) -> DdComplex {
        DdComplex {
            re: self.re * b.re - self.im * b.im,
            im: self.re * b.im + self.im * b.re,
        }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b * Dd::new(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * Dd::new(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::new(q3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products_and_ratios_carry_extra_bits() {
        let third = Dd::ratio(1.0, 3.0);
        let back = third.mul_f64(3.0) - Dd::ONE;
        assert!(back.to_f64().abs() < 1e-31);
        let x = Dd::ratio(2.0, 7.0);
        let y = x / Dd::ratio(5.0, 11.0);
        let z = y * Dd::ratio(5.0, 11.0) - x;
        assert!(z.to_f64().abs() < 1e-31);
        let s = Dd::new(2.0).sqrt();
        assert!((s * s - Dd::new(2.0)).to_f64().abs() < 1e-31);
    }

    #[test]
    fn trig_matches_high_precision_reference() {
        // sin(7/3) and cos(100/7) to 40 digits
        let (s, _) = Dd::ratio(7.0, 3.0).sin_cos();
        let want = Dd::sum(0.723_085_881_738_324_7, -4.825_997_194_603_423_7e-17);
        assert!((s - want).to_f64().abs() < 1e-30, "{:?}", s - want);
        let (_, c) = Dd::ratio(100.0, 7.0).sin_cos();
        let want = Dd::sum(-0.148_001_631_620_967_72, -5.688_366_321_622_391_4e-18);
        assert!((c - want).to_f64().abs() < 1e-30, "{:?}", c - want);
    }

    #[test]
    fn pythagorean_identity() {
        for &x in &[-40.3, -3.0, 0.1, 0.785, 2.0, 9.99, 123.4] {
            let (s, c) = Dd::new(x).sin_cos();
            let one = s * s + c * c - Dd::ONE;
            assert!(one.to_f64().abs() < 1e-30);
            assert!((s.to_f64() - x.sin()).abs() < 1e-15);
            assert!((c.to_f64() - x.cos()).abs() < 1e-15);
        }
    }

    #[test]
    fn cancellation_survives() {
        // (1e17 + 1) - 1e17 with the 1 carried in the low word
        let big = Dd::new(1e17) + Dd::ONE;
        assert_eq!((big - Dd::new(1e17)).to_f64(), 1.0);
    }
}


//! Gauss-Hermite and composite Gauss-Legendre rules.

use std::ops::{AddAssign, Mul};

use serde::Serialize;

use super::hermite::hermite_fns;
use crate::error::{Error, Result};

pub const GAUSS_HERMITE_MAX_NODES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleKind {
    /// Weight `e^{-x²}` on the real line.
    GaussHermite,
    /// Unit weight on a finite interval.
    GaussLegendre,
}

/// Nodes (strictly increasing) and positive weights.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureRule {
    kind: RuleKind,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// Gauss-Hermite only: `w_i·e^{x_i²}`, computed without overflow.
    #[serde(skip)]
    scaled: Vec<f64>,
}

impl QuadratureRule {
    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Weights with the Gaussian divided out, `w_i e^{x_i²}`.
    ///
    /// For Gauss-Legendre rules this is just the weights.
    pub fn scaled_weights(&self) -> &[f64] {
        match self.kind {
            RuleKind::GaussHermite => &self.scaled,
            RuleKind::GaussLegendre => &self.weights,
        }
    }

    /// `Σ w_i f(x_i)`.
    ///
    /// For Gauss-Hermite rules the weight `e^{-x²}` is implied, i.e. this
    /// approximates `∫ e^{-x²} f(x) dx`.
    pub fn integrate<T, F>(&self, mut f: F) -> T
    where
        T: Default + AddAssign + Mul<f64, Output = T>,
        F: FnMut(f64) -> T,
    {
        let mut acc = T::default();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += f(x) * w;
        }
        acc
    }

    /// `∫_ℝ g(x) dx` for an integrand `g` that carries its own Gaussian decay
    /// of width comparable to `e^{-x²/scale²}`.
    ///
    /// Evaluates `scale · Σ w_i e^{y_i²} g(scale·y_i)`; exact whenever
    /// `g(scale·y) = e^{-y²}·p(y)` with `p` a polynomial of degree `≤ 2n-1`.
    /// Only meaningful for Gauss-Hermite rules.
    pub fn integrate_scaled<T, F>(&self, scale: f64, mut g: F) -> T
    where
        T: Default + AddAssign + Mul<f64, Output = T>,
        F: FnMut(f64) -> T,
    {
        debug_assert_eq!(self.kind, RuleKind::GaussHermite);
        let mut acc = T::default();
        for (&y, &w) in self.nodes.iter().zip(&self.scaled) {
            acc += g(scale * y) * (w * scale);
        }
        acc
    }

    /// Maps a Gauss-Legendre rule on `[-1, 1]` onto `panels` equal panels of
    /// `[a, b]`.
    pub fn composite(&self, a: f64, b: f64, panels: usize) -> Result<QuadratureRule> {
        if self.kind != RuleKind::GaussLegendre {
            return Err(Error::param("rule", "composite rules need a Gauss-Legendre base"));
        }
        check_interval(a, b)?;
        if panels == 0 {
            return Err(Error::param("panels", "must be at least 1"));
        }
        if a == b {
            return Ok(QuadratureRule {
                kind: RuleKind::GaussLegendre,
                nodes: Vec::new(),
                weights: Vec::new(),
                scaled: Vec::new(),
            });
        }
        let width = (b - a) / panels as f64;
        let half = 0.5 * width;
        let mut nodes = Vec::with_capacity(panels * self.len());
        let mut weights = Vec::with_capacity(panels * self.len());
        for p in 0..panels {
            let mid = a + (p as f64 + 0.5) * width;
            for (&x, &w) in self.nodes.iter().zip(&self.weights) {
                nodes.push(mid + half * x);
                weights.push(half * w);
            }
        }
        Ok(QuadratureRule {
            kind: RuleKind::GaussLegendre,
            nodes,
            weights,
            scaled: Vec::new(),
        })
    }

    /// Integral of `f` over `[a, b]` with this (base, `[-1,1]`) Gauss-Legendre
    /// rule replicated over `panels` panels, without materialising the rule.
    pub fn integrate_panels<T, F>(&self, a: f64, b: f64, panels: usize, mut f: F) -> T
    where
        T: Default + AddAssign + Mul<f64, Output = T>,
        F: FnMut(f64) -> T,
    {
        debug_assert_eq!(self.kind, RuleKind::GaussLegendre);
        let mut acc = T::default();
        if panels == 0 || b <= a {
            return acc;
        }
        let width = (b - a) / panels as f64;
        let half = 0.5 * width;
        for p in 0..panels {
            let mid = a + (p as f64 + 0.5) * width;
            let mut panel = T::default();
            for (&x, &w) in self.nodes.iter().zip(&self.weights) {
                panel += f(mid + half * x) * w;
            }
            acc += panel * half;
        }
        acc
    }
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::param("interval", format!("[{a}, {b}] is not finite")));
    }
    if a > b {
        return Err(Error::param("interval", format!("a = {a} exceeds b = {b}")));
    }
    Ok(())
}

/// `n`-point Gauss-Hermite rule for the weight `e^{-x²}`.
///
/// Nodes are the eigenvalues of the symmetric Jacobi matrix (implicit QL),
/// polished by Newton iteration on `ψ_n`; weights come from the
/// Christoffel-Darboux identity `w_i = e^{-x_i²} / (n ψ_{n-1}(x_i)²)`.
pub fn gauss_hermite(n: usize) -> Result<QuadratureRule> {
    if n == 0 || n > GAUSS_HERMITE_MAX_NODES {
        return Err(Error::param(
            "n",
            format!("Gauss-Hermite node count {n} outside 1..={GAUSS_HERMITE_MAX_NODES}"),
        ));
    }
    let mut diag = vec![0.0; n];
    let mut off: Vec<f64> = (1..n).map(|k| (k as f64 / 2.0).sqrt()).collect();
    off.push(0.0);
    tridiagonal_ql(&mut diag, &mut off);
    diag.sort_by(f64::total_cmp);

    let nf = n as f64;
    let mut nodes = diag;
    for x in nodes.iter_mut() {
        for _ in 0..8 {
            let h = hermite_fns(n, *x);
            let psi = h[n];
            let dpsi = (2.0 * nf).sqrt() * h[n - 1] - *x * psi;
            let step = psi / dpsi;
            *x -= step;
            if step.abs() <= 1e-15 * x.abs().max(1.0) {
                break;
            }
        }
    }
    // Enforce exact symmetry about the origin.
    for i in 0..n / 2 {
        let v = 0.5 * (nodes[n - 1 - i] - nodes[i]);
        nodes[i] = -v;
        nodes[n - 1 - i] = v;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }

    let scaled: Vec<f64> = nodes
        .iter()
        .map(|&x| {
            let p = hermite_fns(n - 1, x)[n - 1];
            1.0 / (nf * p * p)
        })
        .collect();
    let weights = nodes
        .iter()
        .zip(&scaled)
        .map(|(&x, &s)| s * (-x * x).exp())
        .collect();
    Ok(QuadratureRule {
        kind: RuleKind::GaussHermite,
        nodes,
        weights,
        scaled,
    })
}

/// `order`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(order: usize) -> Result<QuadratureRule> {
    if order == 0 || order > 512 {
        return Err(Error::param("order", format!("{order} outside 1..=512")));
    }
    let n = order;
    let nf = n as f64;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok(QuadratureRule {
        kind: RuleKind::GaussLegendre,
        nodes,
        weights,
        scaled: Vec::new(),
    })
}

/// Composite Gauss-Legendre rule: `panels` equal panels of `[a, b]`, each
/// carrying an `order`-point rule.
pub fn gauss_legendre_panels(a: f64, b: f64, panels: usize, order: usize) -> Result<QuadratureRule> {
    check_interval(a, b)?;
    gauss_legendre(order)?.composite(a, b, panels)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL with Wilkinson
/// shifts. `diag` is overwritten with the eigenvalues; `off[i]` couples rows
/// `i` and `i+1` (last entry unused).
fn tridiagonal_ql(diag: &mut [f64], off: &mut [f64]) {
    let n = diag.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                break;
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
}

//! Fixed-order quadrature rules.
//!
//! Every integral over a band or a gap of a finite-gap set carries the
//! endpoint weight `1/sqrt((d - x)(x - c))`, which Chebyshev-Gauss nodes
//! integrate exactly against polynomials of degree `< 2N`. Smooth integrals
//! use Gauss-Legendre.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Default node count for all quadratures.
pub const DEFAULT_NODES: usize = 256;

/// Chebyshev-Gauss rule of the first kind mapped onto `[c, d]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevRule {
    nodes: Vec<f64>,
    weight: f64,
}

impl ChebyshevRule {
    pub fn new(n: usize, c: f64, d: f64) -> Result<Self> {
        check_interval(c, d)?;
        if n == 0 {
            return Err(Error::NoNodes);
        }
        let mid = 0.5 * (c + d);
        let half = 0.5 * (d - c);
        // t_k = cos(pi (2k - 1) / 2N); fill the upper half and mirror so the
        // node set is exactly symmetric about the midpoint.
        let mut t = vec![0.0; n];
        for k in 0..n / 2 {
            let tk = (PI * (2 * k + 1) as f64 / (2 * n) as f64).cos();
            t[k] = tk;
            t[n - 1 - k] = -tk;
        }
        let nodes = t.into_iter().map(|tk| mid + half * tk).collect();
        Ok(Self {
            nodes,
            weight: PI / n as f64,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// The common weight `pi / N`.
    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut h: F) -> Result<f64> {
        let mut sum = 0.0;
        for &x in &self.nodes {
            let v = h(x);
            if !v.is_finite() {
                return Err(Error::NonFiniteSample { x });
            }
            sum += v;
        }
        Ok(self.weight * sum)
    }
}

/// Approximates `int_c^d h(x) / sqrt((d - x)(x - c)) dx` with `n` nodes.
pub fn weighted_integral<F: FnMut(f64) -> f64>(h: F, c: f64, d: f64, n: usize) -> Result<f64> {
    ChebyshevRule::new(n, c, d)?.integrate(h)
}

/// Gauss-Legendre rule mapped onto `[c, d]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LegendreRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl LegendreRule {
    pub fn new(n: usize, c: f64, d: f64) -> Result<Self> {
        check_interval(c, d)?;
        if n == 0 {
            return Err(Error::NoNodes);
        }
        let (t, w) = legendre_reference(n);
        let mid = 0.5 * (c + d);
        let half = 0.5 * (d - c);
        Ok(Self {
            nodes: t.iter().map(|tk| mid + half * tk).collect(),
            weights: w.iter().map(|wk| half * wk).collect(),
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut h: F) -> Result<f64> {
        let mut sum = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            let v = h(x);
            if !v.is_finite() {
                return Err(Error::NonFiniteSample { x });
            }
            sum += w * v;
        }
        Ok(sum)
    }
}

/// Approximates `int_c^d h(x) dx` with an `n`-point Gauss-Legendre rule.
pub fn smooth_integral<F: FnMut(f64) -> f64>(h: F, c: f64, d: f64, n: usize) -> Result<f64> {
    LegendreRule::new(n, c, d)?.integrate(h)
}

/// Closed form of `I_k(a) = int_0^a x^k / sqrt(x (a - x)) dx`
/// `= Gamma(k + 1/2) / Gamma(k + 1) * sqrt(pi) * a^k`.
pub fn gamma_ratio_ik(k: u32, a: f64) -> f64 {
    let ratio = (1..=k).fold(1.0, |r, i| r * (2 * i - 1) as f64 / (2 * i) as f64);
    PI * ratio * a.powi(k as i32)
}

fn check_interval(c: f64, d: f64) -> Result<()> {
    if !(c < d) || !c.is_finite() || !d.is_finite() {
        return Err(Error::EmptyInterval { c, d });
    }
    Ok(())
}

/// Nodes (descending) and weights on `[-1, 1]`.
fn legendre_reference(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut t = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d.is_finite() {
            dp = d;
        }
        let wi = 2.0 / ((1.0 - x * x) * dp * dp);
        t[i] = x;
        w[i] = wi;
        t[n - 1 - i] = -x;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        t[n / 2] = 0.0;
    }
    (t, w)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

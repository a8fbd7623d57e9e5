//! Equilibrium measure, logarithmic capacity and harmonic frequencies of a
//! finite-gap set.
//!
//! For `E` with `n` gaps the equilibrium density is
//! `|P_E(x)| / (pi sqrt|Q_E(x)|)` on the bands, where `P_E` is the unique
//! monic degree-`n` polynomial with `int_gap P_E / sqrt(Q_E) = 0` on every
//! gap. All integrals are evaluated on the affinely normalized set
//! `(E - center) / radius`, which lies in `[-1, 1]`; the critical polynomial
//! is mapped back afterwards, frequencies are affine invariant and the
//! capacity scales with the radius.

mod jacobian;
mod relation;

pub use jacobian::{default_step, omega_jacobian, rank, submersion_defect, RANK_THRESHOLD};
pub use relation::{
    common_denominator, find_integer_relation, min_relation_residual, IntegerRelation,
};

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polynomial::RealPolynomial;
use crate::quadrature::{weighted_integral, LegendreRule};
use crate::spectral_set::FiniteGapSet;

/// Condition number above which the critical-polynomial system is rejected.
pub const MAX_CONDITION: f64 = 1e12;

/// Relative change allowed when doubling the node count in [`capacity`].
pub const CAPACITY_CONVERGENCE_TOL: f64 = 1e-7;

/// Potential-theoretic data of a finite-gap set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EquilibriumRepr", into = "EquilibriumRepr")]
pub struct EquilibriumData {
    pub set: FiniteGapSet,
    /// Monic critical polynomial of degree `n`.
    pub p_crit: RealPolynomial,
    /// Equilibrium mass of each of the `n + 1` bands.
    pub band_masses: Vec<f64>,
    /// Harmonic frequencies: mass to the left of each gap.
    pub omega: Vec<f64>,
    pub capacity: f64,
    pub nodes_used: usize,
}

#[derive(Serialize, Deserialize)]
struct EquilibriumRepr {
    edges: Vec<f64>,
    p_crit: Vec<f64>,
    omega: Vec<f64>,
    capacity: f64,
    band_masses: Vec<f64>,
    nodes_used: usize,
}

impl TryFrom<EquilibriumRepr> for EquilibriumData {
    type Error = Error;
    fn try_from(r: EquilibriumRepr) -> Result<Self> {
        Ok(Self {
            set: FiniteGapSet::new(r.edges)?,
            p_crit: RealPolynomial::new(r.p_crit),
            band_masses: r.band_masses,
            omega: r.omega,
            capacity: r.capacity,
            nodes_used: r.nodes_used,
        })
    }
}

impl From<EquilibriumData> for EquilibriumRepr {
    fn from(d: EquilibriumData) -> Self {
        Self {
            edges: d.set.edges().to_vec(),
            p_crit: d.p_crit.coeffs().to_vec(),
            omega: d.omega,
            capacity: d.capacity,
            band_masses: d.band_masses,
            nodes_used: d.nodes_used,
        }
    }
}

impl EquilibriumData {
    /// Equilibrium density at `x`.
    pub fn density_at(&self, x: f64) -> Result<f64> {
        density_at(self, x)
    }

    pub fn total_mass(&self) -> f64 {
        self.band_masses.iter().sum()
    }
}

/// The set mapped onto `[-1, 1]` together with the critical polynomial in
/// the normalized variable.
struct Normalized {
    set: FiniteGapSet,
    center: f64,
    radius: f64,
    p: RealPolynomial,
}

impl Normalized {
    fn new(e: &FiniteGapSet, n_nodes: usize) -> Result<Self> {
        let (center, radius) = e.hull_center_radius();
        let set = e.affine(1.0 / radius, -center / radius)?;
        let p = critical_polynomial_raw(&set, n_nodes)?;
        Ok(Self {
            set,
            center,
            radius,
            p,
        })
    }

    /// Critical polynomial in the original variable: `r^n P((x - c) / r)`.
    fn p_original(&self) -> RealPolynomial {
        let n = self.p.degree();
        let mut p = self
            .p
            .compose_affine(1.0 / self.radius, -self.center / self.radius)
            .scale(self.radius.powi(n as i32));
        let mut c = p.coeffs().to_vec();
        c[n] = 1.0;
        p = RealPolynomial::new(c);
        p
    }

    /// `(1/pi) int_band kernel(x) |P(x)| / sqrt|Q(x)| dx` for every band.
    fn band_integrals<K: Fn(f64) -> f64>(&self, kernel: K, n_nodes: usize) -> Result<Vec<f64>> {
        let edges = self.set.edges();
        let n = self.set.gap_count();
        (0..=n)
            .map(|j| {
                let (lo, hi) = self.set.band(j);
                // P has j roots to the left of band j and n - j to the right.
                let sign = if (n - j).is_multiple_of(2) { 1.0 } else { -1.0 };
                let h = |x: f64| {
                    let r = cofactor(edges, 2 * j, x);
                    kernel(x) * sign * self.p.eval(x) / r.abs().sqrt()
                };
                Ok(weighted_integral(h, lo, hi, n_nodes)? / PI)
            })
            .collect()
    }

    /// `log cap` of the normalized set via the Robin identity at
    /// `z0 = upper + diam`.
    fn log_capacity(&self, n_nodes: usize) -> Result<f64> {
        let edges = self.set.edges();
        let top = self.set.upper();
        let diam = self.set.diameter();
        let z0 = top + diam;
        let potential: f64 = self
            .band_integrals(|y| (z0 - y).ln(), n_nodes)?
            .iter()
            .sum();
        // g(z0) = int_top^z0 P / sqrt(Q); with t = top + s^2 the endpoint
        // factor sqrt(t - top) = s cancels against dt = 2 s ds.
        let last = edges.len() - 1;
        let rule = LegendreRule::new(n_nodes, 0.0, diam.sqrt())?;
        let green = rule.integrate(|s| {
            let t = top + s * s;
            let r: f64 = edges[..last].iter().map(|e| t - e).product();
            2.0 * self.p.eval(t) / r.sqrt()
        })?;
        Ok(potential - green)
    }
}

/// `Q_E(x) / ((x - e[skip]) (x - e[skip + 1]))`.
fn cofactor(edges: &[f64], skip: usize, x: f64) -> f64 {
    edges
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != skip && i != skip + 1)
        .map(|(_, e)| x - e)
        .product()
}

fn critical_polynomial_raw(e: &FiniteGapSet, n_nodes: usize) -> Result<RealPolynomial> {
    let n = e.gap_count();
    if n == 0 {
        return Ok(RealPolynomial::constant(1.0));
    }
    let edges = e.edges();
    let mut a = DMatrix::<f64>::zeros(n, n);
    let mut b = DVector::<f64>::zeros(n);
    for j in 1..=n {
        let (c, d) = e.gap(j);
        // On gap j, sqrt(Q) = sqrt((d - x)(x - c)) * sqrt|R_j(x)|.
        let mut row = vec![0.0; n + 1];
        for (k, slot) in row.iter_mut().enumerate() {
            *slot = weighted_integral(
                |x| x.powi(k as i32) / cofactor(edges, 2 * j - 1, x).abs().sqrt(),
                c,
                d,
                n_nodes,
            )
            .map_err(|err| Error::QuadratureFailure(err.to_string()))?;
        }
        for k in 1..=n {
            a[(j - 1, k - 1)] = row[n - k];
        }
        b[j - 1] = row[n];
    }
    let sv = a.clone().singular_values();
    let smax = sv.max();
    let smin = sv.min();
    let cond = if smin > 0.0 {
        smax / smin
    } else {
        f64::INFINITY
    };
    if !(cond <= MAX_CONDITION) {
        return Err(Error::SingularSystem { cond });
    }
    let sol = a
        .col_piv_qr()
        .solve(&b)
        .ok_or(Error::SingularSystem { cond })?;
    // P(x) = x^n - c_1 x^{n-1} - ... - c_n
    let mut coeffs = vec![0.0; n + 1];
    coeffs[n] = 1.0;
    for k in 1..=n {
        coeffs[n - k] = -sol[k - 1];
    }
    Ok(RealPolynomial::new(coeffs))
}

/// The monic critical polynomial `P_E` of degree `n`.
pub fn critical_polynomial(e: &FiniteGapSet, n_nodes: usize) -> Result<RealPolynomial> {
    Ok(Normalized::new(e, n_nodes)?.p_original())
}

/// `int_gap P(x) / sqrt(Q_E(x)) dx` for each gap, in the original variable.
pub fn gap_residuals(e: &FiniteGapSet, p: &RealPolynomial, n_nodes: usize) -> Result<Vec<f64>> {
    let edges = e.edges();
    (1..=e.gap_count())
        .map(|j| {
            let (c, d) = e.gap(j);
            weighted_integral(
                |x| p.eval(x) / cofactor(edges, 2 * j - 1, x).abs().sqrt(),
                c,
                d,
                n_nodes,
            )
        })
        .collect()
}

/// Equilibrium density `|P_E(x)| / (pi sqrt|Q_E(x)|)` at a band-interior point.
pub fn density_at(eq: &EquilibriumData, x: f64) -> Result<f64> {
    if eq.set.band_containing(x).is_none() {
        return Err(Error::OutsideBands { x });
    }
    let q: f64 = eq.set.edges().iter().map(|e| x - e).product();
    Ok(eq.p_crit.eval(x).abs() / (PI * q.abs().sqrt()))
}

/// Critical polynomial, band masses, harmonic frequencies and the
/// single-resolution capacity estimate for `E` at `n_nodes` nodes.
pub fn frequencies(e: &FiniteGapSet, n_nodes: usize) -> Result<EquilibriumData> {
    let norm = Normalized::new(e, n_nodes)?;
    let band_masses = norm.band_integrals(|_| 1.0, n_nodes)?;
    let omega = band_masses
        .iter()
        .take(e.gap_count())
        .scan(0.0, |acc, m| {
            *acc += m;
            Some(*acc)
        })
        .collect();
    let capacity = norm.radius * norm.log_capacity(n_nodes)?.exp();
    Ok(EquilibriumData {
        set: e.clone(),
        p_crit: norm.p_original(),
        band_masses,
        omega,
        capacity,
        nodes_used: n_nodes,
    })
}

/// Logarithmic capacity, evaluated at `n_nodes` and `2 n_nodes`; the finer
/// value is returned.
pub fn capacity(e: &FiniteGapSet, n_nodes: usize) -> Result<f64> {
    let coarse = Normalized::new(e, n_nodes)?;
    let fine = Normalized::new(e, 2 * n_nodes)?;
    let c0 = coarse.log_capacity(n_nodes)?.exp();
    let c1 = fine.log_capacity(2 * n_nodes)?.exp();
    let delta = (c1 - c0).abs() / c1;
    if !(delta <= CAPACITY_CONVERGENCE_TOL) {
        return Err(Error::NonConvergence { delta });
    }
    Ok(fine.radius * c1)
}

/// Rescales `E` to capacity `alpha`.
pub fn normalize_capacity(e: &FiniteGapSet, alpha: f64, n_nodes: usize) -> Result<FiniteGapSet> {
    if !(alpha > 0.0) {
        return Err(Error::NonPositiveScale(alpha));
    }
    let cap = capacity(e, n_nodes)?;
    e.scale(alpha / cap)
}

//! Toda hierarchy on periodic Jacobi operators.
//!
//! The Lax operator of a polynomial `P` is `A = P(J)_up - P(J)_low`
//! (strictly upper minus strictly lower triangular part). With that split
//! and `J[n][n+1] = a_n`, the flow `dJ/dt = [A, J]` for `P(z) = z` is
//!
//! ```text
//! da_n/dt = a_n (b_{n+1} - b_n)
//! db_n/dt = 2 (a_n^2 - a_{n-1}^2)
//! ```

mod banded;
mod recursion;

pub use banded::BandedWindow;
pub use recursion::{branch_sequence, two_gap_recursion, Case, RecursionReport, StepLog};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jacobi_periodic::{Floquet, PeriodicJacobi};
use crate::polynomial::RealPolynomial;
use crate::spectral_set::FiniteGapSet;

/// Default window half-width for commutator checks.
pub const DEFAULT_WINDOW: usize = 100;

/// Smallest step the flow integrator will take before giving up.
pub const MIN_STEP: f64 = 1e-12;

/// Monic polynomial of degree at least one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RealPolynomial", into = "RealPolynomial")]
pub struct TodaPolynomial(RealPolynomial);

impl TryFrom<RealPolynomial> for TodaPolynomial {
    type Error = Error;
    fn try_from(p: RealPolynomial) -> Result<Self> {
        TodaPolynomial::new(p)
    }
}

impl From<TodaPolynomial> for RealPolynomial {
    fn from(p: TodaPolynomial) -> Self {
        p.0
    }
}

impl TodaPolynomial {
    pub fn new(p: RealPolynomial) -> Result<Self> {
        if p.degree() < 1 || !p.is_monic() {
            return Err(Error::InvalidArgument(format!(
                "Toda polynomial must be monic of degree >= 1, got {p}"
            )));
        }
        Ok(Self(p))
    }

    /// `P(z) = z`, the Toda lattice.
    pub fn identity() -> Self {
        Self(RealPolynomial::monomial(1))
    }

    pub fn poly(&self) -> &RealPolynomial {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.degree()
    }
}

/// Coefficients of `sqrt(Q_E(z)) = -z^{n+1} sum_j c_j z^{-j}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesCoefficients {
    pub c: Vec<f64>,
    /// `c = branch_sign * s` where `s` is the series of the positive root.
    pub branch_sign: f64,
}

impl SeriesCoefficients {
    /// `sum_j c_j z^{-j}` truncated to the stored coefficients.
    pub fn sum_at(&self, z: f64) -> f64 {
        let w = 1.0 / z;
        self.c.iter().rev().fold(0.0, |acc, c| acc * w + c)
    }
}

/// Right-hand side of the Toda lattice with periodic indexing.
pub fn toda_rhs(j: &PeriodicJacobi) -> (Vec<f64>, Vec<f64>) {
    let p = j.period() as i64;
    let da = (0..p)
        .map(|n| j.a_at(n) * (j.b_at(n + 1) - j.b_at(n)))
        .collect();
    let db = (0..p)
        .map(|n| 2.0 * (j.a_at(n).powi(2) - j.a_at(n - 1).powi(2)))
        .collect();
    (da, db)
}

fn rk4_step(a: &[f64], b: &[f64], h: f64) -> Option<(Vec<f64>, Vec<f64>)> {
    let rhs = |a: &[f64], b: &[f64]| -> Option<(Vec<f64>, Vec<f64>)> {
        let j = PeriodicJacobi::new(a.to_vec(), b.to_vec()).ok()?;
        Some(toda_rhs(&j))
    };
    let axpy = |x: &[f64], k: &[f64], s: f64| -> Vec<f64> {
        x.iter().zip(k).map(|(x, k)| x + s * k).collect()
    };
    let (ka1, kb1) = rhs(a, b)?;
    let (ka2, kb2) = rhs(&axpy(a, &ka1, h / 2.0), &axpy(b, &kb1, h / 2.0))?;
    let (ka3, kb3) = rhs(&axpy(a, &ka2, h / 2.0), &axpy(b, &kb2, h / 2.0))?;
    let (ka4, kb4) = rhs(&axpy(a, &ka3, h), &axpy(b, &kb3, h))?;
    let combine = |x: &[f64], k1: &[f64], k2: &[f64], k3: &[f64], k4: &[f64]| -> Vec<f64> {
        (0..x.len())
            .map(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
            .collect()
    };
    let a1 = combine(a, &ka1, &ka2, &ka3, &ka4);
    let b1 = combine(b, &kb1, &kb2, &kb3, &kb4);
    if a1.iter().any(|x| !(x.is_finite() && *x > 0.0)) || b1.iter().any(|x| !x.is_finite()) {
        return None;
    }
    Some((a1, b1))
}

/// One row of a flow trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowSample {
    pub t: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    /// Largest drift of the periodic and antiperiodic Floquet eigenvalues
    /// from their initial values.
    pub floquet_defect: f64,
}

fn floquet_spectrum(j: &PeriodicJacobi) -> Vec<f64> {
    let mut v = j.floquet_eigenvalues(Floquet::Periodic);
    v.extend(j.floquet_eigenvalues(Floquet::Antiperiodic));
    v
}

/// Integrates the Toda lattice with classical RK4 from `t = 0` to `t_end`,
/// calling `observe` after every step. The step is `t_end / ceil(t_end / dt)`
/// and is halved whenever it would drive some `a_n` non-positive.
fn integrate<F: FnMut(f64, &PeriodicJacobi)>(
    j0: &PeriodicJacobi,
    t_end: f64,
    dt: f64,
    mut observe: F,
) -> Result<PeriodicJacobi> {
    if !(dt > 0.0) || !(t_end >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "need dt > 0 and t_end >= 0, got dt = {dt}, t_end = {t_end}"
        )));
    }
    let steps = (t_end / dt - 1e-9).ceil().max(0.0) as u64;
    if steps == 0 {
        return Ok(j0.clone());
    }
    let h0 = t_end / steps as f64;
    let mut a = j0.a().to_vec();
    let mut b = j0.b().to_vec();
    let mut t = 0.0;
    for k in 1..=steps {
        let target = h0 * k as f64;
        while t < target {
            let mut h = target - t;
            loop {
                if let Some((a1, b1)) = rk4_step(&a, &b, h) {
                    a = a1;
                    b = b1;
                    t = if h == target - t { target } else { t + h };
                    break;
                }
                h /= 2.0;
                if h < MIN_STEP {
                    return Err(Error::StepUnderflow { t });
                }
            }
        }
        observe(t, &PeriodicJacobi::new(a.clone(), b.clone())?);
    }
    PeriodicJacobi::new(a, b)
}

/// `J(t_end)` for the Toda lattice started at `j0`.
pub fn flow_toda_lattice(j0: &PeriodicJacobi, t_end: f64, dt: f64) -> Result<PeriodicJacobi> {
    integrate(j0, t_end, dt, |_, _| {})
}

/// Flow samples every `record_every` steps (and at `t = 0` and `t_end`).
pub fn flow_trajectory(
    j0: &PeriodicJacobi,
    t_end: f64,
    dt: f64,
    record_every: usize,
) -> Result<Vec<FlowSample>> {
    let reference = floquet_spectrum(j0);
    let sample = |t: f64, j: &PeriodicJacobi| FlowSample {
        t,
        a: j.a().to_vec(),
        b: j.b().to_vec(),
        floquet_defect: floquet_spectrum(j)
            .iter()
            .zip(&reference)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max),
    };
    let every = record_every.max(1);
    let mut out = vec![sample(0.0, j0)];
    let mut count = 0usize;
    let mut last_t = 0.0;
    let end = integrate(j0, t_end, dt, |t, j| {
        count += 1;
        if count.is_multiple_of(every) {
            out.push(sample(t, j));
            last_t = t;
        }
    })?;
    if t_end > 0.0 && last_t != t_end {
        out.push(sample(t_end, &end));
    }
    Ok(out)
}

/// Smallest window half-width accepted for a polynomial of degree `deg`.
pub fn min_window(j: &PeriodicJacobi, deg: usize) -> usize {
    10 * (deg + 1) * j.period()
}

/// `[A, J]` on the window `[-W, W]` with `A = P(J)_up - P(J)_low`.
///
/// Entries whose indices are more than `deg P + 1` away from the window
/// boundary (see [`BandedWindow::interior`]) coincide with the infinite
/// operator.
pub fn lax_commutator(j: &PeriodicJacobi, p: &RealPolynomial, w: usize) -> Result<BandedWindow> {
    let deg = p.degree();
    let min = min_window(j, deg);
    if w < min {
        return Err(Error::WindowTooSmall { w, min });
    }
    let jw = BandedWindow::from_jacobi(j, w);
    // Horner: P(J) = (...(c_d J + c_{d-1}) J + ...) + c_0
    let coeffs = p.coeffs();
    let mut pj = BandedWindow::identity(w, p.leading());
    for &c in coeffs.iter().rev().skip(1) {
        pj = pj.matmul(&jw).add_identity(c);
    }
    let a = pj.antisymmetric_split();
    Ok(a.matmul(&jw).sub(&jw.matmul(&a)).with_trust_margin(deg + 2))
}

/// Largest interior entry of [`lax_commutator`].
pub fn stationarity_defect(j: &PeriodicJacobi, p: &RealPolynomial, w: usize) -> Result<f64> {
    Ok(lax_commutator(j, p, w)?.interior_max_abs())
}

/// `c_0 ... c_m` of `sqrt(Q_E(z)) = -z^{n+1} sum_j c_j z^{-j}` with the
/// positive square root on the far right of the real axis.
///
/// The series of `sqrt(Q_E(z) / z^{2(n+1)})` in `w = 1/z` is obtained from
/// the convolution recurrence `2 s_0 s_k = q_k - sum_{0<i<k} s_i s_{k-i}`.
pub fn sqrt_q_series(e: &FiniteGapSet, m: usize) -> SeriesCoefficients {
    let q = e.q_poly();
    let deg = q.degree();
    let qk = |k: usize| if k <= deg { q.coeff(deg - k) } else { 0.0 };
    let mut s = vec![0.0; m + 1];
    s[0] = 1.0;
    for k in 1..=m {
        let conv: f64 = (1..k).map(|i| s[i] * s[k - i]).sum();
        s[k] = (qk(k) - conv) / 2.0;
    }
    // fix the branch at a point well outside the convex hull
    let reach = e.lower().abs().max(e.upper().abs()).max(e.diameter());
    let z = 10.0 * reach;
    let half = (deg / 2) as i32;
    let target = -e.edges().iter().map(|x| z - x).product::<f64>().sqrt() / z.powi(half);
    let positive = SeriesCoefficients {
        c: s.clone(),
        branch_sign: 1.0,
    };
    let branch_sign = if target * positive.sum_at(z) >= 0.0 {
        1.0
    } else {
        -1.0
    };
    SeriesCoefficients {
        c: s.into_iter().map(|x| branch_sign * x).collect(),
        branch_sign,
    }
}

/// `P(z) = z^{n+1} - c_1 z^n - ... - c_n z` built from the series of
/// `sqrt(Q_E)`; every operator in the isospectral torus of `E` is
/// stationary for it.
pub fn stationary_polynomial(e: &FiniteGapSet) -> TodaPolynomial {
    let n = e.gap_count();
    let series = sqrt_q_series(e, (2 * (n + 1)).max(n + 1));
    let mut coeffs = vec![0.0; n + 2];
    coeffs[n + 1] = 1.0;
    for jdx in 1..=n {
        coeffs[n + 1 - jdx] = -series.c[jdx];
    }
    TodaPolynomial(RealPolynomial::new(coeffs))
}

//! Periodic Jacobi operators and their band spectra.
//!
//! Sites are coupled as `J[n][n+1] = a_n`, so
//! `(Ju)_n = a_{n-1} u_{n-1} + b_n u_n + a_n u_{n+1}`, with `a` and `b`
//! extended periodically. Discrete Schrodinger operators are the case
//! `a == 1`.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polynomial::RealPolynomial;
use crate::spectral_set::FiniteGapSet;

/// Gaps narrower than this are treated as closed and fused.
pub const GAP_FUSION_TOL: f64 = 1e-9;

/// Imaginary parts above this make [`real_roots`] fail.
pub const COMPLEX_ROOT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "JacobiRepr", into = "JacobiRepr")]
pub struct PeriodicJacobi {
    a: Vec<f64>,
    b: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct JacobiRepr {
    period: usize,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl TryFrom<JacobiRepr> for PeriodicJacobi {
    type Error = Error;
    fn try_from(r: JacobiRepr) -> Result<Self> {
        if r.period != r.a.len() {
            return Err(Error::InvalidJacobi(format!(
                "period {} does not match {} off-diagonal entries",
                r.period,
                r.a.len()
            )));
        }
        PeriodicJacobi::new(r.a, r.b)
    }
}

impl From<PeriodicJacobi> for JacobiRepr {
    fn from(j: PeriodicJacobi) -> Self {
        JacobiRepr {
            period: j.period(),
            a: j.a,
            b: j.b,
        }
    }
}

/// Closed-gap-fused band spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct BandSpectrum {
    pub set: FiniteGapSet,
    /// Number of gaps narrower than [`GAP_FUSION_TOL`] that were fused.
    pub closed_gaps: usize,
}

/// Which boundary condition closes the period: `u_{n+p} = +u_n` or `-u_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Floquet {
    Periodic,
    Antiperiodic,
}

impl PeriodicJacobi {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidJacobi("period must be at least 1".into()));
        }
        if a.len() != b.len() {
            return Err(Error::InvalidJacobi(format!(
                "a has {} entries but b has {}",
                a.len(),
                b.len()
            )));
        }
        if let Some(i) = a.iter().position(|x| !(x.is_finite() && *x > 0.0)) {
            return Err(Error::InvalidJacobi(format!(
                "a[{i}] = {} is not positive",
                a[i]
            )));
        }
        if let Some(i) = b.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidJacobi(format!("b[{i}] is not finite")));
        }
        Ok(Self { a, b })
    }

    /// Discrete Schrodinger operator with potential `v`.
    pub fn dso(v: Vec<f64>) -> Result<Self> {
        Self::new(vec![1.0; v.len()], v)
    }

    /// The free operator `a == 1, b == 0` with period 1.
    pub fn free() -> Self {
        Self {
            a: vec![1.0],
            b: vec![0.0],
        }
    }

    pub fn period(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// `a_n` for any integer `n`.
    pub fn a_at(&self, n: i64) -> f64 {
        self.a[n.rem_euclid(self.period() as i64) as usize]
    }

    /// `b_n` for any integer `n`.
    pub fn b_at(&self, n: i64) -> f64 {
        self.b[n.rem_euclid(self.period() as i64) as usize]
    }

    pub fn is_dso(&self) -> bool {
        self.a.iter().all(|&x| x == 1.0)
    }

    /// `(a, b) -> (alpha a, alpha b)`, which dilates the spectrum by `alpha`.
    pub fn scale(&self, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::NonPositiveScale(alpha));
        }
        Self::new(
            self.a.iter().map(|x| alpha * x).collect(),
            self.b.iter().map(|x| alpha * x).collect(),
        )
    }

    /// Conjugation by the left shift: both sequences rotate by one index.
    pub fn shift(&self) -> Self {
        let mut a = self.a.clone();
        let mut b = self.b.clone();
        a.rotate_left(1);
        b.rotate_left(1);
        Self { a, b }
    }

    /// `(a_1 ... a_p)^{1/p}`, computed in log space.
    pub fn geometric_mean_a(&self) -> f64 {
        (self.a.iter().map(|x| x.ln()).sum::<f64>() / self.period() as f64).exp()
    }

    /// Discriminant `tr(T_p(z) ... T_1(z))` with the unimodular transfer
    /// matrices `T_n = [[(z - b_n)/a_n, -a_{n-1}/a_n], [1, 0]]`.
    ///
    /// Degree `p`, leading coefficient `1 / (a_1 ... a_p)`.
    pub fn discriminant(&self) -> RealPolynomial {
        let one = RealPolynomial::constant(1.0);
        let zero = RealPolynomial::zero();
        let mut m = [[one.clone(), zero.clone()], [zero, one]];
        for n in 0..self.period() {
            let an = self.a[n];
            let prev = self.a_at(n as i64 - 1);
            let t00 = RealPolynomial::new(vec![-self.b[n] / an, 1.0 / an]);
            let t01 = -prev / an;
            // T * M, with T = [[t00, t01], [1, 0]]
            let r0c0 = &(&t00 * &m[0][0]) + &m[1][0].scale(t01);
            let r0c1 = &(&t00 * &m[0][1]) + &m[1][1].scale(t01);
            let r1c0 = m[0][0].clone();
            let r1c1 = m[0][1].clone();
            m = [[r0c0, r0c1], [r1c0, r1c1]];
        }
        &m[0][0] + &m[1][1]
    }

    /// The `p x p` Floquet matrix for `theta = 0` (periodic) or `pi`
    /// (antiperiodic).
    pub fn floquet_matrix(&self, bc: Floquet) -> DMatrix<f64> {
        let p = self.period();
        let corner = match bc {
            Floquet::Periodic => 1.0,
            Floquet::Antiperiodic => -1.0,
        };
        let mut m = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.b));
        for i in 0..p {
            let j = (i + 1) % p;
            let w = if i == p - 1 {
                corner * self.a[i]
            } else {
                self.a[i]
            };
            m[(i, j)] += w;
            m[(j, i)] += w;
        }
        m
    }

    /// Eigenvalues of the Floquet matrix, ascending. These are the roots of
    /// `Delta(z) = 2` (periodic) or `Delta(z) = -2` (antiperiodic).
    pub fn floquet_eigenvalues(&self, bc: Floquet) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.floquet_matrix(bc))
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// The spectrum `{z : |Delta(z)| <= 2}`.
    ///
    /// Edges are the `2p` Floquet eigenvalues merged in ascending order;
    /// consecutive pairs are bands, and gaps narrower than
    /// [`GAP_FUSION_TOL`] are closed.
    pub fn band_spectrum(&self) -> Result<BandSpectrum> {
        let mut all = self.floquet_eigenvalues(Floquet::Periodic);
        all.extend(self.floquet_eigenvalues(Floquet::Antiperiodic));
        all.sort_by(f64::total_cmp);
        let mut edges = vec![all[0]];
        let mut closed_gaps = 0;
        for pair in all[1..all.len() - 1].chunks_exact(2) {
            if pair[1] - pair[0] < GAP_FUSION_TOL {
                closed_gaps += 1;
            } else {
                edges.extend_from_slice(pair);
            }
        }
        edges.push(all[all.len() - 1]);
        Ok(BandSpectrum {
            set: FiniteGapSet::new(edges)?,
            closed_gaps,
        })
    }
}

/// Real roots of `p` from the eigenvalues of its companion matrix, each
/// refined by one Newton step, ascending.
pub fn real_roots(p: &RealPolynomial) -> Result<Vec<f64>> {
    let d = p.degree();
    if d == 0 || p.is_zero() {
        return Ok(Vec::new());
    }
    let lead = p.leading();
    let mut comp = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        comp[(i, d - 1)] = -p.coeff(i) / lead;
    }
    let dp = p.derivative();
    let mut roots = Vec::with_capacity(d);
    for z in comp.complex_eigenvalues().iter() {
        if z.im.abs() > COMPLEX_ROOT_TOL * z.re.abs().max(1.0) {
            return Err(Error::ComplexRoots { im: z.im });
        }
        let mut x = z.re;
        let slope = dp.eval(x);
        if slope != 0.0 {
            let step = p.eval(x) / slope;
            // keep the polish local; near double roots Newton can overshoot
            if step.abs() < 1e-6 * x.abs().max(1.0) {
                x -= step;
            }
        }
        roots.push(x);
    }
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}

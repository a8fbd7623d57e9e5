//! Finite-gap compacts: finite unions of disjoint closed real intervals.
//!
//! A set with `n` gaps is identified by its `2(n+1)` edges read from left
//! to right, `(E_0^+, E_1^-, E_1^+, ..., E_n^+, E_0^-)`. Band `j` is
//! `[edges[2j], edges[2j+1]]` and gap `j >= 1` is
//! `(edges[2j-1], edges[2j])`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polynomial::RealPolynomial;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EdgesRepr", into = "EdgesRepr")]
pub struct FiniteGapSet {
    edges: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct EdgesRepr {
    edges: Vec<f64>,
}

impl TryFrom<EdgesRepr> for FiniteGapSet {
    type Error = Error;
    fn try_from(r: EdgesRepr) -> Result<Self> {
        FiniteGapSet::new(r.edges)
    }
}

impl From<FiniteGapSet> for EdgesRepr {
    fn from(s: FiniteGapSet) -> Self {
        EdgesRepr { edges: s.edges }
    }
}

impl FiniteGapSet {
    /// Validates an ascending edge vector.
    pub fn new(edges: Vec<f64>) -> Result<Self> {
        if edges.len() < 2 || !edges.len().is_multiple_of(2) {
            return Err(Error::OddLength { len: edges.len() });
        }
        if let Some(index) = edges.iter().position(|e| !e.is_finite()) {
            return Err(Error::NonFiniteEdge { index });
        }
        if let Some(i) = edges.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::NotIncreasing { index: i + 1 });
        }
        Ok(Self { edges })
    }

    /// The single band `[lo, hi]`.
    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo, hi])
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn gap_count(&self) -> usize {
        self.edges.len() / 2 - 1
    }

    pub fn band_count(&self) -> usize {
        self.edges.len() / 2
    }

    pub fn lower(&self) -> f64 {
        self.edges[0]
    }

    pub fn upper(&self) -> f64 {
        self.edges[self.edges.len() - 1]
    }

    pub fn diameter(&self) -> f64 {
        self.upper() - self.lower()
    }

    /// Band `j`, `0 <= j <= n`.
    pub fn band(&self, j: usize) -> (f64, f64) {
        (self.edges[2 * j], self.edges[2 * j + 1])
    }

    /// Gap `j`, `1 <= j <= n`.
    pub fn gap(&self, j: usize) -> (f64, f64) {
        assert!(
            j >= 1 && j <= self.gap_count(),
            "gap index {j} out of range"
        );
        (self.edges[2 * j - 1], self.edges[2 * j])
    }

    pub fn bands(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.edges.chunks_exact(2).map(|c| (c[0], c[1]))
    }

    pub fn gaps(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.edges[1..self.edges.len() - 1]
            .chunks_exact(2)
            .map(|c| (c[0], c[1]))
    }

    /// Smallest distance between consecutive edges.
    pub fn min_separation(&self) -> f64 {
        self.edges
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }

    /// Index of the band whose interior contains `x`.
    pub fn band_containing(&self, x: f64) -> Option<usize> {
        self.bands().position(|(lo, hi)| lo < x && x < hi)
    }

    /// `Q_E(z) = prod (z - e)` over all edges; monic of degree `2(n+1)`,
    /// negative inside bands and positive elsewhere on the real line.
    pub fn q_poly(&self) -> RealPolynomial {
        RealPolynomial::from_roots(&self.edges)
    }

    /// The dilation `alpha * E`.
    pub fn scale(&self, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::NonPositiveScale(alpha));
        }
        Self::new(self.edges.iter().map(|e| e * alpha).collect())
    }

    /// The affine image `alpha * E + beta`, `alpha > 0`.
    pub fn affine(&self, alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::NonPositiveScale(alpha));
        }
        Self::new(self.edges.iter().map(|e| alpha * e + beta).collect())
    }

    /// The mirror image `-E`, edges re-sorted.
    pub fn reflect(&self) -> Self {
        Self {
            edges: self.edges.iter().rev().map(|e| -e).collect(),
        }
    }

    /// Center and half-width of the convex hull.
    pub(crate) fn hull_center_radius(&self) -> (f64, f64) {
        (0.5 * (self.lower() + self.upper()), 0.5 * self.diameter())
    }
}

//! Finite banded windows `[-W, W]` of doubly infinite operators.

use crate::jacobi_periodic::PeriodicJacobi;

/// Banded square matrix on the index window `[-W, W]`, stored by rows with
/// `2 * bandwidth + 1` diagonals each.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedWindow {
    half_width: usize,
    bandwidth: usize,
    /// Entries at distance `< trust_margin` from the window boundary may
    /// differ from the infinite operator.
    trust_margin: usize,
    data: Vec<f64>,
}

impl BandedWindow {
    pub fn zeros(half_width: usize, bandwidth: usize) -> Self {
        let size = 2 * half_width + 1;
        Self {
            half_width,
            bandwidth,
            trust_margin: 0,
            data: vec![0.0; size * (2 * bandwidth + 1)],
        }
    }

    /// `c * I`.
    pub fn identity(half_width: usize, c: f64) -> Self {
        let mut m = Self::zeros(half_width, 0);
        for i in 0..m.size() {
            m.set_local(i, i, c);
        }
        m
    }

    /// The restriction of `J` to `[-W, W]`; `J[n][n+1] = a_n`.
    pub fn from_jacobi(j: &PeriodicJacobi, half_width: usize) -> Self {
        let mut m = Self::zeros(half_width, 1);
        let w = half_width as i64;
        for n in -w..=w {
            m.set(n, n, j.b_at(n));
            if n < w {
                m.set(n, n + 1, j.a_at(n));
                m.set(n + 1, n, j.a_at(n));
            }
        }
        m.trust_margin = 1;
        m
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    pub fn trust_margin(&self) -> usize {
        self.trust_margin
    }

    pub fn size(&self) -> usize {
        2 * self.half_width + 1
    }

    fn stride(&self) -> usize {
        2 * self.bandwidth + 1
    }

    fn get_local(&self, i: usize, j: usize) -> f64 {
        if i.abs_diff(j) > self.bandwidth || i >= self.size() || j >= self.size() {
            return 0.0;
        }
        self.data[i * self.stride() + j + self.bandwidth - i]
    }

    fn set_local(&mut self, i: usize, j: usize, v: f64) {
        assert!(i.abs_diff(j) <= self.bandwidth, "entry outside the band");
        let s = self.stride();
        self.data[i * s + j + self.bandwidth - i] = v;
    }

    fn local(&self, n: i64) -> usize {
        let i = n + self.half_width as i64;
        assert!(
            i >= 0 && (i as usize) < self.size(),
            "index {n} outside window"
        );
        i as usize
    }

    /// Entry at global indices `(m, n)`.
    pub fn get(&self, m: i64, n: i64) -> f64 {
        self.get_local(self.local(m), self.local(n))
    }

    pub fn set(&mut self, m: i64, n: i64, v: f64) {
        let (i, j) = (self.local(m), self.local(n));
        self.set_local(i, j, v);
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.half_width, other.half_width);
        let bw = self.bandwidth + other.bandwidth;
        let mut out = Self::zeros(self.half_width, bw);
        let size = self.size();
        for i in 0..size {
            let jlo = i.saturating_sub(bw);
            let jhi = (i + bw).min(size - 1);
            for j in jlo..=jhi {
                let klo = i
                    .saturating_sub(self.bandwidth)
                    .max(j.saturating_sub(other.bandwidth));
                let khi = (i + self.bandwidth).min(j + other.bandwidth).min(size - 1);
                let mut s = 0.0;
                for k in klo..=khi {
                    s += self.get_local(i, k) * other.get_local(k, j);
                }
                out.set_local(i, j, s);
            }
        }
        out.trust_margin = self.trust_margin + other.trust_margin;
        out
    }

    /// `self + c * I`.
    pub fn add_identity(&self, c: f64) -> Self {
        let mut out = self.clone();
        for i in 0..self.size() {
            let v = out.get_local(i, i) + c;
            out.set_local(i, i, v);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.half_width, other.half_width);
        let bw = self.bandwidth.max(other.bandwidth);
        let mut out = Self::zeros(self.half_width, bw);
        for i in 0..self.size() {
            let jlo = i.saturating_sub(bw);
            let jhi = (i + bw).min(self.size() - 1);
            for j in jlo..=jhi {
                out.set_local(i, j, self.get_local(i, j) - other.get_local(i, j));
            }
        }
        out.trust_margin = self.trust_margin.max(other.trust_margin);
        out
    }

    /// Strictly upper triangular part minus strictly lower triangular part.
    pub fn antisymmetric_split(&self) -> Self {
        let mut out = self.clone();
        for i in 0..self.size() {
            let jlo = i.saturating_sub(self.bandwidth);
            let jhi = (i + self.bandwidth).min(self.size() - 1);
            for j in jlo..=jhi {
                let v = self.get_local(i, j);
                let v = match j.cmp(&i) {
                    std::cmp::Ordering::Greater => v,
                    std::cmp::Ordering::Less => -v,
                    std::cmp::Ordering::Equal => 0.0,
                };
                out.set_local(i, j, v);
            }
        }
        out
    }

    pub(crate) fn with_trust_margin(mut self, margin: usize) -> Self {
        self.trust_margin = margin;
        self
    }

    /// Global indices farther than `trust_margin` from the boundary.
    pub fn interior(&self) -> std::ops::RangeInclusive<i64> {
        let w = self.half_width as i64;
        let m = self.trust_margin as i64;
        (-w + m)..=(w - m)
    }

    /// Largest `|entry|` with both indices in [`Self::interior`].
    pub fn interior_max_abs(&self) -> f64 {
        let range = self.interior();
        let mut best: f64 = 0.0;
        for m in range.clone() {
            let lo = (m - self.bandwidth as i64).max(*range.start());
            let hi = (m + self.bandwidth as i64).min(*range.end());
            for n in lo..=hi {
                best = best.max(self.get(m, n).abs());
            }
        }
        best
    }
}

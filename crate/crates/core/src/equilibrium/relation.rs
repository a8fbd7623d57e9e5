//! Exhaustive integer-relation search `q . omega = k`.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

/// A witness that `omega` lies (within `residual`) on the hyperplane
/// `q . v = k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegerRelation {
    pub q: Vec<i64>,
    pub k: i64,
    pub residual: f64,
}

impl IntegerRelation {
    /// `max |q_i|`.
    pub fn height(&self) -> i64 {
        self.q.iter().map(|x| x.abs()).max().unwrap_or(0)
    }
}

struct Candidate {
    q: Vec<i64>,
    k: i64,
    residual: f64,
    scale: f64,
}

impl Candidate {
    fn height(&self) -> i64 {
        self.q.iter().map(|x| x.abs()).max().unwrap_or(0)
    }

    fn lex_cmp(&self, other: &Candidate) -> Ordering {
        self.height()
            .cmp(&other.height())
            .then_with(|| self.q.cmp(&other.q))
            .then_with(|| self.k.cmp(&other.k))
    }
}

/// Visits every `q` in `[-qmax, qmax]^n` whose first nonzero entry is
/// positive, in lexicographic order.
fn for_each_q<F: FnMut(&[i64])>(n: usize, qmax: i64, mut f: F) {
    if n == 0 || qmax < 1 {
        return;
    }
    let mut q = vec![-qmax; n];
    loop {
        if q.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0) {
            f(&q);
        }
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if q[i] < qmax {
                q[i] += 1;
                break;
            }
            q[i] = -qmax;
        }
    }
}

/// Best candidate in `[-qmax, qmax]^n`: smallest residual, ties (equal up
/// to roundoff in the dot product) broken by `(max|q_i|, q, k)`.
fn best_candidate(omega: &[f64], qmax: i64) -> Option<Candidate> {
    let mut best: Option<Candidate> = None;
    for_each_q(omega.len(), qmax, |q| {
        let dot: f64 = q.iter().zip(omega).map(|(&qi, &w)| qi as f64 * w).sum();
        let k = dot.round();
        let scale: f64 = q
            .iter()
            .zip(omega)
            .map(|(&qi, &w)| (qi as f64 * w).abs())
            .sum::<f64>()
            + 1.0;
        let cand = Candidate {
            q: q.to_vec(),
            k: k as i64,
            residual: (dot - k).abs(),
            scale,
        };
        let replace = match &best {
            None => true,
            Some(b) => {
                let window = 8.0 * f64::EPSILON * (b.scale + cand.scale);
                if cand.residual < b.residual - window {
                    true
                } else if cand.residual <= b.residual + window {
                    cand.lex_cmp(b) == Ordering::Less
                } else {
                    false
                }
            }
        };
        if replace {
            best = Some(cand);
        }
    });
    best
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The relation minimizing `|q . omega - k|` over `0 < max|q_i| <= qmax`,
/// if that minimum is below `tol`.
///
/// The search is exhaustive, `(2 qmax + 1)^n / 2` dot products; it is meant
/// for `n <= 4`. Relations are reported with the first nonzero `q_i`
/// positive and `gcd(q, k) = 1`.
pub fn find_integer_relation(omega: &[f64], qmax: i64, tol: f64) -> Option<IntegerRelation> {
    let best = best_candidate(omega, qmax)?;
    if !(best.residual < tol) {
        return None;
    }
    let g = best.q.iter().fold(best.k, |g, &x| gcd(g, x));
    let (q, k) = if g > 1 {
        (best.q.iter().map(|x| x / g).collect(), best.k / g)
    } else {
        (best.q, best.k)
    };
    let residual = (q
        .iter()
        .zip(omega)
        .map(|(&qi, &w)| qi as f64 * w)
        .sum::<f64>()
        - k as f64)
        .abs();
    Some(IntegerRelation { q, k, residual })
}

/// `min |q . omega - k|` over `0 < max|q_i| <= qmax` (infinite when the
/// search space is empty).
pub fn min_relation_residual(omega: &[f64], qmax: i64) -> f64 {
    best_candidate(omega, qmax).map_or(f64::INFINITY, |c| c.residual)
}

/// Smallest `d <= dmax` with every `d * omega_j` within `tol` of an integer.
pub fn common_denominator(omega: &[f64], dmax: u64, tol: f64) -> Option<u64> {
    (1..=dmax).find(|&d| {
        omega
            .iter()
            .all(|&w| (d as f64 * w - (d as f64 * w).round()).abs() < tol)
    })
}

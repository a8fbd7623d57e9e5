//! Branch enumeration for the stationary two-gap recursion on `b`.
//!
//! A discrete Schrodinger operator stationary for a cubic Toda polynomial
//! satisfies, at every site, `b_{n+1} + b_n + b_{n-1} = C` or
//! `b_{n+1} = b_{n-1}`. Starting from `b_0, b_1` with
//! `b_2 = C - (b_0 + b_1)`, every branch string keeps `b` inside
//! `{b_0, b_1, b_2}`.

use serde::{Deserialize, Serialize};

/// Which relation fixes the next value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Case {
    /// `b_{n+1} = C - b_n - b_{n-1}`
    Sum,
    /// `b_{n+1} = b_{n-1}`
    Reflect,
}

impl Case {
    fn next(self, prev: f64, cur: f64, c: f64) -> f64 {
        match self {
            Case::Sum => c - (cur + prev),
            Case::Reflect => prev,
        }
    }
}

/// Distinct values reached at one depth of the branch tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepLog {
    /// Signed site index: positive forward, negative backward.
    pub site: i64,
    /// Number of branch strings of this length.
    pub branches: u64,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecursionReport {
    /// Union of every value reached, both directions, ascending.
    pub values: Vec<f64>,
    /// `{b_0, b_1, C - b_0 - b_1}` as given.
    pub seed_values: [f64; 3],
    pub forward: Vec<StepLog>,
    pub backward: Vec<StepLog>,
    /// Values compare equal within this absolute tolerance.
    pub tolerance: f64,
}

impl RecursionReport {
    /// Every reached value is within tolerance of a seed value.
    pub fn closed_over_seeds(&self) -> bool {
        self.values.iter().all(|v| {
            self.seed_values
                .iter()
                .any(|s| (v - s).abs() <= self.tolerance)
        })
    }
}

fn insert(values: &mut Vec<f64>, v: f64, tol: f64) {
    if !values.iter().any(|x| (x - v).abs() <= tol) {
        values.push(v);
    }
}

/// Depth-first walk over all `2^depth` strings from `(prev, cur)`;
/// `logs[d]` gathers the values reached after `d + 1` choices.
fn walk(prev: f64, cur: f64, c: f64, depth: usize, tol: f64, logs: &mut [Vec<f64>]) {
    if depth == 0 {
        return;
    }
    let level = logs.len() - depth;
    for case in [Case::Sum, Case::Reflect] {
        let next = case.next(prev, cur, c);
        insert(&mut logs[level], next, tol);
        walk(cur, next, c, depth - 1, tol, logs);
    }
}

/// The sequence `b_0, b_1, b_2, ...` for one forward branch string.
pub fn branch_sequence(b0: f64, b1: f64, c: f64, branches: &[Case]) -> Vec<f64> {
    let mut seq = vec![b0, b1, c - (b0 + b1)];
    for &case in branches {
        let n = seq.len();
        seq.push(case.next(seq[n - 2], seq[n - 1], c));
    }
    seq
}

/// Enumerates all `2^(L-2)` forward branch strings after the seed
/// `b_2 = C - (b_0 + b_1)` and all `2^L` backward strings from `(b_1, b_0)`.
pub fn two_gap_recursion(b0: f64, b1: f64, c: f64, length: usize) -> RecursionReport {
    assert!(length >= 3, "recursion length must be at least 3");
    let b2 = c - (b0 + b1);
    let tol = 1e-12 * (1.0 + b0.abs() + b1.abs() + c.abs());

    let forward_depth = length - 2;
    let mut fwd = vec![Vec::new(); forward_depth];
    walk(b1, b2, c, forward_depth, tol, &mut fwd);

    let mut bwd = vec![Vec::new(); length];
    walk(b1, b0, c, length, tol, &mut bwd);

    let mut values = Vec::new();
    for v in [b0, b1, b2]
        .into_iter()
        .chain(fwd.iter().chain(&bwd).flatten().copied())
    {
        insert(&mut values, v, tol);
    }
    values.sort_by(f64::total_cmp);

    let to_log = |logs: Vec<Vec<f64>>, first_site: i64, dir: i64| -> Vec<StepLog> {
        logs.into_iter()
            .enumerate()
            .map(|(d, mut v)| {
                v.sort_by(f64::total_cmp);
                StepLog {
                    site: first_site + dir * d as i64,
                    branches: 1u64 << (d + 1),
                    values: v,
                }
            })
            .collect()
    };
    RecursionReport {
        values,
        seed_values: [b0, b1, b2],
        forward: to_log(fwd, 3, 1),
        backward: to_log(bwd, -1, -1),
        tolerance: tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_reflect_is_two_periodic() {
        let seq = branch_sequence(0.3, -1.1, 0.7, &[Case::Reflect; 12]);
        for n in 1..seq.len() - 2 {
            assert_eq!(seq[n + 2], seq[n]);
        }
    }

    #[test]
    fn integer_seed_stays_in_three_values() {
        let r = two_gap_recursion(0.0, 1.0, 3.0, 20);
        assert_eq!(r.values, vec![0.0, 1.0, 2.0]);
        assert!(r.closed_over_seeds());
        assert_eq!(r.forward.len(), 18);
        assert_eq!(r.forward.last().unwrap().branches, 1 << 18);
        assert_eq!(r.backward.len(), 20);
        assert_eq!(r.backward[0].site, -1);
    }

    #[test]
    fn constant_solution() {
        let beta = 0.45;
        let r = two_gap_recursion(beta, beta, 3.0 * beta, 12);
        assert_eq!(r.values.len(), 1);
        assert!((r.values[0] - beta).abs() <= r.tolerance);
    }
}

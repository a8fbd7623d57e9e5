//! Finite-difference Jacobian of the frequency map `E -> omega(E)`.

use nalgebra::DMatrix;

use super::frequencies;
use crate::error::{Error, Result};
use crate::spectral_set::FiniteGapSet;

/// Singular values at or below this count as zero when reporting rank.
pub const RANK_THRESHOLD: f64 = 1e-6;

/// `1e-5` times the minimal edge separation.
pub fn default_step(e: &FiniteGapSet) -> f64 {
    1e-5 * e.min_separation()
}

/// Central differences of `omega` in each edge coordinate; `n x 2(n+1)`.
pub fn omega_jacobian(e: &FiniteGapSet, h: f64, n_nodes: usize) -> Result<DMatrix<f64>> {
    if !(h > 0.0) {
        return Err(Error::DegenerateStep { h });
    }
    let n = e.gap_count();
    let m = e.edges().len();
    let mut jac = DMatrix::zeros(n, m);
    for i in 0..m {
        let perturbed = |sign: f64| {
            let mut edges = e.edges().to_vec();
            edges[i] += sign * h;
            FiniteGapSet::new(edges).map_err(|_| Error::DegenerateStep { h })
        };
        let plus = frequencies(&perturbed(1.0)?, n_nodes)?.omega;
        let minus = frequencies(&perturbed(-1.0)?, n_nodes)?.omega;
        for j in 0..n {
            jac[(j, i)] = (plus[j] - minus[j]) / (2.0 * h);
        }
    }
    Ok(jac)
}

/// Numerical rank: singular values above [`RANK_THRESHOLD`].
pub fn rank(jac: &DMatrix<f64>) -> usize {
    if jac.nrows() == 0 {
        return 0;
    }
    jac.clone()
        .singular_values()
        .iter()
        .filter(|&&s| s > RANK_THRESHOLD)
        .count()
}

/// `g(E)`: sum of squared `n x n` minors of the Jacobian over all
/// `n`-element column subsets. Positive exactly when the Jacobian is onto.
pub fn submersion_defect(e: &FiniteGapSet, h: f64, n_nodes: usize) -> Result<f64> {
    let jac = omega_jacobian(e, h, n_nodes)?;
    Ok(sum_squared_minors(&jac))
}

pub(crate) fn sum_squared_minors(jac: &DMatrix<f64>) -> f64 {
    let n = jac.nrows();
    let m = jac.ncols();
    if n == 0 {
        return 1.0;
    }
    let mut cols: Vec<usize> = (0..n).collect();
    let mut total = 0.0;
    loop {
        let minor = DMatrix::from_fn(n, n, |r, c| jac[(r, cols[c])]);
        total += minor.determinant().powi(2);
        // next combination in lexicographic order
        let mut i = n;
        loop {
            if i == 0 {
                return total;
            }
            i -= 1;
            if cols[i] < m - n + i {
                cols[i] += 1;
                for t in i + 1..n {
                    cols[t] = cols[t - 1] + 1;
                }
                break;
            }
        }
    }
}

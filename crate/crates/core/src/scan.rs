//! Seeded sampling of finite-gap sets and the rational-dependence scan.
//!
//! Sampling law: `2(n+1)` independent uniform points on `[-1, 1]`, sorted,
//! redrawn until every consecutive separation is at least `delta`; the set
//! is then rescaled to the target capacity. Sample `i` draws from the
//! ChaCha8 stream `i` of the configured seed, so records do not depend on
//! evaluation order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::equilibrium::{
    common_denominator, default_step, find_integer_relation, frequencies, min_relation_residual,
    normalize_capacity, omega_jacobian, rank, IntegerRelation,
};
use crate::error::{Error, Result};
use crate::quadrature::DEFAULT_NODES;
use crate::spectral_set::FiniteGapSet;

/// Redraw budget for [`sample_set`].
pub const MAX_REDRAWS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub n: usize,
    pub count: usize,
    pub seed: u64,
    pub qmax: i64,
    pub tol: f64,
    pub delta: f64,
    pub nodes: usize,
    pub capacity_target: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            n: 2,
            count: 200,
            seed: 0,
            qmax: 8,
            tol: 1e-6,
            delta: 0.05,
            nodes: DEFAULT_NODES,
            capacity_target: 1.0,
        }
    }
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidArgument(msg.to_string()));
        if self.n < 1 {
            return bad("n must be at least 1");
        }
        if self.count < 1 {
            return bad("count must be at least 1");
        }
        if self.qmax < 1 {
            return bad("qmax must be at least 1");
        }
        if !(self.tol > 0.0) {
            return bad("tol must be positive");
        }
        if !(self.delta > 0.0) {
            return bad("delta must be positive");
        }
        if self.nodes < 1 {
            return bad("nodes must be at least 1");
        }
        if !(self.capacity_target > 0.0) {
            return bad("capacity target must be positive");
        }
        Ok(())
    }
}

/// One scanned set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub index: usize,
    pub injected: bool,
    /// Edges after capacity normalization (raw edges if that failed).
    pub edges: Vec<f64>,
    pub omega: Vec<f64>,
    pub capacity: Option<f64>,
    pub relation: Option<IntegerRelation>,
    /// `min |q . omega - k|` over `0 < max|q_i| <= qmax`.
    pub min_residual: Option<f64>,
    /// Smallest `d <= qmax` with every `d * omega_j` within `tol` of an integer.
    pub denominator: Option<u64>,
    pub jacobian_rank: Option<usize>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub sampled: usize,
    pub injected: usize,
    pub errors: usize,
    /// Relations found among sampled (not injected) sets.
    pub relation_hits: usize,
    pub injected_hits: usize,
    pub min_residual_lo: Option<f64>,
    pub min_residual_hi: Option<f64>,
    pub min_jacobian_rank: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub config: ScanConfig,
    pub records: Vec<ScanRecord>,
    pub summary: ScanSummary,
}

/// The generator for sample `index` of a scan seeded with `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Draws an `n`-gap set in `[-1, 1]` with consecutive edges at least
/// `delta` apart.
pub fn sample_set<R: Rng>(n: usize, rng: &mut R, delta: f64) -> Result<FiniteGapSet> {
    if n < 1 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let m = 2 * (n + 1);
    let mut pts = vec![0.0; m];
    for _ in 0..MAX_REDRAWS {
        for p in pts.iter_mut() {
            *p = 2.0 * rng.gen::<f64>() - 1.0;
        }
        pts.sort_by(f64::total_cmp);
        if pts.windows(2).all(|w| w[1] - w[0] >= delta) {
            return FiniteGapSet::new(pts);
        }
    }
    Err(Error::RejectionOverflow(MAX_REDRAWS))
}

fn analyze(index: usize, injected: bool, raw: &FiniteGapSet, cfg: &ScanConfig) -> ScanRecord {
    let mut rec = ScanRecord {
        index,
        injected,
        edges: raw.edges().to_vec(),
        omega: Vec::new(),
        capacity: None,
        relation: None,
        min_residual: None,
        denominator: None,
        jacobian_rank: None,
        error: None,
    };
    let outcome = (|| -> Result<()> {
        let e = normalize_capacity(raw, cfg.capacity_target, cfg.nodes)?;
        rec.edges = e.edges().to_vec();
        let eq = frequencies(&e, cfg.nodes)?;
        rec.capacity = Some(eq.capacity);
        rec.relation = find_integer_relation(&eq.omega, cfg.qmax, cfg.tol);
        rec.min_residual = Some(min_relation_residual(&eq.omega, cfg.qmax));
        rec.denominator = common_denominator(&eq.omega, cfg.qmax as u64, cfg.tol);
        rec.omega = eq.omega;
        let jac = omega_jacobian(&e, default_step(&e), cfg.nodes)?;
        rec.jacobian_rank = Some(rank(&jac));
        Ok(())
    })();
    if let Err(err) = outcome {
        rec.error = Some(err.to_string());
    }
    rec
}

fn summarize(records: &[ScanRecord]) -> ScanSummary {
    let ok = || records.iter().filter(|r| r.error.is_none());
    let residuals = || ok().filter(|r| !r.injected).filter_map(|r| r.min_residual);
    ScanSummary {
        sampled: records.iter().filter(|r| !r.injected).count(),
        injected: records.iter().filter(|r| r.injected).count(),
        errors: records.iter().filter(|r| r.error.is_some()).count(),
        relation_hits: ok().filter(|r| !r.injected && r.relation.is_some()).count(),
        injected_hits: ok().filter(|r| r.injected && r.relation.is_some()).count(),
        min_residual_lo: residuals().reduce(f64::min),
        min_residual_hi: residuals().reduce(f64::max),
        min_jacobian_rank: ok().filter_map(|r| r.jacobian_rank).min(),
    }
}

/// Runs the scan; `injected` sets are analyzed first (records
/// `0..injected.len()`), followed by `cfg.count` sampled sets. Per-sample
/// failures are recorded, never propagated.
pub fn run_scan(cfg: &ScanConfig, injected: &[FiniteGapSet]) -> Result<ScanReport> {
    cfg.validate()?;
    let offset = injected.len();
    let mut records: Vec<ScanRecord> = injected
        .par_iter()
        .enumerate()
        .map(|(i, e)| analyze(i, true, e, cfg))
        .collect();
    let sampled: Vec<ScanRecord> = (0..cfg.count)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(cfg.seed, i as u64);
            match sample_set(cfg.n, &mut rng, cfg.delta) {
                Ok(e) => analyze(offset + i, false, &e, cfg),
                Err(err) => ScanRecord {
                    index: offset + i,
                    injected: false,
                    edges: Vec::new(),
                    omega: Vec::new(),
                    capacity: None,
                    relation: None,
                    min_residual: None,
                    denominator: None,
                    jacobian_rank: None,
                    error: Some(err.to_string()),
                },
            }
        })
        .collect();
    records.extend(sampled);
    let summary = summarize(&records);
    Ok(ScanReport {
        config: cfg.clone(),
        records,
        summary,
    })
}

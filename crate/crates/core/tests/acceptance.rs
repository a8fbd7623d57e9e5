//! Acceptance suite. Prints one PASS/FAIL line per criterion with its
//! measured worst-case error and runtime, and exits nonzero on any failure.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use common::{max_abs_diff, random_dso, random_jacobi, random_set, rng};
use fgs_core::equilibrium::{
    capacity, common_denominator, critical_polynomial, find_integer_relation, frequencies,
    gap_residuals,
};
use fgs_core::quadrature::weighted_integral;
use fgs_core::scan::{run_scan, ScanConfig};
use fgs_core::toda::{
    flow_trajectory, lax_commutator, stationarity_defect, stationary_polynomial, toda_rhs,
    two_gap_recursion,
};
use fgs_core::{FiniteGapSet, PeriodicJacobi, RealPolynomial};
use rand::Rng;

const N: usize = 256;

type Criterion = (&'static str, fn() -> Outcome, Duration);

struct Outcome {
    ok: bool,
    detail: String,
}

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    check(false, detail)
}

/// `int_0^a x^k / sqrt(x (a - x)) dx = pi (2k)! / (4^k (k!)^2) a^k`.
fn beta_oracle(k: u32, a: f64) -> f64 {
    let fact = |m: u32| (1..=m).map(|i| i as f64).product::<f64>();
    PI * fact(2 * k) / (4f64.powi(k as i32) * fact(k).powi(2)) * a.powi(k as i32)
}

fn c1_quadrature() -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 0..=6u32 {
        for a in [0.5, 1.0, 3.0] {
            let got = match weighted_integral(|x| x.powi(k as i32), 0.0, a, 128) {
                Ok(v) => v,
                Err(e) => return fail(format!("k={k} a={a}: {e}")),
            };
            let want = beta_oracle(k, a);
            worst = worst.max((got - want).abs() / want);
        }
    }
    check(worst < 1e-12, format!("max rel err {worst:.2e} (< 1e-12)"))
}

fn c2_critical_polynomial() -> Outcome {
    let mut r = rng(2);
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let e = random_set(&mut r, 1 + i % 2, 0.05);
        let p = match critical_polynomial(&e, N) {
            Ok(p) => p,
            Err(err) => return fail(format!("{e:?}: {err}")),
        };
        // re-check the gap integrals at a finer resolution
        let res = match gap_residuals(&e, &p, 2 * N) {
            Ok(r) => r,
            Err(err) => return fail(format!("{e:?}: {err}")),
        };
        if !p.is_monic() || p.degree() != e.gap_count() {
            return fail(format!("{e:?}: not monic of degree n"));
        }
        worst = res.iter().fold(worst, |w, x| w.max(x.abs()));
    }
    check(
        worst < 1e-9,
        format!("max gap residual {worst:.2e} (< 1e-9) over 50 sets"),
    )
}

fn c3_capacity_bridge() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut r = rng(3);
    for i in 0..25 {
        let p = 1 + i % 4;
        let j = random_jacobi(&mut r, p);
        let spectrum = match j.band_spectrum() {
            Ok(s) => s,
            Err(e) => return fail(format!("{j:?}: {e}")),
        };
        let cap = match capacity(&spectrum.set, N) {
            Ok(c) => c,
            Err(e) => return fail(format!("{j:?}: {e}")),
        };
        let gm = j.geometric_mean_a();
        worst = worst.max((cap - gm).abs() / gm);
    }
    let interval = capacity(&FiniteGapSet::new(vec![-2.0, 2.0]).unwrap(), N);
    let s5 = 5f64.sqrt();
    let two = capacity(&FiniteGapSet::new(vec![-s5, -1.0, 1.0, s5]).unwrap(), N);
    let (interval, two) = match (interval, two) {
        (Ok(a), Ok(b)) => (a, b),
        (a, b) => return fail(format!("fixed sets: {a:?} {b:?}")),
    };
    let ok = worst < 1e-5 && (interval - 1.0).abs() < 1e-8 && (two - 1.0).abs() < 1e-6;
    check(
        ok,
        format!(
            "max rel err {worst:.2e} over 25 J (< 1e-5); |cap[-2,2]-1| = {:.1e}; |cap(sqrt5 set)-1| = {:.1e}",
            (interval - 1.0).abs(),
            (two - 1.0).abs()
        ),
    )
}

fn c4_scaling() -> Outcome {
    let mut r = rng(4);
    let (mut cap_err, mut omega_err): (f64, f64) = (0.0, 0.0);
    for i in 0..20 {
        let e = random_set(&mut r, 1 + i % 3, 0.05);
        let base = match (capacity(&e, N), frequencies(&e, N)) {
            (Ok(c), Ok(f)) => (c, f.omega),
            (c, f) => return fail(format!("{e:?}: {:?} {:?}", c.err(), f.err())),
        };
        for alpha in [0.5, 2.0, 3.7] {
            let s = e.scale(alpha).unwrap();
            match (capacity(&s, N), frequencies(&s, N)) {
                (Ok(c), Ok(f)) => {
                    cap_err = cap_err.max((c - alpha * base.0).abs() / (alpha * base.0));
                    omega_err = omega_err.max(max_abs_diff(&f.omega, &base.1));
                }
                (c, f) => return fail(format!("{s:?}: {:?} {:?}", c.err(), f.err())),
            }
        }
    }
    check(
        cap_err < 1e-8 && omega_err < 1e-8,
        format!("cap rel err {cap_err:.2e} (< 1e-8); omega abs err {omega_err:.2e} (< 1e-8)"),
    )
}

fn c5_periodic_type() -> Outcome {
    let mut r = rng(5);
    let mut worst: f64 = 0.0;
    let mut found = 0;
    for i in 0..20 {
        let p = 2 + i % 3;
        let j = random_dso(&mut r, p);
        let data = match j.band_spectrum().and_then(|s| frequencies(&s.set, N)) {
            Ok(d) => d,
            Err(e) => return fail(format!("{j:?}: {e}")),
        };
        for w in &data.omega {
            let m = (w * p as f64).round();
            worst = worst.max((w - m / p as f64).abs());
        }
        if find_integer_relation(&data.omega, p as i64, 1e-5).is_some() {
            found += 1;
        }
    }
    check(
        worst < 1e-6 && found == 20,
        format!("max distance to (1/p)Z {worst:.2e} (< 1e-6); relations found {found}/20"),
    )
}

fn c6_toda_consistency() -> Outcome {
    let mut r = rng(6);
    let z = RealPolynomial::monomial(1);
    let mut worst: f64 = 0.0;
    let mut js = Vec::new();
    for i in 0..20 {
        let p = 1 + i % 4;
        let j = random_jacobi(&mut r, p);
        let c = match lax_commutator(&j, &z, 100) {
            Ok(c) => c,
            Err(e) => return fail(format!("{j:?}: {e}")),
        };
        let (da, db) = toda_rhs(&j);
        let idx = |n: i64| n.rem_euclid(p as i64) as usize;
        let range = c.interior();
        for m in range.clone() {
            for n in m..=(m + 3).min(*range.end()) {
                let want = match n - m {
                    0 => db[idx(m)],
                    1 => da[idx(m)],
                    _ => 0.0,
                };
                worst = worst.max((c.get(m, n) - want).abs());
                worst = worst.max((c.get(n, m) - want).abs());
            }
        }
        js.push(j);
    }
    let mut drift: f64 = 0.0;
    for j in &js {
        match flow_trajectory(j, 1.0, 1e-3, 1) {
            Ok(traj) => drift = traj.iter().fold(drift, |d, s| d.max(s.floquet_defect)),
            Err(e) => return fail(format!("{j:?}: {e}")),
        }
    }
    check(
        worst < 1e-12 && drift < 1e-8,
        format!("commutator vs rhs {worst:.2e} (< 1e-12) over 20 J; Floquet drift {drift:.2e} (< 1e-8) to t=1 over 20 J"),
    )
}

fn c7_dso_leaves_dso_set() -> Outcome {
    let mut r = rng(7);
    for _ in 0..20 {
        let p = r.gen_range(2..=6);
        let j = random_dso(&mut r, p);
        let (da, _) = toda_rhs(&j);
        let got = da.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let b = j.b();
        let want = (0..p)
            .map(|n| (b[(n + 1) % p] - b[n]).abs())
            .fold(0.0f64, f64::max);
        if got != want || got == 0.0 {
            return fail(format!("{j:?}: max|da| = {got}, expected {want}"));
        }
    }
    let flat = PeriodicJacobi::dso(vec![0.4; 5]).unwrap();
    let (da, db) = toda_rhs(&flat);
    let zero = da.iter().chain(&db).all(|&x| x == 0.0);
    check(
        zero,
        "max|da| = max a_n|b_{n+1}-b_n| exactly on 20 DSOs; constant b gives da = db = 0",
    )
}

fn c8_stationarity_loop() -> Outcome {
    let j = PeriodicJacobi::dso(vec![1.0, -1.0]).unwrap();
    let p: RealPolynomial = match j.band_spectrum() {
        Ok(s) => stationary_polynomial(&s.set).into(),
        Err(e) => return fail(e.to_string()),
    };
    let z2 = RealPolynomial::monomial(2);
    let is_z2 = max_abs_diff(p.coeffs(), z2.coeffs()) < 1e-12;
    let d2 = stationarity_defect(&j, &p, 100).unwrap_or(f64::INFINITY);

    let free = PeriodicJacobi::free();
    let pf: RealPolynomial = match free.band_spectrum() {
        Ok(s) => stationary_polynomial(&s.set).into(),
        Err(e) => return fail(e.to_string()),
    };
    let is_z = pf == RealPolynomial::monomial(1);
    let d1 = stationarity_defect(&free, &pf, 100).unwrap_or(f64::INFINITY);
    check(
        is_z2 && d2 < 1e-8 && is_z && d1 <= 1e-14,
        format!("period 2: P = {p}, defect {d2:.1e} (< 1e-8); free: P = {pf}, defect {d1:.1e} (<= 1e-14)"),
    )
}

fn c9_recursion() -> Outcome {
    let mut r = rng(9);
    for _ in 0..10 {
        let (b0, b1, c) = (
            r.gen_range(-2.0..2.0),
            r.gen_range(-2.0..2.0),
            r.gen_range(-3.0..3.0),
        );
        let rep = two_gap_recursion(b0, b1, c, 20);
        let strings = rep.forward.last().map(|s| s.branches).unwrap_or(0);
        if strings != 1 << 18 || !rep.closed_over_seeds() {
            return fail(format!("({b0}, {b1}, {c}): values {:?}", rep.values));
        }
    }
    check(
        true,
        "10 triples, 2^18 forward and 2^20 backward strings each stay in {b0, b1, C-b0-b1}",
    )
}

fn c10_scan() -> Outcome {
    let cfg = ScanConfig {
        n: 2,
        count: 200,
        seed: 10,
        qmax: 8,
        tol: 1e-6,
        delta: 0.05,
        nodes: N,
        capacity_target: 1.0,
    };
    let period3 = match PeriodicJacobi::dso(vec![0.3, -0.2, 0.7]).and_then(|j| j.band_spectrum()) {
        Ok(s) => s.set,
        Err(e) => return fail(e.to_string()),
    };
    let run = || run_scan(&cfg, std::slice::from_ref(&period3));
    let (first, second) = match (run(), run()) {
        (Ok(a), Ok(b)) => (a, b),
        (a, b) => return fail(format!("{:?} {:?}", a.err(), b.err())),
    };
    let identical =
        serde_json::to_string(&first).unwrap() == serde_json::to_string(&second).unwrap();
    let injected = &first.records[0];
    let denom = injected.denominator;
    let cap_ok = first
        .records
        .iter()
        .all(|r| r.capacity.is_some_and(|c| (c - 1.0).abs() < 1e-5));
    let hits = first.summary.relation_hits;
    let ok = hits <= 1
        && denom == Some(3)
        && injected.relation.is_some()
        && common_denominator(&injected.omega, 8, 1e-6) == Some(3)
        && identical
        && cap_ok
        && first.summary.errors == 0;
    check(
        ok,
        format!(
            "relation hits {hits}/200 (<= 1); injected denominator {denom:?}; errors {}; capacities 1 +- 1e-5: {cap_ok}; bitwise rerun: {identical}",
            first.summary.errors
        ),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 quadrature oracle", c1_quadrature, Duration::from_secs(1)),
        (
            "2 critical polynomial",
            c2_critical_polynomial,
            Duration::from_secs(5),
        ),
        (
            "3 capacity bridge",
            c3_capacity_bridge,
            Duration::from_secs(30),
        ),
        ("4 scaling laws", c4_scaling, Duration::from_secs(10)),
        ("5 periodic type", c5_periodic_type, Duration::from_secs(20)),
        (
            "6 Toda consistency",
            c6_toda_consistency,
            Duration::from_secs(30),
        ),
        (
            "7 DSO flow leaves DSOs",
            c7_dso_leaves_dso_set,
            Duration::from_secs(1),
        ),
        (
            "8 stationarity loop",
            c8_stationarity_loop,
            Duration::from_secs(5),
        ),
        ("9 two-gap recursion", c9_recursion, Duration::from_secs(10)),
        ("10 genericity scan", c10_scan, Duration::from_secs(300)),
    ];
    let mut failures = 0;
    for (name, f, budget) in criteria {
        let start = Instant::now();
        let out = f();
        let took = start.elapsed();
        let ok = out.ok && took <= budget;
        if !ok {
            failures += 1;
        }
        println!(
            "[{}] {name}: {} [{:.2} s, budget {} s]",
            if ok { "PASS" } else { "FAIL" },
            out.detail,
            took.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("acceptance: {} passed, {failures} failed", 10 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}

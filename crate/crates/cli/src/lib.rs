//! Command-line explorer for finite-gap sets, periodic Jacobi operators and
//! Toda flows. Every subcommand prints JSON on stdout; `toda flow` and
//! `scan run` can also write CSV.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod csv;
mod input;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use fgs_core::equilibrium::{self, default_step, gap_residuals, rank};
use fgs_core::jacobi_periodic::Floquet;
use fgs_core::quadrature::DEFAULT_NODES;
use fgs_core::scan::{run_scan, ScanConfig};
use fgs_core::toda::{self, min_window, DEFAULT_WINDOW};
use fgs_core::{FiniteGapSet, PeriodicJacobi, RealPolynomial};
use serde_json::{json, Value};

use input::{
    parse_list, parse_poly, poly_from, read_json, JacobiInput, List, PolyChoice, SetInput,
};

/// Overrides the default quadrature node count.
pub const NODES_ENV: &str = "FGS_DEFAULT_NODES";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
}

impl From<fgs_core::Error> for CliError {
    fn from(e: fgs_core::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "fgs",
    version,
    about = "Finite-gap potential theory and Toda dynamics explorer"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Finite-gap sets
    #[command(subcommand)]
    Set(SetCmd),
    /// Equilibrium measure, capacity and frequencies
    #[command(subcommand)]
    Eq(EqCmd),
    /// Integer relations among frequencies
    #[command(subcommand)]
    Relation(RelationCmd),
    /// Periodic Jacobi operators
    #[command(subcommand)]
    Jacobi(JacobiCmd),
    /// Toda lattice and stationarity
    #[command(subcommand)]
    Toda(TodaCmd),
    /// Rational-dependence scan over random sets
    #[command(subcommand)]
    Scan(ScanCmd),
}

#[derive(Debug, Subcommand)]
enum SetCmd {
    Validate(SetInput),
}

#[derive(Debug, Clone, Args)]
struct Nodes {
    /// Quadrature nodes (default 256, or $FGS_DEFAULT_NODES)
    #[arg(long, value_name = "N")]
    nodes: Option<usize>,
}

impl Nodes {
    fn resolve(&self) -> Result<usize, CliError> {
        let n = match self.nodes {
            Some(n) => n,
            None => default_nodes()?,
        };
        if n == 0 {
            return Err(CliError::Usage("--nodes must be at least 1".into()));
        }
        Ok(n)
    }
}

fn default_nodes() -> Result<usize, CliError> {
    match std::env::var(NODES_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{NODES_ENV}={v} is not a positive integer"))),
        Err(_) => Ok(DEFAULT_NODES),
    }
}

#[derive(Debug, Subcommand)]
enum EqCmd {
    /// Monic critical polynomial and its gap residuals
    Critpoly {
        #[command(flatten)]
        set: SetInput,
        #[command(flatten)]
        nodes: Nodes,
    },
    /// Equilibrium density at band-interior points
    Density {
        #[command(flatten)]
        set: SetInput,
        #[arg(long, value_name = "LIST", allow_hyphen_values = true, value_parser = parse_list)]
        x: List,
        #[command(flatten)]
        nodes: Nodes,
    },
    /// Full equilibrium data including harmonic frequencies
    Freqs {
        #[command(flatten)]
        set: SetInput,
        #[command(flatten)]
        nodes: Nodes,
    },
    /// Logarithmic capacity (checked against doubled resolution)
    Capacity {
        #[command(flatten)]
        set: SetInput,
        #[command(flatten)]
        nodes: Nodes,
    },
    /// Finite-difference Jacobian of the frequencies in the edges
    Jacobian {
        #[command(flatten)]
        set: SetInput,
        /// Difference step (default 1e-5 times the smallest edge separation)
        #[arg(long)]
        h: Option<f64>,
        #[command(flatten)]
        nodes: Nodes,
    },
}

#[derive(Debug, Subcommand)]
enum RelationCmd {
    /// Smallest integer relation q . omega = k with max|q| <= qmax
    Find {
        /// Frequencies (otherwise computed from the set)
        #[arg(long, value_name = "LIST", value_parser = parse_list)]
        omega: Option<List>,
        #[command(flatten)]
        set: SetInput,
        #[arg(long, default_value_t = 8)]
        qmax: i64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[command(flatten)]
        nodes: Nodes,
    },
}

#[derive(Debug, Subcommand)]
enum JacobiCmd {
    /// Band edges (closed gaps fused) and discriminant
    Spectrum(JacobiInput),
    /// Periodic and antiperiodic eigenvalues
    Floquet(JacobiInput),
    /// The shifted operator
    Shift(JacobiInput),
}

#[derive(Debug, Subcommand)]
enum TodaCmd {
    /// Toda lattice vector field
    Rhs(JacobiInput),
    /// Integrate the Toda lattice
    Flow {
        #[command(flatten)]
        j: JacobiInput,
        #[arg(long = "t-end", default_value_t = 1.0)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        /// Keep every k-th step in the trajectory
        #[arg(long, default_value_t = 1)]
        every: usize,
        /// Trajectory CSV output
        #[arg(long, value_name = "FILE")]
        csv: Option<PathBuf>,
    },
    /// Interior size of the Lax commutator
    Defect {
        #[command(flatten)]
        j: JacobiInput,
        /// `auto` (stationary polynomial of the spectrum) or ascending coefficients
        #[arg(long, default_value = "auto", allow_hyphen_values = true, value_parser = parse_poly)]
        poly: PolyChoice,
        /// Window half-width (default max(100, 10 (deg+1) p))
        #[arg(long)]
        w: Option<usize>,
    },
    /// Stationary polynomial of a set or of the spectrum of an operator
    StationaryPoly(StationaryInput),
    /// Enumerate branches of the two-gap recursion
    Recursion {
        #[arg(long, allow_hyphen_values = true)]
        b0: f64,
        #[arg(long, allow_hyphen_values = true)]
        b1: f64,
        #[arg(long, allow_hyphen_values = true)]
        c: f64,
        #[arg(long, default_value_t = 20)]
        length: usize,
    },
}

#[derive(Debug, Clone, Args)]
struct StationaryInput {
    /// JSON file holding either a set or an operator
    #[arg(long = "in", value_name = "FILE", conflicts_with_all = ["edges", "a", "b", "dso"])]
    input: Option<PathBuf>,
    #[arg(long, value_name = "LIST", allow_hyphen_values = true, value_parser = parse_list,
          conflicts_with_all = ["a", "b", "dso"])]
    edges: Option<List>,
    #[arg(long, value_name = "LIST", allow_hyphen_values = true, value_parser = parse_list)]
    a: Option<List>,
    #[arg(long, value_name = "LIST", allow_hyphen_values = true, value_parser = parse_list)]
    b: Option<List>,
    #[arg(long, conflicts_with = "a")]
    dso: bool,
}

impl StationaryInput {
    fn load(&self) -> Result<FiniteGapSet, CliError> {
        if let Some(path) = &self.input {
            let v: Value = read_json(path)?;
            let domain = |e: serde_json::Error| CliError::Domain(format!("--in: {e}"));
            return if v.get("edges").is_some() {
                serde_json::from_value(v).map_err(domain)
            } else {
                let j: PeriodicJacobi = serde_json::from_value(v).map_err(domain)?;
                Ok(j.band_spectrum()?.set)
            };
        }
        if self.edges.is_some() {
            return SetInput {
                input: None,
                edges: self.edges.clone(),
            }
            .load();
        }
        let j = JacobiInput {
            input: None,
            a: self.a.clone(),
            b: self.b.clone(),
            dso: self.dso,
        }
        .load()
        .map_err(|e| match e {
            CliError::Usage(_) => {
                CliError::Usage("give --in, --edges, or an operator via --a/--b/--dso".into())
            }
            other => other,
        })?;
        Ok(j.band_spectrum()?.set)
    }
}

#[derive(Debug, Subcommand)]
enum ScanCmd {
    Run(ScanArgs),
}

#[derive(Debug, Args)]
struct ScanArgs {
    /// Gap count
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 200)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 8)]
    qmax: i64,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Minimal edge separation of sampled sets
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    #[arg(long = "capacity-target", default_value_t = 1.0)]
    capacity_target: f64,
    #[command(flatten)]
    nodes: Nodes,
    /// Extra edge vector analyzed before the samples (repeatable)
    #[arg(long, value_name = "LIST", allow_hyphen_values = true, value_parser = parse_list)]
    inject: Vec<List>,
    /// Potential of a DSO whose spectrum is analyzed before the samples (repeatable)
    #[arg(long = "inject-dso", value_name = "LIST", allow_hyphen_values = true, value_parser = parse_list)]
    inject_dso: Vec<List>,
    /// Only print the summary
    #[arg(long)]
    summary_only: bool,
    #[arg(long, value_name = "FILE")]
    csv: Option<PathBuf>,
}

/// Parses `argv` (including the program name), runs the command and returns
/// the exit code: 0 success, 1 domain error, 2 usage error.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    match dispatch(cli.cmd) {
        Ok(v) => {
            let text = serde_json::to_string_pretty(&v).expect("JSON values serialize");
            if writeln!(out, "{text}").is_err() {
                return 1;
            }
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("library types serialize")
}

fn dispatch(cmd: Command) -> Result<Value, CliError> {
    match cmd {
        Command::Set(SetCmd::Validate(set)) => {
            let e = set.load()?;
            Ok(json!({
                "valid": true,
                "edges": e.edges(),
                "gap_count": e.gap_count(),
                "bands": e.bands().map(|(l, h)| [l, h]).collect::<Vec<_>>(),
            }))
        }
        Command::Eq(cmd) => eq(cmd),
        Command::Relation(RelationCmd::Find {
            omega,
            set,
            qmax,
            tol,
            nodes,
        }) => {
            if qmax < 1 {
                return Err(CliError::Usage("--qmax must be at least 1".into()));
            }
            if !(tol > 0.0) {
                return Err(CliError::Usage("--tol must be positive".into()));
            }
            let omega = match (omega, set.given()) {
                (Some(_), true) => {
                    return Err(CliError::Usage(
                        "--omega conflicts with --in/--edges".into(),
                    ))
                }
                (Some(List(w)), false) => w,
                (None, _) => equilibrium::frequencies(&set.load()?, nodes.resolve()?)?.omega,
            };
            Ok(json!({
                "omega": omega,
                "relation": equilibrium::find_integer_relation(&omega, qmax, tol),
                "min_residual": equilibrium::min_relation_residual(&omega, qmax),
                "denominator": equilibrium::common_denominator(&omega, qmax as u64, tol),
            }))
        }
        Command::Jacobi(cmd) => jacobi(cmd),
        Command::Toda(cmd) => toda_cmd(cmd),
        Command::Scan(ScanCmd::Run(args)) => scan(args),
    }
}

fn eq(cmd: EqCmd) -> Result<Value, CliError> {
    match cmd {
        EqCmd::Critpoly { set, nodes } => {
            let (e, n) = (set.load()?, nodes.resolve()?);
            let p = equilibrium::critical_polynomial(&e, n)?;
            let residuals = gap_residuals(&e, &p, n)?;
            Ok(json!({
                "edges": e.edges(),
                "p_crit": p.coeffs(),
                "display": p.to_string(),
                "residuals": residuals,
                "nodes": n,
            }))
        }
        EqCmd::Density { set, x, nodes } => {
            let data = equilibrium::frequencies(&set.load()?, nodes.resolve()?)?;
            let density =
                x.0.iter()
                    .map(|&x| data.density_at(x))
                    .collect::<Result<Vec<_>, _>>()?;
            Ok(json!({ "x": x.0, "density": density }))
        }
        EqCmd::Freqs { set, nodes } => Ok(to_value(&equilibrium::frequencies(
            &set.load()?,
            nodes.resolve()?,
        )?)),
        EqCmd::Capacity { set, nodes } => {
            let n = nodes.resolve()?;
            let cap = equilibrium::capacity(&set.load()?, n)?;
            Ok(json!({ "capacity": cap, "nodes": n, "nodes_check": 2 * n }))
        }
        EqCmd::Jacobian { set, h, nodes } => {
            let (e, n) = (set.load()?, nodes.resolve()?);
            let h = h.unwrap_or_else(|| default_step(&e));
            if !(h > 0.0) {
                return Err(CliError::Usage("--h must be positive".into()));
            }
            let jac = equilibrium::omega_jacobian(&e, h, n)?;
            let rows: Vec<Vec<f64>> = jac
                .row_iter()
                .map(|r| r.iter().copied().collect())
                .collect();
            Ok(json!({
                "h": h,
                "rank": rank(&jac),
                "submersion_defect": equilibrium::submersion_defect(&e, h, n)?,
                "jacobian": rows,
            }))
        }
    }
}

fn jacobi(cmd: JacobiCmd) -> Result<Value, CliError> {
    match cmd {
        JacobiCmd::Spectrum(input) => {
            let j = input.load()?;
            let spectrum = j.band_spectrum()?;
            Ok(json!({
                "edges": spectrum.set.edges(),
                "closed_gaps": spectrum.closed_gaps,
                "discriminant": j.discriminant().coeffs(),
            }))
        }
        JacobiCmd::Floquet(input) => {
            let j = input.load()?;
            Ok(json!({
                "periodic": j.floquet_eigenvalues(Floquet::Periodic),
                "antiperiodic": j.floquet_eigenvalues(Floquet::Antiperiodic),
            }))
        }
        JacobiCmd::Shift(input) => Ok(to_value(&input.load()?.shift())),
    }
}

fn toda_cmd(cmd: TodaCmd) -> Result<Value, CliError> {
    match cmd {
        TodaCmd::Rhs(input) => {
            let (da, db) = toda::toda_rhs(&input.load()?);
            Ok(json!({ "da": da, "db": db }))
        }
        TodaCmd::Flow {
            j,
            t_end,
            dt,
            every,
            csv: csv_path,
        } => {
            let j0 = j.load()?;
            if every == 0 {
                return Err(CliError::Usage("--every must be at least 1".into()));
            }
            let traj = toda::flow_trajectory(&j0, t_end, dt, every)?;
            let last = traj.last().expect("trajectory holds the initial state");
            let j_end = PeriodicJacobi::new(last.a.clone(), last.b.clone())?;
            if let Some(path) = csv_path {
                csv::write_flow(&path, j0.period(), &traj)?;
            }
            Ok(json!({
                "t_end": t_end,
                "dt": dt,
                "samples": traj.len(),
                "final": to_value(&j_end),
                "max_floquet_defect": traj.iter().map(|s| s.floquet_defect).fold(0.0, f64::max),
                "geometric_mean_a": [j0.geometric_mean_a(), j_end.geometric_mean_a()],
            }))
        }
        TodaCmd::Defect { j, poly, w } => {
            let j = j.load()?;
            let p: RealPolynomial = match &poly {
                PolyChoice::Auto => toda::stationary_polynomial(&j.band_spectrum()?.set).into(),
                coeffs => poly_from(coeffs)?,
            };
            let w = w.unwrap_or_else(|| DEFAULT_WINDOW.max(min_window(&j, p.degree())));
            let defect = toda::stationarity_defect(&j, &p, w)?;
            Ok(json!({
                "defect": defect,
                "W": w,
                "degP": p.degree(),
                "poly": p.coeffs(),
            }))
        }
        TodaCmd::StationaryPoly(input) => {
            let e = input.load()?;
            let p = toda::stationary_polynomial(&e);
            Ok(json!({
                "edges": e.edges(),
                "poly": p.poly().coeffs(),
                "display": p.poly().to_string(),
                "degree": p.degree(),
            }))
        }
        TodaCmd::Recursion { b0, b1, c, length } => {
            if length < 3 {
                return Err(CliError::Usage("--length must be at least 3".into()));
            }
            if length > 30 {
                return Err(CliError::Usage(
                    "--length above 30 is not enumerable".into(),
                ));
            }
            let report = toda::two_gap_recursion(b0, b1, c, length);
            let mut v = to_value(&report);
            v["closed_over_seeds"] = json!(report.closed_over_seeds());
            Ok(v)
        }
    }
}

fn scan(args: ScanArgs) -> Result<Value, CliError> {
    let cfg = ScanConfig {
        n: args.n,
        count: args.count,
        seed: args.seed,
        qmax: args.qmax,
        tol: args.tol,
        delta: args.delta,
        nodes: args.nodes.resolve()?,
        capacity_target: args.capacity_target,
    };
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let mut injected = Vec::new();
    for List(e) in &args.inject {
        injected.push(FiniteGapSet::new(e.clone())?);
    }
    for List(v) in &args.inject_dso {
        injected.push(PeriodicJacobi::dso(v.clone())?.band_spectrum()?.set);
    }
    let report = run_scan(&cfg, &injected)?;
    if let Some(path) = &args.csv {
        csv::write_scan(path, &report.records)?;
    }
    if args.summary_only {
        Ok(json!({ "config": report.config, "summary": report.summary }))
    } else {
        Ok(to_value(&report))
    }
}

//! Flat CSV hand-off files. The first line is a comment naming the format
//! and its version; list-valued scan fields are joined with `;`.

use std::io::Write;
use std::path::Path;

use fgs_core::scan::ScanRecord;
use fgs_core::toda::FlowSample;

use crate::CliError;

pub const FLOW_HEADER: &str = "# fgs toda-flow csv v1";
pub const SCAN_HEADER: &str = "# fgs scan csv v1";

const SCAN_COLUMNS: [&str; 12] = [
    "index",
    "injected",
    "edges",
    "omega",
    "capacity",
    "relation_q",
    "relation_k",
    "relation_residual",
    "min_residual",
    "denominator",
    "jacobian_rank",
    "error",
];

fn num(x: f64) -> String {
    format!("{x:?}")
}

fn joined<T, F: Fn(&T) -> String>(xs: &[T], f: F) -> String {
    xs.iter().map(f).collect::<Vec<_>>().join(";")
}

fn render<F>(header: &str, fill: F) -> Vec<u8>
where
    F: FnOnce(&mut csv::Writer<&mut Vec<u8>>) -> csv::Result<()>,
{
    let mut buf = Vec::new();
    writeln!(buf, "{header}").expect("writing to memory");
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        fill(&mut w).expect("writing to memory");
        w.flush().expect("writing to memory");
    }
    buf
}

fn save(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes)
        .map_err(|e| CliError::Usage(format!("--csv {}: {e}", path.display())))
}

pub fn flow_csv(period: usize, samples: &[FlowSample]) -> Vec<u8> {
    render(FLOW_HEADER, |w| {
        let mut cols = vec!["t".to_string()];
        cols.extend((1..=period).map(|i| format!("a_{i}")));
        cols.extend((1..=period).map(|i| format!("b_{i}")));
        cols.push("floquet_defect".into());
        w.write_record(&cols)?;
        for r in samples {
            let row = std::iter::once(r.t)
                .chain(r.a.iter().copied())
                .chain(r.b.iter().copied())
                .chain(std::iter::once(r.floquet_defect))
                .map(num);
            w.write_record(row)?;
        }
        Ok(())
    })
}

pub fn write_flow(path: &Path, period: usize, samples: &[FlowSample]) -> Result<(), CliError> {
    save(path, &flow_csv(period, samples))
}

pub fn scan_csv(records: &[ScanRecord]) -> Vec<u8> {
    render(SCAN_HEADER, |w| {
        w.write_record(SCAN_COLUMNS)?;
        for r in records {
            let rel = r.relation.as_ref();
            w.write_record([
                r.index.to_string(),
                r.injected.to_string(),
                joined(&r.edges, |x| num(*x)),
                joined(&r.omega, |x| num(*x)),
                r.capacity.map(num).unwrap_or_default(),
                rel.map(|q| joined(&q.q, |x| x.to_string()))
                    .unwrap_or_default(),
                rel.map(|q| q.k.to_string()).unwrap_or_default(),
                rel.map(|q| num(q.residual)).unwrap_or_default(),
                r.min_residual.map(num).unwrap_or_default(),
                r.denominator.map(|d| d.to_string()).unwrap_or_default(),
                r.jacobian_rank.map(|k| k.to_string()).unwrap_or_default(),
                r.error.clone().unwrap_or_default(),
            ])?;
        }
        Ok(())
    })
}

pub fn write_scan(path: &Path, records: &[ScanRecord]) -> Result<(), CliError> {
    save(path, &scan_csv(records))
}

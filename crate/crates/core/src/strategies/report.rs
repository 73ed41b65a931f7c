//! Per-stage run reports and benchmark rows, serialized as CSV.

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportRow {
    pub level: usize,
    pub stage_tag: String,
    pub part_count: usize,
    pub system_size: usize,
    pub fallback_count: usize,
    pub residual_edges: usize,
    pub elapsed_ms: u64,
}

#[derive(Serialize)]
struct CsvReportRow<'a> {
    level: usize,
    stage_tag: &'a str,
    part_count: usize,
    system_size: usize,
    fallback_count: usize,
    residual_edges: usize,
    elapsed_ms: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunReport {
    pub rows: Vec<ReportRow>,
    /// Verdict of the final verification.
    pub verified: bool,
}

impl RunReport {
    pub fn push(&mut self, row: ReportRow) {
        self.rows.push(row);
    }

    /// Total fallback edges over all stage rows.
    pub fn fallback_total(&self) -> usize {
        self.rows.iter().filter(|r| r.stage_tag != "total").map(|r| r.fallback_count).sum()
    }

    /// CSV with a header row; `elapsed_ms` is left empty unless `timings` is set so
    /// that reruns are byte-identical.
    pub fn to_csv(&self, timings: bool) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(CsvReportRow {
                level: r.level,
                stage_tag: &r.stage_tag,
                part_count: r.part_count,
                system_size: r.system_size,
                fallback_count: r.fallback_count,
                residual_edges: r.residual_edges,
                elapsed_ms: timings.then_some(r.elapsed_ms),
            })
            .expect("in-memory write");
        }
        if self.rows.is_empty() {
            return "level,stage_tag,part_count,system_size,fallback_count,residual_edges,elapsed_ms\n".into();
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }
}

/// One benchmark instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub family: String,
    pub n: usize,
    pub e: usize,
    pub seed: u64,
    pub pipeline_size: usize,
    pub baseline_size: usize,
    pub singleton_size: usize,
    pub fallback_fraction: f64,
    pub runtime_ms: Option<u64>,
    pub size_over_n: f64,
    pub size_over_n_logstar: f64,
}

impl BenchRow {
    pub fn to_csv(rows: &[BenchRow]) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in rows {
            w.serialize(r).expect("in-memory write");
        }
        if rows.is_empty() {
            return "family,n,e,seed,pipeline_size,baseline_size,singleton_size,fallback_fraction,runtime_ms,size_over_n,size_over_n_logstar\n".into();
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }
}

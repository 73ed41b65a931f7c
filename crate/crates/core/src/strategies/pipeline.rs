//! Level-by-level composition of the stages.

use std::time::Instant;

use rayon::prelude::*;

use crate::graph::{EdgeSet, Graph};
use crate::rng::derive_seed;
use crate::separation::{compose_disjoint, singleton_baseline, verify_separation, PathSystem};
use crate::strategies::dense::reduce_large_deg;
use crate::strategies::report::{ReportRow, RunReport};
use crate::strategies::sparse::reduce_small_deg;
use crate::strategies::{debug_verify, iterated_log, PipelineConfig, RunTrace, StageResult};

fn row(level: usize, r: &StageResult, started: Instant) -> ReportRow {
    ReportRow {
        level,
        stage_tag: r.stage_tag.clone(),
        part_count: r.part_count,
        system_size: r.system.len(),
        fallback_count: r.fallback_count,
        residual_edges: r.residual.edge_count(),
        elapsed_ms: started.elapsed().as_millis() as u64,
    }
}

/// Small-degree reduction, then the large-degree reduction on every small part.
pub fn one_step(g: &Graph, cfg: &PipelineConfig, seed: u64) -> StageResult {
    one_step_logged(g, cfg, seed, 0, &mut Vec::new())
}

fn one_step_logged(g: &Graph, cfg: &PipelineConfig, seed: u64, level: usize, rows: &mut Vec<ReportRow>) -> StageResult {
    if g.edge_count() == 0 || g.average_degree() < cfg.degree_floor {
        return StageResult::identity(g, "one_step");
    }
    let started = Instant::now();
    let (small, parts) = reduce_small_deg(g, cfg, derive_seed(seed, &[0]));
    rows.push(row(level, &small, started));

    let started = Instant::now();
    let large: Vec<StageResult> = parts
        .par_iter()
        .enumerate()
        .map(|(i, part)| reduce_large_deg(part, cfg, derive_seed(seed, &[1, i as u64])))
        .collect();
    let mut residual: EdgeSet = small.residual.edge_set();
    let mut fallback_count = small.fallback_count;
    let mut trace = small.trace;
    let mut systems = vec![small.system];
    let mut large_parts = 0;
    let mut large_fallback = 0;
    let mut large_size = 0;
    for r in large {
        large_parts += r.part_count;
        large_fallback += r.fallback_count;
        large_size += r.system.len();
        residual.extend(r.residual.edges().iter().copied());
        trace.extend(r.trace);
        systems.push(r.system);
    }
    fallback_count += large_fallback;
    let out = StageResult {
        system: compose_disjoint(g, systems),
        residual: g.with_edges(residual),
        fallback_count,
        stage_tag: "one_step".into(),
        part_count: parts.len(),
        trace,
    };
    rows.push(ReportRow {
        level,
        stage_tag: "large_deg".into(),
        part_count: large_parts,
        system_size: large_size,
        fallback_count: large_fallback,
        residual_edges: out.residual.edge_count(),
        elapsed_ms: started.elapsed().as_millis() as u64,
    });
    debug_verify(g, &out);
    if let Err(msg) = out.check_accounting(g) {
        panic!("accounting broken: {msg}");
    }
    out
}

/// Two consecutive one-step reductions.
pub fn two_steps(g: &Graph, cfg: &PipelineConfig, seed: u64) -> StageResult {
    two_steps_logged(g, cfg, seed, 0, &mut Vec::new())
}

fn two_steps_logged(g: &Graph, cfg: &PipelineConfig, seed: u64, level: usize, rows: &mut Vec<ReportRow>) -> StageResult {
    let first = one_step_logged(g, cfg, derive_seed(seed, &[0]), level, rows);
    let second = one_step_logged(&first.residual, cfg, derive_seed(seed, &[1]), level, rows);
    let mut trace = first.trace;
    trace.extend(second.trace);
    let out = StageResult {
        system: compose_disjoint(g, vec![first.system, second.system]),
        residual: second.residual,
        fallback_count: first.fallback_count + second.fallback_count,
        stage_tag: "two_steps".into(),
        part_count: first.part_count + second.part_count,
        trace,
    };
    debug_verify(g, &out);
    out
}

/// Separate all of E(G); see [`separate_all_traced`].
pub fn separate_all(g: &Graph, cfg: &PipelineConfig, seed: u64) -> (PathSystem, RunReport) {
    let (system, report, _) = separate_all_traced(g, cfg, seed);
    (system, report)
}

/// Run paired one-step reductions on successive residuals while the average degree
/// stays at or above the floor (at most log* n + extra levels), then separate the
/// last residual with single edges. The result is capped by the singleton system
/// and verified; the verdict is recorded in the report.
pub fn separate_all_traced(g: &Graph, cfg: &PipelineConfig, seed: u64) -> (PathSystem, RunReport, RunTrace) {
    let mut report = RunReport::default();
    let mut trace = RunTrace::default();
    let max_levels = iterated_log(g.order().max(1) as u64) + cfg.extra_levels;
    let mut cur = g.clone();
    let mut systems = Vec::new();
    let mut level = 0;
    while cur.edge_count() > 0 && cur.average_degree() >= cfg.degree_floor && level < max_levels as usize {
        let started = Instant::now();
        let step = two_steps_logged(&cur, cfg, derive_seed(seed, &[level as u64]), level, &mut report.rows);
        report.push(ReportRow { stage_tag: "level".into(), ..row(level, &step, started) });
        let progress = step.residual.edge_count() < cur.edge_count();
        trace.extend(step.trace);
        systems.push(step.system);
        cur = step.residual;
        level += 1;
        if !progress {
            break;
        }
    }
    let started = Instant::now();
    let last = singleton_baseline(&cur);
    report.push(ReportRow {
        level,
        stage_tag: "singleton".into(),
        part_count: usize::from(cur.edge_count() > 0),
        system_size: last.len(),
        fallback_count: 0,
        residual_edges: 0,
        elapsed_ms: started.elapsed().as_millis() as u64,
    });
    systems.push(last);
    let mut system = compose_disjoint(g, systems);
    if system.len() > g.edge_count() {
        log::info!("pipeline size {} exceeds e(G) = {}; using single edges", system.len(), g.edge_count());
        system = singleton_baseline(g);
    }
    let verdict = verify_separation(g, &system);
    report.verified = matches!(&verdict, Ok(r) if r.ok);
    if !report.verified {
        log::error!("final system fails verification: {verdict:?}");
    }
    report.push(ReportRow {
        level,
        stage_tag: "total".into(),
        part_count: level,
        system_size: system.len(),
        fallback_count: report.fallback_total(),
        residual_edges: 0,
        elapsed_ms: 0,
    });
    (system, report, trace)
}

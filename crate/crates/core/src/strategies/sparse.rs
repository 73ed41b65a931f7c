//! Sparse route: high-degree vertices, sparse expanders, and the small-degree reduction.

use rayon::prelude::*;

use crate::connector::{complete_to_path, Completion, CompletionLimits, CompletionProblem};
use crate::decomp::{decompose_into_bounded_paths, PathDecomposition};
use crate::expander::expander_decompose;
use crate::graph::{Edge, EdgeSet, Graph, Path, PathForest, VertexSet};
use crate::rng::derive_seed;
use crate::separation::{compose_disjoint, Mode, PathSystem};
use crate::strategies::matchings::{build_matchings_spread, build_short_path_unions};
use crate::strategies::{debug_verify, PipelineConfig, RunTrace, SpreadRecord, StageResult, UnionRecord};

/// Complete `core` into one path avoiding `forbidden_edges` and `forbidden_vertices`;
/// on failure return the stuck forest's components. The flag reports a failure.
fn complete_or_split(host: &Graph, core: PathForest, forbidden_edges: EdgeSet, forbidden_vertices: VertexSet) -> (Vec<Path>, bool) {
    if core.len() == 1 {
        return (core.into_paths(), false);
    }
    let prob = CompletionProblem { host, core, forbidden_edges, forbidden_vertices, limits: CompletionLimits::default() };
    match complete_to_path(&prob).expect("core lies in the host") {
        Completion::Complete { path, .. } => (vec![path], false),
        Completion::Stuck { forest, .. } => (forest.into_paths(), true),
    }
}

fn bound(d: f64) -> usize {
    (d.floor() as usize).max(1)
}

/// Separate every edge touching L₁, the vertices of degree at least the
/// high-degree threshold; the residual is G − L₁.
///
/// Edges of G[L₁] ∪ G[L₁, L₂] lie on a bounded path decomposition and on completed
/// groups of short paths; the remaining edges at L₁ are single-edge paths.
pub fn separate_high_degree(g: &Graph, d: f64, cfg: &PipelineConfig) -> StageResult {
    let n = g.order();
    let threshold = cfg.high_degree_threshold(d, n);
    let l1: VertexSet = g.live_vertices().filter(|&v| g.degree(v) as f64 >= threshold).collect();
    if l1.is_empty() {
        return StageResult::identity(g, "high_degree");
    }
    let l2: VertexSet = g.live_vertices().filter(|v| !l1.contains(v) && g.degree_into(*v, &l1) >= 4).collect();
    let h1 = g.with_edges(g.edges().iter().copied().filter(|e| {
        let (a, b) = (l1.contains(&e.0), l1.contains(&e.1));
        (a && b) || (a && l2.contains(&e.1)) || (b && l2.contains(&e.0))
    }));
    let dd = bound(d);
    let decomp = decompose_into_bounded_paths(&h1, dd);
    let cap_base = (n as f64).max(g.edge_count() as f64 / d.max(1.0));
    let cap = (cfg.cap_unions * cap_base).ceil() as usize;
    let unions = build_short_path_unions(&h1, &decomp, &l1, &l2, dd, cap).expect("sets satisfy the preconditions");

    let completed: Vec<(Vec<Path>, usize)> = unions
        .groups
        .par_iter()
        .map(|group| {
            let own: EdgeSet = group.iter().flat_map(|p| p.edges()).collect();
            let own_vertices: VertexSet = group.iter().flat_map(|p| p.vertices().iter().copied()).collect();
            let mut forbidden_edges = EdgeSet::new();
            let mut forbidden_vertices = VertexSet::new();
            for &e in &own {
                let p = &decomp.paths()[decomp.path_of(e).expect("decomposed")];
                forbidden_edges.extend(p.edges().filter(|f| !own.contains(f)));
                forbidden_vertices.extend(p.vertices().iter().filter(|v| !own_vertices.contains(v)));
            }
            let core = PathForest::new(group.clone()).expect("groups are vertex-disjoint");
            let (paths, failed) = complete_or_split(g, core, forbidden_edges, forbidden_vertices);
            (paths, if failed { own.len() } else { 0 })
        })
        .collect();

    let mut paths: Vec<Path> = decomp.paths().to_vec();
    let mut fallback_count = 0;
    for (ps, fb) in completed {
        paths.extend(ps);
        fallback_count += fb;
    }
    paths.extend(unions.leftover.iter().cloned());
    let h2: Vec<Edge> = g
        .edges()
        .iter()
        .copied()
        .filter(|e| (l1.contains(&e.0) || l1.contains(&e.1)) && !h1.contains_edge(*e))
        .collect();
    paths.extend(h2.iter().map(|&e| Path::single_edge(e)));
    let target: EdgeSet = g.edges().iter().copied().filter(|e| l1.contains(&e.0) || l1.contains(&e.1)).collect();
    let mut system = PathSystem::new(paths, target, Mode::Strong);
    system.dedup();
    let trace = RunTrace {
        unions: vec![UnionRecord { decomposition: decomp.into_paths(), groups: unions.groups, d: dd }],
        ..RunTrace::default()
    };
    let out = StageResult {
        system,
        residual: g.remove(&l1, &EdgeSet::new()),
        fallback_count,
        stage_tag: "high_degree".into(),
        part_count: 1,
        trace,
    };
    debug_verify(g, &out);
    out
}

/// Bounded path decomposition plus one completed path per spread matching.
pub fn separate_sparse_expander(j: &Graph, d: f64, cfg: &PipelineConfig) -> StageResult {
    if j.edge_count() == 0 {
        return StageResult { residual: j.clone(), ..StageResult::identity(j, "sparse_expander") };
    }
    let dd = bound(d);
    let r0 = cfg.r0(d);
    let decomp = decompose_into_bounded_paths(j, dd);
    let cap_base = (j.order() as f64).max(j.edge_count() as f64 / d.max(1.0));
    let cap = (cfg.cap_spread * cap_base).ceil() as usize;
    let family = build_matchings_spread(j, &decomp, dd, r0, cap).expect("paths are bounded by d");
    let completed: Vec<(Vec<Path>, usize)> = family
        .matchings
        .par_iter()
        .map(|m| {
            let own: EdgeSet = m.iter().copied().collect();
            let forbidden_edges = own_path_edges(&decomp, m).into_iter().filter(|e| !own.contains(e)).collect();
            let core = PathForest::from_matching(m).expect("matching");
            let (paths, failed) = complete_or_split(j, core, forbidden_edges, VertexSet::new());
            (paths, if failed { m.len() } else { 0 })
        })
        .collect();
    let mut paths: Vec<Path> = decomp.paths().to_vec();
    let mut fallback_count = family.uncovered.len();
    for (ps, fb) in completed {
        paths.extend(ps);
        fallback_count += fb;
    }
    paths.extend(family.uncovered.iter().map(|&e| Path::single_edge(e)));
    let mut system = PathSystem::new(paths, j.edge_set(), Mode::Strong);
    system.dedup();
    let trace = RunTrace {
        spreads: vec![SpreadRecord {
            host: j.clone(),
            decomposition: decomp.into_paths(),
            matchings: family.matchings,
            r0,
            d: dd,
        }],
        ..RunTrace::default()
    };
    let out = StageResult {
        system,
        residual: j.with_edges([]),
        fallback_count,
        stage_tag: "sparse_expander".into(),
        part_count: 1,
        trace,
    };
    debug_verify(j, &out);
    out
}

fn own_path_edges(decomp: &PathDecomposition, m: &[Edge]) -> EdgeSet {
    m.iter().flat_map(|&e| decomp.paths()[decomp.path_of(e).expect("decomposed")].edges()).collect()
}

/// Small-degree reduction: components, high-degree removal, then a sparse
/// expander decomposition with t = d. Large sub-parts are separated as sparse
/// expanders; the rest are returned for the dense route, and uncovered edges form
/// the residual.
pub fn reduce_small_deg(g: &Graph, cfg: &PipelineConfig, seed: u64) -> (StageResult, Vec<Graph>) {
    let d = g.average_degree();
    if g.edge_count() == 0 || d < cfg.degree_floor {
        return (StageResult::identity(g, "small_deg"), Vec::new());
    }
    let n = g.order();
    let components = match expander_decompose(g, &cfg.plain_params(), &cfg.budget(seed)) {
        Ok(dec) => dec.parts,
        Err(_) => vec![g.clone()],
    };
    let size_threshold = cfg.sparse_part_threshold(d);
    let per_part: Vec<(Vec<StageResult>, Vec<Graph>, EdgeSet)> = components
        .par_iter()
        .enumerate()
        .map(|(i, part)| {
            let part_seed = derive_seed(seed, &[i as u64]);
            let high = separate_high_degree(part, d, cfg);
            let rest = &high.residual;
            let (subs, uncovered) =
                match expander_decompose(rest, &cfg.sparse_params(d, n), &cfg.budget(part_seed)) {
                    Ok(dec) => (dec.parts, dec.uncovered),
                    Err(_) => (vec![rest.clone()], EdgeSet::new()),
                };
            let mut stages = vec![high];
            let mut small = Vec::new();
            for sub in subs {
                if sub.order() as f64 >= size_threshold {
                    stages.push(separate_sparse_expander(&sub, d, cfg));
                } else {
                    small.push(sub);
                }
            }
            (stages, small, uncovered)
        })
        .collect();

    let mut systems = Vec::new();
    let mut small_parts = Vec::new();
    let mut residual = EdgeSet::new();
    let mut fallback_count = 0;
    let mut trace = RunTrace::default();
    for (stages, small, uncovered) in per_part {
        for s in stages {
            fallback_count += s.fallback_count;
            trace.extend(s.trace);
            systems.push(s.system);
        }
        small_parts.extend(small);
        residual.extend(uncovered);
    }
    let out = StageResult {
        system: compose_disjoint(g, systems),
        residual: g.with_edges(residual),
        fallback_count,
        stage_tag: "small_deg".into(),
        part_count: components.len(),
        trace,
    };
    debug_verify(g, &out);
    if cfg.asymptotic_mode {
        let bound = d.log2().powi(3);
        let got = out.residual.average_degree();
        assert!(got <= bound, "residual average degree {got} exceeds {bound}");
    }
    (out, small_parts)
}

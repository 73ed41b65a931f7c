//! Dense route: random vertex subsets, dense expanders, and the large-degree reduction.

use rand::Rng as _;
use rayon::prelude::*;

use crate::connector::{
    complete_to_path, connect_pairs_through, extend_matching_through_hubs, Completion, CompletionLimits,
    CompletionProblem, ConnectionRequest,
};
use crate::decomp::{decompose_into_paths, PathDecomposition};
use crate::expander::expander_decompose;
use crate::graph::{Edge, EdgeSet, Graph, Path, PathForest, VertexSet};
use crate::rng::{derive_seed, rng_from};
use crate::separation::{compose_disjoint, singleton_baseline, Mode, PathSystem};
use crate::strategies::matchings::build_matchings_degree;
use crate::strategies::{debug_verify, DegreeRecord, PipelineConfig, RunTrace, StageResult};

/// Separate E(H − V) with a path decomposition of H − V plus one path per matching,
/// each path containing its matching and no other edge of H − V. Connections run
/// through V: half of it serves as hubs, the other half as connectors.
pub fn separate_outside(h: &Graph, v: &VertexSet, cfg: &PipelineConfig, seed: u64) -> StageResult {
    let inner = h.remove(v, &EdgeSet::new());
    let target = inner.edge_set();
    let decomp = decompose_into_paths(&inner);
    if inner.edge_count() == 0 {
        return StageResult {
            system: PathSystem::new(Vec::new(), target, Mode::Strong),
            residual: h.with_edges([]),
            fallback_count: 0,
            stage_tag: "outside".into(),
            part_count: 0,
            trace: RunTrace::default(),
        };
    }
    let cap = (cfg.cap_degree * h.order() as f64).ceil() as usize;
    let family = build_matchings_degree(&inner, &decomp, h, cfg.bucket_divisor, cap).expect("decomposition is exact");

    let mut rng = rng_from(derive_seed(seed, &[0]));
    let (mut hubs, mut through) = (VertexSet::new(), VertexSet::new());
    for &x in v {
        if h.is_live(x) {
            if rng.gen_bool(0.5) {
                hubs.insert(x);
            } else {
                through.insert(x);
            }
        }
    }
    let link_host = h.remove(&VertexSet::new(), &target);
    let env = Env { h, link_host: &link_host, inner: &inner, v, hubs: &hubs, through: &through, cfg };
    let closed: Vec<(Vec<Path>, usize)> = family
        .matchings
        .par_iter()
        .enumerate()
        .map(|(i, m)| env.close_matching(m, derive_seed(seed, &[1, i as u64])))
        .collect();

    let mut paths: Vec<Path> = decomp.paths().to_vec();
    let mut fallback_count = family.uncovered.len();
    for (ps, fb) in closed {
        paths.extend(ps);
        fallback_count += fb;
    }
    paths.extend(family.uncovered.iter().map(|&e| Path::single_edge(e)));
    let mut system = PathSystem::new(paths, target, Mode::Strong);
    system.dedup();
    let trace = RunTrace {
        degree_matchings: vec![DegreeRecord {
            host: h.clone(),
            decomposition: decomp.into_paths(),
            matchings: family.matchings,
            divisor: cfg.bucket_divisor,
        }],
        ..RunTrace::default()
    };
    let out = StageResult {
        system,
        residual: h.with_edges([]),
        fallback_count,
        stage_tag: "outside".into(),
        part_count: 1,
        trace,
    };
    debug_verify(h, &out);
    out
}

struct Env<'a> {
    h: &'a Graph,
    /// H without the edges of H − V.
    link_host: &'a Graph,
    inner: &'a Graph,
    v: &'a VertexSet,
    hubs: &'a VertexSet,
    through: &'a VertexSet,
    cfg: &'a PipelineConfig,
}

impl Env<'_> {
    /// Paths whose union contains exactly the edges of `m` from H − V, and the number
    /// of matching edges that needed the split fallback.
    fn close_matching(&self, m: &[Edge], seed: u64) -> (Vec<Path>, usize) {
        let forest = extend_matching_through_hubs(self.h, m, self.hubs);
        if forest.len() == 1 {
            return (forest.into_paths(), 0);
        }
        if let Some(p) = self.chain(&forest, seed) {
            return (vec![p], 0);
        }
        let core_vertices = forest.vertices();
        let forbidden_vertices = self
            .h
            .live_vertices()
            .filter(|x| !self.v.contains(x) && !core_vertices.contains(x))
            .collect();
        let mine: EdgeSet = m.iter().copied().collect();
        let forbidden_edges = self.inner.edges().iter().copied().filter(|e| !mine.contains(e)).collect();
        let prob = CompletionProblem {
            host: self.h,
            core: forest,
            forbidden_edges,
            forbidden_vertices,
            limits: CompletionLimits::default(),
        };
        match complete_to_path(&prob).expect("core lies in the host") {
            Completion::Complete { path, .. } => (vec![path], 0),
            Completion::Stuck { forest, .. } => (forest.into_paths(), m.len()),
        }
    }

    /// Join consecutive components through the connector vertices.
    fn chain(&self, forest: &PathForest, seed: u64) -> Option<Path> {
        let comps = forest.paths();
        let pairs = comps.windows(2).map(|w| (w[0].last(), w[1].first())).collect();
        let mut req = ConnectionRequest::new(self.link_host, self.through.clone(), pairs, seed);
        req.max_len = self.cfg.max_len;
        req.retries = self.cfg.retries;
        let links = connect_pairs_through(&req).ok()?;
        let mut vs = comps[0].vertices().to_vec();
        for (link, comp) in links.iter().zip(&comps[1..]) {
            vs.extend_from_slice(&link.vertices()[1..link.len()]);
            vs.extend_from_slice(comp.vertices());
        }
        Some(Path::new(vs).expect("links avoid the forest and each other"))
    }
}

/// Sample V with probability 1/3 per vertex and separate E(G − V) through V.
pub fn separate_random_subset(g: &Graph, cfg: &PipelineConfig, seed: u64) -> (VertexSet, StageResult) {
    let mut rng = rng_from(derive_seed(seed, &[0]));
    let v: VertexSet = g.live_vertices().filter(|_| rng.gen_bool(1.0 / 3.0)).collect();
    let mut out = separate_outside(g, &v, cfg, derive_seed(seed, &[1]));
    out.stage_tag = "random_subset".into();
    (v, out)
}

/// Random tripartition {V₁, V₂, V₃}; separate E(H − V_i) through V_i for each i.
///
/// Every edge lies outside some V_i. For e outside V_i and f inside, the
/// decomposition path of e from that run avoids f.
pub fn separate_dense_expander(h: &Graph, cfg: &PipelineConfig, seed: u64) -> StageResult {
    if h.order() <= 2 {
        let mut out = StageResult::identity(h, "dense_expander");
        out.system = singleton_baseline(h);
        out.fallback_count = h.edge_count();
        out.residual = h.with_edges([]);
        out.part_count = 1;
        return out;
    }
    let mut rng = rng_from(derive_seed(seed, &[0]));
    let mut parts = [VertexSet::new(), VertexSet::new(), VertexSet::new()];
    for x in h.live_vertices() {
        parts[rng.gen_range(0..3)].insert(x);
    }
    let runs: Vec<StageResult> = parts
        .par_iter()
        .enumerate()
        .map(|(i, v)| separate_outside(h, v, cfg, derive_seed(seed, &[1, i as u64])))
        .collect();
    let mut paths = Vec::new();
    let mut fallback_count = 0;
    let mut trace = RunTrace::default();
    for run in runs {
        paths.extend(run.system.paths);
        fallback_count += run.fallback_count;
        trace.extend(run.trace);
    }
    let mut system = PathSystem::new(paths, h.edge_set(), Mode::Strong);
    system.dedup();
    let out = StageResult {
        system,
        residual: h.with_edges([]),
        fallback_count,
        stage_tag: "dense_expander".into(),
        part_count: 1,
        trace,
    };
    debug_verify(h, &out);
    out
}

/// Expander-decompose with the dense parameters and separate every part; the
/// uncovered edges become the residual.
pub fn reduce_large_deg(g: &Graph, cfg: &PipelineConfig, seed: u64) -> StageResult {
    if g.edge_count() == 0 {
        return StageResult { part_count: 0, ..StageResult::identity(g, "large_deg") };
    }
    let (parts, uncovered) = match expander_decompose(g, &cfg.dense_params(g.order()), &cfg.budget(seed)) {
        Ok(dec) => (dec.parts, dec.uncovered),
        Err(err) => {
            log::warn!("expander decomposition failed ({err}); treating the graph as one part");
            (vec![g.clone()], EdgeSet::new())
        }
    };
    let runs: Vec<StageResult> = parts
        .par_iter()
        .enumerate()
        .map(|(i, part)| separate_dense_expander(part, cfg, derive_seed(seed, &[2, i as u64])))
        .collect();
    let mut fallback_count = 0;
    let mut trace = RunTrace::default();
    let mut systems = Vec::new();
    for run in runs {
        fallback_count += run.fallback_count;
        trace.extend(run.trace);
        systems.push(run.system);
    }
    let out = StageResult {
        system: compose_disjoint(g, systems),
        residual: g.with_edges(uncovered),
        fallback_count,
        stage_tag: "large_deg".into(),
        part_count: parts.len(),
        trace,
    };
    debug_verify(g, &out);
    debug_assert_eq!(out.check_accounting(g), Ok(()));
    out
}

/// Decomposition used by a run on H − V, exposed for the four-case audit.
pub fn outside_decomposition(h: &Graph, v: &VertexSet) -> PathDecomposition {
    decompose_into_paths(&h.remove(v, &EdgeSet::new()))
}

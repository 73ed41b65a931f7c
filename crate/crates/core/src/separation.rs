//! Path systems, the separation verifier, trivial baselines and composition.
//!
//! Strong separation of a target edge set T: for every ordered pair (e, f) of
//! distinct edges of T some path contains e and not f, and every edge of T lies
//! on some path (so a one-edge target needs one path). Weak separation: for every
//! unordered pair some path contains exactly one of the two edges.

use std::collections::{HashMap, HashSet};
use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::decomp::{decompose_into_paths, PathDecomposition};
use crate::graph::{Edge, EdgeSet, Graph, Path};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Strong,
    Weak,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Strong => "strong",
            Mode::Weak => "weak",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Mode, String> {
        match s {
            "strong" => Ok(Mode::Strong),
            "weak" => Ok(Mode::Weak),
            other => Err(format!("unknown mode {other:?}")),
        }
    }
}

/// Paths plus the edge set they claim to separate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathSystem {
    pub paths: Vec<Path>,
    pub target: EdgeSet,
    pub mode: Mode,
}

impl PathSystem {
    pub fn new(paths: Vec<Path>, target: EdgeSet, mode: Mode) -> PathSystem {
        PathSystem { paths, target, mode }
    }

    pub fn empty(mode: Mode) -> PathSystem {
        PathSystem { paths: Vec::new(), target: EdgeSet::new(), mode }
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// Drop repeated paths (a path and its reverse count as the same path).
    pub fn dedup(&mut self) {
        let mut seen = HashSet::new();
        self.paths.retain(|p| seen.insert(p.canonical()));
    }
}

/// A violation found by the verifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Witness {
    /// Strong: no path contains `.0` without `.1`. Weak: no path contains exactly one.
    Pair(Edge, Edge),
    /// The only target edge lies on no path.
    Uncovered(Edge),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Pair(e, g) => write!(f, "({e}, {g})"),
            Witness::Uncovered(e) => write!(f, "({e} uncovered)"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationReport {
    pub ok: bool,
    pub witness: Option<Witness>,
    /// Target edges lying on at least one path.
    pub covered: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeparationError {
    #[error("path {index} is not a path of the host graph: {reason}")]
    InvalidPath { index: usize, reason: String },
    #[error("target edge {0} is not in the host graph")]
    ForeignTarget(Edge),
    #[error("input system rejected: {0}")]
    Rejected(String),
}

/// Check `system` against its own target and mode.
///
/// Witnesses are the lexicographically least violating pair: ordered for strong
/// mode, `(e, f)` with `e < f` for weak mode.
pub fn verify_separation(host: &Graph, system: &PathSystem) -> Result<SeparationReport, SeparationError> {
    for (index, p) in system.paths.iter().enumerate() {
        p.check_in(host).map_err(|err| SeparationError::InvalidPath { index, reason: err.to_string() })?;
    }
    if let Some(&e) = system.target.iter().find(|e| !host.contains_edge(**e)) {
        return Err(SeparationError::ForeignTarget(e));
    }
    let target: Vec<Edge> = system.target.iter().copied().collect();
    let t = target.len();
    let id: HashMap<Edge, usize> = target.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let members: Vec<Vec<usize>> = system
        .paths
        .iter()
        .map(|p| {
            let mut v: Vec<usize> = p.edges().filter_map(|e| id.get(&e).copied()).collect();
            v.sort_unstable();
            v
        })
        .collect();
    let mut covered_bits = FixedBitSet::with_capacity(t);
    for m in &members {
        for &i in m {
            covered_bits.insert(i);
        }
    }
    let covered = covered_bits.count_ones(..);
    let witness = match system.mode {
        Mode::Strong => strong_witness(&target, &members),
        Mode::Weak => weak_witness(&target, &members),
    };
    Ok(SeparationReport { ok: witness.is_none(), witness, covered })
}

fn strong_witness(target: &[Edge], members: &[Vec<usize>]) -> Option<Witness> {
    let t = target.len();
    // inter[e] = target edges lying on every path through e.
    let mut inter: Vec<Option<FixedBitSet>> = vec![None; t];
    for m in members {
        if m.is_empty() {
            continue;
        }
        let mut bits = FixedBitSet::with_capacity(t);
        for &i in m {
            bits.insert(i);
        }
        for &i in m {
            match &mut inter[i] {
                Some(acc) => acc.intersect_with(&bits),
                slot @ None => *slot = Some(bits.clone()),
            }
        }
    }
    for e in 0..t {
        match &inter[e] {
            None if t == 1 => return Some(Witness::Uncovered(target[e])),
            None => {
                let f = if e == 0 { 1 } else { 0 };
                return Some(Witness::Pair(target[e], target[f]));
            }
            Some(bits) => {
                if let Some(f) = bits.ones().find(|&f| f != e) {
                    return Some(Witness::Pair(target[e], target[f]));
                }
            }
        }
    }
    None
}

fn weak_witness(target: &[Edge], members: &[Vec<usize>]) -> Option<Witness> {
    let t = target.len();
    let mut signature: Vec<Vec<u32>> = vec![Vec::new(); t];
    for (pi, m) in members.iter().enumerate() {
        for &i in m {
            signature[i].push(pi as u32);
        }
    }
    let mut groups: HashMap<&[u32], (usize, Option<usize>)> = HashMap::new();
    for (e, sig) in signature.iter().enumerate() {
        let slot = groups.entry(sig.as_slice()).or_insert((e, None));
        if slot.0 != e && slot.1.is_none() {
            slot.1 = Some(e);
        }
    }
    groups
        .values()
        .filter_map(|&(a, b)| b.map(|b| (a, b)))
        .min()
        .map(|(a, b)| Witness::Pair(target[a], target[b]))
}

/// One single-edge path per edge.
pub fn singleton_baseline(g: &Graph) -> PathSystem {
    PathSystem::new(g.edges().iter().map(|&e| Path::single_edge(e)).collect(), g.edge_set(), Mode::Strong)
}

/// Separate E(G) with 2·max(1, ⌈log₂ e⌉) subgraphs, each decomposed into paths.
///
/// Edge i (in lexicographic order) goes to the "bit j set" subgraph when bit j of i
/// is 1 and to the "bit j unset" subgraph otherwise; two distinct indices differ in
/// some bit, and the decomposition path of e in the matching subgraph avoids f.
pub fn baseline_nlogn(g: &Graph) -> PathSystem {
    let e = g.edge_count();
    let mut paths = Vec::new();
    if e > 0 {
        let bits = (usize::BITS - (e - 1).leading_zeros()).max(1);
        for bit in 0..bits {
            for set in [true, false] {
                let chosen = g.edges().iter().enumerate().filter(|(i, _)| ((i >> bit) & 1 == 1) == set);
                let sub = g.with_edges(chosen.map(|(_, &f)| f));
                if sub.edge_count() > 0 {
                    paths.extend(decompose_into_paths(&sub).into_paths());
                }
            }
        }
    }
    let mut system = PathSystem::new(paths, g.edge_set(), Mode::Strong);
    system.dedup();
    system
}

/// P_inner ∪ P_decomp ∪ Q_inner ∪ Q_decomp for a split of E(G) into E(G∖G₁) and E(G₁).
///
/// Edges on the same side are separated by that side's inner system; an edge e on
/// one side and f on the other are separated by the decomposition path of e.
pub fn compose_separators(
    host: &Graph,
    p_inner: &PathSystem,
    q_inner: &PathSystem,
    p_decomp: &PathDecomposition,
    q_decomp: &PathDecomposition,
) -> Result<PathSystem, SeparationError> {
    for (name, sys) in [("P_inner", p_inner), ("Q_inner", q_inner)] {
        if sys.mode != Mode::Strong {
            return Err(SeparationError::Rejected(format!("{name} is not a strong system")));
        }
        let report = verify_separation(host, sys)?;
        if !report.ok {
            return Err(SeparationError::Rejected(format!(
                "{name} fails verification at {}",
                report.witness.expect("witness on failure")
            )));
        }
    }
    if let Some(e) = p_inner.target.intersection(&q_inner.target).next() {
        return Err(SeparationError::Rejected(format!("targets overlap at {e}")));
    }
    for (name, dec, sys) in [("P_decomp", p_decomp, p_inner), ("Q_decomp", q_decomp, q_inner)] {
        let sub = host.with_edges(sys.target.iter().copied());
        dec.check_exact(&sub)
            .map_err(|err| SeparationError::Rejected(format!("{name} is not a decomposition of its side: {err}")))?;
    }
    let mut paths = p_inner.paths.clone();
    paths.extend(p_decomp.paths().iter().cloned());
    paths.extend(q_inner.paths.iter().cloned());
    paths.extend(q_decomp.paths().iter().cloned());
    let target = p_inner.target.union(&q_inner.target).copied().collect();
    let mut out = PathSystem::new(paths, target, Mode::Strong);
    out.dedup();
    Ok(out)
}

/// Union of systems with pairwise disjoint targets, each already separating its own target.
///
/// Cross pairs (e in one target, f in another) need a path through e lying inside
/// e's own target. Target edges with no such path already in their system get one
/// from a path decomposition of exactly those edges.
pub fn compose_disjoint(host: &Graph, systems: Vec<PathSystem>) -> PathSystem {
    let mut paths = Vec::new();
    let mut target = EdgeSet::new();
    let several = systems.iter().filter(|s| !s.target.is_empty()).count() > 1;
    for sys in systems {
        if several {
            let extra = pure_cover_gap(&sys);
            if !extra.is_empty() {
                let sub = host.with_edges(extra.iter().copied());
                paths.extend(decompose_into_paths(&sub).into_paths());
            }
        }
        for e in &sys.target {
            assert!(target.insert(*e), "targets overlap at {e}");
        }
        paths.extend(sys.paths);
    }
    let mut out = PathSystem::new(paths, target, Mode::Strong);
    out.dedup();
    out
}

/// Target edges not lying on any path whose edges all belong to the target.
pub fn pure_cover_gap(sys: &PathSystem) -> EdgeSet {
    let mut gap = sys.target.clone();
    for p in &sys.paths {
        if p.edges().all(|e| sys.target.contains(&e)) {
            for e in p.edges() {
                gap.remove(&e);
            }
        }
    }
    gap
}

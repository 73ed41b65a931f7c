//! Exact minimum separating systems for tiny graphs.

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::graph::{Edge, Graph, Path};
use crate::separation::{Mode, PathSystem};

pub const ORACLE_MAX_ORDER: usize = 7;
pub const ORACLE_MAX_EDGES: usize = 12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance too large for the exact oracle: order {order}, {edges} edges (limits {ORACLE_MAX_ORDER}, {ORACLE_MAX_EDGES})")]
    TooLarge { order: usize, edges: usize },
    #[error("no separating system with at most {cap} paths")]
    Infeasible { cap: usize },
}

/// Every simple path of `g`, once per vertex set orientation (first vertex < last).
///
/// Sorted by decreasing length, then by vertex sequence.
pub fn simple_paths(g: &Graph) -> Vec<Path> {
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for s in g.live_vertices() {
        stack.clear();
        stack.push(s);
        extend_paths(g, &mut stack, &mut out);
    }
    out.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.vertices().cmp(b.vertices())));
    out
}

fn extend_paths(g: &Graph, stack: &mut Vec<usize>, out: &mut Vec<Path>) {
    let last = *stack.last().expect("nonempty");
    for &y in g.neighbors(last) {
        if stack.contains(&y) {
            continue;
        }
        stack.push(y);
        if stack[0] < y {
            out.push(Path::new(stack.clone()).expect("simple by construction"));
        }
        extend_paths(g, stack, out);
        stack.pop();
    }
}

struct Search {
    mode: Mode,
    t: usize,
    masks: Vec<u32>,
    chosen: Vec<usize>,
}

/// A minimum-size separating system of `g` (target E(G)) over all simple paths.
///
/// Iterative deepening on the size; within a depth the search branches on the
/// least unresolved pair, trying each path that resolves it, and forbids earlier
/// siblings in later branches. The first system found is returned, so ties are
/// broken by search order and the result is deterministic.
pub fn brute_force_min_system(g: &Graph, mode: Mode, cap: usize) -> Result<PathSystem, OracleError> {
    if g.order() > ORACLE_MAX_ORDER || g.edge_count() > ORACLE_MAX_EDGES {
        return Err(OracleError::TooLarge { order: g.order(), edges: g.edge_count() });
    }
    let edges: Vec<Edge> = g.edges().to_vec();
    let t = edges.len();
    if t == 0 || (mode == Mode::Weak && t == 1) {
        return Ok(PathSystem::new(Vec::new(), g.edge_set(), mode));
    }
    let paths = simple_paths(g);
    let masks: Vec<u32> = paths
        .iter()
        .map(|p| p.edges().map(|e| 1u32 << g.edge_index(e).expect("edge of g")).fold(0, |a, b| a | b))
        .collect();
    let mut search = Search { mode, t, masks, chosen: Vec::new() };
    for depth in 0..=cap {
        let mut excluded = FixedBitSet::with_capacity(paths.len());
        if search.dfs(depth, &mut excluded) {
            let chosen = search.chosen.iter().map(|&i| paths[i].clone()).collect();
            return Ok(PathSystem::new(chosen, g.edge_set(), mode));
        }
    }
    Err(OracleError::Infeasible { cap })
}

impl Search {
    fn dfs(&mut self, remaining: usize, excluded: &mut FixedBitSet) -> bool {
        let sigs = self.signatures();
        let Some((e, f)) = self.least_unresolved(&sigs) else {
            return true;
        };
        if remaining == 0 || !self.bound_allows(&sigs, remaining) {
            return false;
        }
        let (eb, fb) = (1u32 << e, f.map_or(0, |f| 1u32 << f));
        let cands: Vec<usize> = (0..self.masks.len())
            .filter(|&i| !excluded.contains(i))
            .filter(|&i| {
                let m = self.masks[i];
                match self.mode {
                    Mode::Strong => m & eb != 0 && m & fb == 0,
                    Mode::Weak => (m & eb != 0) != (m & fb != 0),
                }
            })
            .collect();
        let mark = excluded.clone();
        for &c in &cands {
            self.chosen.push(c);
            excluded.insert(c);
            if self.dfs(remaining - 1, excluded) {
                return true;
            }
            self.chosen.pop();
        }
        *excluded = mark;
        false
    }

    /// Per edge, the set of chosen positions containing it.
    fn signatures(&self) -> Vec<u64> {
        let mut sigs = vec![0u64; self.t];
        for (pos, &i) in self.chosen.iter().enumerate() {
            let mut m = self.masks[i];
            while m != 0 {
                let e = m.trailing_zeros() as usize;
                sigs[e] |= 1 << pos;
                m &= m - 1;
            }
        }
        sigs
    }

    /// Least unresolved pair; `None` as partner means a lone uncovered edge.
    fn least_unresolved(&self, sigs: &[u64]) -> Option<(usize, Option<usize>)> {
        match self.mode {
            Mode::Strong => {
                if self.t == 1 {
                    return (sigs[0] == 0).then_some((0, None));
                }
                for e in 0..self.t {
                    for f in 0..self.t {
                        // e unseparated from f iff every chosen path with e also has f.
                        if e != f && sigs[e] & !sigs[f] == 0 {
                            return Some((e, Some(f)));
                        }
                    }
                }
                None
            }
            Mode::Weak => {
                for e in 0..self.t {
                    for f in e + 1..self.t {
                        if sigs[e] == sigs[f] {
                            return Some((e, Some(f)));
                        }
                    }
                }
                None
            }
        }
    }

    /// Edges sharing a signature must get distinct (strong: pairwise incomparable)
    /// patterns over the remaining paths.
    fn bound_allows(&self, sigs: &[u64], remaining: usize) -> bool {
        let mut sorted = sigs.to_vec();
        sorted.sort_unstable();
        let capacity = match self.mode {
            Mode::Strong => binomial(remaining, remaining / 2),
            Mode::Weak => 1u64 << remaining.min(63),
        };
        sorted.chunk_by(|a, b| a == b).all(|class| class.len() as u64 <= capacity)
    }
}

fn binomial(n: usize, k: usize) -> u64 {
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

//! Greedy first-fit families of matchings and short-path unions.

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::decomp::PathDecomposition;
use crate::graph::{Edge, Graph, Path, Vertex, VertexSet};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatchingError {
    #[error("decomposition does not match the graph: {0}")]
    BadDecomposition(String),
    #[error("decomposition path {index} has length {len}, above the bound {bound}")]
    PathTooLong { index: usize, len: usize, bound: usize },
    #[error("invalid vertex sets: {0}")]
    BadSets(String),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MatchingFamily {
    pub matchings: Vec<Vec<Edge>>,
    /// Edges left out because the cap was reached.
    pub uncovered: Vec<Edge>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UnionFamily {
    pub groups: Vec<Vec<Path>>,
    /// Members left out because the cap was reached.
    pub leftover: Vec<Path>,
}

/// d̄ bucket: r with d̄ in [2^{r−1}, 2^r).
pub fn degree_bucket(dbar: usize) -> u32 {
    assert!(dbar >= 1, "edges have endpoint degree at least 1");
    usize::BITS - dbar.leading_zeros()
}

/// Edges of bucket r allowed in one matching.
pub fn bucket_quota(r: u32, divisor: f64) -> usize {
    (2f64.powi(r as i32) / divisor).ceil() as usize
}

/// min{d_G(x), d_G(y)}.
pub fn min_endpoint_degree(g: &Graph, e: Edge) -> usize {
    g.degree(e.0).min(g.degree(e.1))
}

fn path_index(g: &Graph, decomp: &PathDecomposition) -> Result<Vec<usize>, MatchingError> {
    decomp.check_exact(g).map_err(|e| MatchingError::BadDecomposition(e.to_string()))?;
    Ok(g.edges().iter().map(|&e| decomp.path_of(e).expect("exact decomposition")).collect())
}

/// One open matching during first-fit.
struct Slot {
    edges: Vec<Edge>,
    vertices: FixedBitSet,
    paths: FixedBitSet,
    buckets: Vec<usize>,
}

impl Slot {
    fn new(n: usize, paths: usize) -> Slot {
        Slot {
            edges: Vec::new(),
            vertices: FixedBitSet::with_capacity(n),
            paths: FixedBitSet::with_capacity(paths),
            buckets: vec![0; usize::BITS as usize + 1],
        }
    }

    fn admits(&self, e: Edge, path: usize) -> bool {
        !self.vertices.contains(e.0) && !self.vertices.contains(e.1) && !self.paths.contains(path)
    }

    fn insert(&mut self, e: Edge, path: usize) {
        self.vertices.insert(e.0);
        self.vertices.insert(e.1);
        self.paths.insert(path);
        self.edges.push(e);
    }
}

fn first_fit<F>(g: &Graph, decomp: &PathDecomposition, cap: usize, mut extra: F) -> Result<MatchingFamily, MatchingError>
where
    F: FnMut(&mut Slot, Edge, bool) -> bool,
{
    let owner = path_index(g, decomp)?;
    let mut slots: Vec<Slot> = Vec::new();
    let mut uncovered = Vec::new();
    for (i, &e) in g.edges().iter().enumerate() {
        let p = owner[i];
        let hit = slots.iter_mut().position(|s| s.admits(e, p) && extra(s, e, false));
        match hit {
            Some(k) => {
                extra(&mut slots[k], e, true);
                slots[k].insert(e, p);
            }
            None if slots.len() < cap => {
                let mut s = Slot::new(g.n(), decomp.len());
                extra(&mut s, e, true);
                s.insert(e, p);
                slots.push(s);
            }
            None => uncovered.push(e),
        }
    }
    Ok(MatchingFamily { matchings: slots.into_iter().map(|s| s.edges).collect(), uncovered })
}

/// Edge-disjoint matchings, each meeting every decomposition path in at most one edge.
pub fn build_matchings_basic(g: &Graph, decomp: &PathDecomposition, cap: usize) -> Result<MatchingFamily, MatchingError> {
    first_fit(g, decomp, cap, |_, _, _| true)
}

/// As [`build_matchings_basic`], and each matching has at most ⌈2^r/divisor⌉ edges
/// whose d̄ (taken in `degrees`) lies in [2^{r−1}, 2^r).
pub fn build_matchings_degree(
    g: &Graph,
    decomp: &PathDecomposition,
    degrees: &Graph,
    divisor: f64,
    cap: usize,
) -> Result<MatchingFamily, MatchingError> {
    assert!(divisor > 0.0, "bucket divisor must be positive");
    if let Some(&e) = g.edges().iter().find(|&&e| !degrees.contains_edge(e)) {
        return Err(MatchingError::BadDecomposition(format!("edge {e} is missing from the degree graph")));
    }
    first_fit(g, decomp, cap, |slot, e, commit| {
        let r = degree_bucket(min_endpoint_degree(degrees, e)) as usize;
        if commit {
            slot.buckets[r] += 1;
            true
        } else {
            slot.buckets[r] < bucket_quota(r as u32, divisor)
        }
    })
}

/// Matchings of size at most `d` whose decomposition paths are pairwise at distance
/// at least 2·r₀ in `g`.
pub fn build_matchings_spread(
    g: &Graph,
    decomp: &PathDecomposition,
    d: usize,
    r0: usize,
    cap: usize,
) -> Result<MatchingFamily, MatchingError> {
    for (index, p) in decomp.paths().iter().enumerate() {
        if p.len() > d {
            return Err(MatchingError::PathTooLong { index, len: p.len(), bound: d });
        }
    }
    let owner = path_index(g, decomp)?;
    // Zone of a path: vertices within distance 2r₀ − 1 of it. P(h) is far enough from
    // P(e) exactly when it avoids the zone of P(e).
    let radius = (2 * r0).saturating_sub(1);
    let zones: Vec<FixedBitSet> = decomp
        .paths()
        .iter()
        .map(|p| {
            let ball = g.ball(&p.vertices().iter().copied().collect(), radius);
            let mut bits = FixedBitSet::with_capacity(g.n());
            bits.extend(ball);
            bits
        })
        .collect();
    let mut slots: Vec<(Vec<Edge>, FixedBitSet)> = Vec::new();
    let mut uncovered = Vec::new();
    for (i, &e) in g.edges().iter().enumerate() {
        let p = owner[i];
        let verts = decomp.paths()[p].vertices();
        let hit = slots.iter().position(|(m, zone)| m.len() < d.max(1) && verts.iter().all(|&v| !zone.contains(v)));
        let k = match hit {
            Some(k) => k,
            None if slots.len() < cap => {
                slots.push((Vec::new(), FixedBitSet::with_capacity(g.n())));
                slots.len() - 1
            }
            None => {
                uncovered.push(e);
                continue;
            }
        };
        slots[k].0.push(e);
        slots[k].1.union_with(&zones[p]);
    }
    Ok(MatchingFamily { matchings: slots.into_iter().map(|(m, _)| m).collect(), uncovered })
}

/// Cyclic order of the neighbours in which consecutive edges at `u` never lie on
/// the same decomposition path.
fn cyclic_order(u: Vertex, nbrs: &[Vertex], decomp: &PathDecomposition) -> Option<Vec<Vertex>> {
    let k = nbrs.len();
    let path = |v: Vertex| decomp.path_of(Edge::new(u, v)).expect("edge is decomposed");
    let ids: Vec<usize> = nbrs.iter().map(|&v| path(v)).collect();
    let mut order = vec![0usize];
    let mut used = vec![false; k];
    used[0] = true;
    let mut budget = 100_000usize;
    fn dfs(order: &mut Vec<usize>, used: &mut [bool], ids: &[usize], budget: &mut usize) -> bool {
        let k = ids.len();
        let last = *order.last().expect("nonempty");
        if order.len() == k {
            return ids[last] != ids[order[0]];
        }
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        for next in 0..k {
            if used[next] || ids[next] == ids[last] {
                continue;
            }
            used[next] = true;
            order.push(next);
            if dfs(order, used, ids, budget) {
                return true;
            }
            order.pop();
            used[next] = false;
        }
        false
    }
    dfs(&mut order, &mut used, &ids, &mut budget).then(|| order.into_iter().map(|i| nbrs[i]).collect())
}

/// The short-path family: for each u ∈ L₂ the cyclic 2-paths v_i u v_{i+1} over its
/// L₁-neighbours, then every edge inside L₁.
pub fn short_path_family(
    h1: &Graph,
    decomp: &PathDecomposition,
    l1: &VertexSet,
    l2: &VertexSet,
) -> Result<Vec<Path>, MatchingError> {
    decomp.check_exact(h1).map_err(|e| MatchingError::BadDecomposition(e.to_string()))?;
    if !l1.is_disjoint(l2) {
        return Err(MatchingError::BadSets("L1 and L2 overlap".into()));
    }
    let mut family = Vec::new();
    for &u in l2 {
        let nbrs: Vec<Vertex> = h1.neighbors(u).iter().copied().filter(|v| l1.contains(v)).collect();
        if nbrs.len() < 4 {
            return Err(MatchingError::BadSets(format!("vertex {u} has {} neighbours in L1, need 4", nbrs.len())));
        }
        let order = cyclic_order(u, &nbrs, decomp)
            .ok_or_else(|| MatchingError::BadSets(format!("no admissible cyclic order around {u}")))?;
        for i in 0..order.len() {
            let next = order[(i + 1) % order.len()];
            family.push(Path::new(vec![order[i], u, next]).expect("distinct vertices"));
        }
    }
    for &e in h1.edges() {
        if l1.contains(&e.0) && l1.contains(&e.1) {
            family.push(Path::single_edge(e));
        }
    }
    Ok(family)
}

/// Groups of at most `d` pairwise vertex-disjoint members of the short-path family,
/// each group meeting every decomposition path in at most one edge.
pub fn build_short_path_unions(
    h1: &Graph,
    decomp: &PathDecomposition,
    l1: &VertexSet,
    l2: &VertexSet,
    d: usize,
    cap: usize,
) -> Result<UnionFamily, MatchingError> {
    let family = short_path_family(h1, decomp, l1, l2)?;
    let d = d.max(1);
    let mut slots: Vec<(Vec<Path>, FixedBitSet, FixedBitSet)> = Vec::new();
    let mut leftover = Vec::new();
    for member in family {
        let paths: Vec<usize> = member.edges().map(|e| decomp.path_of(e).expect("decomposed")).collect();
        let hit = slots.iter().position(|(g, verts, used)| {
            g.len() < d
                && member.vertices().iter().all(|&v| !verts.contains(v))
                && paths.iter().all(|&p| !used.contains(p))
        });
        let k = match hit {
            Some(k) => k,
            None if slots.len() < cap => {
                slots.push((Vec::new(), FixedBitSet::with_capacity(h1.n()), FixedBitSet::with_capacity(decomp.len())));
                slots.len() - 1
            }
            None => {
                leftover.push(member);
                continue;
            }
        };
        let slot = &mut slots[k];
        slot.1.extend(member.vertices().iter().copied());
        slot.2.extend(paths);
        slot.0.push(member);
    }
    Ok(UnionFamily { groups: slots.into_iter().map(|(g, _, _)| g).collect(), leftover })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::decompose_into_paths;
    use crate::generate::{generate, Family};
    use crate::strategies::audit;

    fn graph(n: usize, pairs: &[(usize, usize)]) -> Graph {
        Graph::new(n, pairs.iter().copied()).unwrap()
    }

    fn dec(paths: &[&[usize]]) -> PathDecomposition {
        PathDecomposition::from_paths(paths.iter().map(|p| Path::new(p.to_vec()).unwrap()).collect()).unwrap()
    }

    #[test]
    fn single_edge_gives_one_matching() {
        let g = graph(2, &[(0, 1)]);
        let d = decompose_into_paths(&g);
        let fam = build_matchings_basic(&g, &d, 6).unwrap();
        assert_eq!(fam.matchings, vec![vec![Edge::new(0, 1)]]);
        let fam = build_matchings_degree(&g, &d, &g, 200.0, 6).unwrap();
        assert_eq!(fam.matchings.len(), 1);
    }

    #[test]
    fn triangle_needs_three() {
        let g = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        let d = dec(&[&[0, 1, 2], &[2, 0]]);
        let fam = build_matchings_basic(&g, &d, 9).unwrap();
        assert_eq!(fam.matchings.len(), 3);
        assert!(fam.uncovered.is_empty());
    }

    #[test]
    fn cap_leaves_uncovered() {
        let g = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        let d = decompose_into_paths(&g);
        let fam = build_matchings_basic(&g, &d, 2).unwrap();
        assert_eq!(fam.matchings.len(), 2);
        assert_eq!(fam.uncovered.len(), 1);
    }

    #[test]
    fn buckets() {
        assert_eq!(degree_bucket(1), 1);
        assert_eq!(degree_bucket(2), 2);
        assert_eq!(degree_bucket(3), 2);
        assert_eq!(degree_bucket(4), 3);
        assert_eq!(bucket_quota(3, 200.0), 1);
        assert_eq!(bucket_quota(10, 200.0), 6);
    }

    #[test]
    fn degree_quota_enforced() {
        // A perfect matching on 40 vertices of K_40: every d̄ is 39, bucket 6, quota 1 at divisor 200.
        let k = generate(&Family::Complete(40), 0).unwrap();
        let m = graph(40, &(0..20).map(|i| (2 * i, 2 * i + 1)).collect::<Vec<_>>());
        let d = decompose_into_paths(&m);
        let fam = build_matchings_degree(&m, &d, &k, 200.0, 100).unwrap();
        assert_eq!(fam.matchings.len(), 20);
        let fam = build_matchings_degree(&m, &d, &k, 8.0, 100).unwrap();
        assert!(fam.matchings.iter().all(|m| m.len() <= 8));
        audit::degree_buckets(&k, &fam.matchings, 8.0).unwrap();
    }

    #[test]
    fn corpus_matchings_within_3n() {
        for seed in 0..20 {
            let g = generate(&Family::Gnp(30, 0.3), seed).unwrap();
            let d = decompose_into_paths(&g);
            let fam = build_matchings_basic(&g, &d, 3 * g.order()).unwrap();
            assert!(fam.uncovered.is_empty());
            audit::path_rule(&g, &d, &fam.matchings).unwrap();
            audit::vertex_disjoint(&fam.matchings).unwrap();
            audit::exact_cover(&g, &fam.matchings).unwrap();
        }
    }

    #[test]
    fn unions_without_l2_are_matchings() {
        let g = generate(&Family::Complete(6), 0).unwrap();
        let l1: VertexSet = (0..6).collect();
        let d = decompose_into_paths(&g);
        let fam = build_short_path_unions(&g, &d, &l1, &VertexSet::new(), 6, 100).unwrap();
        for group in &fam.groups {
            assert!(group.iter().all(|p| p.len() == 1));
        }
        audit::groups(&d, &fam.groups, 6).unwrap();
    }

    #[test]
    fn cyclic_two_paths_cover_each_edge_twice() {
        // u = 0 joined to L1 = {1, 2, 3, 4}; L1 is a path so the decomposition is nontrivial.
        let g = graph(5, &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (2, 3), (3, 4)]);
        let l1: VertexSet = (1..5).collect();
        let l2: VertexSet = [0].into();
        let d = dec(&[&[1, 0, 2], &[3, 0, 4], &[1, 2, 3, 4]]);
        let fam = short_path_family(&g, &d, &l1, &l2).unwrap();
        let twos: Vec<&Path> = fam.iter().filter(|p| p.len() == 2).collect();
        assert_eq!(twos.len(), 4);
        for v in 1..5 {
            let e = Edge::new(0, v);
            assert_eq!(twos.iter().filter(|p| p.edges().any(|f| f == e)).count(), 2);
        }
        for p in &twos {
            let ids: Vec<_> = p.edges().map(|e| d.path_of(e)).collect();
            assert_ne!(ids[0], ids[1]);
        }
        let unions = build_short_path_unions(&g, &d, &l1, &l2, 4, 100).unwrap();
        audit::groups(&d, &unions.groups, 4).unwrap();
    }

    #[test]
    fn spread_keeps_far_paths_together() {
        // Two triangles joined by a path of length 10.
        let mut pairs = vec![(0, 1), (1, 2), (0, 2), (20, 21), (21, 22), (20, 22)];
        let chain: Vec<usize> = std::iter::once(2).chain(3..12).chain(std::iter::once(20)).collect();
        pairs.extend(chain.windows(2).map(|w| (w[0], w[1])));
        let g = graph(23, &pairs);
        let d = crate::decomp::decompose_into_bounded_paths(&g, 3);
        let fam = build_matchings_spread(&g, &d, 3, 1, 100).unwrap();
        audit::spread(&g, &d, &fam.matchings, 1).unwrap();
        let together = fam.matchings.iter().any(|m| {
            m.iter().any(|e| e.0 < 3 && e.1 < 3) && m.iter().any(|e| e.0 >= 20)
        });
        assert!(together);
    }

    #[test]
    fn spread_separates_touching_paths() {
        let g = generate(&Family::Cycle(200), 0).unwrap();
        let d = crate::decomp::decompose_into_bounded_paths(&g, 4);
        let fam = build_matchings_spread(&g, &d, 4, 2, 600).unwrap();
        assert!(fam.uncovered.is_empty());
        audit::spread(&g, &d, &fam.matchings, 2).unwrap();
        audit::exact_cover(&g, &fam.matchings).unwrap();
        assert!(fam.matchings.iter().all(|m| m.len() <= 4));
    }

    #[test]
    fn bad_decomposition_rejected() {
        let g = graph(3, &[(0, 1), (1, 2)]);
        let d = dec(&[&[0, 1]]);
        assert!(matches!(build_matchings_basic(&g, &d, 3), Err(MatchingError::BadDecomposition(_))));
        let d = dec(&[&[0, 1, 2]]);
        assert!(matches!(build_matchings_spread(&g, &d, 1, 1, 3), Err(MatchingError::PathTooLong { .. })));
    }
}

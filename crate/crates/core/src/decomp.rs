//! Path decompositions: partitions of E(G) into few simple paths, and into few short paths.
//!
//! Two constructions run on every input and the smaller result is kept:
//!
//! * the Euler route: per component, pair the odd vertices through a virtual
//!   vertex, take closed trails, cut at the virtual vertex, excise cycles at the
//!   first repeated vertex, fold every cycle into an incident path (or open it);
//! * peeling: repeatedly grow a long path from an odd vertex, with rotation
//!   moves when the growing end gets stuck, and remove it.
//!
//! Both finish with a merge pass that joins two paths ending at a common vertex
//! whenever their union is still simple. The `|paths| ≤ |G|` bound is asserted.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::graph::{Edge, Graph, Path, Vertex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecompError {
    #[error("edge {0} lies on two paths")]
    Overlap(Edge),
    #[error("edge {0} is not covered")]
    Uncovered(Edge),
    #[error("edge {0} is not in the host graph")]
    Foreign(Edge),
    #[error("path {index} is not valid in the host graph")]
    InvalidPath { index: usize },
}

/// Edge-disjoint paths covering a graph, with the owner map e ↦ P(e).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathDecomposition {
    paths: Vec<Path>,
    index: HashMap<Edge, usize>,
}

impl PathDecomposition {
    /// Index a set of edge-disjoint paths.
    pub fn from_paths(paths: Vec<Path>) -> Result<PathDecomposition, DecompError> {
        let mut index = HashMap::new();
        for (i, p) in paths.iter().enumerate() {
            for e in p.edges() {
                if index.insert(e, i).is_some() {
                    return Err(DecompError::Overlap(e));
                }
            }
        }
        Ok(PathDecomposition { paths, index })
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn into_paths(self) -> Vec<Path> {
        self.paths
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// Id of the path containing `e`.
    pub fn path_of(&self, e: Edge) -> Option<usize> {
        self.index.get(&e).copied()
    }

    pub fn edge_count(&self) -> usize {
        self.index.len()
    }

    /// Exactly E(host), every path valid in host.
    pub fn check_exact(&self, host: &Graph) -> Result<(), DecompError> {
        for (i, p) in self.paths.iter().enumerate() {
            if p.check_in(host).is_err() {
                return Err(DecompError::InvalidPath { index: i });
            }
        }
        for e in self.index.keys() {
            if !host.contains_edge(*e) {
                return Err(DecompError::Foreign(*e));
            }
        }
        for &e in host.edges() {
            if !self.index.contains_key(&e) {
                return Err(DecompError::Uncovered(e));
            }
        }
        Ok(())
    }
}

/// Decompose E(G) into at most |G| paths.
pub fn decompose_into_paths(g: &Graph) -> PathDecomposition {
    if g.edge_count() == 0 {
        return PathDecomposition::from_paths(Vec::new()).expect("empty");
    }
    let euler = merge_pass(euler_route(g), g.n());
    let peel = merge_pass(peel_route(g), g.n());
    let best = if peel.len() < euler.len() { peel } else { euler };
    assert!(
        best.len() <= g.order(),
        "path decomposition produced {} paths for |G| = {}",
        best.len(),
        g.order()
    );
    let paths = best.into_iter().map(|vs| Path::new(vs).expect("simple by construction")).collect();
    let dec = PathDecomposition::from_paths(paths).expect("edge-disjoint by construction");
    debug_assert_eq!(dec.check_exact(g), Ok(()));
    dec
}

/// Decompose E(G) into at most ⌈e(G)/d⌉ + |G| paths of length at most `d`.
pub fn decompose_into_bounded_paths(g: &Graph, d: usize) -> PathDecomposition {
    assert!(d >= 1, "length bound must be positive");
    let base = decompose_into_paths(g);
    let mut pieces = Vec::new();
    for p in base.into_paths() {
        let vs = p.into_vertices();
        let mut start = 0;
        while start + 1 < vs.len() {
            let end = (start + d).min(vs.len() - 1);
            pieces.push(Path::new(vs[start..=end].to_vec()).expect("sub-path of a simple path"));
            start = end;
        }
    }
    PathDecomposition::from_paths(pieces).expect("pieces stay edge-disjoint")
}

/// Adjacency with edge ids: `adj[v]` lists `(neighbor, edge id)` by neighbor.
fn indexed_adjacency(g: &Graph) -> Vec<Vec<(Vertex, usize)>> {
    let mut adj = vec![Vec::new(); g.n()];
    for (id, e) in g.edges().iter().enumerate() {
        adj[e.0].push((e.1, id));
        adj[e.1].push((e.0, id));
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    adj
}

fn euler_route(g: &Graph) -> Vec<Vec<Vertex>> {
    let n = g.n();
    let m = g.edge_count();
    let mut adj = indexed_adjacency(g);
    // Virtual vertex `n` pairs up the odd vertices.
    adj.push(Vec::new());
    let mut next_id = m;
    for v in 0..n {
        if adj[v].len() % 2 == 1 {
            adj[v].push((n, next_id));
            adj[n].push((v, next_id));
            next_id += 1;
        }
    }
    let mut used = vec![false; next_id];
    let mut cursor = vec![0usize; n + 1];

    let mut circuits = Vec::new();
    let starts = std::iter::once(n).chain(0..n);
    for s in starts {
        if cursor[s] >= adj[s].len() {
            continue;
        }
        // Hierholzer, lowest neighbor first.
        let mut stack = vec![s];
        let mut circuit = Vec::new();
        while let Some(&x) = stack.last() {
            let mut advanced = false;
            while cursor[x] < adj[x].len() {
                let (y, id) = adj[x][cursor[x]];
                cursor[x] += 1;
                if !used[id] {
                    used[id] = true;
                    stack.push(y);
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                circuit.push(stack.pop().expect("nonempty"));
            }
        }
        if circuit.len() > 1 {
            circuit.reverse();
            circuits.push(circuit);
        }
    }

    let mut trails: Vec<Vec<Vertex>> = Vec::new();
    for c in circuits {
        if c.contains(&n) {
            let mut cur = Vec::new();
            for v in c {
                if v == n {
                    if cur.len() > 1 {
                        trails.push(std::mem::take(&mut cur));
                    }
                    cur.clear();
                } else {
                    cur.push(v);
                }
            }
            if cur.len() > 1 {
                trails.push(cur);
            }
        } else {
            trails.push(c);
        }
    }

    let mut paths = Vec::new();
    let mut cycles = Vec::new();
    let mut pos = vec![usize::MAX; n];
    for t in trails {
        let mut seg: Vec<Vertex> = Vec::new();
        for v in t {
            if pos[v] != usize::MAX {
                let p = pos[v];
                let mut cycle: Vec<Vertex> = seg[p..].to_vec();
                for &x in &seg[p + 1..] {
                    pos[x] = usize::MAX;
                }
                seg.truncate(p + 1);
                cycle.push(v);
                cycles.push(cycle);
            } else {
                pos[v] = seg.len();
                seg.push(v);
            }
        }
        for &x in &seg {
            pos[x] = usize::MAX;
        }
        if seg.len() > 1 {
            paths.push(seg);
        }
    }

    for cycle in cycles {
        absorb_cycle(&mut paths, cycle, n);
    }
    paths
}

/// Fold a closed walk `c0 c1 … c(k-1) c0` into the path list.
///
/// If some path meets the cycle in exactly one vertex v, the path and cycle become
/// two paths through v; otherwise the cycle is opened at its least vertex.
fn absorb_cycle(paths: &mut Vec<Vec<Vertex>>, mut cycle: Vec<Vertex>, n: usize) {
    cycle.pop();
    let mut in_cycle = FixedBitSet::with_capacity(n);
    for &c in &cycle {
        in_cycle.insert(c);
    }
    for i in 0..paths.len() {
        let mut shared = paths[i].iter().enumerate().filter(|(_, v)| in_cycle.contains(**v));
        let Some((iv, &v)) = shared.next() else { continue };
        if shared.next().is_some() {
            continue;
        }
        let k = cycle.len();
        let start = cycle.iter().position(|&c| c == v).expect("shared vertex on cycle");
        let around: Vec<Vertex> = (1..k).map(|j| cycle[(start + j) % k]).collect();
        let last = *around.last().expect("cycle has at least 3 vertices");
        let mut first: Vec<Vertex> = paths[i][..=iv].to_vec();
        first.extend_from_slice(&around);
        let mut second = vec![last];
        second.extend_from_slice(&paths[i][iv..]);
        paths[i] = first;
        paths.push(second);
        return;
    }
    let k = cycle.len();
    let start = (0..k).min_by_key(|&j| cycle[j]).expect("nonempty cycle");
    let opened: Vec<Vertex> = (0..k).map(|j| cycle[(start + j) % k]).collect();
    let last = opened[k - 1];
    paths.push(vec![last, opened[0]]);
    paths.push(opened);
}

fn peel_route(g: &Graph) -> Vec<Vec<Vertex>> {
    let n = g.n();
    let adj = indexed_adjacency(g);
    let mut used = vec![false; g.edge_count()];
    let mut rem = vec![0usize; n];
    for v in 0..n {
        rem[v] = adj[v].len();
    }
    let mut pos = vec![usize::MAX; n];
    let mut paths = Vec::new();
    let mut scan_odd = 0usize;
    loop {
        while scan_odd < n && rem[scan_odd] % 2 == 0 {
            scan_odd += 1;
        }
        let start = if scan_odd < n {
            Some(scan_odd)
        } else {
            (0..n).find(|&v| rem[v] > 0)
        };
        let Some(start) = start else { break };
        // An odd vertex can turn even only when it is a path end; rescan from 0.
        let mut path = vec![start];
        pos[start] = 0;
        grow(&adj, &used, &rem, &mut path, &mut pos);
        path.reverse();
        for (i, &v) in path.iter().enumerate() {
            pos[v] = i;
        }
        grow(&adj, &used, &rem, &mut path, &mut pos);
        for w in path.windows(2) {
            let id = adj[w[0]].iter().find(|&&(y, _)| y == w[1]).map(|&(_, id)| id).expect("path edge");
            debug_assert!(!used[id]);
            used[id] = true;
            rem[w[0]] -= 1;
            rem[w[1]] -= 1;
        }
        for &v in &path {
            pos[v] = usize::MAX;
        }
        scan_odd = 0;
        paths.push(path);
    }
    paths
}

/// Extend the last end of `path` greedily, rotating when stuck.
fn grow(
    adj: &[Vec<(Vertex, usize)>],
    used: &[bool],
    rem: &[usize],
    path: &mut Vec<Vertex>,
    pos: &mut [usize],
) {
    let free_step = |x: Vertex, pos: &[usize]| -> Option<Vertex> {
        adj[x]
            .iter()
            .filter(|&&(y, id)| !used[id] && pos[y] == usize::MAX)
            .min_by_key(|&&(y, _)| (rem[y], y))
            .map(|&(y, _)| y)
    };
    let mut rotations_left = 2 * path.len() + 8;
    loop {
        let x = *path.last().expect("nonempty");
        if let Some(y) = free_step(x, pos) {
            pos[y] = path.len();
            path.push(y);
            continue;
        }
        if rotations_left == 0 || path.len() < 3 {
            return;
        }
        // Pósa rotation: use chord x–path[i], drop path[i]–path[i+1], new end path[i+1].
        let len = path.len();
        let pivot = adj[x]
            .iter()
            .filter(|&&(y, id)| !used[id] && pos[y] != usize::MAX && pos[y] + 2 < len)
            .map(|&(y, _)| pos[y])
            .find(|&i| free_step(path[i + 1], pos).is_some());
        let Some(i) = pivot else { return };
        rotations_left -= 1;
        path[i + 1..].reverse();
        for (j, &v) in path.iter().enumerate().skip(i + 1) {
            pos[v] = j;
        }
    }
}

/// Join pairs of paths that end at a common vertex and share nothing else.
fn merge_pass(paths: Vec<Vec<Vertex>>, n: usize) -> Vec<Vec<Vertex>> {
    let mut paths: Vec<Option<Vec<Vertex>>> = paths.into_iter().map(Some).collect();
    let mut sets: Vec<FixedBitSet> = paths
        .iter()
        .map(|p| {
            let mut b = FixedBitSet::with_capacity(n);
            for &v in p.as_ref().expect("live") {
                b.insert(v);
            }
            b
        })
        .collect();
    let mut ends: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, p) in paths.iter().enumerate() {
        let p = p.as_ref().expect("live");
        ends[p[0]].push(i);
        ends[*p.last().expect("nonempty")].push(i);
    }
    let mut changed = true;
    while changed {
        changed = false;
        for v in 0..n {
            'retry: loop {
                ends[v].retain(|&i| paths[i].is_some());
                let list = ends[v].clone();
                for a in 0..list.len() {
                    for b in a + 1..list.len() {
                        let (i, j) = (list[a], list[b]);
                        if i == j || sets[i].intersection(&sets[j]).count() != 1 {
                            continue;
                        }
                        let mut left = paths[i].take().expect("live");
                        let mut right = paths[j].take().expect("live");
                        if left[0] == v {
                            left.reverse();
                        }
                        if right[0] != v {
                            right.reverse();
                        }
                        left.extend_from_slice(&right[1..]);
                        let other = sets[j].clone();
                        sets[i].union_with(&other);
                        ends[v].retain(|&k| k != i && k != j);
                        let (s, t) = (left[0], *left.last().expect("nonempty"));
                        for end in [s, t] {
                            ends[end].retain(|&k| k != j);
                            if !ends[end].contains(&i) {
                                ends[end].push(i);
                            }
                        }
                        paths[i] = Some(left);
                        changed = true;
                        continue 'retry;
                    }
                }
                break;
            }
        }
    }
    paths.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, Family};
    use proptest::prelude::*;

    /// Independent check: edge-disjoint exact cover by simple paths.
    fn assert_exact_cover(g: &Graph, dec: &PathDecomposition) {
        let mut seen = std::collections::BTreeSet::new();
        for p in dec.paths() {
            let vs = p.vertices();
            let distinct: std::collections::BTreeSet<_> = vs.iter().collect();
            assert_eq!(distinct.len(), vs.len(), "path {p} not simple");
            for w in vs.windows(2) {
                assert!(g.has_edge(w[0], w[1]));
                assert!(seen.insert(Edge::new(w[0], w[1])), "edge reused");
            }
        }
        assert_eq!(seen.len(), g.edge_count());
        for &e in g.edges() {
            let id = dec.path_of(e).expect("indexed");
            assert!(dec.paths()[id].edges().any(|f| f == e));
        }
    }

    #[test]
    fn empty_graph_has_no_paths() {
        assert!(decompose_into_paths(&Graph::empty(4)).is_empty());
    }

    #[test]
    fn triangle() {
        let g = generate(&Family::Complete(3), 0).unwrap();
        let dec = decompose_into_paths(&g);
        assert_exact_cover(&g, &dec);
        assert_eq!(dec.len(), 2);
    }

    #[test]
    fn star() {
        let g = generate(&Family::Star(4), 0).unwrap();
        let dec = decompose_into_paths(&g);
        assert_exact_cover(&g, &dec);
        assert_eq!(dec.len(), 2);
    }

    #[test]
    fn bounded_examples() {
        let k4 = generate(&Family::Complete(4), 0).unwrap();
        let dec = decompose_into_bounded_paths(&k4, 2);
        assert_exact_cover(&k4, &dec);
        assert!(dec.len() <= 3 + 4);
        assert!(dec.paths().iter().all(|p| p.len() <= 2));

        let p10 = generate(&Family::Path(10), 0).unwrap();
        let dec = decompose_into_bounded_paths(&p10, 3);
        let lens: Vec<usize> = dec.paths().iter().map(Path::len).collect();
        assert_eq!(lens, vec![3, 3, 3]);
    }

    #[test]
    fn dense_graphs_stay_well_under_n() {
        for (n, seed) in [(50, 1), (100, 2), (200, 3)] {
            let g = generate(&Family::Gnp(n, 0.5), seed).unwrap();
            let dec = decompose_into_paths(&g);
            assert_exact_cover(&g, &dec);
            assert!(dec.len() <= n / 2 + 1, "{} paths for n = {n}", dec.len());
        }
        let k = generate(&Family::Complete(31), 0).unwrap();
        assert!(decompose_into_paths(&k).len() <= 31);
    }

    #[test]
    fn masked_graph_bound_uses_live_count() {
        let g = generate(&Family::Complete(10), 0).unwrap();
        let h = g.induced(&(0..5).collect());
        let dec = decompose_into_paths(&h);
        assert_exact_cover(&h, &dec);
        assert!(dec.len() <= 5);
    }

    #[test]
    fn absorb_splits_through_shared_vertex() {
        let mut paths = vec![vec![0, 1, 2]];
        absorb_cycle(&mut paths, vec![1, 3, 4, 1], 5);
        assert_eq!(paths, vec![vec![0, 1, 3, 4], vec![4, 1, 2]]);
    }

    proptest! {
        #[test]
        fn decomposition_bounds(n in 1usize..40, p in 0.05f64..0.95, seed in 0u64..1000, d in 1usize..8) {
            let g = generate(&Family::Gnp(n, p), seed).unwrap();
            let dec = decompose_into_paths(&g);
            assert_exact_cover(&g, &dec);
            prop_assert!(dec.len() <= n);
            let b = decompose_into_bounded_paths(&g, d);
            assert_exact_cover(&g, &b);
            prop_assert!(b.len() <= g.edge_count().div_ceil(d) + n);
            prop_assert!(b.paths().iter().all(|q| q.len() <= d));
        }
    }
}

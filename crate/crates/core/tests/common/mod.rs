//! Independent reference implementations used by the integration tests.
//!
//! Nothing here calls into the library's own checkers; each routine recomputes
//! its answer from plain edge lists.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use seppath::{Graph, Mode};

pub type E = (usize, usize);

pub fn key(a: usize, b: usize) -> E {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

pub fn path_edges(vs: &[usize]) -> BTreeSet<E> {
    vs.windows(2).map(|w| key(w[0], w[1])).collect()
}

pub fn edges_of(g: &Graph) -> Vec<E> {
    g.edges().iter().map(|e| (e.0, e.1)).collect()
}

/// Adjacency lists rebuilt from the edge list.
pub fn adjacency(n: usize, edges: &[E]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    adj
}

/// Whether `vs` is a simple path with at least one edge, all of whose edges are in `edges`.
pub fn is_simple_path_in(vs: &[usize], edges: &BTreeSet<E>) -> bool {
    let distinct: HashSet<usize> = vs.iter().copied().collect();
    vs.len() >= 2 && distinct.len() == vs.len() && vs.windows(2).all(|w| edges.contains(&key(w[0], w[1])))
}

/// Definitional separation check by a double loop over target pairs.
///
/// Strong: every ordered pair (e, f) of distinct target edges has a path with e
/// and without f, and a lone target edge must lie on some path. Weak: every
/// unordered pair has a path containing exactly one of them.
pub fn naive_separates(target: &[E], paths: &[Vec<usize>], mode: Mode) -> bool {
    let sets: Vec<BTreeSet<E>> = paths.iter().map(|p| path_edges(p)).collect();
    match mode {
        Mode::Strong => {
            if target.len() == 1 {
                return sets.iter().any(|s| s.contains(&target[0]));
            }
            for e in target {
                for f in target {
                    if e != f && !sets.iter().any(|s| s.contains(e) && !s.contains(f)) {
                        return false;
                    }
                }
            }
            true
        }
        Mode::Weak => {
            for (i, e) in target.iter().enumerate() {
                for f in &target[i + 1..] {
                    if !sets.iter().any(|s| s.contains(e) != s.contains(f)) {
                        return false;
                    }
                }
            }
            true
        }
    }
}

/// Whether the pair (e, f) is genuinely unseparated (f = None: e is uncovered).
pub fn pair_unseparated(e: E, f: Option<E>, paths: &[Vec<usize>], mode: Mode) -> bool {
    let sets: Vec<BTreeSet<E>> = paths.iter().map(|p| path_edges(p)).collect();
    match (f, mode) {
        (None, _) => !sets.iter().any(|s| s.contains(&e)),
        (Some(f), Mode::Strong) => !sets.iter().any(|s| s.contains(&e) && !s.contains(&f)),
        (Some(f), Mode::Weak) => !sets.iter().any(|s| s.contains(&e) != s.contains(&f)),
    }
}

/// Every simple path of the graph, once per vertex set orientation.
pub fn all_simple_paths(n: usize, edges: &[E]) -> Vec<Vec<usize>> {
    let adj = adjacency(n, edges);
    let mut out = Vec::new();
    fn go(adj: &[Vec<usize>], stack: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let last = *stack.last().unwrap();
        for &y in &adj[last] {
            if stack.contains(&y) {
                continue;
            }
            stack.push(y);
            if stack[0] < y {
                out.push(stack.clone());
            }
            go(adj, stack, out);
            stack.pop();
        }
    }
    for s in 0..n {
        go(&adj, &mut vec![s], &mut out);
    }
    out
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Whether some `k`-subset of `paths` separates `target`, by plain enumeration.
/// `None` when the enumeration would exceed `limit` subsets.
pub fn some_subset_separates(target: &[E], paths: &[Vec<usize>], k: usize, mode: Mode, limit: f64) -> Option<bool> {
    if k > paths.len() {
        return Some(false);
    }
    if binom(paths.len(), k) > limit {
        return None;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let chosen: Vec<Vec<usize>> = idx.iter().map(|&i| paths[i].clone()).collect();
        if naive_separates(target, &chosen, mode) {
            return Some(true);
        }
        // Next combination in lexicographic order.
        let mut i = k;
        loop {
            if i == 0 {
                return Some(false);
            }
            i -= 1;
            if idx[i] < paths.len() - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn connected(n: usize, edges: &[E]) -> bool {
    if n == 0 {
        return true;
    }
    let adj = adjacency(n, edges);
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    seen.into_iter().all(|b| b)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// One representative per isomorphism class of connected graphs on `n` vertices.
pub fn connected_graphs(n: usize) -> Vec<Vec<E>> {
    let pairs: Vec<E> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let index: BTreeMap<E, usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let perms = permutations(n);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << pairs.len()) {
        let edges: Vec<E> = (0..pairs.len()).filter(|i| mask >> i & 1 == 1).map(|i| pairs[i]).collect();
        if !connected(n, &edges) {
            continue;
        }
        let canon = perms
            .iter()
            .map(|p| edges.iter().map(|&(a, b)| 1u32 << index[&key(p[a], p[b])]).sum::<u32>())
            .min()
            .unwrap();
        if seen.insert(canon) {
            out.push(edges);
        }
    }
    out
}

/// BFS distances from a vertex set.
pub fn bfs(adj: &[Vec<usize>], sources: &[usize]) -> Vec<usize> {
    let mut dist = vec![usize::MAX; adj.len()];
    let mut queue = VecDeque::new();
    for &s in sources {
        dist[s] = 0;
        queue.push_back(s);
    }
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    dist
}

/// Owner path of every edge of a decomposition given as vertex lists.
pub fn owners(decomposition: &[Vec<usize>]) -> BTreeMap<E, usize> {
    let mut m = BTreeMap::new();
    for (i, p) in decomposition.iter().enumerate() {
        for e in path_edges(p) {
            assert!(m.insert(e, i).is_none(), "decomposition reuses {e:?}");
        }
    }
    m
}

/// Decomposition check: simple paths inside the graph covering each edge exactly once.
pub fn exact_decomposition(edges: &[E], decomposition: &[Vec<usize>]) -> bool {
    let set: BTreeSet<E> = edges.iter().copied().collect();
    let mut used = BTreeSet::new();
    for p in decomposition {
        if !is_simple_path_in(p, &set) {
            return false;
        }
        for e in path_edges(p) {
            if !used.insert(e) {
                return false;
            }
        }
    }
    used == set
}

pub fn audit_path_rule(owner: &BTreeMap<E, usize>, matchings: &[Vec<E>]) -> bool {
    matchings.iter().all(|m| {
        let ps: Vec<usize> = m.iter().map(|e| owner[e]).collect();
        ps.iter().collect::<BTreeSet<_>>().len() == ps.len()
    })
}

pub fn audit_vertex_disjoint(matchings: &[Vec<E>]) -> bool {
    matchings.iter().all(|m| {
        let vs: BTreeSet<usize> = m.iter().flat_map(|&(a, b)| [a, b]).collect();
        vs.len() == 2 * m.len()
    })
}

/// At most ⌈2^r / divisor⌉ edges per matching with min endpoint degree in [2^{r−1}, 2^r).
pub fn audit_buckets(degree: &[usize], matchings: &[Vec<E>], divisor: f64) -> bool {
    matchings.iter().all(|m| {
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for &(a, b) in m {
            let dbar = degree[a].min(degree[b]);
            let mut r = 0;
            while (1usize << r) <= dbar {
                r += 1;
            }
            *counts.entry(r).or_default() += 1;
        }
        counts.iter().all(|(&r, &c)| c as f64 <= ((1u64 << r) as f64 / divisor).ceil())
    })
}

/// Groups: at most `d` members, members pairwise vertex-disjoint, each decomposition
/// path met in at most one edge.
pub fn audit_groups(owner: &BTreeMap<E, usize>, groups: &[Vec<Vec<usize>>], d: usize) -> bool {
    groups.iter().all(|g| {
        let mut vs = BTreeSet::new();
        let mut ps = BTreeSet::new();
        g.len() <= d.max(1)
            && g.iter().all(|m| m.iter().all(|&v| vs.insert(v)))
            && g.iter().flat_map(|m| path_edges(m)).all(|e| ps.insert(owner[&e]))
    })
}

/// Decomposition paths of distinct matching edges are at distance at least 2·r₀.
pub fn audit_spread(adj: &[Vec<usize>], decomposition: &[Vec<usize>], owner: &BTreeMap<E, usize>, matchings: &[Vec<E>], r0: usize) -> bool {
    matchings.iter().all(|m| {
        m.iter().enumerate().all(|(i, e)| {
            let dist = bfs(adj, &decomposition[owner[e]]);
            m[i + 1..].iter().all(|f| decomposition[owner[f]].iter().all(|&v| dist[v] >= 2 * r0))
        })
    })
}

/// Exhaustive expander check on a small graph, by subset enumeration.
///
/// For each X with 1 ≤ |X| ≤ 2n/3, deleting k edges can hide a neighbour y only by
/// deleting all of its edges into X, so the adversary removes the cheapest
/// neighbours first.
pub fn is_expander_exhaustive(n_label: usize, live: &[usize], edges: &[E], epsilon: f64, s: f64, t: f64) -> bool {
    let n = live.len();
    let adj = adjacency(n_label, edges);
    for mask in 1u64..(1u64 << n) {
        let size = mask.count_ones() as usize;
        if 3 * size > 2 * n {
            continue;
        }
        let x: BTreeSet<usize> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| live[i]).collect();
        let mut cost: BTreeMap<usize, usize> = BTreeMap::new();
        for &v in &x {
            for &y in &adj[v] {
                if !x.contains(&y) {
                    *cost.entry(y).or_default() += 1;
                }
            }
        }
        let t_eff = t.min(2.0 * n as f64 / 3.0);
        let budget = (s * (size as f64).min(t_eff) + 1e-9).floor() as usize;
        let mut costs: Vec<usize> = cost.values().copied().collect();
        costs.sort_unstable();
        let (mut spent, mut hidden) = (0, 0);
        for c in costs {
            if spent + c > budget {
                break;
            }
            spent += c;
            hidden += 1;
        }
        let remaining = (cost.len() - hidden) as f64;
        let threshold = epsilon * size as f64 / ((size as f64).log2() + 1.0).powi(2);
        if remaining < threshold - 1e-9 {
            return false;
        }
    }
    true
}

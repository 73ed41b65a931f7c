//! Checks for the structural rules of matching families.
//!
//! Every check recomputes its quantities from the graph and decomposition instead
//! of trusting the builders' bookkeeping.

use std::collections::{BTreeMap, BTreeSet};

use crate::decomp::PathDecomposition;
use crate::graph::{Edge, Graph, Path, VertexSet};
use crate::strategies::matchings::{bucket_quota, degree_bucket, min_endpoint_degree};

/// Every matching meets each decomposition path in at most one edge.
pub fn path_rule(g: &Graph, decomp: &PathDecomposition, matchings: &[Vec<Edge>]) -> Result<(), String> {
    for (k, m) in matchings.iter().enumerate() {
        let mut seen = BTreeMap::new();
        for &e in m {
            if !g.contains_edge(e) {
                return Err(format!("matching {k}: {e} is not an edge"));
            }
            let p = decomp.path_of(e).ok_or_else(|| format!("matching {k}: {e} is not decomposed"))?;
            if let Some(f) = seen.insert(p, e) {
                return Err(format!("matching {k}: {f} and {e} share decomposition path {p}"));
            }
        }
    }
    Ok(())
}

/// Every matching is a set of pairwise vertex-disjoint edges.
pub fn vertex_disjoint(matchings: &[Vec<Edge>]) -> Result<(), String> {
    for (k, m) in matchings.iter().enumerate() {
        let mut seen = VertexSet::new();
        for e in m {
            if !seen.insert(e.0) || !seen.insert(e.1) {
                return Err(format!("matching {k}: {e} reuses a vertex"));
            }
        }
    }
    Ok(())
}

/// The matchings partition E(G).
pub fn exact_cover(g: &Graph, matchings: &[Vec<Edge>]) -> Result<(), String> {
    let mut seen = BTreeSet::new();
    for e in matchings.iter().flatten() {
        if !seen.insert(*e) {
            return Err(format!("{e} appears twice"));
        }
    }
    match g.edges().iter().find(|e| !seen.contains(e)) {
        Some(e) => Err(format!("{e} is not covered")),
        None if seen.len() != g.edge_count() => Err("matchings contain foreign edges".into()),
        None => Ok(()),
    }
}

/// Per matching and bucket r, at most ⌈2^r/divisor⌉ edges with d̄ in [2^{r−1}, 2^r).
pub fn degree_buckets(degrees: &Graph, matchings: &[Vec<Edge>], divisor: f64) -> Result<(), String> {
    for (k, m) in matchings.iter().enumerate() {
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for &e in m {
            *counts.entry(degree_bucket(min_endpoint_degree(degrees, e))).or_default() += 1;
        }
        for (r, c) in counts {
            if c > bucket_quota(r, divisor) {
                return Err(format!("matching {k}: {c} edges in bucket {r}, quota {}", bucket_quota(r, divisor)));
            }
        }
    }
    Ok(())
}

/// Groups have at most `d` pairwise vertex-disjoint members and meet each
/// decomposition path in at most one edge.
pub fn groups(decomp: &PathDecomposition, groups: &[Vec<Path>], d: usize) -> Result<(), String> {
    for (k, group) in groups.iter().enumerate() {
        if group.len() > d.max(1) {
            return Err(format!("group {k} has {} members, bound {d}", group.len()));
        }
        let mut verts = VertexSet::new();
        let mut paths = BTreeSet::new();
        for member in group {
            for &v in member.vertices() {
                if !verts.insert(v) {
                    return Err(format!("group {k}: members share vertex {v}"));
                }
            }
            for e in member.edges() {
                let p = decomp.path_of(e).ok_or_else(|| format!("group {k}: {e} is not decomposed"))?;
                if !paths.insert(p) {
                    return Err(format!("group {k}: two edges on decomposition path {p}"));
                }
            }
        }
    }
    Ok(())
}

/// Decomposition paths of distinct edges of a matching are at distance ≥ 2·r₀ in `g`.
pub fn spread(g: &Graph, decomp: &PathDecomposition, matchings: &[Vec<Edge>], r0: usize) -> Result<(), String> {
    for (k, m) in matchings.iter().enumerate() {
        for (i, &e) in m.iter().enumerate() {
            let pe = decomp.path_of(e).ok_or_else(|| format!("matching {k}: {e} is not decomposed"))?;
            let dist = g.distances_from(decomp.paths()[pe].vertices());
            for &f in &m[i + 1..] {
                let pf = decomp.path_of(f).ok_or_else(|| format!("matching {k}: {f} is not decomposed"))?;
                let gap = decomp.paths()[pf].vertices().iter().map(|&v| dist[v]).min().unwrap_or(usize::MAX);
                if gap < 2 * r0 {
                    return Err(format!("matching {k}: paths of {e} and {f} are {gap} apart, need {}", 2 * r0));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn audits_reject_violations() {
        let g = Graph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let d = PathDecomposition::from_paths(vec![Path::new(vec![0, 1, 2, 3]).unwrap()]).unwrap();
        let m = vec![vec![Edge::new(0, 1), Edge::new(2, 3)]];
        assert!(path_rule(&g, &d, &m).is_err());
        assert!(vertex_disjoint(&m).is_ok());
        assert!(vertex_disjoint(&[vec![Edge::new(0, 1), Edge::new(1, 2)]]).is_err());
        assert!(exact_cover(&g, &m).is_err());
        assert!(spread(&g, &d, &m, 1).is_err());
        assert!(degree_buckets(&g, &m, 200.0).is_err());
        assert!(degree_buckets(&g, &m, 1.0).is_ok());
        let twice = vec![vec![Path::single_edge(Edge::new(0, 1)), Path::single_edge(Edge::new(2, 3))]];
        assert!(groups(&d, &twice, 4).is_err());
    }
}

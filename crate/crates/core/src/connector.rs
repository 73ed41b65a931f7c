//! Joining vertex pairs through a designated vertex set, and completing a path
//! forest into a single path by local search.

use std::collections::{HashMap, VecDeque};

use rand::seq::SliceRandom;
use thiserror::Error;

use crate::graph::{Edge, EdgeSet, Graph, Path, PathForest, Vertex, VertexSet};
use crate::rng::{derive_seed, rng_from};

pub const DEFAULT_MAX_LEN: usize = 24;
pub const DEFAULT_RETRIES: usize = 20;

#[derive(Clone, Debug)]
pub struct ConnectionRequest<'a> {
    pub host: &'a Graph,
    /// Interiors must lie here.
    pub through: VertexSet,
    pub pairs: Vec<(Vertex, Vertex)>,
    pub max_len: usize,
    pub seed: u64,
    pub retries: usize,
}

impl<'a> ConnectionRequest<'a> {
    pub fn new(host: &'a Graph, through: VertexSet, pairs: Vec<(Vertex, Vertex)>, seed: u64) -> ConnectionRequest<'a> {
        ConnectionRequest { host, through, pairs, max_len: DEFAULT_MAX_LEN, seed, retries: DEFAULT_RETRIES }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConnectError {
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("no admissible connection for pair {0:?}")]
    NoConnection((Vertex, Vertex)),
}

/// Paths joining each pair, with interiors inside `through`, pairwise disjoint
/// and avoiding every endpoint. Returned in the order of `req.pairs`.
///
/// Pairs are routed one after another along shortest admissible paths in a
/// random order; a dead end restarts with a fresh order, and after the retries a
/// final pass always routes the pair with the fewest free interior choices next.
pub fn connect_pairs_through(req: &ConnectionRequest) -> Result<Vec<Path>, ConnectError> {
    let host = req.host;
    let mut endpoint = vec![false; host.n()];
    for &(x, y) in &req.pairs {
        for v in [x, y] {
            if v >= host.n() || !host.is_live(v) {
                return Err(ConnectError::InvalidRequest(format!("vertex {v} is not in the host")));
            }
            if endpoint[v] {
                return Err(ConnectError::InvalidRequest(format!("vertex {v} is used by two endpoints")));
            }
            endpoint[v] = true;
        }
    }
    let mut order: Vec<usize> = (0..req.pairs.len()).collect();
    let mut last_failure = None;
    for attempt in 0..=req.retries {
        let mut rng = rng_from(derive_seed(req.seed, &[attempt as u64]));
        order.shuffle(&mut rng);
        match route_in_order(req, &endpoint, &order) {
            Ok(paths) => return Ok(paths),
            Err(pair) => last_failure = Some(pair),
        }
    }
    route_fewest_alternatives(req, &endpoint).map_err(|pair| ConnectError::NoConnection(last_failure.unwrap_or(pair)))
}

fn route_in_order(req: &ConnectionRequest, endpoint: &[bool], order: &[usize]) -> Result<Vec<Path>, (Vertex, Vertex)> {
    let mut used = vec![false; req.host.n()];
    let mut out: Vec<Option<Path>> = vec![None; req.pairs.len()];
    for &i in order {
        let (x, y) = req.pairs[i];
        let p = shortest_through(req, endpoint, &used, x, y).ok_or((x, y))?;
        for &v in &p.vertices()[1..p.vertices().len() - 1] {
            used[v] = true;
        }
        out[i] = Some(p);
    }
    Ok(out.into_iter().map(|p| p.expect("every pair routed")).collect())
}

fn route_fewest_alternatives(req: &ConnectionRequest, endpoint: &[bool]) -> Result<Vec<Path>, (Vertex, Vertex)> {
    let host = req.host;
    let mut used = vec![false; host.n()];
    let mut out: Vec<Option<Path>> = vec![None; req.pairs.len()];
    let mut left: Vec<usize> = (0..req.pairs.len()).collect();
    let free = |v: Vertex, used: &[bool]| req.through.contains(&v) && !endpoint[v] && !used[v];
    while !left.is_empty() {
        let choices = |i: usize, used: &[bool]| {
            let (x, y) = req.pairs[i];
            let direct = usize::from(host.has_edge(x, y));
            let fx = host.neighbors(x).iter().filter(|&&v| free(v, used)).count();
            let fy = host.neighbors(y).iter().filter(|&&v| free(v, used)).count();
            direct + fx.min(fy)
        };
        let pos = (0..left.len()).min_by_key(|&k| (choices(left[k], &used), left[k])).expect("nonempty");
        let i = left.swap_remove(pos);
        let (x, y) = req.pairs[i];
        let p = shortest_through(req, endpoint, &used, x, y).ok_or((x, y))?;
        for &v in &p.vertices()[1..p.vertices().len() - 1] {
            used[v] = true;
        }
        out[i] = Some(p);
    }
    Ok(out.into_iter().map(|p| p.expect("every pair routed")).collect())
}

fn shortest_through(req: &ConnectionRequest, endpoint: &[bool], used: &[bool], x: Vertex, y: Vertex) -> Option<Path> {
    let host = req.host;
    if host.has_edge(x, y) {
        return Some(Path::new(vec![x, y]).expect("distinct endpoints"));
    }
    let mut prev = vec![usize::MAX; host.n()];
    let mut dist = vec![usize::MAX; host.n()];
    let mut queue = VecDeque::new();
    dist[x] = 0;
    queue.push_back(x);
    while let Some(u) = queue.pop_front() {
        // u is x or an interior vertex; the path x..u-y has length dist[u] + 1.
        if dist[u] + 1 > req.max_len {
            break;
        }
        for &w in host.neighbors(u) {
            if w == y && u != x {
                let mut vs = vec![y, u];
                let mut cur = u;
                while prev[cur] != usize::MAX {
                    cur = prev[cur];
                    vs.push(cur);
                }
                vs.reverse();
                return Some(Path::new(vs).expect("bfs path is simple"));
            }
            if dist[w] == usize::MAX && w != x && req.through.contains(&w) && !endpoint[w] && !used[w] {
                dist[w] = dist[u] + 1;
                prev[w] = u;
                queue.push_back(w);
            }
        }
    }
    None
}

/// Limits for the completion search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompletionLimits {
    pub max_moves: usize,
}

impl Default for CompletionLimits {
    fn default() -> CompletionLimits {
        CompletionLimits { max_moves: 10_000 }
    }
}

#[derive(Clone, Debug)]
pub struct CompletionProblem<'a> {
    pub host: &'a Graph,
    pub core: PathForest,
    pub forbidden_edges: EdgeSet,
    pub forbidden_vertices: VertexSet,
    pub limits: CompletionLimits,
}

/// (components, total connector length); accepted moves decrease it lexicographically.
pub type Measure = (usize, usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoveKind {
    /// A new connector joins two components.
    Join,
    /// An existing connector is replaced by a strictly shorter one.
    Reroute,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MoveRecord {
    pub kind: MoveKind,
    pub before: Measure,
    pub after: Measure,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Completion {
    Complete { path: Path, trace: Vec<MoveRecord> },
    /// No improving move is left; the current forest (containing the core) is returned.
    Stuck { forest: PathForest, trace: Vec<MoveRecord> },
}

impl Completion {
    pub fn trace(&self) -> &[MoveRecord] {
        match self {
            Completion::Complete { trace, .. } | Completion::Stuck { trace, .. } => trace,
        }
    }

    pub fn path(&self) -> Option<&Path> {
        match self {
            Completion::Complete { path, .. } => Some(path),
            Completion::Stuck { .. } => None,
        }
    }
}

/// Local search state: vertex sequences of the current components, plus the
/// connectors that were added between them.
struct Search<'a> {
    prob: &'a CompletionProblem<'a>,
    chains: Vec<Vec<Vertex>>,
    connectors: Vec<Vec<Vertex>>,
    in_forest: Vec<bool>,
}

/// A single path containing every core edge and avoiding the forbidden edges and
/// vertices. Connectors run through vertices outside the core.
pub fn complete_to_path(prob: &CompletionProblem) -> Result<Completion, ConnectError> {
    let host = prob.host;
    for p in prob.core.paths() {
        p.check_in(host).map_err(|e| ConnectError::InvalidRequest(e.to_string()))?;
        if let Some(e) = p.edges().find(|e| prob.forbidden_edges.contains(e)) {
            return Err(ConnectError::InvalidRequest(format!("core edge {e} is forbidden")));
        }
        if let Some(&v) = p.vertices().iter().find(|v| prob.forbidden_vertices.contains(v)) {
            return Err(ConnectError::InvalidRequest(format!("core vertex {v} is forbidden")));
        }
    }
    let mut in_forest = vec![false; host.n()];
    for v in prob.core.vertices() {
        in_forest[v] = true;
    }
    let mut search = Search {
        prob,
        chains: prob.core.paths().iter().map(|p| p.vertices().to_vec()).collect(),
        connectors: Vec::new(),
        in_forest,
    };
    let mut trace = Vec::new();
    while search.chains.len() > 1 && trace.len() < prob.limits.max_moves {
        let before = search.measure();
        let kind = if search.join() {
            MoveKind::Join
        } else if search.reroute() {
            MoveKind::Reroute
        } else {
            break;
        };
        let after = search.measure();
        assert!(after < before, "{kind:?} did not improve the measure: {before:?} -> {after:?}");
        log::trace!("completion move {kind:?}: {before:?} -> {after:?}");
        trace.push(MoveRecord { kind, before, after });
    }
    let paths: Vec<Path> = search.chains.into_iter().map(|c| Path::new(c).expect("chains are simple")).collect();
    if paths.len() == 1 {
        let path = paths.into_iter().next().expect("one chain");
        Ok(Completion::Complete { path, trace })
    } else {
        let forest = PathForest::new(paths).expect("chains are disjoint");
        Ok(Completion::Stuck { forest, trace })
    }
}

impl Search<'_> {
    fn measure(&self) -> Measure {
        (self.chains.len(), self.connectors.iter().map(|c| c.len() - 1).sum())
    }

    fn edge_ok(&self, a: Vertex, b: Vertex) -> bool {
        !self.prob.forbidden_edges.contains(&Edge::new(a, b))
    }

    fn free(&self, v: Vertex) -> bool {
        !self.in_forest[v] && !self.prob.forbidden_vertices.contains(&v)
    }

    /// Multi-source BFS from all chain ends through free vertices; the first
    /// contact between the waves of two different chains gives the connector.
    fn join(&mut self) -> bool {
        let host = self.prob.host;
        let n = host.n();
        let mut label = vec![usize::MAX; n];
        let mut prev = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        let mut ends: Vec<(Vertex, usize)> = Vec::new();
        for (ci, c) in self.chains.iter().enumerate() {
            ends.push((c[0], ci));
            ends.push((c[c.len() - 1], ci));
        }
        ends.sort_unstable();
        for &(v, ci) in &ends {
            label[v] = ci;
            queue.push_back(v);
        }
        let is_end: HashMap<Vertex, usize> = ends.iter().copied().collect();
        while let Some(u) = queue.pop_front() {
            for &w in host.neighbors(u) {
                if !self.edge_ok(u, w) {
                    continue;
                }
                if label[w] != usize::MAX && label[w] != label[u] && (self.free(w) || is_end.contains_key(&w)) {
                    let mut left = trace_back(&prev, u);
                    let right = trace_back(&prev, w);
                    left.reverse();
                    left.extend(right);
                    self.apply_join(left);
                    return true;
                }
                if label[w] == usize::MAX && self.free(w) {
                    label[w] = label[u];
                    prev[w] = u;
                    queue.push_back(w);
                }
            }
        }
        false
    }

    /// `conn` runs from an end of one chain to an end of another.
    fn apply_join(&mut self, conn: Vec<Vertex>) {
        let (a, b) = (conn[0], conn[conn.len() - 1]);
        let ca = self.chain_with_end(a);
        let cb = self.chain_with_end(b);
        debug_assert_ne!(ca, cb);
        let mut left = self.chains[ca].clone();
        if left[0] == a {
            left.reverse();
        }
        let mut right = self.chains[cb].clone();
        if right[right.len() - 1] == b {
            right.reverse();
        }
        for &v in &conn[1..conn.len() - 1] {
            self.in_forest[v] = true;
        }
        left.extend_from_slice(&conn[1..conn.len() - 1]);
        left.extend(right);
        let (lo, hi) = if ca < cb { (ca, cb) } else { (cb, ca) };
        self.chains.remove(hi);
        self.chains[lo] = left;
        self.connectors.push(conn);
    }

    fn chain_with_end(&self, v: Vertex) -> usize {
        self.chains.iter().position(|c| c[0] == v || c[c.len() - 1] == v).expect("vertex is a chain end")
    }

    /// Replace the first connector (scanning by least end vertex) that admits a
    /// strictly shorter route through free vertices and its own interior.
    fn reroute(&mut self) -> bool {
        let mut idx: Vec<usize> = (0..self.connectors.len()).collect();
        idx.sort_by_key(|&i| {
            let c = &self.connectors[i];
            (c[0].min(c[c.len() - 1]), i)
        });
        for i in idx {
            let old = self.connectors[i].clone();
            if old.len() <= 2 {
                continue;
            }
            for &v in &old[1..old.len() - 1] {
                self.in_forest[v] = false;
            }
            let shorter = self.shortest_free(old[0], old[old.len() - 1], old.len() - 1);
            match shorter {
                Some(new) => {
                    for &v in &new[1..new.len() - 1] {
                        self.in_forest[v] = true;
                    }
                    self.splice(&old, &new);
                    self.connectors[i] = new;
                    return true;
                }
                None => {
                    for &v in &old[1..old.len() - 1] {
                        self.in_forest[v] = true;
                    }
                }
            }
        }
        false
    }

    /// Shortest a..b path through free vertices, if its length is below `limit`.
    fn shortest_free(&self, a: Vertex, b: Vertex, limit: usize) -> Option<Vec<Vertex>> {
        let host = self.prob.host;
        let mut prev = vec![usize::MAX; host.n()];
        let mut dist = vec![usize::MAX; host.n()];
        dist[a] = 0;
        let mut queue = VecDeque::from([a]);
        while let Some(u) = queue.pop_front() {
            if dist[u] + 1 >= limit {
                break;
            }
            for &w in host.neighbors(u) {
                if !self.edge_ok(u, w) {
                    continue;
                }
                if w == b {
                    let mut vs = trace_back(&prev, u);
                    vs.reverse();
                    vs.push(b);
                    return Some(vs);
                }
                if dist[w] == usize::MAX && self.free(w) {
                    dist[w] = dist[u] + 1;
                    prev[w] = u;
                    queue.push_back(w);
                }
            }
        }
        None
    }

    fn splice(&mut self, old: &[Vertex], new: &[Vertex]) {
        for chain in &mut self.chains {
            for (seg, repl) in [(old.to_vec(), new.to_vec()), (rev(old), rev(new))] {
                if let Some(pos) = chain.windows(seg.len()).position(|w| w == seg.as_slice()) {
                    chain.splice(pos..pos + seg.len(), repl);
                    return;
                }
            }
        }
        unreachable!("connector is part of some chain");
    }
}

fn rev(v: &[Vertex]) -> Vec<Vertex> {
    v.iter().rev().copied().collect()
}

/// Vertices from `v` back to its BFS source.
fn trace_back(prev: &[usize], v: Vertex) -> Vec<Vertex> {
    let mut out = vec![v];
    let mut cur = v;
    while prev[cur] != usize::MAX {
        cur = prev[cur];
        out.push(cur);
    }
    out
}

/// Join components of the matching through hub vertices: for each matching edge
/// in order and each of its endpoints that is still a leaf, find the least unused
/// hub adjacent to it and to a leaf of another component, and route through it.
pub fn extend_matching_through_hubs(host: &Graph, m: &[Edge], hubs: &VertexSet) -> PathForest {
    let mut chains: Vec<Option<VecDeque<Vertex>>> = m.iter().map(|e| Some(VecDeque::from([e.0, e.1]))).collect();
    let mut owner: HashMap<Vertex, usize> = HashMap::new();
    for (i, e) in m.iter().enumerate() {
        owner.insert(e.0, i);
        owner.insert(e.1, i);
    }
    let is_leaf = |chains: &[Option<VecDeque<Vertex>>], owner: &HashMap<Vertex, usize>, v: Vertex| {
        owner.get(&v).and_then(|&c| chains[c].as_ref()).is_some_and(|c| c.front() == Some(&v) || c.back() == Some(&v))
    };
    let mut used = VertexSet::new();
    for e in m {
        for v in [e.0, e.1] {
            if !is_leaf(&chains, &owner, v) {
                continue;
            }
            let cv = owner[&v];
            let found = host.neighbors(v).iter().filter(|h| hubs.contains(h) && !used.contains(h)).find_map(|&h| {
                host.neighbors(h)
                    .iter()
                    .copied()
                    .find(|&w| w != v && is_leaf(&chains, &owner, w) && owner[&w] != cv)
                    .map(|w| (h, w))
            });
            let Some((h, w)) = found else { continue };
            used.insert(h);
            let cw = owner[&w];
            let mut left = chains[cv].take().expect("live chain");
            let mut right = chains[cw].take().expect("live chain");
            if left.front() == Some(&v) && left.len() > 1 {
                left = left.into_iter().rev().collect();
            }
            if right.back() == Some(&w) && right.len() > 1 {
                right = right.into_iter().rev().collect();
            }
            left.push_back(h);
            left.extend(right);
            for &x in &left {
                owner.insert(x, cv);
            }
            chains[cv] = Some(left);
        }
    }
    let paths = chains.into_iter().flatten().map(|c| Path::new(c.into_iter().collect()).expect("simple chain")).collect();
    PathForest::new(paths).expect("chains are disjoint")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::decompose_into_paths;
    use crate::generate::{generate, Family};
    use crate::rng::rng_from;
    use proptest::prelude::*;
    use rand::Rng;

    fn set(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    fn check_connections(req: &ConnectionRequest, paths: &[Path]) {
        let ends: VertexSet = req.pairs.iter().flat_map(|&(x, y)| [x, y]).collect();
        let mut interiors = VertexSet::new();
        for (p, &(x, y)) in paths.iter().zip(&req.pairs) {
            p.check_in(req.host).unwrap();
            assert_eq!((p.first(), p.last()), (x, y));
            assert!(p.len() <= req.max_len);
            for &v in &p.vertices()[1..p.vertices().len() - 1] {
                assert!(req.through.contains(&v) && !ends.contains(&v));
                assert!(interiors.insert(v));
            }
        }
    }

    #[test]
    fn connect_examples() {
        let g = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        let req = ConnectionRequest::new(&g, VertexSet::new(), vec![(0, 1)], 0);
        assert_eq!(connect_pairs_through(&req).unwrap(), vec![Path::new(vec![0, 1]).unwrap()]);
        let star = generate(&Family::Star(6), 0).unwrap();
        let req = ConnectionRequest::new(&star, set(&[0]), vec![(1, 2)], 0);
        assert_eq!(connect_pairs_through(&req).unwrap(), vec![Path::new(vec![1, 0, 2]).unwrap()]);
        let req = ConnectionRequest::new(&star, set(&[0]), vec![(1, 2), (3, 4)], 0);
        assert!(matches!(connect_pairs_through(&req), Err(ConnectError::NoConnection(_))));
        let two = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        let req = ConnectionRequest::new(&two, set(&[1, 2]), vec![(0, 3)], 0);
        assert!(connect_pairs_through(&req).is_err());
        let req = ConnectionRequest::new(&two, set(&[]), vec![(0, 1), (1, 2)], 0);
        assert!(matches!(connect_pairs_through(&req), Err(ConnectError::InvalidRequest(_))));
    }

    fn problem(host: &Graph, core: Vec<Path>) -> CompletionProblem<'_> {
        CompletionProblem {
            host,
            core: PathForest::new(core).unwrap(),
            forbidden_edges: EdgeSet::new(),
            forbidden_vertices: VertexSet::new(),
            limits: CompletionLimits::default(),
        }
    }

    #[test]
    fn completion_examples() {
        let g = Graph::new(2, [(0, 1)]).unwrap();
        let out = complete_to_path(&problem(&g, vec![Path::new(vec![0, 1]).unwrap()])).unwrap();
        assert_eq!(out.path(), Some(&Path::new(vec![0, 1]).unwrap()));
        assert!(out.trace().is_empty());

        let c4 = generate(&Family::Cycle(4), 0).unwrap();
        let core = vec![Path::new(vec![0, 1]).unwrap(), Path::new(vec![2, 3]).unwrap()];
        let out = complete_to_path(&problem(&c4, core)).unwrap();
        let p = out.path().unwrap().canonical();
        let options = [Path::new(vec![0, 1, 2, 3]).unwrap(), Path::new(vec![1, 0, 3, 2]).unwrap().canonical()];
        assert!(options.contains(&p), "{p}");

        let two = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        let core = vec![Path::new(vec![0, 1]).unwrap(), Path::new(vec![2, 3]).unwrap()];
        assert!(complete_to_path(&problem(&two, core)).unwrap().path().is_none());
    }

    #[test]
    fn hubs_examples() {
        let g = Graph::new(2, [(0, 1)]).unwrap();
        let f = extend_matching_through_hubs(&g, &[Edge(0, 1)], &VertexSet::new());
        assert_eq!(f.paths(), &[Path::new(vec![0, 1]).unwrap()]);
        // a=0 b=1 c=2 d=3 h=4
        let g = Graph::new(5, [(0, 1), (2, 3), (1, 4), (4, 2)]).unwrap();
        let f = extend_matching_through_hubs(&g, &[Edge(0, 1), Edge(2, 3)], &set(&[4]));
        assert_eq!(f.paths(), &[Path::new(vec![0, 1, 4, 2, 3]).unwrap()]);
    }

    fn random_matching(g: &Graph, k: usize, rng: &mut crate::rng::Rng) -> Vec<Edge> {
        let mut edges = g.edges().to_vec();
        edges.shuffle(rng);
        let mut used = VertexSet::new();
        let mut m = Vec::new();
        for e in edges {
            if m.len() < k && !used.contains(&e.0) && !used.contains(&e.1) {
                used.insert(e.0);
                used.insert(e.1);
                m.push(e);
            }
        }
        m
    }

    proptest! {
        #[test]
        fn connections_pass_checker(seed in 0u64..300, n in 8usize..40, p in 0.1f64..0.6) {
            let g = generate(&Family::Gnp(n, p), seed).unwrap();
            let mut rng = rng_from(seed);
            let mut vs: Vec<usize> = (0..n).collect();
            vs.shuffle(&mut rng);
            let r = rng.gen_range(1..=(n / 4).max(1));
            let pairs: Vec<(usize, usize)> = (0..r).map(|i| (vs[2 * i], vs[2 * i + 1])).collect();
            let through: VertexSet = vs[2 * r..].iter().copied().collect();
            let req = ConnectionRequest::new(&g, through, pairs, seed);
            if let Ok(paths) = connect_pairs_through(&req) {
                check_connections(&req, &paths);
            }
            let again = connect_pairs_through(&req);
            prop_assert_eq!(connect_pairs_through(&req), again);
        }

        #[test]
        fn completions_are_valid(seed in 0u64..300, n in 6usize..60, p in 0.05f64..0.5, k in 1usize..7) {
            let g = generate(&Family::Gnp(n, p), seed).unwrap();
            let mut rng = rng_from(seed);
            let m = random_matching(&g, k, &mut rng);
            prop_assume!(!m.is_empty());
            let dec = decompose_into_paths(&g);
            let mut forbidden_edges = EdgeSet::new();
            for e in &m {
                let path = &dec.paths()[dec.path_of(*e).unwrap()];
                forbidden_edges.extend(path.edges().filter(|f| !m.contains(f)));
            }
            let mv: VertexSet = m.iter().flat_map(|e| [e.0, e.1]).collect();
            let forbidden_vertices: VertexSet = forbidden_edges.iter().flat_map(|e| [e.0, e.1]).filter(|v| !mv.contains(v)).collect();
            let prob = CompletionProblem {
                host: &g,
                core: PathForest::from_matching(&m).unwrap(),
                forbidden_edges: forbidden_edges.clone(),
                forbidden_vertices: forbidden_vertices.clone(),
                limits: CompletionLimits::default(),
            };
            let out = complete_to_path(&prob).unwrap();
            for w in out.trace().windows(1) {
                prop_assert!(w[0].after < w[0].before);
            }
            if let Some(path) = out.path() {
                path.check_in(&g).unwrap();
                let pe: EdgeSet = path.edges().collect();
                prop_assert!(m.iter().all(|e| pe.contains(e)));
                prop_assert!(pe.is_disjoint(&forbidden_edges));
                prop_assert!(path.vertices().iter().all(|v| !forbidden_vertices.contains(v)));
            }
        }

        #[test]
        fn hubs_extend_matchings(seed in 0u64..100, n in 6usize..40, p in 0.1f64..0.7) {
            let g = generate(&Family::Gnp(n, p), seed).unwrap();
            let mut rng = rng_from(seed);
            let m = random_matching(&g, n / 3, &mut rng);
            let mv: VertexSet = m.iter().flat_map(|e| [e.0, e.1]).collect();
            let hubs: VertexSet = (0..n).filter(|v| !mv.contains(v) && rng.gen_bool(0.5)).collect();
            let f = extend_matching_through_hubs(&g, &m, &hubs);
            prop_assert!(f.len() <= m.len());
            let fe = f.edges();
            prop_assert!(m.iter().all(|e| fe.contains(e)));
            for path in f.paths() {
                path.check_in(&g).unwrap();
            }
            let used_hubs: Vec<usize> = f.vertices().into_iter().filter(|v| !mv.contains(v)).collect();
            prop_assert!(used_hubs.iter().all(|h| hubs.contains(h)));
        }
    }
}

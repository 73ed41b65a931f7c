//! Simple undirected graphs over a fixed vertex label space, plus paths and path forests.
//!
//! Subgraph views keep the parent's labels and carry a liveness mask, so a
//! vertex keeps its identity through every nested restriction. `order()` counts
//! live vertices only.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

pub type Vertex = usize;
pub type VertexSet = BTreeSet<Vertex>;
pub type EdgeSet = BTreeSet<Edge>;

/// An undirected edge stored as `(min, max)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(pub Vertex, pub Vertex);

impl Edge {
    /// Canonical edge between two distinct vertices.
    pub fn new(a: Vertex, b: Vertex) -> Edge {
        assert_ne!(a, b, "self-loop");
        if a < b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn contains(self, v: Vertex) -> bool {
        self.0 == v || self.1 == v
    }

    /// The endpoint opposite `v`.
    pub fn other(self, v: Vertex) -> Vertex {
        if self.0 == v {
            self.1
        } else {
            debug_assert_eq!(self.1, v);
            self.0
        }
    }

    pub fn shares_vertex(self, f: Edge) -> bool {
        self.contains(f.0) || self.contains(f.1)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: Vertex },
    #[error("line {line}: malformed edge line {text:?}")]
    Malformed { line: usize, text: String },
    #[error("vertex {vertex} out of range for n={n}")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("vertex sets overlap at {0}")]
    Overlap(Vertex),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("path forest components share vertex {0}")]
    ForestOverlap(Vertex),
}

/// Immutable simple undirected graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    live: Vec<bool>,
    live_count: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<Vertex>>,
}

impl Graph {
    /// Graph on `0..n` with every vertex live. Duplicate pairs collapse.
    pub fn new<I>(n: usize, pairs: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut edges = Vec::new();
        for (line, (u, v)) in pairs.into_iter().enumerate() {
            if u == v {
                return Err(GraphError::SelfLoop { line: line + 1, vertex: u });
            }
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            edges.push(Edge::new(u, v));
        }
        Ok(Self::build(vec![true; n], edges))
    }

    /// Edgeless graph with every vertex live.
    pub fn empty(n: usize) -> Graph {
        Self::build(vec![true; n], Vec::new())
    }

    /// Build from a liveness mask and edges whose endpoints are live.
    fn build(live: Vec<bool>, mut edges: Vec<Edge>) -> Graph {
        edges.sort_unstable();
        edges.dedup();
        let mut adj = vec![Vec::new(); live.len()];
        for e in &edges {
            debug_assert!(live[e.0] && live[e.1]);
            adj[e.0].push(e.1);
            adj[e.1].push(e.0);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let live_count = live.iter().filter(|&&b| b).count();
        Graph { live, live_count, edges, adj }
    }

    /// Same label space and liveness mask, different edge set (a subset of live pairs).
    pub fn with_edges<I: IntoIterator<Item = Edge>>(&self, edges: I) -> Graph {
        let edges: Vec<Edge> = edges.into_iter().collect();
        for e in &edges {
            assert!(self.live[e.0] && self.live[e.1], "edge {e} touches a dead vertex");
        }
        Self::build(self.live.clone(), edges)
    }

    /// Size of the label space.
    pub fn n(&self) -> usize {
        self.live.len()
    }

    /// Number of live vertices, written |G|.
    pub fn order(&self) -> usize {
        self.live_count
    }

    pub fn is_live(&self, v: Vertex) -> bool {
        v < self.live.len() && self.live[v]
    }

    pub fn live_vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.n()).filter(move |&v| self.live[v])
    }

    pub fn live_set(&self) -> VertexSet {
        self.live_vertices().collect()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_set(&self) -> EdgeSet {
        self.edges.iter().copied().collect()
    }

    /// Position of `e` in `edges()`.
    pub fn edge_index(&self, e: Edge) -> Option<usize> {
        self.edges.binary_search(&e).ok()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n() && v < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.has_edge(e.0, e.1)
    }

    /// Average degree d(G) = 2e(G)/|G|, zero for the null graph.
    pub fn average_degree(&self) -> f64 {
        if self.live_count == 0 {
            0.0
        } else {
            2.0 * self.edges.len() as f64 / self.live_count as f64
        }
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Vertices with at least one incident edge.
    pub fn touched_vertices(&self) -> VertexSet {
        self.edges.iter().flat_map(|e| [e.0, e.1]).collect()
    }

    /// d_G(x, X): number of neighbours of `x` in `X`.
    pub fn degree_into(&self, x: Vertex, set: &VertexSet) -> usize {
        self.adj[x].iter().filter(|v| set.contains(v)).count()
    }

    /// N_G(X): vertices outside `X` adjacent to some vertex of `X`.
    pub fn neighborhood(&self, set: &VertexSet) -> VertexSet {
        let mut out = VertexSet::new();
        for &x in set {
            for &y in &self.adj[x] {
                if !set.contains(&y) {
                    out.insert(y);
                }
            }
        }
        out
    }

    /// B^i_G(X): vertices at distance at most `i` from `X`.
    pub fn ball(&self, set: &VertexSet, radius: usize) -> VertexSet {
        let mut seen = vec![false; self.n()];
        let mut frontier: Vec<Vertex> = Vec::new();
        for &x in set {
            if !seen[x] {
                seen[x] = true;
                frontier.push(x);
            }
        }
        let mut out: VertexSet = set.clone();
        for _ in 0..radius {
            let mut next = Vec::new();
            for &x in &frontier {
                for &y in &self.adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        out.insert(y);
                        next.push(y);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        out
    }

    /// G[A, B]: only edges with one end in `A` and the other in `B`.
    pub fn induced_bipartite(&self, a: &VertexSet, b: &VertexSet) -> Result<Graph, GraphError> {
        if let Some(&v) = a.intersection(b).next() {
            return Err(GraphError::Overlap(v));
        }
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|e| (a.contains(&e.0) && b.contains(&e.1)) || (a.contains(&e.1) && b.contains(&e.0)));
        Ok(Self::build(self.live.clone(), edges.collect()))
    }

    /// G[X]: live vertices restricted to `X`, edges with both ends in `X`.
    pub fn induced(&self, set: &VertexSet) -> Graph {
        let mut live = vec![false; self.n()];
        for &v in set {
            if self.is_live(v) {
                live[v] = true;
            }
        }
        let edges = self.edges.iter().copied().filter(|e| live[e.0] && live[e.1]).collect();
        Self::build(live, edges)
    }

    /// Delete `vertices` (with incident edges) and `edges`; labels are preserved.
    pub fn remove(&self, vertices: &VertexSet, edges: &EdgeSet) -> Graph {
        let mut live = self.live.clone();
        for &v in vertices {
            if v < live.len() {
                live[v] = false;
            }
        }
        let kept = self
            .edges
            .iter()
            .copied()
            .filter(|e| live[e.0] && live[e.1] && !edges.contains(e))
            .collect();
        Self::build(live, kept)
    }

    /// Connected components of the live vertices, each sorted, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut comp = vec![usize::MAX; self.n()];
        let mut out = Vec::new();
        for s in self.live_vertices() {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &y in &self.adj[x] {
                    if comp[y] == usize::MAX {
                        comp[y] = id;
                        members.push(y);
                        queue.push_back(y);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Shortest-path distances from `sources`; `usize::MAX` marks unreachable.
    pub fn distances_from(&self, sources: &[Vertex]) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s] == usize::MAX {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(x) = queue.pop_front() {
            for &y in &self.adj[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Parse the edge-list text format: optional `# n=<N>` header, then `u v` lines.
    ///
    /// Other lines starting with `#` and blank lines are ignored.
    pub fn from_edge_list(text: &str) -> Result<Graph, GraphError> {
        let mut header_n: Option<usize> = None;
        let mut pairs = Vec::new();
        let mut max_id: Option<usize> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(value) = rest.trim().strip_prefix("n=") {
                    let n = value.trim().parse::<usize>().map_err(|_| GraphError::Malformed {
                        line: line_no,
                        text: raw.to_string(),
                    })?;
                    header_n = Some(n);
                }
                continue;
            }
            let mut fields = line.split_whitespace();
            let parse = |f: Option<&str>| f.and_then(|s| s.parse::<usize>().ok());
            let (u, v) = match (parse(fields.next()), parse(fields.next()), fields.next()) {
                (Some(u), Some(v), None) => (u, v),
                _ => {
                    return Err(GraphError::Malformed { line: line_no, text: raw.to_string() });
                }
            };
            if u == v {
                return Err(GraphError::SelfLoop { line: line_no, vertex: u });
            }
            max_id = Some(max_id.map_or(u.max(v), |m| m.max(u).max(v)));
            pairs.push((u, v));
        }
        let implied = max_id.map_or(0, |m| m + 1);
        let n = match header_n {
            Some(h) if h < implied => {
                return Err(GraphError::VertexOutOfRange { vertex: implied - 1, n: h });
            }
            Some(h) => h,
            None => implied,
        };
        Graph::new(n, pairs)
    }

    /// Canonical edge-list text: edges in lexicographic order, preceded by an
    /// `# n=` header when the edges alone would not imply `n`.
    pub fn to_edge_list(&self) -> String {
        let implied = self.edges.iter().map(|e| e.1 + 1).max().unwrap_or(0);
        let mut out = if implied == self.n() { String::new() } else { format!("# n={}\n", self.n()) };
        for e in &self.edges {
            out.push_str(&format!("{} {}\n", e.0, e.1));
        }
        out
    }
}

/// A simple path given by its vertex sequence (at least one edge).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path(Vec<Vertex>);

impl Path {
    /// Checks only simplicity and length; use [`Path::check_in`] for host validity.
    pub fn new(vertices: Vec<Vertex>) -> Result<Path, GraphError> {
        if vertices.len() < 2 {
            return Err(GraphError::InvalidPath(format!("{vertices:?} has no edge")));
        }
        let mut seen: Vec<Vertex> = vertices.clone();
        seen.sort_unstable();
        if let Some(w) = seen.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::InvalidPath(format!("vertex {} repeats", w[0])));
        }
        Ok(Path(vertices))
    }

    pub fn single_edge(e: Edge) -> Path {
        Path(vec![e.0, e.1])
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn into_vertices(self) -> Vec<Vertex> {
        self.0
    }

    /// ℓ(P), the number of edges.
    pub fn len(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self) -> Vertex {
        self.0[0]
    }

    pub fn last(&self) -> Vertex {
        *self.0.last().expect("nonempty path")
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.0.windows(2).map(|w| Edge::new(w[0], w[1]))
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.0.contains(&v)
    }

    pub fn reversed(&self) -> Path {
        let mut v = self.0.clone();
        v.reverse();
        Path(v)
    }

    /// Orientation with the smaller end first, so equal edge sets compare equal.
    pub fn canonical(&self) -> Path {
        if self.first() > self.last() {
            self.reversed()
        } else {
            self.clone()
        }
    }

    /// Every consecutive pair must be an edge of `host`.
    pub fn check_in(&self, host: &Graph) -> Result<(), GraphError> {
        for w in self.0.windows(2) {
            if !host.has_edge(w[0], w[1]) {
                return Err(GraphError::InvalidPath(format!("{}-{} is not an edge", w[0], w[1])));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("-"))
    }
}

/// Vertex-disjoint collection of paths.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PathForest {
    paths: Vec<Path>,
}

impl PathForest {
    pub fn new(paths: Vec<Path>) -> Result<PathForest, GraphError> {
        let mut seen = BTreeSet::new();
        for p in &paths {
            for &v in p.vertices() {
                if !seen.insert(v) {
                    return Err(GraphError::ForestOverlap(v));
                }
            }
        }
        Ok(PathForest { paths })
    }

    /// A matching viewed as a forest of single-edge paths.
    pub fn from_matching(edges: &[Edge]) -> Result<PathForest, GraphError> {
        PathForest::new(edges.iter().map(|&e| Path::single_edge(e)).collect())
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

    pub fn vertices(&self) -> VertexSet {
        self.paths.iter().flat_map(|p| p.vertices().iter().copied()).collect()
    }

    pub fn edges(&self) -> EdgeSet {
        self.paths.iter().flat_map(|p| p.edges()).collect()
    }

    /// Ends (leaves) of every component.
    pub fn ends(&self) -> Vec<Vertex> {
        self.paths.iter().flat_map(|p| [p.first(), p.last()]).collect()
    }
}

//! Expanders, the violation search, the recursive expander decomposition and
//! ball growth with limited contact.
//!
//! G is an (ε, s, t)-expander when every X with 1 ≤ |X| ≤ 2|G|/3 keeps
//! |N_{G−F}(X)| ≥ ε|X|/(log|X| + 1)² for every F with |F| ≤ s·min{|X|, t}.
//! The weak flavor uses the denominator (log |G|)² and the edge budget s|X|.
//! Logarithms are base 2.

use rand::Rng as _;
use thiserror::Error;

use crate::graph::{Edge, EdgeSet, Graph, Vertex, VertexSet};
use crate::rng::rng_from;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    Standard,
    Weak,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpanderParams {
    pub epsilon: f64,
    pub s: f64,
    pub t: f64,
    pub flavor: Flavor,
}

#[derive(Debug, Error, PartialEq)]
pub enum ExpanderError {
    #[error("invalid expander parameters: {0}")]
    InvalidParams(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("decomposition recursion exceeded depth {0}")]
    DepthExceeded(usize),
}

const TOL: f64 = 1e-9;

impl ExpanderParams {
    pub fn new(epsilon: f64, s: f64, t: f64, flavor: Flavor) -> Result<ExpanderParams, ExpanderError> {
        if !(epsilon > 0.0 && epsilon <= 1.0 / 48.0 + TOL) {
            return Err(ExpanderError::InvalidParams(format!("epsilon {epsilon} outside (0, 1/48]")));
        }
        if !(s >= 0.0 && s.is_finite()) {
            return Err(ExpanderError::InvalidParams(format!("s {s} must be a finite nonnegative number")));
        }
        if !(t >= 1.0) {
            return Err(ExpanderError::InvalidParams(format!("t {t} must be at least 1")));
        }
        Ok(ExpanderParams { epsilon, s, t, flavor })
    }

    pub fn standard(epsilon: f64, s: f64, t: f64) -> Result<ExpanderParams, ExpanderError> {
        Self::new(epsilon, s, t, Flavor::Standard)
    }

    pub fn weak(epsilon: f64, s: f64) -> Result<ExpanderParams, ExpanderError> {
        Self::new(epsilon, s, f64::INFINITY, Flavor::Weak)
    }

    /// t clamped to 2n/3.
    pub fn effective_t(&self, n: usize) -> f64 {
        self.t.min(2.0 * n as f64 / 3.0)
    }

    /// Neighbourhood size below which a set of size `x` in an `n`-vertex graph fails.
    pub fn threshold(&self, x: usize, n: usize) -> f64 {
        let x = x as f64;
        match self.flavor {
            Flavor::Standard => self.epsilon * x / (x.log2() + 1.0).powi(2),
            Flavor::Weak => self.epsilon * x / (n as f64).log2().powi(2),
        }
    }

    /// Largest |F| allowed for a set of size `x`.
    pub fn edge_budget(&self, x: usize, n: usize) -> f64 {
        match self.flavor {
            Flavor::Standard => self.s * (x as f64).min(self.effective_t(n)),
            Flavor::Weak => self.s * x as f64,
        }
    }

    /// Upper bound on the uncovered edges of a decomposition of an `n`-vertex graph.
    pub fn uncovered_bound(&self, n: usize) -> f64 {
        let t = match self.flavor {
            Flavor::Standard => self.t.max(1.0),
            Flavor::Weak => (n as f64).max(1.0),
        };
        48.0 * self.s * n as f64 * (t.log2() + 1.0).powi(2)
    }
}

/// Whether (X, F) certifies that `g` is not an expander.
pub fn is_expander_violation(g: &Graph, x: &VertexSet, f: &EdgeSet, p: &ExpanderParams) -> Result<bool, ExpanderError> {
    let n = g.order();
    if x.is_empty() {
        return Err(ExpanderError::Precondition("X is empty".into()));
    }
    if let Some(v) = x.iter().find(|&&v| v >= g.n() || !g.is_live(v)) {
        return Err(ExpanderError::Precondition(format!("vertex {v} of X is not in the graph")));
    }
    if 3 * x.len() > 2 * n {
        return Err(ExpanderError::Precondition(format!("|X| = {} exceeds 2n/3 for n = {n}", x.len())));
    }
    if let Some(e) = f.iter().find(|e| !g.contains_edge(**e)) {
        return Err(ExpanderError::Precondition(format!("edge {e} of F is not in the graph")));
    }
    let budget = p.edge_budget(x.len(), n);
    if f.len() as f64 > budget + TOL {
        return Err(ExpanderError::Precondition(format!("|F| = {} exceeds the budget {budget}", f.len())));
    }
    let mut nbrs = VertexSet::new();
    for &v in x {
        for &y in g.neighbors(v) {
            if !x.contains(&y) && !f.contains(&Edge::new(v, y)) {
                nbrs.insert(y);
            }
        }
    }
    Ok((nbrs.len() as f64) < p.threshold(x.len(), n) - TOL)
}

/// Effort limits for the violation search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// Start vertices for greedy cut growth.
    pub max_candidates: usize,
    pub power_iterations: usize,
    pub local_steps: usize,
    /// Graphs up to this order are searched exhaustively.
    pub exhaustive_limit: usize,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> SearchBudget {
        SearchBudget { max_candidates: 64, power_iterations: 50, local_steps: 200, exhaustive_limit: 14, seed: 0 }
    }
}

/// Evaluates candidate sets against the expansion inequality.
struct Probe<'a> {
    g: &'a Graph,
    p: &'a ExpanderParams,
    n: usize,
    max_x: usize,
}

impl<'a> Probe<'a> {
    fn new(g: &'a Graph, p: &'a ExpanderParams) -> Probe<'a> {
        let n = g.order();
        Probe { g, p, n, max_x: 2 * n / 3 }
    }

    /// Given the multiplicities of the outside neighbours of X, the cheapest F
    /// that brings |N_{G−F}(X)| below the threshold: drop neighbours with the
    /// fewest X-edges first.
    fn violation(&self, size: usize, mults: &mut Vec<(usize, Vertex)>) -> Option<usize> {
        if size == 0 || size > self.max_x {
            return None;
        }
        let budget = (self.p.edge_budget(size, self.n) + TOL).floor() as usize;
        let thr = self.p.threshold(size, self.n) - TOL;
        let nbrs = mults.len();
        if (nbrs as f64) < thr {
            return Some(0);
        }
        // Each dropped neighbour costs at least one edge.
        if (nbrs.saturating_sub(budget) as f64) >= thr {
            return None;
        }
        mults.sort_unstable();
        let mut spent = 0;
        for (dropped, &(m, _)) in mults.iter().enumerate() {
            if spent + m > budget {
                return None;
            }
            spent += m;
            if ((nbrs - dropped - 1) as f64) < thr {
                return Some(dropped + 1);
            }
        }
        None
    }

    /// Test a membership mask; on success return (X, F).
    fn test_mask(&self, inx: &[bool]) -> Option<(VertexSet, EdgeSet)> {
        let size = inx.iter().filter(|&&b| b).count();
        if size == 0 || size > self.max_x {
            return None;
        }
        let mut mult = vec![0usize; self.g.n()];
        let mut touched = Vec::new();
        for v in 0..inx.len() {
            if !inx[v] {
                continue;
            }
            for &y in self.g.neighbors(v) {
                if !inx[y] {
                    if mult[y] == 0 {
                        touched.push(y);
                    }
                    mult[y] += 1;
                }
            }
        }
        let mut mults: Vec<(usize, Vertex)> = touched.iter().map(|&y| (mult[y], y)).collect();
        let dropped = self.violation(size, &mut mults)?;
        let x: VertexSet = (0..inx.len()).filter(|&v| inx[v]).collect();
        let mut f = EdgeSet::new();
        for &(_, y) in &mults[..dropped] {
            for &v in self.g.neighbors(y) {
                if inx[v] {
                    f.insert(Edge::new(v, y));
                }
            }
        }
        Some((x, f))
    }

    /// Sweep over the prefixes of `order`, keeping incremental multiplicities.
    /// Among violating prefixes the one with the fewest F-edges wins.
    fn sweep(&self, order: &[Vertex]) -> Option<(VertexSet, EdgeSet)> {
        let mut best: Option<(VertexSet, EdgeSet)> = None;
        let mut inx = vec![false; self.g.n()];
        let mut mult = vec![0usize; self.g.n()];
        let mut outside_nbrs = 0usize;
        for (k, &v) in order.iter().take(self.max_x).enumerate() {
            if mult[v] > 0 {
                outside_nbrs -= 1;
            }
            inx[v] = true;
            for &y in self.g.neighbors(v) {
                if !inx[y] {
                    if mult[y] == 0 {
                        outside_nbrs += 1;
                    }
                    mult[y] += 1;
                }
            }
            let size = k + 1;
            let budget = (self.p.edge_budget(size, self.n) + TOL).floor() as usize;
            if (outside_nbrs.saturating_sub(budget) as f64) >= self.p.threshold(size, self.n) - TOL {
                continue;
            }
            if let Some(found) = self.test_mask(&inx) {
                if best.as_ref().is_none_or(|b| found.1.len() < b.1.len()) {
                    let done = found.1.is_empty();
                    best = Some(found);
                    if done {
                        break;
                    }
                }
            }
        }
        best
    }
}

/// Search for (X, F) certifying non-expansion. `None` does not prove expansion
/// unless the graph is small enough for the exhaustive search.
pub fn find_violating_pair(g: &Graph, p: &ExpanderParams, budget: &SearchBudget) -> Option<(VertexSet, EdgeSet)> {
    let n = g.order();
    if n < 2 {
        return None;
    }
    let probe = Probe::new(g, p);
    if probe.max_x == 0 {
        return None;
    }
    if n <= budget.exhaustive_limit {
        return exhaustive_violation(&probe);
    }
    component_split(&probe)
        .or_else(|| greedy_growth(&probe, budget))
        .or_else(|| spectral_sweep(&probe, budget))
}

fn exhaustive_violation(probe: &Probe) -> Option<(VertexSet, EdgeSet)> {
    let live: Vec<Vertex> = probe.g.live_vertices().collect();
    let k = live.len();
    let mut masks: Vec<u32> = (1u32..(1 << k)).filter(|m| m.count_ones() as usize <= probe.max_x).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    let mut inx = vec![false; probe.g.n()];
    for m in masks {
        for (i, &v) in live.iter().enumerate() {
            inx[v] = m >> i & 1 == 1;
        }
        if let Some(found) = probe.test_mask(&inx) {
            return Some(found);
        }
    }
    None
}

/// Exhaustive check: `None` certifies that `g` is an expander for `p`.
pub fn exhaustive_expander_check(g: &Graph, p: &ExpanderParams) -> Option<(VertexSet, EdgeSet)> {
    assert!(g.order() <= 24, "exhaustive check is exponential in the order");
    let probe = Probe::new(g, p);
    if g.order() < 2 || probe.max_x == 0 {
        return None;
    }
    exhaustive_violation(&probe)
}

fn component_split(probe: &Probe) -> Option<(VertexSet, EdgeSet)> {
    let comps = probe.g.components();
    if comps.len() < 2 {
        return None;
    }
    let mut by_size: Vec<&Vec<Vertex>> = comps.iter().collect();
    by_size.sort_by_key(|c| (c.len(), c[0]));
    let mut inx = vec![false; probe.g.n()];
    for &v in by_size[0] {
        inx[v] = true;
    }
    if by_size[0].len() > probe.max_x {
        return None;
    }
    probe.test_mask(&inx)
}

/// Grow sets from low-degree vertices, always adding the vertex that lowers the cut most.
fn greedy_growth(probe: &Probe, budget: &SearchBudget) -> Option<(VertexSet, EdgeSet)> {
    let g = probe.g;
    let mut starts: Vec<Vertex> = g.live_vertices().collect();
    starts.sort_by_key(|&v| (g.degree(v), v));
    starts.truncate(budget.max_candidates.max(1));
    for &s in &starts {
        let mut order = vec![s];
        let mut inx = vec![false; g.n()];
        let mut gain = vec![0usize; g.n()];
        inx[s] = true;
        for &y in g.neighbors(s) {
            gain[y] += 1;
        }
        while order.len() < probe.max_x {
            let next = g
                .live_vertices()
                .filter(|&y| !inx[y])
                .min_by_key(|&y| ((g.degree(y) as isize - 2 * gain[y] as isize), y));
            let Some(y) = next else { break };
            inx[y] = true;
            order.push(y);
            for &z in g.neighbors(y) {
                gain[z] += 1;
            }
        }
        if let Some(found) = probe.sweep(&order) {
            return Some(found);
        }
    }
    None
}

/// Sweep cuts along a slow-mixing vector of the lazy random walk, then local moves
/// around the best sweep set.
fn spectral_sweep(probe: &Probe, budget: &SearchBudget) -> Option<(VertexSet, EdgeSet)> {
    let g = probe.g;
    let live: Vec<Vertex> = g.live_vertices().collect();
    let mut rng = rng_from(budget.seed);
    let mut x = vec![0.0f64; g.n()];
    for &v in &live {
        x[v] = rng.gen_range(-1.0..1.0);
    }
    let total_deg: f64 = live.iter().map(|&v| g.degree(v) as f64).sum();
    for _ in 0..budget.power_iterations {
        if total_deg > 0.0 {
            let mean = live.iter().map(|&v| g.degree(v) as f64 * x[v]).sum::<f64>() / total_deg;
            for &v in &live {
                x[v] -= mean;
            }
        }
        let mut next = vec![0.0f64; g.n()];
        for &v in &live {
            let d = g.degree(v);
            next[v] = if d == 0 {
                x[v]
            } else {
                0.5 * x[v] + 0.5 * g.neighbors(v).iter().map(|&y| x[y]).sum::<f64>() / d as f64
            };
        }
        let norm = live.iter().map(|&v| next[v] * next[v]).sum::<f64>().sqrt();
        if norm > 0.0 {
            for &v in &live {
                next[v] /= norm;
            }
        }
        x = next;
    }
    let mut order = live.clone();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]).then(a.cmp(&b)));
    if let Some(found) = probe.sweep(&order) {
        return Some(found);
    }
    let reversed: Vec<Vertex> = order.iter().rev().copied().collect();
    if let Some(found) = probe.sweep(&reversed) {
        return Some(found);
    }
    local_improvement(probe, &order, budget)
}

/// Start from the sweep prefix with the least excess cut and move single vertices
/// while the excess drops.
fn local_improvement(probe: &Probe, order: &[Vertex], budget: &SearchBudget) -> Option<(VertexSet, EdgeSet)> {
    let g = probe.g;
    let excess = |inx: &[bool], size: usize| -> f64 {
        let cut: usize = (0..inx.len()).filter(|&v| inx[v]).map(|v| g.neighbors(v).iter().filter(|&&y| !inx[y]).count()).sum();
        cut as f64 - probe.p.edge_budget(size, probe.n)
    };
    let mut best_k = 1;
    let mut best = f64::INFINITY;
    let mut inx = vec![false; g.n()];
    for (k, &v) in order.iter().take(probe.max_x).enumerate() {
        inx[v] = true;
        let e = excess(&inx, k + 1);
        if e < best {
            best = e;
            best_k = k + 1;
        }
    }
    let mut inx = vec![false; g.n()];
    for &v in &order[..best_k] {
        inx[v] = true;
    }
    let mut size = best_k;
    for _ in 0..budget.local_steps {
        if let Some(found) = probe.test_mask(&inx) {
            return Some(found);
        }
        let mut best_move = None;
        for &v in order {
            let new_size = if inx[v] { size - 1 } else { size + 1 };
            if new_size == 0 || new_size > probe.max_x {
                continue;
            }
            inx[v] = !inx[v];
            let e = excess(&inx, new_size);
            inx[v] = !inx[v];
            if e < best - TOL {
                best = e;
                best_move = Some((v, new_size));
            }
        }
        let Some((v, new_size)) = best_move else { break };
        inx[v] = !inx[v];
        size = new_size;
    }
    probe.test_mask(&inx)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExpanderDecomposition {
    pub parts: Vec<Graph>,
    pub uncovered: EdgeSet,
    pub params: ExpanderParams,
}

impl ExpanderDecomposition {
    pub fn total_part_order(&self) -> usize {
        self.parts.iter().map(Graph::order).sum()
    }
}

/// Split `g` into edge-disjoint expanders plus a set of uncovered edges.
///
/// While a violating pair (X, F) is found, recurse on G[X ∪ N_{G−F}(X)] and on
/// G − X without the edges inside N_{G−F}(X). The edges lost by a split are the
/// F-edges leaving X ∪ N. Edgeless pieces are dropped, isolated vertices trimmed.
pub fn expander_decompose(g: &Graph, p: &ExpanderParams, budget: &SearchBudget) -> Result<ExpanderDecomposition, ExpanderError> {
    let n = g.order();
    let max_depth = 2 * n + 16;
    let mut parts = Vec::new();
    let mut stack = vec![(g.induced(&g.touched_vertices()), 0usize)];
    while let Some((h, depth)) = stack.pop() {
        if h.edge_count() == 0 {
            continue;
        }
        if depth > max_depth {
            return Err(ExpanderError::DepthExceeded(max_depth));
        }
        match find_violating_pair(&h, p, budget) {
            None => parts.push(h),
            Some((x, f)) => {
                debug_assert_eq!(is_expander_violation(&h, &x, &f, p), Ok(true));
                let nbrs = h.remove(&VertexSet::new(), &f).neighborhood(&x);
                let g1 = h.induced(&x.union(&nbrs).copied().collect());
                let inside_n: EdgeSet = h.induced(&nbrs).edge_set();
                let g2 = h.remove(&x, &inside_n);
                let g2 = g2.induced(&g2.touched_vertices());
                let g1 = g1.induced(&g1.touched_vertices());
                // Pushed in reverse so that G₁'s parts come first.
                stack.push((g2, depth + 1));
                stack.push((g1, depth + 1));
            }
        }
    }
    let mut covered = EdgeSet::new();
    for part in &parts {
        for &e in part.edges() {
            assert!(covered.insert(e), "parts overlap at {e}");
        }
    }
    let uncovered: EdgeSet = g.edges().iter().copied().filter(|e| !covered.contains(e)).collect();
    let out = ExpanderDecomposition { parts, uncovered, params: *p };
    assert!(out.total_part_order() <= 2 * n, "parts have {} vertices in total, n = {n}", out.total_part_order());
    assert!(
        out.uncovered.len() as f64 <= p.uncovered_bound(n) + TOL,
        "{} uncovered edges exceed the bound {}",
        out.uncovered.len(),
        p.uncovered_bound(n)
    );
    Ok(out)
}

/// B^i_{G−X}(A).
pub fn grow_ball_avoiding(g: &Graph, a: &VertexSet, x: &VertexSet, radius: usize) -> VertexSet {
    assert!(a.is_disjoint(x), "A and X must be disjoint");
    g.remove(x, &EdgeSet::new()).ball(a, radius)
}

/// Whether |N_G(B^{i−1}_{G−X}(A)) ∩ X| ≤ k·i for every 1 ≤ i ≤ `i_max`.
pub fn limited_contact_check(g: &Graph, a: &VertexSet, x: &VertexSet, k: f64, i_max: usize) -> bool {
    assert!(a.is_disjoint(x), "A and X must be disjoint");
    let avoid = g.remove(x, &EdgeSet::new());
    let layers = bfs_layers(&avoid, a, i_max.saturating_sub(1));
    let mut ball = VertexSet::new();
    for i in 1..=i_max {
        if let Some(layer) = layers.get(i - 1) {
            ball.extend(layer.iter().copied());
        }
        let contact = g.neighborhood(&ball).intersection(x).count();
        if contact as f64 > k * i as f64 + TOL {
            return false;
        }
    }
    true
}

fn bfs_layers(g: &Graph, a: &VertexSet, radius: usize) -> Vec<Vec<Vertex>> {
    let mut seen = vec![false; g.n()];
    let mut layer: Vec<Vertex> = a.iter().copied().collect();
    for &v in &layer {
        seen[v] = true;
    }
    let mut out = vec![layer.clone()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for &v in &layer {
            for &y in g.neighbors(v) {
                if !seen[y] {
                    seen[y] = true;
                    next.push(y);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        out.push(next.clone());
        layer = next;
    }
    out
}

/// Outcome of the ball-growth diagnostic on one part.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ContactDiagnostic {
    pub checked: usize,
    pub violations: usize,
}

/// On a small certified expander, sample (A, X) pairs with limited contact and
/// |A| ≥ k³ and count radii where |B^i_{G−X}(A)| ≤ min{2^{i^{1/4}}, n/2}.
/// The inequality is only promised for k beyond an unspecified constant, so the
/// result is logged and returned, never enforced.
pub fn limited_contact_diagnostic(g: &Graph, k: f64, samples: usize, seed: u64) -> ContactDiagnostic {
    let live: Vec<Vertex> = g.live_vertices().collect();
    let n = live.len();
    let need = (k * k * k).ceil() as usize;
    let mut out = ContactDiagnostic::default();
    if need == 0 || need >= n {
        return out;
    }
    let mut rng = rng_from(seed);
    for _ in 0..samples {
        let mut pool = live.clone();
        let mut a = VertexSet::new();
        let mut x = VertexSet::new();
        while a.len() < need {
            let v = pool.swap_remove(rng.gen_range(0..pool.len()));
            a.insert(v);
        }
        for v in pool {
            if rng.gen_bool(0.2) {
                x.insert(v);
            }
        }
        for i in 1..=n {
            if !limited_contact_check(g, &a, &x, k, i) {
                break;
            }
            out.checked += 1;
            let ball = grow_ball_avoiding(g, &a, &x, i);
            let bound = 2f64.powf((i as f64).powf(0.25)).min(n as f64 / 2.0);
            if ball.len() as f64 <= bound {
                out.violations += 1;
                log::info!("ball of radius {i} around {} vertices has {} vertices, bound {bound:.2}", a.len(), ball.len());
            }
        }
    }
    out
}

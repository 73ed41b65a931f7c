//! Deterministic graph generators for the test and benchmark corpora.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng as _;
use thiserror::Error;

use crate::graph::{Graph, Vertex};
use crate::rng::rng_from;

#[derive(Debug, Error, PartialEq)]
pub enum GenerateError {
    #[error("invalid family parameters: {0}")]
    InvalidParams(String),
    #[error("cannot parse family {0:?}")]
    Parse(String),
    #[error("random_regular({n},{d}) failed to produce a simple graph")]
    RegularFailed { n: usize, d: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Complete(usize),
    Path(usize),
    Cycle(usize),
    Star(usize),
    Grid(usize, usize),
    Hypercube(u32),
    Gnp(usize, f64),
    RandomRegular(usize, usize),
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Complete(n) => write!(f, "complete({n})"),
            Family::Path(n) => write!(f, "path({n})"),
            Family::Cycle(n) => write!(f, "cycle({n})"),
            Family::Star(n) => write!(f, "star({n})"),
            Family::Grid(a, b) => write!(f, "grid({a},{b})"),
            Family::Hypercube(k) => write!(f, "hypercube({k})"),
            Family::Gnp(n, p) => write!(f, "gnp({n},{p})"),
            Family::RandomRegular(n, d) => write!(f, "random_regular({n},{d})"),
        }
    }
}

impl FromStr for Family {
    type Err = GenerateError;

    /// Accepts `name(a,b)` as printed by `Display`.
    fn from_str(s: &str) -> Result<Family, GenerateError> {
        let err = || GenerateError::Parse(s.to_string());
        let s = s.trim();
        let open = s.find('(').ok_or_else(err)?;
        let body = s[open + 1..].strip_suffix(')').ok_or_else(err)?;
        let args: Vec<&str> = body.split(',').map(str::trim).collect();
        let int = |i: usize| -> Result<usize, GenerateError> {
            args.get(i).and_then(|a| a.parse().ok()).ok_or_else(err)
        };
        let arity = |k: usize| if args.len() == k { Ok(()) } else { Err(err()) };
        let fam = match &s[..open] {
            "complete" => (arity(1)?, Family::Complete(int(0)?)).1,
            "path" => (arity(1)?, Family::Path(int(0)?)).1,
            "cycle" => (arity(1)?, Family::Cycle(int(0)?)).1,
            "star" => (arity(1)?, Family::Star(int(0)?)).1,
            "grid" => (arity(2)?, Family::Grid(int(0)?, int(1)?)).1,
            "hypercube" => (arity(1)?, Family::Hypercube(int(0)? as u32)).1,
            "gnp" => {
                arity(2)?;
                let p: f64 = args[1].parse().map_err(|_| err())?;
                Family::Gnp(int(0)?, p)
            }
            "random_regular" => (arity(2)?, Family::RandomRegular(int(0)?, int(1)?)).1,
            _ => return Err(err()),
        };
        Ok(fam)
    }
}

/// A family with its size left open, e.g. `gnp:0.3` or `hypercube`.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilyKind {
    Complete,
    Path,
    Cycle,
    Star,
    Grid,
    Hypercube,
    Gnp(f64),
    RandomRegular(usize),
}

impl FamilyKind {
    /// Concrete family with roughly `n` vertices.
    pub fn at_size(&self, n: usize) -> Family {
        match *self {
            FamilyKind::Complete => Family::Complete(n),
            FamilyKind::Path => Family::Path(n),
            FamilyKind::Cycle => Family::Cycle(n),
            FamilyKind::Star => Family::Star(n),
            FamilyKind::Grid => {
                let a = ((n as f64).sqrt().floor() as usize).max(1);
                let b = ((n as f64 / a as f64).round() as usize).max(1);
                Family::Grid(a, b)
            }
            FamilyKind::Hypercube => Family::Hypercube((n.max(1) as f64).log2().round() as u32),
            FamilyKind::Gnp(p) => Family::Gnp(n, p),
            FamilyKind::RandomRegular(d) => Family::RandomRegular(n, d),
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyKind::Complete => write!(f, "complete"),
            FamilyKind::Path => write!(f, "path"),
            FamilyKind::Cycle => write!(f, "cycle"),
            FamilyKind::Star => write!(f, "star"),
            FamilyKind::Grid => write!(f, "grid"),
            FamilyKind::Hypercube => write!(f, "hypercube"),
            FamilyKind::Gnp(p) => write!(f, "gnp:{p}"),
            FamilyKind::RandomRegular(d) => write!(f, "random_regular:{d}"),
        }
    }
}

impl FromStr for FamilyKind {
    type Err = GenerateError;

    fn from_str(s: &str) -> Result<FamilyKind, GenerateError> {
        let err = || GenerateError::Parse(s.to_string());
        let (name, arg) = match s.trim().split_once(':') {
            Some((a, b)) => (a, Some(b)),
            None => (s.trim(), None),
        };
        Ok(match (name, arg) {
            ("complete", None) => FamilyKind::Complete,
            ("path", None) => FamilyKind::Path,
            ("cycle", None) => FamilyKind::Cycle,
            ("star", None) => FamilyKind::Star,
            ("grid", None) => FamilyKind::Grid,
            ("hypercube", None) => FamilyKind::Hypercube,
            ("gnp", Some(p)) => FamilyKind::Gnp(p.parse().map_err(|_| err())?),
            ("random_regular", Some(d)) => FamilyKind::RandomRegular(d.parse().map_err(|_| err())?),
            _ => return Err(err()),
        })
    }
}

/// Build a member of `family`; random families are a pure function of `seed`.
pub fn generate(family: &Family, seed: u64) -> Result<Graph, GenerateError> {
    let bad = |msg: &str| Err(GenerateError::InvalidParams(format!("{family}: {msg}")));
    let graph = match *family {
        Family::Complete(n) => {
            let mut pairs = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    pairs.push((u, v));
                }
            }
            Graph::new(n, pairs)
        }
        Family::Path(n) => Graph::new(n, (1..n).map(|i| (i - 1, i))),
        Family::Cycle(n) => {
            if n < 3 {
                return bad("cycle needs n >= 3");
            }
            Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
        }
        Family::Star(n) => Graph::new(n, (1..n).map(|i| (0, i))),
        Family::Grid(a, b) => {
            let id = |r: usize, c: usize| r * b + c;
            let mut pairs = Vec::new();
            for r in 0..a {
                for c in 0..b {
                    if c + 1 < b {
                        pairs.push((id(r, c), id(r, c + 1)));
                    }
                    if r + 1 < a {
                        pairs.push((id(r, c), id(r + 1, c)));
                    }
                }
            }
            Graph::new(a * b, pairs)
        }
        Family::Hypercube(k) => {
            if k > 20 {
                return bad("dimension too large");
            }
            let n = 1usize << k;
            let pairs = (0..n).flat_map(|v| (0..k).map(move |b| (v, v ^ (1 << b)))).filter(|(u, v)| u < v);
            Graph::new(n, pairs)
        }
        Family::Gnp(n, p) => {
            if !(0.0..=1.0).contains(&p) {
                return bad("p must lie in [0, 1]");
            }
            Graph::new(n, gnp_pairs(n, p, seed))
        }
        Family::RandomRegular(n, d) => {
            if (n * d) % 2 == 1 {
                return bad("n*d must be even");
            }
            if d >= n.max(1) && d > 0 {
                return bad("degree must be below n");
            }
            return random_regular(n, d, seed);
        }
    };
    Ok(graph.expect("generators emit valid pairs"))
}

/// Geometric-skip sampling over pairs (u, v), u < v, in lexicographic order.
fn gnp_pairs(n: usize, p: f64, seed: u64) -> Vec<(Vertex, Vertex)> {
    let mut out = Vec::new();
    if n < 2 || p <= 0.0 {
        return out;
    }
    if p >= 1.0 {
        for u in 0..n {
            for v in u + 1..n {
                out.push((u, v));
            }
        }
        return out;
    }
    let mut rng = rng_from(seed);
    let log_q = (1.0 - p).ln();
    // (0, 0) sits one step before the first pair (0, 1).
    let (mut u, mut v) = (0usize, 0usize);
    loop {
        let r: f64 = 1.0 - rng.gen::<f64>();
        let skip = (r.ln() / log_q).floor();
        let skip: u64 = if skip >= u64::MAX as f64 { u64::MAX } else { skip as u64 };
        let step = skip.saturating_add(1);
        let mut step = step as u128;
        loop {
            let room = (n - 1 - v) as u128;
            if step <= room {
                v += step as usize;
                break;
            }
            step -= room + 1;
            u += 1;
            if u + 1 >= n {
                return out;
            }
            v = u + 1;
        }
        out.push((u, v));
    }
}

fn random_regular(n: usize, d: usize, seed: u64) -> Result<Graph, GenerateError> {
    let mut rng = rng_from(seed);
    for _attempt in 0..200 {
        let mut stubs: Vec<Vertex> = (0..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
        let mut present: HashSet<(Vertex, Vertex)> = HashSet::new();
        let mut pairs = Vec::with_capacity(n * d / 2);
        let mut stuck = false;
        while !stubs.is_empty() {
            let valid = |i: usize, j: usize, present: &HashSet<(Vertex, Vertex)>| {
                let (a, b) = (stubs[i], stubs[j]);
                a != b && !present.contains(&(a.min(b), a.max(b)))
            };
            let mut choice = None;
            for _ in 0..64 {
                let i = rng.gen_range(0..stubs.len());
                let j = rng.gen_range(0..stubs.len());
                if i != j && valid(i, j, &present) {
                    choice = Some((i, j));
                    break;
                }
            }
            if choice.is_none() {
                let mut options = Vec::new();
                for i in 0..stubs.len() {
                    for j in i + 1..stubs.len() {
                        if valid(i, j, &present) {
                            options.push((i, j));
                        }
                    }
                }
                if options.is_empty() {
                    stuck = true;
                    break;
                }
                choice = Some(options[rng.gen_range(0..options.len())]);
            }
            let (i, j) = choice.expect("choice set above");
            let (a, b) = (stubs[i], stubs[j]);
            present.insert((a.min(b), a.max(b)));
            pairs.push((a, b));
            let (hi, lo) = (i.max(j), i.min(j));
            stubs.swap_remove(hi);
            stubs.swap_remove(lo);
        }
        if !stuck {
            return Ok(Graph::new(n, pairs).expect("valid pairs"));
        }
    }
    Err(GenerateError::RegularFailed { n, d })
}

//! Separation strategies and the full pipeline.
//!
//! Every stage returns a verified system for part of its input's edges and a
//! residual graph holding the rest. Stages are glued with [`compose_disjoint`],
//! which adds a path decomposition wherever a cross-stage pair could otherwise
//! go unseparated.
//!
//! [`compose_disjoint`]: crate::separation::compose_disjoint

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::expander::{ExpanderParams, SearchBudget};
use crate::graph::{Edge, Graph, Path};
use crate::separation::{verify_separation, Mode, PathSystem};

pub mod audit;
pub mod dense;
pub mod matchings;
pub mod pipeline;
pub mod report;
pub mod sparse;

pub use dense::{reduce_large_deg, separate_dense_expander, separate_outside, separate_random_subset};
pub use matchings::{
    build_matchings_basic, build_matchings_degree, build_matchings_spread, build_short_path_unions, short_path_family,
    MatchingError, MatchingFamily, UnionFamily,
};
pub use pipeline::{one_step, separate_all, separate_all_traced, two_steps};
pub use report::{BenchRow, ReportRow, RunReport};
pub use sparse::{reduce_small_deg, separate_high_degree, separate_sparse_expander};

/// Number of times log₂ must be applied to `n` to get a value below 1.
pub fn iterated_log(n: u64) -> u32 {
    assert!(n >= 1, "iterated log needs n >= 1");
    let mut x = n as f64;
    let mut k = 0;
    while x >= 1.0 {
        x = x.log2();
        k += 1;
    }
    k
}

/// How the t parameter of the expander decompositions is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TMode {
    /// t = 2n/3 for the dense route and t = d for the sparse route.
    Tight,
    /// t = n everywhere.
    Full,
}

impl fmt::Display for TMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TMode::Tight => "tight",
            TMode::Full => "full",
        })
    }
}

impl FromStr for TMode {
    type Err = String;

    fn from_str(s: &str) -> Result<TMode, String> {
        match s {
            "tight" => Ok(TMode::Tight),
            "full" => Ok(TMode::Full),
            other => Err(format!("unknown t_mode {other:?} (expected tight or full)")),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("unknown config key {0:?}")]
    UnknownKey(String),
    #[error("bad value {value:?} for {key}: {reason}")]
    BadValue { key: String, value: String, reason: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineConfig {
    pub epsilon: f64,
    pub s_dense: f64,
    pub s_sparse: f64,
    pub t_mode: TMode,
    /// High-degree threshold is d^d7_exponent (capped at n − 1 outside asymptotic mode).
    pub d7_exponent: f64,
    pub r0_exponent: f64,
    /// Matching-family caps, as multiples of n (basic, degree) or max{n, e/d} (unions, spread).
    pub cap_basic: f64,
    pub cap_degree: f64,
    pub cap_unions: f64,
    pub cap_spread: f64,
    /// Per-bucket quota is ⌈2^r / bucket_divisor⌉ edges of d̄ in [2^{r−1}, 2^r).
    pub bucket_divisor: f64,
    pub retries: usize,
    pub max_len: usize,
    /// Below this average degree a graph is left to the singleton stage.
    pub degree_floor: f64,
    /// Outer levels allowed beyond log* n.
    pub extra_levels: u32,
    pub k0: f64,
    pub seed: u64,
    pub asymptotic_mode: bool,
}

impl Default for PipelineConfig {
    fn default() -> PipelineConfig {
        PipelineConfig {
            epsilon: 1.0 / 48.0,
            s_dense: 2.0,
            s_sparse: 8.0,
            t_mode: TMode::Tight,
            d7_exponent: 7.0,
            r0_exponent: 5.0,
            cap_basic: 3.0,
            cap_degree: 210.0,
            cap_unions: 12.0,
            cap_spread: 3.0,
            bucket_divisor: 3.0,
            retries: 20,
            max_len: 24,
            degree_floor: 16.0,
            extra_levels: 2,
            k0: 10.0,
            seed: 0,
            asymptotic_mode: false,
        }
    }
}

impl PipelineConfig {
    /// Literal asymptotic parameters; `n` fixes s = (log n)^51.
    pub fn asymptotic(n: usize) -> PipelineConfig {
        let log_n = (n.max(2) as f64).log2();
        PipelineConfig { s_dense: log_n.powi(51), bucket_divisor: 200.0, asymptotic_mode: true, ..Self::default() }
    }

    pub const KEYS: &'static [&'static str] = &[
        "epsilon",
        "s_dense",
        "s_sparse",
        "t_mode",
        "d7_exponent",
        "r0_exponent",
        "cap_basic",
        "cap_degree",
        "cap_unions",
        "cap_spread",
        "bucket_divisor",
        "retries",
        "max_len",
        "degree_floor",
        "extra_levels",
        "k0",
        "seed",
        "asymptotic_mode",
    ];

    /// Set a field by name from its text form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
        where
            T::Err: fmt::Display,
        {
            value.parse().map_err(|e: T::Err| ConfigError::BadValue {
                key: key.into(),
                value: value.into(),
                reason: e.to_string(),
            })
        }
        match key {
            "epsilon" => self.epsilon = parse(key, value)?,
            "s_dense" => self.s_dense = parse(key, value)?,
            "s_sparse" => self.s_sparse = parse(key, value)?,
            "t_mode" => self.t_mode = parse(key, value)?,
            "d7_exponent" => self.d7_exponent = parse(key, value)?,
            "r0_exponent" => self.r0_exponent = parse(key, value)?,
            "cap_basic" => self.cap_basic = parse(key, value)?,
            "cap_degree" => self.cap_degree = parse(key, value)?,
            "cap_unions" => self.cap_unions = parse(key, value)?,
            "cap_spread" => self.cap_spread = parse(key, value)?,
            "bucket_divisor" => self.bucket_divisor = parse(key, value)?,
            "retries" => self.retries = parse(key, value)?,
            "max_len" => self.max_len = parse(key, value)?,
            "degree_floor" => self.degree_floor = parse(key, value)?,
            "extra_levels" => self.extra_levels = parse(key, value)?,
            "k0" => self.k0 = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "asymptotic_mode" => self.asymptotic_mode = parse(key, value)?,
            other => return Err(ConfigError::UnknownKey(other.into())),
        }
        self.validate().map_err(|reason| ConfigError::BadValue { key: key.into(), value: value.into(), reason })
    }

    pub fn validate(&self) -> Result<(), String> {
        let positive = [
            ("epsilon", self.epsilon),
            ("d7_exponent", self.d7_exponent),
            ("r0_exponent", self.r0_exponent),
            ("cap_basic", self.cap_basic),
            ("cap_degree", self.cap_degree),
            ("cap_unions", self.cap_unions),
            ("cap_spread", self.cap_spread),
            ("bucket_divisor", self.bucket_divisor),
            ("degree_floor", self.degree_floor),
            ("k0", self.k0),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(format!("{name} must be positive and finite"));
            }
        }
        if self.epsilon > 1.0 / 48.0 + 1e-12 {
            return Err("epsilon must be at most 1/48".into());
        }
        if !(self.s_dense >= 0.0 && self.s_sparse >= 0.0) {
            return Err("s_dense and s_sparse must be nonnegative".into());
        }
        if self.max_len == 0 {
            return Err("max_len must be positive".into());
        }
        Ok(())
    }

    /// Vertices of degree at least this are high-degree for average degree `d`.
    pub fn high_degree_threshold(&self, d: f64, n: usize) -> f64 {
        let literal = d.powf(self.d7_exponent);
        if self.asymptotic_mode {
            literal
        } else {
            literal.min(n.saturating_sub(1) as f64)
        }
    }

    /// Sub-parts at least this large go to the sparse-expander strategy.
    pub fn sparse_part_threshold(&self, d: f64) -> f64 {
        2f64.powf(d.max(1.0).log2().powf(self.d7_exponent))
    }

    pub fn r0(&self, d: f64) -> usize {
        if self.asymptotic_mode {
            (d.max(2.0).log2().powf(self.r0_exponent)).ceil() as usize
        } else {
            ((d + 2.0).log2().log2().ceil() as usize).max(2)
        }
    }

    pub(crate) fn dense_params(&self, n: usize) -> ExpanderParams {
        let t = match self.t_mode {
            TMode::Tight => 2.0 * n as f64 / 3.0,
            TMode::Full => n as f64,
        };
        ExpanderParams::standard(self.epsilon, self.s_dense, t.max(1.0)).expect("validated config")
    }

    pub(crate) fn sparse_params(&self, d: f64, n: usize) -> ExpanderParams {
        let t = match self.t_mode {
            TMode::Tight => d,
            TMode::Full => n as f64,
        };
        ExpanderParams::standard(self.epsilon, self.s_sparse, t.max(1.0)).expect("validated config")
    }

    pub(crate) fn plain_params(&self) -> ExpanderParams {
        ExpanderParams::standard(self.epsilon, 0.0, 1.0).expect("validated config")
    }

    pub(crate) fn budget(&self, seed: u64) -> SearchBudget {
        SearchBudget { seed, ..SearchBudget::default() }
    }
}

/// Output of one strategy: a verified system, the edges left over, and bookkeeping.
#[derive(Clone, Debug)]
pub struct StageResult {
    pub system: PathSystem,
    pub residual: Graph,
    /// Edges whose completion failed and that were separated by the fallback.
    pub fallback_count: usize,
    pub stage_tag: String,
    pub part_count: usize,
    pub trace: RunTrace,
}

impl StageResult {
    /// Nothing separated; the whole input is left as residual.
    pub fn identity(g: &Graph, tag: &str) -> StageResult {
        StageResult {
            system: PathSystem::empty(Mode::Strong),
            residual: g.clone(),
            fallback_count: 0,
            stage_tag: tag.into(),
            part_count: 0,
            trace: RunTrace::default(),
        }
    }

    /// Accounting check: target and residual partition E(input).
    pub fn check_accounting(&self, input: &Graph) -> Result<(), String> {
        if let Some(e) = self.residual.edges().iter().find(|e| self.system.target.contains(e)) {
            return Err(format!("{}: {e} is both target and residual", self.stage_tag));
        }
        if self.system.target.len() + self.residual.edge_count() != input.edge_count() {
            return Err(format!(
                "{}: target {} + residual {} != input {}",
                self.stage_tag,
                self.system.target.len(),
                self.residual.edge_count(),
                input.edge_count()
            ));
        }
        match input.edges().iter().find(|&&e| !self.system.target.contains(&e) && !self.residual.contains_edge(e)) {
            Some(e) => Err(format!("{}: {e} was lost", self.stage_tag)),
            None => Ok(()),
        }
    }
}

/// Debug-build check that a stage output separates its target.
pub(crate) fn debug_verify(host: &Graph, r: &StageResult) {
    if cfg!(debug_assertions) {
        let report = verify_separation(host, &r.system).expect("stage system is well formed");
        assert!(report.ok, "{} fails at {}", r.stage_tag, report.witness.expect("witness"));
    }
}

/// Matching families built during a run, kept for independent audits.
#[derive(Clone, Debug, Default)]
pub struct RunTrace {
    pub degree_matchings: Vec<DegreeRecord>,
    pub unions: Vec<UnionRecord>,
    pub spreads: Vec<SpreadRecord>,
}

impl RunTrace {
    pub fn extend(&mut self, other: RunTrace) {
        self.degree_matchings.extend(other.degree_matchings);
        self.unions.extend(other.unions);
        self.spreads.extend(other.spreads);
    }
}

#[derive(Clone, Debug)]
pub struct DegreeRecord {
    /// Graph whose degrees define d̄.
    pub host: Graph,
    pub decomposition: Vec<Path>,
    pub matchings: Vec<Vec<Edge>>,
    pub divisor: f64,
}

#[derive(Clone, Debug)]
pub struct UnionRecord {
    pub decomposition: Vec<Path>,
    pub groups: Vec<Vec<Path>>,
    pub d: usize,
}

#[derive(Clone, Debug)]
pub struct SpreadRecord {
    pub host: Graph,
    pub decomposition: Vec<Path>,
    pub matchings: Vec<Vec<Edge>>,
    pub r0: usize,
    pub d: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iterated_log_values() {
        assert_eq!(iterated_log(1), 1);
        assert_eq!(iterated_log(2), 2);
        assert_eq!(iterated_log(4), 3);
        assert_eq!(iterated_log(16), 4);
        // 65536 -> 16 -> 4 -> 2 -> 1 -> 0: five applications reach a value below 1.
        assert_eq!(iterated_log(65536), 5);
    }

    #[test]
    fn config_keys_round_trip() {
        let mut cfg = PipelineConfig::default();
        cfg.set("s_dense", "3.5").unwrap();
        cfg.set("t_mode", "full").unwrap();
        cfg.set("asymptotic_mode", "true").unwrap();
        assert_eq!(cfg.s_dense, 3.5);
        assert_eq!(cfg.t_mode, TMode::Full);
        assert!(cfg.asymptotic_mode);
        assert!(matches!(cfg.set("nope", "1"), Err(ConfigError::UnknownKey(_))));
        assert!(matches!(cfg.set("epsilon", "0.5"), Err(ConfigError::BadValue { .. })));
        assert!(matches!(cfg.set("retries", "x"), Err(ConfigError::BadValue { .. })));
        for key in PipelineConfig::KEYS {
            let mut c = PipelineConfig::default();
            assert!(!matches!(c.set(key, "1"), Err(ConfigError::UnknownKey(_))), "{key}");
        }
    }

    #[test]
    fn thresholds() {
        let cfg = PipelineConfig::default();
        assert_eq!(cfg.high_degree_threshold(16.0, 100), 99.0);
        assert!(cfg.sparse_part_threshold(16.0).is_infinite());
        assert_eq!(cfg.r0(4.0), 2);
        let asym = PipelineConfig::asymptotic(1 << 20);
        assert_eq!(asym.high_degree_threshold(2.0, 10), 128.0);
        assert_eq!(asym.r0(4.0), 32);
    }
}

//! `seppath` command-line front end.

use std::fs;
use std::io::Write as _;
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Arg, ArgMatches, Args, Command, FromArgMatches, Parser, Subcommand};
use rayon::prelude::*;

use seppath::format::{read_system, write_system};
use seppath::strategies::BenchRow;
use seppath::{
    baseline_nlogn, brute_force_min_system, generate, iterated_log, separate_all, singleton_baseline,
    verify_separation, Family, FamilyKind, Graph, Mode, PipelineConfig,
};

#[derive(Parser, Debug)]
#[command(name = "seppath", version, about = "Build and check strongly-separating path systems")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Generate a graph as an edge list.
    Gen {
        /// Family with parameters, e.g. complete(5), gnp(100,0.3), grid(4,5).
        #[arg(long)]
        family: String,
        /// Required for random families.
        #[arg(long)]
        seed: Option<u64>,
        /// Output file (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the separation pipeline on a graph.
    Separate {
        #[arg(long)]
        input: PathBuf,
        /// System output file (stdout if omitted).
        #[arg(long)]
        out_system: Option<PathBuf>,
        /// CSV report output file.
        #[arg(long)]
        out_report: Option<PathBuf>,
        /// Fill the elapsed_ms column.
        #[arg(long)]
        timings: bool,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Check a path system against a graph; prints a witness on failure.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        system: PathBuf,
        /// Overrides the mode recorded in the system file.
        #[arg(long)]
        mode: Option<Mode>,
    },
    /// Exact minimum separating system of a tiny graph.
    Oracle {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value = "strong")]
        mode: Mode,
        /// Largest system size to search.
        #[arg(long, default_value_t = 12)]
        cap: usize,
        /// System output file (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the pipeline over a grid of families, sizes and seeds.
    Bench {
        /// Comma-separated families without sizes, e.g. gnp:0.3,random_regular:4,grid.
        #[arg(long, value_delimiter = ',', required = true)]
        families: Vec<String>,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        seeds: Vec<u64>,
        #[arg(long)]
        out: PathBuf,
        /// Fill the runtime_ms column.
        #[arg(long)]
        timings: bool,
        #[command(flatten)]
        overrides: Overrides,
    },
}

/// `--<key>=<value>` for every pipeline config field.
#[derive(Clone, Debug, Default)]
struct Overrides(Vec<(String, String)>);

impl FromArgMatches for Overrides {
    fn from_arg_matches(m: &ArgMatches) -> Result<Self, clap::Error> {
        let pairs = PipelineConfig::KEYS
            .iter()
            .filter_map(|&k| m.get_one::<String>(k).map(|v| (k.to_string(), v.clone())))
            .collect();
        Ok(Overrides(pairs))
    }

    fn update_from_arg_matches(&mut self, m: &ArgMatches) -> Result<(), clap::Error> {
        *self = Self::from_arg_matches(m)?;
        Ok(())
    }
}

impl Args for Overrides {
    fn augment_args(cmd: Command) -> Command {
        PipelineConfig::KEYS.iter().fold(cmd, |cmd, &key| {
            cmd.arg(Arg::new(key).long(key).value_name("VALUE").help_heading("Pipeline config"))
        })
    }

    fn augment_args_for_update(cmd: Command) -> Command {
        Self::augment_args(cmd)
    }
}

impl Overrides {
    fn config(&self) -> Result<PipelineConfig, Failure> {
        let mut cfg = PipelineConfig::default();
        for (k, v) in &self.0 {
            cfg.set(k, v).map_err(|e| Failure::Usage(e.to_string()))?;
        }
        Ok(cfg)
    }

    fn has(&self, key: &str) -> bool {
        self.0.iter().any(|(k, _)| k == key)
    }
}

enum Failure {
    Verify,
    Usage(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verify => 1,
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
        }
    }
}

fn io_err(path: &FsPath, e: impl std::fmt::Display) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

fn read_text(path: &FsPath) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| io_err(path, e))
}

fn read_graph(path: &FsPath) -> Result<Graph, Failure> {
    Graph::from_edge_list(&read_text(path)?).map_err(|e| io_err(path, e))
}

/// Write via a temporary file in the target directory, then rename.
fn write_atomic(path: &FsPath, text: &str) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => FsPath::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| io_err(path, e))?;
    tmp.write_all(text.as_bytes()).map_err(|e| io_err(path, e))?;
    tmp.persist(path).map_err(|e| io_err(path, e.error))?;
    Ok(())
}

fn emit(out: Option<&FsPath>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => write_atomic(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Gen { family, seed, out } => {
            let fam: Family = family.parse().map_err(|e: seppath::generate::GenerateError| Failure::Usage(e.to_string()))?;
            let random = matches!(fam, Family::Gnp(..) | Family::RandomRegular(..));
            if random && seed.is_none() {
                return Err(Failure::Usage(format!("--seed is required for {fam}")));
            }
            let g = generate(&fam, seed.unwrap_or(0)).map_err(|e| Failure::Usage(e.to_string()))?;
            emit(out.as_deref(), &g.to_edge_list())
        }
        Cmd::Separate { input, out_system, out_report, timings, overrides } => {
            if !overrides.has("seed") {
                return Err(Failure::Usage("--seed is required".into()));
            }
            let cfg = overrides.config()?;
            let g = read_graph(&input)?;
            let (system, report) = separate_all(&g, &cfg, cfg.seed);
            emit(out_system.as_deref(), &write_system(&system))?;
            if let Some(p) = out_report {
                write_atomic(&p, &report.to_csv(timings))?;
            }
            eprintln!("{} paths for {} edges; verified: {}", system.len(), g.edge_count(), report.verified);
            if report.verified {
                Ok(())
            } else {
                Err(Failure::Verify)
            }
        }
        Cmd::Verify { graph, system, mode } => {
            let g = read_graph(&graph)?;
            let doc = read_system(&read_text(&system)?).map_err(|e| io_err(&system, e))?;
            let mut sys = doc.into_system(|| g.edge_set());
            if let Some(m) = mode {
                sys.mode = m;
            }
            let report = match verify_separation(&g, &sys) {
                Ok(r) => r,
                Err(e) => {
                    println!("invalid system: {e}");
                    return Err(Failure::Verify);
                }
            };
            match report.witness {
                None => {
                    println!("ok: {} paths separate {} edges ({})", sys.len(), sys.target.len(), sys.mode);
                    Ok(())
                }
                Some(w) => {
                    println!("not separating: {w}");
                    Err(Failure::Verify)
                }
            }
        }
        Cmd::Oracle { graph, mode, cap, out } => {
            let g = read_graph(&graph)?;
            let sys = brute_force_min_system(&g, mode, cap).map_err(|e| Failure::Usage(e.to_string()))?;
            println!("minimum {mode} size: {}", sys.len());
            emit(out.as_deref(), &write_system(&sys))
        }
        Cmd::Bench { families, sizes, seeds, out, timings, overrides } => {
            let cfg = overrides.config()?;
            let kinds: Vec<FamilyKind> = families
                .iter()
                .map(|f| f.parse().map_err(|e: seppath::generate::GenerateError| Failure::Usage(e.to_string())))
                .collect::<Result<_, _>>()?;
            let mut jobs = Vec::new();
            for kind in &kinds {
                for &n in &sizes {
                    for &seed in &seeds {
                        jobs.push((kind, n, seed));
                    }
                }
            }
            let rows: Vec<BenchRow> = jobs
                .par_iter()
                .map(|&(kind, n, seed)| bench_row(kind, n, seed, &cfg, timings))
                .collect::<Result<_, _>>()?;
            write_atomic(&out, &BenchRow::to_csv(&rows))
        }
    }
}

fn bench_row(kind: &FamilyKind, n: usize, seed: u64, cfg: &PipelineConfig, timings: bool) -> Result<BenchRow, Failure> {
    let g = generate(&kind.at_size(n), seed).map_err(|e| Failure::Usage(e.to_string()))?;
    let started = Instant::now();
    let (system, report) = separate_all(&g, cfg, seed);
    let runtime = started.elapsed().as_millis() as u64;
    if !report.verified {
        return Err(Failure::Verify);
    }
    let order = g.order().max(1) as f64;
    let size = system.len() as f64;
    Ok(BenchRow {
        family: kind.to_string(),
        n: g.order(),
        e: g.edge_count(),
        seed,
        pipeline_size: system.len(),
        baseline_size: baseline_nlogn(&g).len(),
        singleton_size: singleton_baseline(&g).len(),
        fallback_fraction: report.fallback_total() as f64 / g.edge_count().max(1) as f64,
        runtime_ms: timings.then_some(runtime),
        size_over_n: size / order,
        size_over_n_logstar: size / (order * iterated_log(g.order().max(1) as u64) as f64),
    })
}

fn main() -> ExitCode {
    env_logger::init();
    if let Some(t) = std::env::var("SEPPATH_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Verify => eprintln!("verification failed"),
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::Io(m) => eprintln!("error: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}

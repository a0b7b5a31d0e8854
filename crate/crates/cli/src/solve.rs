//! `solve`: dispatch an instance to one of the solvers.

use std::path::PathBuf;
use std::sync::mpsc;
use std::time::{Duration, Instant};

use clap::{Args, Subcommand};
use nagl_core::approx::{baker_ptas, coloring_approx, greedy_coloring};
use nagl_core::graph::square_graph;
use nagl_core::io::coloring::read_coloring;
use nagl_core::io::pace::import_pace;
use nagl_core::io::{InstanceFile, LoadedInstance, ResultRecord};
use nagl_core::oracle::{brute_force_budgeted, brute_force_opt, DEFAULT_CAP};
use nagl_core::submod::{budget_rule, greedy_budgeted};
use nagl_core::{
    solve_exact, BakerOptions, CfdpOptions, ExactOptions, GreedyOptions, NaglError, ProperColoring, Result, Timings,
};

#[derive(Args)]
pub struct SolveArgs {
    instance: PathBuf,
    #[command(subcommand)]
    method: Method,
    /// PACE .td decomposition of the squared graph, replacing min-fill.
    #[arg(long, global = true)]
    td: Option<PathBuf>,
    /// Skip labeling reconstruction (exact solver).
    #[arg(long, global = true)]
    value_only: bool,
    /// Worker threads; 0 uses every core, 1 runs sequentially.
    #[arg(long, default_value_t = 0, global = true)]
    threads: usize,
    /// Refuse decompositions wider than this.
    #[arg(long, global = true)]
    width_cap: Option<usize>,
    /// Wall-clock limit in seconds.
    #[arg(long, global = true)]
    timeout: Option<f64>,
    /// Leave the labeling out of the record.
    #[arg(long, global = true)]
    no_labeling: bool,
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Clone)]
enum Method {
    /// Exact dynamic program over a decomposition of the squared graph.
    Exact,
    /// Best color class of a proper coloring of the squared graph.
    Color {
        /// Coloring file; greedy coloring when omitted.
        #[arg(long)]
        coloring: Option<PathBuf>,
    },
    /// Shifting scheme with guarantee 1 - epsilon.
    Baker {
        epsilon: f64,
        /// BFS root, in file ids when the graph came from a file.
        #[arg(long)]
        root: Option<u64>,
        /// Reward neighborhood radius in the instance graph.
        #[arg(long, default_value_t = 1)]
        radius: usize,
    },
    /// Budgeted greedy; budget defaults to min(floor(0.02 n), 400).
    Greedy { budget: Option<usize> },
    /// Exhaustive search, optionally over active sets of size <= budget.
    Brute {
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u128,
    },
}

struct Config {
    td: Option<PathBuf>,
    value_only: bool,
    parallel: bool,
    width_cap: Option<usize>,
    deadline: Option<Instant>,
}

impl Config {
    fn cfdp(&self) -> CfdpOptions {
        CfdpOptions {
            width_cap: self.width_cap,
            parallel: self.parallel,
            deadline: self.deadline,
            ..Default::default()
        }
    }
}

fn labels_of(rec: ResultRecord, labels: Vec<usize>) -> ResultRecord {
    ResultRecord {
        labeling: Some(labels),
        ..rec
    }
}

fn solve_with(inst: &InstanceFile, loaded: &LoadedInstance, method: &Method, cfg: &Config) -> Result<ResultRecord> {
    let rs = &loaded.rewards;
    let start = Instant::now();
    let mut rec = match method {
        Method::Exact => {
            let td = match &cfg.td {
                Some(p) => Some(import_pace(p, &square_graph(&loaded.graph))?),
                None => None,
            };
            let out = solve_exact(
                rs,
                &ExactOptions {
                    td,
                    value_only: cfg.value_only,
                    cfdp: cfg.cfdp(),
                },
            )?;
            let mut rec = ResultRecord::new("exact", out.value)
                .param("value_only", cfg.value_only)
                .detail("nodes", out.stats.nodes)
                .detail("height", out.stats.height)
                .detail("oracle_calls", out.stats.oracle_calls)
                .detail("peak_live_tables", out.stats.peak_live_tables)
                .detail("peak_live_states", out.stats.peak_live_states)
                .detail("integer_mode", out.stats.integer_mode);
            rec.timings = out.timings;
            rec.width = Some(out.width);
            rec.states = Some(u64::try_from(out.stats.total_states).unwrap_or(u64::MAX));
            match out.labeling {
                Some(x) => labels_of(rec, x.labels),
                None => rec,
            }
        }
        Method::Color { coloring } => {
            let h = square_graph(&loaded.graph);
            let pc = match coloring {
                Some(p) => ProperColoring::new(&h, read_coloring(p, h.num_vertices())?)?,
                None => greedy_coloring(&h),
            };
            let out = coloring_approx(rs, &pc, cfg.parallel)?;
            let rec = ResultRecord::new("color", out.value)
                .param("coloring", coloring.as_ref().map_or("greedy".into(), |p| p.display().to_string()))
                .detail("colors", pc.q)
                .detail("best_color", out.best_color)
                .detail("local_evaluations", out.local_evaluations);
            labels_of(rec, out.labeling.labels)
        }
        Method::Baker { epsilon, root, radius } => {
            let root = match (root, &loaded.ids) {
                (None, _) => 0,
                (Some(id), Some(ids)) => ids
                    .iter()
                    .position(|x| x == id)
                    .ok_or_else(|| NaglError::invalid(format!("root id {id} not in graph file")))?,
                (Some(id), None) => *id as usize,
            };
            let opts = BakerOptions {
                epsilon: *epsilon,
                root,
                radius: *radius,
                parallel: cfg.parallel,
                cfdp: cfg.cfdp(),
            };
            let out = baker_ptas(&loaded.graph, rs, &opts)?;
            let rec = ResultRecord::new("baker", out.value)
                .param("epsilon", *epsilon)
                .param("root", root)
                .param("radius", *radius)
                .detail("k", out.k)
                .detail("best_offset", out.best_offset)
                .detail("guarantee", out.guarantee(*radius))
                .detail("candidates", serde_json::to_value(&out.candidates)?);
            let width = out.candidates.iter().map(|c| c.max_width).max();
            ResultRecord {
                width,
                ..labels_of(rec, out.labeling.labels)
            }
        }
        Method::Greedy { budget } => {
            let n = loaded.graph.num_vertices();
            let k = budget.unwrap_or_else(|| budget_rule(n));
            let opts = GreedyOptions {
                parallel: cfg.parallel,
                upper_bound: true,
                ..Default::default()
            };
            let out = greedy_budgeted(rs, k, &opts)?;
            let rec = ResultRecord::new("greedy", out.set.value)
                .param("budget", k)
                .detail("members", out.set.sorted())
                .detail("upper_bound", out.upper_bound)
                .detail("marginal_evaluations", out.marginal_evaluations);
            labels_of(rec, out.set.labels(n))
        }
        Method::Brute { budget, cap } => match budget {
            Some(k) => {
                let (set, value) = brute_force_budgeted(rs, *k, *cap)?;
                let rec = ResultRecord::new("brute", value)
                    .param("budget", *k)
                    .detail("members", set.sorted());
                labels_of(rec, set.labels(loaded.graph.num_vertices()))
            }
            None => {
                let (x, value) = brute_force_opt(rs, *cap)?;
                labels_of(ResultRecord::new("brute", value), x.labels)
            }
        },
    };
    if !matches!(method, Method::Exact) {
        rec.timings = Timings {
            solve: start.elapsed().as_secs_f64(),
            ..Default::default()
        };
    }
    rec.seed = inst.metadata.get("seed").and_then(|s| s.as_u64());
    Ok(rec)
}

pub fn run(args: SolveArgs) -> Result<()> {
    let (inst, loaded) = InstanceFile::open(&args.instance)?;
    let limit = match args.timeout {
        Some(s) if s.is_finite() && s > 0.0 => Some(Duration::from_secs_f64(s)),
        Some(s) => return Err(NaglError::invalid(format!("timeout must be positive, got {s}"))),
        None => None,
    };
    let cfg = Config {
        td: args.td.clone(),
        value_only: args.value_only,
        parallel: args.threads != 1,
        width_cap: args.width_cap,
        deadline: limit.map(|d| Instant::now() + d),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads)
        .build()
        .map_err(|e| NaglError::invalid(format!("thread pool: {e}")))?;
    let method = args.method.clone();

    // Cooperative deadlines cover the exact solver; the watchdog covers the rest.
    let (tx, rx) = mpsc::channel();
    std::thread::spawn(move || {
        let out = pool.install(|| solve_with(&inst, &loaded, &method, &cfg));
        let _ = tx.send(out);
    });
    let mut rec = match limit {
        Some(d) => rx.recv_timeout(d).map_err(|_| NaglError::Timeout)??,
        None => rx.recv().expect("solver thread panicked")?,
    };
    if args.no_labeling {
        rec.labeling = None;
    }
    crate::emit(args.output.as_deref(), &rec.to_json())
}

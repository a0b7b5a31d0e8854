//! Benchmark sweeps with CSV output.

use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use clap::{Args, ValueEnum};
use nagl_core::graph::bfs_induced_prefix;
use nagl_core::io::{read_graph_file, GraphFormat};
use nagl_core::oracle::{brute_force_budgeted, brute_force_opt, DEFAULT_CAP};
use nagl_core::rewards::{build_random_table_system, random_max_type_gadget, DEFAULT_TABLE_CAP};
use nagl_core::submod::{budget_rule, greedy_budgeted};
use nagl_core::{
    generators, solve_exact, CfdpOptions, ExactOptions, Graph, GreedyOptions, NaglError, Result, RewardSystem,
    TableDistribution,
};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Args)]
pub struct BenchArgs {
    #[arg(value_enum)]
    scenario: Scenario,
    /// Road graph (MatrixMarket or edge list); synthetic stand-in when omitted.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// BFS start vertex, as a file id.
    #[arg(long)]
    start: Option<u64>,
    /// Comma-separated sizes: prefix sizes n, or rungs r for scenario2.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// Random objectives per size.
    #[arg(long, default_value_t = 5)]
    objectives: usize,
    /// Timed repetitions per objective.
    #[arg(long, default_value_t = 5)]
    reps: usize,
    /// Wall-clock budget per run in seconds.
    #[arg(long, default_value_t = 600.0)]
    timeout: f64,
    /// Concurrent runs.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Budget for the small brute-force slice of scenario3.
    #[arg(long, default_value_t = 3)]
    small_budget: usize,
    /// CSV path (stdout when omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Scenario {
    /// Exact solver on road prefixes, L = 3.
    Scenario1,
    /// Exact solver on 2 x r ladders, L = 3.
    Scenario2,
    /// Budgeted greedy on road prefixes with max-type rewards.
    Scenario3,
}

#[derive(Debug, Default, Serialize)]
struct Row {
    scenario: &'static str,
    graph: String,
    n: usize,
    edges: usize,
    labels: usize,
    budget: Option<usize>,
    objective: Option<u64>,
    width: Option<usize>,
    runs: usize,
    timeouts: usize,
    mean_s: Option<f64>,
    sd_s: Option<f64>,
    value: Option<f64>,
    reference: Option<f64>,
    ref_kind: Option<&'static str>,
    ratio: Option<f64>,
    check: Option<&'static str>,
}

const SYNTHETIC_SIDE: usize = 120;
const SYNTHETIC_EXTRA: f64 = 0.05;

fn mean_sd(xs: &[f64]) -> (Option<f64>, Option<f64>) {
    if xs.is_empty() {
        return (None, None);
    }
    let m = xs.iter().sum::<f64>() / xs.len() as f64;
    if xs.len() < 2 {
        return (Some(m), Some(0.0));
    }
    let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64;
    (Some(m), Some(var.sqrt()))
}

/// Source graph and BFS start for the road scenarios.
fn road_source(args: &BenchArgs) -> Result<(Graph, usize, String)> {
    match &args.graph {
        Some(path) => {
            let ext = read_graph_file(path, GraphFormat::from_path(path))?;
            let start = match args.start {
                Some(id) => ext
                    .internal(id)
                    .ok_or_else(|| NaglError::invalid(format!("start {id} not in {}", path.display())))?,
                None => 0,
            };
            Ok((ext.graph, start, path.display().to_string()))
        }
        None => {
            log::warn!("no road graph given; using a synthetic road-like grid");
            let g = generators::road_like(SYNTHETIC_SIDE, SYNTHETIC_SIDE, SYNTHETIC_EXTRA, args.seed);
            Ok((g, 0, format!("synthetic-{SYNTHETIC_SIDE}x{SYNTHETIC_SIDE}")))
        }
    }
}

struct ExactJob {
    size: usize,
    objective: u64,
    rs: RewardSystem,
}

struct ExactRun {
    width: Option<usize>,
    secs: Vec<f64>,
    timeouts: usize,
}

fn time_exact(rs: &RewardSystem, reps: usize, limit: Duration) -> Result<ExactRun> {
    let mut run = ExactRun {
        width: None,
        secs: Vec::new(),
        timeouts: 0,
    };
    for _ in 0..reps {
        let opts = ExactOptions {
            value_only: true,
            cfdp: CfdpOptions {
                deadline: Some(Instant::now() + limit),
                ..Default::default()
            },
            ..Default::default()
        };
        let t = Instant::now();
        match solve_exact(rs, &opts) {
            Ok(out) => {
                run.secs.push(t.elapsed().as_secs_f64());
                run.width = Some(out.width);
            }
            Err(NaglError::Timeout) => run.timeouts += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(run)
}

fn exact_sweep(
    args: &BenchArgs,
    name: &'static str,
    graphs: Vec<(usize, Graph, String)>,
    pool: &rayon::ThreadPool,
) -> Result<Vec<Row>> {
    let labels = 3;
    let limit = Duration::from_secs_f64(args.timeout);
    let mut jobs = Vec::new();
    let mut meta = Vec::new();
    for (size, g, label) in graphs {
        let g = Arc::new(g);
        meta.push((size, g.num_vertices(), g.num_edges(), label));
        for j in 0..args.objectives as u64 {
            let seed = args.seed + j;
            let rs = build_random_table_system(g.clone(), labels, seed, TableDistribution::Uniform01, DEFAULT_TABLE_CAP)?;
            jobs.push(ExactJob {
                size,
                objective: seed,
                rs,
            });
        }
    }
    let runs: Vec<ExactRun> =
        pool.install(|| jobs.par_iter().map(|j| time_exact(&j.rs, args.reps, limit)).collect::<Result<_>>())?;
    let mut rows = Vec::new();
    for (size, n, m, label) in meta {
        let mut secs = Vec::new();
        let mut timeouts = 0;
        let mut width = None;
        for (job, run) in jobs.iter().zip(&runs) {
            if job.size != size {
                continue;
            }
            secs.extend_from_slice(&run.secs);
            timeouts += run.timeouts;
            width = width.max(run.width);
            log::info!("{name} n={n} objective {} done", job.objective);
        }
        let (mean_s, sd_s) = mean_sd(&secs);
        rows.push(Row {
            scenario: name,
            graph: label,
            n,
            edges: m,
            labels,
            width,
            runs: secs.len(),
            timeouts,
            mean_s,
            sd_s,
            ..Default::default()
        });
    }
    Ok(rows)
}

fn self_check(name: &'static str, g: Graph, label: String, seed: u64) -> Result<Row> {
    let g = Arc::new(g);
    let rs = build_random_table_system(g.clone(), 3, seed, TableDistribution::Integer { lo: -9, hi: 9 }, DEFAULT_TABLE_CAP)?;
    let exact = solve_exact(&rs, &ExactOptions::default())?.value;
    let (_, brute) = brute_force_opt(&rs, DEFAULT_CAP)?;
    Ok(Row {
        scenario: name,
        graph: label,
        n: g.num_vertices(),
        edges: g.num_edges(),
        labels: 3,
        objective: Some(seed),
        value: Some(exact),
        reference: Some(brute),
        ref_kind: Some("exact"),
        check: Some(if exact == brute { "pass" } else { "fail" }),
        ..Default::default()
    })
}

fn scenario1(args: &BenchArgs, pool: &rayon::ThreadPool) -> Result<Vec<Row>> {
    let (g, start, label) = road_source(args)?;
    let sizes = args.sizes.clone().unwrap_or_else(|| vec![40, 100, 200, 300, 400, 500]);
    let (small, _) = bfs_induced_prefix(&g, start, 10.min(g.num_vertices()))?;
    let mut rows = vec![self_check("scenario1", small, format!("{label}-prefix"), args.seed)?];
    let mut graphs = Vec::new();
    for n in sizes {
        let (sub, _) = bfs_induced_prefix(&g, start, n)?;
        graphs.push((n, sub, format!("{label}-prefix")));
    }
    rows.extend(exact_sweep(args, "scenario1", graphs, pool)?);
    Ok(rows)
}

fn scenario2(args: &BenchArgs, pool: &rayon::ThreadPool) -> Result<Vec<Row>> {
    let sizes = args
        .sizes
        .clone()
        .unwrap_or_else(|| vec![20, 50, 100, 200, 500, 1000, 2000, 5000, 10000]);
    let mut rows = vec![self_check("scenario2", generators::ladder(3), "ladder".into(), args.seed)?];
    let graphs = sizes.into_iter().map(|r| (r, generators::ladder(r), "ladder".to_string())).collect();
    let sweep = exact_sweep(args, "scenario2", graphs, pool)?;
    let per_vertex: Vec<f64> = sweep.iter().filter_map(|r| r.mean_s.map(|t| t / r.n as f64)).collect();
    if per_vertex.len() >= 2 {
        let lo = per_vertex.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = per_vertex.iter().cloned().fold(0.0, f64::max);
        log::info!("scenario2 per-vertex time spread {:.2}x", hi / lo);
    }
    rows.extend(sweep);
    Ok(rows)
}

struct GreedyJob {
    graph: String,
    g: Arc<Graph>,
    budget: usize,
    objective: u64,
}

fn greedy_row(job: &GreedyJob, reps: usize) -> Result<Row> {
    let rs = random_max_type_gadget(job.g.clone(), job.objective)?;
    let opts = GreedyOptions {
        upper_bound: true,
        ..Default::default()
    };
    let mut secs = Vec::new();
    let mut outcome = None;
    for _ in 0..reps.max(1) {
        let t = Instant::now();
        let out = greedy_budgeted(&rs, job.budget, &opts)?;
        secs.push(t.elapsed().as_secs_f64());
        outcome = Some(out);
    }
    let out = outcome.expect("at least one repetition");
    let value = out.set.value;
    let (reference, ref_kind) = match brute_force_budgeted(&rs, job.budget, DEFAULT_CAP) {
        Ok((_, v)) => (Some(v), Some("exact")),
        Err(NaglError::CapExceeded { .. }) => (out.upper_bound, Some("bound")),
        Err(e) => return Err(e),
    };
    let ratio = reference.map(|r| if r > 0.0 { value / r } else { 1.0 });
    let check = match (ref_kind, ratio) {
        (Some("exact"), Some(q)) => Some(if q >= 1.0 - (-1.0f64).exp() - 1e-12 { "pass" } else { "fail" }),
        _ => None,
    };
    let (mean_s, sd_s) = mean_sd(&secs);
    Ok(Row {
        scenario: "scenario3",
        graph: job.graph.clone(),
        n: job.g.num_vertices(),
        edges: job.g.num_edges(),
        labels: 2,
        budget: Some(job.budget),
        objective: Some(job.objective),
        runs: secs.len(),
        mean_s,
        sd_s,
        value: Some(value),
        reference,
        ref_kind,
        ratio,
        check,
        ..Default::default()
    })
}

fn scenario3(args: &BenchArgs, pool: &rayon::ThreadPool) -> Result<Vec<Row>> {
    let mut jobs = Vec::new();
    let objectives = (0..args.objectives as u64).map(|j| args.seed + j);
    for n in [8, 10, 12, 14] {
        let g = Arc::new(generators::erdos_renyi(n, 0.3, args.seed + n as u64));
        for obj in objectives.clone() {
            jobs.push(GreedyJob {
                graph: "synthetic-gnp".into(),
                g: g.clone(),
                budget: args.small_budget,
                objective: obj,
            });
        }
    }
    let (g, start, label) = road_source(args)?;
    let sizes = args.sizes.clone().unwrap_or_else(|| vec![100, 200, 500, 1000, 2000, 5000]);
    for n in sizes {
        let (sub, _) = bfs_induced_prefix(&g, start, n)?;
        let sub = Arc::new(sub);
        for obj in objectives.clone() {
            jobs.push(GreedyJob {
                graph: format!("{label}-prefix"),
                g: sub.clone(),
                budget: budget_rule(n),
                objective: obj,
            });
        }
    }
    pool.install(|| jobs.par_iter().map(|j| greedy_row(j, args.reps)).collect())
}

pub fn run(args: BenchArgs) -> Result<()> {
    if !(args.timeout.is_finite() && args.timeout > 0.0) {
        return Err(NaglError::invalid(format!("timeout must be positive, got {}", args.timeout)));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.workers.max(1))
        .build()
        .map_err(|e| NaglError::invalid(format!("thread pool: {e}")))?;
    let rows = match args.scenario {
        Scenario::Scenario1 => scenario1(&args, &pool)?,
        Scenario::Scenario2 => scenario2(&args, &pool)?,
        Scenario::Scenario3 => scenario3(&args, &pool)?,
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in &rows {
        w.serialize(row).map_err(|e| NaglError::invalid(format!("csv: {e}")))?;
    }
    let bytes = w.into_inner().map_err(|e| NaglError::invalid(format!("csv: {e}")))?;
    crate::emit(args.output.as_deref(), &String::from_utf8(bytes).expect("csv is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_statistics() {
        assert_eq!(mean_sd(&[]), (None, None));
        assert_eq!(mean_sd(&[2.0]), (Some(2.0), Some(0.0)));
        let (m, s) = mean_sd(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, Some(2.5));
        assert!((s.unwrap() - (5.0f64 / 3.0).sqrt()).abs() < 1e-12);
    }
}

//! Instance generators.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Subcommand, ValueEnum};
use nagl_core::cnf::Cnf;
use nagl_core::generators;
use nagl_core::graph::bfs_induced_prefix;
use nagl_core::io::{read_graph_file, GraphFormat, InstanceFile, RewardSpec};
use nagl_core::rewards::sat_star_leaves;
use nagl_core::{Graph, NaglError, Result, TableDistribution};

#[derive(Args)]
pub struct GenArgs {
    #[command(subcommand)]
    family: Family,
    /// Alphabet size L.
    #[arg(long, default_value_t = 2, global = true)]
    labels: usize,
    #[arg(long, value_enum, default_value_t = RewardKind::Random, global = true)]
    rewards: RewardKind,
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Table distribution: uniform01, uniform:LO:HI or int:LO:HI.
    #[arg(long, default_value = "uniform01", global = true)]
    dist: Dist,
    /// Output path (stdout when omitted).
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Family {
    /// 2 x r ladder.
    Ladder { rungs: usize },
    /// Star with t leaves.
    Star { leaves: usize },
    Grid { width: usize, height: usize },
    Path { n: usize },
    /// BFS-induced prefix of a MatrixMarket or edge-list graph.
    RoadPrefix {
        file: PathBuf,
        /// Root vertex id as written in the file.
        root: u64,
        n: usize,
    },
    /// Star gadget encoding a DIMACS CNF.
    SatStar { cnf: PathBuf, labels: usize },
    /// Random tables on the graph of an existing instance or graph file.
    RandomTables {
        seed: u64,
        dist: Dist,
        /// Instance (.json) or graph file supplying the topology.
        #[arg(long)]
        graph: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RewardKind {
    Zero,
    Mis,
    MaxType,
    Random,
}

#[derive(Clone, Copy, Debug)]
pub struct Dist(pub TableDistribution);

impl FromStr for Dist {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || format!("bad distribution '{s}' (uniform01, uniform:LO:HI, int:LO:HI)");
        let d = match parts.as_slice() {
            ["uniform01"] => TableDistribution::Uniform01,
            ["uniform", lo, hi] => TableDistribution::Uniform {
                lo: lo.parse().map_err(|_| bad())?,
                hi: hi.parse().map_err(|_| bad())?,
            },
            ["int", lo, hi] => TableDistribution::Integer {
                lo: lo.parse().map_err(|_| bad())?,
                hi: hi.parse().map_err(|_| bad())?,
            },
            _ => return Err(bad()),
        };
        Ok(Dist(d))
    }
}

impl std::fmt::Display for Dist {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.0 {
            TableDistribution::Uniform01 => write!(f, "uniform01"),
            TableDistribution::Uniform { lo, hi } => write!(f, "uniform:{lo}:{hi}"),
            TableDistribution::Integer { lo, hi } => write!(f, "int:{lo}:{hi}"),
        }
    }
}

fn reward_spec(args: &GenArgs) -> RewardSpec {
    match args.rewards {
        RewardKind::Zero => RewardSpec::Constant { value: 0.0 },
        RewardKind::Mis => RewardSpec::Mis,
        RewardKind::MaxType => RewardSpec::RandomMaxType { seed: args.seed },
        RewardKind::Random => RewardSpec::RandomTables {
            seed: args.seed,
            distribution: args.dist.0,
        },
    }
}

fn family_instance(g: &Graph, args: &GenArgs, name: &str, params: serde_json::Value) -> InstanceFile {
    let mut inst = InstanceFile::inline(g, args.labels, reward_spec(args)).with_metadata("generator", name);
    inst = inst.with_metadata("params", params);
    if matches!(args.rewards, RewardKind::MaxType | RewardKind::Random) {
        inst = inst.with_metadata("seed", args.seed);
    }
    inst
}

pub fn build(args: &GenArgs) -> Result<InstanceFile> {
    use serde_json::json;
    let inst = match &args.family {
        Family::Ladder { rungs } => {
            family_instance(&generators::ladder(*rungs), args, "ladder", json!({ "rungs": rungs }))
        }
        Family::Star { leaves } => {
            family_instance(&generators::star(*leaves), args, "star", json!({ "leaves": leaves }))
        }
        Family::Grid { width, height } => family_instance(
            &generators::grid(*width, *height),
            args,
            "grid",
            json!({ "width": width, "height": height }),
        ),
        Family::Path { n } => family_instance(&generators::path(*n), args, "path", json!({ "n": n })),
        Family::RoadPrefix { file, root, n } => {
            let ext = read_graph_file(file, GraphFormat::from_path(file))?;
            let r = ext
                .internal(*root)
                .ok_or_else(|| NaglError::invalid(format!("root {root} not found in {}", file.display())))?;
            let (g, mapping) = bfs_induced_prefix(&ext.graph, r, *n)?;
            let ids: Vec<u64> = mapping.iter().map(|&v| ext.ids[v]).collect();
            family_instance(
                &g,
                args,
                "road-prefix",
                json!({ "file": file, "root": root, "n": n }),
            )
            .with_metadata("ids", ids)
        }
        Family::SatStar { cnf, labels } => {
            let formula = Cnf::read_dimacs(cnf)?;
            let t = sat_star_leaves(formula.num_vars, *labels);
            InstanceFile::inline(&generators::star(t), *labels, RewardSpec::SatStar { cnf: formula })
                .with_metadata("generator", "sat-star")
                .with_metadata("params", json!({ "cnf": cnf, "labels": labels }))
        }
        Family::RandomTables { seed, dist, graph } => {
            let g = if graph.extension().is_some_and(|e| e == "json") {
                let (_, loaded) = InstanceFile::open(graph)?;
                (*loaded.graph).clone()
            } else {
                read_graph_file(graph, GraphFormat::from_path(graph))?.graph
            };
            let spec = RewardSpec::RandomTables {
                seed: *seed,
                distribution: dist.0,
            };
            InstanceFile::inline(&g, args.labels, spec)
                .with_metadata("generator", "random-tables")
                .with_metadata("params", json!({ "graph": graph, "dist": dist.to_string() }))
                .with_metadata("seed", *seed)
        }
    };
    // reject specs that cannot be built before writing anything
    inst.build(std::path::Path::new("."))?;
    Ok(inst)
}

pub fn run(args: GenArgs) -> Result<()> {
    let inst = build(&args)?;
    crate::emit(args.output.as_deref(), &inst.to_json())
}

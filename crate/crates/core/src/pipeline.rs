//! Square, decompose, nice-ify, assign and solve in one call.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::cfdp::{self, CfdpOptions, NodeTrace, SolveStats};
use crate::decomposition::{assign_bags, make_nice, min_fill_decomposition, TreeDecomposition};
use crate::error::Result;
use crate::graph::square_graph;
use crate::rewards::{Labeling, RewardSystem};

#[derive(Debug, Clone, Default)]
pub struct ExactOptions {
    /// Decomposition of G² to use instead of min-fill.
    pub td: Option<TreeDecomposition>,
    pub value_only: bool,
    pub cfdp: CfdpOptions,
}

/// Wall time per stage, in seconds.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub square: f64,
    pub decompose: f64,
    pub nice: f64,
    pub solve: f64,
}

impl Timings {
    pub fn total(&self) -> f64 {
        self.square + self.decompose + self.nice + self.solve
    }
}

#[derive(Debug, Clone)]
pub struct ExactOutcome {
    pub value: f64,
    pub labeling: Option<Labeling>,
    pub width: usize,
    pub stats: SolveStats,
    pub timings: Timings,
    pub trace: Option<Vec<NodeTrace>>,
}

pub fn solve_exact(rs: &RewardSystem, opts: &ExactOptions) -> Result<ExactOutcome> {
    let g = rs.graph();
    let mut timings = Timings::default();

    let t = Instant::now();
    let h = square_graph(g);
    timings.square = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let computed;
    let td = match &opts.td {
        Some(td) => td,
        None => {
            computed = min_fill_decomposition(&h);
            &computed
        }
    };
    timings.decompose = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let nice = make_nice(td, &h)?;
    let ba = assign_bags(&nice, g)?;
    timings.nice = t.elapsed().as_secs_f64();
    log::debug!(
        "n={} width={} nodes={} height={}",
        g.num_vertices(),
        nice.width,
        nice.len(),
        nice.height()
    );

    let t = Instant::now();
    let (value, labeling, stats, trace) = if opts.value_only {
        let (value, stats) = cfdp::solve_value_only(g, rs, &nice, &ba, &opts.cfdp)?;
        (value, None, stats, None)
    } else {
        let sol = cfdp::solve(g, rs, &nice, &ba, &opts.cfdp)?;
        (sol.value, Some(sol.labeling), sol.stats, sol.trace)
    };
    timings.solve = t.elapsed().as_secs_f64();

    Ok(ExactOutcome {
        value,
        labeling,
        width: nice.width,
        stats,
        timings,
        trace,
    })
}

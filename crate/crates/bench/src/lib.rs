//! Fixtures shared by the criterion benches.

use std::sync::Arc;

use nagl_core::graph::bfs_induced_prefix;
use nagl_core::rewards::{build_random_table_system, random_max_type_gadget, DEFAULT_TABLE_CAP};
use nagl_core::{generators, RewardSystem, TableDistribution};

/// Ladder with `rungs` rungs and uniform random tables.
pub fn ladder_tables(rungs: usize, labels: usize, seed: u64) -> RewardSystem {
    let g = Arc::new(generators::ladder(rungs));
    build_random_table_system(g, labels, seed, TableDistribution::Uniform01, DEFAULT_TABLE_CAP)
        .expect("ladder tables fit the cap")
}

/// Grid with integer tables, which keeps the solver in integer mode.
pub fn grid_tables(width: usize, height: usize, labels: usize, seed: u64) -> RewardSystem {
    let g = Arc::new(generators::grid(width, height));
    let dist = TableDistribution::Integer { lo: 0, hi: 100 };
    build_random_table_system(g, labels, seed, dist, DEFAULT_TABLE_CAP).expect("grid tables fit the cap")
}

/// BFS prefix of a synthetic road-like graph with max-type rewards.
pub fn road_max_type(n: usize, seed: u64) -> RewardSystem {
    let side = (n as f64).sqrt().ceil() as usize + 4;
    let g = generators::road_like(side, side, 0.05, seed);
    let (sub, _) = bfs_induced_prefix(&g, 0, n).expect("prefix within the component");
    random_max_type_gadget(Arc::new(sub), seed).expect("binary gadget")
}

//! End-to-end flows through the file formats.

mod common;

use std::sync::Arc;

use nagl_core::decomposition::min_fill_decomposition;
use nagl_core::graph::square_graph;
use nagl_core::io::instance::{InstanceFile, RewardSpec};
use nagl_core::io::pace::{import_pace, write_pace};
use nagl_core::io::ResultRecord;
use nagl_core::rewards::build_random_table_system;
use nagl_core::{generators, solve_exact, ExactOptions, TableDistribution};

#[test]
fn instance_to_result_record() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ladder.json");
    let spec = RewardSpec::RandomTables {
        seed: 7,
        distribution: TableDistribution::Integer { lo: -5, hi: 5 },
    };
    InstanceFile::inline(&generators::ladder(4), 3, spec).write(&path).unwrap();

    let (_, loaded) = InstanceFile::open(&path).unwrap();
    let out = solve_exact(&loaded.rewards, &ExactOptions::default()).unwrap();
    assert_eq!(out.value, common::enumerate_opt(&loaded.rewards));

    let mut rec = ResultRecord::new("exact", out.value);
    rec.labeling = Some(out.labeling.unwrap().labels);
    rec.timings = out.timings;
    rec.width = Some(out.width);
    let rec_path = dir.path().join("result.json");
    rec.write(&rec_path).unwrap();
    assert!(ResultRecord::read(&rec_path).unwrap().verify(&loaded.rewards).unwrap());
}

#[test]
fn imported_decomposition_drives_the_solver() {
    let g = Arc::new(generators::grid(3, 4));
    let rs = build_random_table_system(g.clone(), 2, 3, TableDistribution::Integer { lo: 0, hi: 9 }, 1 << 20).unwrap();
    let h = square_graph(&g);
    let dir = tempfile::tempdir().unwrap();
    let td_path = dir.path().join("g2.td");
    write_pace(&min_fill_decomposition(&h), &td_path).unwrap();
    let td = import_pace(&td_path, &h).unwrap();
    let with_td = solve_exact(&rs, &ExactOptions { td: Some(td), ..Default::default() }).unwrap();
    let plain = solve_exact(&rs, &ExactOptions::default()).unwrap();
    assert_eq!(with_td.value, plain.value);
    assert_eq!(with_td.value, common::enumerate_opt(&rs));
}

#[test]
fn value_only_matches_full_solve() {
    for seed in 0..200 {
        let n = 1 + (seed as usize % 10);
        let g = Arc::new(generators::erdos_renyi(n, 0.3, seed));
        let l = 2 + (seed as usize % 2);
        let rs = build_random_table_system(g, l, seed, TableDistribution::Integer { lo: -5, hi: 5 }, 1 << 20).unwrap();
        let full = solve_exact(&rs, &ExactOptions::default()).unwrap();
        let lean = solve_exact(&rs, &ExactOptions { value_only: true, ..Default::default() }).unwrap();
        assert_eq!(full.value, lean.value);
        assert!(lean.labeling.is_none());
        assert!(lean.stats.peak_live_tables <= full.stats.height + 1);
    }
}

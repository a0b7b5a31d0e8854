//! Exhaustive reference solvers. Slow on purpose and capped explicitly.

use crate::error::{NaglError, Result};
use crate::graph::Graph;
use crate::rewards::{Label, Labeling, RewardSystem};
use crate::submod::ActiveSet;

/// Default enumeration cap: 2^24 labelings or active sets.
pub const DEFAULT_CAP: u128 = 1 << 24;

/// Largest graph accepted by [`brute_force_treewidth`].
pub const TREEWIDTH_MAX_VERTICES: usize = 8;

/// Enumerates every labeling in mixed-radix order (vertex 0 least
/// significant) and returns the first maximizer.
pub fn brute_force_opt(rs: &RewardSystem, cap: u128) -> Result<(Labeling, f64)> {
    let g = rs.graph();
    let n = g.num_vertices();
    let l = rs.num_labels();
    let count = (0..n).try_fold(1u128, |acc, _| acc.checked_mul(l as u128));
    match count {
        Some(c) if c <= cap => {}
        _ => {
            return Err(NaglError::CapExceeded {
                what: format!("brute force over {l}^{n} labelings"),
                required: count.unwrap_or(u128::MAX),
                cap,
            })
        }
    }
    let mut x: Vec<Label> = vec![0; n];
    let mut buf = Vec::new();
    let mut terms: Vec<f64> = (0..n).map(|v| rs.term(v, &x, &mut buf)).collect();
    let mut best = (x.clone(), terms.iter().sum::<f64>());
    let mut touched = vec![false; n];
    loop {
        let mut i = 0;
        while i < n && x[i] + 1 == l {
            x[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
        x[i] += 1;
        // digits 0..=i changed; refresh the terms that read them
        let mut list = Vec::new();
        for v in 0..=i {
            for &w in g.neighbors(v).iter().chain(std::iter::once(&v)) {
                if !touched[w] {
                    touched[w] = true;
                    list.push(w);
                }
            }
        }
        for &w in &list {
            terms[w] = rs.term(w, &x, &mut buf);
            touched[w] = false;
        }
        let value: f64 = terms.iter().sum();
        if value > best.1 {
            best = (x.clone(), value);
        }
    }
    let (labels, value) = best;
    Ok((
        Labeling {
            labels,
            value: Some(value),
        },
        value,
    ))
}

fn binomial_prefix(n: usize, k: usize) -> u128 {
    let mut total = 0u128;
    let mut c = 1u128;
    for j in 0..=k.min(n) {
        total = total.saturating_add(c);
        c = c.saturating_mul((n - j) as u128) / (j as u128 + 1);
    }
    total
}

/// Enumerates every active set of size at most `k` in lexicographic DFS
/// order (`{}`, `{0}`, `{0,1}`, …) and returns the first maximizer.
pub fn brute_force_budgeted(rs: &RewardSystem, k: usize, cap: u128) -> Result<(ActiveSet, f64)> {
    if rs.num_labels() != 2 {
        return Err(NaglError::NotBinary(rs.num_labels()));
    }
    let n = rs.graph().num_vertices();
    let k = k.min(n);
    let count = binomial_prefix(n, k);
    if count > cap {
        return Err(NaglError::CapExceeded {
            what: format!("brute force over subsets of size <= {k} of {n} vertices"),
            required: count,
            cap,
        });
    }
    struct Search<'a> {
        rs: &'a RewardSystem,
        x: Vec<Label>,
        chosen: Vec<usize>,
        best: (Vec<usize>, f64),
        buf: Vec<Label>,
    }
    impl Search<'_> {
        fn gain(&mut self, u: usize) -> f64 {
            let g = self.rs.graph();
            let mut delta = 0.0;
            for &w in g.neighbors(u).iter().chain(std::iter::once(&u)) {
                delta -= self.rs.term(w, &self.x, &mut self.buf);
            }
            self.x[u] = 1;
            for &w in g.neighbors(u).iter().chain(std::iter::once(&u)) {
                delta += self.rs.term(w, &self.x, &mut self.buf);
            }
            delta
        }

        fn dfs(&mut self, start: usize, left: usize, value: f64) {
            let n = self.x.len();
            for u in start..n {
                let next = value + self.gain(u);
                self.chosen.push(u);
                if next > self.best.1 {
                    self.best = (self.chosen.clone(), next);
                }
                if left > 1 {
                    self.dfs(u + 1, left - 1, next);
                }
                self.chosen.pop();
                self.x[u] = 0;
            }
        }
    }
    let x = vec![0; n];
    let base = rs.total(&x);
    let mut search = Search {
        rs,
        x,
        chosen: Vec::new(),
        best: (Vec::new(), base),
        buf: Vec::new(),
    };
    if k > 0 {
        search.dfs(0, k, base);
    }
    let members = search.best.0;
    let set = ActiveSet::from_members(rs, members)?;
    let value = set.value;
    Ok((set, value))
}

/// Exact treewidth by trying every elimination ordering.
pub fn brute_force_treewidth(h: &Graph) -> Result<usize> {
    let n = h.num_vertices();
    if n > TREEWIDTH_MAX_VERTICES {
        return Err(NaglError::CapExceeded {
            what: "vertices for exact treewidth".into(),
            required: n as u128,
            cap: TREEWIDTH_MAX_VERTICES as u128,
        });
    }
    if n == 0 {
        return Ok(0);
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| h.neighbors(v).iter().fold(0u32, |m, &u| m | 1 << u))
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    let mut best = n - 1;
    loop {
        let mut a = adj.clone();
        let mut alive = (1u32 << n) - 1;
        let mut width = 0;
        for &v in &order {
            let nb = a[v] & alive & !(1 << v);
            width = width.max(nb.count_ones() as usize);
            for u in 0..n {
                if nb >> u & 1 == 1 {
                    a[u] |= nb & !(1 << u);
                }
            }
            alive &= !(1 << v);
        }
        best = best.min(width);
        if !next_permutation(&mut order) {
            return Ok(best);
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::graph::square_graph;
    use crate::rewards::{build_max_type_gadget, build_mis_gadget, LocalReward};
    use std::sync::Arc;

    #[test]
    fn opt_examples() {
        let g = Arc::new(Graph::empty(1));
        let rs = RewardSystem::new(g, 2, vec![LocalReward::Table(vec![3.0, 7.0])]).unwrap();
        let (x, v) = brute_force_opt(&rs, DEFAULT_CAP).unwrap();
        assert_eq!((x.labels, v), (vec![1], 7.0));

        let rs = build_mis_gadget(Arc::new(generators::cycle(5))).unwrap();
        assert_eq!(brute_force_opt(&rs, DEFAULT_CAP).unwrap().1, 2.0);

        let rs = RewardSystem::constant(Arc::new(generators::path(4)), 3, 0.0).unwrap();
        let (x, v) = brute_force_opt(&rs, DEFAULT_CAP).unwrap();
        assert_eq!((x.labels, v), (vec![0; 4], 0.0));

        let rs = RewardSystem::constant(Arc::new(generators::path(30)), 2, 0.0).unwrap();
        assert!(matches!(brute_force_opt(&rs, DEFAULT_CAP), Err(NaglError::CapExceeded { .. })));
    }

    #[test]
    fn first_maximizer_in_mixed_radix_order() {
        // f_0 rewards label 1 on vertex 0 or vertex 1 equally
        let g = Arc::new(generators::path(2));
        let table = vec![0.0, 1.0, 1.0, 1.0];
        let rs = RewardSystem::new(g, 2, vec![LocalReward::Table(table), LocalReward::Constant(0.0)]).unwrap();
        assert_eq!(brute_force_opt(&rs, DEFAULT_CAP).unwrap().0.labels, vec![1, 0]);
    }

    #[test]
    fn budgeted_examples() {
        let g = Arc::new(generators::path(4));
        let rs = build_max_type_gadget(g, 100.0, &[30.0, 40.0, 50.0, 60.0]).unwrap();
        let (s, v) = brute_force_budgeted(&rs, 0, DEFAULT_CAP).unwrap();
        assert!(s.is_empty() && v == 0.0);

        // explicit enumeration of the 11 subsets of size <= 2
        let mut best = (Vec::new(), 0.0);
        for a in 0..4 {
            for b in a..4 {
                let members: Vec<_> = if a == b { vec![a] } else { vec![a, b] };
                let val = ActiveSet::from_members(&rs, members.clone()).unwrap().value;
                if val > best.1 {
                    best = (members, val);
                }
            }
        }
        let (s, v) = brute_force_budgeted(&rs, 2, DEFAULT_CAP).unwrap();
        assert_eq!(v, best.1);
        assert_eq!(s.sorted(), best.0);

        let (s, v) = brute_force_budgeted(&rs, 4, DEFAULT_CAP).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(v, 400.0);
    }

    #[test]
    fn treewidth_examples() {
        assert_eq!(brute_force_treewidth(&generators::path(6)).unwrap(), 1);
        assert_eq!(brute_force_treewidth(&generators::star(5)).unwrap(), 1);
        assert_eq!(brute_force_treewidth(&generators::complete(5)).unwrap(), 4);
        assert_eq!(brute_force_treewidth(&square_graph(&generators::star(5))).unwrap(), 5);
        assert_eq!(brute_force_treewidth(&generators::cycle(6)).unwrap(), 2);
        assert_eq!(brute_force_treewidth(&Graph::empty(3)).unwrap(), 0);
        assert!(brute_force_treewidth(&generators::path(9)).is_err());
    }

    #[test]
    fn min_fill_width_bounds_treewidth() {
        use crate::decomposition::min_fill_decomposition;
        for seed in 0..60 {
            let g = generators::erdos_renyi(8, 0.35, seed);
            let td = min_fill_decomposition(&g);
            assert!(td.width() >= brute_force_treewidth(&g).unwrap());
        }
    }
}

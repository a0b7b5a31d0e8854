//! Approximation schemes for nonnegative rewards: the coloring scheme with
//! ratio `1/q` and layered shifting with ratio `1 - (2p+1)/k`.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cfdp::{CfdpOptions, STATE_BUDGET};
use crate::error::{NaglError, Result};
use crate::graph::{bfs_layering_all, graph_power, BfsLayering, Graph, Vertex};
use crate::pipeline::{solve_exact, ExactOptions};
use crate::rewards::{Label, Labeling, RewardSystem};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProperColoring {
    pub colors: Vec<usize>,
    pub q: usize,
}

impl ProperColoring {
    /// Checks properness on `h`; `q` is one more than the largest color.
    pub fn new(h: &Graph, colors: Vec<usize>) -> Result<Self> {
        if colors.len() != h.num_vertices() {
            return Err(NaglError::invalid(format!(
                "coloring has {} entries for {} vertices",
                colors.len(),
                h.num_vertices()
            )));
        }
        if let Some((u, v)) = h.edges().find(|&(u, v)| colors[u] == colors[v]) {
            return Err(NaglError::ImproperColoring(u, v));
        }
        let q = colors.iter().max().map_or(0, |&c| c + 1);
        Ok(ProperColoring { colors, q })
    }

    pub fn classes(&self) -> Vec<Vec<Vertex>> {
        let mut classes = vec![Vec::new(); self.q];
        for (v, &c) in self.colors.iter().enumerate() {
            classes[c].push(v);
        }
        classes
    }
}

/// First-fit coloring in ascending vertex order.
pub fn greedy_coloring(h: &Graph) -> ProperColoring {
    let n = h.num_vertices();
    let mut colors = vec![usize::MAX; n];
    let mut used = Vec::new();
    for v in 0..n {
        used.clear();
        used.resize(h.degree(v) + 1, false);
        for &u in h.neighbors(v) {
            if colors[u] < used.len() {
                used[colors[u]] = true;
            }
        }
        colors[v] = used.iter().position(|&b| !b).expect("deg + 1 slots");
    }
    let q = colors.iter().max().map_or(0, |&c| c + 1);
    ProperColoring { colors, q }
}

#[derive(Debug, Clone)]
pub struct ColoringOutcome {
    pub labeling: Labeling,
    pub value: f64,
    /// `M_c` per color.
    pub class_sums: Vec<f64>,
    pub best_color: usize,
    /// Σ_v L^{|N[v]|}, the local enumeration work.
    pub local_evaluations: u64,
}

/// Best local configuration of every vertex, stitched for the best color class.
pub fn coloring_approx(rs: &RewardSystem, coloring: &ProperColoring, parallel: bool) -> Result<ColoringOutcome> {
    if !rs.all_nonnegative() {
        return Err(NaglError::NegativeReward);
    }
    let g = rs.graph();
    let n = g.num_vertices();
    let h = crate::graph::square_graph(g);
    let coloring = ProperColoring::new(&h, coloring.colors.clone())?;
    let alphabet = rs.alphabet();
    let mut sizes = Vec::with_capacity(n);
    for v in 0..n {
        match alphabet.checked_power(g.degree(v) + 1) {
            Some(s) if s <= STATE_BUDGET => sizes.push(s),
            other => {
                return Err(NaglError::CapExceeded {
                    what: format!("local configurations of vertex {v}"),
                    required: other.map_or(u128::MAX, |s| s as u128),
                    cap: STATE_BUDGET as u128,
                })
            }
        }
    }
    // (m_v, smallest maximizing code)
    let best_local = |v: Vertex| -> (f64, usize) {
        let mut best = (rs.evaluate_code(v, 0), 0);
        for code in 1..sizes[v] {
            let val = rs.evaluate_code(v, code);
            if val > best.0 {
                best = (val, code);
            }
        }
        best
    };
    let local: Vec<(f64, usize)> = if parallel {
        (0..n).into_par_iter().map(best_local).collect()
    } else {
        (0..n).map(best_local).collect()
    };

    let mut class_sums = vec![0.0; coloring.q];
    for v in 0..n {
        class_sums[coloring.colors[v]] += local[v].0;
    }
    let best_color = (0..coloring.q).fold(0, |b, c| if class_sums[c] > class_sums[b] { c } else { b });

    let l = rs.num_labels();
    let mut labels: Vec<Label> = vec![0; n];
    let mut fixed = vec![false; n];
    for v in (0..n).filter(|&v| coloring.colors[v] == best_color) {
        let mut code = local[v].1;
        for u in g.closed_neighborhood(v) {
            assert!(!fixed[u], "closed neighborhoods in one color class overlap at {u}");
            fixed[u] = true;
            labels[u] = code % l;
            code /= l;
        }
    }
    let value = rs.total(&labels);
    Ok(ColoringOutcome {
        labeling: Labeling {
            labels,
            value: Some(value),
        },
        value,
        class_sums,
        best_color,
        local_evaluations: sizes.iter().map(|&s| s as u64).sum(),
    })
}

/// One offset of the shifting scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftScheme {
    pub k: usize,
    pub offset: usize,
    pub radius: usize,
    pub removed: Vec<bool>,
    pub safe: Vec<bool>,
    /// Components of `G - R_s`, each ascending, ordered by smallest member.
    pub components: Vec<Vec<Vertex>>,
}

impl ShiftScheme {
    pub fn removed_count(&self) -> usize {
        self.removed.iter().filter(|&&r| r).count()
    }

    pub fn safe_count(&self) -> usize {
        self.safe.iter().filter(|&&s| s).count()
    }
}

/// `R_s = { v : λ(v) ≡ s (mod k) }`; a kept vertex is safe when it lies more
/// than `radius` hops from `R_s`.
pub fn shift_scheme(g: &Graph, layering: &BfsLayering, k: usize, offset: usize, radius: usize) -> Result<ShiftScheme> {
    if k < 3 {
        return Err(NaglError::invalid(format!("shifting period must be at least 3, got {k}")));
    }
    if offset >= k {
        return Err(NaglError::invalid(format!("offset {offset} outside 0..{k}")));
    }
    if radius == 0 {
        return Err(NaglError::invalid("radius must be at least 1"));
    }
    let n = g.num_vertices();
    if layering.layer.len() != n {
        return Err(NaglError::invalid("layering does not match the graph"));
    }
    let removed: Vec<bool> = layering
        .layer
        .iter()
        .map(|l| l.is_some_and(|d| d % k == offset))
        .collect();

    let mut dist = vec![usize::MAX; n];
    let mut queue: VecDeque<Vertex> = (0..n).filter(|&v| removed[v]).collect();
    for &v in &queue {
        dist[v] = 0;
    }
    while let Some(v) = queue.pop_front() {
        if dist[v] == radius {
            continue;
        }
        for &u in g.neighbors(v) {
            if dist[u] == usize::MAX {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    let safe: Vec<bool> = dist.iter().map(|&d| d == usize::MAX).collect();

    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (u, v) in g.edges() {
        if !removed[u] && !removed[v] {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut slot = vec![usize::MAX; n];
    let mut components: Vec<Vec<Vertex>> = Vec::new();
    for v in (0..n).filter(|&v| !removed[v]) {
        let r = find(&mut parent, v);
        if slot[r] == usize::MAX {
            slot[r] = components.len();
            components.push(Vec::new());
        }
        components[slot[r]].push(v);
    }
    Ok(ShiftScheme {
        k,
        offset,
        radius,
        removed,
        safe,
        components,
    })
}

#[derive(Debug, Clone)]
pub struct BakerOptions {
    pub epsilon: f64,
    pub root: Vertex,
    /// Radius `p` of the reward neighborhoods measured in the base graph.
    pub radius: usize,
    pub parallel: bool,
    pub cfdp: CfdpOptions,
}

impl Default for BakerOptions {
    fn default() -> Self {
        BakerOptions {
            epsilon: 0.5,
            root: 0,
            radius: 1,
            parallel: false,
            cfdp: CfdpOptions::default(),
        }
    }
}

/// `ceil((2p + 1) / epsilon)`, tolerant to representation error in epsilon.
pub fn shifting_period(epsilon: f64, radius: usize) -> Result<usize> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(NaglError::invalid(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let k = ((2 * radius + 1) as f64 / epsilon - 1e-9).ceil() as usize;
    Ok(k.max(3))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OffsetReport {
    pub offset: usize,
    /// F of the candidate under the original rewards.
    pub value: f64,
    /// F_s: the safe terms only.
    pub safe_value: f64,
    pub removed: usize,
    pub safe: usize,
    pub components: usize,
    pub max_width: usize,
}

#[derive(Debug, Clone)]
pub struct BakerOutcome {
    pub labeling: Labeling,
    pub value: f64,
    pub k: usize,
    pub best_offset: usize,
    pub candidates: Vec<OffsetReport>,
}

impl BakerOutcome {
    /// Guaranteed fraction of the optimum, `1 - (2p+1)/k`.
    pub fn guarantee(&self, radius: usize) -> f64 {
        1.0 - (2 * radius + 1) as f64 / self.k as f64
    }
}

fn solve_offset(g: &Graph, rs: &RewardSystem, layering: &BfsLayering, k: usize, s: usize, opts: &BakerOptions) -> Result<(Vec<Label>, OffsetReport)> {
    let scheme = shift_scheme(g, layering, k, s, opts.radius)?;
    let n = g.num_vertices();
    let mut labels = vec![0; n];
    let mut max_width = 0;
    let exact = ExactOptions {
        td: None,
        value_only: false,
        cfdp: opts.cfdp.clone(),
    };
    for comp in &scheme.components {
        if !comp.iter().any(|&v| scheme.safe[v]) {
            continue;
        }
        let sub = rs.restrict(comp, |v| scheme.safe[v])?;
        let out = solve_exact(&sub, &exact).map_err(|e| match e {
            NaglError::WidthCapExceeded { width, cap, context } => NaglError::WidthCapExceeded {
                width,
                cap,
                context: format!("{context}; offset {s}, component of {} vertices", comp.len()),
            },
            other => other,
        })?;
        max_width = max_width.max(out.width);
        let sol = out.labeling.expect("labeling requested");
        for (i, &v) in comp.iter().enumerate() {
            labels[v] = sol.labels[i];
        }
    }
    let mut buf = Vec::new();
    let value = rs.total(&labels);
    let safe_value: f64 = (0..n).filter(|&v| scheme.safe[v]).map(|v| rs.term(v, &labels, &mut buf)).sum();
    assert!(
        value >= safe_value - 1e-9 * safe_value.abs().max(1.0),
        "dropped terms are nonnegative"
    );
    let report = OffsetReport {
        offset: s,
        value,
        safe_value,
        removed: scheme.removed_count(),
        safe: scheme.safe_count(),
        components: scheme.components.len(),
        max_width,
    };
    Ok((labels, report))
}

/// Best of the `k` shifted candidates, each solved exactly per component.
///
/// The rewards may live on `g` itself or on any graph whose edges join
/// vertices at most `radius` apart in `g`.
pub fn baker_ptas(g: &Graph, rs: &RewardSystem, opts: &BakerOptions) -> Result<BakerOutcome> {
    if !rs.all_nonnegative() {
        return Err(NaglError::NegativeReward);
    }
    let n = g.num_vertices();
    let h = rs.graph();
    if h.num_vertices() != n {
        return Err(NaglError::invalid("reward graph and base graph differ in size"));
    }
    if h != g {
        let reach = graph_power(g, opts.radius)?;
        if let Some((u, v)) = h.edges().find(|&(u, v)| !reach.has_edge(u, v)) {
            return Err(NaglError::invalid(format!(
                "reward graph edge {u}-{v} spans more than {} hops of the base graph",
                opts.radius
            )));
        }
    }
    let k = shifting_period(opts.epsilon, opts.radius)?;
    if n == 0 {
        return Ok(BakerOutcome {
            labeling: Labeling {
                labels: Vec::new(),
                value: Some(0.0),
            },
            value: 0.0,
            k,
            best_offset: 0,
            candidates: Vec::new(),
        });
    }
    let layering = bfs_layering_all(g, opts.root)?;
    log::debug!("shifting with k={k}, {} layers", layering.depth());
    let results: Vec<Result<(Vec<Label>, OffsetReport)>> = if opts.parallel {
        (0..k)
            .into_par_iter()
            .map(|s| solve_offset(g, rs, &layering, k, s, opts))
            .collect()
    } else {
        (0..k).map(|s| solve_offset(g, rs, &layering, k, s, opts)).collect()
    };
    let mut best: Option<(Vec<Label>, f64, usize)> = None;
    let mut candidates = Vec::with_capacity(k);
    for r in results {
        let (labels, report) = r?;
        if best.as_ref().is_none_or(|b| report.value > b.1) {
            best = Some((labels, report.value, report.offset));
        }
        candidates.push(report);
    }
    let (labels, value, best_offset) = best.expect("k >= 3 candidates");
    Ok(BakerOutcome {
        labeling: Labeling {
            labels,
            value: Some(value),
        },
        value,
        k,
        best_offset,
        candidates,
    })
}

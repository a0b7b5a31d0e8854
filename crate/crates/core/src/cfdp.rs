//! Exact dynamic program over a nice tree decomposition of G².
//!
//! Every reward term `f_v` is charged to one node whose bag contains `N[v]`
//! (see [`assign_bags`](crate::decomposition::assign_bags)). Tables are
//! indexed by bag states: mixed-radix codes over the ascending bag order, so
//! the digit of the vertex at bag position `p` has stride `L^p`. With that
//! layout an introduce or forget of the vertex at position `p` splits a
//! state into `(high, digit, low)` blocks and the transitions become block
//! copies and block maxima.

use std::ops::{Add, AddAssign};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decomposition::{BagAssignment, NiceNode, NiceTreeDecomposition};
use crate::error::{NaglError, Result};
use crate::graph::{Graph, Vertex};
use crate::rewards::{Label, LabelAlphabet, Labeling, RewardSystem};

/// Hard ceiling on the default width cap.
pub const MAX_DEFAULT_WIDTH: usize = 25;
/// Default state budget per table, `2^30`.
pub const STATE_BUDGET: usize = 1 << 30;

const PARALLEL_MIN_STATES: usize = 1 << 14;

/// Largest width `t <= 25` with `L^{t+1} <= 2^30`.
pub fn default_width_cap(labels: usize) -> usize {
    let alphabet = LabelAlphabet::new(labels.max(1)).expect("alphabet size");
    let mut t = 0;
    while t < MAX_DEFAULT_WIDTH
        && alphabet
            .checked_power(t + 2)
            .is_some_and(|s| s <= STATE_BUDGET)
    {
        t += 1;
    }
    t
}

/// Arithmetic used for table values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScoreMode {
    /// Exact 64-bit integers when every reward is integral and the total
    /// magnitude stays below 2^53, floats otherwise.
    #[default]
    Auto,
    Float,
    Integer,
}

#[derive(Debug, Clone, Default)]
pub struct CfdpOptions {
    /// `None` selects [`default_width_cap`].
    pub width_cap: Option<usize>,
    pub score: ScoreMode,
    /// Split per-node state loops across the current rayon pool.
    pub parallel: bool,
    pub trace: bool,
    pub deadline: Option<Instant>,
}

/// Per-node record for the benchmark harness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeTrace {
    pub node: usize,
    pub kind: String,
    pub bag_size: usize,
    pub states: usize,
    pub micros: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveStats {
    pub nodes: usize,
    pub width: usize,
    pub height: usize,
    /// Σ_i L^{|X_i|}.
    pub total_states: u128,
    pub oracle_calls: u64,
    pub peak_live_tables: usize,
    pub peak_live_states: usize,
    pub integer_mode: bool,
}

#[derive(Debug, Clone)]
pub struct CfdpSolution {
    pub labeling: Labeling,
    pub value: f64,
    pub stats: SolveStats,
    pub trace: Option<Vec<NodeTrace>>,
}

trait Score: Copy + PartialOrd + Add<Output = Self> + AddAssign + Send + Sync + Default + 'static {
    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
}

impl Score for f64 {
    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
}

impl Score for i64 {
    #[inline]
    fn from_f64(x: f64) -> Self {
        x as i64
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self as f64
    }
}

fn use_integers(rs: &RewardSystem, mode: ScoreMode) -> Result<bool> {
    let exact = rs.all_integer() && rs.magnitude_bound() <= (1u64 << 53) as f64;
    match mode {
        ScoreMode::Auto => Ok(exact),
        ScoreMode::Float => Ok(false),
        ScoreMode::Integer if exact => Ok(true),
        ScoreMode::Integer => Err(NaglError::invalid(
            "integer mode needs integral rewards with total magnitude below 2^53",
        )),
    }
}

/// Checks the preconditions shared by all entry points and returns the
/// per-node state counts.
fn prepare(
    g: &Graph,
    rs: &RewardSystem,
    ntd: &NiceTreeDecomposition,
    ba: &BagAssignment,
    opts: &CfdpOptions,
) -> Result<Vec<usize>> {
    let n = g.num_vertices();
    if rs.graph() != g {
        return Err(NaglError::invalid("reward system is defined on a different graph"));
    }
    if ntd.num_vertices != n || ba.beta.len() != n || ba.owned.len() != ntd.len() {
        return Err(NaglError::invalid("decomposition and assignment do not match the graph"));
    }
    let cap = opts
        .width_cap
        .unwrap_or_else(|| default_width_cap(rs.num_labels()));
    if ntd.width > cap {
        return Err(NaglError::WidthCapExceeded {
            width: ntd.width,
            cap,
            context: format!("{} labels", rs.num_labels()),
        });
    }
    let alphabet = rs.alphabet();
    ntd.bags
        .iter()
        .map(|bag| {
            alphabet.checked_power(bag.len()).ok_or_else(|| {
                NaglError::StateOverflow(format!(
                    "{}^{} states do not fit in a machine word",
                    rs.num_labels(),
                    bag.len()
                ))
            })
        })
        .collect()
}

/// Weights turning a bag state into the local code of each owned vertex.
struct OwnedTerm {
    vertex: Vertex,
    /// `coef[q]` is `L^j` when bag position `q` holds the `j`-th vertex of
    /// `N[v]`, zero otherwise.
    coef: Vec<usize>,
}

fn owned_terms(g: &Graph, bag: &[Vertex], owned: &[Vertex], labels: usize) -> Vec<OwnedTerm> {
    owned
        .iter()
        .map(|&v| {
            let mut coef = vec![0; bag.len()];
            let mut w = 1;
            for u in g.closed_neighborhood(v) {
                let q = bag.binary_search(&u).expect("bag contains N[v]");
                coef[q] = w;
                w *= labels;
            }
            OwnedTerm { vertex: v, coef }
        })
        .collect()
}

/// Adds Φ_i for states `start..start + out.len()` into `out`.
fn add_phi<T: Score>(rs: &RewardSystem, terms: &[OwnedTerm], width: usize, start: usize, out: &mut [T]) {
    if terms.is_empty() || out.is_empty() {
        return;
    }
    let l = rs.num_labels();
    let mut digits = vec![0usize; width];
    let mut s = start;
    for d in digits.iter_mut() {
        *d = s % l;
        s /= l;
    }
    let mut codes: Vec<usize> = terms
        .iter()
        .map(|t| t.coef.iter().zip(&digits).map(|(c, d)| c * d).sum())
        .collect();
    for slot in out.iter_mut() {
        let mut acc = T::default();
        for (t, &code) in terms.iter().zip(&codes) {
            acc += T::from_f64(rs.evaluate_code(t.vertex, code));
        }
        *slot += acc;
        // odometer increment, keeping every code in step
        for q in 0..width {
            if digits[q] + 1 < l {
                digits[q] += 1;
                for (code, t) in codes.iter_mut().zip(terms) {
                    *code += t.coef[q];
                }
                break;
            }
            digits[q] = 0;
            for (code, t) in codes.iter_mut().zip(terms) {
                *code -= (l - 1) * t.coef[q];
            }
        }
    }
}

fn phi_into<T: Score>(rs: &RewardSystem, terms: &[OwnedTerm], width: usize, table: &mut [T], parallel: bool) {
    if terms.is_empty() {
        return;
    }
    const CHUNK: usize = 4096;
    if parallel && table.len() >= PARALLEL_MIN_STATES {
        table
            .par_chunks_mut(CHUNK)
            .enumerate()
            .for_each(|(i, chunk)| add_phi(rs, terms, width, i * CHUNK, chunk));
    } else {
        add_phi(rs, terms, width, 0, table);
    }
}

#[inline]
fn power(base: usize, exp: usize) -> usize {
    (0..exp).fold(1, |acc, _| acc * base)
}

fn introduce<T: Score>(child: &[T], low: usize, labels: usize, parallel: bool) -> Vec<T> {
    let mut parent = vec![T::default(); child.len() * labels];
    let block = low * labels;
    let fill = |(h, dst): (usize, &mut [T])| {
        let src = &child[h * low..(h + 1) * low];
        for c in 0..labels {
            dst[c * low..(c + 1) * low].copy_from_slice(src);
        }
    };
    if parallel && parent.len() >= PARALLEL_MIN_STATES {
        parent.par_chunks_mut(block).with_min_len(64).enumerate().for_each(fill);
    } else {
        parent.chunks_mut(block).enumerate().for_each(fill);
    }
    parent
}

/// Max over the forgotten digit by one scan of the child table; ties keep
/// the smallest label.
fn forget<T: Score>(child: &[T], low: usize, labels: usize, choices: Option<&mut Vec<u16>>, parallel: bool) -> Vec<T> {
    let size = child.len() / labels;
    let mut parent = vec![T::default(); size];
    let block = low * labels;
    let scan = |h: usize, dst: &mut [T], pick: Option<&mut [u16]>| {
        let src = &child[h * block..(h + 1) * block];
        dst.copy_from_slice(&src[..low]);
        match pick {
            Some(pick) => {
                pick.fill(0);
                for c in 1..labels {
                    let row = &src[c * low..(c + 1) * low];
                    for r in 0..low {
                        if row[r] > dst[r] {
                            dst[r] = row[r];
                            pick[r] = c as u16;
                        }
                    }
                }
            }
            None => {
                for c in 1..labels {
                    let row = &src[c * low..(c + 1) * low];
                    for r in 0..low {
                        if row[r] > dst[r] {
                            dst[r] = row[r];
                        }
                    }
                }
            }
        }
    };
    let par = parallel && child.len() >= PARALLEL_MIN_STATES;
    match choices {
        Some(choice) => {
            choice.clear();
            choice.resize(size, 0);
            if par {
                parent
                    .par_chunks_mut(low)
                    .zip(choice.par_chunks_mut(low))
                    .with_min_len(64)
                    .enumerate()
                    .for_each(|(h, (dst, pick))| scan(h, dst, Some(pick)));
            } else {
                for (h, (dst, pick)) in parent.chunks_mut(low).zip(choice.chunks_mut(low)).enumerate() {
                    scan(h, dst, Some(pick));
                }
            }
        }
        None => {
            if par {
                parent
                    .par_chunks_mut(low)
                    .with_min_len(64)
                    .enumerate()
                    .for_each(|(h, dst)| scan(h, dst, None));
            } else {
                for (h, dst) in parent.chunks_mut(low).enumerate() {
                    scan(h, dst, None);
                }
            }
        }
    }
    parent
}

fn join<T: Score>(mut left: Vec<T>, right: &[T], parallel: bool) -> Vec<T> {
    if parallel && left.len() >= PARALLEL_MIN_STATES {
        left.par_iter_mut().zip(right.par_iter()).for_each(|(a, &b)| *a += b);
    } else {
        left.iter_mut().zip(right).for_each(|(a, &b)| *a += b);
    }
    left
}

struct Tables<T> {
    root_value: T,
    choices: Vec<Option<Vec<u16>>>,
    stats: SolveStats,
    trace: Option<Vec<NodeTrace>>,
}

fn run<T: Score>(
    g: &Graph,
    rs: &RewardSystem,
    ntd: &NiceTreeDecomposition,
    ba: &BagAssignment,
    sizes: &[usize],
    opts: &CfdpOptions,
    keep_choices: bool,
) -> Result<Tables<T>> {
    let l = rs.num_labels();
    let count = ntd.len();
    let mut tables: Vec<Option<Vec<T>>> = vec![None; count];
    let mut choices: Vec<Option<Vec<u16>>> = vec![None; count];
    let mut trace = opts.trace.then(Vec::new);
    let mut stats = SolveStats {
        nodes: count,
        width: ntd.width,
        height: ntd.height(),
        ..SolveStats::default()
    };
    let (mut live_tables, mut live_states) = (0usize, 0usize);

    for i in 0..count {
        if let Some(deadline) = opts.deadline {
            if Instant::now() > deadline {
                return Err(NaglError::Timeout);
            }
        }
        let started = trace.as_ref().map(|_| Instant::now());
        let bag = &ntd.bags[i];
        let mut take = |j: usize, live_tables: &mut usize, live_states: &mut usize| {
            let t = tables[j].take().expect("child table computed before parent");
            *live_tables -= 1;
            *live_states -= t.len();
            t
        };
        let mut table = match ntd.nodes[i] {
            NiceNode::Leaf => vec![T::default()],
            NiceNode::Introduce { vertex, child } => {
                let low = power(l, bag.binary_search(&vertex).expect("introduced vertex in bag"));
                let c = take(child, &mut live_tables, &mut live_states);
                introduce(&c, low, l, opts.parallel)
            }
            NiceNode::Forget { vertex, child } => {
                let p = ntd.bags[child].binary_search(&vertex).expect("forgotten vertex in child bag");
                let c = take(child, &mut live_tables, &mut live_states);
                let mut pick = keep_choices.then(Vec::new);
                let t = forget(&c, power(l, p), l, pick.as_mut(), opts.parallel);
                choices[i] = pick;
                t
            }
            NiceNode::Join { left, right } => {
                let a = take(left, &mut live_tables, &mut live_states);
                let b = take(right, &mut live_tables, &mut live_states);
                join(a, &b, opts.parallel)
            }
        };
        debug_assert_eq!(table.len(), sizes[i]);
        let owned = &ba.owned[i];
        if !owned.is_empty() {
            let terms = owned_terms(g, bag, owned, l);
            phi_into(rs, &terms, bag.len(), &mut table, opts.parallel);
            stats.oracle_calls += (owned.len() * table.len()) as u64;
        }
        stats.total_states += table.len() as u128;
        live_tables += 1;
        live_states += table.len();
        stats.peak_live_tables = stats.peak_live_tables.max(live_tables);
        stats.peak_live_states = stats.peak_live_states.max(live_states);
        if let (Some(trace), Some(started)) = (trace.as_mut(), started) {
            trace.push(NodeTrace {
                node: i,
                kind: ntd.nodes[i].kind_name().to_string(),
                bag_size: bag.len(),
                states: table.len(),
                micros: started.elapsed().as_micros() as u64,
            });
        }
        tables[i] = Some(table);
    }
    let root = tables[ntd.root()].take().expect("root table");
    Ok(Tables {
        root_value: root[0],
        choices,
        stats,
        trace,
    })
}

/// Follows forget-node choices from the empty root state down to the leaves.
fn reconstruct(ntd: &NiceTreeDecomposition, labels: usize, choices: &[Option<Vec<u16>>]) -> Vec<Label> {
    let mut out = vec![usize::MAX; ntd.num_vertices];
    let mut stack = vec![(ntd.root(), 0usize)];
    while let Some((i, s)) = stack.pop() {
        match ntd.nodes[i] {
            NiceNode::Leaf => {}
            NiceNode::Introduce { vertex, child } => {
                let low = power(labels, ntd.bags[i].binary_search(&vertex).unwrap());
                stack.push((child, s % low + s / (low * labels) * low));
            }
            NiceNode::Forget { vertex, child } => {
                let low = power(labels, ntd.bags[child].binary_search(&vertex).unwrap());
                let c = choices[i].as_ref().expect("forget choices kept")[s] as usize;
                out[vertex] = c;
                stack.push((child, s / low * low * labels + c * low + s % low));
            }
            NiceNode::Join { left, right } => {
                stack.push((right, s));
                stack.push((left, s));
            }
        }
    }
    debug_assert!(out.iter().all(|&x| x != usize::MAX), "every vertex is forgotten once");
    out
}

/// Optimal labeling and value.
pub fn solve(
    g: &Graph,
    rs: &RewardSystem,
    ntd: &NiceTreeDecomposition,
    ba: &BagAssignment,
    opts: &CfdpOptions,
) -> Result<CfdpSolution> {
    let sizes = prepare(g, rs, ntd, ba, opts)?;
    let integer = use_integers(rs, opts.score)?;
    let (value, choices, mut stats, trace) = if integer {
        let t = run::<i64>(g, rs, ntd, ba, &sizes, opts, true)?;
        (t.root_value.to_f64(), t.choices, t.stats, t.trace)
    } else {
        let t = run::<f64>(g, rs, ntd, ba, &sizes, opts, true)?;
        (t.root_value, t.choices, t.stats, t.trace)
    };
    stats.integer_mode = integer;
    let labels = reconstruct(ntd, rs.num_labels(), &choices);
    Ok(CfdpSolution {
        labeling: Labeling {
            labels,
            value: Some(value),
        },
        value,
        stats,
        trace,
    })
}

/// Optimal value only: no backpointers, children dropped as soon as the
/// parent is built, so at most `height + 1` tables are alive at once.
pub fn solve_value_only(
    g: &Graph,
    rs: &RewardSystem,
    ntd: &NiceTreeDecomposition,
    ba: &BagAssignment,
    opts: &CfdpOptions,
) -> Result<(f64, SolveStats)> {
    let sizes = prepare(g, rs, ntd, ba, opts)?;
    let integer = use_integers(rs, opts.score)?;
    let (value, mut stats) = if integer {
        let t = run::<i64>(g, rs, ntd, ba, &sizes, opts, false)?;
        (t.root_value.to_f64(), t.stats)
    } else {
        let t = run::<f64>(g, rs, ntd, ba, &sizes, opts, false)?;
        (t.root_value, t.stats)
    };
    stats.integer_mode = integer;
    Ok((value, stats))
}

/// Materialized Φ_i tables, one per node (empty vectors for nodes that own
/// no term).
#[derive(Debug, Clone)]
pub struct PhiTable {
    pub tables: Vec<Vec<f64>>,
    pub labels: usize,
    pub oracle_calls: u64,
}

impl PhiTable {
    /// Φ_i at the restriction of the global labeling `x` to `X_i`.
    pub fn at(&self, ntd: &NiceTreeDecomposition, node: usize, x: &[Label]) -> f64 {
        let table = &self.tables[node];
        if table.is_empty() {
            return 0.0;
        }
        let mut code = 0;
        for &v in ntd.bags[node].iter().rev() {
            code = code * self.labels + x[v];
        }
        table[code]
    }

    /// Σ_i Φ_i(x_{X_i}), which equals F(x).
    pub fn sum(&self, ntd: &NiceTreeDecomposition, x: &[Label]) -> f64 {
        (0..self.tables.len()).map(|i| self.at(ntd, i, x)).sum()
    }
}

pub fn phi_tables(rs: &RewardSystem, ntd: &NiceTreeDecomposition, ba: &BagAssignment) -> Result<PhiTable> {
    let g = rs.graph();
    let l = rs.num_labels();
    let mut calls = 0u64;
    let mut tables = Vec::with_capacity(ntd.len());
    for (i, bag) in ntd.bags.iter().enumerate() {
        let owned = &ba.owned[i];
        if owned.is_empty() {
            tables.push(Vec::new());
            continue;
        }
        let size = rs
            .alphabet()
            .checked_power(bag.len())
            .ok_or_else(|| NaglError::StateOverflow(format!("bag of size {}", bag.len())))?;
        let mut table = vec![0.0f64; size];
        let terms = owned_terms(g, bag, owned, l);
        add_phi(rs, &terms, bag.len(), 0, &mut table);
        calls += (owned.len() * size) as u64;
        tables.push(table);
    }
    Ok(PhiTable {
        tables,
        labels: l,
        oracle_calls: calls,
    })
}

//! Per-vertex reward oracles `f_v` over closed neighborhoods, and the
//! objective `F(x) = Σ_v f_v(x_{N[v]})`.
//!
//! A neighborhood assignment is canonically encoded as a mixed-radix integer
//! over the ascending order of `N[v]`: `code = Σ_j label(u_j) · L^j`. The same
//! encoding indexes explicit tables and the dynamic program's bag states.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cnf::Cnf;
use crate::error::{NaglError, Result};
use crate::graph::{Graph, Vertex};

pub type Label = usize;

/// Labels are `0..size`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelAlphabet {
    size: usize,
}

impl LabelAlphabet {
    pub const MAX_SIZE: usize = u16::MAX as usize + 1;

    pub fn new(size: usize) -> Result<Self> {
        if size == 0 || size > Self::MAX_SIZE {
            return Err(NaglError::invalid(format!(
                "alphabet size {size} outside 1..={}",
                Self::MAX_SIZE
            )));
        }
        Ok(LabelAlphabet { size })
    }

    #[inline]
    pub fn size(self) -> usize {
        self.size
    }

    /// `L^k`, or `None` on overflow.
    pub fn checked_power(self, k: usize) -> Option<usize> {
        let mut acc: usize = 1;
        for _ in 0..k {
            acc = acc.checked_mul(self.size)?;
        }
        Some(acc)
    }
}

/// One vertex's reward oracle.
#[derive(Debug, Clone, PartialEq)]
pub enum LocalReward {
    /// `L^{|N[v]|}` values in mixed-radix order.
    Table(Vec<f64>),
    Constant(f64),
    /// 1 iff `v` has label 1 and every neighbor label 0.
    Mis,
    /// `0` when no vertex of `N[v]` has label 1, `high` when `v` does,
    /// `low` otherwise.
    MaxType { high: f64, low: f64 },
    /// Star-center SAT oracle: neighbor labels (ascending, `v` excluded) are
    /// base-L digits of an integer `I`; the value is 1 iff `I < 2^N` and the
    /// formula holds under the assignment whose bit `j - 1` is variable `j`.
    SatCenter(Arc<Cnf>),
}

impl LocalReward {
    fn bounds(&self) -> (f64, f64) {
        match self {
            LocalReward::Table(t) => t.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
                (lo.min(x), hi.max(x))
            }),
            LocalReward::Constant(c) => (*c, *c),
            LocalReward::Mis | LocalReward::SatCenter(_) => (0.0, 1.0),
            LocalReward::MaxType { high, low } => (0.0f64.min(*low), high.max(*low)),
        }
    }

    fn all_integer(&self) -> bool {
        match self {
            LocalReward::Table(t) => t.iter().all(|x| x.fract() == 0.0),
            LocalReward::Constant(c) => c.fract() == 0.0,
            LocalReward::Mis | LocalReward::SatCenter(_) => true,
            LocalReward::MaxType { high, low } => high.fract() == 0.0 && low.fract() == 0.0,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            LocalReward::Table(_) => "table",
            LocalReward::Constant(_) => "constant",
            LocalReward::Mis => "mis",
            LocalReward::MaxType { .. } => "max-type",
            LocalReward::SatCenter(_) => "sat-center",
        }
    }
}

/// Labels for the vertices of `N[v]`, aligned with its ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborhoodAssignment {
    pub vertex: Vertex,
    pub labels: Vec<Label>,
}

impl NeighborhoodAssignment {
    pub fn from_labeling(g: &Graph, v: Vertex, labels: &[Label]) -> Self {
        NeighborhoodAssignment {
            vertex: v,
            labels: g.closed_neighborhood(v).into_iter().map(|u| labels[u]).collect(),
        }
    }
}

/// A total labeling with its objective value once evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct Labeling {
    pub labels: Vec<Label>,
    pub value: Option<f64>,
}

impl Labeling {
    pub fn new(labels: Vec<Label>) -> Self {
        Labeling { labels, value: None }
    }

    pub fn uniform(n: usize, label: Label) -> Self {
        Self::new(vec![label; n])
    }
}

/// Distribution for synthetic reward tables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum TableDistribution {
    Uniform01,
    Uniform { lo: f64, hi: f64 },
    /// Integers in `lo..=hi`.
    Integer { lo: i64, hi: i64 },
}

impl TableDistribution {
    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        match *self {
            TableDistribution::Uniform01 => rng.random::<f64>(),
            TableDistribution::Uniform { lo, hi } => {
                if lo == hi {
                    lo
                } else {
                    rng.random_range(lo..hi)
                }
            }
            TableDistribution::Integer { lo, hi } => rng.random_range(lo..=hi) as f64,
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            TableDistribution::Uniform01 => true,
            TableDistribution::Uniform { lo, hi } => lo.is_finite() && hi.is_finite() && lo <= hi,
            TableDistribution::Integer { lo, hi } => lo <= hi,
        };
        if ok {
            Ok(())
        } else {
            Err(NaglError::invalid(format!("empty or invalid distribution {self:?}")))
        }
    }
}

impl std::str::FromStr for TableDistribution {
    type Err = NaglError;

    /// `uniform01`, `uniform:LO:HI` or `integer:LO:HI`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || NaglError::invalid(format!("cannot parse distribution '{s}'"));
        let dist = match parts.as_slice() {
            ["uniform01"] => TableDistribution::Uniform01,
            ["uniform", lo, hi] => TableDistribution::Uniform {
                lo: lo.parse().map_err(|_| bad())?,
                hi: hi.parse().map_err(|_| bad())?,
            },
            ["integer", lo, hi] => TableDistribution::Integer {
                lo: lo.parse().map_err(|_| bad())?,
                hi: hi.parse().map_err(|_| bad())?,
            },
            _ => return Err(bad()),
        };
        dist.validate()?;
        Ok(dist)
    }
}

impl std::fmt::Display for TableDistribution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TableDistribution::Uniform01 => write!(f, "uniform01"),
            TableDistribution::Uniform { lo, hi } => write!(f, "uniform:{lo}:{hi}"),
            TableDistribution::Integer { lo, hi } => write!(f, "integer:{lo}:{hi}"),
        }
    }
}

/// The reward oracles of one instance.
#[derive(Debug, Clone)]
pub struct RewardSystem {
    graph: Arc<Graph>,
    alphabet: LabelAlphabet,
    oracles: Vec<LocalReward>,
    all_integer: bool,
    all_nonnegative: bool,
    magnitude: f64,
}

impl RewardSystem {
    pub fn new(graph: Arc<Graph>, labels: usize, oracles: Vec<LocalReward>) -> Result<Self> {
        let alphabet = LabelAlphabet::new(labels)?;
        if oracles.len() != graph.num_vertices() {
            return Err(NaglError::invalid(format!(
                "{} oracles for {} vertices",
                oracles.len(),
                graph.num_vertices()
            )));
        }
        let mut all_integer = true;
        let mut all_nonnegative = true;
        let mut magnitude = 0.0;
        for (v, oracle) in oracles.iter().enumerate() {
            let width = graph.degree(v) + 1;
            match oracle {
                LocalReward::Table(t) => {
                    let expected = alphabet.checked_power(width);
                    if expected != Some(t.len()) {
                        return Err(NaglError::invalid(format!(
                            "table of vertex {v} has {} entries, expected {labels}^{width}",
                            t.len()
                        )));
                    }
                    if let Some(x) = t.iter().find(|x| !x.is_finite()) {
                        return Err(NaglError::invalid(format!(
                            "table of vertex {v} holds non-finite value {x}"
                        )));
                    }
                }
                LocalReward::Constant(c) if !c.is_finite() => {
                    return Err(NaglError::invalid(format!("constant {c} at vertex {v}")));
                }
                LocalReward::Mis => {
                    if labels != 2 {
                        return Err(NaglError::NotBinary(labels));
                    }
                }
                LocalReward::MaxType { high, low } => {
                    if labels != 2 {
                        return Err(NaglError::NotBinary(labels));
                    }
                    if !(high.is_finite() && low.is_finite()) {
                        return Err(NaglError::invalid(format!("non-finite weights at vertex {v}")));
                    }
                }
                LocalReward::SatCenter(cnf) => {
                    if labels < 2 {
                        return Err(NaglError::invalid("SAT oracle needs at least 2 labels"));
                    }
                    if cnf.num_vars >= 63 {
                        return Err(NaglError::invalid("SAT oracle supports at most 62 variables"));
                    }
                }
                LocalReward::Constant(_) => {}
            }
            let (lo, hi) = oracle.bounds();
            all_nonnegative &= lo >= 0.0;
            all_integer &= oracle.all_integer();
            magnitude += lo.abs().max(hi.abs());
        }
        Ok(RewardSystem {
            graph,
            alphabet,
            oracles,
            all_integer,
            all_nonnegative,
            magnitude,
        })
    }

    pub fn constant(graph: Arc<Graph>, labels: usize, value: f64) -> Result<Self> {
        let n = graph.num_vertices();
        Self::new(graph, labels, vec![LocalReward::Constant(value); n])
    }

    #[inline]
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn graph_arc(&self) -> &Arc<Graph> {
        &self.graph
    }

    #[inline]
    pub fn alphabet(&self) -> LabelAlphabet {
        self.alphabet
    }

    #[inline]
    pub fn num_labels(&self) -> usize {
        self.alphabet.size
    }

    pub fn oracle(&self, v: Vertex) -> &LocalReward {
        &self.oracles[v]
    }

    pub fn oracles(&self) -> &[LocalReward] {
        &self.oracles
    }

    pub fn all_integer(&self) -> bool {
        self.all_integer
    }

    pub fn all_nonnegative(&self) -> bool {
        self.all_nonnegative
    }

    /// Upper bound on `|F(x)|` over all labelings.
    pub fn magnitude_bound(&self) -> f64 {
        self.magnitude
    }

    /// `f_v` at the assignment with mixed-radix `code` over `N[v]`.
    ///
    /// `code` must be below `L^{|N[v]|}`; this is the hot path used by the
    /// dynamic program and by local enumeration.
    #[inline]
    pub fn evaluate_code(&self, v: Vertex, code: usize) -> f64 {
        let l = self.alphabet.size;
        match &self.oracles[v] {
            LocalReward::Table(t) => t[code],
            LocalReward::Constant(c) => *c,
            LocalReward::Mis => {
                let own = 1usize << self.graph.self_position(v);
                if code == own {
                    1.0
                } else {
                    0.0
                }
            }
            LocalReward::MaxType { high, low } => {
                if code == 0 {
                    0.0
                } else if code >> self.graph.self_position(v) & 1 == 1 {
                    *high
                } else {
                    *low
                }
            }
            LocalReward::SatCenter(cnf) => {
                let below = pow(l, self.graph.self_position(v));
                let index = code % below + code / (below * l) * below;
                sat_value(cnf, index as u128)
            }
        }
    }

    /// `f_v` from labels aligned with the ascending order of `N[v]`; no
    /// bound on `|N[v]|`.
    pub fn evaluate_labels(&self, v: Vertex, labels: &[Label]) -> f64 {
        let l = self.alphabet.size;
        let p = self.graph.self_position(v);
        match &self.oracles[v] {
            LocalReward::Table(t) => {
                let mut code = 0;
                for &x in labels.iter().rev() {
                    code = code * l + x;
                }
                t[code]
            }
            LocalReward::Constant(c) => *c,
            LocalReward::Mis => {
                let ok = labels
                    .iter()
                    .enumerate()
                    .all(|(j, &x)| if j == p { x == 1 } else { x == 0 });
                if ok {
                    1.0
                } else {
                    0.0
                }
            }
            LocalReward::MaxType { high, low } => {
                if labels[p] == 1 {
                    *high
                } else if labels.contains(&1) {
                    *low
                } else {
                    0.0
                }
            }
            LocalReward::SatCenter(cnf) => {
                let limit = 1u128 << cnf.num_vars;
                let mut index: u128 = 0;
                for (j, &x) in labels.iter().enumerate().rev() {
                    if j == p {
                        continue;
                    }
                    index = index * l as u128 + x as u128;
                    if index >= limit {
                        return 0.0;
                    }
                }
                sat_value(cnf, index)
            }
        }
    }

    pub fn evaluate_local(&self, a: &NeighborhoodAssignment) -> Result<f64> {
        let v = a.vertex;
        self.graph.check_vertex(v)?;
        let width = self.graph.degree(v) + 1;
        if a.labels.len() != width {
            return Err(NaglError::invalid(format!(
                "assignment for vertex {v} has {} labels, N[v] has {width}",
                a.labels.len()
            )));
        }
        self.check_labels(&a.labels)?;
        Ok(self.evaluate_labels(v, &a.labels))
    }

    fn check_labels(&self, labels: &[Label]) -> Result<()> {
        match labels.iter().find(|&&x| x >= self.alphabet.size) {
            Some(x) => Err(NaglError::invalid(format!(
                "label {x} outside alphabet of size {}",
                self.alphabet.size
            ))),
            None => Ok(()),
        }
    }

    /// `f_v(x_{N[v]})` for a global labeling, using `buf` as scratch.
    #[inline]
    pub fn term(&self, v: Vertex, labels: &[Label], buf: &mut Vec<Label>) -> f64 {
        buf.clear();
        let nb = self.graph.neighbors(v);
        let p = self.graph.self_position(v);
        buf.extend(nb[..p].iter().map(|&u| labels[u]));
        buf.push(labels[v]);
        buf.extend(nb[p..].iter().map(|&u| labels[u]));
        self.evaluate_labels(v, buf)
    }

    /// `F(x)` without validation beyond a length assertion.
    pub fn total(&self, labels: &[Label]) -> f64 {
        assert_eq!(labels.len(), self.graph.num_vertices());
        let mut buf = Vec::new();
        (0..labels.len()).map(|v| self.term(v, labels, &mut buf)).sum()
    }

    /// `F(x)`; caches the value in `x`.
    pub fn evaluate_total(&self, x: &mut Labeling) -> Result<f64> {
        if x.labels.len() != self.graph.num_vertices() {
            return Err(NaglError::invalid(format!(
                "labeling has {} entries for {} vertices",
                x.labels.len(),
                self.graph.num_vertices()
            )));
        }
        self.check_labels(&x.labels)?;
        let value = self.total(&x.labels);
        x.value = Some(value);
        Ok(value)
    }

    /// Same oracles with every vertex outside `keep` replaced by `Constant(0)`.
    pub fn zeroed_outside(&self, keep: &[bool]) -> RewardSystem {
        let oracles = self
            .oracles
            .iter()
            .zip(keep)
            .map(|(o, &k)| if k { o.clone() } else { LocalReward::Constant(0.0) })
            .collect();
        RewardSystem::new(self.graph.clone(), self.alphabet.size, oracles)
            .expect("zeroing preserves validity")
    }

    /// Restriction to the subgraph induced by the ascending `vertices`.
    /// Vertices with `active` false get `Constant(0)`; active vertices must
    /// keep their whole closed neighborhood inside `vertices`.
    pub fn restrict(&self, vertices: &[Vertex], active: impl Fn(Vertex) -> bool) -> Result<RewardSystem> {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        let sub = self.graph.induced_subgraph(vertices);
        let mut oracles = Vec::with_capacity(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            if active(v) {
                if sub.degree(i) != self.graph.degree(v) {
                    return Err(NaglError::invalid(format!(
                        "active vertex {v} loses neighbors in the restriction"
                    )));
                }
                oracles.push(self.oracles[v].clone());
            } else {
                oracles.push(LocalReward::Constant(0.0));
            }
        }
        RewardSystem::new(Arc::new(sub), self.alphabet.size, oracles)
    }
}

#[inline]
fn pow(base: usize, exp: usize) -> usize {
    let mut acc = 1;
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

fn sat_value(cnf: &Cnf, index: u128) -> f64 {
    if index >= 1u128 << cnf.num_vars {
        0.0
    } else if cnf.satisfied_by(index as u64) {
        1.0
    } else {
        0.0
    }
}

/// Number of leaves `t` of the SAT star: the least `t` with `L^t >= 2^N`.
pub fn sat_star_leaves(num_vars: usize, labels: usize) -> usize {
    let target = 1u128 << num_vars;
    let mut t = 0;
    let mut reach: u128 = 1;
    while reach < target {
        reach *= labels as u128;
        t += 1;
    }
    t
}

/// Star with center 0 and leaves `1..=t`; leaves carry `Constant(0)` and the
/// center carries the SAT oracle, so `OPT = 1` iff the formula is satisfiable.
pub fn build_sat_star_gadget(formula: &Cnf, labels: usize) -> Result<(Graph, RewardSystem)> {
    if labels < 2 {
        return Err(NaglError::invalid("SAT star gadget needs at least 2 labels"));
    }
    if formula.num_vars == 0 {
        return Err(NaglError::invalid("formula has no variables"));
    }
    let t = sat_star_leaves(formula.num_vars, labels);
    let g = crate::generators::star(t);
    let mut oracles = vec![LocalReward::Constant(0.0); t + 1];
    oracles[0] = LocalReward::SatCenter(Arc::new(formula.clone()));
    let rs = RewardSystem::new(Arc::new(g.clone()), labels, oracles)?;
    Ok((g, rs))
}

/// Decodes the leaf labels of a SAT star into a variable assignment, or
/// `None` when the encoded integer is at least `2^N`.
pub fn decode_sat_star(formula: &Cnf, labels: usize, x: &[Label]) -> Option<u64> {
    let mut index: u128 = 0;
    for &d in x[1..].iter().rev() {
        index = index * labels as u128 + d as u128;
    }
    (index < 1u128 << formula.num_vars).then_some(index as u64)
}

pub fn build_mis_gadget(g: Arc<Graph>) -> Result<RewardSystem> {
    let n = g.num_vertices();
    RewardSystem::new(g, 2, vec![LocalReward::Mis; n])
}

pub fn build_max_type_gadget(g: Arc<Graph>, w_hi: f64, w_lo: &[f64]) -> Result<RewardSystem> {
    if w_lo.len() != g.num_vertices() {
        return Err(NaglError::invalid("one low weight per vertex required"));
    }
    if w_hi < 0.0 || w_lo.iter().any(|&w| w < 0.0) {
        return Err(NaglError::invalid("max-type weights must be nonnegative"));
    }
    if let Some(w) = w_lo.iter().find(|&&w| w > w_hi) {
        return Err(NaglError::invalid(format!("low weight {w} exceeds high weight {w_hi}")));
    }
    let oracles = w_lo
        .iter()
        .map(|&low| LocalReward::MaxType { high: w_hi, low })
        .collect();
    RewardSystem::new(g, 2, oracles)
}

/// Low weights drawn uniformly from `lo..hi`.
pub fn sample_low_weights(n: usize, lo: f64, hi: f64, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random_range(lo..hi)).collect()
}

pub const DEFAULT_W_HI: f64 = 100.0;
pub const DEFAULT_W_LO_RANGE: (f64, f64) = (30.0, 90.0);

/// Max-type gadget with the default weights and low weights from `seed`.
pub fn random_max_type_gadget(g: Arc<Graph>, seed: u64) -> Result<RewardSystem> {
    let (lo, hi) = DEFAULT_W_LO_RANGE;
    let w_lo = sample_low_weights(g.num_vertices(), lo, hi, seed);
    build_max_type_gadget(g, DEFAULT_W_HI, &w_lo)
}

/// Random explicit tables, filled vertex by vertex in mixed-radix order
/// from a single seeded stream. `cap` bounds the total entry count.
pub fn build_random_table_system(
    g: Arc<Graph>,
    labels: usize,
    seed: u64,
    dist: TableDistribution,
    cap: usize,
) -> Result<RewardSystem> {
    dist.validate()?;
    let alphabet = LabelAlphabet::new(labels)?;
    let mut total: u128 = 0;
    for v in 0..g.num_vertices() {
        let size = alphabet.checked_power(g.degree(v) + 1).map_or(u128::MAX, |s| s as u128);
        total = total.saturating_add(size);
    }
    if total > cap as u128 {
        return Err(NaglError::CapExceeded {
            what: "random reward tables (use a sparser graph or a gadget oracle)".into(),
            required: total,
            cap: cap as u128,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let oracles = (0..g.num_vertices())
        .map(|v| {
            let size = alphabet.checked_power(g.degree(v) + 1).unwrap();
            LocalReward::Table((0..size).map(|_| dist.sample(&mut rng)).collect())
        })
        .collect();
    RewardSystem::new(g, labels, oracles)
}

pub const DEFAULT_TABLE_CAP: usize = 1 << 26;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    fn arc(g: Graph) -> Arc<Graph> {
        Arc::new(g)
    }

    /// Enumerates every code of `N[v]` and checks the two evaluation paths agree.
    fn paths_agree(rs: &RewardSystem, v: Vertex) {
        let width = rs.graph().degree(v) + 1;
        let l = rs.num_labels();
        let total = rs.alphabet().checked_power(width).unwrap();
        for code in 0..total {
            let mut labels = Vec::with_capacity(width);
            let mut c = code;
            for _ in 0..width {
                labels.push(c % l);
                c /= l;
            }
            assert_eq!(rs.evaluate_code(v, code), rs.evaluate_labels(v, &labels), "v={v} code={code}");
        }
    }

    #[test]
    fn code_and_label_paths_agree() {
        let g = arc(generators::cycle(5));
        let mis = build_mis_gadget(g.clone()).unwrap();
        let mt = random_max_type_gadget(g.clone(), 3).unwrap();
        let tab = build_random_table_system(g, 3, 1, TableDistribution::Uniform01, 1 << 20).unwrap();
        let cnf = Cnf::random(6, 10, 3, 2);
        let (_, sat) = build_sat_star_gadget(&cnf, 3).unwrap();
        for v in 0..5 {
            paths_agree(&mis, v);
            paths_agree(&mt, v);
            paths_agree(&tab, v);
        }
        for v in 0..sat.graph().num_vertices() {
            paths_agree(&sat, v);
        }
    }

    #[test]
    fn constant_zero_is_zero() {
        let g = arc(generators::path(3));
        let rs = RewardSystem::constant(g.clone(), 2, 0.0).unwrap();
        let a = NeighborhoodAssignment { vertex: 1, labels: vec![1, 0, 1] };
        assert_eq!(rs.evaluate_local(&a).unwrap(), 0.0);
        assert_eq!(rs.total(&[1, 1, 0]), 0.0);
    }

    #[test]
    fn mis_local_and_total() {
        let tri = arc(generators::complete(3));
        let rs = build_mis_gadget(tri).unwrap();
        let a = NeighborhoodAssignment { vertex: 0, labels: vec![1, 0, 0] };
        assert_eq!(rs.evaluate_local(&a).unwrap(), 1.0);
        let mut one = Labeling::new(vec![0, 1, 0]);
        assert_eq!(rs.evaluate_total(&mut one).unwrap(), 1.0);
        assert_eq!(one.value, Some(1.0));
        let mut all = Labeling::uniform(3, 1);
        assert_eq!(rs.evaluate_total(&mut all).unwrap(), 0.0);

        let empty = build_mis_gadget(arc(Graph::empty(4))).unwrap();
        assert_eq!(empty.total(&[1, 1, 1, 1]), 4.0);
    }

    #[test]
    fn evaluate_local_rejects_bad_domain() {
        let rs = build_mis_gadget(arc(generators::path(3))).unwrap();
        let short = NeighborhoodAssignment { vertex: 1, labels: vec![0, 1] };
        assert!(rs.evaluate_local(&short).is_err());
        let bad = NeighborhoodAssignment { vertex: 0, labels: vec![2, 0] };
        assert!(rs.evaluate_local(&bad).is_err());
        let mut wrong_len = Labeling::uniform(2, 0);
        assert!(rs.evaluate_total(&mut wrong_len).is_err());
    }

    #[test]
    fn random_tables_are_deterministic() {
        let g = arc(generators::star(3));
        let a = build_random_table_system(g.clone(), 2, 9, TableDistribution::Uniform01, 1000).unwrap();
        let b = build_random_table_system(g.clone(), 2, 9, TableDistribution::Uniform01, 1000).unwrap();
        assert_eq!(a.oracles(), b.oracles());
        match a.oracle(0) {
            LocalReward::Table(t) => assert_eq!(t.len(), 16),
            other => panic!("unexpected {other:?}"),
        }
        // the fixed entry is the 3rd draw of vertex 1's table after vertex 0's 16
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let draws: Vec<f64> = (0..19).map(|_| rng.random::<f64>()).collect();
        let a1 = NeighborhoodAssignment { vertex: 1, labels: vec![0, 1] };
        assert_eq!(a.evaluate_local(&a1).unwrap(), draws[16 + 2]);

        let zero = build_random_table_system(g.clone(), 2, 1, TableDistribution::Integer { lo: 0, hi: 0 }, 1000).unwrap();
        assert!(zero.all_integer() && zero.all_nonnegative());
        assert_eq!(zero.magnitude_bound(), 0.0);

        assert!(matches!(
            build_random_table_system(g, 2, 1, TableDistribution::Uniform01, 10),
            Err(NaglError::CapExceeded { .. })
        ));
    }

    #[test]
    fn max_type_cases() {
        let g = arc(generators::path(3));
        let rs = build_max_type_gadget(g.clone(), 100.0, &[57.3, 57.3, 57.3]).unwrap();
        let empty = NeighborhoodAssignment { vertex: 1, labels: vec![0, 0, 0] };
        assert_eq!(rs.evaluate_local(&empty).unwrap(), 0.0);
        let active = NeighborhoodAssignment { vertex: 1, labels: vec![1, 1, 0] };
        assert_eq!(rs.evaluate_local(&active).unwrap(), 100.0);
        let nb = NeighborhoodAssignment { vertex: 1, labels: vec![0, 0, 1] };
        assert_eq!(rs.evaluate_local(&nb).unwrap(), 57.3);
        assert!(build_max_type_gadget(g.clone(), 100.0, &[-1.0, 0.0, 0.0]).is_err());
        assert!(build_max_type_gadget(g, 10.0, &[20.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn max_type_is_locally_submodular() {
        let g = arc(generators::star(5));
        let rs = random_max_type_gadget(g.clone(), 4).unwrap();
        for v in 0..g.num_vertices() {
            let m = g.degree(v) + 1;
            let val = |mask: usize| rs.evaluate_code(v, mask);
            for b in 0..1usize << m {
                let mut a = b;
                loop {
                    for s in 0..m {
                        if b >> s & 1 == 0 {
                            let da = val(a | 1 << s) - val(a);
                            let db = val(b | 1 << s) - val(b);
                            assert!(da >= db - 1e-9);
                        }
                    }
                    if a == 0 {
                        break;
                    }
                    a = (a - 1) & b;
                }
            }
        }
    }

    #[test]
    fn sat_star_examples() {
        let unit = Cnf::new(1, vec![vec![1]]).unwrap();
        let (g, rs) = build_sat_star_gadget(&unit, 2).unwrap();
        assert_eq!(g.num_vertices(), 2);
        assert_eq!(rs.total(&[0, 1]), 1.0);
        assert_eq!(rs.total(&[1, 0]), 0.0);

        let contra = Cnf::new(1, vec![vec![1], vec![-1]]).unwrap();
        for l in 2..5 {
            let (g, rs) = build_sat_star_gadget(&contra, l).unwrap();
            let n = g.num_vertices();
            let mut x = vec![0; n];
            loop {
                assert_eq!(rs.total(&x), 0.0);
                let mut i = 0;
                while i < n && x[i] == l - 1 {
                    x[i] = 0;
                    i += 1;
                }
                if i == n {
                    break;
                }
                x[i] += 1;
            }
        }
        assert!(build_sat_star_gadget(&unit, 1).is_err());
        assert_eq!(sat_star_leaves(6, 3), 4);
        assert_eq!(sat_star_leaves(6, 4), 3);
        assert_eq!(sat_star_leaves(5, 2), 5);
    }

    #[test]
    fn sat_star_values_are_binary() {
        let cnf = Cnf::random(5, 12, 3, 8);
        let (g, rs) = build_sat_star_gadget(&cnf, 3).unwrap();
        let n = g.num_vertices();
        for code in 0..3usize.pow(n as u32) {
            let x: Vec<_> = (0..n).map(|i| code / 3usize.pow(i as u32) % 3).collect();
            let f = rs.total(&x);
            assert!(f == 0.0 || f == 1.0);
            let decoded = decode_sat_star(&cnf, 3, &x);
            assert_eq!(f == 1.0, decoded.is_some_and(|b| cnf.satisfied_by(b)));
        }
    }

    #[test]
    fn additive_decomposition() {
        // a system whose tables are the sums of two others evaluates to the sum
        let g = arc(generators::cycle(4));
        let a = build_random_table_system(g.clone(), 2, 1, TableDistribution::Uniform01, 1000).unwrap();
        let b = build_random_table_system(g.clone(), 2, 2, TableDistribution::Uniform01, 1000).unwrap();
        let sum: Vec<_> = a
            .oracles()
            .iter()
            .zip(b.oracles())
            .map(|(x, y)| match (x, y) {
                (LocalReward::Table(p), LocalReward::Table(q)) => {
                    LocalReward::Table(p.iter().zip(q).map(|(s, t)| s + t).collect())
                }
                _ => unreachable!(),
            })
            .collect();
        let c = RewardSystem::new(g, 2, sum).unwrap();
        for code in 0..16usize {
            let x: Vec<_> = (0..4).map(|i| code >> i & 1).collect();
            assert!((c.total(&x) - a.total(&x) - b.total(&x)).abs() < 1e-12);
        }
    }

    #[test]
    fn distribution_parsing() {
        assert_eq!("uniform01".parse::<TableDistribution>().unwrap(), TableDistribution::Uniform01);
        assert_eq!(
            "integer:-5:5".parse::<TableDistribution>().unwrap(),
            TableDistribution::Integer { lo: -5, hi: 5 }
        );
        assert!("integer:5:1".parse::<TableDistribution>().is_err());
        assert!("gauss".parse::<TableDistribution>().is_err());
        let d = TableDistribution::Uniform { lo: 0.5, hi: 2.0 };
        assert_eq!(d.to_string().parse::<TableDistribution>().unwrap(), d);
    }
}

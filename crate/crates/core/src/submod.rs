//! Budgeted maximization with binary labels: label 1 marks the active set.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{NaglError, Result};
use crate::graph::Vertex;
use crate::rewards::{Label, RewardSystem};

/// Largest closed neighborhood [`check_local_submodularity`] enumerates.
pub const LOCAL_CHECK_CAP: usize = 12;

const TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActiveSet {
    /// Members in the order they were added.
    pub members: Vec<Vertex>,
    /// F of the induced 0/1 labeling.
    pub value: f64,
}

impl ActiveSet {
    pub fn empty(rs: &RewardSystem) -> Self {
        let n = rs.graph().num_vertices();
        ActiveSet {
            members: Vec::new(),
            value: rs.total(&vec![0; n]),
        }
    }

    pub fn from_members(rs: &RewardSystem, members: Vec<Vertex>) -> Result<Self> {
        let n = rs.graph().num_vertices();
        let mut labels = vec![0; n];
        for &v in &members {
            rs.graph().check_vertex(v)?;
            if labels[v] == 1 {
                return Err(NaglError::invalid(format!("vertex {v} listed twice")));
            }
            labels[v] = 1;
        }
        Ok(ActiveSet {
            value: rs.total(&labels),
            members,
        })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn sorted(&self) -> Vec<Vertex> {
        let mut m = self.members.clone();
        m.sort_unstable();
        m
    }

    pub fn labels(&self, n: usize) -> Vec<Label> {
        let mut x = vec![0; n];
        for &v in &self.members {
            x[v] = 1;
        }
        x
    }
}

/// `min(floor(n / 50), 400)`.
pub fn budget_rule(n: usize) -> usize {
    (n / 50).min(400)
}

fn require_binary(rs: &RewardSystem) -> Result<()> {
    if rs.num_labels() != 2 {
        return Err(NaglError::NotBinary(rs.num_labels()));
    }
    Ok(())
}

/// Exhaustive monotonicity and diminishing-returns check of
/// `g_v(T) = f_v(1_T)` over subsets of `N[v]`.
pub fn check_local_submodularity(rs: &RewardSystem, v: Vertex) -> Result<bool> {
    require_binary(rs)?;
    rs.graph().check_vertex(v)?;
    let m = rs.graph().degree(v) + 1;
    if m > LOCAL_CHECK_CAP {
        return Err(NaglError::CapExceeded {
            what: format!("local submodularity check at vertex {v}"),
            required: 1u128 << m,
            cap: 1u128 << LOCAL_CHECK_CAP,
        });
    }
    // with L = 2 the mixed-radix code of an indicator vector is its bitmask
    let g: Vec<f64> = (0..1usize << m).map(|mask| rs.evaluate_code(v, mask)).collect();
    let full = (1usize << m) - 1;
    for b in 0..=full {
        for s in 0..m {
            if b >> s & 1 == 1 {
                continue;
            }
            let gain_b = g[b | 1 << s] - g[b];
            if gain_b < -TOLERANCE {
                return Ok(false);
            }
            // every subset a of b
            let mut a = b;
            loop {
                if g[a | 1 << s] - g[a] < gain_b - TOLERANCE {
                    return Ok(false);
                }
                if a == 0 {
                    break;
                }
                a = (a - 1) & b;
            }
        }
    }
    Ok(true)
}

/// Change in the terms of `N[u]` when `u` flips from 0 to 1 in `x`.
fn local_gain(rs: &RewardSystem, x: &mut [Label], u: Vertex, buf: &mut Vec<Label>) -> f64 {
    let g = rs.graph();
    let before: f64 = g.neighbors(u).iter().map(|&w| rs.term(w, x, buf)).sum::<f64>() + rs.term(u, x, buf);
    x[u] = 1;
    let after: f64 = g.neighbors(u).iter().map(|&w| rs.term(w, x, buf)).sum::<f64>() + rs.term(u, x, buf);
    x[u] = 0;
    after - before
}

/// `F(S ∪ {u}) - F(S)`, evaluating only the terms of `N[u]`.
pub fn marginal(rs: &RewardSystem, s: &ActiveSet, u: Vertex) -> Result<f64> {
    require_binary(rs)?;
    rs.graph().check_vertex(u)?;
    if s.members.contains(&u) {
        return Err(NaglError::invalid(format!("vertex {u} is already active")));
    }
    let mut x = s.labels(rs.graph().num_vertices());
    Ok(local_gain(rs, &mut x, u, &mut Vec::new()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MarginalUpdate {
    /// Recompute only vertices within distance 2 of the last pick.
    #[default]
    Dirty,
    /// Recompute every marginal each step.
    Full,
}

#[derive(Debug, Clone, Default)]
pub struct GreedyOptions {
    pub update: MarginalUpdate,
    pub parallel: bool,
    /// Track `min_i F(S_i) + (sum of the K largest marginals at S_i)`.
    pub upper_bound: bool,
}

#[derive(Debug, Clone)]
pub struct GreedyOutcome {
    pub set: ActiveSet,
    /// `F(S_0), F(S_1), …`.
    pub trajectory: Vec<f64>,
    /// Sound upper bound on the budgeted optimum for monotone submodular F.
    pub upper_bound: Option<f64>,
    pub marginal_evaluations: u64,
}

fn top_sum(values: &mut [f64], k: usize) -> f64 {
    if k == 0 || values.is_empty() {
        return 0.0;
    }
    let k = k.min(values.len());
    values.select_nth_unstable_by(k - 1, |a, b| b.total_cmp(a));
    values[..k].iter().map(|v| v.max(0.0)).sum()
}

/// Standard greedy: `K` rounds, each adding the vertex of largest marginal
/// (ties to the smallest id). Zero-marginal picks are still made.
pub fn greedy_budgeted(rs: &RewardSystem, budget: usize, opts: &GreedyOptions) -> Result<GreedyOutcome> {
    require_binary(rs)?;
    if !rs.all_nonnegative() {
        return Err(NaglError::NegativeReward);
    }
    let g = rs.graph();
    let n = g.num_vertices();
    let budget = budget.min(n);
    let mut x = vec![0; n];
    let mut set = ActiveSet::empty(rs);
    let mut trajectory = vec![set.value];
    let mut gains = vec![0.0f64; n];
    let mut dirty = vec![true; n];
    let mut evaluations = 0u64;
    let mut bound = f64::INFINITY;

    for round in 0..=budget {
        let stale: Vec<Vertex> = (0..n)
            .filter(|&v| x[v] == 0 && (dirty[v] || opts.update == MarginalUpdate::Full))
            .collect();
        evaluations += stale.len() as u64;
        let fresh: Vec<(Vertex, f64)> = if opts.parallel {
            stale
                .par_iter()
                .map_init(
                    || (x.clone(), Vec::new()),
                    |(xl, buf), &v| (v, local_gain(rs, xl, v, buf)),
                )
                .collect()
        } else {
            let mut buf = Vec::new();
            stale.iter().map(|&v| (v, local_gain(rs, &mut x, v, &mut buf))).collect()
        };
        for (v, gain) in fresh {
            gains[v] = gain;
            dirty[v] = false;
        }
        if opts.upper_bound {
            let mut open: Vec<f64> = (0..n).filter(|&v| x[v] == 0).map(|v| gains[v]).collect();
            bound = bound.min(set.value + top_sum(&mut open, budget));
        }
        if round == budget {
            break;
        }
        let mut best: Option<Vertex> = None;
        for v in 0..n {
            if x[v] == 0 && best.is_none_or(|b| gains[v] > gains[b]) {
                best = Some(v);
            }
        }
        let Some(u) = best else { break };
        x[u] = 1;
        set.members.push(u);
        set.value += gains[u];
        trajectory.push(set.value);
        for &w in g.neighbors(u).iter().chain(std::iter::once(&u)) {
            dirty[w] = true;
            for &z in g.neighbors(w) {
                dirty[z] = true;
            }
        }
    }
    set.value = rs.total(&x);
    Ok(GreedyOutcome {
        set,
        trajectory,
        upper_bound: opts.upper_bound.then_some(bound),
        marginal_evaluations: evaluations,
    })
}

//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashSet;
use std::sync::Arc;

use nagl_core::{Cnf, Graph, LocalReward, RewardSystem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Maximum of F over all labelings, recomputing F from scratch each time.
pub fn enumerate_opt(rs: &RewardSystem) -> f64 {
    let n = rs.graph().num_vertices();
    let l = rs.num_labels();
    let mut x = vec![0; n];
    let mut best = rs.total(&x);
    loop {
        let Some(i) = (0..n).find(|&i| x[i] + 1 < l) else {
            return best;
        };
        x[i] += 1;
        x[..i].iter_mut().for_each(|d| *d = 0);
        best = best.max(rs.total(&x));
    }
}

pub fn satisfiable(cnf: &Cnf) -> bool {
    (0..1u64 << cnf.num_vars).any(|assignment| {
        cnf.clauses.iter().all(|clause| {
            clause.iter().any(|&lit| {
                let var = lit.unsigned_abs() as u64 - 1;
                let value = assignment & (1 << var) != 0;
                if lit > 0 {
                    value
                } else {
                    !value
                }
            })
        })
    })
}

pub fn independence_number(g: &Graph) -> usize {
    let n = g.num_vertices();
    let edges: Vec<_> = g.edges().collect();
    (0u32..1 << n)
        .filter(|&s| edges.iter().all(|&(u, v)| s >> u & 1 == 0 || s >> v & 1 == 0))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Binary tables `g_v(T) = min(cap_v, Σ_{u∈T} w_u)`: monotone and submodular.
pub fn budget_additive_system(g: &Graph, seed: u64) -> RewardSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let oracles = (0..g.num_vertices())
        .map(|v| {
            let m = g.degree(v) + 1;
            let w: Vec<f64> = (0..m).map(|_| rng.random_range(0..8) as f64).collect();
            let cap = rng.random_range(1..20) as f64;
            LocalReward::Table(
                (0..1usize << m)
                    .map(|mask| (0..m).filter(|j| mask >> j & 1 == 1).map(|j| w[j]).sum::<f64>().min(cap))
                    .collect(),
            )
        })
        .collect();
    RewardSystem::new(Arc::new(g.clone()), 2, oracles).unwrap()
}

fn set_value(rs: &RewardSystem, mask: u32) -> f64 {
    let x: Vec<_> = (0..rs.graph().num_vertices()).map(|v| (mask >> v & 1) as usize).collect();
    rs.total(&x)
}

/// Exhaustive monotonicity and diminishing returns of S ↦ F(1_S).
pub fn global_submodular(rs: &RewardSystem) -> Result<(), String> {
    let n = rs.graph().num_vertices();
    let values: Vec<f64> = (0u32..1 << n).map(|m| set_value(rs, m)).collect();
    for b in 0u32..1 << n {
        for a in (0..=b).filter(|a| a & !b == 0) {
            if values[b as usize] < values[a as usize] - 1e-9 {
                return Err(format!("not monotone: {a:b} ⊆ {b:b}"));
            }
            for s in (0..n).filter(|s| b >> s & 1 == 0) {
                let ga = values[(a | 1 << s) as usize] - values[a as usize];
                let gb = values[(b | 1 << s) as usize] - values[b as usize];
                if ga < gb - 1e-9 {
                    return Err(format!("not submodular at {a:b} ⊆ {b:b}, s={s}"));
                }
            }
        }
    }
    Ok(())
}

/// Best F over active sets with at most `k` members.
pub fn budgeted_opt(rs: &RewardSystem, k: usize) -> f64 {
    let n = rs.graph().num_vertices();
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize <= k)
        .map(|m| set_value(rs, m))
        .fold(f64::NEG_INFINITY, f64::max)
}

pub struct LpSummary {
    pub constraints: usize,
    pub binaries: usize,
}

fn is_var(tok: &str) -> bool {
    let parts: Vec<_> = tok.split('_').collect();
    parts.len() == 3
        && (parts[0] == "x" || parts[0] == "y")
        && parts[1..].iter().all(|p| !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit()))
}

fn is_number(tok: &str) -> bool {
    tok.parse::<f64>().is_ok()
}

/// Linear expression: `[sign] [coef] var` repeated, first sign optional.
fn check_expression(tokens: &[&str], vars: &mut HashSet<String>) -> Result<(), String> {
    let mut i = 0;
    let mut first = true;
    while i < tokens.len() {
        if tokens[i] == "+" || tokens[i] == "-" {
            i += 1;
        } else if !first {
            return Err(format!("missing operator before '{}'", tokens[i]));
        }
        if i < tokens.len() && is_number(tokens[i]) {
            i += 1;
        }
        match tokens.get(i) {
            Some(t) if is_var(t) => {
                vars.insert(t.to_string());
                i += 1;
            }
            other => return Err(format!("expected a variable, got {other:?}")),
        }
        first = false;
    }
    Ok(())
}

/// Minimal CPLEX LP grammar check for the exported models.
pub fn check_lp_grammar(text: &str) -> Result<LpSummary, String> {
    let mut section = "";
    let mut statements: Vec<(String, Vec<String>)> = Vec::new();
    let mut binaries: Vec<String> = Vec::new();
    let mut seen_end = false;
    for line in text.lines() {
        if line.starts_with('\\') || line.trim().is_empty() {
            continue;
        }
        if seen_end {
            return Err("content after End".into());
        }
        match line.trim() {
            "Maximize" | "Subject To" | "Binaries" => {
                let order = ["", "Maximize", "Subject To", "Binaries"];
                let now = order.iter().position(|s| *s == section).unwrap();
                if order.iter().position(|s| *s == line.trim()).unwrap() != now + 1 {
                    return Err(format!("section '{}' out of order", line.trim()));
                }
                section = order[now + 1];
                continue;
            }
            "End" => {
                seen_end = true;
                continue;
            }
            _ => {}
        }
        if !line.starts_with(' ') {
            return Err(format!("unexpected line '{line}'"));
        }
        let toks: Vec<String> = line.split_whitespace().map(str::to_string).collect();
        match section {
            "Binaries" => binaries.extend(toks),
            "Maximize" | "Subject To" => {
                if toks.first().is_some_and(|t| t.ends_with(':')) {
                    statements.push((section.to_string(), toks));
                } else {
                    statements.last_mut().ok_or("continuation without statement")?.1.extend(toks);
                }
            }
            _ => return Err(format!("line outside a section: '{line}'")),
        }
    }
    if !seen_end {
        return Err("missing End".into());
    }
    let mut used = HashSet::new();
    let mut names = HashSet::new();
    let mut constraints = 0;
    let mut objectives = 0;
    for (sec, toks) in &statements {
        let name = toks[0].trim_end_matches(':').to_string();
        if !names.insert(name.clone()) {
            return Err(format!("duplicate row name {name}"));
        }
        let body: Vec<&str> = toks[1..].iter().map(String::as_str).collect();
        if sec == "Maximize" {
            objectives += 1;
            check_expression(&body, &mut used)?;
        } else {
            let rel = body
                .iter()
                .position(|t| ["=", "<=", ">="].contains(t))
                .ok_or_else(|| format!("{name}: no relation"))?;
            if rel + 2 != body.len() || !is_number(body[rel + 1]) {
                return Err(format!("{name}: right-hand side must be one number"));
            }
            check_expression(&body[..rel], &mut used)?;
            constraints += 1;
        }
    }
    if objectives != 1 {
        return Err(format!("{objectives} objectives"));
    }
    let declared: HashSet<String> = binaries.iter().cloned().collect();
    if declared.len() != binaries.len() || !binaries.iter().all(|b| is_var(b)) {
        return Err("malformed Binaries section".into());
    }
    if let Some(v) = used.iter().find(|v| !declared.contains(*v)) {
        return Err(format!("variable {v} not declared binary"));
    }
    Ok(LpSummary {
        constraints,
        binaries: binaries.len(),
    })
}

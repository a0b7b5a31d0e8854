//! CPLEX LP export of the local-configuration integer program.
//!
//! Variables: `x_v_l` (vertex `v` takes label `l`) and `y_v_a` (vertex `v`
//! sees local configuration `a`, the mixed-radix code of its closed
//! neighborhood). Constraints: `xs_v` (one label per vertex), `ys_v` (one
//! configuration per vertex), `c_v_u_l` (configurations of `v` agree with the
//! label of each `u` in `N[v]`) and an optional `budget` on label 1.

use crate::error::{NaglError, Result};
use crate::rewards::RewardSystem;

const LINE_LIMIT: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct LpModel {
    pub text: String,
    pub x_vars: usize,
    pub y_vars: usize,
    pub constraints: usize,
}

/// Appends `name: terms` wrapped into continuation lines.
struct Writer {
    out: String,
    line: usize,
}

impl Writer {
    fn start(&mut self, head: &str) {
        self.out.push(' ');
        self.out.push_str(head);
        self.line = head.len() + 1;
    }

    fn token(&mut self, tok: &str) {
        if self.line + tok.len() + 1 > LINE_LIMIT {
            self.out.push_str("\n  ");
            self.line = 2;
        } else {
            self.out.push(' ');
            self.line += 1;
        }
        self.out.push_str(tok);
        self.line += tok.len();
    }

    fn end(&mut self) {
        self.out.push('\n');
        self.line = 0;
    }
}

fn coefficient(c: f64, first: bool) -> (String, String) {
    let sign = if c < 0.0 { "-" } else { "+" };
    let mag = format!("{}", c.abs());
    if first && c >= 0.0 {
        (String::new(), mag)
    } else {
        (sign.to_string(), mag)
    }
}

pub fn export_lp(rs: &RewardSystem, budget: Option<usize>, cap: usize) -> Result<LpModel> {
    let g = rs.graph();
    let n = g.num_vertices();
    let l = rs.num_labels();
    if n == 0 {
        return Err(NaglError::invalid("cannot export a model without vertices"));
    }
    if budget.is_some() && l < 2 {
        return Err(NaglError::invalid("a budget on label 1 needs at least two labels"));
    }
    let alphabet = rs.alphabet();
    let mut sizes = Vec::with_capacity(n);
    let mut total: u128 = 0;
    for v in 0..n {
        let s = alphabet.checked_power(g.degree(v) + 1);
        total = total.saturating_add(s.map_or(u128::MAX, |s| s as u128));
        sizes.push(s.unwrap_or(0));
    }
    if total > cap as u128 {
        return Err(NaglError::CapExceeded {
            what: "LP configuration variables".into(),
            required: total,
            cap: cap as u128,
        });
    }

    let mut w = Writer {
        out: String::from("\\ local-configuration model\nMaximize\n"),
        line: 0,
    };
    w.start("obj:");
    let mut first = true;
    for v in 0..n {
        for a in 0..sizes[v] {
            let c = rs.evaluate_code(v, a);
            if c != 0.0 {
                let (sign, mag) = coefficient(c, first);
                if !sign.is_empty() {
                    w.token(&sign);
                }
                w.token(&mag);
                w.token(&format!("y_{v}_{a}"));
                first = false;
            }
        }
    }
    if first {
        w.token("0");
        w.token("x_0_0");
    }
    w.end();

    w.out.push_str("Subject To\n");
    let mut constraints = 0;
    for v in 0..n {
        w.start(&format!("xs_{v}:"));
        for lab in 0..l {
            if lab > 0 {
                w.token("+");
            }
            w.token(&format!("x_{v}_{lab}"));
        }
        w.token("=");
        w.token("1");
        w.end();
        constraints += 1;
    }
    for v in 0..n {
        w.start(&format!("ys_{v}:"));
        for a in 0..sizes[v] {
            if a > 0 {
                w.token("+");
            }
            w.token(&format!("y_{v}_{a}"));
        }
        w.token("=");
        w.token("1");
        w.end();
        constraints += 1;
    }
    for v in 0..n {
        let nb = g.closed_neighborhood(v);
        let mut stride = 1;
        for &u in &nb {
            for lab in 0..l {
                w.start(&format!("c_{v}_{u}_{lab}:"));
                let mut first = true;
                for a in (0..sizes[v]).filter(|a| a / stride % l == lab) {
                    if !first {
                        w.token("+");
                    }
                    w.token(&format!("y_{v}_{a}"));
                    first = false;
                }
                w.token("-");
                w.token(&format!("x_{u}_{lab}"));
                w.token("=");
                w.token("0");
                w.end();
                constraints += 1;
            }
            stride *= l;
        }
    }
    if let Some(k) = budget {
        w.start("budget:");
        for v in 0..n {
            if v > 0 {
                w.token("+");
            }
            w.token(&format!("x_{v}_1"));
        }
        w.token("<=");
        w.token(&k.to_string());
        w.end();
        constraints += 1;
    }

    w.out.push_str("Binaries\n");
    w.start("");
    for v in 0..n {
        for lab in 0..l {
            w.token(&format!("x_{v}_{lab}"));
        }
    }
    for v in 0..n {
        for a in 0..sizes[v] {
            w.token(&format!("y_{v}_{a}"));
        }
    }
    w.end();
    w.out.push_str("End\n");
    let text = w.out;
    Ok(LpModel {
        text,
        x_vars: n * l,
        y_vars: sizes.iter().sum(),
        constraints,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::graph::Graph;
    use crate::rewards::{build_mis_gadget, LocalReward};
    use std::sync::Arc;

    #[test]
    fn single_vertex_model() {
        let g = Arc::new(Graph::empty(1));
        let rs = RewardSystem::new(g, 2, vec![LocalReward::Table(vec![3.0, -7.5])]).unwrap();
        let m = export_lp(&rs, None, 1000).unwrap();
        assert_eq!((m.x_vars, m.y_vars, m.constraints), (2, 2, 4));
        assert!(m.text.contains(" obj: 3 y_0_0 - 7.5 y_0_1\n"));
        assert!(m.text.contains(" c_0_0_1: y_0_1 - x_0_1 = 0\n"));
        assert!(m.text.ends_with("End\n"));
    }

    #[test]
    fn constraint_count_formula() {
        let rs = build_mis_gadget(Arc::new(generators::path(3))).unwrap();
        let m = export_lp(&rs, Some(1), 1000).unwrap();
        // n + n + Σ|N[v]|·L + budget
        assert_eq!(m.constraints, 3 + 3 + (2 + 3 + 2) * 2 + 1);
        let named = m.text.lines().filter(|l| l.starts_with(' ') && l.contains(':')).count();
        assert_eq!(named, m.constraints + 1);
        assert!(m.text.contains("budget: x_0_1 + x_1_1 + x_2_1 <= 1"));
    }

    #[test]
    fn long_rows_wrap() {
        let rs = build_mis_gadget(Arc::new(generators::star(9))).unwrap();
        let m = export_lp(&rs, None, 1 << 20).unwrap();
        assert!(m.text.lines().all(|l| l.len() <= LINE_LIMIT));
        assert!(export_lp(&rs, None, 10).is_err());
    }
}

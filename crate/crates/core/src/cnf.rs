//! CNF formulas for the star-graph SAT gadget.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{NaglError, Result};

/// Formula over variables `1..=num_vars`; literals use DIMACS signs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl Cnf {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self> {
        for clause in &clauses {
            for &lit in clause {
                if lit == 0 || lit.unsigned_abs() as usize > num_vars {
                    return Err(NaglError::invalid(format!(
                        "literal {lit} outside 1..={num_vars}"
                    )));
                }
            }
        }
        Ok(Cnf { num_vars, clauses })
    }

    /// Evaluates under the assignment whose bit `j - 1` is variable `j`.
    pub fn satisfied_by(&self, bits: u64) -> bool {
        self.clauses.iter().all(|clause| {
            clause.iter().any(|&lit| {
                let value = bits >> (lit.unsigned_abs() - 1) & 1 == 1;
                value == (lit > 0)
            })
        })
    }

    /// First satisfying assignment in ascending bit order, by enumeration.
    pub fn brute_force_sat(&self) -> Option<u64> {
        assert!(self.num_vars < 40, "brute-force SAT limited to < 40 variables");
        (0..1u64 << self.num_vars).find(|&bits| self.satisfied_by(bits))
    }

    /// Uniform random k-CNF: each clause picks `k` distinct variables and
    /// independent signs.
    pub fn random(num_vars: usize, num_clauses: usize, k: usize, seed: u64) -> Self {
        assert!(k <= num_vars);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let clauses = (0..num_clauses)
            .map(|_| {
                let vars = rand::seq::index::sample(&mut rng, num_vars, k);
                vars.iter()
                    .map(|v| {
                        let lit = v as i32 + 1;
                        if rng.random_bool(0.5) {
                            lit
                        } else {
                            -lit
                        }
                    })
                    .collect()
            })
            .collect();
        Cnf { num_vars, clauses }
    }

    pub fn parse_dimacs(text: &str, path: &Path) -> Result<Self> {
        let err = |line: usize, msg: String| NaglError::Parse {
            path: path.to_path_buf(),
            line,
            msg,
        };
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = idx + 1;
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            if line.starts_with('p') {
                let parts: Vec<_> = line.split_whitespace().collect();
                if parts.len() != 4 || parts[1] != "cnf" {
                    return Err(err(lineno, format!("bad problem line '{line}'")));
                }
                let nv = parts[2].parse().map_err(|_| err(lineno, "bad variable count".into()))?;
                let nc = parts[3].parse().map_err(|_| err(lineno, "bad clause count".into()))?;
                header = Some((nv, nc));
                continue;
            }
            let Some((nv, _)) = header else {
                return Err(err(lineno, "clause before 'p cnf' line".into()));
            };
            for tok in line.split_whitespace() {
                let lit: i32 = tok
                    .parse()
                    .map_err(|_| err(lineno, format!("bad literal '{tok}'")))?;
                if lit == 0 {
                    clauses.push(std::mem::take(&mut current));
                } else if lit.unsigned_abs() as usize > nv {
                    return Err(err(lineno, format!("literal {lit} exceeds {nv} variables")));
                } else {
                    current.push(lit);
                }
            }
        }
        let Some((nv, nc)) = header else {
            return Err(err(0, "missing 'p cnf' line".into()));
        };
        if !current.is_empty() {
            clauses.push(current);
        }
        if clauses.len() != nc {
            log::warn!(
                "{}: header declares {nc} clauses, found {}",
                path.display(),
                clauses.len()
            );
        }
        Cnf::new(nv, clauses)
    }

    pub fn read_dimacs(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| NaglError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse_dimacs(&text, path)
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for clause in &self.clauses {
            for lit in clause {
                out.push_str(&lit.to_string());
                out.push(' ');
            }
            out.push_str("0\n");
        }
        out
    }
}

//! PACE 2017 `.td` files: `s td <bags> <width+1> <n>`, `b <id> <v…>` and
//! tree edges, all 1-based.

use std::path::Path;

use super::{read_text, write_text};
use crate::decomposition::{validate, TreeDecomposition};
use crate::error::{NaglError, Result};
use crate::graph::Graph;

pub fn to_pace_string(td: &TreeDecomposition) -> String {
    let mut out = format!("s td {} {} {}\n", td.bags.len(), td.max_bag_size(), td.num_vertices);
    for (i, bag) in td.bags.iter().enumerate() {
        out.push_str(&format!("b {}", i + 1));
        for v in bag {
            out.push_str(&format!(" {}", v + 1));
        }
        out.push('\n');
    }
    for &(a, b) in &td.edges {
        out.push_str(&format!("{} {}\n", a + 1, b + 1));
    }
    out
}

pub fn parse_pace(text: &str, path: &Path) -> Result<TreeDecomposition> {
    let err = |line: usize, msg: String| NaglError::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut header: Option<(usize, usize, usize)> = None;
    let mut bags: Vec<Option<Vec<usize>>> = Vec::new();
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let num = |t: &str| -> Result<usize> { t.parse().map_err(|_| err(lineno, format!("bad number '{t}'"))) };
        if toks[0] == "s" {
            if header.is_some() {
                return Err(err(lineno, "duplicate solution line".into()));
            }
            if toks.len() != 5 || toks[1] != "td" {
                return Err(err(lineno, "expected 's td <bags> <width+1> <n>'".into()));
            }
            let h = (num(toks[2])?, num(toks[3])?, num(toks[4])?);
            bags = vec![None; h.0];
            header = Some(h);
            continue;
        }
        let Some((nb, _, n)) = header else {
            return Err(err(lineno, "content before the 's td' line".into()));
        };
        if toks[0] == "b" {
            if toks.len() < 2 {
                return Err(err(lineno, "bag line without id".into()));
            }
            let id = num(toks[1])?;
            if id == 0 || id > nb {
                return Err(err(lineno, format!("bag id {id} outside 1..={nb}")));
            }
            if bags[id - 1].is_some() {
                return Err(err(lineno, format!("bag {id} listed twice")));
            }
            let mut bag = Vec::with_capacity(toks.len() - 2);
            for t in &toks[2..] {
                let v = num(t)?;
                if v == 0 || v > n {
                    return Err(err(lineno, format!("vertex {v} outside 1..={n}")));
                }
                bag.push(v - 1);
            }
            bags[id - 1] = Some(bag);
        } else {
            if toks.len() != 2 {
                return Err(err(lineno, format!("expected a tree edge, got '{line}'")));
            }
            let (a, b) = (num(toks[0])?, num(toks[1])?);
            if a == 0 || b == 0 || a > nb || b > nb {
                return Err(err(lineno, format!("tree edge {a} {b} outside 1..={nb}")));
            }
            edges.push((a - 1, b - 1));
        }
    }
    let (_, declared, n) = header.ok_or_else(|| err(0, "missing 's td' line".into()))?;
    let bags: Vec<Vec<usize>> = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| err(0, format!("bag {} missing", i + 1))))
        .collect::<Result<_>>()?;
    let td = TreeDecomposition::new(n, bags, edges);
    if td.max_bag_size() != declared {
        return Err(err(
            0,
            format!("header declares width+1 = {declared}, largest bag has {}", td.max_bag_size()),
        ));
    }
    Ok(td)
}

pub fn write_pace(td: &TreeDecomposition, path: &Path) -> Result<()> {
    write_text(path, &to_pace_string(td))
}

/// Reads a `.td` file and validates it against `target`.
pub fn import_pace(path: &Path, target: &Graph) -> Result<TreeDecomposition> {
    let td = parse_pace(&read_text(path)?, path)?;
    if td.num_vertices != target.num_vertices() {
        return Err(NaglError::invalid(format!(
            "{}: decomposition over {} vertices, target has {}",
            path.display(),
            td.num_vertices,
            target.num_vertices()
        )));
    }
    let report = validate(&td, target);
    if !report.is_valid() {
        return Err(NaglError::InvalidDecomposition(report));
    }
    Ok(td)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::min_fill_decomposition;
    use crate::generators;
    use crate::graph::square_graph;

    #[test]
    fn hand_written_path_decomposition() {
        let text = "c width 1 for P4\ns td 3 2 4\nb 1 1 2\nb 2 2 3\nb 3 3 4\n1 2\n2 3\n";
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p4.td");
        std::fs::write(&path, text).unwrap();
        let td = import_pace(&path, &generators::path(4)).unwrap();
        assert_eq!(td.width(), 1);
        assert_eq!(td.bags, vec![vec![0, 1], vec![1, 2], vec![2, 3]]);
        assert!(import_pace(&path, &square_graph(&generators::path(4))).is_err());
    }

    #[test]
    fn round_trip_is_identical() {
        let h = square_graph(&generators::ladder(6));
        let td = min_fill_decomposition(&h);
        let text = to_pace_string(&td);
        let back = parse_pace(&text, Path::new("x")).unwrap();
        assert_eq!(back, td);
        assert_eq!(to_pace_string(&back), text);
    }

    #[test]
    fn inconsistent_header_is_rejected() {
        let text = "s td 2 3 3\nb 1 1 2\nb 2 2 3\n1 2\n";
        assert!(parse_pace(text, Path::new("x")).is_err());
        assert!(parse_pace("b 1 1\n", Path::new("x")).is_err());
        assert!(parse_pace("s td 1 1 2\nb 1 3\n", Path::new("x")).is_err());
        assert!(parse_pace("s td 2 1 2\nb 1 1\n", Path::new("x")).is_err());
    }
}

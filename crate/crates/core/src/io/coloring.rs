//! Coloring files: `v c` per line (0-based), `#` comments.

use std::path::Path;

use super::read_text;
use crate::error::{NaglError, Result};

pub fn parse_coloring(text: &str, n: usize, path: &Path) -> Result<Vec<usize>> {
    let mut colors = vec![None; n];
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| NaglError::Parse {
            path: path.to_path_buf(),
            line: idx + 1,
            msg,
        };
        let toks: Vec<_> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(err(format!("expected 'vertex color', got '{line}'")));
        }
        let v: usize = toks[0].parse().map_err(|_| err("bad vertex".into()))?;
        let c: usize = toks[1].parse().map_err(|_| err("bad color".into()))?;
        if v >= n {
            return Err(err(format!("vertex {v} outside 0..{n}")));
        }
        if colors[v].replace(c).is_some() {
            return Err(err(format!("vertex {v} colored twice")));
        }
    }
    colors
        .into_iter()
        .enumerate()
        .map(|(v, c)| c.ok_or_else(|| NaglError::invalid(format!("{}: vertex {v} has no color", path.display()))))
        .collect()
}

pub fn read_coloring(path: &Path, n: usize) -> Result<Vec<usize>> {
    parse_coloring(&read_text(path)?, n, path)
}

pub fn to_coloring_string(colors: &[usize]) -> String {
    colors.iter().enumerate().map(|(v, c)| format!("{v} {c}\n")).collect()
}

//! MatrixMarket and edge-list readers.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::read_text;
use crate::error::{NaglError, Result};
use crate::graph::{Graph, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphFormat {
    MatrixMarket,
    EdgeList,
}

impl GraphFormat {
    /// `.mtx` is MatrixMarket, anything else an edge list.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("mtx") => GraphFormat::MatrixMarket,
            _ => GraphFormat::EdgeList,
        }
    }
}

/// A graph read from a file together with the file's vertex identifiers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalGraph {
    pub graph: Graph,
    /// `ids[v]` is the identifier of internal vertex `v` in the file.
    pub ids: Vec<u64>,
    pub self_loops: usize,
    pub duplicates: usize,
}

impl ExternalGraph {
    pub fn internal(&self, id: u64) -> Option<Vertex> {
        self.ids.binary_search(&id).ok()
    }
}

fn finish(n: usize, ids: Vec<u64>, edges: &[(Vertex, Vertex)], path: &Path) -> Result<ExternalGraph> {
    let (graph, cleanup) = Graph::from_edges_counted(n, edges)?;
    if cleanup.self_loops + cleanup.duplicates > 0 {
        log::warn!(
            "{}: dropped {} self-loops and {} duplicate edges",
            path.display(),
            cleanup.self_loops,
            cleanup.duplicates
        );
    }
    Ok(ExternalGraph {
        graph,
        ids,
        self_loops: cleanup.self_loops,
        duplicates: cleanup.duplicates,
    })
}

/// Coordinate-format MatrixMarket; entry `(i, j)` is the edge between the
/// 1-based rows `i` and `j`, values are ignored.
pub fn parse_matrix_market(text: &str, path: &Path) -> Result<ExternalGraph> {
    let err = |line: usize, msg: String| NaglError::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut lines = text.lines().enumerate();
    let (_, banner) = lines.next().ok_or_else(|| err(1, "empty file".into()))?;
    let banner_lc = banner.to_ascii_lowercase();
    let fields: Vec<_> = banner_lc.split_whitespace().collect();
    if fields.len() < 4 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" || fields[2] != "coordinate" {
        return Err(err(1, "expected '%%MatrixMarket matrix coordinate ...' banner".into()));
    }
    let mut size: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (idx, raw) in lines {
        let line = raw.trim();
        let lineno = idx + 1;
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let mut toks = line.split_whitespace();
        let mut num = |what: &str| -> Result<usize> {
            toks.next()
                .ok_or_else(|| err(lineno, format!("missing {what}")))?
                .parse()
                .map_err(|_| err(lineno, format!("bad {what}")))
        };
        match size {
            None => {
                let (rows, cols, nnz) = (num("row count")?, num("column count")?, num("entry count")?);
                if rows != cols {
                    return Err(err(lineno, format!("matrix is {rows}x{cols}, expected square")));
                }
                size = Some((rows, nnz));
                edges.reserve(nnz);
            }
            Some((rows, _)) => {
                let (i, j) = (num("row")?, num("column")?);
                if i == 0 || j == 0 || i > rows || j > rows {
                    return Err(err(lineno, format!("entry ({i}, {j}) outside 1..={rows}")));
                }
                edges.push((i - 1, j - 1));
            }
        }
    }
    let (rows, nnz) = size.ok_or_else(|| err(0, "missing size line".into()))?;
    if edges.len() != nnz {
        log::warn!("{}: size line declares {nnz} entries, found {}", path.display(), edges.len());
    }
    finish(rows, (1..=rows as u64).collect(), &edges, path)
}

/// `u v` per line, `#` starts a comment. Identifiers are arbitrary
/// nonnegative integers, mapped to `0..n` in ascending order.
pub fn parse_edge_list(text: &str, path: &Path) -> Result<ExternalGraph> {
    let mut raw_edges = Vec::new();
    let mut ids = BTreeSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<_> = line.split_whitespace().collect();
        let parse = |t: &str| -> Result<u64> {
            t.parse().map_err(|_| NaglError::Parse {
                path: path.to_path_buf(),
                line: idx + 1,
                msg: format!("bad vertex identifier '{t}'"),
            })
        };
        if toks.len() != 2 {
            return Err(NaglError::Parse {
                path: path.to_path_buf(),
                line: idx + 1,
                msg: format!("expected 'u v', got '{line}'"),
            });
        }
        let (u, v) = (parse(toks[0])?, parse(toks[1])?);
        ids.insert(u);
        ids.insert(v);
        raw_edges.push((u, v));
    }
    let ids: Vec<u64> = ids.into_iter().collect();
    let index = |id: u64| ids.binary_search(&id).unwrap();
    let edges: Vec<_> = raw_edges.iter().map(|&(u, v)| (index(u), index(v))).collect();
    finish(ids.len(), ids.clone(), &edges, path)
}

pub fn to_edge_list(g: &Graph) -> String {
    let mut out = format!("# {} vertices, {} edges\n", g.num_vertices(), g.num_edges());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn read_graph_file(path: &Path, format: GraphFormat) -> Result<ExternalGraph> {
    let text = read_text(path)?;
    match format {
        GraphFormat::MatrixMarket => parse_matrix_market(&text, path),
        GraphFormat::EdgeList => parse_edge_list(&text, path),
    }
}

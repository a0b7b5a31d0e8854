//! Instance files: graph payload, alphabet, reward specification and
//! metadata, stored as pretty-printed JSON.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::graph_files::{read_graph_file, GraphFormat};
use super::{read_text, write_text};
use crate::cnf::Cnf;
use crate::error::{NaglError, Result};
use crate::graph::{Graph, Vertex};
use crate::rewards::{
    build_max_type_gadget, build_mis_gadget, build_random_table_system, build_sat_star_gadget,
    random_max_type_gadget, LocalReward, RewardSystem, TableDistribution, DEFAULT_TABLE_CAP,
};

pub const FORMAT_TAG: &str = "nagl-instance";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GraphSpec {
    Inline { n: usize, edges: Vec<(Vertex, Vertex)> },
    /// Path relative to the instance file's directory.
    File { path: PathBuf, format: GraphFormat },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RewardSpec {
    Constant { value: f64 },
    Mis,
    MaxType { high: f64, low: Vec<f64> },
    /// Max-type gadget with default weights and seeded low weights.
    RandomMaxType { seed: u64 },
    RandomTables { seed: u64, distribution: TableDistribution },
    Tables { tables: Vec<Vec<f64>> },
    /// Star gadget for a CNF; the graph must be the matching star.
    SatStar { cnf: Cnf },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub format: String,
    pub version: u32,
    pub graph: GraphSpec,
    pub labels: usize,
    pub rewards: RewardSpec,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, serde_json::Value>,
}

#[derive(Debug, Clone)]
pub struct LoadedInstance {
    pub graph: Arc<Graph>,
    pub rewards: RewardSystem,
    /// File identifiers when the graph came from an external file.
    pub ids: Option<Vec<u64>>,
}

impl InstanceFile {
    pub fn inline(g: &Graph, labels: usize, rewards: RewardSpec) -> Self {
        InstanceFile {
            format: FORMAT_TAG.into(),
            version: FORMAT_VERSION,
            graph: GraphSpec::Inline {
                n: g.num_vertices(),
                edges: g.edges().collect(),
            },
            labels,
            rewards,
            flags: Vec::new(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn with_metadata(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.metadata.insert(key.to_string(), value.into());
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str, path: &Path) -> Result<Self> {
        let inst: InstanceFile = serde_json::from_str(text).map_err(|e| NaglError::Parse {
            path: path.to_path_buf(),
            line: e.line(),
            msg: e.to_string(),
        })?;
        if inst.format != FORMAT_TAG || inst.version != FORMAT_VERSION {
            return Err(NaglError::invalid(format!(
                "{}: unsupported format '{}' version {}",
                path.display(),
                inst.format,
                inst.version
            )));
        }
        Ok(inst)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&read_text(path)?, path)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_text(path, &self.to_json())
    }

    /// Resolves the graph (file references relative to `base_dir`) and
    /// builds the reward system.
    pub fn build(&self, base_dir: &Path) -> Result<LoadedInstance> {
        let (graph, ids) = match &self.graph {
            GraphSpec::Inline { n, edges } => {
                let (g, cleanup) = Graph::from_edges_counted(*n, edges)?;
                if cleanup.self_loops + cleanup.duplicates > 0 {
                    log::warn!(
                        "instance graph: dropped {} self-loops and {} duplicate edges",
                        cleanup.self_loops,
                        cleanup.duplicates
                    );
                }
                (g, None)
            }
            GraphSpec::File { path, format } => {
                let ext = read_graph_file(&base_dir.join(path), *format)?;
                (ext.graph, Some(ext.ids))
            }
        };
        let graph = Arc::new(graph);
        let l = self.labels;
        let rewards = match &self.rewards {
            RewardSpec::Constant { value } => RewardSystem::constant(graph.clone(), l, *value)?,
            RewardSpec::Mis => {
                binary(l)?;
                build_mis_gadget(graph.clone())?
            }
            RewardSpec::MaxType { high, low } => {
                binary(l)?;
                build_max_type_gadget(graph.clone(), *high, low)?
            }
            RewardSpec::RandomMaxType { seed } => {
                binary(l)?;
                random_max_type_gadget(graph.clone(), *seed)?
            }
            RewardSpec::RandomTables { seed, distribution } => {
                build_random_table_system(graph.clone(), l, *seed, *distribution, DEFAULT_TABLE_CAP)?
            }
            RewardSpec::Tables { tables } => RewardSystem::new(
                graph.clone(),
                l,
                tables.iter().cloned().map(LocalReward::Table).collect(),
            )?,
            RewardSpec::SatStar { cnf } => {
                let (star, rs) = build_sat_star_gadget(cnf, l)?;
                if star != *graph {
                    return Err(NaglError::invalid(format!(
                        "SAT star for {} variables and {l} labels needs a star with {} leaves",
                        cnf.num_vars,
                        star.num_vertices() - 1
                    )));
                }
                rs
            }
        };
        Ok(LoadedInstance { graph, rewards, ids })
    }

    pub fn open(path: &Path) -> Result<(Self, LoadedInstance)> {
        let inst = Self::read(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        let loaded = inst.build(base)?;
        Ok((inst, loaded))
    }
}

fn binary(l: usize) -> Result<()> {
    if l != 2 {
        return Err(NaglError::NotBinary(l));
    }
    Ok(())
}

//! Solver result records.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{read_text, write_text};
use crate::error::{NaglError, Result};
use crate::pipeline::Timings;
use crate::rewards::RewardSystem;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub solver: String,
    #[serde(default)]
    pub params: BTreeMap<String, serde_json::Value>,
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labeling: Option<Vec<usize>>,
    #[serde(default)]
    pub timings: Timings,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub states: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, serde_json::Value>,
}

impl ResultRecord {
    pub fn new(solver: &str, value: f64) -> Self {
        ResultRecord {
            solver: solver.into(),
            params: BTreeMap::new(),
            value,
            labeling: None,
            timings: Timings::default(),
            width: None,
            states: None,
            seed: None,
            details: BTreeMap::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.params.insert(key.into(), value.into());
        self
    }

    pub fn detail(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.details.insert(key.into(), value.into());
        self
    }

    /// Re-evaluates the stored labeling: exact for integral rewards,
    /// relative tolerance `1e-9` otherwise. `true` without a labeling.
    pub fn verify(&self, rs: &RewardSystem) -> Result<bool> {
        let Some(x) = &self.labeling else {
            return Ok(true);
        };
        if x.len() != rs.graph().num_vertices() || x.iter().any(|&l| l >= rs.num_labels()) {
            return Err(NaglError::invalid("stored labeling does not fit the instance"));
        }
        let value = rs.total(x);
        Ok(if rs.all_integer() {
            value == self.value
        } else {
            (value - self.value).abs() <= 1e-9 * value.abs().max(1.0)
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("record serializes");
        s.push('\n');
        s
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = read_text(path)?;
        serde_json::from_str(&text).map_err(|e| NaglError::Parse {
            path: path.to_path_buf(),
            line: e.line(),
            msg: e.to_string(),
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_text(path, &self.to_json())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::rewards::build_mis_gadget;
    use std::sync::Arc;

    #[test]
    fn verify_and_round_trip() {
        let rs = build_mis_gadget(Arc::new(generators::cycle(5))).unwrap();
        let mut rec = ResultRecord::new("exact", 2.0).param("threads", 1);
        rec.labeling = Some(vec![1, 0, 1, 0, 0]);
        assert!(rec.verify(&rs).unwrap());
        rec.value = 3.0;
        assert!(!rec.verify(&rs).unwrap());

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.json");
        rec.write(&path).unwrap();
        assert_eq!(ResultRecord::read(&path).unwrap(), rec);
    }
}

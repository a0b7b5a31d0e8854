//! File formats: graph readers, PACE `.td`, instances, results, LP export,
//! colorings.

use std::path::Path;

use crate::error::{NaglError, Result};

pub mod coloring;
pub mod graph_files;
pub mod instance;
pub mod lp;
pub mod pace;
pub mod result;

pub use graph_files::{read_graph_file, ExternalGraph, GraphFormat};
pub use instance::{InstanceFile, LoadedInstance, RewardSpec};
pub use result::ResultRecord;

pub(crate) fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| NaglError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| NaglError::Io {
        path: path.to_path_buf(),
        source,
    })
}

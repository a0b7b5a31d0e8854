//! Neighborhood-aware graph labeling: exact tree-decomposition dynamic
//! programming, approximation schemes, budgeted submodular greedy, and the
//! file formats and generators around them.

pub mod approx;
pub mod cfdp;
pub mod cnf;
pub mod decomposition;
pub mod error;
pub mod generators;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod pipeline;
pub mod rewards;
pub mod submod;

pub use approx::{BakerOptions, BakerOutcome, ProperColoring, ShiftScheme};
pub use cfdp::{CfdpOptions, CfdpSolution, ScoreMode, SolveStats};
pub use cnf::Cnf;
pub use decomposition::{BagAssignment, NiceNode, NiceTreeDecomposition, TreeDecomposition, ValidationReport};
pub use error::{ErrorClass, NaglError, Result};
pub use graph::{BfsLayering, Graph, Vertex};
pub use pipeline::{solve_exact, ExactOptions, ExactOutcome, Timings};
pub use rewards::{Label, LabelAlphabet, Labeling, LocalReward, RewardSystem, TableDistribution};
pub use submod::{ActiveSet, GreedyOptions, GreedyOutcome};

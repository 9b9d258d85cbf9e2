//! Greedy construction of decision trees that may ask hypotheses as well as
//! attribute queries, plus the tooling to measure and check them.

pub mod boolgen;
pub mod builder;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod queries;
pub mod rules;
pub mod table;
pub mod uncertainty;

pub use builder::{build_tree, build_tree_with, BuildOptions, DecisionTree, NodeId, TreeType};
pub use error::{Error, Result};
pub use queries::{Answer, Hypothesis, Query};
pub use table::{DecisionTable, Equation, EquationSystem, SubtableRef};
pub use uncertainty::Measure;

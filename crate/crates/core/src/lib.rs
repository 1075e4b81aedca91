//! Solvers for walks of `k` cooperating agents that must jointly visit every
//! vertex of a graph while always occupying a connected set of distinct
//! vertices.

pub mod caps;
pub mod contracted;
pub mod error;
pub mod fixtures;
pub mod generate;
pub mod graph;
pub mod hyper;
pub mod metric;
pub mod oracle;
pub mod packing;
pub mod tree;
pub mod two_agent;
pub mod walk;

pub use caps::Caps;
pub use error::{Error, Result};
pub use graph::Graph;
pub use walk::TransitionWalk;

//! Downstream evaluation: community detection, partition scoring, label
//! splits and the degree-sweep experiment driver.

mod louvain;
mod scoring;
mod sweep;

pub use louvain::{louvain, louvain_with_trace, modularity, LouvainTrace, Partition};
pub use scoring::{nmi, train_test_split};
pub use sweep::{default_degree_grid, degree_sweep, SweepConfig, SweepResult, SweepRow, SweepTarget};

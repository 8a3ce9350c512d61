//! Sparse connected backbones ("graph lottery tickets") built from unions of
//! uniform random spanning trees, together with the structural diagnostics
//! used to compare them against weighted baseline sparsifiers.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`] and [`io`]: immutable CSR graphs, edge sets, labels and text formats.
//! * [`rng`]: seeded, splittable random streams.
//! * [`ust`]: Wilson's uniform spanning tree sampler and uniform edge selection.
//! * [`sparsify`]: kTree, 1Tree, the random baseline and the weighted baselines.
//! * [`linalg`] and [`spectral`]: Lanczos, projected CG and the metric suite.
//! * [`curvature`]: augmented Forman and link resistance curvature.
//! * [`generators`]: stochastic block models and canonical test graphs.
//! * [`eval`]: Louvain, NMI, label splits and the degree sweep driver.

pub mod curvature;
pub mod error;
pub mod eval;
pub mod generators;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod rng;
pub mod sparsify;
pub mod spectral;
pub mod ust;

pub use error::{Error, Result};
pub use graph::{Edge, EdgeSet, Graph, LabelVector};
pub use rng::RngState;

//! Simulation and estimation toolkit for scale-free percolation in
//! continuum space: Poisson vertices in `R^d`, i.i.d. regularly varying
//! weights, and edges present with probability `1 - exp(-w_x w_y / |x-y|^α)`.

pub mod error;
pub mod estimators;
pub mod graph;
pub mod pointprocess;
pub mod io;
pub mod quadrature;
pub mod report;
pub mod rng;
pub mod theory;
pub mod validation;
pub mod weights;

pub use error::{Error, Result};
pub use graph::{build_graph, build_graph_cell, build_graph_naive, edge_prob, Engine, ModelParams, WeightedGraph};
pub use pointprocess::{sample_ppp, BoxGeometry, CellGrid, PointSet, Topology};
pub use weights::{sample_weights, SlowlyVarying, WeightLaw, WeightVector};

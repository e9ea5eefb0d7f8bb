//! Random-graph models of geographic dual graphs and the statistics used to
//! compare them with real districting data: degree and connectivity,
//! planarity, spanning-tree counts, and the probability that a uniform
//! spanning tree splits into balanced pieces.

pub mod error;
pub mod experiments;
pub mod geometry;
pub mod graph;
pub mod io;
pub mod models;
pub mod par;
pub mod planarity;
pub mod spanning;
pub mod splitting;

pub use error::{Error, Result};
pub use graph::{
    connected_components, degree_stats, largest_component, ComponentDecomposition, DegreeStats,
    Graph, VertexId,
};

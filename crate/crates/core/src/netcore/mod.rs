//! Graphs, edge-probability matrices, seeded random streams and edge-list I/O.

mod graph;
mod io;
mod prob;
mod rng;

pub use graph::{sample_graph, Graph};
pub use io::{
    read_edge_list, read_matrix, read_node_map, write_graph, write_matrix, EdgeListRead, NodeMap,
};
pub use prob::{frobenius_distance, frobenius_norm, ProbMatrix};
pub use rng::RngStream;

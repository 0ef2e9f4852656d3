//! Canonical labeled-graph representation and the structural queries the
//! code constructions are certified with.
//!
//! Vertices are labeled `0..n`. "Connected" always means spanning connected:
//! a graph with an isolated vertex is not connected.

mod analysis;
mod graph;
mod pattern;

pub use analysis::{
    hamiltonian_path_order, is_hamiltonian_cycle, is_hamiltonian_path, is_spanning_connected,
    spanning_tree_leaf_count,
};
pub use graph::{bits_to_hex, edge_from_index, edge_index, hex_to_bits, pair_count, DegreeProfile, LabeledGraph};
pub use pattern::{
    chromatic_number, contains_kst, contains_kst_within, count_copies, count_copies_within, find_copy_avoiding,
    greedy_disjoint_copies, has_copy_through_edge, max_disjoint_copies, CountBound, PatternGraph,
    DEFAULT_ENUMERATION_BUDGET,
};


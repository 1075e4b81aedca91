//! Small instances shipped with the crate, used by tests and the CLI.

use crate::graph::{load_graph, Graph};

pub const FIG1_TREE: &str = include_str!("../fixtures/fig1.txt");
pub const FIG5_GRAPH: &str = include_str!("../fixtures/fig5.txt");
pub const FIG6_HYPERGRAPH: &str = include_str!("../fixtures/fig6.hg");

/// The 18-vertex example tree. Its ids relate to the `v1..v18` names by
/// [`fig1_vertex`].
pub fn fig1_tree() -> Graph {
    load_graph(FIG1_TREE).expect("fixture parses")
}

/// Id of the vertex named `v<i>` (1-based) in the example tree.
pub fn fig1_vertex(i: usize) -> usize {
    match i {
        1..=12 => i - 1,
        18 => 12,
        13..=17 => i,
        _ => panic!("the example tree has vertices v1..v18"),
    }
}

/// The 16-vertex two-agent example graph; letter `c` is vertex `c - 'a'`.
pub fn fig5_graph() -> Graph {
    load_graph(FIG5_GRAPH).expect("fixture parses")
}

pub fn fig5_vertex(c: char) -> usize {
    (c as u8 - b'a') as usize
}

pub fn fig6_hypergraph() -> crate::hyper::Hypergraph {
    crate::hyper::load_hypergraph(FIG6_HYPERGRAPH).expect("fixture parses")
}

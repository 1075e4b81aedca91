//! Seeded instance generators. Every generator takes the caller's RNG so a
//! sweep can be replayed from a single seed; the CLI and the test suites use
//! ChaCha8.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hyper::{build_lstar, Hypergraph};

/// Identifier written next to every seed so runs can be reproduced elsewhere.
pub const RNG_NAME: &str = "chacha8";

/// Attempts made before a connectivity requirement is reported unsatisfiable.
pub const RETRY_BUDGET: usize = 1000;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Uniform random recursive tree with shuffled labels.
pub fn random_tree<R: Rng>(n: usize, rng: &mut R) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidArgument("a tree needs at least one vertex".into()));
    }
    let mut label: Vec<usize> = (0..n).collect();
    label.shuffle(rng);
    let edges: Vec<(usize, usize)> =
        (1..n).map(|i| (label[rng.gen_range(0..i)], label[i])).collect();
    Graph::connected(n, edges)
}

/// G(n, p), redrawn until connected.
pub fn random_graph<R: Rng>(n: usize, p: f64, rng: &mut R) -> Result<Graph> {
    if n == 0 || !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("need n > 0 and p in [0, 1], got n={n} p={p}")));
    }
    for _ in 0..RETRY_BUDGET {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::new(n, edges)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::Infeasible(format!("no connected G({n}, {p}) after {RETRY_BUDGET} draws")))
}

/// `rows x cols` grid graph, vertices numbered row by row.
pub fn grid(rows: usize, cols: usize) -> Result<Graph> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidArgument("grid dimensions must be positive".into()));
    }
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    Graph::connected(rows * cols, edges)
}

/// `m` distinct random hyperedges of arity `k`, redrawn until every vertex
/// is covered and the augmented line graph is connected.
pub fn random_hypergraph<R: Rng>(n: usize, m: usize, k: usize, rng: &mut R) -> Result<Hypergraph> {
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("arity {k} outside 1..={n}")));
    }
    let possible = (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128);
    if m as u128 > possible {
        return Err(Error::InvalidArgument(format!("only {possible} distinct hyperedges exist")));
    }
    let vertices: Vec<usize> = (0..n).collect();
    for _ in 0..RETRY_BUDGET {
        let mut edges: Vec<Vec<usize>> = Vec::with_capacity(m);
        while edges.len() < m {
            let mut e: Vec<usize> = vertices.choose_multiple(rng, k).copied().collect();
            e.sort_unstable();
            if !edges.contains(&e) {
                edges.push(e);
            }
        }
        let h = Hypergraph::new(n, k, edges)?;
        if build_lstar(&h).is_ok() {
            return Ok(h);
        }
    }
    Err(Error::Infeasible(format!("no connected hypergraph with n={n} m={m} k={k}")))
}

/// Serialises to the hypergraph text format read by `load_hypergraph`.
pub fn hypergraph_text(h: &Hypergraph) -> String {
    let mut out = format!("{} {} {}\n", h.n(), h.m(), h.k());
    for e in h.edges() {
        let line: Vec<String> = e.iter().map(usize::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

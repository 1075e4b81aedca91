//! The contracted tree built from a rooted packing solution. Every node is a
//! two-agent configuration, i.e. an edge of the host graph.

use crate::error::{Error, Result};
use crate::graph::{Graph, GridPattern};
use crate::packing::{rooted_order, Origin, PackingInstance, SetKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    /// Part `part` of the gadget for instance set `set`.
    Gadget { set: usize, part: usize },
    /// Spans one vertex left over after the gadgets.
    Plain,
    /// Joins two components.
    Bridge,
    /// Starting node when the packing solution is empty.
    Seed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrNode {
    pub pair: (usize, usize),
    pub kind: NodeKind,
}

impl TrNode {
    pub fn contains(&self, v: usize) -> bool {
        self.pair.0 == v || self.pair.1 == v
    }

    /// Gadget and bridge nodes; plain and seed nodes are not counted.
    pub fn is_contracted(&self) -> bool {
        matches!(self.kind, NodeKind::Gadget { .. } | NodeKind::Bridge)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractedTree {
    pub nodes: Vec<TrNode>,
    /// Edge multiset between node indices.
    pub edges: Vec<(usize, usize)>,
    /// Parallel edges added by [`modify_tr`].
    pub added: usize,
}

impl ContractedTree {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == i || b == i).count()
    }

    /// Number of contracted nodes of odd degree.
    pub fn odd_contracted(&self) -> usize {
        (0..self.nodes.len())
            .filter(|&i| self.nodes[i].is_contracted() && self.degree(i) % 2 == 1)
            .count()
    }

    fn gadget_nodes(&self, set: usize) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| matches!(self.nodes[i].kind, NodeKind::Gadget { set: s, .. } if s == set))
            .collect()
    }
}

/// Node pairs of a gadget: cycle `(v1..v4)` gives `(v1,v2), (v4,v3)`; grid
/// `(v1..v6)` gives `(v1,v2), (v4,v3), (v5,v6)`, chained in that order.
pub fn gadget_pairs(origin: &Origin) -> Vec<(usize, usize)> {
    match origin {
        Origin::Cycle([v1, v2, v3, v4]) => vec![(*v1, *v2), (*v4, *v3)],
        Origin::Grid(GridPattern([v1, v2, v3, v4, v5, v6])) => {
            vec![(*v1, *v2), (*v4, *v3), (*v5, *v6)]
        }
    }
}

fn origin_in_graph(g: &Graph, origin: &Origin) -> bool {
    match origin {
        Origin::Cycle(c) => (0..4).all(|i| g.has_edge(c[i], c[(i + 1) % 4])),
        Origin::Grid(d) => d.edges().all(|(a, b)| g.has_edge(a, b)),
    }
}

/// Counts of chosen sets by kind: `[I, II, III, IV]`.
pub fn kind_counts(inst: &PackingInstance, sol: &[usize]) -> [usize; 4] {
    let mut c = [0; 4];
    for &i in sol {
        c[match inst.sets[i].kind {
            SetKind::I => 0,
            SetKind::II => 1,
            SetKind::III => 2,
            SetKind::IV => 3,
        }] += 1;
    }
    c
}

/// Edge count of the contracted tree predicted from the solution alone:
/// gadget edges, one edge per leftover vertex, and two per joined component.
pub fn predicted_len(n: usize, inst: &PackingInstance, sol: &[usize]) -> usize {
    let [a, b, c, d] = kind_counts(inst, sol);
    let w = 4 * a + 3 * b + 6 * c + 5 * d;
    let gadget = a + 2 * b + 2 * c + 3 * d;
    let components = a + c;
    // with no full set the construction starts from a single seed edge,
    // which spans two vertices and forms the only component
    if components == 0 {
        return n.saturating_sub(2);
    }
    gadget + (n - w) + 2 * (components - 1)
}

/// Upper bound on the odd contracted nodes after [`modify_tr`]:
/// w(I)/4 + w(II)/3 + w(III)/3 + 3 w(IV)/5.
pub fn odd_contracted_bound(inst: &PackingInstance, sol: &[usize]) -> usize {
    let [a, b, c, d] = kind_counts(inst, sol);
    a + b + 2 * c + 3 * d
}

/// Builds the contracted tree for a rooted, disjoint packing solution.
pub fn build_tr_graph(g: &Graph, inst: &PackingInstance, sol: &[usize]) -> Result<ContractedTree> {
    if g.n() < 2 {
        return Err(Error::Infeasible("two agents need at least two vertices".into()));
    }
    if !inst.is_disjoint(sol) {
        return Err(Error::InvalidArgument("packing solution is not disjoint".into()));
    }
    if let Some(&i) = sol.iter().find(|&&i| !origin_in_graph(g, &inst.sets[i].origin)) {
        return Err(Error::InvalidArgument(format!("set {i} does not occur in the graph")));
    }
    let order = rooted_order(inst, sol).ok_or_else(|| {
        Error::InvalidArgument("a replaced vertex is not covered by an earlier set".into())
    })?;

    let mut tr = ContractedTree { nodes: Vec::new(), edges: Vec::new(), added: 0 };
    for &s in &order {
        let set = &inst.sets[s];
        let first = tr.nodes.len();
        for (part, pair) in gadget_pairs(&set.origin).into_iter().enumerate() {
            tr.nodes.push(TrNode { pair, kind: NodeKind::Gadget { set: s, part } });
            if part > 0 {
                tr.edges.push((first + part - 1, first + part));
            }
        }
        if let Some(r) = set.replaced {
            let own = (first..tr.nodes.len()).find(|&i| tr.nodes[i].contains(r)).unwrap();
            let host = (0..first)
                .find(|&i| match tr.nodes[i].kind {
                    NodeKind::Gadget { set, .. } => {
                        tr.nodes[i].contains(r) && inst.sets[set].real_members().any(|v| v == r)
                    }
                    _ => false,
                })
                .ok_or_else(|| Error::Invariant(format!("no node covers vertex {r}")))?;
            tr.edges.push((host, own));
        }
    }

    let mut spanned = vec![false; g.n()];
    let mark = |spanned: &mut Vec<bool>, (a, b): (usize, usize)| {
        spanned[a] = true;
        spanned[b] = true;
    };
    for node in &tr.nodes {
        mark(&mut spanned, node.pair);
    }
    if tr.nodes.is_empty() {
        let seed = g.edges()[0];
        tr.nodes.push(TrNode { pair: seed, kind: NodeKind::Seed });
        mark(&mut spanned, seed);
    }

    // absorb leftover vertices one at a time
    loop {
        let next = (0..g.n()).filter(|&v| !spanned[v]).find_map(|v| {
            g.neighbors(v).iter().copied().find(|&p| spanned[p]).map(|p| (v, p))
        });
        let Some((v, p)) = next else { break };
        let host = tr.nodes.iter().position(|node| node.contains(p)).unwrap();
        tr.nodes.push(TrNode { pair: (v, p), kind: NodeKind::Plain });
        tr.edges.push((host, tr.nodes.len() - 1));
        spanned[v] = true;
    }

    // join components through bridge nodes
    let mut comp: Vec<usize> = (0..tr.nodes.len()).collect();
    fn find(comp: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while comp[r] != r {
            r = comp[r];
        }
        comp[x] = r;
        r
    }
    for &(a, b) in &tr.edges {
        let (ra, rb) = (find(&mut comp, a), find(&mut comp, b));
        comp[ra] = rb;
    }
    let node_of: Vec<usize> = (0..g.n())
        .map(|v| tr.nodes.iter().position(|node| node.contains(v)).unwrap())
        .collect();
    for &(a, b) in g.edges() {
        let (na, nb) = (node_of[a], node_of[b]);
        let (ra, rb) = (find(&mut comp, na), find(&mut comp, nb));
        if ra == rb {
            continue;
        }
        tr.nodes.push(TrNode { pair: (a, b), kind: NodeKind::Bridge });
        let id = tr.nodes.len() - 1;
        comp.push(id);
        tr.edges.push((na, id));
        tr.edges.push((nb, id));
        comp[ra] = id;
        comp[rb] = id;
    }

    if tr.edges.len() + 1 != tr.nodes.len() {
        return Err(Error::Invariant(format!(
            "contracted graph has {} nodes and {} edges",
            tr.nodes.len(),
            tr.edges.len()
        )));
    }
    Ok(tr)
}

/// For every 4-cycle gadget whose two nodes both have odd degree, adds a
/// parallel edge between them.
pub fn modify_tr(tr: &ContractedTree, inst: &PackingInstance) -> ContractedTree {
    let mut out = tr.clone();
    let mut sets: Vec<usize> = tr
        .nodes
        .iter()
        .filter_map(|n| match n.kind {
            NodeKind::Gadget { set, part: 0 } => Some(set),
            _ => None,
        })
        .collect();
    sets.retain(|&s| matches!(inst.sets[s].kind, SetKind::I | SetKind::II));
    for s in sets {
        let nodes = out.gadget_nodes(s);
        let (a, b) = (nodes[0], nodes[1]);
        if out.degree(a) % 2 == 1 && out.degree(b) % 2 == 1 {
            out.edges.push((a, b));
            out.added += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packing::build_sp_instance;

    #[test]
    fn empty_solution_on_a_path() {
        let p = Graph::connected(5, (1..5).map(|i| (i - 1, i))).unwrap();
        let inst = build_sp_instance(&p).unwrap();
        let tr = build_tr_graph(&p, &inst, &[]).unwrap();
        assert_eq!(tr.nodes[0].kind, NodeKind::Seed);
        assert_eq!(tr.len(), 3);
        assert_eq!(tr.len(), predicted_len(5, &inst, &[]));
        assert_eq!(tr.odd_contracted(), 0);
    }

    #[test]
    fn single_cycle_gadget() {
        let c4 = Graph::connected(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let inst = build_sp_instance(&c4).unwrap();
        let full = inst.sets.iter().position(|s| s.kind == SetKind::I).unwrap();
        let tr = build_tr_graph(&c4, &inst, &[full]).unwrap();
        assert_eq!(tr.len(), 1);
        assert_eq!(predicted_len(4, &inst, &[full]), 1);
        assert_eq!(tr.odd_contracted(), 2);
        let m = modify_tr(&tr, &inst);
        assert_eq!((m.len(), m.added, m.odd_contracted()), (2, 1, 0));
    }

    #[test]
    fn rejects_unrooted_solutions() {
        let c4 = Graph::connected(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let inst = build_sp_instance(&c4).unwrap();
        let part = inst.sets.iter().position(|s| s.kind == SetKind::II).unwrap();
        assert!(build_tr_graph(&c4, &inst, &[part]).is_err());
    }
}

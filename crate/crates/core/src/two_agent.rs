//! Approximation algorithms for spanning walks of two agents on general
//! graphs.

use std::collections::VecDeque;

use crate::caps::Caps;
use crate::contracted::{
    build_tr_graph, kind_counts, modify_tr, odd_contracted_bound, predicted_len, ContractedTree,
};
use crate::error::{Error, Result};
use crate::graph::{enumerate_c4, enumerate_grid_2x3, Graph};
use crate::metric::{metric_hamiltonian_path, path_from_spanning, MetricInstance};
use crate::oracle::{config_graph, exact_hk};
use crate::packing::{build_sp_instance, exact_set_packing, rooted_set_packing, PackingMode};
use crate::walk::{align_config, one_to_two, TransitionWalk};

fn need_two(g: &Graph) -> Result<()> {
    if g.n() < 2 {
        return Err(Error::Infeasible("two agents need at least two vertices".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected(0));
    }
    Ok(())
}

/// Hamiltonian path on the shortest-path closure, expanded into a vertex
/// walk and read off as consecutive pairs.
pub fn simple_3approx(g: &Graph, caps: &Caps) -> Result<TransitionWalk> {
    need_two(g)?;
    let closure = MetricInstance::closure(g)?;
    let path = metric_hamiltonian_path(&closure, caps.matching_max_odd)?;
    let mut walk = vec![path.order[0]];
    for hop in path.order.windows(2) {
        let sp = g.shortest_path(hop[0], hop[1]).expect("graph is connected");
        walk.extend(&sp[1..]);
    }
    Ok(one_to_two(&walk, g)?.without_idle_steps(g))
}

/// The graph whose nodes are the edges of `g` (as two-agent
/// configurations) and whose arcs are single steps between them.
pub struct PairGraph {
    pub pairs: Vec<Vec<usize>>,
    succ: Vec<Vec<usize>>,
}

impl PairGraph {
    pub fn new(g: &Graph) -> Self {
        let pairs: Vec<Vec<usize>> = g.edges().iter().map(|&(a, b)| vec![a, b]).collect();
        let succ = config_graph(g, &pairs)
            .into_iter()
            .map(|s| s.into_iter().map(|(j, _)| j).collect())
            .collect();
        PairGraph { pairs, succ }
    }

    pub fn index(&self, (a, b): (usize, usize)) -> usize {
        let key = [a.min(b), a.max(b)];
        self.pairs.iter().position(|p| p[..] == key).expect("pair is an edge")
    }

    /// Shortest sequence of pair indices from `from` to `to`, inclusive.
    pub fn route(&self, from: usize, to: usize) -> Vec<usize> {
        let mut prev = vec![usize::MAX; self.pairs.len()];
        prev[from] = from;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            if u == to {
                break;
            }
            for &w in &self.succ[u] {
                if prev[w] == usize::MAX {
                    prev[w] = u;
                    queue.push_back(w);
                }
            }
        }
        let mut out = vec![to];
        let mut cur = to;
        while cur != from {
            cur = prev[cur];
            out.push(cur);
        }
        out.reverse();
        out
    }

    pub fn distances_from(&self, from: usize) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.pairs.len()];
        dist[from] = 0;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.succ[u] {
                if dist[w] == u32::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Alg2Diagnostics {
    pub n: usize,
    pub m: usize,
    pub cycles: usize,
    pub grids: usize,
    /// Chosen sets by kind `[I, II, III, IV]`.
    pub kinds: [usize; 4],
    pub sol_weight: usize,
    /// Edges of the contracted tree before the parallel-edge modification.
    pub tr_len: usize,
    /// The same count predicted from the packing solution alone.
    pub predicted_tr_len: usize,
    pub tr_len_modified: usize,
    pub odd_contracted: usize,
    pub odd_contracted_bound: usize,
    pub match_cost: f64,
    pub heuristic_matching: bool,
    pub walk_len: usize,
}

impl Alg2Diagnostics {
    pub fn odd_bound_holds(&self) -> bool {
        self.odd_contracted <= self.odd_contracted_bound
    }
}

#[derive(Debug, Clone)]
pub struct Alg2Output {
    pub walk: TransitionWalk,
    pub tree: ContractedTree,
    pub diagnostics: Alg2Diagnostics,
}

/// Packing of 4-cycles and grids, contracted tree, matching of its odd
/// nodes, Euler path, shortcut, and expansion into a two-agent walk.
/// Distances between tree nodes are step counts between the corresponding
/// two-agent configurations.
pub fn alg2(g: &Graph, mode: PackingMode, caps: &Caps) -> Result<Alg2Output> {
    need_two(g)?;
    let inst = build_sp_instance(g)?;
    let sol = rooted_set_packing(&inst, mode)?;
    let tr = build_tr_graph(g, &inst, &sol.chosen)?;
    let predicted = predicted_len(g.n(), &inst, &sol.chosen);
    if tr.len() != predicted {
        return Err(Error::Invariant(format!(
            "contracted tree has {} edges, expected {predicted}",
            tr.len()
        )));
    }
    let modified = modify_tr(&tr, &inst);

    let pg = PairGraph::new(g);
    let ids: Vec<usize> = modified.nodes.iter().map(|node| pg.index(node.pair)).collect();
    let dist: Vec<Vec<f64>> = ids
        .iter()
        .map(|&a| {
            let d = pg.distances_from(a);
            ids.iter().map(|&b| f64::from(d[b])).collect()
        })
        .collect();
    let metric = MetricInstance::new(dist)?;
    let path = path_from_spanning(&metric, &modified.edges, caps.matching_max_odd)?;

    let mut route = vec![ids[path.order[0]]];
    for hop in path.order.windows(2) {
        route.extend(&pg.route(ids[hop[0]], ids[hop[1]])[1..]);
    }
    let mut configs: Vec<Vec<usize>> = vec![pg.pairs[route[0]].clone()];
    for &p in &route[1..] {
        let next = align_config(g, configs.last().unwrap(), &pg.pairs[p])
            .ok_or_else(|| Error::Invariant("route step is not a transition".into()))?;
        configs.push(next);
    }
    let walk = TransitionWalk::new(2, configs).without_idle_steps(g);

    let budget = modified.len() as f64 + path.matching.cost;
    if walk.len() as f64 > budget + 1e-9 {
        return Err(Error::Invariant(format!(
            "walk length {} exceeds tree length plus matching {budget}",
            walk.len()
        )));
    }
    let diagnostics = Alg2Diagnostics {
        n: g.n(),
        m: g.m(),
        cycles: enumerate_c4(g).len(),
        grids: enumerate_grid_2x3(g).len(),
        kinds: kind_counts(&inst, &sol.chosen),
        sol_weight: sol.weight,
        tr_len: tr.len(),
        predicted_tr_len: predicted,
        tr_len_modified: modified.len(),
        odd_contracted: modified.odd_contracted(),
        odd_contracted_bound: odd_contracted_bound(&inst, &sol.chosen),
        match_cost: path.matching.cost,
        heuristic_matching: path.matching.heuristic,
        walk_len: walk.len(),
    };
    Ok(Alg2Output { walk, tree: modified, diagnostics })
}

/// Both sides of `h_2 >= n - w(OPT)/2 - 1`, computed exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PackingBoundReport {
    pub h2: usize,
    pub opt_weight: usize,
    pub bound: f64,
}

impl PackingBoundReport {
    pub fn holds(&self) -> bool {
        self.h2 as f64 >= self.bound
    }

    pub fn slack(&self) -> f64 {
        self.h2 as f64 - self.bound
    }
}

pub fn sp_lower_bound_check(g: &Graph, caps: &Caps) -> Result<PackingBoundReport> {
    let h2 = exact_hk(g, 2, false, caps)?.length;
    let inst = build_sp_instance(g)?;
    let opt_weight = exact_set_packing(&inst, caps)?.weight;
    let bound = g.n() as f64 - opt_weight as f64 / 2.0 - 1.0;
    Ok(PackingBoundReport { h2, opt_weight, bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::validate_walk;

    fn path(n: usize) -> Graph {
        Graph::connected(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    #[test]
    fn simple_on_small_graphs() {
        let caps = Caps::default();
        let w = simple_3approx(&path(4), &caps).unwrap();
        assert_eq!(w.len(), 2);
        let k4 = Graph::connected(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let w = simple_3approx(&k4, &caps).unwrap();
        assert!(validate_walk(&k4, &w).is_valid_spanning());
        assert!(w.len() <= 4);
        assert!(simple_3approx(&Graph::connected(1, []).unwrap(), &caps).is_err());
    }

    #[test]
    fn alg2_on_cycle() {
        let c4 = Graph::connected(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        for mode in [PackingMode::Greedy, PackingMode::LocalSearch, PackingMode::Exact] {
            let out = alg2(&c4, mode, &Caps::default()).unwrap();
            assert!(validate_walk(&c4, &out.walk).is_valid_spanning());
            assert_eq!(out.walk.len(), 1);
            assert_eq!(out.diagnostics.sol_weight, 4);
        }
    }

    #[test]
    fn alg2_on_path() {
        let out = alg2(&path(6), PackingMode::Exact, &Caps::default()).unwrap();
        assert!(validate_walk(&path(6), &out.walk).is_valid_spanning());
        assert_eq!(out.walk.len(), 4);
        assert_eq!(out.diagnostics.tr_len, 4);
    }

    #[test]
    fn packing_bound_on_cycle() {
        let c4 = Graph::connected(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let r = sp_lower_bound_check(&c4, &Caps::default()).unwrap();
        assert_eq!((r.h2, r.opt_weight), (1, 4));
        assert!(r.holds() && r.slack() == 0.0);
        let p = sp_lower_bound_check(&path(4), &Caps::default()).unwrap();
        assert_eq!((p.h2, p.bound), (2, 3.0));
        assert!(!p.holds());
    }
}

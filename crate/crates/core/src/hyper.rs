//! Walks on `k`-uniform hypergraphs, where every configuration is a
//! hyperedge, and the connected-set-cover route to approximate them. The same
//! route applies to simple graphs by taking connected `k`-sets as the family.

use std::collections::VecDeque;

use crate::caps::{check, Caps};
use crate::error::{Error, Result};
use crate::graph::{data_lines, enumerate_connected_ksubsets, parse_numbers, Graph};
use crate::oracle::config_graph;
use crate::walk::{align_by, align_config, TransitionWalk};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    k: usize,
    edges: Vec<Vec<usize>>,
    incident: Vec<Vec<usize>>,
    neighbors: Vec<Vec<usize>>,
}

impl Hypergraph {
    pub fn new(n: usize, k: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("hyperedge arity must be positive".into()));
        }
        let mut sorted = Vec::with_capacity(edges.len());
        for (i, mut e) in edges.into_iter().enumerate() {
            if e.len() != k {
                return Err(Error::InvalidArgument(format!("hyperedge {i} has {} vertices", e.len())));
            }
            if let Some(&v) = e.iter().find(|&&v| v >= n) {
                return Err(Error::VertexOutOfRange(v));
            }
            e.sort_unstable();
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidArgument(format!("hyperedge {i} repeats a vertex")));
            }
            if let Some(j) = sorted.iter().position(|f: &Vec<usize>| *f == e) {
                return Err(Error::InvalidArgument(format!("hyperedges {j} and {i} coincide")));
            }
            sorted.push(e);
        }
        let mut incident = vec![Vec::new(); n];
        let mut neighbors = vec![Vec::new(); n];
        for (i, e) in sorted.iter().enumerate() {
            for &v in e {
                incident[v].push(i);
                neighbors[v].extend(e.iter().copied().filter(|&u| u != v));
            }
        }
        for nb in &mut neighbors {
            nb.sort_unstable();
            nb.dedup();
        }
        Ok(Hypergraph { n, k, edges: sorted, incident, neighbors })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, i: usize) -> &[usize] {
        &self.edges[i]
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    /// Vertices sharing a hyperedge with `v`, excluding `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }
}

/// Parses `n m k` followed by `m` lines of `k` vertex ids; `#` lines skipped.
pub fn load_hypergraph(text: &str) -> Result<Hypergraph> {
    let mut lines = data_lines(text);
    let (hl, header) = lines
        .next()
        .ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
    let head = parse_numbers(hl, header, 3)?;
    let (n, m, k) = (head[0], head[1], head[2]);
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (ln, line) = lines.next().ok_or(Error::Parse {
            line: hl,
            msg: format!("expected {m} hyperedge lines"),
        })?;
        edges.push(parse_numbers(ln, line, k)?);
    }
    if let Some((ln, _)) = lines.next() {
        return Err(Error::Parse { line: ln, msg: "trailing data after hyperedges".into() });
    }
    Hypergraph::new(n, k, edges)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkKind {
    /// The hyperedges share a vertex.
    Shift,
    /// Disjoint hyperedges with a one-to-one move of all agents, each along
    /// some hyperedge.
    Jump,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentedLineGraph {
    pub links: Vec<(usize, usize, LinkKind)>,
    adj: Vec<Vec<usize>>,
}

impl AugmentedLineGraph {
    pub fn nodes(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, e: usize) -> &[usize] {
        &self.adj[e]
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    pub fn jump_edges(&self) -> Vec<(usize, usize)> {
        self.links.iter().filter(|l| l.2 == LinkKind::Jump).map(|l| (l.0, l.1)).collect()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.adj.len();
        n > 0 && bfs_from(&self.adj, &[0]).iter().all(|d| d.is_some())
    }
}

/// Shift links between intersecting hyperedges and jump links between
/// disjoint ones admitting a perfect matching `v -> u` with `u` a neighbour
/// of `v`. Candidate targets only use vertices neighbouring the source.
pub fn build_lstar(h: &Hypergraph) -> Result<AugmentedLineGraph> {
    let m = h.m();
    let mut links = Vec::new();
    let mut adj = vec![Vec::new(); m];
    for a in 0..m {
        let ea = h.edge(a);
        let reach: Vec<usize> = ea.iter().flat_map(|&v| h.neighbors(v).iter().copied()).collect();
        for b in a + 1..m {
            let eb = h.edge(b);
            let kind = if eb.iter().any(|v| ea.contains(v)) {
                Some(LinkKind::Shift)
            } else if eb.iter().all(|u| reach.contains(u))
                && align_by(ea, eb, |v, u| v != u && h.neighbors(v).binary_search(&u).is_ok())
                    .is_some()
            {
                Some(LinkKind::Jump)
            } else {
                None
            };
            if let Some(kind) = kind {
                links.push((a, b, kind));
                adj[a].push(b);
                adj[b].push(a);
            }
        }
    }
    let lstar = AugmentedLineGraph { links, adj };
    let covered = (0..h.n()).all(|v| !h.incident(v).is_empty());
    if !covered || !lstar.is_connected() {
        return Err(Error::Infeasible("hypergraph is not connected".into()));
    }
    Ok(lstar)
}

fn bfs_from(adj: &[Vec<usize>], sources: &[usize]) -> Vec<Option<(usize, usize)>> {
    // entry = (distance, predecessor)
    let mut seen: Vec<Option<(usize, usize)>> = vec![None; adj.len()];
    let mut queue = VecDeque::new();
    for &s in sources {
        seen[s] = Some((0, s));
        queue.push_back(s);
    }
    while let Some(u) = queue.pop_front() {
        let d = seen[u].unwrap().0;
        for &w in &adj[u] {
            if seen[w].is_none() {
                seen[w] = Some((d + 1, u));
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Connected set cover: cover `0..universe` with members of `family` whose
/// host-graph subgraph is connected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CscInstance {
    pub universe: usize,
    pub family: Vec<Vec<usize>>,
    pub host: Vec<Vec<usize>>,
}

impl CscInstance {
    pub fn from_lstar(h: &Hypergraph, lstar: &AugmentedLineGraph) -> Self {
        CscInstance {
            universe: h.n(),
            family: h.edges().to_vec(),
            host: (0..lstar.nodes()).map(|e| lstar.neighbors(e).to_vec()).collect(),
        }
    }

    pub fn covers(&self, chosen: &[usize]) -> bool {
        let mut seen = vec![false; self.universe];
        for &i in chosen {
            for &v in &self.family[i] {
                seen[v] = true;
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_connected(&self, chosen: &[usize]) -> bool {
        let Some(&first) = chosen.first() else { return false };
        let mut reached = vec![first];
        let mut i = 0;
        while i < reached.len() {
            for &w in &self.host[reached[i]] {
                if chosen.contains(&w) && !reached.contains(&w) {
                    reached.push(w);
                }
            }
            i += 1;
        }
        reached.len() == chosen.len()
    }

    pub fn is_feasible(&self, chosen: &[usize]) -> bool {
        self.covers(chosen) && self.is_connected(chosen)
    }
}

/// Greedy cover grown inside one host component: start from the set covering
/// most elements, then repeatedly add the adjacent set with the largest new
/// coverage; when no adjacent set helps, splice in a shortest host path to
/// the most useful set further away.
pub fn greedy_connected_set_cover(inst: &CscInstance) -> Result<Vec<usize>> {
    let f = inst.family.len();
    let components = {
        let mut comp = vec![usize::MAX; f];
        for s in 0..f {
            if comp[s] == usize::MAX {
                for (i, d) in bfs_from(&inst.host, &[s]).iter().enumerate() {
                    if d.is_some() {
                        comp[i] = s;
                    }
                }
            }
        }
        comp
    };
    let feasible_component = |c: usize| {
        let members: Vec<usize> = (0..f).filter(|&i| components[i] == c).collect();
        inst.covers(&members)
    };
    let seed = (0..f)
        .filter(|&i| feasible_component(components[i]))
        .max_by_key(|&i| (inst.family[i].len(), std::cmp::Reverse(i)))
        .ok_or_else(|| Error::Infeasible("no connected cover exists".into()))?;
    let mut covered = vec![false; inst.universe];
    let mut chosen = Vec::new();
    let take = |i: usize, chosen: &mut Vec<usize>, covered: &mut Vec<bool>| {
        chosen.push(i);
        for &v in &inst.family[i] {
            covered[v] = true;
        }
    };
    take(seed, &mut chosen, &mut covered);
    while covered.iter().any(|c| !c) {
        let gain = |i: usize| inst.family[i].iter().filter(|&&v| !covered[v]).count();
        let adjacent = chosen
            .iter()
            .flat_map(|&c| inst.host[c].iter().copied())
            .filter(|i| !chosen.contains(i) && gain(*i) > 0)
            .max_by_key(|&i| (gain(i), std::cmp::Reverse(i)));
        if let Some(i) = adjacent {
            take(i, &mut chosen, &mut covered);
            continue;
        }
        let tree = bfs_from(&inst.host, &chosen);
        let target = (0..f)
            .filter(|&i| tree[i].is_some() && gain(i) > 0)
            .max_by_key(|&i| (gain(i), std::cmp::Reverse(tree[i].unwrap().0), std::cmp::Reverse(i)))
            .ok_or_else(|| Error::Infeasible("no connected cover exists".into()))?;
        let mut cur = target;
        while !chosen.contains(&cur) {
            take(cur, &mut chosen, &mut covered);
            cur = tree[cur].unwrap().1;
        }
    }
    Ok(chosen)
}

/// Smallest connected cover by enumerating subfamilies in order of size.
pub fn exact_connected_set_cover(inst: &CscInstance, caps: &Caps) -> Result<Vec<usize>> {
    let f = inst.family.len();
    check("family size for exact connected cover", f, caps.csc_max_family)?;
    for size in 1..=f {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            if inst.is_feasible(&idx) {
                return Ok(idx);
            }
            // next combination in lexicographic order
            let Some(pos) = (0..size).rev().find(|&p| idx[p] != p + f - size) else { break };
            idx[pos] += 1;
            for q in pos + 1..size {
                idx[q] = idx[q - 1] + 1;
            }
        }
    }
    Err(Error::Infeasible("no connected cover exists".into()))
}

/// Walk over members of a connected cover: a spanning tree of the cover in
/// the host graph, traversed depth first with every tree edge used twice,
/// cut after the last member is first reached.
pub fn tree_tour(inst: &CscInstance, cover: &[usize]) -> Vec<usize> {
    let root = cover[0];
    let mut visited = vec![root];
    let mut tour = vec![root];
    fn dfs(
        u: usize,
        inst: &CscInstance,
        cover: &[usize],
        visited: &mut Vec<usize>,
        tour: &mut Vec<usize>,
    ) {
        let mut next: Vec<usize> =
            inst.host[u].iter().copied().filter(|w| cover.contains(w)).collect();
        next.sort_unstable();
        for w in next {
            if !visited.contains(&w) {
                visited.push(w);
                tour.push(w);
                dfs(w, inst, cover, visited, tour);
                tour.push(u);
            }
        }
    }
    dfs(root, inst, cover, &mut visited, &mut tour);
    let last_new = tour
        .iter()
        .enumerate()
        .filter(|&(i, e)| !tour[..i].contains(e))
        .map(|(i, _)| i)
        .max()
        .unwrap_or(0);
    tour.truncate(last_new + 1);
    tour
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperWalk {
    /// Hyperedge ids in visiting order.
    pub edges: Vec<usize>,
    /// The connected cover the walk was built from.
    pub cover: Vec<usize>,
}

impl HyperWalk {
    pub fn len(&self) -> usize {
        self.edges.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// `t: e<id>` lines after a `k <k> length <l> spanning <0|1>` header.
    pub fn to_text(&self, k: usize, spanning: bool) -> String {
        let mut s = format!("k {k} length {} spanning {}\n", self.len(), u8::from(spanning));
        for (t, e) in self.edges.iter().enumerate() {
            s.push_str(&format!("{t}: e{e}\n"));
        }
        s
    }
}

/// Approximate walk on a hypergraph through a greedy connected cover.
pub fn solve_khwp_hypergraph(h: &Hypergraph) -> Result<HyperWalk> {
    let lstar = build_lstar(h)?;
    let inst = CscInstance::from_lstar(h, &lstar);
    let cover = greedy_connected_set_cover(&inst)?;
    let edges = tree_tour(&inst, &cover);
    Ok(HyperWalk { edges, cover })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperWalkReport {
    pub length: usize,
    pub valid: bool,
    pub covering: bool,
}

pub fn validate_hyper_walk(h: &Hypergraph, lstar: &AugmentedLineGraph, walk: &[usize]) -> HyperWalkReport {
    let valid = !walk.is_empty()
        && walk.iter().all(|&e| e < h.m())
        && walk.windows(2).all(|p| p[0] == p[1] || lstar.adjacent(p[0], p[1]));
    let mut seen = vec![false; h.n()];
    for &e in walk.iter().filter(|&&e| e < h.m()) {
        for &v in h.edge(e) {
            seen[v] = true;
        }
    }
    HyperWalkReport {
        length: walk.len().saturating_sub(1),
        valid,
        covering: seen.into_iter().all(|s| s),
    }
}

/// Shortest covering walk over the augmented line graph by breadth-first
/// search on (hyperedge, covered vertices).
pub fn exact_hyper_walk(h: &Hypergraph, lstar: &AugmentedLineGraph, caps: &Caps) -> Result<Vec<usize>> {
    check("oracle vertex count", h.n(), caps.oracle_max_n.min(30))?;
    let width = 1usize << h.n();
    let full = width - 1;
    let mask = |e: usize| h.edge(e).iter().fold(0usize, |m, &v| m | 1 << v);
    let mut prev = vec![u32::MAX; h.m() * width];
    let mut queue = VecDeque::new();
    for e in 0..h.m() {
        let id = e * width + mask(e);
        prev[id] = id as u32;
        queue.push_back(id);
    }
    while let Some(id) = queue.pop_front() {
        let (e, cov) = (id / width, id % width);
        if cov == full {
            let mut walk = vec![e];
            let mut cur = id;
            while prev[cur] as usize != cur {
                cur = prev[cur] as usize;
                walk.push(cur / width);
            }
            walk.reverse();
            return Ok(walk);
        }
        for &f in lstar.neighbors(e) {
            let nid = f * width + (cov | mask(f));
            if prev[nid] == u32::MAX {
                prev[nid] = id as u32;
                queue.push_back(nid);
            }
        }
    }
    Err(Error::Infeasible("no covering walk exists".into()))
}

/// Walk of `k` agents on a simple graph: connected `k`-sets as the family,
/// linked when they overlap or when the agents can move between them in one
/// step; the cover tour is then expanded into single steps.
pub fn solve_khwp_graph_csc(g: &Graph, k: usize, caps: &Caps) -> Result<TransitionWalk> {
    check("agents for the set-cover solver", k, caps.oracle_max_k)?;
    if k == 0 || k > g.n() {
        return Err(Error::InvalidArgument(format!("k = {k} outside 1..={}", g.n())));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected(0));
    }
    let family = enumerate_connected_ksubsets(g, k);
    let moves = config_graph(g, &family);
    let host: Vec<Vec<usize>> = (0..family.len())
        .map(|i| {
            let mut nb: Vec<usize> = moves[i].iter().map(|&(j, _)| j).collect();
            for j in 0..family.len() {
                if j != i && family[j].iter().any(|v| family[i].contains(v)) {
                    nb.push(j);
                }
            }
            nb.sort_unstable();
            nb.dedup();
            nb
        })
        .collect();
    let inst = CscInstance { universe: g.n(), family, host };
    let cover = greedy_connected_set_cover(&inst)?;
    let tour = tree_tour(&inst, &cover);

    let step_adj: Vec<Vec<usize>> =
        moves.iter().map(|s| s.iter().map(|&(j, _)| j).collect()).collect();
    let mut route = vec![tour[0]];
    for hop in tour.windows(2) {
        let tree = bfs_from(&step_adj, &[hop[0]]);
        if tree[hop[1]].is_none() {
            return Err(Error::Invariant("configurations are not mutually reachable".into()));
        }
        let mut leg = vec![hop[1]];
        let mut cur = hop[1];
        while cur != hop[0] {
            cur = tree[cur].unwrap().1;
            leg.push(cur);
        }
        leg.reverse();
        route.extend(&leg[1..]);
    }
    let mut configs = vec![inst.family[route[0]].clone()];
    for &s in &route[1..] {
        let next = align_config(g, configs.last().unwrap(), &inst.family[s])
            .ok_or_else(|| Error::Invariant("route step is not a transition".into()))?;
        configs.push(next);
    }
    Ok(TransitionWalk::new(k, configs).without_idle_steps(g))
}

//! Undirected simple graphs over dense vertex ids `0..n`, the edge-list text
//! format, and the traversal and pattern-enumeration primitives the solvers
//! build on.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};

pub const UNREACHABLE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Builds a simple graph, rejecting self-loops, duplicate edges and
    /// out-of-range endpoints. Connectivity is not required here.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        let mut list = Vec::new();
        for (u, v) in edges {
            if u >= n {
                return Err(Error::VertexOutOfRange(u));
            }
            if v >= n {
                return Err(Error::VertexOutOfRange(v));
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            adj[a].push(b);
            adj[b].push(a);
            list.push((a, b));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].0, w[0].1));
        }
        for nb in &mut adj {
            nb.sort_unstable();
        }
        Ok(Graph { n, adj, edges: list })
    }

    /// Like [`Graph::new`] but also requires the graph to be connected.
    pub fn connected(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let g = Graph::new(n, edges)?;
        if n == 0 {
            return Err(Error::InvalidArgument("graph has no vertices".into()));
        }
        if let Some(v) = g.first_unreachable() {
            return Err(Error::Disconnected(v));
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Returns a copy of the graph with one more edge.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Graph> {
        Graph::new(self.n, self.edges.iter().copied().chain([(u, v)]))
    }

    fn first_unreachable(&self) -> Option<usize> {
        if self.n == 0 {
            return None;
        }
        let dist = self.bfs(0);
        dist.iter().position(|&d| d == UNREACHABLE)
    }

    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.first_unreachable().is_none()
    }

    pub fn is_tree(&self) -> bool {
        self.n > 0 && self.m() == self.n - 1 && self.is_connected()
    }

    /// Hop distances from `src`; unreachable vertices get [`UNREACHABLE`].
    pub fn bfs(&self, src: usize) -> Vec<u32> {
        self.bfs_with_parents(src).0
    }

    fn bfs_with_parents(&self, src: usize) -> (Vec<u32>, Vec<usize>) {
        let mut dist = vec![UNREACHABLE; self.n];
        let mut parent = vec![usize::MAX; self.n];
        let mut queue = VecDeque::new();
        dist[src] = 0;
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == UNREACHABLE {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
        (dist, parent)
    }

    /// One shortest path from `from` to `to`, both endpoints included.
    pub fn shortest_path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let (dist, parent) = self.bfs_with_parents(to);
        if dist[from] == UNREACHABLE {
            return None;
        }
        let mut path = vec![from];
        let mut cur = from;
        while cur != to {
            cur = parent[cur];
            path.push(cur);
        }
        Some(path)
    }

    /// All-pairs hop distances.
    pub fn shortest_path_matrix(&self) -> Vec<Vec<u32>> {
        (0..self.n).map(|v| self.bfs(v)).collect()
    }

    /// True when `set` is non-empty and induces a connected subgraph.
    pub fn induces_connected(&self, set: &[usize]) -> bool {
        let Some(&start) = set.first() else {
            return false;
        };
        let mut seen = vec![start];
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &w in set {
                if !seen.contains(&w) && self.has_edge(u, w) {
                    seen.push(w);
                    stack.push(w);
                }
            }
        }
        seen.len() == set.len()
    }

    /// Serialises to the edge-list text format.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.m());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

/// Parses the edge-list format: header `n m`, then `m` lines `u v`. Lines
/// starting with `#` and blank lines are skipped. The graph must be connected.
pub fn load_graph(text: &str) -> Result<Graph> {
    let mut lines = data_lines(text);
    let (hl, header) = lines
        .next()
        .ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
    let head = parse_numbers(hl, header, 2)?;
    let (n, m) = (head[0], head[1]);
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (ln, line) = lines.next().ok_or(Error::Parse {
            line: hl,
            msg: format!("expected {m} edge lines"),
        })?;
        let uv = parse_numbers(ln, line, 2)?;
        edges.push((uv[0], uv[1]));
    }
    if let Some((ln, _)) = lines.next() {
        return Err(Error::Parse { line: ln, msg: "trailing data after edge list".into() });
    }
    Graph::connected(n, edges)
}

pub(crate) fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub(crate) fn parse_numbers(line_no: usize, line: &str, expected: usize) -> Result<Vec<usize>> {
    let nums = line
        .split_whitespace()
        .map(|t| {
            t.parse::<usize>().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("not a non-negative integer: {t:?}"),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if nums.len() != expected {
        return Err(Error::Parse {
            line: line_no,
            msg: format!("expected {expected} numbers, found {}", nums.len()),
        });
    }
    Ok(nums)
}

/// Diameter of a tree and one longest path between its endpoints.
///
/// Double sweep: the farthest vertex from vertex 0 (smallest id on ties) is
/// one endpoint `a`; the farthest vertex from `a` (smallest id on ties) is the
/// other endpoint `b`. The path is returned from `b` to `a`.
pub fn tree_diameter(g: &Graph) -> Result<(usize, Vec<usize>)> {
    if !g.is_tree() {
        return Err(Error::NotATree);
    }
    let farthest = |dist: &[u32]| {
        let max = *dist.iter().max().unwrap_or(&0);
        dist.iter().position(|&d| d == max).unwrap_or(0)
    };
    let a = farthest(&g.bfs(0));
    let (dist, parent) = g.bfs_with_parents(a);
    let b = farthest(&dist);
    let mut path = vec![b];
    let mut cur = b;
    while cur != a {
        cur = parent[cur];
        path.push(cur);
    }
    Ok((dist[b] as usize, path))
}

/// Every 4-cycle once, as `(v1, v2, v3, v4)` with `v1` the smallest vertex and
/// `v2 < v4` (its two cycle neighbours).
pub fn enumerate_c4(g: &Graph) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..g.n() {
        for &b in g.neighbors(a).iter().filter(|&&b| b > a) {
            for &c in g.neighbors(b).iter().filter(|&&c| c > a) {
                for &d in g.neighbors(c).iter().filter(|&&d| d > b && d != b) {
                    if g.has_edge(d, a) {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    out
}

/// An embedded 2×3 grid. Layout:
///
/// ```text
/// v1 - v2
/// |    |
/// v4 - v3
/// |    |
/// v5 - v6
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GridPattern(pub [usize; 6]);

impl GridPattern {
    /// Pattern edges as index pairs into the 6-tuple.
    pub const EDGE_SLOTS: [(usize, usize); 7] =
        [(0, 1), (2, 3), (4, 5), (0, 3), (1, 2), (3, 4), (2, 5)];

    pub fn vertices(&self) -> &[usize; 6] {
        &self.0
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        Self::EDGE_SLOTS.iter().map(|&(i, j)| (self.0[i], self.0[j]))
    }

    /// The four relabelings of the same geometric grid.
    pub fn symmetries(&self) -> [[usize; 6]; 4] {
        let [v1, v2, v3, v4, v5, v6] = self.0;
        [
            [v1, v2, v3, v4, v5, v6],
            [v2, v1, v4, v3, v6, v5],
            [v5, v6, v3, v4, v1, v2],
            [v6, v5, v4, v3, v2, v1],
        ]
    }

    pub fn canonical(&self) -> GridPattern {
        GridPattern(*self.symmetries().iter().min().unwrap())
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical() == *self
    }
}

/// Every embedded 2×3 grid once, in canonical form.
pub fn enumerate_grid_2x3(g: &Graph) -> Vec<GridPattern> {
    let mut out = Vec::new();
    for v1 in 0..g.n() {
        for &v2 in g.neighbors(v1) {
            for &v4 in g.neighbors(v1) {
                if v4 == v2 {
                    continue;
                }
                for &v3 in g.neighbors(v2) {
                    if v3 == v1 || v3 == v4 || !g.has_edge(v3, v4) {
                        continue;
                    }
                    for &v5 in g.neighbors(v4) {
                        if [v1, v2, v3].contains(&v5) {
                            continue;
                        }
                        for &v6 in g.neighbors(v5) {
                            if [v1, v2, v3, v4].contains(&v6) || !g.has_edge(v6, v3) {
                                continue;
                            }
                            let p = GridPattern([v1, v2, v3, v4, v5, v6]);
                            if p.is_canonical() {
                                out.push(p);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// All vertex sets of size `k` inducing a connected subgraph, each sorted.
/// Uses the ESU extension scheme so every set is produced exactly once.
pub fn enumerate_connected_ksubsets(g: &Graph, k: usize) -> Vec<Vec<usize>> {
    fn extend(
        g: &Graph,
        k: usize,
        root: usize,
        sub: &mut Vec<usize>,
        ext: Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if sub.len() == k {
            let mut s = sub.clone();
            s.sort_unstable();
            out.push(s);
            return;
        }
        let mut ext = ext;
        while let Some(w) = ext.pop() {
            // exclusive neighbourhood of w: neighbours > root not in sub and
            // not adjacent to any vertex already in sub
            let mut next = ext.clone();
            for &u in g.neighbors(w) {
                if u > root
                    && !sub.contains(&u)
                    && !next.contains(&u)
                    && u != w
                    && !sub.iter().any(|&s| g.has_edge(s, u))
                {
                    next.push(u);
                }
            }
            sub.push(w);
            extend(g, k, root, sub, next, out);
            sub.pop();
        }
    }

    let mut out = Vec::new();
    if k == 0 || k > g.n() {
        return out;
    }
    for v in 0..g.n() {
        let ext: Vec<usize> = g.neighbors(v).iter().copied().filter(|&u| u > v).collect();
        let mut sub = vec![v];
        extend(g, k, v, &mut sub, ext, &mut out);
    }
    out.sort();
    out
}

//! Hamiltonian paths on metric instances: minimum spanning tree, a minimum
//! matching that leaves two odd vertices free, an Euler path through the
//! union, and shortcutting of repeated points.

use crate::error::{Error, Result};
use crate::graph::Graph;

const EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct MetricInstance {
    dist: Vec<Vec<f64>>,
}

impl MetricInstance {
    /// Validates symmetry, zero diagonal, non-negativity and the triangle
    /// inequality.
    pub fn new(dist: Vec<Vec<f64>>) -> Result<Self> {
        let n = dist.len();
        if dist.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidArgument("distance matrix is not square".into()));
        }
        for i in 0..n {
            if dist[i][i].abs() > EPS {
                return Err(Error::InvalidArgument(format!("d({i},{i}) is not zero")));
            }
            for j in 0..n {
                let d = dist[i][j];
                if !d.is_finite() || d < 0.0 || (d - dist[j][i]).abs() > EPS {
                    return Err(Error::InvalidArgument(format!("bad distance d({i},{j}) = {d}")));
                }
                for (l, &via) in dist[j].iter().enumerate() {
                    if dist[i][l] > d + via + EPS {
                        return Err(Error::InvalidArgument(format!(
                            "triangle inequality fails for ({i}, {j}, {l})"
                        )));
                    }
                }
            }
        }
        Ok(MetricInstance { dist })
    }

    /// Shortest-path closure of a connected graph.
    pub fn closure(g: &Graph) -> Result<Self> {
        if !g.is_connected() {
            return Err(Error::Disconnected(0));
        }
        let dist = g
            .shortest_path_matrix()
            .into_iter()
            .map(|row| row.into_iter().map(f64::from).collect())
            .collect();
        Ok(MetricInstance { dist })
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i][j]
    }

    pub fn path_cost(&self, order: &[usize]) -> f64 {
        order.windows(2).map(|p| self.d(p[0], p[1])).sum()
    }
}

/// Prim's algorithm; ties go to the smallest index.
pub fn mst(inst: &MetricInstance) -> (Vec<(usize, usize)>, f64) {
    let n = inst.len();
    if n == 0 {
        return (Vec::new(), 0.0);
    }
    let mut in_tree = vec![false; n];
    let mut best = vec![(f64::INFINITY, 0usize); n];
    in_tree[0] = true;
    for (v, b) in best.iter_mut().enumerate().skip(1) {
        *b = (inst.d(0, v), 0);
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut cost = 0.0;
    for _ in 1..n {
        let v = (0..n)
            .filter(|&v| !in_tree[v])
            .min_by(|&a, &b| best[a].0.total_cmp(&best[b].0).then(a.cmp(&b)))
            .unwrap();
        in_tree[v] = true;
        let (w, u) = best[v];
        edges.push((u.min(v), u.max(v)));
        cost += w;
        for x in 0..n {
            if !in_tree[x] && inst.d(v, x) < best[x].0 {
                best[x] = (inst.d(v, x), v);
            }
        }
    }
    (edges, cost)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Matching {
    pub pairs: Vec<(usize, usize)>,
    /// The two odd points left unmatched; `None` when there are no odd points.
    pub unmatched: Option<(usize, usize)>,
    pub cost: f64,
    /// Set when the greedy fallback was used instead of the exact search.
    pub heuristic: bool,
}

/// Minimum-cost matching of all points in `odd` except two, minimised over
/// the choice of the two. Exact for `|odd| <= max_exact`, greedy above.
pub fn min_matching_except_two(
    inst: &MetricInstance,
    odd: &[usize],
    max_exact: usize,
) -> Result<Matching> {
    if odd.len() % 2 == 1 {
        return Err(Error::Invariant(format!("odd point set of size {}", odd.len())));
    }
    if odd.is_empty() {
        return Ok(Matching { pairs: Vec::new(), unmatched: None, cost: 0.0, heuristic: false });
    }
    if odd.len() <= max_exact.min(24) {
        Ok(exact_matching(inst, odd))
    } else {
        Ok(greedy_matching(inst, odd))
    }
}

fn exact_matching(inst: &MetricInstance, odd: &[usize]) -> Matching {
    let o = odd.len();
    let full = (1usize << o) - 1;
    // memo[mask * 3 + skipped]: best cost to finish once `mask` is handled
    let mut memo = vec![f64::NAN; (full + 1) * 3];
    fn solve(
        mask: usize,
        skipped: usize,
        full: usize,
        odd: &[usize],
        inst: &MetricInstance,
        memo: &mut [f64],
    ) -> f64 {
        if mask == full {
            return if skipped == 2 { 0.0 } else { f64::INFINITY };
        }
        let key = mask * 3 + skipped;
        if !memo[key].is_nan() {
            return memo[key];
        }
        let i = (!mask).trailing_zeros() as usize;
        let mut best = f64::INFINITY;
        if skipped < 2 {
            best = solve(mask | 1 << i, skipped + 1, full, odd, inst, memo);
        }
        for j in i + 1..odd.len() {
            if mask & (1 << j) == 0 {
                let c = inst.d(odd[i], odd[j])
                    + solve(mask | 1 << i | 1 << j, skipped, full, odd, inst, memo);
                if c < best {
                    best = c;
                }
            }
        }
        memo[key] = best;
        best
    }
    let cost = solve(0, 0, full, odd, inst, &mut memo);
    let (mut mask, mut skipped) = (0usize, 0usize);
    let mut pairs = Vec::new();
    let mut free = Vec::new();
    while mask != full {
        let target = solve(mask, skipped, full, odd, inst, &mut memo);
        let i = (!mask).trailing_zeros() as usize;
        if skipped < 2 && solve(mask | 1 << i, skipped + 1, full, odd, inst, &mut memo) <= target {
            free.push(odd[i]);
            mask |= 1 << i;
            skipped += 1;
            continue;
        }
        let j = (i + 1..o)
            .filter(|&j| mask & (1 << j) == 0)
            .find(|&j| {
                inst.d(odd[i], odd[j])
                    + solve(mask | 1 << i | 1 << j, skipped, full, odd, inst, &mut memo)
                    <= target + EPS
            })
            .expect("an optimal pairing exists");
        pairs.push((odd[i], odd[j]));
        mask |= 1 << i | 1 << j;
    }
    Matching { pairs, unmatched: Some((free[0], free[1])), cost, heuristic: false }
}

fn greedy_matching(inst: &MetricInstance, odd: &[usize]) -> Matching {
    let mut all = Vec::new();
    for (a, &u) in odd.iter().enumerate() {
        for &v in &odd[a + 1..] {
            all.push((inst.d(u, v), u, v));
        }
    }
    all.sort_by(|x, y| x.0.total_cmp(&y.0).then((x.1, x.2).cmp(&(y.1, y.2))));
    let mut used: Vec<usize> = Vec::new();
    let mut pairs = Vec::new();
    let mut cost = 0.0;
    let want = odd.len() / 2 - 1;
    for (d, u, v) in all {
        if pairs.len() == want {
            break;
        }
        if !used.contains(&u) && !used.contains(&v) {
            used.extend([u, v]);
            pairs.push((u, v));
            cost += d;
        }
    }
    let free: Vec<usize> = odd.iter().copied().filter(|v| !used.contains(v)).collect();
    Matching { pairs, unmatched: Some((free[0], free[1])), cost, heuristic: true }
}

/// Vertices of odd degree in the multigraph `edges` over `0..n`.
pub fn odd_vertices(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut deg = vec![0usize; n];
    for &(u, v) in edges {
        deg[u] += 1;
        deg[v] += 1;
    }
    (0..n).filter(|&v| deg[v] % 2 == 1).collect()
}

/// Traverses every edge of the multigraph exactly once (Hierholzer). With
/// two odd vertices the traversal runs from the smaller to the larger one.
pub fn euler_path(n: usize, edges: &[(usize, usize)]) -> Result<Vec<usize>> {
    let odd = odd_vertices(n, edges);
    if !odd.is_empty() && odd.len() != 2 {
        return Err(Error::InvalidArgument(format!("{} odd-degree vertices", odd.len())));
    }
    let Some(&(first, _)) = edges.first() else {
        return Ok(if n > 0 { vec![0] } else { Vec::new() });
    };
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (id, &(u, v)) in edges.iter().enumerate() {
        adj[u].push((v, id));
        adj[v].push((u, id));
    }
    for list in &mut adj {
        list.sort_unstable();
        list.reverse();
    }
    let start = odd.first().copied().unwrap_or(first);
    let mut used = vec![false; edges.len()];
    let mut stack = vec![start];
    let mut out = Vec::with_capacity(edges.len() + 1);
    while let Some(&v) = stack.last() {
        while adj[v].last().is_some_and(|&(_, id)| used[id]) {
            adj[v].pop();
        }
        match adj[v].pop() {
            Some((w, id)) => {
                used[id] = true;
                stack.push(w);
            }
            None => out.push(stack.pop().unwrap()),
        }
    }
    if out.len() != edges.len() + 1 {
        return Err(Error::InvalidArgument("edge multiset is not connected".into()));
    }
    out.reverse();
    Ok(out)
}

/// Keeps the first occurrence of every point.
pub fn shortcut(walk: &[usize]) -> Vec<usize> {
    let mut seen = Vec::new();
    for &v in walk {
        if !seen.contains(&v) {
            seen.push(v);
        }
    }
    seen
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathResult {
    /// Euler traversal of spanning edges plus matching edges.
    pub euler: Vec<usize>,
    /// Hamiltonian order after shortcutting.
    pub order: Vec<usize>,
    pub matching: Matching,
    pub cost: f64,
}

/// Completes a connected spanning multigraph `base` with a matching on its
/// odd vertices (except two), walks it and shortcuts the walk.
pub fn path_from_spanning(
    inst: &MetricInstance,
    base: &[(usize, usize)],
    max_exact_odd: usize,
) -> Result<PathResult> {
    let odd = odd_vertices(inst.len(), base);
    let matching = min_matching_except_two(inst, &odd, max_exact_odd)?;
    let mut edges = base.to_vec();
    edges.extend(&matching.pairs);
    let euler = euler_path(inst.len(), &edges)?;
    let order = shortcut(&euler);
    let cost = inst.path_cost(&order);
    Ok(PathResult { euler, order, matching, cost })
}

/// Hamiltonian path through all points: spanning tree, matching except two,
/// Euler path, shortcut.
pub fn metric_hamiltonian_path(inst: &MetricInstance, max_exact_odd: usize) -> Result<PathResult> {
    let (tree, _) = mst(inst);
    path_from_spanning(inst, &tree, max_exact_odd)
}

//! Exhaustive breadth-first search for optimal walks on small graphs.
//!
//! A search state is an unordered set of occupied vertices together with the
//! set of vertices covered so far. Agent identities are dropped: if one
//! ordering of a set can move to another set, some ordering of it always can.

use crate::caps::{check, Caps};
use crate::error::{Error, Result};
use crate::graph::{enumerate_connected_ksubsets, Graph};
use crate::walk::{align_config, TransitionWalk};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub length: usize,
    pub walk: TransitionWalk,
}

fn mask_of(set: &[usize]) -> u64 {
    set.iter().fold(0, |m, &v| m | (1u64 << v))
}

/// `true` when the vertices of `a` can be matched onto those of `b` with each
/// vertex staying or moving along an edge.
fn movable(g: &Graph, a: &[usize], b: &[usize]) -> bool {
    align_config(g, a, b).is_some()
}

/// Adjacency between connected `k`-sets: entry `i` lists `(j, r)` for every
/// set `j` reachable from set `i` in one step with `r >= 1` new vertices.
pub(crate) fn config_graph(g: &Graph, sets: &[Vec<usize>]) -> Vec<Vec<(usize, usize)>> {
    let masks: Vec<u64> = sets.iter().map(|s| mask_of(s)).collect();
    let closed: Vec<u64> = sets
        .iter()
        .map(|s| {
            s.iter()
                .fold(0u64, |m, &v| g.neighbors(v).iter().fold(m | (1 << v), |m, &w| m | (1 << w)))
        })
        .collect();
    let mut succ = vec![Vec::new(); sets.len()];
    for i in 0..sets.len() {
        for j in 0..sets.len() {
            if i == j || masks[j] & !closed[i] != 0 {
                continue;
            }
            if movable(g, &sets[i], &sets[j]) {
                let r = (masks[j] & !masks[i]).count_ones() as usize;
                succ[i].push((j, r));
            }
        }
    }
    succ
}

/// Length of a shortest spanning walk of `k` agents, with one witness.
/// With `restricted`, every step must bring exactly one new vertex into the
/// configuration.
pub fn exact_hk(g: &Graph, k: usize, restricted: bool, caps: &Caps) -> Result<OracleResult> {
    let n = g.n();
    check("oracle vertex count", n, caps.oracle_max_n.min(63))?;
    check("oracle agent count", k, caps.oracle_max_k)?;
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("k = {k} outside 1..={n}")));
    }
    if !g.is_connected() {
        return Err(Error::Infeasible("graph is disconnected".into()));
    }
    let sets = enumerate_connected_ksubsets(g, k);
    let succ = config_graph(g, &sets);
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let width = 1usize << n;
    let total = sets.len().checked_mul(width).filter(|&t| t < u32::MAX as usize);
    let total = total.ok_or(Error::CapExceeded {
        what: "oracle state count",
        limit: u32::MAX as usize,
        actual: usize::MAX,
    })?;
    const UNSEEN: u32 = u32::MAX;
    const ROOT: u32 = u32::MAX - 1;
    let mut parent = vec![UNSEEN; total];
    let mut frontier: Vec<u32> = Vec::new();
    for (i, s) in sets.iter().enumerate() {
        let id = i * width + mask_of(s) as usize;
        parent[id] = ROOT;
        frontier.push(id as u32);
    }
    let mut depth = 0;
    loop {
        if let Some(&goal) = frontier.iter().find(|&&id| (id as usize % width) as u64 == full) {
            let walk = reconstruct(g, &sets, &parent, goal, width, ROOT);
            return Ok(OracleResult { length: depth, walk });
        }
        if frontier.is_empty() {
            return Err(Error::Infeasible("no spanning walk exists".into()));
        }
        let mut next = Vec::new();
        for &id in &frontier {
            let (ci, cover) = (id as usize / width, id as usize % width);
            for &(cj, r) in &succ[ci] {
                if restricted && r != 1 {
                    continue;
                }
                let nid = cj * width + (cover | mask_of(&sets[cj]) as usize);
                if parent[nid] == UNSEEN {
                    parent[nid] = id;
                    next.push(nid as u32);
                }
            }
        }
        frontier = next;
        depth += 1;
    }
}

fn reconstruct(
    g: &Graph,
    sets: &[Vec<usize>],
    parent: &[u32],
    goal: u32,
    width: usize,
    root: u32,
) -> TransitionWalk {
    let mut chain = vec![goal as usize / width];
    let mut id = goal;
    while parent[id as usize] != root {
        id = parent[id as usize];
        chain.push(id as usize / width);
    }
    chain.reverse();
    let mut configs: Vec<Vec<usize>> = vec![sets[chain[0]].clone()];
    for &c in &chain[1..] {
        let prev = configs.last().unwrap();
        let next = align_config(g, prev, &sets[c]).expect("successor sets are always alignable");
        configs.push(next);
    }
    TransitionWalk::new(sets[0].len(), configs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::validate_walk;

    fn path(n: usize) -> Graph {
        Graph::connected(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    #[test]
    fn small_optima() {
        let caps = Caps::default();
        let k4 = Graph::connected(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let r = exact_hk(&k4, 2, false, &caps).unwrap();
        assert_eq!(r.length, 1);
        assert!(validate_walk(&k4, &r.walk).is_valid_spanning());
        assert_eq!(exact_hk(&k4, 2, true, &caps).unwrap().length, 2);
        assert_eq!(exact_hk(&path(4), 2, false, &caps).unwrap().length, 2);
        assert_eq!(exact_hk(&path(4), 1, false, &caps).unwrap().length, 3);
        assert_eq!(exact_hk(&path(3), 3, false, &caps).unwrap().length, 0);
    }

    #[test]
    fn star_single_agent() {
        let star = Graph::connected(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(exact_hk(&star, 1, false, &Caps::default()).unwrap().length, 4);
    }

    #[test]
    fn refuses_large_inputs() {
        let err = exact_hk(&path(13), 2, false, &Caps::default()).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert!(exact_hk(&path(5), 5, false, &Caps::default()).is_err());
    }
}

//! Optimal walks on trees: a single-agent depth-first sweep along a longest
//! path, and its head/tail generalisation for `k` agents restricted to steps
//! that bring one new vertex each.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{tree_diameter, Graph};
use crate::walk::{distances_to_set, TransitionWalk};

const NONE: usize = usize::MAX;

/// Depth-first sweep from one end of the longest path to the other, entering
/// side branches before continuing along the path.
struct Sweep {
    walk: Vec<usize>,
    order: Vec<usize>,
    parent: Vec<usize>,
}

fn sweep(tree: &Graph, on_path: &[bool], start: usize, end: usize, stop_after: usize) -> Sweep {
    let n = tree.n();
    let mut explored = vec![false; n];
    let mut parent = vec![NONE; n];
    let mut v = start;
    explored[v] = true;
    let mut walk = vec![v];
    let mut order = vec![v];
    while v != end && order.len() < stop_after {
        let unexplored = |want_path: bool| {
            tree.neighbors(v).iter().copied().find(|&w| !explored[w] && on_path[w] == want_path)
        };
        match unexplored(false).or_else(|| unexplored(true)) {
            Some(w) => {
                explored[w] = true;
                parent[w] = v;
                order.push(w);
                v = w;
            }
            None => v = parent[v],
        }
        walk.push(v);
    }
    Sweep { walk, order, parent }
}

fn longest_path(tree: &Graph) -> Result<(Vec<usize>, Vec<bool>)> {
    let (_, path) = tree_diameter(tree)?;
    let mut on_path = vec![false; tree.n()];
    for &v in &path {
        on_path[v] = true;
    }
    Ok((path, on_path))
}

/// Spanning single-agent walk of length `2(n-1) - diam`.
pub fn one_hwp_tree(tree: &Graph) -> Result<Vec<usize>> {
    let (path, on_path) = longest_path(tree)?;
    let (start, end) = (path[0], *path.last().unwrap());
    Ok(sweep(tree, &on_path, start, end, usize::MAX).walk)
}

/// Which occupied vertex the tail avoids when it has to be moved to a leaf.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum TailAnchor {
    /// The occupied vertex nearest the longest path.
    NearestOccupied,
    /// The occupied leaf nearest the longest path.
    #[cfg_attr(not(test), allow(dead_code))]
    NearestLeaf,
}

/// Spanning walk of `k` agents on a tree in which every step brings exactly
/// one new vertex into the configuration. Its length is
/// [`crate::walk::rhwp_lower_bound`], which is optimal for such walks.
pub fn k_rhwp_tree(tree: &Graph, k: usize) -> Result<TransitionWalk> {
    k_rhwp_tree_with(tree, k, TailAnchor::NearestOccupied, None)
}

/// Same as [`k_rhwp_tree`], also returning `(head, tail)` before every step.
pub fn k_rhwp_tree_traced(tree: &Graph, k: usize) -> Result<(TransitionWalk, Vec<(usize, usize)>)> {
    let mut trace = Vec::new();
    let w = k_rhwp_tree_with(tree, k, TailAnchor::NearestOccupied, Some(&mut trace))?;
    Ok((w, trace))
}

pub(crate) fn k_rhwp_tree_with(
    tree: &Graph,
    k: usize,
    anchor_rule: TailAnchor,
    mut trace: Option<&mut Vec<(usize, usize)>>,
) -> Result<TransitionWalk> {
    let n = tree.n();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("k = {k} outside 1..={n}")));
    }
    if k == 1 {
        return Ok(TransitionWalk::from_vertices(&one_hwp_tree(tree)?));
    }
    let (path, on_path) = longest_path(tree)?;
    let to_path = distances_to_set(tree, &path);
    let (start, end) = (path[0], *path.last().unwrap());

    let first = sweep(tree, &on_path, start, end, k);
    let mut slots = first.order.clone();
    let mut parent = first.parent;
    let mut explored = vec![false; n];
    for &v in &slots {
        explored[v] = true;
    }
    let mut head = slots[k - 1];
    let mut tail = start;
    let mut configs = vec![slots.clone()];
    let nearest_path = |cands: &mut dyn Iterator<Item = usize>| {
        cands.min_by_key(|&v| (to_path[v], v)).expect("candidate set is non-empty")
    };

    let limit = 4 * n + k;
    while head != end {
        if configs.len() > limit {
            return Err(Error::Invariant("tree walk did not terminate".into()));
        }
        if let Some(t) = trace.as_deref_mut() {
            t.push((head, tail));
        }
        let occupied = |v: usize| slots.contains(&v);
        let has_unexplored = |v: usize| tree.neighbors(v).iter().any(|&w| !explored[w]);
        let target;
        if has_unexplored(head) || slots.iter().any(|&v| has_unexplored(v)) {
            if !has_unexplored(head) {
                let v = nearest_in_occupied(tree, &slots, head, has_unexplored)
                    .ok_or_else(|| Error::Invariant("no occupied vertex to continue from".into()))?;
                tail = head;
                head = v;
            }
            let pick = |want_path: bool| {
                tree.neighbors(head)
                    .iter()
                    .copied()
                    .find(|&w| !explored[w] && on_path[w] == want_path)
            };
            target = pick(false).or_else(|| pick(true)).expect("head has an unexplored neighbour");
            parent[target] = head;
        } else {
            let v = nearest_path(&mut slots.iter().copied());
            if v != head {
                tail = head;
                head = v;
            }
            target = parent[head];
            if target == NONE {
                return Err(Error::Invariant(format!("vertex {head} has no parent to retreat to")));
            }
        }
        if occupied(target) {
            return Err(Error::Invariant(format!("target {target} already occupied")));
        }

        let occ_degree =
            |v: usize| tree.neighbors(v).iter().filter(|&&w| occupied(w)).count();
        if occ_degree(tail) > 1 {
            let leaves: Vec<usize> =
                slots.iter().copied().filter(|&v| occ_degree(v) == 1 && v != head).collect();
            let anchor = match anchor_rule {
                TailAnchor::NearestOccupied => nearest_path(&mut slots.iter().copied()),
                TailAnchor::NearestLeaf => nearest_path(
                    &mut slots.iter().copied().filter(|&v| occ_degree(v) == 1),
                ),
            };
            let preferred = leaves.iter().copied().filter(|&v| v != anchor).min();
            tail = preferred
                .or_else(|| leaves.iter().copied().min())
                .ok_or_else(|| Error::Invariant("occupied subtree has no leaf".into()))?;
        }

        let chain = path_in_occupied(tree, &slots, head, tail)
            .ok_or_else(|| Error::Invariant("occupied vertices are disconnected".into()))?;
        let mut next = slots.clone();
        for s in next.iter_mut() {
            if let Some(i) = chain.iter().position(|&v| v == *s) {
                *s = if i == 0 { target } else { chain[i - 1] };
            }
        }
        explored[target] = true;
        head = target;
        tail = chain[chain.len() - 2];
        slots = next;
        configs.push(slots.clone());
    }
    Ok(TransitionWalk::new(k, configs))
}

/// Occupied vertex closest to `from` inside the occupied subtree that
/// satisfies `want`, ties by smallest id.
fn nearest_in_occupied(
    tree: &Graph,
    slots: &[usize],
    from: usize,
    want: impl Fn(usize) -> bool,
) -> Option<usize> {
    let mut layer = vec![from];
    let mut seen = vec![from];
    while !layer.is_empty() {
        let mut hits: Vec<usize> = layer.iter().copied().filter(|&v| v != from && want(v)).collect();
        if !hits.is_empty() {
            hits.sort_unstable();
            return Some(hits[0]);
        }
        let mut next = Vec::new();
        for &u in &layer {
            for &w in tree.neighbors(u) {
                if slots.contains(&w) && !seen.contains(&w) {
                    seen.push(w);
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    None
}

/// Vertex sequence from `a` to `b` through occupied vertices only.
fn path_in_occupied(tree: &Graph, slots: &[usize], a: usize, b: usize) -> Option<Vec<usize>> {
    let mut prev: Vec<(usize, usize)> = vec![(a, a)];
    let mut queue = VecDeque::from([a]);
    while let Some(u) = queue.pop_front() {
        if u == b {
            let mut out = vec![b];
            let mut cur = b;
            while cur != a {
                cur = prev.iter().find(|p| p.0 == cur)?.1;
                out.push(cur);
            }
            out.reverse();
            return Some(out);
        }
        for &w in tree.neighbors(u) {
            if slots.contains(&w) && !prev.iter().any(|p| p.0 == w) {
                prev.push((w, u));
                queue.push_back(w);
            }
        }
    }
    None
}

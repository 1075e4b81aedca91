//! Agent configurations, transition edges between them, and walks of
//! configurations together with their validation and serialisation.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::graph::{data_lines, Graph};

/// Why a configuration is not valid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConfigViolation {
    Empty,
    OutOfRange(usize),
    Repeated(usize),
    /// `reached` is the part connected to the first slot, `missing` the rest.
    Disconnected { reached: Vec<usize>, missing: Vec<usize> },
}

impl fmt::Display for ConfigViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigViolation::Empty => write!(f, "configuration has no slots"),
            ConfigViolation::OutOfRange(v) => write!(f, "vertex {v} out of range"),
            ConfigViolation::Repeated(v) => write!(f, "vertex {v} occupied twice"),
            ConfigViolation::Disconnected { reached, missing } => {
                write!(f, "induced subgraph disconnected: {reached:?} vs {missing:?}")
            }
        }
    }
}

pub fn validate_configuration(g: &Graph, c: &[usize]) -> std::result::Result<(), ConfigViolation> {
    if c.is_empty() {
        return Err(ConfigViolation::Empty);
    }
    if let Some(&v) = c.iter().find(|&&v| v >= g.n()) {
        return Err(ConfigViolation::OutOfRange(v));
    }
    for (i, v) in c.iter().enumerate() {
        if c[..i].contains(v) {
            return Err(ConfigViolation::Repeated(*v));
        }
    }
    let mut reached = vec![c[0]];
    let mut i = 0;
    while i < reached.len() {
        let u = reached[i];
        for &w in c {
            if !reached.contains(&w) && g.has_edge(u, w) {
                reached.push(w);
            }
        }
        i += 1;
    }
    if reached.len() < c.len() {
        let missing = c.iter().copied().filter(|v| !reached.contains(v)).collect();
        reached.sort_unstable();
        return Err(ConfigViolation::Disconnected { reached, missing });
    }
    Ok(())
}

/// `Some(r)` with `r` the number of vertices of `c2` not in `c` when every slot
/// either stays or moves along an edge, `None` when the pair is not adjacent.
pub fn classify_transition(g: &Graph, c: &[usize], c2: &[usize]) -> Result<Option<usize>> {
    if c.len() != c2.len() {
        return Err(Error::InvalidArgument(format!(
            "configurations of different size: {} vs {}",
            c.len(),
            c2.len()
        )));
    }
    let adjacent = c.iter().zip(c2).all(|(&a, &b)| a == b || g.has_edge(a, b));
    Ok(adjacent.then(|| c2.iter().filter(|v| !c.contains(v)).count()))
}

/// Orders the vertex set `to` so that slot `i` of `from` can move to slot `i`
/// of the result (stay or follow an edge). Returns `None` if no such
/// assignment exists. Bipartite matching by augmenting paths.
pub fn align_config(g: &Graph, from: &[usize], to: &[usize]) -> Option<Vec<usize>> {
    align_by(from, to, |a, b| a == b || g.has_edge(a, b))
}

pub(crate) fn align_by(
    from: &[usize],
    to: &[usize],
    ok: impl Fn(usize, usize) -> bool,
) -> Option<Vec<usize>> {
    let k = from.len();
    if to.len() != k {
        return None;
    }
    // owner[j] = slot of `from` currently assigned to to[j]
    let mut owner = vec![usize::MAX; k];
    fn augment(
        i: usize,
        from: &[usize],
        to: &[usize],
        ok: &dyn Fn(usize, usize) -> bool,
        seen: &mut [bool],
        owner: &mut [usize],
    ) -> bool {
        for j in 0..to.len() {
            if !seen[j] && ok(from[i], to[j]) {
                seen[j] = true;
                if owner[j] == usize::MAX || augment(owner[j], from, to, ok, seen, owner) {
                    owner[j] = i;
                    return true;
                }
            }
        }
        false
    }
    // prefer staying put: try identity assignments first
    for (i, &v) in from.iter().enumerate() {
        if let Some(j) = to.iter().position(|&w| w == v) {
            owner[j] = i;
        }
    }
    for i in 0..k {
        if owner.contains(&i) {
            continue;
        }
        let mut seen = vec![false; k];
        if !augment(i, from, to, &ok, &mut seen, &mut owner) {
            return None;
        }
    }
    let mut out = vec![0; k];
    for (j, &i) in owner.iter().enumerate() {
        out[i] = to[j];
    }
    Some(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionWalk {
    pub k: usize,
    pub configs: Vec<Vec<usize>>,
}

impl TransitionWalk {
    pub fn new(k: usize, configs: Vec<Vec<usize>>) -> Self {
        TransitionWalk { k, configs }
    }

    /// A single-agent walk viewed as a walk of 1-configurations.
    pub fn from_vertices(walk: &[usize]) -> Self {
        TransitionWalk { k: 1, configs: walk.iter().map(|&v| vec![v]).collect() }
    }

    pub fn len(&self) -> usize {
        self.configs.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    pub fn covered(&self) -> BTreeSet<usize> {
        self.configs.iter().flatten().copied().collect()
    }

    /// Removes steps whose vertex set equals the previous one, re-ordering
    /// the slots of later configurations so that every step stays valid.
    pub fn without_idle_steps(&self, g: &Graph) -> TransitionWalk {
        let mut out: Vec<Vec<usize>> = Vec::with_capacity(self.configs.len());
        for c in &self.configs {
            match out.last() {
                None => out.push(c.clone()),
                Some(last) => {
                    if same_set(last, c) {
                        continue;
                    }
                    let next = align_config(g, last, c).unwrap_or_else(|| c.clone());
                    out.push(next);
                }
            }
        }
        TransitionWalk { k: self.k, configs: out }
    }

    /// Text form: header `k <k> length <l> spanning <0|1>` then `t: v1 .. vk`.
    pub fn to_text(&self, spanning: bool) -> String {
        let mut s = format!("k {} length {} spanning {}\n", self.k, self.len(), u8::from(spanning));
        for (t, c) in self.configs.iter().enumerate() {
            let _ = write!(s, "{t}:");
            for v in c {
                let _ = write!(s, " {v}");
            }
            s.push('\n');
        }
        s
    }

    /// Parses the text form. Lines after the configurations that do not look
    /// like `t: ...` (for instance an `optimal <l>` record) are ignored.
    pub fn parse(text: &str) -> Result<TransitionWalk> {
        let mut lines = data_lines(text);
        let (hl, header) = lines
            .next()
            .ok_or(Error::Parse { line: 1, msg: "missing walk header".into() })?;
        let tok: Vec<&str> = header.split_whitespace().collect();
        let k = match tok.as_slice() {
            ["k", k, "length", _, "spanning", _] => k.parse::<usize>().ok(),
            _ => None,
        }
        .ok_or(Error::Parse { line: hl, msg: "expected `k <k> length <l> spanning <0|1>`".into() })?;
        let mut configs = Vec::new();
        for (ln, line) in lines {
            let Some((t, rest)) = line.split_once(':') else { continue };
            let Ok(t) = t.trim().parse::<usize>() else { continue };
            if t != configs.len() {
                return Err(Error::Parse { line: ln, msg: format!("expected step {}", configs.len()) });
            }
            let c = rest
                .split_whitespace()
                .map(|x| {
                    x.parse::<usize>()
                        .map_err(|_| Error::Parse { line: ln, msg: format!("bad vertex {x:?}") })
                })
                .collect::<Result<Vec<_>>>()?;
            if c.len() != k {
                return Err(Error::Parse { line: ln, msg: format!("expected {k} vertices") });
            }
            configs.push(c);
        }
        Ok(TransitionWalk { k, configs })
    }
}

pub(crate) fn same_set(a: &[usize], b: &[usize]) -> bool {
    a.len() == b.len() && a.iter().all(|v| b.contains(v))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WalkViolation {
    Empty,
    WrongSize { step: usize },
    BadConfig { step: usize, why: ConfigViolation },
    NotAdjacent { step: usize },
}

impl fmt::Display for WalkViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WalkViolation::Empty => write!(f, "walk has no configurations"),
            WalkViolation::WrongSize { step } => write!(f, "step {step}: wrong number of agents"),
            WalkViolation::BadConfig { step, why } => write!(f, "step {step}: {why}"),
            WalkViolation::NotAdjacent { step } => {
                write!(f, "step {step}: not reachable from step {}", step.saturating_sub(1))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkReport {
    pub length: usize,
    pub spanning: bool,
    /// `histogram[r]` counts r-transitions.
    pub histogram: Vec<usize>,
    pub violation: Option<WalkViolation>,
}

impl WalkReport {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }

    pub fn is_valid_spanning(&self) -> bool {
        self.is_valid() && self.spanning
    }
}

pub fn validate_walk(g: &Graph, w: &TransitionWalk) -> WalkReport {
    let mut report = WalkReport {
        length: w.len(),
        spanning: false,
        histogram: vec![0; w.k + 1],
        violation: None,
    };
    if w.configs.is_empty() {
        report.violation = Some(WalkViolation::Empty);
        return report;
    }
    let mut seen = vec![false; g.n()];
    for (t, c) in w.configs.iter().enumerate() {
        if c.len() != w.k {
            report.violation = Some(WalkViolation::WrongSize { step: t });
            return report;
        }
        if let Err(why) = validate_configuration(g, c) {
            report.violation = Some(WalkViolation::BadConfig { step: t, why });
            return report;
        }
        for &v in c {
            seen[v] = true;
        }
        if t > 0 {
            match classify_transition(g, &w.configs[t - 1], c) {
                Ok(Some(r)) => report.histogram[r] += 1,
                _ => {
                    report.violation = Some(WalkViolation::NotAdjacent { step: t });
                    return report;
                }
            }
        }
    }
    report.spanning = seen.iter().all(|&s| s);
    report
}

/// Converts a 2-agent walk into a single-agent walk covering the same
/// vertices, of length at most twice the input length plus one.
pub fn two_to_one(w2: &TransitionWalk) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(2 * w2.configs.len());
    for (t, c) in w2.configs.iter().enumerate() {
        let (first, second) = if t % 2 == 0 { (c[0], c[1]) } else { (c[1], c[0]) };
        for v in [first, second] {
            if out.last() != Some(&v) {
                out.push(v);
            }
        }
    }
    out
}

/// Turns a single-agent walk `v1 .. v(l+1)` into the 2-agent walk
/// `(v1,v2), (v2,v3), .., (vl,v(l+1))`.
pub fn one_to_two(w1: &[usize], g: &Graph) -> Result<TransitionWalk> {
    if w1.len() < 2 {
        if g.n() >= 2 {
            return Err(Error::InvalidArgument("single-agent walk has length 0".into()));
        }
        return Err(Error::Infeasible("two agents need at least two vertices".into()));
    }
    if let Some(i) = (1..w1.len()).find(|&i| w1[i] == w1[i - 1]) {
        return Err(Error::InvalidArgument(format!("walk repeats vertex {} at step {i}", w1[i])));
    }
    let configs = w1.windows(2).map(|p| vec![p[0], p[1]]).collect();
    Ok(TransitionWalk { k: 2, configs })
}

/// The 0/1 weight of tree edge `e` relative to path `path`: 0 on the path;
/// otherwise 1 exactly when the side of `e` away from the path reaches a
/// vertex at distance at least `k` from the endpoint of `e` nearer the path.
pub fn d_p_k(tree: &Graph, path: &[usize], k: usize, e: (usize, usize)) -> Result<u8> {
    let (a, b) = e;
    if !tree.has_edge(a, b) {
        return Err(Error::InvalidArgument(format!("({a}, {b}) is not an edge")));
    }
    if path.windows(2).any(|p| (p[0], p[1]) == (a, b) || (p[0], p[1]) == (b, a)) {
        return Ok(0);
    }
    let to_path = distances_to_set(tree, path);
    let (near, far) = if to_path[a] <= to_path[b] { (a, b) } else { (b, a) };
    // depth of the far side measured from `near`
    let mut depth = 1;
    let mut frontier = vec![(far, near)];
    while !frontier.is_empty() {
        if depth >= k {
            return Ok(1);
        }
        let mut next = Vec::new();
        for (v, from) in frontier {
            next.extend(tree.neighbors(v).iter().filter(|&&w| w != from).map(|&w| (w, v)));
        }
        frontier = next;
        depth += 1;
    }
    Ok(0)
}

/// Hop distance from every vertex to the nearest vertex of `set`.
pub fn distances_to_set(g: &Graph, set: &[usize]) -> Vec<u32> {
    let mut dist = vec![u32::MAX; g.n()];
    let mut queue = std::collections::VecDeque::new();
    for &s in set {
        dist[s] = 0;
        queue.push_back(s);
    }
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if dist[w] == u32::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// `(n - k) + sum of d_p_k over all edges` for the longest path chosen by
/// [`crate::graph::tree_diameter`]. A lower bound on restricted walks.
pub fn rhwp_lower_bound(tree: &Graph, k: usize) -> Result<usize> {
    let (_, path) = crate::graph::tree_diameter(tree)?;
    if k == 0 || k > tree.n() {
        return Err(Error::InvalidArgument(format!("k = {k} outside 1..={}", tree.n())));
    }
    let mut sum = 0;
    for &e in tree.edges() {
        sum += usize::from(d_p_k(tree, &path, k, e)?);
    }
    Ok(tree.n() - k + sum)
}

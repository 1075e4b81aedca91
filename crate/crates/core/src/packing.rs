//! Weighted set packing over 4-cycles and 2×3 grids.
//!
//! Every cycle yields one full set and four sets with one vertex swapped for
//! a fresh dummy; every grid yields one full set and six such variants. A
//! set's weight is its number of real vertices, and because dummies are never
//! shared, two sets conflict exactly when their real vertices intersect.

use crate::caps::{check, Caps};
use crate::error::{Error, Result};
use crate::graph::{enumerate_c4, enumerate_grid_2x3, Graph, GridPattern};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SetKind {
    /// Whole 4-cycle, weight 4.
    I,
    /// 4-cycle minus one vertex, weight 3.
    II,
    /// Whole grid, weight 6.
    III,
    /// Grid minus one vertex, weight 5.
    IV,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Origin {
    /// `(v1, v2, v3, v4)` with edges v1v2, v2v3, v3v4, v4v1.
    Cycle([usize; 4]),
    Grid(GridPattern),
}

impl Origin {
    pub fn vertices(&self) -> &[usize] {
        match self {
            Origin::Cycle(c) => c,
            Origin::Grid(g) => g.vertices(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackingSet {
    pub kind: SetKind,
    pub origin: Origin,
    /// The real vertex replaced by the dummy (kinds II and IV).
    pub replaced: Option<usize>,
    /// Dummy id, negative and unique within an instance.
    pub dummy: Option<i64>,
}

impl PackingSet {
    pub fn real_members(&self) -> impl Iterator<Item = usize> + '_ {
        self.origin.vertices().iter().copied().filter(move |&v| Some(v) != self.replaced)
    }

    pub fn weight(&self) -> usize {
        self.real_members().count()
    }

    fn size(&self) -> usize {
        self.origin.vertices().len()
    }

    pub(crate) fn mask(&self) -> u128 {
        self.real_members().fold(0, |m, v| m | 1 << v)
    }

    /// Needs another chosen set to cover its replaced vertex.
    pub fn is_dependent(&self) -> bool {
        self.replaced.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackingInstance {
    pub n: usize,
    pub sets: Vec<PackingSet>,
}

impl PackingInstance {
    pub fn weight_of(&self, chosen: &[usize]) -> usize {
        chosen.iter().map(|&i| self.sets[i].weight()).sum()
    }

    /// Pairwise disjoint on real vertices (dummies are never shared).
    pub fn is_disjoint(&self, chosen: &[usize]) -> bool {
        let mut used = 0u128;
        for &i in chosen {
            let m = self.sets[i].mask();
            if used & m != 0 {
                return false;
            }
            used |= m;
        }
        true
    }

    /// Disjoint, and the chosen sets can be ordered so that each dependent
    /// set's replaced vertex is covered by a set placed before it.
    pub fn is_rooted(&self, chosen: &[usize]) -> bool {
        self.is_disjoint(chosen) && rooted_order(self, chosen).is_some()
    }
}

/// Builds the packing instance of `g`.
pub fn build_sp_instance(g: &Graph) -> Result<PackingInstance> {
    check("vertex count for set packing", g.n(), 128)?;
    let mut sets = Vec::new();
    let mut next_dummy = -1i64;
    let mut push_family = |origin: Origin, full: SetKind, part: SetKind| {
        sets.push(PackingSet { kind: full, origin, replaced: None, dummy: None });
        for &v in origin.vertices() {
            sets.push(PackingSet { kind: part, origin, replaced: Some(v), dummy: Some(next_dummy) });
            next_dummy -= 1;
        }
    };
    for c in enumerate_c4(g) {
        push_family(Origin::Cycle(c), SetKind::I, SetKind::II);
    }
    for d in enumerate_grid_2x3(g) {
        push_family(Origin::Grid(d), SetKind::III, SetKind::IV);
    }
    Ok(PackingInstance { n: g.n(), sets })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PackingMode {
    Greedy,
    LocalSearch,
    Exact,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackingSolution {
    /// Indices into the instance's set list.
    pub chosen: Vec<usize>,
    pub weight: usize,
}

impl PackingSolution {
    fn new(inst: &PackingInstance, chosen: Vec<usize>) -> Self {
        let weight = inst.weight_of(&chosen);
        PackingSolution { chosen, weight }
    }
}

/// Maximum-weight disjoint subfamily. Branch and bound when the instance has
/// at most `caps.packing_max_sets` sets; otherwise a subset dynamic program
/// over the real vertices, available while `n <= 20`.
pub fn exact_set_packing(inst: &PackingInstance, caps: &Caps) -> Result<PackingSolution> {
    if inst.sets.len() <= caps.packing_max_sets {
        return Ok(branch_and_bound(inst));
    }
    check("vertices for exact set packing", inst.n, 20)
        .map_err(|_| Error::CapExceeded {
            what: "sets for exact set packing",
            limit: caps.packing_max_sets,
            actual: inst.sets.len(),
        })?;
    Ok(subset_dp(inst))
}

fn branch_and_bound(inst: &PackingInstance) -> PackingSolution {
    let mut order: Vec<usize> = (0..inst.sets.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(inst.sets[i].weight()));
    let masks: Vec<u128> = order.iter().map(|&i| inst.sets[i].mask()).collect();
    let weights: Vec<usize> = order.iter().map(|&i| inst.sets[i].weight()).collect();
    let mut best = (0usize, Vec::new());
    let mut cur = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn go(
        pos: usize,
        used: u128,
        w: usize,
        masks: &[u128],
        weights: &[usize],
        cur: &mut Vec<usize>,
        best: &mut (usize, Vec<usize>),
    ) {
        if w > best.0 {
            *best = (w, cur.clone());
        }
        if pos == masks.len() {
            return;
        }
        // every remaining vertex could at best be covered once
        let free = (!used).count_ones() as usize;
        let cap = weights[pos..].iter().sum::<usize>().min(free);
        if w + cap <= best.0 {
            return;
        }
        if used & masks[pos] == 0 {
            cur.push(pos);
            go(pos + 1, used | masks[pos], w + weights[pos], masks, weights, cur, best);
            cur.pop();
        }
        go(pos + 1, used, w, masks, weights, cur, best);
    }
    let outside = if inst.n >= 128 { 0 } else { u128::MAX << inst.n };
    go(0, outside, 0, &masks, &weights, &mut cur, &mut best);
    let mut chosen: Vec<usize> = best.1.iter().map(|&p| order[p]).collect();
    chosen.sort_unstable();
    PackingSolution::new(inst, chosen)
}

fn subset_dp(inst: &PackingInstance) -> PackingSolution {
    let n = inst.n;
    let full = (1usize << n) - 1;
    let mut by_low: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, s) in inst.sets.iter().enumerate() {
        let m = s.mask() as usize;
        by_low[m.trailing_zeros() as usize].push(i);
    }
    // best[s]: heaviest packing using only vertices in s, `choice` = set taken
    // for the lowest vertex of s (or usize::MAX to leave it uncovered)
    let mut best = vec![0usize; full + 1];
    let mut choice = vec![usize::MAX; full + 1];
    for s in 1..=full {
        let low = s.trailing_zeros() as usize;
        best[s] = best[s & !(1 << low)];
        for &i in &by_low[low] {
            let m = inst.sets[i].mask() as usize;
            if m & s == m {
                let w = inst.sets[i].weight() + best[s & !m];
                if w > best[s] {
                    best[s] = w;
                    choice[s] = i;
                }
            }
        }
    }
    let mut chosen = Vec::new();
    let mut s = full;
    while s != 0 {
        let low = s.trailing_zeros() as usize;
        match choice[s] {
            usize::MAX => s &= !(1 << low),
            i => {
                chosen.push(i);
                s &= !(inst.sets[i].mask() as usize);
            }
        }
    }
    chosen.sort_unstable();
    PackingSolution::new(inst, chosen)
}

/// Heuristic or exact packing without the covering requirement on dependent
/// sets. Greedy scans sets by weight-to-size ratio; local search then applies
/// improving swaps that trade one chosen set for two.
pub fn approx_set_packing(
    inst: &PackingInstance,
    mode: PackingMode,
    caps: &Caps,
) -> Result<PackingSolution> {
    match mode {
        PackingMode::Exact => exact_set_packing(inst, caps),
        PackingMode::Greedy => Ok(PackingSolution::new(inst, greedy(inst))),
        PackingMode::LocalSearch => {
            let start = greedy(inst);
            Ok(PackingSolution::new(inst, swap_search(inst, start, false)))
        }
    }
}

fn greedy(inst: &PackingInstance) -> Vec<usize> {
    let mut order: Vec<usize> = (0..inst.sets.len()).collect();
    order.sort_by(|&a, &b| {
        let (sa, sb) = (&inst.sets[a], &inst.sets[b]);
        // weight/size descending, compared exactly by cross-multiplication
        (sb.weight() * sa.size())
            .cmp(&(sa.weight() * sb.size()))
            .then(sb.weight().cmp(&sa.weight()))
            .then(a.cmp(&b))
    });
    let mut used = 0u128;
    let mut chosen = Vec::new();
    for i in order {
        let m = inst.sets[i].mask();
        if used & m == 0 {
            used |= m;
            chosen.push(i);
        }
    }
    chosen.sort_unstable();
    chosen
}

/// Packing in which every dependent set's replaced vertex is covered by
/// another chosen set and the dependencies are acyclic. These are the
/// solutions from which a spanning contracted tree can be built.
pub fn rooted_set_packing(inst: &PackingInstance, mode: PackingMode) -> Result<PackingSolution> {
    let chosen = match mode {
        PackingMode::Greedy => rooted_greedy(inst),
        PackingMode::LocalSearch => swap_search(inst, rooted_greedy(inst), true),
        PackingMode::Exact => {
            check("vertices for exact rooted packing", inst.n, 20)?;
            rooted_exact(inst)
        }
    };
    let chosen = rooted_order(inst, &chosen).expect("rooted by construction");
    Ok(PackingSolution::new(inst, chosen))
}

fn admissible(inst: &PackingInstance, used: u128, i: usize) -> bool {
    let s = &inst.sets[i];
    used & s.mask() == 0 && s.replaced.is_none_or(|r| used & (1 << r) != 0)
}

fn rooted_greedy(inst: &PackingInstance) -> Vec<usize> {
    let mut used = 0u128;
    let mut chosen = Vec::new();
    loop {
        let pick = (0..inst.sets.len())
            .filter(|&i| admissible(inst, used, i))
            .max_by_key(|&i| (inst.sets[i].weight(), std::cmp::Reverse(i)));
        match pick {
            Some(i) => {
                used |= inst.sets[i].mask();
                chosen.push(i);
            }
            None => return chosen,
        }
    }
}

/// Breadth-first search over covered-vertex masks; adding a set is allowed
/// when it is disjoint and, if dependent, its replaced vertex is already
/// covered. The weight of a mask is its population count.
fn rooted_exact(inst: &PackingInstance) -> Vec<usize> {
    let n = inst.n;
    let mut parent: Vec<(u32, u32)> = vec![(u32::MAX, u32::MAX); 1 << n];
    parent[0] = (0, u32::MAX);
    let mut frontier = vec![0usize];
    let mut best = 0usize;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &m in &frontier {
            if m.count_ones() > best.count_ones() {
                best = m;
            }
            for (i, s) in inst.sets.iter().enumerate() {
                if admissible(inst, m as u128, i) {
                    let nm = m | s.mask() as usize;
                    if parent[nm].0 == u32::MAX {
                        parent[nm] = (m as u32, i as u32);
                        next.push(nm);
                    }
                }
            }
        }
        frontier = next;
    }
    let mut chosen = Vec::new();
    let mut m = best;
    while m != 0 {
        let (p, i) = parent[m];
        chosen.push(i as usize);
        m = p as usize;
    }
    chosen.reverse();
    chosen
}

/// Orders `chosen` so that every dependent set comes after the set covering
/// its replaced vertex; `None` if that is impossible.
pub(crate) fn rooted_order(inst: &PackingInstance, chosen: &[usize]) -> Option<Vec<usize>> {
    let mut left: Vec<usize> = chosen.to_vec();
    let mut out = Vec::with_capacity(left.len());
    let mut used = 0u128;
    while !left.is_empty() {
        let pos = left.iter().position(|&i| admissible(inst, used, i))?;
        let i = left.remove(pos);
        used |= inst.sets[i].mask();
        out.push(i);
    }
    Some(out)
}

/// Replaces one chosen set by two disjoint unchosen sets of larger total
/// weight until no such swap exists.
fn swap_search(inst: &PackingInstance, mut chosen: Vec<usize>, rooted: bool) -> Vec<usize> {
    let valid = |c: &[usize]| {
        if rooted {
            inst.is_rooted(c)
        } else {
            inst.is_disjoint(c)
        }
    };
    'improve: loop {
        for pos in 0..chosen.len() {
            let mut rest = chosen.clone();
            let out = rest.remove(pos);
            if !valid(&rest) {
                continue;
            }
            let used = rest.iter().fold(0u128, |m, &i| m | inst.sets[i].mask());
            let cands: Vec<usize> = (0..inst.sets.len())
                .filter(|&i| i != out && used & inst.sets[i].mask() == 0)
                .collect();
            let gain_over = inst.sets[out].weight();
            for (a_pos, &a) in cands.iter().enumerate() {
                for &b in &cands[a_pos + 1..] {
                    if inst.sets[a].mask() & inst.sets[b].mask() != 0
                        || inst.sets[a].weight() + inst.sets[b].weight() <= gain_over
                    {
                        continue;
                    }
                    let mut trial = rest.clone();
                    trial.extend([a, b]);
                    if valid(&trial) {
                        chosen = trial;
                        continue 'improve;
                    }
                }
            }
        }
        break;
    }
    if rooted {
        // a swap may free room for further sets
        let mut used = chosen.iter().fold(0u128, |m, &i| m | inst.sets[i].mask());
        while let Some(i) = (0..inst.sets.len())
            .filter(|&i| admissible(inst, used, i))
            .max_by_key(|&i| (inst.sets[i].weight(), std::cmp::Reverse(i)))
        {
            used |= inst.sets[i].mask();
            chosen.push(i);
        }
    }
    chosen.sort_unstable();
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle4() -> Graph {
        Graph::connected(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    #[test]
    fn cycle_instance() {
        let inst = build_sp_instance(&cycle4()).unwrap();
        let mut w: Vec<usize> = inst.sets.iter().map(PackingSet::weight).collect();
        w.sort_unstable();
        assert_eq!(w, vec![3, 3, 3, 3, 4]);
        let dummies: Vec<i64> = inst.sets.iter().filter_map(|s| s.dummy).collect();
        assert_eq!(dummies, vec![-1, -2, -3, -4]);
        for mode in [PackingMode::Greedy, PackingMode::LocalSearch, PackingMode::Exact] {
            let s = approx_set_packing(&inst, mode, &Caps::default()).unwrap();
            assert_eq!(s.weight, 4);
            assert_eq!(rooted_set_packing(&inst, mode).unwrap().weight, 4);
        }
    }

    #[test]
    fn trees_have_empty_instances() {
        let p = Graph::connected(5, (1..5).map(|i| (i - 1, i))).unwrap();
        let inst = build_sp_instance(&p).unwrap();
        assert!(inst.sets.is_empty());
        assert_eq!(exact_set_packing(&inst, &Caps::default()).unwrap().weight, 0);
    }

    #[test]
    fn two_cycles_sharing_a_vertex() {
        // cycles 0-1-2-3 and 3-4-5-6 share vertex 3
        let g = Graph::connected(7, [(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5), (5, 6), (6, 3)])
            .unwrap();
        let inst = build_sp_instance(&g).unwrap();
        assert_eq!(inst.sets.len(), 10);
        let exact = exact_set_packing(&inst, &Caps::default()).unwrap();
        assert_eq!(exact.weight, 7);
        let rooted = rooted_set_packing(&inst, PackingMode::Exact).unwrap();
        assert_eq!(rooted.weight, 7);
        assert!(inst.is_rooted(&rooted.chosen));
        let small = Caps { packing_max_sets: 3, ..Caps::default() };
        assert_eq!(exact_set_packing(&inst, &small).unwrap().weight, 7);
    }

    #[test]
    fn dependency_cycles_are_not_rooted() {
        // K_{2,4}: parts {0,1} and {2,3,4,5}
        let g = Graph::connected(6, [(0, 2), (0, 3), (0, 4), (0, 5), (1, 2), (1, 3), (1, 4), (1, 5)])
            .unwrap();
        let inst = build_sp_instance(&g).unwrap();
        let find = |cycle: [usize; 4], r: usize| {
            inst.sets
                .iter()
                .position(|s| s.origin == Origin::Cycle(cycle) && s.replaced == Some(r))
                .unwrap()
        };
        // 0-2-1-3 without 1 and 0-4-1-5 without 0
        let a = find([0, 2, 1, 3], 1);
        let b = find([0, 4, 1, 5], 0);
        assert!(inst.is_disjoint(&[a, b]));
        assert!(!inst.is_rooted(&[a, b]));
        assert_eq!(exact_set_packing(&inst, &Caps::default()).unwrap().weight, 6);
        let rooted = rooted_set_packing(&inst, PackingMode::Exact).unwrap();
        assert_eq!(rooted.weight, 4);
    }
}

//! Benchmark sweeps. Trial `i` of a sweep seeded with `s` draws its instance
//! from its own generator seeded with `s + i`, so single rows can be replayed
//! and trials can run in parallel without changing the output.

use std::time::Instant;

use clap::ValueEnum;
use rand::Rng;
use rayon::prelude::*;

use khwp::generate::{random_graph, random_hypergraph, random_tree, rng};
use khwp::graph::tree_diameter;
use khwp::hyper::{build_lstar, exact_hyper_walk, solve_khwp_hypergraph};
use khwp::oracle::exact_hk;
use khwp::packing::{build_sp_instance, exact_set_packing, PackingMode};
use khwp::tree::{k_rhwp_tree, one_hwp_tree};
use khwp::two_agent::{alg2, simple_3approx};
use khwp::walk::{rhwp_lower_bound, validate_walk};
use khwp::{Caps, Error, Graph, Result, TransitionWalk};

use crate::record::{seed_label, BenchRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// One agent on random trees; length must equal 2(n-1) - diameter.
    TreeOptimality,
    /// `k` agents with single-vertex steps on random trees; length must
    /// equal the lower bound.
    TreeRestricted,
    /// Both two-agent algorithms on random connected graphs.
    TwoAgent,
    /// Random uniform hypergraphs.
    Hypergraph,
}

#[derive(Debug, Clone)]
pub struct SweepParams {
    pub suite: Suite,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub k: usize,
    pub p: f64,
    pub m: Option<usize>,
    pub oracle: bool,
}

#[derive(Debug, Default)]
pub struct SweepOutcome {
    pub records: Vec<BenchRecord>,
    /// Instances where the odd-node bound of the contracted tree failed.
    pub odd_bound_breaches: Vec<String>,
}

struct Trial<'a> {
    params: &'a SweepParams,
    caps: &'a Caps,
    id: String,
    seed: u64,
}

impl Trial<'_> {
    fn record(&self, g_nm: (usize, usize), k: usize, algo: &str, len: usize, start: Instant) -> BenchRecord {
        BenchRecord {
            id: self.id.clone(),
            n: g_nm.0,
            m: g_nm.1,
            k,
            algo: algo.into(),
            len,
            oracle: None,
            bound: None,
            ms: (start.elapsed().as_secs_f64() * 1e6).round() / 1e3,
            seed: seed_label(Some(self.seed)),
        }
    }

    fn oracle_fits(&self, n: usize, k: usize) -> bool {
        self.params.oracle && n <= self.caps.oracle_max_n && k <= self.caps.oracle_max_k
    }
}

fn check_walk(g: &Graph, w: &TransitionWalk, id: &str) -> Result<()> {
    let report = validate_walk(g, w);
    if report.is_valid_spanning() {
        Ok(())
    } else {
        Err(Error::Invariant(format!("{id}: emitted walk is not a valid spanning walk")))
    }
}

fn size<R: Rng>(lo: usize, hi: usize, r: &mut R) -> usize {
    r.gen_range(lo..=hi.max(lo))
}

fn tree_optimality(t: &Trial) -> Result<SweepOutcome> {
    let mut r = rng(t.seed);
    let g = random_tree(size(2, t.params.n, &mut r), &mut r)?;
    let start = Instant::now();
    let walk = one_hwp_tree(&g)?;
    check_walk(&g, &TransitionWalk::from_vertices(&walk), &t.id)?;
    let mut rec = t.record((g.n(), g.m()), 1, "tree1", walk.len() - 1, start);
    let bound = 2 * (g.n() - 1) - tree_diameter(&g)?.0;
    rec.bound = Some(bound);
    if rec.len != bound {
        return Err(Error::Invariant(format!("{}: length {} but 2(n-1)-diam = {bound}", t.id, rec.len)));
    }
    if t.oracle_fits(g.n(), 1) {
        rec.oracle = Some(exact_hk(&g, 1, false, t.caps)?.length);
    }
    Ok(SweepOutcome { records: vec![rec], ..Default::default() })
}

fn tree_restricted(t: &Trial) -> Result<SweepOutcome> {
    let k = t.params.k;
    let mut r = rng(t.seed);
    let g = random_tree(size(k, t.params.n, &mut r), &mut r)?;
    let start = Instant::now();
    let walk = k_rhwp_tree(&g, k)?;
    check_walk(&g, &walk, &t.id)?;
    let mut rec = t.record((g.n(), g.m()), k, "treek", walk.len(), start);
    let bound = rhwp_lower_bound(&g, k)?;
    rec.bound = Some(bound);
    if rec.len != bound {
        return Err(Error::Invariant(format!("{}: length {} but lower bound {bound}", t.id, rec.len)));
    }
    if t.oracle_fits(g.n(), k) {
        rec.oracle = Some(exact_hk(&g, k, true, t.caps)?.length);
    }
    Ok(SweepOutcome { records: vec![rec], ..Default::default() })
}

fn two_agent(t: &Trial) -> Result<SweepOutcome> {
    let mut r = rng(t.seed);
    let g = random_graph(size(3, t.params.n, &mut r), t.params.p, &mut r)?;
    let nm = (g.n(), g.m());
    let oracle = if t.oracle_fits(g.n(), 2) { Some(exact_hk(&g, 2, false, t.caps)?.length) } else { None };
    // packing lower bound n - w/2 - 2, w the optimum packing weight; the
    // tighter n - w/2 - 1 already fails on paths
    let inst = build_sp_instance(&g)?;
    let bound = exact_set_packing(&inst, t.caps)
        .ok()
        .map(|s| (2 * g.n()).saturating_sub(s.weight + 4).div_ceil(2));

    let start = Instant::now();
    let simple = simple_3approx(&g, t.caps)?;
    check_walk(&g, &simple, &t.id)?;
    let mut a = t.record(nm, 2, "simple", simple.len(), start);

    let start = Instant::now();
    let out = alg2(&g, PackingMode::Exact, t.caps)?;
    check_walk(&g, &out.walk, &t.id)?;
    let mut b = t.record(nm, 2, "alg2", out.walk.len(), start);

    for rec in [&mut a, &mut b] {
        rec.oracle = oracle;
        rec.bound = bound;
    }
    let odd_bound_breaches =
        if out.diagnostics.odd_bound_holds() { Vec::new() } else { vec![t.id.clone()] };
    Ok(SweepOutcome { records: vec![a, b], odd_bound_breaches })
}

fn hypergraph(t: &Trial) -> Result<SweepOutcome> {
    let k = t.params.k;
    let mut r = rng(t.seed);
    let n = size(k + 1, t.params.n, &mut r);
    let m = t.params.m.unwrap_or(n);
    let h = random_hypergraph(n, m, k, &mut r)?;
    let start = Instant::now();
    let w = solve_khwp_hypergraph(&h)?;
    let mut rec = t.record((h.n(), h.m()), k, "hyper", w.len(), start);
    rec.bound = Some(2 * w.cover.len());
    if t.params.oracle && h.n() <= t.caps.oracle_max_n {
        let l = build_lstar(&h)?;
        rec.oracle = Some(exact_hyper_walk(&h, &l, t.caps)?.len() - 1);
    }
    Ok(SweepOutcome { records: vec![rec], ..Default::default() })
}

pub fn run_sweep(params: &SweepParams, caps: &Caps) -> Result<SweepOutcome> {
    let run = match params.suite {
        Suite::TreeOptimality => tree_optimality,
        Suite::TreeRestricted => tree_restricted,
        Suite::TwoAgent => two_agent,
        Suite::Hypergraph => hypergraph,
    };
    let name = params.suite.to_possible_value().expect("named suite").get_name().to_string();
    let parts: Vec<SweepOutcome> = (0..params.trials)
        .into_par_iter()
        .map(|i| {
            let trial = Trial {
                params,
                caps,
                id: format!("{name}-{i}"),
                seed: params.seed.wrapping_add(i as u64),
            };
            run(&trial)
        })
        .collect::<Result<_>>()?;
    let mut out = SweepOutcome::default();
    for p in parts {
        out.records.extend(p.records);
        out.odd_bound_breaches.extend(p.odd_bound_breaches);
    }
    Ok(out)
}

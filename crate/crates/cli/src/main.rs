mod bench;
mod config;
mod record;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use khwp::generate::{grid, hypergraph_text, random_graph, random_hypergraph, random_tree, rng};
use khwp::graph::{load_graph, tree_diameter};
use khwp::hyper::{build_lstar, exact_hyper_walk, load_hypergraph, solve_khwp_hypergraph, validate_hyper_walk};
use khwp::oracle::exact_hk;
use khwp::packing::PackingMode;
use khwp::tree::{k_rhwp_tree, one_hwp_tree};
use khwp::two_agent::{alg2, simple_3approx};
use khwp::walk::{rhwp_lower_bound, validate_walk};
use khwp::{Caps, Error, Graph, Result, TransitionWalk};

use bench::{run_sweep, Suite, SweepParams};
use record::{append_csv, seed_label, to_csv, BenchRecord};

#[derive(Parser)]
#[command(name = "khwp", version, about = "Spanning walks for teams of connected agents")]
struct Cli {
    /// Cap overrides (`key = value` lines)
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Tree,
    RandomGraph,
    Grid,
    Hypergraph,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Simple,
    Alg2,
}

#[derive(Clone, Copy, ValueEnum)]
enum Packing {
    Greedy,
    Local,
    Exact,
}

#[derive(clap::Args)]
struct Output {
    /// Walk file (stdout when omitted)
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// CSV file the result row is appended to (stderr when omitted)
    #[arg(long)]
    record: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random instance
    Generate {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 10)]
        n: usize,
        /// Edge probability for random graphs
        #[arg(long, default_value_t = 0.4)]
        p: f64,
        /// Hyperedge count
        #[arg(long)]
        m: Option<usize>,
        /// Hyperedge arity
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        rows: usize,
        #[arg(long, default_value_t = 3)]
        cols: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Optimal single-agent walk on a tree
    Solve1 {
        graph: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Walk of k agents moving one vertex at a time on a tree
    Solvek {
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Two-agent walk on a connected graph
    Solve2 {
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "alg2")]
        mode: Mode,
        #[arg(long, value_enum, default_value = "local")]
        packing: Packing,
        /// Also compute the exact optimum
        #[arg(long)]
        oracle: bool,
        /// CSV file receiving the construction diagnostics
        #[arg(long)]
        diagnostics: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Covering walk over the hyperedges of a uniform hypergraph
    Solveh {
        hypergraph: PathBuf,
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Exact optimum by exhaustive search
    Oracle {
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        /// Allow only steps that bring exactly one new vertex
        #[arg(long)]
        restricted: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Exit 0 iff the walk is valid and visits every vertex
    Validate { graph: PathBuf, walk: PathBuf },
    /// Run a seeded sweep and append CSV rows
    Bench {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 12)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 0.4)]
        p: f64,
        #[arg(long)]
        m: Option<usize>,
        /// Compute exact optima where the caps allow
        #[arg(long)]
        oracle: bool,
        /// CSV file (stdout when omitted)
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::InvalidArgument(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::InvalidArgument(e.to_string())
}

fn emit_record(output: &Output, rec: BenchRecord) -> Result<()> {
    match &output.record {
        Some(p) => append_csv(p, &[rec]).map_err(io_err),
        None => {
            eprint!("{}", to_csv(&[rec], true));
            Ok(())
        }
    }
}

fn record(id: &Path, g: (usize, usize), k: usize, algo: &str, len: usize, start: Instant) -> BenchRecord {
    BenchRecord {
        id: id.display().to_string(),
        n: g.0,
        m: g.1,
        k,
        algo: algo.into(),
        len,
        oracle: None,
        bound: None,
        ms: (start.elapsed().as_secs_f64() * 1e6).round() / 1e3,
        seed: seed_label(None),
    }
}

/// Re-validates a solver's walk before anything is reported.
fn checked(g: &Graph, w: &TransitionWalk) -> Result<()> {
    let report = validate_walk(g, w);
    if report.is_valid_spanning() {
        Ok(())
    } else {
        Err(Error::Invariant(format!("solver produced an invalid walk: {:?}", report.violation)))
    }
}

fn finish_walk(g: &Graph, w: &TransitionWalk, output: &Output, rec: BenchRecord) -> Result<()> {
    checked(g, w)?;
    write_or_print(output.out.as_deref(), &w.to_text(true))?;
    emit_record(output, rec)
}

fn run(cli: Cli) -> Result<()> {
    let caps = match &cli.config {
        Some(p) => config::load_caps(p)?,
        None => Caps::default(),
    };
    match cli.command {
        Command::Generate { kind, n, p, m, k, rows, cols, seed, out } => {
            let mut r = rng(seed);
            let text = match kind {
                Kind::Tree => random_tree(n, &mut r)?.to_edge_list(),
                Kind::RandomGraph => random_graph(n, p, &mut r)?.to_edge_list(),
                Kind::Grid => grid(rows, cols)?.to_edge_list(),
                Kind::Hypergraph => hypergraph_text(&random_hypergraph(n, m.unwrap_or(n), k, &mut r)?),
            };
            let text = format!("# {} seed {}\n{text}", kind.to_possible_value().unwrap().get_name(), seed_label(Some(seed)));
            write_or_print(out.as_deref(), &text)
        }
        Command::Solve1 { graph, output } => {
            let g = load_graph(&read(&graph)?)?;
            let start = Instant::now();
            let walk = TransitionWalk::from_vertices(&one_hwp_tree(&g)?);
            let mut rec = record(&graph, (g.n(), g.m()), 1, "tree1", walk.len(), start);
            rec.bound = Some(2 * (g.n() - 1) - tree_diameter(&g)?.0);
            finish_walk(&g, &walk, &output, rec)
        }
        Command::Solvek { graph, k, output } => {
            let g = load_graph(&read(&graph)?)?;
            let start = Instant::now();
            let walk = k_rhwp_tree(&g, k)?;
            let mut rec = record(&graph, (g.n(), g.m()), k, "treek", walk.len(), start);
            rec.bound = Some(rhwp_lower_bound(&g, k)?);
            finish_walk(&g, &walk, &output, rec)
        }
        Command::Solve2 { graph, mode, packing, oracle, diagnostics, output } => {
            let g = load_graph(&read(&graph)?)?;
            let start = Instant::now();
            let (walk, diag) = match mode {
                Mode::Simple => (simple_3approx(&g, &caps)?, None),
                Mode::Alg2 => {
                    let mode = match packing {
                        Packing::Greedy => PackingMode::Greedy,
                        Packing::Local => PackingMode::LocalSearch,
                        Packing::Exact => PackingMode::Exact,
                    };
                    let out = alg2(&g, mode, &caps)?;
                    (out.walk, Some(out.diagnostics))
                }
            };
            let algo = match mode {
                Mode::Simple => "simple",
                Mode::Alg2 => "alg2",
            };
            let mut rec = record(&graph, (g.n(), g.m()), 2, algo, walk.len(), start);
            if oracle {
                rec.oracle = Some(exact_hk(&g, 2, false, &caps)?.length);
            }
            let h2 = rec.oracle;
            finish_walk(&g, &walk, &output, rec)?;
            if let Some(d) = diag {
                let row = format!(
                    "n,m,c4,grids,sol_weight,tr_len,match_cost,walk_len,oracle_h2\n{},{},{},{},{},{},{},{},{}\n",
                    d.n,
                    d.m,
                    d.cycles,
                    d.grids,
                    d.sol_weight,
                    d.tr_len,
                    d.match_cost,
                    d.walk_len,
                    h2.map_or(String::new(), |h| h.to_string())
                );
                match diagnostics {
                    Some(p) => std::fs::write(&p, row).map_err(io_err)?,
                    None => eprint!("{row}"),
                }
                if !d.odd_bound_holds() {
                    return Err(Error::Invariant(format!(
                        "contracted tree has {} odd contracted nodes, bound {}",
                        d.odd_contracted, d.odd_contracted_bound
                    )));
                }
            }
            Ok(())
        }
        Command::Solveh { hypergraph, oracle, output } => {
            let h = load_hypergraph(&read(&hypergraph)?)?;
            let start = Instant::now();
            let w = solve_khwp_hypergraph(&h)?;
            let mut rec = record(&hypergraph, (h.n(), h.m()), h.k(), "hyper", w.len(), start);
            let l = build_lstar(&h)?;
            let report = validate_hyper_walk(&h, &l, &w.edges);
            if !(report.valid && report.covering) {
                return Err(Error::Invariant("solver produced an invalid hyperedge walk".into()));
            }
            rec.bound = Some(2 * w.cover.len());
            if oracle {
                rec.oracle = Some(exact_hyper_walk(&h, &l, &caps)?.len() - 1);
            }
            let mut text = w.to_text(h.k(), true);
            let cover: Vec<String> = w.cover.iter().map(|e| format!("e{e}")).collect();
            text.push_str(&format!("cover {} : {}\n", w.cover.len(), cover.join(" ")));
            write_or_print(output.out.as_deref(), &text)?;
            emit_record(&output, rec)
        }
        Command::Oracle { graph, k, restricted, out } => {
            let g = load_graph(&read(&graph)?)?;
            let res = exact_hk(&g, k, restricted, &caps)?;
            checked(&g, &res.walk)?;
            let text = format!("{}optimal {}\n", res.walk.to_text(true), res.length);
            write_or_print(out.as_deref(), &text)
        }
        Command::Validate { graph, walk } => {
            let g = load_graph(&read(&graph)?)?;
            let w = TransitionWalk::parse(&read(&walk)?)?;
            let report = validate_walk(&g, &w);
            println!("length {} spanning {}", report.length, u8::from(report.spanning));
            match report.violation {
                Some(v) => Err(Error::InvalidArgument(format!("invalid walk: {v:?}"))),
                None if !report.spanning => Err(Error::InvalidArgument("walk does not visit every vertex".into())),
                None => Ok(()),
            }
        }
        Command::Bench { suite, n, trials, seed, k, p, m, oracle, out } => {
            let params = SweepParams { suite, n, trials, seed, k, p, m, oracle };
            let outcome = run_sweep(&params, &caps)?;
            match out {
                Some(path) => append_csv(&path, &outcome.records).map_err(io_err)?,
                None => print!("{}", to_csv(&outcome.records, true)),
            }
            if !outcome.odd_bound_breaches.is_empty() {
                return Err(Error::Invariant(format!(
                    "odd contracted node bound exceeded on {}",
                    outcome.odd_bound_breaches.join(" ")
                )));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

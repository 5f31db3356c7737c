//! Command-line front end: every library operation as a subcommand,
//! with aligned tables for reading and stable JSON for tooling.
//!
//! Exit codes: 0 success, 1 a check reported FAIL, 2 usage or parse
//! error, 3 solver stopped by its node budget.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use turanlab::cover::{cover_json, solve_exact, CoverInstance, DEFAULT_NODE_BUDGET};
use turanlab::graph::{
    brute_force_max_clique, brute_force_max_triangle_free, mantel_bound, parse_edge_list, Graph,
};
use turanlab::montecarlo::{
    estimate_edge_probability, estimate_prefix_event, estimate_sequential_draw, Estimate,
};
use turanlab::shift::{clique_lower_bound, run_to_clique, uniformize_on_support, Distribution};
use turanlab::sperner::{is_antichain, lym_sum, max_antichain_bruteforce, sperner_bound};
use turanlab::subset::Subset;
use turanlab::verify::{run_all, VerifyOptions};
use turanlab::{Rational, Seed, SubsetFamily};

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "turanlab",
    version,
    about = "Exact and randomized tools for triangle-free edge maxima, antichains, and covering numbers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format: tables for humans, JSON for tooling.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Seed for every randomized step; identical seeds reproduce
    /// identical output byte for byte.
    #[arg(long, global = true, env = "TURANLAB_SEED", default_value_t = 0xC0FFEE)]
    seed: u64,

    /// Worker threads (default: all cores). Results never depend on
    /// this.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Triangle-free edge maximum: the floor(n^2/4) formula against
    /// exhaustive search, with the bipartite witness.
    Mantel {
        /// Vertex count, 1..=7 (exhaustive search range).
        #[arg(long)]
        n: usize,
    },
    /// Run the mass-shifting dynamics on an edge-list file and report
    /// the clique certificate.
    Shift {
        /// Edge-list file: first line "n m", then m lines "u v".
        graph: PathBuf,
        /// Random restarts for the clique lower bound.
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
        restarts: u64,
    },
    /// Solve a covering instance exactly: the fewest l-subsets
    /// meeting every k-subset of an n-set.
    Turan {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
        /// Search-node budget; exceeding it returns the incumbent
        /// with optimal=false and exit code 3.
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Check a subset family against the antichain bound, or run the
    /// exhaustive oracle.
    Sperner {
        /// Family file: first line "n", then one subset per line as
        /// space-separated elements (empty line = empty set).
        family: Option<PathBuf>,
        /// Oracle mode: exhaustively confirm the maximum antichain
        /// size on a ground set of this size (1..=4).
        #[arg(long, conflicts_with = "family")]
        oracle: Option<usize>,
    },
    /// Monte Carlo estimators, each printed next to its exact target.
    Estimate {
        #[command(subcommand)]
        target: EstimateTarget,
    },
    /// Run every verification suite and print one PASS/FAIL line per
    /// suite.
    VerifyAll {
        /// Largest ground-set size the suites touch (1..=7).
        #[arg(long, default_value_t = 5)]
        max_n: usize,
    },
}

#[derive(Subcommand)]
enum EstimateTarget {
    /// Probability that two vertices drawn uniformly and
    /// independently span an edge of the given graph.
    Edge {
        graph: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
    },
    /// Probability that a uniform random l-subset is a member of the
    /// given family.
    Draw {
        family: PathBuf,
        /// The k of the covering instance (l <= k <= n).
        #[arg(long)]
        k: usize,
        /// Block size; defaults to the size of the family's first
        /// member (0 for an empty family).
        #[arg(long)]
        l: Option<usize>,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
    },
    /// Probability that a random permutation of 0..n starts with
    /// exactly the given elements.
    Prefix {
        #[arg(long)]
        n: usize,
        /// Comma-separated elements, e.g. 0,1; omit for the empty
        /// set.
        #[arg(long, value_delimiter = ',')]
        elements: Vec<usize>,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
    },
}

/// One command's outcome: both renderings plus the exit code.
struct Report {
    json: Value,
    table: String,
    exit: u8,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        // Only fails if a global pool already exists; keep going.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    let seed = Seed::new(cli.seed);
    let outcome = match cli.command {
        Command::Mantel { n } => run_mantel(n),
        Command::Shift { graph, restarts } => run_shift(&graph, restarts, seed),
        Command::Turan { n, k, l, budget } => run_turan(n, k, l, budget),
        Command::Sperner { family, oracle } => run_sperner(family.as_deref(), oracle),
        Command::Estimate { target } => run_estimate(target, seed),
        Command::VerifyAll { max_n } => run_verify_all(max_n, seed),
    };
    match outcome {
        Ok(report) => {
            match cli.format {
                Format::Json => println!("{}", report.json),
                Format::Table => print!("{}", report.table),
            }
            ExitCode::from(report.exit)
        }
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn read_file(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn run_mantel(n: usize) -> Result<Report, String> {
    if !(1..=7).contains(&n) {
        return Err("--n must be between 1 and 7 (exhaustive search range)".into());
    }
    let bound = mantel_bound(n);
    let brute = brute_force_max_triangle_free(n).map_err(|e| e.to_string())?;
    let witness = Graph::complete_bipartite(n)
        .map_err(|e| e.to_string())?
        .edge_count();
    let pass = brute == bound && witness == bound;
    let json = json!({
        "n": n,
        "bound": bound,
        "brute_force": brute,
        "witness_edges": witness,
        "pass": pass,
    });
    let mut table = String::new();
    let _ = writeln!(table, "triangle-free edge maximum on {n} vertices");
    let _ = writeln!(table, "  floor(n^2/4):      {bound}");
    let _ = writeln!(table, "  exhaustive search: {brute}");
    let _ = writeln!(table, "  bipartite witness: {witness} edges");
    let _ = writeln!(table, "  verdict:           {}", verdict(pass));
    Ok(Report {
        json,
        table,
        exit: if pass { 0 } else { EXIT_CHECK_FAILED },
    })
}

fn run_shift(path: &Path, restarts: u64, seed: Seed) -> Result<Report, String> {
    let g = parse_edge_list(&read_file(path)?)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    let n = g.n();
    if n == 0 {
        return Err("the dynamics need at least one vertex".into());
    }
    let uniform = Distribution::uniform(n).map_err(|e| e.to_string())?;
    let start_value = turanlab::shift::edge_probability(&g, &uniform).map_err(|e| e.to_string())?;
    let trace = run_to_clique(&g, &uniform).map_err(|e| e.to_string())?;
    let (_, value) =
        uniformize_on_support(&g, trace.final_distribution()).map_err(|e| e.to_string())?;
    let support = trace.final_distribution().support();
    let best = clique_lower_bound(&g, restarts, seed)
        .map_err(|e| e.to_string())?
        .max(support.len());
    let omega = if n <= 20 {
        Some(brute_force_max_clique(&g).map_err(|e| e.to_string())?)
    } else {
        None
    };
    let json = json!({
        "n": n,
        "edges": g.edge_count(),
        "start_value": start_value.to_string(),
        "trace": trace.to_json(),
        "final_support": support,
        "support_size": support.len(),
        "value": value.to_string(),
        "restarts": restarts,
        "best_clique": best,
        "omega": omega,
        "tight": omega.map(|w| best == w),
    });
    let mut table = String::new();
    let _ = writeln!(
        table,
        "shifting dynamics on {} ({n} vertices, {} edges)",
        path.display(),
        g.edge_count()
    );
    let _ = writeln!(table, "  start value:   {start_value}");
    for (i, step) in trace.steps().iter().enumerate() {
        let _ = writeln!(
            table,
            "  step {:>2}:       {} -> {}  gain {}",
            i + 1,
            step.donor,
            step.receiver,
            step.gain
        );
    }
    let _ = writeln!(
        table,
        "  final support: {{{}}}",
        support
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    );
    let _ = writeln!(table, "  value 1-1/|Q|: {value}");
    let _ = writeln!(table, "  best clique:   {best} ({restarts} restarts)");
    match omega {
        Some(w) => {
            let _ = writeln!(
                table,
                "  omega:         {w} ({})",
                if best == w { "reached" } else { "not reached" }
            );
        }
        None => {
            let _ = writeln!(table, "  omega:         skipped (n > 20)");
        }
    }
    Ok(Report {
        json,
        table,
        exit: 0,
    })
}

fn run_turan(n: usize, k: usize, l: usize, budget: u64) -> Result<Report, String> {
    let inst = CoverInstance::new(n, k, l).map_err(|e| e.to_string())?;
    let result = solve_exact(inst, budget).map_err(|e| e.to_string())?;
    let json = cover_json(inst, &result);
    let (bound, ceiling) = turanlab::cover::turan_lower_bound(inst);
    let mut table = String::new();
    let _ = writeln!(table, "covering number T({n},{k},{l})");
    let _ = writeln!(table, "  size:        {}", result.size);
    let _ = writeln!(table, "  lower bound: {bound} (ceil {ceiling})");
    let _ = writeln!(
        table,
        "  optimal:     {}",
        if result.optimal {
            "yes"
        } else {
            "no (node budget exhausted)"
        }
    );
    let _ = writeln!(table, "  nodes:       {}", result.nodes_explored);
    for block in result.family.iter() {
        let _ = writeln!(table, "  block:       {block}");
    }
    Ok(Report {
        json,
        table,
        exit: if result.optimal { 0 } else { EXIT_BUDGET },
    })
}

fn run_sperner(family: Option<&Path>, oracle: Option<usize>) -> Result<Report, String> {
    match (family, oracle) {
        (Some(path), None) => {
            let f = SubsetFamily::parse(&read_file(path)?)
                .map_err(|e| format!("{}: {e}", path.display()))?;
            let n = f.ground_size();
            let antichain = is_antichain(&f);
            let lym = lym_sum(&f);
            let lym_ok = lym <= Rational::one();
            let bound: u64 = sperner_bound(n)
                .to_string()
                .parse()
                .expect("C(n, n/2) fits u64 for n <= 64");
            let within = (f.len() as u64) <= bound;
            let json = json!({
                "mode": "family",
                "n": n,
                "size": f.len(),
                "antichain": antichain,
                "lym_sum": lym.to_string(),
                "lym_at_most_one": lym_ok,
                "bound": bound,
                "within_bound": within,
            });
            let mut table = String::new();
            let _ = writeln!(
                table,
                "family of {} subsets over ground set of {n}",
                f.len()
            );
            let _ = writeln!(table, "  antichain:    {}", antichain);
            let _ = writeln!(table, "  LYM sum:      {lym} (<= 1: {lym_ok})");
            let _ = writeln!(table, "  bound:        C(n, n/2) = {bound}");
            let _ = writeln!(table, "  within bound: {within}");
            Ok(Report {
                json,
                table,
                exit: 0,
            })
        }
        (None, Some(n)) => {
            if !(1..=4).contains(&n) {
                return Err("--oracle takes n between 1 and 4 (exhaustive range)".into());
            }
            let brute = max_antichain_bruteforce(n).map_err(|e| e.to_string())?;
            let bound: u64 = sperner_bound(n).to_string().parse().expect("tiny");
            let pass = brute as u64 == bound;
            let json = json!({
                "mode": "oracle",
                "n": n,
                "bound": bound,
                "brute_force": brute,
                "pass": pass,
            });
            let mut table = String::new();
            let _ = writeln!(table, "maximum antichain on a ground set of {n}");
            let _ = writeln!(table, "  C(n, n/2):         {bound}");
            let _ = writeln!(table, "  exhaustive search: {brute}");
            let _ = writeln!(table, "  verdict:           {}", verdict(pass));
            Ok(Report {
                json,
                table,
                exit: if pass { 0 } else { EXIT_CHECK_FAILED },
            })
        }
        (None, None) => Err("provide a family file or --oracle N".into()),
        (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
    }
}

fn estimate_report(case: &str, est: &Estimate, context: Value) -> Report {
    let mut json = est.to_json();
    if let Value::Object(map) = &mut json {
        map.insert("case".into(), json!(case));
        if let Value::Object(extra) = context {
            map.extend(extra);
        }
    }
    let mut table = String::new();
    let _ = writeln!(table, "{case} estimate");
    let _ = writeln!(table, "  estimate: {}", est.value);
    let _ = writeln!(table, "  stderr:   {}", est.stderr);
    let _ = writeln!(table, "  samples:  {}", est.samples);
    let _ = writeln!(table, "  seed:     {}", est.seed.value());
    if let Some(exact) = &est.exact {
        let _ = writeln!(table, "  exact:    {exact}");
        let _ = writeln!(
            table,
            "  within 3 sigma: {}",
            if est.within_3_sigma() == Some(true) {
                "yes"
            } else {
                "no"
            }
        );
    }
    Report {
        json,
        table,
        exit: 0,
    }
}

fn run_estimate(target: EstimateTarget, seed: Seed) -> Result<Report, String> {
    match target {
        EstimateTarget::Edge { graph, samples } => {
            let g = parse_edge_list(&read_file(&graph)?)
                .map_err(|e| format!("{}: {e}", graph.display()))?;
            let d = Distribution::uniform(g.n())
                .map_err(|_| "the graph needs at least one vertex".to_string())?;
            let est =
                estimate_edge_probability(&g, &d, samples, seed).map_err(|e| e.to_string())?;
            Ok(estimate_report(
                "edge-hit",
                &est,
                json!({"n": g.n(), "edges": g.edge_count()}),
            ))
        }
        EstimateTarget::Draw {
            family,
            k,
            l,
            samples,
        } => {
            let f = SubsetFamily::parse(&read_file(&family)?)
                .map_err(|e| format!("{}: {e}", family.display()))?;
            let block = l.unwrap_or_else(|| f.members().first().map_or(0, |s| s.len()));
            let inst =
                CoverInstance::new(f.ground_size(), k, block).map_err(|e| e.to_string())?;
            let est =
                estimate_sequential_draw(inst, &f, samples, seed).map_err(|e| e.to_string())?;
            Ok(estimate_report(
                "sequential-draw",
                &est,
                json!({"n": inst.n(), "k": k, "l": block, "family_size": f.len()}),
            ))
        }
        EstimateTarget::Prefix {
            n,
            elements,
            samples,
        } => {
            let subset = Subset::from_elements(n, &elements).map_err(|e| e.to_string())?;
            let est = estimate_prefix_event(subset, samples, seed).map_err(|e| e.to_string())?;
            Ok(estimate_report(
                "prefix-event",
                &est,
                json!({"n": n, "subset": subset.to_vec()}),
            ))
        }
    }
}

fn run_verify_all(max_n: usize, seed: Seed) -> Result<Report, String> {
    if !(1..=7).contains(&max_n) {
        return Err("--max-n must be between 1 and 7 (exhaustive oracle range)".into());
    }
    let opts = VerifyOptions {
        max_n,
        seed,
        ..VerifyOptions::default()
    };
    let reports = run_all(&opts);
    let pass = reports.iter().all(|r| r.pass);
    let suites: Vec<Value> = reports
        .iter()
        .map(|r| json!({"name": r.name, "pass": r.pass, "detail": r.detail}))
        .collect();
    let json = json!({
        "max_n": max_n,
        "seed": seed.value(),
        "suites": suites,
        "pass": pass,
    });
    let mut table = String::new();
    let _ = writeln!(table, "verification suites (max_n = {max_n}, seed = {})", seed.value());
    for r in &reports {
        let _ = writeln!(table, "  [{}] {} — {}", verdict(r.pass), r.name, r.detail);
    }
    let passed = reports.iter().filter(|r| r.pass).count();
    let _ = writeln!(table, "{passed}/{} suites passed", reports.len());
    Ok(Report {
        json,
        table,
        exit: if pass { 0 } else { EXIT_CHECK_FAILED },
    })
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

//! `ifam`: command-line front end for intersecting-family computations.

mod commands;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(name = "ifam", version, about = "Intersecting profiles, compressions and extremal search")]
struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Cap the number of worker threads.
    #[arg(long, global = true, value_name = "K")]
    jobs: Option<usize>,
    /// Record wall time in the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Intersecting profile c_0..c_N of a family file.
    Profile(ProfileArgs),
    /// Probability that a p-random subfamily is intersecting.
    Prob(ProbArgs),
    /// Apply one compression to a family file.
    Compress(CompressArgs),
    /// Exhaustive search for families maximising c_s.
    Search(SearchArgs),
    /// Layer-two graphs: quasi constructions, census, max P2, crossover, bound.
    Layer2(Layer2Args),
    /// Build a named extremal family.
    Construct(ConstructArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct FileArgs {
    /// Family file (`n <k>` header, one set per line).
    file: std::path::PathBuf,
    /// Accept the empty set as a member.
    #[arg(long)]
    allow_empty: bool,
}

#[derive(Debug, Args)]
struct ProfileArgs {
    #[command(flatten)]
    input: FileArgs,
    /// Report only c_S.
    #[arg(long)]
    s: Option<usize>,
}

#[derive(Debug, Args)]
struct ProbArgs {
    #[command(flatten)]
    input: FileArgs,
    /// Selection probability as `num/den` or an integer.
    #[arg(long)]
    p: String,
    /// Estimate with this many Monte Carlo trials instead of exactly.
    #[arg(long, value_name = "TRIALS")]
    mc: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct CompressArgs {
    #[command(flatten)]
    input: FileArgs,
    /// `ij:i,j`, `up:src=1 2;tgt=1 2 3` or `uvf:U=1,5;v=6;f=1-5`.
    #[arg(long)]
    op: String,
    /// Also report c_s before and after for every s; exit 1 if any decreases.
    #[arg(long)]
    check_monotone: bool,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long)]
    n: u32,
    /// Family size.
    #[arg(long = "N", value_name = "SIZE")]
    size: usize,
    /// Comma-separated subfamily sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    s: Vec<usize>,
    /// `none`, `upset-only`, `layers:R` or `layer:R`.
    #[arg(long, default_value = "none")]
    restrict: String,
    /// Largest number of candidate families to scan.
    #[arg(long, default_value_t = ifam_core::search::DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("mode").required(true).args(["kind", "census", "max", "crossover", "bound"])))]
struct Layer2Args {
    #[arg(long)]
    n: u32,
    /// Number of edges.
    #[arg(long)]
    i: Option<usize>,
    /// Build the quasi graph of this kind (`star` or `complete`); needs --i.
    #[arg(long, requires = "i")]
    kind: Option<String>,
    /// Star and triangle census of the 2-sets in a family file.
    #[arg(long, value_name = "FILE")]
    census: Option<std::path::PathBuf>,
    /// Maximum number of intersecting edge pairs over all graphs; needs --i.
    #[arg(long, requires = "i")]
    max: bool,
    /// Intersecting edge pairs of both quasi graphs for every i.
    #[arg(long)]
    crossover: bool,
    /// Exact value of the closing bound at n.
    #[arg(long)]
    bound: bool,
    /// With --bound, sweep every ground size from n to this.
    #[arg(long, requires = "bound", value_name = "M")]
    to: Option<u32>,
}

#[derive(Debug, Args)]
struct ConstructArgs {
    /// theorem1a, theorem1b, construct-even, construct-odd, star-maximal,
    /// quasi-star-layer or quasi-complete-layer.
    #[arg(long)]
    name: String,
    #[arg(long)]
    n: u32,
    /// Family size, where the construction admits a range.
    #[arg(long = "N", value_name = "SIZE")]
    size: Option<u128>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// t-unique, l-strict, l-strict-mid, l-stars, triangle, phi, construct,
    /// minimal or duality.
    #[arg(long)]
    suite: String,
    #[arg(long)]
    n: u32,
    /// Comma-separated subfamily sizes.
    #[arg(long, value_delimiter = ',')]
    s: Vec<usize>,
    #[arg(long = "l", value_name = "ELL")]
    ell: Option<u32>,
    #[arg(long)]
    r: Option<u32>,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// What a command produced.
pub struct Outcome {
    pub report: Value,
    pub text: String,
    /// False when a verification failed.
    pub ok: bool,
}

fn run(cli: &Cli) -> Result<Outcome, String> {
    match &cli.command {
        Command::Profile(a) => commands::profile(&a.input.file, a.input.allow_empty, a.s),
        Command::Prob(a) => commands::prob(&a.input.file, a.input.allow_empty, &a.p, a.mc, a.seed),
        Command::Compress(a) => {
            commands::compress(&a.input.file, a.input.allow_empty, &a.op, a.check_monotone)
        }
        Command::Search(a) => commands::search(a.n, a.size, &a.s, &a.restrict, a.budget),
        Command::Layer2(a) => {
            let mode = if let Some(kind) = &a.kind {
                commands::Layer2Mode::Quasi { i: a.i.expect("required by clap"), kind }
            } else if let Some(path) = &a.census {
                commands::Layer2Mode::Census(path)
            } else if a.max {
                commands::Layer2Mode::Max(a.i.expect("required by clap"))
            } else if a.crossover {
                commands::Layer2Mode::Crossover
            } else {
                commands::Layer2Mode::Bound(a.to.unwrap_or(a.n))
            };
            commands::layer2(a.n, mode)
        }
        Command::Construct(a) => commands::construct(&a.name, a.n, a.size),
        Command::Verify(a) => commands::verify(&a.suite, a.n, &a.s, a.ell, a.r, a.trials, a.seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .expect("thread pool is configured once");
    }
    let start = Instant::now();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let elapsed = start.elapsed();

    let mut out = std::io::stdout().lock();
    // a closed pipe downstream is not an error of ours
    let _ = if cli.json {
        let argv: Vec<String> = std::env::args().skip(1).collect();
        let mut envelope = json!({
            "tool": "ifam",
            "version": env!("CARGO_PKG_VERSION"),
            "argv": argv,
            "report": outcome.report,
        });
        if cli.timing {
            envelope["wall_time_ms"] = json!(elapsed.as_secs_f64() * 1e3);
        }
        writeln!(out, "{}", serde_json::to_string_pretty(&envelope).expect("reports serialize"))
    } else {
        if cli.timing {
            eprintln!("wall time: {:.3} ms", elapsed.as_secs_f64() * 1e3);
        }
        out.write_all(outcome.text.as_bytes())
    };
    if outcome.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

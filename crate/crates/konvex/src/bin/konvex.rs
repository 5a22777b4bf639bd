//! Thin command-line front end: parses flags into a `JobSpec` and
//! delegates to the library. Exit codes: 0 when the outcome matches the
//! fixture's declared truth (or a pure computation succeeds), 1 on an
//! unexpected verdict or suite disagreement, 2 on usage errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use konvex::jobs::{run, JobSpec, OutputFormat};
use konvex::pl::PlFunction;

#[derive(Parser)]
#[command(
    name = "konvex",
    about = "Convex-analysis calculator and property certifier",
    long_about = "Exact conjugate/prox/envelope calculus on piecewise-linear convex functions, \
                  sampled convexity certifiers, and theorem suites over a fixture gallery. \
                  Reports are deterministic for a fixed seed; KONVEX_THREADS caps parallelism."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Target {
    /// Gallery fixture name (see `konvex gallery`).
    #[arg(long)]
    fixture: Option<String>,
    /// Inline JSON function {breakpoints, values, left_tail, right_tail}.
    #[arg(long)]
    inline: Option<String>,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// Seed for all sampling (default 0).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Override the absolute equality tolerance.
    #[arg(long)]
    tol_abs: Option<f64>,
    /// Override the strictness margin.
    #[arg(long)]
    tol_strict: Option<f64>,
    /// Write the report here (atomically) instead of stdout only.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_parser = ["json", "csv"], default_value = "json")]
    format: String,
}

#[derive(Subcommand)]
enum Command {
    /// Exact Fenchel conjugate of a piecewise-linear function.
    Conjugate {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        common: Common,
    },
    /// Proximal mapping at a point or over a grid.
    Prox {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, allow_hyphen_values = true)]
        point: Option<f64>,
        /// Query grid "lo..hi:n".
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Moreau envelope table (x, f, envelope, prox).
    Envelope {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Proximal average of two piecewise-linear functions.
    ProxAverage {
        #[command(flatten)]
        target: Target,
        /// Second function as inline JSON.
        #[arg(long)]
        inline2: String,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Minimizers of the tilted function f − ⟨x*, ·⟩ (the conjugate's
    /// subdifferential at x*).
    Tilt {
        #[command(flatten)]
        target: Target,
        /// The tilt x*.
        #[arg(long, allow_hyphen_values = true)]
        point: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Run one property certifier against a fixture.
    Check {
        /// Property: strict-convex, almost-strict-convex, midpoint-convex,
        /// monotone, strict-monotone, almost-strict-monotone,
        /// paramonotone, strict-nonexpansive.
        property: String,
        #[command(flatten)]
        target: Target,
        /// Sampling box "lo..hi,lo..hi".
        #[arg(long, allow_hyphen_values = true)]
        region: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Run a theorem suite: t-almost, t-envel, t-para.
    Suite {
        suite: String,
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// List the fixture gallery with truth labels.
    Gallery {
        #[command(flatten)]
        common: Common,
    },
    /// Aggregate suite report files into a CSV summary.
    Report {
        /// Report JSON files produced with --out.
        inputs: Vec<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_inline(s: &str) -> Result<PlFunction, String> {
    serde_json::from_str(s).map_err(|e| format!("--inline: {e}"))
}

fn build_job(cli: Cli) -> Result<JobSpec, String> {
    let mut job = JobSpec::default();
    let fill = |target: &Target, common: &Common, job: &mut JobSpec| -> Result<(), String> {
        job.fixture = target.fixture.clone();
        job.inline = match &target.inline {
            Some(s) => Some(parse_inline(s)?),
            None => None,
        };
        job.seed = common.seed;
        job.tol_abs = common.tol_abs;
        job.tol_strict = common.tol_strict;
        job.out = common.out.clone();
        job.format = if common.format == "csv" {
            OutputFormat::Csv
        } else {
            OutputFormat::Json
        };
        Ok(())
    };
    match cli.command {
        Command::Conjugate { target, common } => {
            job.command = "conjugate".into();
            fill(&target, &common, &mut job)?;
        }
        Command::Prox { target, lambda, point, grid, common } => {
            job.command = "prox".into();
            fill(&target, &common, &mut job)?;
            job.lambda = Some(lambda);
            job.point = point;
            job.grid = grid;
        }
        Command::Envelope { target, lambda, grid, common } => {
            job.command = "envelope".into();
            fill(&target, &common, &mut job)?;
            job.lambda = Some(lambda);
            job.grid = grid;
        }
        Command::ProxAverage { target, inline2, lambda, alpha, common } => {
            job.command = "prox-average".into();
            fill(&target, &common, &mut job)?;
            job.inline2 = Some(parse_inline(&inline2)?);
            job.lambda = Some(lambda);
            job.alpha = Some(alpha);
        }
        Command::Tilt { target, point, common } => {
            job.command = "tilt".into();
            fill(&target, &common, &mut job)?;
            job.point = Some(point);
        }
        Command::Check { property, target, region, common } => {
            job.command = "check".into();
            fill(&target, &common, &mut job)?;
            job.name = Some(property);
            job.region = region;
        }
        Command::Suite { suite, target, lambda, grid, common } => {
            job.command = "suite".into();
            fill(&target, &common, &mut job)?;
            job.name = Some(suite);
            job.lambda = lambda;
            job.grid = grid;
        }
        Command::Gallery { common } => {
            job.command = "gallery".into();
            fill(&Target::default(), &common, &mut job)?;
        }
        Command::Report { inputs, common } => {
            job.command = "report".into();
            fill(&Target::default(), &common, &mut job)?;
            job.report_inputs = inputs;
        }
    }
    Ok(job)
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("KONVEX_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
    let cli = Cli::parse();
    let job = match build_job(cli) {
        Ok(job) => job,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    match run(&job) {
        Ok(outcome) => {
            print!("{}", outcome.body);
            if let Some(p) = outcome.written {
                eprintln!("report written to {}", p.display());
            }
            ExitCode::from(outcome.exit_code.clamp(0, 255) as u8)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

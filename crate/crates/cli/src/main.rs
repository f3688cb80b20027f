//! Command-line driver: JSON in, JSON/CSV out, deterministic for a fixed
//! seed. Exit codes: 0 success (warnings included), 1 failed checks,
//! 2 invalid input.

mod cmds;
mod util;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use util::Failure;

#[derive(Parser)]
#[command(name = "bohr-szego", version, about = "Dirichlet series, torus metrics, and the truncated extremal problem")]
struct Cli {
    /// Output file; stdout when omitted
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for randomized estimators (lattice integration)
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads (0 = library default); BOHR_SZEGO_THREADS overrides
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Generic tolerance knob for check-style commands
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Series file -> polynomial file through the coefficient-preserving lift
    Lift {
        #[arg(long)]
        series: PathBuf,
    },
    /// Polynomial file -> series file (errors on 64-bit index overflow)
    Unlift {
        #[arg(long)]
        poly: PathBuf,
    },
    /// Evaluate a series on a vertical line or a polynomial at a point
    Eval {
        #[arg(long)]
        series: Option<PathBuf>,
        #[arg(long)]
        poly: Option<PathBuf>,
        #[arg(long, default_value_t = 0.0)]
        sigma: f64,
        #[arg(long, default_value_t = 0.0)]
        t: f64,
        /// point as "re,im;re,im;..." (polynomial mode)
        #[arg(long)]
        point: Option<String>,
    },
    /// Metric values: d0 (log(1+|F|) mean) or the p-norm
    Metric {
        #[arg(long)]
        poly: Option<PathBuf>,
        #[arg(long)]
        series: Option<PathBuf>,
        /// d0 | p
        #[arg(long, default_value = "d0")]
        kind: String,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        /// grid | lattice (lattice uses --seed)
        #[arg(long, default_value = "grid")]
        estimator: String,
        /// lattice point count
        #[arg(long, default_value_t = 65536)]
        lattice_n: usize,
    },
    /// Monotone profiles: r-dilation, sigma-shift, or k-te Abschnitt ladder
    Profile {
        /// r | sigma | k
        #[arg(long)]
        mode: String,
        #[arg(long)]
        poly: Option<PathBuf>,
        #[arg(long)]
        series: Option<PathBuf>,
        /// comma-separated ladder, e.g. "0,0.25,0.5,0.75,1"
        #[arg(long)]
        points: String,
        /// vertical shift for k-mode
        #[arg(long, default_value_t = 0.5)]
        sigma: f64,
    },
    /// Vertical-line time average vs torus integral along the doubling window
    Ergodic {
        #[arg(long)]
        series: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        sigma: f64,
        #[arg(long, default_value_t = 64.0)]
        t_start: f64,
        #[arg(long, default_value_t = 16384.0)]
        t_max: f64,
    },
    /// Truncated extremal problem for a weight file
    Szego {
        #[arg(long)]
        weight: PathBuf,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 1)]
        vars: usize,
        #[arg(long, default_value_t = 4)]
        degree: usize,
        /// per-axis node override
        #[arg(long)]
        grid: Option<usize>,
        /// extra degree ladder "d1,d2,..."
        #[arg(long)]
        ladder: Option<String>,
    },
    /// Outer-function criterion for a polynomial file
    Outer {
        #[arg(long)]
        poly: PathBuf,
    },
    /// Jensen-inequality gap at a point
    Jensen {
        #[arg(long)]
        poly: PathBuf,
        /// point as "re,im;re,im;..."
        #[arg(long)]
        zeta: String,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// l1 = l1 . c0 factorization of a coefficient file (JSON array)
    Factorize {
        #[arg(long)]
        input: PathBuf,
    },
    /// Fourier coefficients of a weight
    Fourier {
        #[arg(long)]
        weight: PathBuf,
        /// single signed index as JSON, e.g. "[[1,1],[2,-1]]"
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, default_value_t = 1)]
        vars: usize,
        #[arg(long, default_value_t = 2)]
        degree: usize,
    },
    /// Coefficient sequence with doubling prime gaps and its finiteness table
    DivergenceWitness {
        #[arg(long, default_value_t = 10)]
        terms: usize,
        #[arg(long, default_value = "0.5,0.25,0.1")]
        sigmas: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let threads = std::env::var("BOHR_SZEGO_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .unwrap_or(cli.threads);
    if threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }

    let out = cli.out.clone();
    let result = match cli.command {
        Command::Lift { series } => cmds::lift(&series, out.as_deref()),
        Command::Unlift { poly } => cmds::unlift(&poly, out.as_deref()),
        Command::Eval {
            series,
            poly,
            sigma,
            t,
            point,
        } => cmds::eval(series.as_deref(), poly.as_deref(), sigma, t, point.as_deref(), out.as_deref()),
        Command::Metric {
            poly,
            series,
            kind,
            p,
            estimator,
            lattice_n,
        } => cmds::metric(
            poly.as_deref(),
            series.as_deref(),
            &kind,
            p,
            &estimator,
            lattice_n,
            cli.seed,
            out.as_deref(),
        ),
        Command::Profile {
            mode,
            poly,
            series,
            points,
            sigma,
        } => cmds::profile(&mode, poly.as_deref(), series.as_deref(), &points, sigma, out.as_deref()),
        Command::Ergodic {
            series,
            sigma,
            t_start,
            t_max,
        } => cmds::ergodic(&series, sigma, t_start, t_max, out.as_deref()),
        Command::Szego {
            weight,
            p,
            vars,
            degree,
            grid,
            ladder,
        } => cmds::szego(&weight, p, vars, degree, grid, ladder.as_deref(), out.as_deref()),
        Command::Outer { poly } => cmds::outer(&poly, cli.tol, out.as_deref()),
        Command::Jensen { poly, zeta, grid } => cmds::jensen(&poly, &zeta, grid, out.as_deref()),
        Command::Factorize { input } => cmds::factorize_cmd(&input, out.as_deref()),
        Command::Fourier {
            weight,
            alpha,
            vars,
            degree,
        } => cmds::fourier(&weight, alpha.as_deref(), vars, degree, out.as_deref()),
        Command::DivergenceWitness { terms, sigmas } => {
            cmds::divergence_witness(terms, &sigmas, out.as_deref())
        }
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

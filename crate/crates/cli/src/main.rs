use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context as _;
use clap::{Parser, Subcommand, ValueEnum};
use trl_cli::commands::{self, Ctx, NormKind};
use trl_cli::report::Report;
use trl_cli::{exit_code, suites};
use trl_core::{Arithmetic, Caps, Settings};

#[derive(Parser)]
#[command(name = "trl", version, about = "Tensor norms and asymptotic tensor radii of finite-dimensional normed spaces")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// CSV table output.
    #[arg(long, global = true)]
    csv: bool,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[arg(long, global = true, default_value_t = 4)]
    kmax: usize,
    /// Multistart budget for heuristic searches.
    #[arg(long, global = true, default_value_t = 64)]
    starts: usize,
    /// Float comparison tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Show exact values in the text table.
    #[arg(long, global = true)]
    rational: bool,
    /// Floating-point arithmetic on polyhedral paths.
    #[arg(long, global = true, conflicts_with = "rational")]
    float: bool,
    /// Include wall-clock time (breaks byte-identical output).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Injective,
    Projective,
    Hs,
    Operator,
    Nuclear,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a tensor or operator norm.
    Norm {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Tensor JSON file or inline JSON.
        #[arg(long)]
        tensor: Option<String>,
        /// Operator JSON file or inline JSON.
        #[arg(long)]
        op: Option<String>,
    },
    /// Tensor radius computations.
    Radius {
        #[command(subcommand)]
        what: Radius,
    },
    /// John and Loewner ellipsoids with contact points.
    Ellipsoid {
        #[arg(long)]
        space: String,
        /// john, loewner or both.
        #[arg(long, default_value = "both")]
        side: String,
    },
    /// Banach-Mazur distance to the Euclidean space of the same dimension.
    Bm {
        #[arg(long)]
        space: String,
    },
    /// Run a named regression suite (or `all`).
    Reproduce { name: String },
}

#[derive(Subcommand)]
enum Radius {
    /// tau_k for one k, or the tau_infty interval with tau_1..tau_kmax.
    Tau {
        #[arg(long)]
        op: String,
        #[arg(long)]
        k: Option<usize>,
        /// auto, parallelotope, vertex or heuristic.
        #[arg(long, default_value = "auto")]
        method: String,
    },
    /// Bounds on rho_infty of a space.
    Rho {
        #[arg(long)]
        space: String,
    },
    /// Certify a gap between tau_infty and the nuclear norm.
    Ntp {
        #[arg(long)]
        op: String,
    },
    /// Search for tensors with a large Hilbert-Schmidt to injective ratio.
    Entangle {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Two-point construction of a gapped operator on a plane.
    Construct {
        #[arg(long)]
        space: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
}

fn run(cli: &Cli, command: &str) -> anyhow::Result<Report> {
    let caps = Caps::from_env().context("TRL_CAPS")?;
    let settings = Settings {
        arithmetic: if cli.float { Arithmetic::Float } else { Arithmetic::Exact },
        tol: cli.tol,
        seed: cli.seed,
        starts: cli.starts.max(1),
        caps,
        ..Settings::default()
    };
    let ctx = Ctx::new(settings, cli.kmax.max(1));
    match &cli.command {
        Command::Norm { kind, tensor, op } => {
            let kind = match kind {
                Kind::Injective => NormKind::Injective,
                Kind::Projective => NormKind::Projective,
                Kind::Hs => NormKind::Hs,
                Kind::Operator => NormKind::Operator,
                Kind::Nuclear => NormKind::Nuclear,
            };
            commands::cmd_norm(&ctx, command, kind, tensor.as_deref(), op.as_deref())
        }
        Command::Radius { what } => match what {
            Radius::Tau { op, k, method } => {
                commands::cmd_tau(&ctx, command, op, *k, commands::parse_tau_method(method)?)
            }
            Radius::Rho { space } => commands::cmd_rho(&ctx, command, space),
            Radius::Ntp { op } => commands::cmd_ntp(&ctx, command, op),
            Radius::Entangle { n, k, trials } => commands::cmd_entangle(&ctx, command, *n, *k, *trials),
            Radius::Construct { space, trials } => commands::cmd_construct(&ctx, command, space, *trials),
        },
        Command::Ellipsoid { space, side } => commands::cmd_ellipsoid(&ctx, command, space, &commands::parse_side(side)?),
        Command::Bm { space } => commands::cmd_bm(&ctx, command, space),
        Command::Reproduce { name } => suites::run(name, &ctx),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    let command = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    let start = Instant::now();
    let mut report = match run(&cli, &command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(exit_code(&e) as u8);
        }
    };
    if cli.timing {
        report.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    let out = if cli.json {
        Ok(report.to_json())
    } else if cli.csv {
        report.to_csv()
    } else {
        Ok(report.to_table(cli.rational))
    };
    match out {
        Ok(s) => println!("{}", s.trim_end()),
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

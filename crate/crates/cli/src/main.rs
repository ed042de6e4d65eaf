use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};

use wk_core::casimir::{standard_casimir, tau, tau_decompose};
use wk_core::io::{from_json, to_json};
use wk_core::oracle::cross_check;
use wk_core::solver::{compute_kernel, format_table, verify_result, SolverConfig};
use wk_core::subalgebra::is_member_of;
use wk_core::{format_poly, parse_poly};

#[derive(Parser, Debug)]
#[command(
    name = "wk",
    version,
    about = "Constants of the basic Weitzenboeck derivation"
)]
struct Cli {
    /// Worker threads (default: all cores)
    #[arg(long, global = true, env = "WK_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute a minimal generating set of the kernel
    Kernel {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
        max_rounds: u32,
        #[arg(long)]
        degree_cap: Option<u32>,
        #[arg(long)]
        no_minimize: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the normalized tau_i image of a constant
    Tau {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        poly: String,
    },
    /// Print the standard Casimir element of X_m
    Delta {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
    /// Test membership in the subalgebra generated by a generator file
    Member {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        poly: String,
        #[arg(long)]
        gens: PathBuf,
    },
    /// Decompose a constant as a sum of tau images
    Decompose {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        poly: String,
    },
    /// Compare slice dimensions with the nullspace oracle
    Oracle {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 6)]
        deg_max: u32,
        #[arg(long)]
        gens: PathBuf,
        /// Print the report as JSON
        #[arg(long)]
        json: bool,
    },
    /// Check every generator in a generator file
    Verify {
        #[arg(long)]
        gens: PathBuf,
    },
}

enum Failure {
    Usage(anyhow::Error),
    Compute(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Compute(e)
    }
}

fn usage<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Usage(e.into())
}

fn read_gens(path: &PathBuf) -> Result<wk_core::solver::KernelResult, Failure> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(usage)?;
    from_json(&text)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(usage)
}

fn run(command: Command) -> Result<bool, Failure> {
    match command {
        Command::Kernel {
            n,
            max_rounds,
            degree_cap,
            no_minimize,
            out,
        } => {
            let config = SolverConfig {
                n,
                max_rounds,
                degree_cap,
                minimize: !no_minimize,
            };
            let result = compute_kernel(&config).context("kernel computation")?;
            std::fs::write(&out, to_json(&result))
                .with_context(|| format!("writing {}", out.display()))?;
            print!("{}", format_table(&result));
            if !result.closed {
                log::warn!("result is not closed; raise --max-rounds or --degree-cap");
            }
            Ok(true)
        }
        Command::Tau { n, i, poly } => {
            let z = parse_poly(&poly, n).map_err(usage)?;
            let image = tau(i, &z).map_err(usage)?;
            println!("{}", format_poly(&image.primitive_or_zero()));
            Ok(true)
        }
        Command::Delta { n, m } => {
            let d = standard_casimir(m, n).map_err(usage)?;
            println!("{}", format_poly(&d));
            Ok(true)
        }
        Command::Member { n, poly, gens } => {
            let z = parse_poly(&poly, n).map_err(usage)?;
            let result = read_gens(&gens)?;
            if result.n != n {
                return Err(usage(anyhow::anyhow!(
                    "generator file has n={}, expected {n}",
                    result.n
                )));
            }
            match is_member_of(&z, &result.generators).map_err(usage)? {
                Some(rep) => {
                    println!("member");
                    println!("{}", rep.describe(&result.generators));
                    Ok(true)
                }
                None => {
                    println!("not member");
                    Ok(false)
                }
            }
        }
        Command::Decompose { n, poly } => {
            let z = parse_poly(&poly, n).map_err(usage)?;
            let dec = tau_decompose(&z).map_err(usage)?;
            for (i, c) in dec.c().iter().enumerate() {
                println!("c({i}) = {}", format_poly(c));
            }
            let ok = match (dec.reconstruct(), z.degree()) {
                (Ok(sum), Ok(deg)) => sum == z.scale(&wk_core::poly::rat(i64::from(deg))),
                _ => false,
            };
            println!("reconstruction: {}", if ok { "ok" } else { "FAILED" });
            Ok(ok)
        }
        Command::Oracle {
            n,
            deg_max,
            gens,
            json,
        } => {
            let result = read_gens(&gens)?;
            if result.n != n {
                return Err(usage(anyhow::anyhow!(
                    "generator file has n={}, expected {n}",
                    result.n
                )));
            }
            let report = cross_check(&result.generators, n, deg_max).context("cross check")?;
            if json {
                print!("{}", report.to_json());
            } else {
                println!("{report}");
            }
            Ok(report.passed())
        }
        Command::Verify { gens } => {
            let result = read_gens(&gens)?;
            let report = verify_result(&result);
            println!("{report}");
            Ok(report.passed)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp_millis()
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use greedyco::analysis::{
    check_certificate, estimate_modulus, majorant_sequence, DomainSampler, MajorantParams,
};
use greedyco::core::{ErrorSchedule, SmoothnessDomain};
use greedyco::harness::{parse_config, run_experiment, run_suite};
use greedyco::Error;

#[derive(Parser)]
#[command(name = "greedyco", about = "Greedy approximation algorithms for convex optimization", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment from a config file and write its artifacts.
    Run {
        config: PathBuf,
        /// Output directory for trace/report/plot files.
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run every .cfg file in a directory and write a summary.
    Suite {
        dir: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Parallel workers.
        #[arg(long, default_value_t = 4)]
        jobs: usize,
    },
    /// Estimate the smoothness modulus of a config's objective and check it
    /// against the declared certificate.
    CheckModulus { config: PathBuf },
    /// Print the extremal majorant sequence for given recurrence parameters.
    Majorant(MajorantArgs),
}

#[derive(Args)]
struct MajorantArgs {
    /// Effective weakness factor v in (0, 1].
    #[arg(long)]
    v: f64,
    /// Smoothness constant B > 0.
    #[arg(long = "B", alias = "big-b")]
    big_b: f64,
    /// Smoothness exponent q in (1, 2].
    #[arg(long)]
    q: f64,
    /// Starting value a_0 >= 0.
    #[arg(long, default_value_t = 1.0)]
    a0: f64,
    /// Error schedule: zero, constant:<d>, power:<c>,<q>, or harmonic.
    #[arg(long, default_value = "zero")]
    schedule: String,
    /// Number of steps to print.
    #[arg(long, default_value_t = 100)]
    m: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(classify(&e))
        }
    }
}

/// 1 for usage/config problems, 2 for numerical failures.
fn classify(e: &Error) -> u8 {
    match e {
        Error::Config { .. } | Error::Io(_) => 1,
        Error::AtIteration { source, .. } => classify(source),
        _ => 2,
    }
}

fn dispatch(cli: Cli) -> greedyco::Result<ExitCode> {
    match cli.command {
        Command::Run { config, out } => {
            let cfg = parse_config(&config)?;
            let outcome = run_experiment(&cfg, &out)?;
            println!("config {}", outcome.report.config_hash);
            println!("trace  {}", outcome.trace_path.display());
            println!("report {}", outcome.report_path.display());
            println!("plot   {}", outcome.plot_path.display());
            if let Some(slope) = outcome.report.slope {
                println!("slope  {slope:.4}");
            }
            match outcome.abort_message {
                None => Ok(ExitCode::SUCCESS),
                Some(msg) => {
                    eprintln!("aborted: {msg}");
                    Ok(ExitCode::from(2))
                }
            }
        }
        Command::Suite { dir, out, jobs } => {
            let summary = run_suite(&dir, &out, jobs)?;
            for row in &summary.rows {
                println!(
                    "{}: {} (algorithm {}, slope {})",
                    row.file,
                    row.status,
                    row.algorithm,
                    row.slope.map(|s| format!("{s:.3}")).unwrap_or_else(|| "-".into())
                );
            }
            println!("summary {}", summary.summary_path.display());
            if summary.any_failed() {
                Ok(ExitCode::from(3))
            } else {
                Ok(ExitCode::SUCCESS)
            }
        }
        Command::CheckModulus { config } => {
            let cfg = parse_config(&config)?;
            let obj = cfg.build_objective()?;
            let dict = cfg.build_dictionary()?;
            let domain = if cfg.algorithm.algorithm.free_relaxation() {
                SmoothnessDomain::SublevelPlusOne
            } else {
                SmoothnessDomain::SublevelCapHull
            };
            let Some(cert) = obj.certificate(domain) else {
                eprintln!("objective has no declared smoothness certificate");
                return Ok(ExitCode::from(2));
            };
            let sampler = DomainSampler::new(&obj, &dict, domain);
            let grid = [0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0];
            let est = estimate_modulus(&obj, &sampler, &grid, 200, cfg.algorithm.seed ^ 0x5eed)?;
            println!("certificate: gamma = {}, q = {}", cert.gamma, cert.q);
            println!("u,estimate,bound");
            for (&u, &e) in est.u_grid.iter().zip(&est.estimates) {
                println!("{u},{e},{}", cert.gamma * u.powf(cert.q));
            }
            let report = check_certificate(&est, &cert);
            println!("max ratio: {:.6}", report.max_ratio);
            if report.ok() {
                println!("certificate holds on the sampled grid");
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("certificate violated at {} grid points", report.failures.len());
                Ok(ExitCode::from(2))
            }
        }
        Command::Majorant(args) => {
            let schedule = parse_schedule(&args.schedule)?;
            if !(args.v > 0.0 && args.v <= 1.0) {
                return Err(Error::BadWeakness(args.v));
            }
            if !(args.big_b > 0.0) || !(args.q > 1.0 && args.q <= 2.0) || args.a0 < 0.0 {
                return Err(Error::Config {
                    key: "majorant".into(),
                    message: "need B > 0, q in (1, 2], a0 >= 0".into(),
                });
            }
            let params = MajorantParams::new(args.v, args.big_b, args.q, schedule, args.a0);
            println!("m,a_m");
            for (m, a) in majorant_sequence(&params, args.m).iter().enumerate() {
                println!("{m},{a}");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn parse_schedule(text: &str) -> greedyco::Result<ErrorSchedule> {
    let bad = |msg: &str| Error::Config {
        key: "schedule".into(),
        message: msg.into(),
    };
    let schedule = match text {
        "zero" => ErrorSchedule::Zero,
        "harmonic" => ErrorSchedule::Harmonic,
        _ if text.starts_with("constant:") => {
            let d = text["constant:".len()..]
                .parse()
                .map_err(|_| bad("constant:<d> needs a number"))?;
            ErrorSchedule::Constant(d)
        }
        _ if text.starts_with("power:") => {
            let rest = &text["power:".len()..];
            let (c, q) = rest
                .split_once(',')
                .ok_or_else(|| bad("power:<c>,<q> needs two numbers"))?;
            ErrorSchedule::Power {
                c: c.trim().parse().map_err(|_| bad("bad c in power:<c>,<q>"))?,
                q: q.trim().parse().map_err(|_| bad("bad q in power:<c>,<q>"))?,
            }
        }
        _ => return Err(bad("expected zero, constant:<d>, power:<c>,<q>, or harmonic")),
    };
    schedule.validate()?;
    Ok(schedule)
}

//! The `betafreeze` command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error.
//! `BETAFREEZE_THREADS` (a positive integer) caps the worker count.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::density::{density_grid, write_density_grid_csv, DEFAULT_GRID_POINTS};
use crate::ensembles::{sample_spectra, write_samples_csv};
use crate::fluctuations::airy_edge_diagnostic;
use crate::format;
use crate::verify::{
    chi_normal_limit_check, density_agreement_check, fluctuation_mc_check, fluctuation_model_for,
    invariant_suite, perturbation_order_check, Thresholds, VerificationReport, DEFAULT_MC_BETA,
};
use crate::{EnsembleSpec, Error, LaguerreParam, Result, VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const THREADS_ENV: &str = "BETAFREEZE_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "betafreeze",
    version,
    about = "Frozen spectra and fluctuations of beta-Hermite/Laguerre ensembles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample scaled spectra as CSV (sample_index,eig_index,value).
    Sample {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export the fluctuation model (means, covariance, scale) as JSON.
    Model {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Level-density curves on a uniform grid as CSV.
    Density {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run verification suites and emit a JSON report; exits 1 on failure.
    Verify(VerifyArgs),
    /// Diagnostics.
    Diag {
        #[command(subcommand)]
        which: DiagCommand,
    },
}

#[derive(Debug, Subcommand)]
enum DiagCommand {
    /// Largest-root edge sequence as CSV (k,m_k,t_k).
    Airy {
        #[arg(long, value_delimiter = ',', default_values_t = vec![10usize, 50, 100, 200, 400])]
        ks: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Ensemble {
    Hermite,
    Laguerre,
}

#[derive(Debug, Args)]
#[group(id = "laguerre", multiple = false)]
struct LaguerreArgs {
    /// Laguerre γ (holds γ fixed as β varies).
    #[arg(long, group = "laguerre")]
    gamma: Option<f64>,
    /// Laguerre weight exponent p (holds p fixed as β varies).
    #[arg(long, group = "laguerre")]
    p: Option<f64>,
    /// Laguerre parameter a directly.
    #[arg(long, group = "laguerre")]
    a: Option<f64>,
}

#[derive(Debug, Args)]
struct EnsembleArgs {
    #[arg(long, value_enum, default_value_t = Ensemble::Hermite)]
    ensemble: Ensemble,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_MC_BETA)]
    beta: f64,
    #[command(flatten)]
    laguerre: LaguerreArgs,
}

impl EnsembleArgs {
    fn spec(&self, default_k: Option<usize>) -> Result<EnsembleSpec> {
        let k = self
            .k
            .or(default_k)
            .ok_or(Error::Malformed("--k is required"))?;
        let l = &self.laguerre;
        match self.ensemble {
            Ensemble::Hermite => {
                if l.gamma.is_some() || l.p.is_some() || l.a.is_some() {
                    return Err(Error::Malformed(
                        "--gamma/--p/--a apply only to --ensemble laguerre",
                    ));
                }
                EnsembleSpec::hermite(k, self.beta)
            }
            Ensemble::Laguerre => {
                let param = match (l.gamma, l.p, l.a) {
                    (Some(g), _, _) => LaguerreParam::Gamma(g),
                    (_, Some(p), _) => LaguerreParam::P(p),
                    (_, _, Some(a)) => LaguerreParam::A(a),
                    _ => return Err(Error::MissingLaguerreParam),
                };
                EnsembleSpec::laguerre(k, self.beta, param)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Invariants,
    Chi,
    Fluctuation,
    Perturbation,
    Density,
    All,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,
    #[command(flatten)]
    ensemble: EnsembleArgs,
    /// Samples per Monte Carlo check.
    #[arg(long, default_value_t = 100_000)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    nbins: usize,
    /// Largest k of the invariant suite.
    #[arg(long, default_value_t = 10)]
    kmax: usize,
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.5, 1.0, 5.0])]
    gammas: Vec<f64>,
    /// χ degrees of freedom for the normal-limit check.
    #[arg(long, value_delimiter = ',', default_values_t = vec![1e4, 1e6])]
    r: Vec<f64>,
    /// Decreasing perturbation sizes.
    #[arg(long, value_delimiter = ',', default_values_t = vec![1e-2, 5e-3, 2.5e-3])]
    eps: Vec<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parses `argv` (program name first), runs the command and returns the exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let threads = match thread_count() {
        Ok(t) => t,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
    };
    let result = match threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| run(cli.command)),
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
        },
        None => run(cli.command),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn thread_count() -> std::result::Result<Option<usize>, String> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(t) if t > 0 => Ok(Some(t)),
            _ => Err(format!(
                "{THREADS_ENV} must be a positive integer, got {v:?}"
            )),
        },
    }
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn header(spec: Option<&EnsembleSpec>, extra: &str) -> Vec<String> {
    let mut m = vec![format!("betafreeze {VERSION}")];
    if let Some(s) = spec {
        m.push(s.describe());
    }
    if !extra.is_empty() {
        m.push(extra.to_string());
    }
    m
}

fn run(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Sample {
            ensemble,
            n,
            seed,
            out,
        } => {
            let spec = ensemble.spec(None)?;
            let samples = sample_spectra(&spec, n, seed)?;
            let mut w = open_out(&out)?;
            write_samples_csv(
                &mut w,
                &header(Some(&spec), &format!("n={n} seed={seed}")),
                &samples,
            )?;
            w.flush()?;
        }
        Command::Model { ensemble, out } => {
            let spec = ensemble.spec(None)?;
            let model = fluctuation_model_for(&spec)?;
            let mut w = open_out(&out)?;
            writeln!(
                w,
                "{}",
                model.to_json(Some(&header(Some(&spec), "").join("; ")))
            )?;
            w.flush()?;
        }
        Command::Density {
            ensemble,
            grid,
            out,
        } => {
            let spec = ensemble.spec(None)?;
            let g = density_grid(&spec, grid)?;
            let mut w = open_out(&out)?;
            write_density_grid_csv(&mut w, &header(Some(&spec), &format!("grid={grid}")), &g)?;
            w.flush()?;
        }
        Command::Verify(args) => return verify(args),
        Command::Diag {
            which: DiagCommand::Airy { ks, out },
        } => {
            let rows = airy_edge_diagnostic(&ks)?;
            let mut w = open_out(&out)?;
            for m in header(None, "diag=airy") {
                writeln!(w, "# {m}")?;
            }
            writeln!(w, "k,m_k,t_k")?;
            for r in rows {
                writeln!(w, "{},{},{}", r.k, format::real(r.m_k), format::real(r.t_k))?;
            }
            w.flush()?;
        }
    }
    Ok(EXIT_OK)
}

fn verify(args: VerifyArgs) -> Result<i32> {
    let th = Thresholds::default();
    let needs_spec = matches!(args.suite, Suite::Fluctuation | Suite::Density | Suite::All);
    let spec = if needs_spec {
        Some(args.ensemble.spec(Some(2))?)
    } else {
        None
    };
    let perturb_k = args.ensemble.k.unwrap_or(6);

    let mut report = VerificationReport::default();
    let all = args.suite == Suite::All;
    if all || args.suite == Suite::Invariants {
        report.merge(invariant_suite(args.kmax, &args.gammas, &th)?);
    }
    if all || args.suite == Suite::Chi {
        for &r in &args.r {
            report.merge(chi_normal_limit_check(r, args.n, args.seed, &th)?);
        }
    }
    if all || args.suite == Suite::Perturbation {
        report.merge(perturbation_order_check(
            perturb_k, &args.eps, args.seed, &th,
        )?);
    }
    if let Some(spec) = &spec {
        if all || args.suite == Suite::Fluctuation {
            report.merge(fluctuation_mc_check(spec, args.n, args.seed, &th)?);
        }
        if all || args.suite == Suite::Density {
            report.merge(density_agreement_check(
                spec, args.n, args.nbins, args.seed, &th,
            )?);
        }
    }

    let suite = format!("{:?}", args.suite).to_lowercase();
    let meta = header(
        spec.as_ref(),
        &format!(
            "suite={suite} n={} seed={} nbins={} kmax={}",
            args.n, args.seed, args.nbins, args.kmax
        ),
    );
    let mut w = open_out(&args.out)?;
    writeln!(w, "{}", report.to_json(Some(&meta.join("; "))))?;
    w.flush()?;
    Ok(if report.overall {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}

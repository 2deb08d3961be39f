use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use verify::config::SpectrumTarget;
use verify::report::Status;
use verify::{diff_files, RunConfig, Suite, Tolerances, VerifyError, CONFIG_ENV};

#[derive(Parser)]
#[command(name = "verify", version, about = "Verification suites for tensor calculus on S3 and the flat cone over it")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// key = value config file (default: $VERIFY_CONFIG)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the JSON report here
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Write CSV tables into this directory
    #[arg(long, global = true)]
    csv_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override any config key, e.g. --set tol_slope=0.25
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    sets: Vec<String>,
    /// Only print failing checks
    #[arg(long, short, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// The eight Laplacian commutation identities
    Identities {
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Rough Laplacian spectra
    Spectrum {
        /// function, one-form, sym or tt
        #[arg(long)]
        bundle: Option<String>,
        /// none, divergence-free or tt
        #[arg(long)]
        constraint: Option<String>,
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Separated bilaplacian against the Cartesian finite-difference oracle
    ConeOracle {
        /// comma-separated grid sizes
        #[arg(long)]
        grids: Option<String>,
        #[arg(long)]
        order: Option<usize>,
    },
    /// Bach tensor linearization remainders and gauge directions
    Linearize {
        /// comma-separated epsilons
        #[arg(long)]
        eps: Option<String>,
        #[arg(long)]
        points: Option<usize>,
    },
    /// Indicial roots, decay gap and gauge perturbation
    Indicial {
        #[arg(long)]
        max_j: Option<usize>,
        #[arg(long)]
        tt_degree: Option<usize>,
        /// comma-separated gauge parameters
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
    },
    /// Annulus norms of pure modes
    Norms {
        #[arg(long)]
        l: Option<f64>,
        #[arg(long)]
        beta_prime: Option<f64>,
        /// comma-separated exponents
        #[arg(long, allow_hyphen_values = true)]
        exponents: Option<String>,
    },
    /// Every suite selected in the config (all by default)
    All,
    /// Numeric differences between two JSON reports
    ReportDiff {
        a: PathBuf,
        b: PathBuf,
        /// per-field tolerance KEY=VALUE (key or full path; default=...)
        #[arg(long = "tol", value_name = "KEY=VALUE")]
        tols: Vec<String>,
    },
}

fn usage(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(2)
}

fn build_config(common: &Common, command: &Command) -> Result<RunConfig, VerifyError> {
    let path = common.config.clone().or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
    let mut c = match path {
        Some(p) => RunConfig::from_file(&p)?,
        None => RunConfig::default(),
    };
    for s in &common.sets {
        let (k, v) = s.split_once('=').ok_or_else(|| VerifyError::Config(format!("--set {s}: expected KEY=VALUE")))?;
        c.set(k, v)?;
    }
    let mut set = |k: &str, v: Option<String>| v.map(|v| c.set(k, &v)).transpose().map(|_| ());
    let only = match command {
        Command::Identities { max_degree } => {
            set("identity_degree", max_degree.map(|v| v.to_string()))?;
            Some(Suite::Identities)
        }
        Command::Spectrum { bundle, constraint, max_degree } => {
            set("spectrum_degree", max_degree.map(|v| v.to_string()))?;
            if let Some(b) = bundle {
                let con = constraint.clone().unwrap_or_else(|| if b == "tt" { "tt".into() } else { "none".into() });
                SpectrumTarget::from_parts(b, &con)?;
                set("spectrum_target", Some(format!("{b}/{con}")))?;
            } else if constraint.is_some() {
                return Err(VerifyError::Config("--constraint needs --bundle".into()));
            }
            Some(Suite::Spectra)
        }
        Command::ConeOracle { grids, order } => {
            set("oracle_grids", grids.clone())?;
            set("oracle_order", order.map(|v| v.to_string()))?;
            Some(Suite::ConeOracle)
        }
        Command::Linearize { eps, points } => {
            set("eps", eps.clone())?;
            set("sample_points", points.map(|v| v.to_string()))?;
            Some(Suite::Linearization)
        }
        Command::Indicial { max_j, tt_degree, t } => {
            set("max_j", max_j.map(|v| v.to_string()))?;
            set("tt_degree", tt_degree.map(|v| v.to_string()))?;
            set("t_values", t.clone())?;
            Some(Suite::Indicial)
        }
        Command::Norms { l, beta_prime, exponents } => {
            set("norm_l", l.map(|v| v.to_string()))?;
            set("beta_prime", beta_prime.map(|v| v.to_string()))?;
            set("norm_exponents", exponents.clone())?;
            Some(Suite::Norms)
        }
        Command::All | Command::ReportDiff { .. } => None,
    };
    if let Some(s) = only {
        c.suites = vec![s];
    }
    if let Some(j) = &common.json {
        c.json = Some(j.clone());
    }
    if let Some(d) = &common.csv_dir {
        c.csv_dir = Some(d.clone());
    }
    if let Some(s) = common.seed {
        c.seed = s;
    }
    c.validate()?;
    Ok(c)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Command::ReportDiff { a, b, tols } = &cli.command {
        let tol = match Tolerances::parse(tols) {
            Ok(t) => t,
            Err(e) => return usage(e),
        };
        return match diff_files(a, b, &tol) {
            Ok(lines) if lines.is_empty() => ExitCode::SUCCESS,
            Ok(lines) => {
                for l in lines {
                    println!("{l}");
                }
                ExitCode::from(1)
            }
            Err(e) => usage(e),
        };
    }
    let config = match build_config(&cli.common, &cli.command) {
        Ok(c) => c,
        Err(e) => return usage(e),
    };
    let quiet = cli.common.quiet;
    let report = verify::run(&config, |s, dt| {
        for c in &s.checks {
            let st = match c.status() {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Informational => "INFO",
            };
            if !quiet || c.status() == Status::Fail {
                println!("{st}  {:<14} {:<40} {}", s.name, c.name, c.detail);
            }
        }
        eprintln!("{} finished in {:.2} s", s.name, dt.as_secs_f64());
    });
    let report = match report {
        Ok(r) => r,
        Err(e) => return usage(e),
    };
    if let Err(e) = report.write_outputs(&config) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    let failed: Vec<&str> = report.suites.iter().filter(|s| s.status == Status::Fail).map(|s| s.name.as_str()).collect();
    if failed.is_empty() {
        println!("all checks passed");
        ExitCode::SUCCESS
    } else {
        println!("failed suites: {}", failed.join(", "));
        ExitCode::from(1)
    }
}

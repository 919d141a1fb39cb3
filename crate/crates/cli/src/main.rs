use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fairpower::cellless::{build_model, dbm_to_watts, run_policies, ExperimentConfig, PowerPolicy};
use fairpower::{
    certify_boundary, check_standard_interference, sample_boundary, solve_weighted_maxmin, AffineModel, MonotoneNorm,
    NormKind, PowerVector, ScaleRange, SolverOptions, WeightVector, BOUNDARY_TOL,
};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "fairpower",
    version,
    about = "Max-min fair power control with standard interference functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the standard interference axioms on a model.
    SiCheck {
        /// Affine model file.
        #[arg(long, conflicts_with = "config", required_unless_present = "config")]
        model: Option<PathBuf>,
        /// Cell-less network config; checks the LSFD interference mapping instead.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Solve the weighted max-min problem.
    Solve {
        #[arg(long)]
        model: PathBuf,
        /// Comma-separated weights; defaults to all ones.
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
        #[command(flatten)]
        norm: NormArgs,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 10_000)]
        max_iter: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Sample or certify points of the weak Pareto boundary.
    Boundary {
        #[command(subcommand)]
        action: BoundaryAction,
    },
    /// Cell-less uplink experiments.
    Cellless {
        #[command(subcommand)]
        action: CelllessAction,
    },
}

#[derive(Subcommand)]
enum BoundaryAction {
    /// Draw points with `‖p‖ = p̄` and report their utilities.
    Sample {
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        norm: NormArgs,
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Certify whether a power vector is on the boundary.
    Verify {
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        norm: NormArgs,
        /// Comma-separated power vector.
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        p: Vec<f64>,
        /// Re-solve the max-min problem with the weights `u(p)`.
        #[arg(long)]
        crosscheck: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CelllessAction {
    /// Evaluate power policies under the per-user budget of the config.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "full,random,fractional")]
        policies: Vec<PolicyName>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyName {
    Full,
    Random,
    Fractional,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum NormName {
    L1,
    Linf,
    WeightedL1,
    WeightedLinf,
}

#[derive(clap::Args)]
struct NormArgs {
    #[arg(long, value_enum)]
    norm: NormName,
    /// Coordinate weights of the weighted norms.
    #[arg(long, value_delimiter = ',')]
    norm_weights: Option<Vec<f64>>,
    #[arg(long)]
    budget: f64,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(clap::Args)]
struct Output {
    #[arg(long, value_enum, default_value = "json")]
    out_format: Format,
    /// Output file; defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Domain(String),
    Usage(String),
}

impl From<fairpower::Error> for Failure {
    fn from(e: fairpower::Error) -> Self {
        use fairpower::Error::*;
        match e {
            Parse { .. } | InvalidInput { .. } | DimensionMismatch { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::SiCheck {
            model,
            config,
            trials,
            seed,
            output,
        } => {
            let report = match (model, config) {
                (Some(path), _) => {
                    check_standard_interference(&read_model(&path)?, trials, ScaleRange::default(), seed)?
                }
                (None, Some(path)) => {
                    let cfg = read_config(&path)?;
                    let (_, m) = build_model(&cfg.network)?;
                    check_standard_interference(&m, trials, ScaleRange::default(), seed)?
                }
                (None, None) => unreachable!("clap requires one of --model and --config"),
            };
            let text = match output.out_format {
                Format::Json => json(&report),
                Format::Csv => {
                    let mut s = String::from("passed,trials_run,property,coordinate\n");
                    let v = report.violation.as_ref();
                    let property = v.map(|v| json(&v.property).trim().trim_matches('"').to_string());
                    let coordinate = v.and_then(|v| v.coordinate).map(|c| c.to_string());
                    s += &format!(
                        "{},{},{},{}\n",
                        report.passed,
                        report.trials_run,
                        property.unwrap_or_default(),
                        coordinate.unwrap_or_default()
                    );
                    s
                }
            };
            emit(output.out.as_deref(), &text)?;
            if report.passed {
                Ok(())
            } else {
                Err(Failure::Domain("standard interference check failed".into()))
            }
        }
        Command::Solve {
            model,
            weights,
            norm,
            tol,
            max_iter,
            output,
        } => {
            let model = read_model(&model)?;
            let norm = norm.build()?;
            let k = model.coupling().len();
            let weights = match weights {
                Some(w) => WeightVector::new(w)?,
                None => WeightVector::uniform(k),
            };
            let opts = SolverOptions {
                tol,
                max_iter,
                p_init: None,
            };
            let sol = solve_weighted_maxmin(&model, &weights, &norm, &opts)?;
            let text = match output.out_format {
                Format::Json => json(&sol),
                Format::Csv => {
                    let mut s = String::from("k,p_star,utility,weight\n");
                    for i in 0..k {
                        s += &format!("{i},{},{},{}\n", sol.p_star[i], sol.utilities[i], weights[i]);
                    }
                    s
                }
            };
            emit(output.out.as_deref(), &text)?;
            if sol.converged {
                Ok(())
            } else {
                Err(Failure::Domain(format!(
                    "no convergence within {} iterations",
                    sol.iterations
                )))
            }
        }
        Command::Boundary {
            action:
                BoundaryAction::Sample {
                    model,
                    norm,
                    n,
                    seed,
                    output,
                },
        } => {
            let model = read_model(&model)?;
            let samples = sample_boundary(&model, &norm.build()?, n, seed)?;
            let text = match output.out_format {
                Format::Json => json(&samples),
                Format::Csv => {
                    let mut s = String::from("sample_id,k,p,utility\n");
                    for (id, sample) in samples.iter().enumerate() {
                        for (k, (p, u)) in sample.p.iter().zip(sample.u.iter()).enumerate() {
                            s += &format!("{id},{k},{p},{u}\n");
                        }
                    }
                    s
                }
            };
            emit(output.out.as_deref(), &text)
        }
        Command::Boundary {
            action:
                BoundaryAction::Verify {
                    model,
                    norm,
                    p,
                    crosscheck,
                    out,
                },
        } => {
            let model = read_model(&model)?;
            let p = PowerVector::new(p)?;
            let cert = certify_boundary(&model, &norm.build()?, &p, BOUNDARY_TOL, crosscheck)?;
            emit(out.as_deref(), &json(&cert))
        }
        Command::Cellless {
            action:
                CelllessAction::Run {
                    config,
                    policies,
                    output,
                },
        } => {
            let cfg = read_config(&config)?;
            let (network, model) = build_model(&cfg.network)?;
            let norm = MonotoneNorm::linf(dbm_to_watts(cfg.budget_dbm))?;
            let policies: Vec<PowerPolicy> = policies
                .iter()
                .map(|p| match p {
                    PolicyName::Full => PowerPolicy::FullPower,
                    PolicyName::Random => PowerPolicy::RandomBox { seed: cfg.policy_seed },
                    PolicyName::Fractional => PowerPolicy::FractionalExponent {
                        exponent: cfg.fractional_exponent,
                    },
                })
                .collect();
            let outcomes = run_policies(&model, &network, &norm, &policies)?;
            let text = match output.out_format {
                Format::Json => {
                    let rows: Vec<PolicyRow> = outcomes
                        .iter()
                        .map(|o| PolicyRow {
                            policy: o.policy.name(),
                            p_watts: o.p.as_slice(),
                            sinr: &o.sinr,
                            rate_bits_per_hz: &o.rates,
                        })
                        .collect();
                    json(&rows)
                }
                Format::Csv => {
                    let mut s = String::from("policy,user,p_watts,sinr,rate_bits_per_hz\n");
                    for o in &outcomes {
                        for k in 0..o.rates.len() {
                            s += &format!("{},{k},{},{},{}\n", o.policy.name(), o.p[k], o.sinr[k], o.rates[k]);
                        }
                    }
                    s
                }
            };
            emit(output.out.as_deref(), &text)
        }
    }
}

#[derive(Serialize)]
struct PolicyRow<'a> {
    policy: &'static str,
    p_watts: &'a [f64],
    sinr: &'a [f64],
    rate_bits_per_hz: &'a [f64],
}

impl NormArgs {
    fn build(&self) -> Result<MonotoneNorm, Failure> {
        let weighted = matches!(self.norm, NormName::WeightedL1 | NormName::WeightedLinf);
        let weights = match (&self.norm_weights, weighted) {
            (Some(w), true) => w.clone(),
            (None, true) => return Err(Failure::Usage("--norm-weights is required for weighted norms".into())),
            (Some(_), false) => return Err(Failure::Usage("--norm-weights only applies to weighted norms".into())),
            (None, false) => Vec::new(),
        };
        let kind = match self.norm {
            NormName::L1 => NormKind::L1,
            NormName::Linf => NormKind::LInf,
            NormName::WeightedL1 => NormKind::WeightedL1(weights),
            NormName::WeightedLinf => NormKind::WeightedLInf(weights),
        };
        Ok(MonotoneNorm::new(kind, self.budget)?)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn read_model(path: &Path) -> Result<AffineModel, Failure> {
    read(path)?
        .parse()
        .map_err(|e: fairpower::Error| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_config(path: &Path) -> Result<ExperimentConfig, Failure> {
    read(path)?
        .parse()
        .map_err(|e: fairpower::Error| Failure::Usage(format!("{}: {e}", path.display())))
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

fn emit(out: Option<&Path>, text: &str) -> Outcome {
    let result = match out {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    };
    result.map_err(|e| Failure::Usage(format!("cannot write output: {e}")))
}

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lojex::groebner::Budget;
use lojex::verify::SamplingConfig;
use lojex::weights::WeightSystem;
use lojex::Rational;
use lojex_cli::{
    exit, render_analysis, render_batch_line, render_deform, render_milnor, render_verify, render_weights, run_analyze,
    run_batch, run_deform, run_infer_weights, run_milnor, run_verify, AnalysisRequest, CliError, DeformRequest,
    VerifyOptions,
};
use serde::Serialize;

/// Łojasiewicz exponents, Milnor numbers and C⁰-sufficiency degrees of
/// weighted homogeneous singularities.
#[derive(Parser)]
#[command(name = "lojex", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Common {
    /// Variable names in order, comma separated; inferred when absent.
    #[arg(long, value_delimiter = ',')]
    vars: Option<Vec<String>>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Maximal number of S-pairs reduced by the Gröbner oracle.
    #[arg(long, default_value_t = 20_000)]
    max_spairs: usize,
    /// Maximal number of terms in an intermediate polynomial.
    #[arg(long, default_value_t = 100_000)]
    max_terms: usize,
}

impl Common {
    fn budget(&self) -> Budget {
        Budget {
            max_spairs: self.max_spairs,
            max_terms: self.max_terms,
        }
    }
}

#[derive(Args)]
struct TypeArgs {
    /// Weight system `d:w1,...,wn`.
    #[arg(long = "type", value_name = "D:W1,...")]
    type_: Option<WeightSystem>,
    /// Use the representative type when the weights form a family.
    #[arg(long)]
    representative: bool,
}

#[derive(Args)]
struct SamplingArgs {
    /// Sphere radii for the samplers.
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.01,0.001")]
    radii: Vec<f64>,
    /// Samples per radius.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
    /// Sample complex points.
    #[arg(long)]
    complex: bool,
    /// Random weighted orbits per witness family.
    #[arg(long, default_value_t = 64)]
    witness_budget: usize,
}

impl SamplingArgs {
    fn options(&self) -> VerifyOptions {
        VerifyOptions {
            witness_budget: self.witness_budget,
            sampling: SamplingConfig {
                radii: self.radii.clone(),
                samples_per_radius: self.samples,
                seed: self.seed,
                complex: self.complex,
            },
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Exponent, Milnor number and sufficiency degree of a germ.
    Analyze {
        polynomial: String,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        types: TypeArgs,
        /// Skip the Gröbner isolation proof.
        #[arg(long)]
        assume_isolated: bool,
        /// Compute the Gröbner Milnor number even with --assume-isolated.
        #[arg(long)]
        milnor: bool,
        /// Semi-weighted homogeneous input; needs --type or --weights.
        #[arg(long)]
        semi: bool,
        /// Weights `w1,...,wn` for --semi.
        #[arg(long, value_delimiter = ',', conflicts_with = "type_")]
        weights: Option<Vec<u64>>,
        /// Run witness search and sampling.
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
    /// Weight systems making the polynomial weighted homogeneous.
    InferWeights {
        polynomial: String,
        #[command(flatten)]
        common: Common,
    },
    /// Milnor number from a Gröbner basis of the Jacobian ideal.
    Milnor {
        polynomial: String,
        #[command(flatten)]
        common: Common,
    },
    /// Witness curves and sampling of the gradient inequalities.
    Verify {
        polynomial: String,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        types: TypeArgs,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
    /// μ-constancy of the deformation f + t·g.
    Deform {
        polynomial: String,
        /// The perturbation g.
        #[arg(long)]
        perturbation: String,
        /// Parameter values, comma separated rationals.
        #[arg(long, value_delimiter = ',', default_value = "0,1,2", allow_hyphen_values = true)]
        t_samples: Vec<Rational>,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        types: TypeArgs,
        #[arg(long, default_value_t = 64)]
        witness_budget: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
    /// Analyze a file with one `polynomial[;d:w1,...]` per line.
    Batch {
        path: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        representative: bool,
        #[arg(long)]
        assume_isolated: bool,
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
}

/// Writes to stdout, ignoring a closed pipe.
fn out(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn emit<T: Serialize>(format: Format, value: &T, text: impl FnOnce(&T) -> String) {
    match format {
        Format::Json => out(&format!(
            "{}\n",
            serde_json::to_string_pretty(value).expect("serializable")
        )),
        Format::Text => out(&text(value)),
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Analyze {
            polynomial,
            common,
            types,
            assume_isolated,
            milnor,
            semi,
            weights,
            verify,
            sampling,
        } => {
            let weights = match weights {
                Some(w) => Some(WeightSystem::new(1, w)?),
                None => types.type_,
            };
            let req = AnalysisRequest {
                polynomial,
                variables: common.vars.clone(),
                weights,
                use_representative: types.representative,
                assume_isolated,
                milnor,
                semi,
                verify: verify.then(|| sampling.options()),
                budget: common.budget(),
            };
            emit(common.format, &run_analyze(&req)?, render_analysis);
            Ok(exit::OK)
        }
        Command::InferWeights { polynomial, common } => {
            let report = run_infer_weights(&polynomial, common.vars.as_deref())?;
            emit(common.format, &report, render_weights);
            Ok(if report.kind == "none" {
                exit::NO_WEIGHTS
            } else {
                exit::OK
            })
        }
        Command::Milnor { polynomial, common } => {
            let report = run_milnor(&polynomial, common.vars.as_deref(), &common.budget())?;
            emit(common.format, &report, render_milnor);
            Ok(exit::OK)
        }
        Command::Verify {
            polynomial,
            common,
            types,
            sampling,
        } => {
            let req = AnalysisRequest {
                variables: common.vars.clone(),
                weights: types.type_,
                use_representative: types.representative,
                budget: common.budget(),
                ..AnalysisRequest::new(polynomial)
            };
            let report = run_verify(&req, &sampling.options())?;
            emit(common.format, &report, render_verify);
            Ok(if report.isolation == "refuted" {
                exit::NOT_ISOLATED
            } else {
                exit::OK
            })
        }
        Command::Deform {
            polynomial,
            perturbation,
            t_samples,
            common,
            types,
            witness_budget,
            seed,
        } => {
            let req = DeformRequest {
                base: polynomial,
                perturbation,
                variables: common.vars.clone(),
                weights: types.type_,
                use_representative: types.representative,
                t_values: t_samples,
                budget: common.budget(),
                witness_budget,
                seed,
            };
            let report = run_deform(&req)?;
            emit(common.format, &report, render_deform);
            Ok(if report.conflict_persists {
                exit::INTERNAL
            } else {
                exit::OK
            })
        }
        Command::Batch {
            path,
            common,
            representative,
            assume_isolated,
            verify,
            sampling,
        } => {
            let template = AnalysisRequest {
                variables: common.vars.clone(),
                use_representative: representative,
                assume_isolated,
                verify: verify.then(|| sampling.options()),
                budget: common.budget(),
                ..AnalysisRequest::new("")
            };
            for line in run_batch(&path, &template)? {
                match common.format {
                    Format::Json => out(&format!("{}\n", serde_json::to_string(&line).expect("serializable"))),
                    Format::Text => out(&format!("{}\n", render_batch_line(&line))),
                }
            }
            Ok(exit::OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}

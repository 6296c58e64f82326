//! `gcs`: file-based front end for coherent-state circuit synthesis.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gcs_synth::catalog::{self, by_label};
use gcs_synth::diagonalizer::DiagonalizerOptions;
use gcs_synth::io::{
    read_json, write_json, AlgebraFile, CircuitFile, HiddenSpec, LqcFile, MomentFile,
};
use gcs_synth::lqc::{final_state_query, gcs_certificate, propagate, LqcCircuit};
use gcs_synth::pipeline::{
    make_budget, synthesize, verify, BudgetConstants, Source, ToleranceBudget, Verification,
};
use gcs_synth::state::hidden_gcs;
use gcs_synth::{Algebra, Error, MomentVector};
use serde::Serialize;

const OUT_DIR_VAR: &str = "GCS_OUT_DIR";

#[derive(Parser, Debug)]
#[command(
    name = "gcs",
    version,
    about = "Synthesize preparation circuits for generalized coherent states"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Seed for every stochastic step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Target state error.
    #[arg(long, global = true, default_value_t = 1e-4)]
    epsilon: f64,
    /// Failure probability for sampled moments.
    #[arg(long, global = true, default_value_t = 0.05)]
    delta: f64,
    /// Cap on diagonalization steps (default: four times the step bound).
    #[arg(long, global = true)]
    max_steps: Option<usize>,
    /// Shots per observable, replacing the Hoeffding count.
    #[arg(long, global = true)]
    shots_override: Option<u64>,
    /// Only log warnings and errors.
    #[arg(long, short, global = true)]
    quiet: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Catalog and algebra-file utilities.
    Algebra {
        #[command(subcommand)]
        action: AlgebraCommand,
    },
    /// Build a circuit from a moment file.
    Synth {
        /// Catalog label such as `su2:2` or `so2n:3`, or a path to an algebra file.
        #[arg(long)]
        algebra: String,
        /// Moment file.
        #[arg(long)]
        moments: PathBuf,
        /// Output path (default: a fixed name under $GCS_OUT_DIR or the working directory).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate tomography of a hidden random coherent state.
    TomoSim {
        /// Catalog label such as `su2:2` or `so2n:3`, or a path to an algebra file.
        #[arg(long)]
        algebra: String,
        /// Number of random group operations in the hidden preparation.
        #[arg(long, default_value_t = 5)]
        hidden_ops: usize,
        /// Output path (default: a fixed name under $GCS_OUT_DIR or the working directory).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare a circuit against a reference state.
    Verify {
        /// Circuit file or tomo-sim report.
        #[arg(long)]
        circuit: PathBuf,
        /// Reference: `hidden` regenerates the state recorded in the circuit.
        #[arg(long, default_value = "hidden")]
        against: String,
        /// Algebra, when the circuit's label is not a catalog label.
        #[arg(long)]
        algebra: Option<String>,
        /// Output path (default: a fixed name under $GCS_OUT_DIR or the working directory).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lie-algebraic circuit simulation.
    Lqc {
        #[command(subcommand)]
        action: LqcCommand,
    },
}

#[derive(Subcommand, Debug)]
enum AlgebraCommand {
    /// List catalog families.
    List,
    /// Write a catalog algebra to a file.
    Export {
        /// Catalog family: `su2` or `so2n`.
        #[arg(long)]
        name: String,
        /// Twice the spin, for `su2`.
        #[arg(long)]
        two_j: Option<u32>,
        /// Number of modes, for `so2n`.
        #[arg(long)]
        n: Option<u32>,
        /// Output path (default: a fixed name under $GCS_OUT_DIR or the working directory).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every structural check on an algebra and print the report.
    Validate {
        /// Catalog label such as `su2:2` or `so2n:3`, or a path to an algebra file.
        #[arg(long)]
        algebra: String,
    },
}

#[derive(Subcommand, Debug)]
enum LqcCommand {
    /// Propagate moments through a circuit file.
    Run {
        /// Circuit file with an initial state and a gate list.
        #[arg(long)]
        circuit: PathBuf,
        /// Output path (default: a fixed name under $GCS_OUT_DIR or the working directory).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also synthesize a preparation circuit for the final state.
        #[arg(long)]
        recover_circuit: bool,
        /// Algebra, when the file's label is not a catalog label.
        #[arg(long)]
        algebra: Option<String>,
    },
}

#[derive(Serialize)]
struct ErrorRecord<'a> {
    error: &'a str,
    message: String,
}

#[derive(Serialize)]
struct TomoReport {
    algebra: String,
    hidden: HiddenSpec,
    shot_seed: u64,
    budget: ToleranceBudget,
    moments: MomentFile,
    circuit: CircuitFile,
    jacobi_steps: usize,
    total_ops: usize,
    total_shots: u64,
    achieved_d: f64,
    verification: Verification,
}

#[derive(Serialize)]
struct LqcOutput {
    #[serde(flatten)]
    moments: MomentFile,
    gcs: bool,
    purity_deficit: f64,
}

fn output_path(explicit: Option<PathBuf>, default_name: &str) -> PathBuf {
    explicit.unwrap_or_else(|| {
        let dir = std::env::var_os(OUT_DIR_VAR).map_or_else(|| PathBuf::from("."), PathBuf::from);
        dir.join(default_name)
    })
}

fn options(global: &Global) -> DiagonalizerOptions {
    DiagonalizerOptions {
        max_steps: global.max_steps,
        ..Default::default()
    }
}

fn budget(alg: &Algebra, global: &Global) -> Result<ToleranceBudget, Error> {
    let b = make_budget(
        alg,
        global.epsilon,
        global.delta,
        BudgetConstants::default(),
    )?;
    Ok(match global.shots_override {
        Some(0) => {
            return Err(Error::InvalidParameter(
                "--shots-override must be positive".into(),
            ))
        }
        Some(q) => b.with_shots(q),
        None => b,
    })
}

/// Resolves an algebra named in a data file, preferring an explicit override.
fn algebra_for(label: &str, explicit: Option<&str>) -> Result<Algebra, Error> {
    match explicit {
        Some(spec) => catalog::resolve(spec),
        None => by_label(label).map_err(|_| {
            Error::InvalidParameter(format!(
                "algebra `{label}` is not a catalog label; pass --algebra"
            ))
        }),
    }
}

fn check_label(alg: &Algebra, label: &str) -> Result<(), Error> {
    if alg.label() != label {
        return Err(Error::InvalidParameter(format!(
            "file refers to algebra `{label}` but `{}` was supplied",
            alg.label()
        )));
    }
    Ok(())
}

fn read_circuit(path: &Path) -> Result<CircuitFile, Error> {
    let value: serde_json::Value = read_json(path)?;
    let inner = value.get("circuit").cloned().unwrap_or(value);
    let file: CircuitFile = serde_json::from_value(inner)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    file.check()?;
    Ok(file)
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Error> {
    println!(
        "{}",
        serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?
    );
    Ok(())
}

fn run_algebra(action: AlgebraCommand) -> Result<(), Error> {
    match action {
        AlgebraCommand::List => {
            #[derive(Serialize)]
            struct Entry {
                name: &'static str,
                parameters: std::collections::BTreeMap<&'static str, u32>,
                description: &'static str,
            }
            let entries: Vec<Entry> = catalog::entries()
                .into_iter()
                .map(|e| Entry {
                    name: e.name,
                    parameters: e.parameters,
                    description: e.description,
                })
                .collect();
            print_json(&entries)
        }
        AlgebraCommand::Export {
            name,
            two_j,
            n,
            out,
        } => {
            let alg = match name.as_str() {
                "su2" => catalog::make_su2(two_j.unwrap_or(1))?,
                "so2n" => catalog::make_so2n(n.unwrap_or(3))?,
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "unknown catalog family `{other}`"
                    )))
                }
            };
            let path = output_path(out, &format!("{}.json", alg.label().replace(':', "_")));
            write_json(&path, &AlgebraFile::from_algebra(&alg))?;
            log::info!("wrote {} to {}", alg.label(), path.display());
            Ok(())
        }
        AlgebraCommand::Validate { algebra } => {
            let alg = catalog::resolve(&algebra)?;
            println!("{}", alg.validate());
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let global = cli.global;
    match cli.command {
        Command::Algebra { action } => run_algebra(action),
        Command::Synth {
            algebra,
            moments,
            out,
        } => {
            let alg = catalog::resolve(&algebra)?;
            let file: MomentFile = read_json(&moments)?;
            check_label(&alg, &file.algebra)?;
            let moments = MomentVector::from_file(&file)?;
            let budget = budget(&alg, &global)?;
            let report = synthesize(&alg, Source::Moments(&moments), &budget, &options(&global))?;
            log::info!("d-trace: {:?}", report.trace);
            let path = output_path(out, "circuit.json");
            write_json(&path, &report.circuit_file(None))?;
            log::info!(
                "wrote {} ops ({} jacobi) to {}",
                report.circuit.len(),
                report.jacobi_steps,
                path.display()
            );
            Ok(())
        }
        Command::TomoSim {
            algebra,
            hidden_ops,
            out,
        } => {
            let alg = catalog::resolve(&algebra)?;
            let hidden = hidden_gcs(&alg, global.seed, hidden_ops)?;
            let budget = budget(&alg, &global)?;
            let shot_seed = global.seed.wrapping_add(1);
            let source = Source::BlackBox {
                handle: &hidden,
                seed: shot_seed,
            };
            let report = synthesize(&alg, source, &budget, &options(&global))?;
            log::info!("d-trace: {:?}", report.trace);
            let spec = HiddenSpec {
                seed: global.seed,
                num_ops: hidden_ops,
            };
            let verification = verify(&alg, &report.circuit, hidden.state())?;
            let tomo = TomoReport {
                algebra: alg.label().to_string(),
                hidden: spec,
                shot_seed,
                moments: report.moments.to_file(alg.label()),
                circuit: report.circuit_file(Some(spec)),
                jacobi_steps: report.jacobi_steps,
                total_ops: report.circuit.len(),
                total_shots: report.total_shots.unwrap_or(0),
                achieved_d: report.achieved_d,
                budget: report.budget,
                verification,
            };
            let path = output_path(out, "report.json");
            write_json(&path, &tomo)?;
            log::info!(
                "distance {:.3e}; wrote {}",
                verification.distance,
                path.display()
            );
            Ok(())
        }
        Command::Verify {
            circuit,
            against,
            algebra,
            out,
        } => {
            let file = read_circuit(&circuit)?;
            let alg = algebra_for(&file.algebra, algebra.as_deref())?;
            if against != "hidden" {
                return Err(Error::InvalidParameter(format!(
                    "unsupported reference `{against}`"
                )));
            }
            let spec = file.hidden.ok_or_else(|| {
                Error::InvalidParameter("circuit carries no hidden-state record".into())
            })?;
            let hidden = hidden_gcs(&alg, spec.seed, spec.num_ops)?;
            let result = verify(&alg, &file.group_ops(), hidden.state())?;
            match out {
                Some(path) => write_json(&path, &result),
                None => print_json(&result),
            }
        }
        Command::Lqc {
            action:
                LqcCommand::Run {
                    circuit,
                    out,
                    recover_circuit,
                    algebra,
                },
        } => {
            let file: LqcFile = read_json(&circuit)?;
            let alg = algebra_for(&file.algebra, algebra.as_deref())?;
            let lqc = LqcCircuit::from_file(&alg, &file)?;
            let moments = propagate(&lqc);
            let cert = gcs_certificate(&alg, moments.values())?;
            let path = output_path(out, "moments.json");
            write_json(
                &path,
                &LqcOutput {
                    moments: moments.to_file(alg.label()),
                    gcs: cert.is_gcs,
                    purity_deficit: cert.deficit,
                },
            )?;
            log::info!(
                "propagated {} gates; wrote {}",
                lqc.gates.len(),
                path.display()
            );
            if recover_circuit {
                let budget = budget(&alg, &global)?;
                let report = final_state_query(&alg, &moments, &budget, &options(&global))?;
                let circuit_path = path.with_extension("circuit.json");
                write_json(&circuit_path, &report.circuit_file(None))?;
                log::info!("wrote recovered circuit to {}", circuit_path.display());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.global.quiet { "warn" } else { "info" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let record = ErrorRecord {
                error: err.kind(),
                message: err.to_string(),
            };
            eprintln!(
                "{}",
                serde_json::to_string(&record).unwrap_or_else(|_| err.to_string())
            );
            ExitCode::from(if err.is_numerical() { 2 } else { 1 })
        }
    }
}

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use relaygap::cutbounds::{ds_cutset_bound, gaussian_cutset_bound, ld_capacity};
use relaygap::experiments::{self, parse_matrix_json, ExperimentReport, Format};
use relaygap::netmodel::load_network_with;
use relaygap::reduction::{ds_reduce, ds_reduce_with_depth, ld_reduce};
use relaygap::theoremtrace::{ds_forward_chain, theorem_report};
use relaygap::{Error, Result, INF_GAIN};

#[derive(Parser)]
#[command(name = "relaygap", about = "Cut-set bounds of Gaussian relay networks and their deterministic models")]
struct Cli {
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Gain used for links given as "inf" and for strong links in experiments.
    #[arg(long, global = true, default_value_t = INF_GAIN)]
    inf_gain: f64,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Json)]
    format: OutFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReduceModel {
    Ld,
    Ds,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundModel {
    Gaussian,
    Ld,
    Ds,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a network file to its LD or DS counterpart.
    Reduce {
        network: PathBuf,
        #[arg(long, value_enum)]
        model: ReduceModel,
        /// DS input bit depth; defaults to the depth derived from the gains.
        #[arg(long)]
        depth: Option<u32>,
    },
    /// Per-cut values and the min-cut bound in one model.
    Bound {
        network: PathBuf,
        #[arg(long, value_enum)]
        model: BoundModel,
    },
    /// Replay the Gaussian-to-DS reduction chain on a real cut matrix.
    VerifyTheorem {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },
    /// Run a parameter sweep.
    Exp {
        #[command(subcommand)]
        which: Experiment,
    },
}

#[derive(Subcommand)]
enum Experiment {
    Counterexample {
        #[arg(long, default_value_t = 1)]
        k_min: u32,
        #[arg(long, default_value_t = 14)]
        k_max: u32,
    },
    PositiveGains {
        #[arg(long, default_value_t = 3)]
        k_min: u32,
        #[arg(long, default_value_t = 12)]
        k_max: u32,
    },
    Mimo {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        n: Option<u32>,
    },
}

fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Output text and whether every asserted property held.
fn run(cli: &Cli) -> Result<(String, bool)> {
    let json = matches!(cli.format, OutFormat::Json);
    match &cli.command {
        Command::Reduce { network, model, depth } => {
            let net = load_network_with(network, cli.inf_gain)?;
            let text = match model {
                ReduceModel::Ld => {
                    let ld = ld_reduce(&net);
                    if json {
                        serde_json::to_string_pretty(&ld)?
                    } else {
                        csv_table(
                            &["from", "to", "levels"],
                            ld.edges.iter().map(|e| vec![e.from.to_string(), e.to.to_string(), e.levels.to_string()]),
                        )?
                    }
                }
                ReduceModel::Ds => {
                    let ds = match depth {
                        Some(n) => ds_reduce_with_depth(&net, *n)?,
                        None => ds_reduce(&net),
                    };
                    if json {
                        serde_json::to_string_pretty(&ds)?
                    } else {
                        csv_table(
                            &["from", "to", "qgain_re", "qgain_im", "n"],
                            ds.edges.iter().map(|e| {
                                vec![
                                    e.from.to_string(),
                                    e.to.to_string(),
                                    e.qgain.re.to_string(),
                                    e.qgain.im.to_string(),
                                    ds.n.to_string(),
                                ]
                            }),
                        )?
                    }
                }
            };
            Ok((text, true))
        }
        Command::Bound { network, model } => {
            let net = load_network_with(network, cli.inf_gain)?;
            let report = match model {
                BoundModel::Gaussian => gaussian_cutset_bound(&net)?,
                BoundModel::Ld => ld_capacity(&ld_reduce(&net))?,
                BoundModel::Ds => ds_cutset_bound(&ds_reduce(&net))?,
            };
            let text = if json { serde_json::to_string_pretty(&report)? } else { report.to_csv()? };
            Ok((text, true))
        }
        Command::VerifyTheorem { matrix, n, samples } => {
            let h = parse_matrix_json(&std::fs::read_to_string(matrix)?)?;
            let chain = ds_forward_chain(&h, *n, *samples, cli.seed)?;
            let report = theorem_report(&chain)?;
            let text = if json {
                serde_json::to_string_pretty(&report)?
            } else {
                csv_table(
                    &["step", "mi_before_bits", "mi_after_bits", "loss_bits", "stated_bound_bits", "checked_bound_bits", "std_error_bits", "holds"],
                    report.steps.iter().map(|s| {
                        vec![
                            s.step.clone(),
                            s.mi_before_bits.to_string(),
                            s.mi_after_bits.to_string(),
                            s.loss_bits.to_string(),
                            s.stated_bound_bits.to_string(),
                            s.checked_bound_bits.to_string(),
                            s.std_error_bits.to_string(),
                            s.holds.to_string(),
                        ]
                    }),
                )?
            };
            Ok((text, report.all_hold))
        }
        Command::Exp { which } => {
            let report: ExperimentReport = match which {
                Experiment::Counterexample { k_min, k_max } => {
                    experiments::exp_counterexample(*k_min..=*k_max, cli.inf_gain, cli.seed)?
                }
                Experiment::PositiveGains { k_min, k_max } => {
                    experiments::exp_positive_gains(*k_min..=*k_max, cli.inf_gain, cli.seed)?
                }
                Experiment::Mimo { matrix, n } => {
                    let h = parse_matrix_json(&std::fs::read_to_string(matrix)?)?;
                    experiments::exp_mimo(&experiments::to_complex(&h), *n, cli.seed)?
                }
            };
            let format = if json { Format::Json } else { Format::Csv };
            Ok((report.render(format)?, report.all_passed()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((text, ok)) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &text),
                None => match writeln!(std::io::stdout().lock(), "{}", text.trim_end()) {
                    Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                    other => other,
                },
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("one or more asserted properties failed");
                ExitCode::from(1)
            }
        }
        Err(e @ Error::Certification { .. }) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use cvqo::protocols::{EprRecipe, GhzRecipe};
use cvqo_cli::figures::{
    fig1_csv, fig1_rows, fig3_csv, fig3_rows, fig4_csv, fig4_rows, SweepRange,
};
use cvqo_cli::reports::{
    epr_report_pair, ghz_report_pair, run_teleport, teleport_gain_sweep_csv, GhzGainChoice,
};
use cvqo_cli::verify::run_verify;

/// Exit codes: 0 success, 1 invalid arguments, 2 verification failure.
const EXIT_OK: u8 = 0;
const EXIT_BAD_ARGS: u8 = 1;
const EXIT_VERIFY_FAILED: u8 = 2;

#[derive(Parser)]
#[command(
    name = "cvqo",
    version,
    about = "Squeezed-light entanglement, local-OPA symmetrization and teleportation fidelities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct SweepArgs {
    /// Sweep as lo:hi:n (inclusive, n points); domain (0, 1].
    #[arg(long, default_value = "0.01:1.0:100")]
    range: String,
    /// Add a decibel column (-10 log10 of the swept variance).
    #[arg(long)]
    db: bool,
    #[arg(long, value_enum, default_value = "csv")]
    format: OutputFormat,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Accepted for interface uniformity; figure curves are deterministic.
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

#[derive(Args)]
struct EprSource {
    /// JSON file with a full recipe {v1_plus, v1_minus, v2_plus, v2_minus}.
    #[arg(long)]
    recipe: Option<PathBuf>,
    /// One squeezed beam (V1+ = S) mixed with vacuum.
    #[arg(long)]
    single_squeezed: Option<f64>,
    /// Beam 1 amplitude variance of a pure recipe.
    #[arg(long)]
    v1_plus: Option<f64>,
    /// Beam 2 phase variance of a pure recipe.
    #[arg(long)]
    v2_minus: Option<f64>,
}

impl EprSource {
    fn resolve(&self) -> Result<EprRecipe, String> {
        if let Some(path) = &self.recipe {
            if self.single_squeezed.is_some() || self.v1_plus.is_some() || self.v2_minus.is_some() {
                return Err("--recipe excludes the other recipe flags".into());
            }
            let text =
                std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            let raw: EprRecipe = serde_json::from_str(&text).map_err(|e| e.to_string())?;
            return EprRecipe::new(raw.v1_plus, raw.v1_minus, raw.v2_plus, raw.v2_minus)
                .map_err(|e| e.to_string());
        }
        if let Some(s) = self.single_squeezed {
            if self.v1_plus.is_some() || self.v2_minus.is_some() {
                return Err("--single-squeezed excludes --v1-plus/--v2-minus".into());
            }
            return EprRecipe::single_squeezed(s).map_err(|e| e.to_string());
        }
        if self.v1_plus.is_none() && self.v2_minus.is_none() {
            return Err(
                "need a recipe: --recipe FILE, --single-squeezed S, or --v1-plus/--v2-minus".into(),
            );
        }
        EprRecipe::pure(self.v1_plus.unwrap_or(1.0), self.v2_minus.unwrap_or(1.0))
            .map_err(|e| e.to_string())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Entanglement strength vs squeezing: s, product_two_beams, product_one_beam.
    Fig1 {
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Coherent-signal fidelity from one squeezed beam: s, f_no_opa, f_opa.
    Fig3 {
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Squeezed-signal fidelity with an unbiased resource: v, f_no_opa, f_opa.
    Fig4 {
        #[command(flatten)]
        sweep: SweepArgs,
        /// Squeezed variance of the signal.
        #[arg(long, default_value_t = 0.1)]
        vsqz: f64,
    },
    /// EPR correlations before/after local-OPA symmetrization (JSON).
    EprReport {
        #[command(flatten)]
        source: EprSource,
        /// OPA gain; defaults to sqrt(V1-/V2+).
        #[arg(long)]
        gain: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// GHZ correlations before/after one shared OPA gain (JSON).
    GhzReport {
        /// JSON file with a full recipe (six variances).
        #[arg(long)]
        recipe: Option<PathBuf>,
        /// One squeezed beam (V1+ = S) divided in three.
        #[arg(long)]
        single_squeezed: Option<f64>,
        /// Equal squeezing, beam 1 orthogonal to beams 2 and 3 (V1+ = S).
        #[arg(long)]
        equal_squeezed: Option<f64>,
        /// Balanced recipe with beams 2, 3 at this variance.
        #[arg(long)]
        maximal: Option<f64>,
        /// Shared OPA gain; defaults to the equalizing sqrt((V1-+2)/(V1++2)).
        #[arg(long)]
        gain: Option<f64>,
        /// Apply the published 1/sqrt(3)-prefactored gain expression instead.
        #[arg(long)]
        printed_gain: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate the teleporter against its closed form (JSON), or sweep the
    /// parametric gain to CSV with --sweep-gain.
    Teleport {
        /// Squeezed variance of resource input beam 1.
        #[arg(long, default_value_t = 1.0)]
        v1_plus: f64,
        /// Squeezed variance of resource input beam 2.
        #[arg(long, default_value_t = 1.0)]
        v2_minus: f64,
        /// Parametric gain; defaults to the optimal V_sqz*sqrt(V2-/V1+).
        #[arg(long)]
        gain: Option<f64>,
        /// Squeezed variance of the signal (1 = coherent).
        #[arg(long, default_value_t = 1.0)]
        vsqz: f64,
        /// Signal amplitude displacement.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        mean_plus: f64,
        /// Signal phase displacement.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        mean_minus: f64,
        /// Sweep the gain over lo:hi:n and emit CSV instead.
        #[arg(long)]
        sweep_gain: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the Monte-Carlo and Fock oracle cross-checks; exit 2 on failure.
    Verify {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        /// Multiplies every tolerance; exists to prove failure is detected.
        #[arg(long, default_value_t = 1.0)]
        tolerance_scale: f64,
    },
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, content).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout()
            .write_all(content.as_bytes())
            .map_err(|e| e.to_string()),
    }
}

fn json_doc<T: serde::Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report types serialize");
    text.push('\n');
    text
}

fn parse_unit_range(text: &str) -> Result<SweepRange, String> {
    let range = SweepRange::parse(text)?;
    range.require_unit_interval()?;
    Ok(range)
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Fig1 { sweep } => {
            let range = parse_unit_range(&sweep.range)?;
            let rows = fig1_rows(&range, sweep.db).map_err(|e| e.to_string())?;
            let content = match sweep.format {
                OutputFormat::Csv => fig1_csv(&rows),
                OutputFormat::Json => json_doc(&rows),
            };
            write_output(&sweep.out, &content)?;
            Ok(EXIT_OK)
        }
        Command::Fig3 { sweep } => {
            let range = parse_unit_range(&sweep.range)?;
            let rows = fig3_rows(&range, sweep.db).map_err(|e| e.to_string())?;
            let content = match sweep.format {
                OutputFormat::Csv => fig3_csv(&rows),
                OutputFormat::Json => json_doc(&rows),
            };
            write_output(&sweep.out, &content)?;
            Ok(EXIT_OK)
        }
        Command::Fig4 { sweep, vsqz } => {
            let range = parse_unit_range(&sweep.range)?;
            if vsqz <= 0.0 || !vsqz.is_finite() {
                return Err(format!("--vsqz must be positive (got {vsqz})"));
            }
            let rows = fig4_rows(&range, vsqz, sweep.db).map_err(|e| e.to_string())?;
            let content = match sweep.format {
                OutputFormat::Csv => fig4_csv(&rows),
                OutputFormat::Json => json_doc(&rows),
            };
            write_output(&sweep.out, &content)?;
            Ok(EXIT_OK)
        }
        Command::EprReport { source, gain, out } => {
            let recipe = source.resolve()?;
            let pair = epr_report_pair(&recipe, gain).map_err(|e| e.to_string())?;
            write_output(&out, &json_doc(&pair))?;
            Ok(EXIT_OK)
        }
        Command::GhzReport {
            recipe,
            single_squeezed,
            equal_squeezed,
            maximal,
            gain,
            printed_gain,
            out,
        } => {
            let sources = [
                recipe.is_some(),
                single_squeezed.is_some(),
                equal_squeezed.is_some(),
                maximal.is_some(),
            ];
            if sources.iter().filter(|&&b| b).count() != 1 {
                return Err(
                    "need exactly one of --recipe, --single-squeezed, --equal-squeezed, --maximal"
                        .into(),
                );
            }
            let recipe = if let Some(path) = recipe {
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| format!("{}: {e}", path.display()))?;
                let raw: GhzRecipe = serde_json::from_str(&text).map_err(|e| e.to_string())?;
                GhzRecipe::new(
                    raw.v1_plus,
                    raw.v1_minus,
                    raw.v2_plus,
                    raw.v2_minus,
                    raw.v3_plus,
                    raw.v3_minus,
                )
                .map_err(|e| e.to_string())?
            } else if let Some(s) = single_squeezed {
                GhzRecipe::single_squeezed(s).map_err(|e| e.to_string())?
            } else if let Some(s) = equal_squeezed {
                GhzRecipe::equal_squeezed(s).map_err(|e| e.to_string())?
            } else {
                GhzRecipe::maximal(maximal.unwrap()).map_err(|e| e.to_string())?
            };
            if gain.is_some() && printed_gain {
                return Err("--gain excludes --printed-gain".into());
            }
            let choice = match (gain, printed_gain) {
                (Some(g), _) => GhzGainChoice::Custom(g),
                (None, true) => GhzGainChoice::PrintedForm,
                (None, false) => GhzGainChoice::Equalizing,
            };
            let pair = ghz_report_pair(&recipe, choice).map_err(|e| e.to_string())?;
            write_output(&out, &json_doc(&pair))?;
            Ok(EXIT_OK)
        }
        Command::Teleport {
            v1_plus,
            v2_minus,
            gain,
            vsqz,
            mean_plus,
            mean_minus,
            sweep_gain,
            out,
        } => {
            if let Some(text) = sweep_gain {
                let range = SweepRange::parse(&text)?;
                if range.lo <= 0.0 {
                    return Err("gain sweep must stay positive".into());
                }
                let csv = teleport_gain_sweep_csv(v1_plus, v2_minus, vsqz, &range)
                    .map_err(|e| e.to_string())?;
                write_output(&out, &csv)?;
                return Ok(EXIT_OK);
            }
            let gain = match gain {
                Some(g) => g,
                None => cvqo::teleport::optimal_squeezed_signal_gain(v1_plus, v2_minus, vsqz)
                    .ok_or("no finite optimal gain for this resource; pass --gain")?,
            };
            let report = run_teleport(v1_plus, v2_minus, gain, vsqz, mean_plus, mean_minus)
                .map_err(|e| e.to_string())?;
            write_output(&out, &json_doc(&report))?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            seed,
            samples,
            tolerance_scale,
        } => {
            if samples < 1_000 {
                return Err(format!("--samples must be at least 1000 (got {samples})"));
            }
            if tolerance_scale <= 0.0 || !tolerance_scale.is_finite() {
                return Err(format!(
                    "--tolerance-scale must be positive (got {tolerance_scale})"
                ));
            }
            let summary = run_verify(seed, samples, tolerance_scale).map_err(|e| e.to_string())?;
            let mut line = serde_json::to_string(&summary).expect("summary serializes");
            line.push('\n');
            write_output(&None, &line)?;
            Ok(if summary.pass {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAILED
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_BAD_ARGS,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_BAD_ARGS)
        }
    }
}

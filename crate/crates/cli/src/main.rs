//! `seqent`: predictability analysis for interaction logs.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use seqent_cli::analyze::analyze_path;
use seqent_cli::config::RunConfig;
use seqent_cli::oracle::{oracle_rows, render};
use seqent_cli::predict::{dump_models, predict_stream};
use seqent_cli::report::{analyze_csv, exclusions_csv, histograms_csv, predict_csv, summary_csv};
use seqent_cli::simulate::{log_to_csv, simulate, write_log, ChainSpec};

/// Distinct exit code when no individual passes the analysis filters.
const EXIT_NO_INDIVIDUALS: u8 = 2;

#[derive(Parser)]
#[command(name = "seqent", version, about = "Quantify and predict interaction-sequence regularity", long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct SharedOpts {
    /// Time-bin width in seconds
    #[arg(long, default_value_t = 300)]
    bin_width: u64,

    /// Cap on gap symbols, in bins
    #[arg(long, default_value_t = 288)]
    gap_cap: u64,

    /// Minimum partner-sequence length for inclusion
    #[arg(long = "min-length", default_value_t = 50)]
    min_length: usize,

    /// Rolling-evaluation window in seconds
    #[arg(long, default_value_t = 604_800)]
    window: u64,

    /// Prediction list sizes, comma separated, ascending
    #[arg(long = "top-k", value_delimiter = ',', default_values_t = [1, 5])]
    top_k: Vec<usize>,

    /// Seed for synthetic generation
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Disable bridging transitions across window boundaries
    #[arg(long)]
    no_bridge: bool,

    /// Worker threads for per-individual analysis (0 = all cores)
    #[arg(long, default_value_t = 0)]
    workers: usize,

    /// Directory to write report files into (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl SharedOpts {
    fn run_config(&self) -> Result<RunConfig> {
        let config = RunConfig {
            bin_width: self.bin_width,
            gap_cap: self.gap_cap,
            min_sequence_length: self.min_length,
            window: self.window,
            ks: self.top_k.clone(),
            seed: self.seed,
            bridge: !self.no_bridge,
        };
        config.validate()?;
        Ok(config)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Entropy-rate reports per individual and population histograms
    Analyze {
        /// Event CSV with header time,ego,alter,location
        events: PathBuf,
        #[command(flatten)]
        shared: SharedOpts,
    },
    /// Rolling next-partner prediction accuracy per individual
    Predict {
        /// Event CSV with header time,ego,alter,location
        events: PathBuf,
        #[command(flatten)]
        shared: SharedOpts,
        /// Also write one model_EGO.csv edge dump per individual
        #[arg(long)]
        dump_models: Option<PathBuf>,
    },
    /// Generate a synthetic event log from a Markov chain
    Simulate {
        #[command(flatten)]
        shared: SharedOpts,
        /// Number of individuals
        #[arg(long, default_value_t = 1)]
        egos: usize,
        /// Number of chain states (with --stay)
        #[arg(long, default_value_t = 2)]
        states: usize,
        /// Stay probability of the symmetric chain
        #[arg(long, default_value_t = 0.9, conflicts_with = "matrix")]
        stay: f64,
        /// CSV file with an explicit K x K transition matrix
        #[arg(long)]
        matrix: Option<PathBuf>,
        /// Simulated span in seconds
        #[arg(long, default_value_t = 604_800)]
        span: u64,
        /// Output file (default: stdout)
        #[arg(long = "out-file")]
        out_file: Option<PathBuf>,
    },
    /// Match-length table from the fast and naive engines, with agreement
    Oracle {
        /// Sequence file, one symbol per line
        sequence: PathBuf,
    },
}

fn write_or_print(out: &Option<PathBuf>, name: &str, content: &str) -> Result<()> {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            let path = dir.join(name);
            fs::write(&path, content)
                .with_context(|| format!("cannot write {}", path.display()))?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
        None => {
            std::io::stdout().write_all(content.as_bytes())?;
            Ok(())
        }
    }
}

fn run_analyze(events: &Path, shared: &SharedOpts) -> Result<u8> {
    let config = shared.run_config()?;
    let report = analyze_path(events, &config, shared.workers)?;
    match shared.format {
        Format::Json => {
            let json = serde_json::to_string_pretty(&report)?;
            write_or_print(&shared.out, "analyze.json", &(json + "\n"))?;
        }
        Format::Csv => {
            write_or_print(&shared.out, "individuals.csv", &analyze_csv(&report))?;
            if shared.out.is_some() {
                write_or_print(
                    &shared.out,
                    "excluded.csv",
                    &exclusions_csv(&report.excluded),
                )?;
                write_or_print(&shared.out, "summary.csv", &summary_csv(&report.summary))?;
                write_or_print(
                    &shared.out,
                    "histograms.csv",
                    &histograms_csv(&report.histograms),
                )?;
            }
        }
    }
    if report.individuals.is_empty() {
        eprintln!("no individuals passed the length filter");
        return Ok(EXIT_NO_INDIVIDUALS);
    }
    Ok(0)
}

fn run_predict(events: &Path, shared: &SharedOpts, dump: &Option<PathBuf>) -> Result<u8> {
    let config = shared.run_config()?;
    let file =
        fs::File::open(events).with_context(|| format!("cannot open {}", events.display()))?;
    let log = seqent::ingest::parse_event_log(std::io::BufReader::new(file), config.bin_width)?;
    let stream = seqent::ingest::bin_events(&log);
    let report = predict_stream(&stream, &config, shared.workers);
    if let Some(dir) = dump {
        dump_models(&stream, dir)?;
    }
    match shared.format {
        Format::Json => {
            let json = serde_json::to_string_pretty(&report)?;
            write_or_print(&shared.out, "predict.json", &(json + "\n"))?;
        }
        Format::Csv => {
            write_or_print(&shared.out, "predictions.csv", &predict_csv(&report))?;
            if shared.out.is_some() {
                write_or_print(
                    &shared.out,
                    "excluded.csv",
                    &exclusions_csv(&report.excluded),
                )?;
            }
        }
    }
    Ok(0)
}

fn run_simulate(
    shared: &SharedOpts,
    egos: usize,
    states: usize,
    stay: f64,
    matrix: &Option<PathBuf>,
    span: u64,
    out_file: &Option<PathBuf>,
) -> Result<u8> {
    let config = shared.run_config()?;
    let spec = match matrix {
        Some(path) => ChainSpec::MatrixFile(path.clone()),
        None => ChainSpec::Stay { states, stay },
    };
    let log = simulate(&spec, egos, span, &config)?;
    match out_file {
        Some(path) => write_log(&log, path)?,
        None => print!("{}", log_to_csv(&log)?),
    }
    Ok(0)
}

fn run_oracle(sequence: &Path) -> Result<u8> {
    let file =
        fs::File::open(sequence).with_context(|| format!("cannot open {}", sequence.display()))?;
    let rows = oracle_rows(std::io::BufReader::new(file))?;
    let (table, all_ok) = render(&rows);
    print!("{table}");
    if all_ok {
        Ok(0)
    } else {
        eprintln!("match-length engines disagree");
        Ok(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Analyze { events, shared } => run_analyze(events, shared),
        Command::Predict {
            events,
            shared,
            dump_models,
        } => run_predict(events, shared, dump_models),
        Command::Simulate {
            shared,
            egos,
            states,
            stay,
            matrix,
            span,
            out_file,
        } => run_simulate(shared, *egos, *states, *stay, matrix, *span, out_file),
        Command::Oracle { sequence } => run_oracle(sequence),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

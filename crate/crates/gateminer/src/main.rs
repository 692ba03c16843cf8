//! Batch CLI wiring the gate-mining pipeline into reproducible workflows.
//!
//! Exit codes: 0 success, 2 usage error, 3 path/IO error, 4 malformed
//! input, 5 internal error. Failures print a single line
//! `error: <kind>: <message>` to stderr.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use gateminer::census::{accumulate, ExtractionRecord};
use gateminer::charprops::optical_band_gap;
use gateminer::circuit::{netlist_from_sop, netlist_to_dot, state_graph_to_dot};
use gateminer::logic::{minimize, SopJson, SopStyle, TruthTable};
use gateminer::pipeline::{extract_batch, Extraction};
use gateminer::recording::{read_recording, write_recording, Recording};
use gateminer::signal::PeakConfig;
use gateminer::synth::{generate, generate_census_fixture, SynthConfig};

const EXIT_IO: u8 = 3;
const EXIT_MALFORMED: u8 = 4;
const EXIT_INTERNAL: u8 = 5;

#[derive(Parser)]
#[command(
    name = "gateminer",
    about = "Mine Boolean logic gates from colloid voltage recordings",
    after_help = "Exit codes: 0 success, 2 usage error, 3 path/IO error, \
                  4 malformed input, 5 internal error.\n\
                  GATEMINER_THREADS caps the worker count (default: available parallelism)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SopFormat {
    Plain,
    Tex,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum NetlistFormat {
    Dot,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Generate synthetic recording(s) from a generator config JSON
    Gen {
        /// Generator config JSON (targets, amplitudes, noise, ...)
        #[arg(long)]
        config: PathBuf,
        /// RNG seed; required, all randomness flows through it
        #[arg(long)]
        seed: u64,
        /// Output directory for recording CSV + manifest pairs
        #[arg(long)]
        out: PathBuf,
        /// Census fixture spec JSON `[{"bits": "...", "count": n}, ...]`;
        /// one clean recording per occurrence instead of a single recording
        #[arg(long)]
        fixture_spec: Option<PathBuf>,
    },
    /// Extract per-threshold records from recording CSV file(s)
    Extract {
        /// Recording CSV file, or directory of them
        #[arg(long)]
        input: PathBuf,
        /// Output path for the extraction-record JSON array ("-" = stdout)
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Minimize a truth table to a sum-of-products expression
    Minimize {
        /// Number of inputs
        #[arg(long)]
        n: usize,
        /// Output bits, index = input-state ordinal (e.g. 1110 for NAND)
        #[arg(long)]
        bits: String,
        #[arg(long, value_enum, default_value = "plain")]
        format: SopFormat,
    },
    /// Aggregate extraction-record JSON files into a histogram and report
    Census {
        /// Directory of extraction-record JSON files (or a single file)
        #[arg(long)]
        input: PathBuf,
        /// Output directory for histogram.csv and report.json
        #[arg(long)]
        out: PathBuf,
        /// Entries in the top-k report
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
    /// Emit the state graph of a recording as DOT
    Graph {
        #[arg(long)]
        input: PathBuf,
        /// Threshold (mV) to binarize at; defaults to the first manifest threshold
        #[arg(long)]
        threshold: Option<f64>,
        /// Output path ("-" = stdout)
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Build a gate netlist from an SOP JSON file
    Netlist {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "dot")]
        format: NetlistFormat,
        /// Give every negated literal its own NOT gate
        #[arg(long)]
        no_share_not: bool,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Optical band gap (eV) from an absorbance wavelength (nm)
    Bandgap {
        #[arg(allow_negative_numbers = true)]
        lambda_nm: f64,
    },
}

struct CliError {
    code: u8,
    kind: &'static str,
    message: String,
}

impl CliError {
    fn io(message: impl ToString) -> Self {
        Self {
            code: EXIT_IO,
            kind: "io",
            message: message.to_string(),
        }
    }

    fn malformed(message: impl ToString) -> Self {
        Self {
            code: EXIT_MALFORMED,
            kind: "malformed-input",
            message: message.to_string(),
        }
    }

    fn internal(message: impl ToString) -> Self {
        Self {
            code: EXIT_INTERNAL,
            kind: "internal",
            message: message.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_thread_pool();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}: {}", e.kind, e.message);
            ExitCode::from(e.code)
        }
    }
}

#[cfg(feature = "parallel")]
fn init_thread_pool() {
    if let Ok(v) = std::env::var("GATEMINER_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn init_thread_pool() {}

fn emit(out: &str, text: &str) -> Result<(), CliError> {
    if out == "-" {
        print!("{text}");
        Ok(())
    } else {
        fs::write(out, text).map_err(CliError::io)
    }
}

/// Recording CSVs under a path, input-path-sorted for deterministic output.
fn recording_paths(input: &Path) -> Result<Vec<PathBuf>, CliError> {
    if input.is_file() {
        return Ok(vec![input.to_path_buf()]);
    }
    let mut paths = Vec::new();
    for entry in fs::read_dir(input).map_err(CliError::io)? {
        let path = entry.map_err(CliError::io)?.path();
        if path.extension().is_some_and(|e| e == "csv") {
            paths.push(path);
        }
    }
    paths.sort();
    if paths.is_empty() {
        return Err(CliError::io(format!(
            "no recording CSV files under {}",
            input.display()
        )));
    }
    Ok(paths)
}

fn load_recordings(input: &Path) -> Result<Vec<Recording>, CliError> {
    recording_paths(input)?
        .iter()
        .map(|p| {
            let loaded = read_recording(p).map_err(CliError::malformed)?;
            for w in &loaded.warnings {
                eprintln!("warning: {}: {w}", p.display());
            }
            Ok(loaded.recording)
        })
        .collect()
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Gen {
            config,
            seed,
            out,
            fixture_spec,
        } => {
            let text = fs::read_to_string(&config).map_err(CliError::io)?;
            let mut cfg: SynthConfig = serde_json::from_str(&text).map_err(CliError::malformed)?;
            cfg.seed = seed;
            fs::create_dir_all(&out).map_err(CliError::io)?;
            let recordings = match fixture_spec {
                None => vec![generate(&cfg).map_err(CliError::malformed)?],
                Some(path) => {
                    #[derive(serde::Deserialize)]
                    struct FixtureEntry {
                        bits: String,
                        count: u64,
                    }
                    let text = fs::read_to_string(&path).map_err(CliError::io)?;
                    let entries: Vec<FixtureEntry> =
                        serde_json::from_str(&text).map_err(CliError::malformed)?;
                    let spec = entries
                        .iter()
                        .map(|e| {
                            TruthTable::from_bits(cfg.n_inputs, &e.bits)
                                .map(|t| (t, e.count))
                                .map_err(CliError::malformed)
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    generate_census_fixture(&spec, &cfg).map_err(CliError::malformed)?
                }
            };
            let width = recordings.len().to_string().len().max(3);
            for rec in &recordings {
                let path = out.join(format!(
                    "rec_{:0width$}.csv",
                    rec.meta.repeat_index,
                    width = width
                ));
                write_recording(rec, &path).map_err(CliError::io)?;
            }
            eprintln!(
                "wrote {} recording(s) to {}",
                recordings.len(),
                out.display()
            );
            Ok(())
        }

        Command::Extract { input, out } => {
            let recordings = load_recordings(&input)?;
            let extractions =
                extract_batch(&recordings, &PeakConfig::default()).map_err(CliError::malformed)?;
            let records: Vec<&ExtractionRecord> = extractions
                .iter()
                .flat_map(|e: &Extraction| e.records.iter())
                .collect();
            let json = serde_json::to_string_pretty(&records).map_err(CliError::internal)?;
            emit(&out, &(json + "\n"))
        }

        Command::Minimize { n, bits, format } => {
            let table = TruthTable::from_bits(n, &bits).map_err(CliError::malformed)?;
            let sop = minimize(&table);
            let text = match format {
                SopFormat::Plain => sop.format(SopStyle::Plain),
                SopFormat::Tex => sop.format(SopStyle::Tex),
                SopFormat::Json => serde_json::to_string_pretty(&SopJson::from_sop(&sop))
                    .map_err(CliError::internal)?,
            };
            println!("{text}");
            Ok(())
        }

        Command::Census { input, out, top } => {
            let mut files = Vec::new();
            if input.is_file() {
                files.push(input.clone());
            } else {
                for entry in fs::read_dir(&input).map_err(CliError::io)? {
                    let path = entry.map_err(CliError::io)?.path();
                    if path.extension().is_some_and(|e| e == "json") {
                        files.push(path);
                    }
                }
                files.sort();
            }
            let mut records: Vec<ExtractionRecord> = Vec::new();
            for file in &files {
                let text = fs::read_to_string(file).map_err(CliError::io)?;
                let mut batch: Vec<ExtractionRecord> =
                    serde_json::from_str(&text).map_err(CliError::malformed)?;
                records.append(&mut batch);
            }
            let n_inputs = records
                .first()
                .map(|r| r.n_inputs)
                .ok_or_else(|| CliError::malformed("no extraction records found"))?;
            let census = accumulate(n_inputs, &records).map_err(CliError::malformed)?;
            fs::create_dir_all(&out).map_err(CliError::io)?;
            fs::write(out.join("histogram.csv"), census.histogram_csv()).map_err(CliError::io)?;
            let report = serde_json::to_string_pretty(&census.report_json(top))
                .map_err(CliError::internal)?;
            fs::write(out.join("report.json"), report + "\n").map_err(CliError::io)?;
            eprintln!(
                "census: {} records, {} distinct functions",
                census.total_records(),
                census.distinct_functions()
            );
            Ok(())
        }

        Command::Graph {
            input,
            threshold,
            out,
        } => {
            let loaded = read_recording(&input).map_err(CliError::malformed)?;
            let rec = loaded.recording;
            let ex = gateminer::pipeline::extract_recording(&rec, &PeakConfig::default())
                .map_err(CliError::malformed)?;
            let thresholds = &rec.meta.thresholds_mv;
            let idx = match threshold {
                None => 0,
                Some(t) => thresholds.iter().position(|&x| x == t).ok_or_else(|| {
                    CliError::malformed(format!("threshold {t} not in manifest {thresholds:?}"))
                })?,
            };
            emit(&out, &state_graph_to_dot(&ex.graphs[idx]))
        }

        Command::Netlist {
            input,
            format,
            no_share_not,
            out,
        } => {
            let text = fs::read_to_string(&input).map_err(CliError::io)?;
            let sop_json: SopJson = serde_json::from_str(&text).map_err(CliError::malformed)?;
            let sop = sop_json.to_sop().map_err(CliError::malformed)?;
            let netlist = netlist_from_sop(&sop, !no_share_not).map_err(CliError::malformed)?;
            let rendered = match format {
                NetlistFormat::Dot => netlist_to_dot(&netlist),
                NetlistFormat::Json => {
                    serde_json::to_string_pretty(&netlist).map_err(CliError::internal)? + "\n"
                }
            };
            emit(&out, &rendered)
        }

        Command::Bandgap { lambda_nm } => {
            let r = optical_band_gap(lambda_nm).map_err(CliError::malformed)?;
            // four significant figures
            let prec = (3 - r.e_g_ev.abs().log10().floor() as i32).max(0) as usize;
            println!("{:.*}", prec, r.e_g_ev);
            Ok(())
        }
    }
}

//! `charmfl` command line: `rank` renders suspiciousness rankings, `eval`
//! measures where known faults land in them.
//!
//! Exit codes: 0 on success, 1 when the input fails validation, 2 on usage
//! errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use charmfl_core::eval::{evaluate, GroundTruth, DEFAULT_TOP_N};
use charmfl_core::metrics::parse_metrics;
use charmfl_core::report::{
    build_lists, render_eval_json, render_eval_table, render_html, render_json, render_table, Format, RunConfig,
};
use charmfl_core::{load_spectra, Error, Granularity, MetricId, SpectraSet, TieStrategy};
use clap::{Args, Parser, Subcommand};

/// Environment variable that turns off terminal colors.
pub const NO_COLOR_ENV: &str = "CHARM_NO_COLOR";

#[derive(Debug, Parser)]
#[command(name = "charmfl", version, about = "Spectrum-based fault localization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rank program elements by suspiciousness.
    Rank(RankArgs),
    /// Report the rank of known faulty statements and top-N hits.
    Eval(EvalArgs),
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Spectra document; repeat to merge shards.
    #[arg(long, required = true, value_name = "PATH")]
    spectra: Vec<PathBuf>,

    /// tarantula, ochiai, dstar[N] or wong2; repeat or comma-separate.
    #[arg(long = "metric", value_name = "NAME")]
    metrics: Vec<String>,

    /// Write the report here instead of standard output.
    #[arg(long = "out", value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RankArgs {
    #[command(flatten)]
    input: InputArgs,

    #[arg(long, default_value = "statement", value_parser = parse_from_str::<Granularity>)]
    granularity: Granularity,

    #[arg(long, default_value = "min", value_parser = parse_from_str::<TieStrategy>)]
    tie: TieStrategy,

    /// Keep the first N entries (ties at the cut are kept).
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    top: Option<u64>,

    #[arg(long, default_value = "table", value_parser = parse_from_str::<Format>)]
    format: Format,

    /// Directory the spectra's file paths are relative to (HTML only).
    #[arg(long, value_name = "DIR")]
    source_root: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    input: InputArgs,

    /// Faulty statements as file:line (or element ids), comma-separated.
    #[arg(long, required = true, value_name = "LOCATIONS")]
    truth: String,

    /// Comma-separated N values.
    #[arg(long, value_name = "N,...", value_delimiter = ',', value_parser = clap::value_parser!(u64).range(1..))]
    top: Vec<u64>,

    #[arg(long, default_value = "table", value_parser = parse_eval_format)]
    format: Format,
}

fn parse_from_str<T: std::str::FromStr<Err = String>>(s: &str) -> Result<T, String> {
    s.parse()
}

fn parse_eval_format(s: &str) -> Result<Format, String> {
    match s.parse()? {
        Format::Html => Err("eval supports table or json".into()),
        f => Ok(f),
    }
}

enum Failure {
    Usage(String),
    Input(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

fn metrics_arg(names: &[String]) -> Result<Vec<MetricId>, Failure> {
    if names.is_empty() {
        return Ok(MetricId::ALL.to_vec());
    }
    parse_metrics(names).map_err(|e| Failure::Usage(e.to_string()))
}

fn load(paths: &[PathBuf]) -> Result<SpectraSet, Failure> {
    Ok(load_spectra(paths)?)
}

fn emit(text: &str, out: Option<&PathBuf>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            let _ = writeln!(stderr, "wrote {}", path.display());
        }
        None => {
            let _ = stdout.write_all(text.as_bytes());
        }
    }
    Ok(())
}

fn rank(args: RankArgs, color: bool, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    let config = RunConfig {
        spectra_paths: args.input.spectra,
        metrics: metrics_arg(&args.input.metrics)?,
        granularity: args.granularity,
        tie: args.tie,
        top_n: args.top.map(|n| n as usize),
        format: args.format,
        color: color && args.input.out.is_none(),
        output_path: args.input.out,
        source_root: args.source_root,
    };
    let spectra = load(&config.spectra_paths)?;
    let lists = build_lists::<f64>(&spectra, &config)?;
    let text = match config.format {
        Format::Table => render_table(&lists, &spectra, &config),
        Format::Json => render_json(&lists, &spectra, &config),
        Format::Html => {
            let report = render_html(&lists, &spectra, &config);
            for w in &report.warnings {
                let _ = writeln!(stderr, "warning: {w}");
            }
            report.html
        }
    };
    emit(&text, config.output_path.as_ref(), stdout, stderr)
}

fn eval(args: EvalArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    let metrics = metrics_arg(&args.input.metrics)?;
    let truth = GroundTruth::parse(&args.truth).map_err(|e| Failure::Usage(e.to_string()))?;
    let n_values: Vec<usize> = if args.top.is_empty() {
        DEFAULT_TOP_N.to_vec()
    } else {
        args.top.iter().map(|&n| n as usize).collect()
    };
    let spectra = load(&args.input.spectra)?;
    let verdicts = evaluate::<f64>(&spectra, &truth, &metrics, &n_values)?;
    let text = match args.format {
        Format::Json => render_eval_json(&verdicts, &truth, &spectra),
        _ => render_eval_table(&verdicts, &spectra),
    };
    emit(&text, args.input.out.as_ref(), stdout, stderr)
}

/// Runs the CLI against the given writers. `color` allows ANSI colors in
/// terminal tables; it is ignored when [`NO_COLOR_ENV`] is set.
pub fn run_cli_with<I, S>(argv: I, color: bool, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = stderr.write_all(rendered.as_bytes());
            } else {
                let _ = stdout.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    let color = color && std::env::var_os(NO_COLOR_ENV).is_none();
    let result = match cli.command {
        Command::Rank(args) => rank(args, color, stdout, stderr),
        Command::Eval(args) => eval(args, stdout, stderr),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
        Err(Failure::Input(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}

/// Runs the CLI on the process's standard streams.
pub fn run_cli<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    use std::io::IsTerminal;
    let color = std::io::stdout().is_terminal();
    run_cli_with(argv, color, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

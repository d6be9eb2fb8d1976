//! Command-line front end: `evaluate` and `roc`.
//!
//! Exit status: 0 on success, 1 on parse failure under `--strict` or on
//! degenerate input, 2 on usage errors (bad flags, missing file).

use std::fs::File;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::counts::{apply_threshold, ConfusionCounts};
use crate::ingest::{parse_hard_labels, parse_scores, IngestError, InputConfig, InputMode, ParseReport};
use crate::report::{
    render_json, render_roc_json, render_roc_text, render_svg, render_text, EvaluationReport,
    ReportMeta, ZeroDivision,
};
use crate::roc::roc_points;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "bineval", version, about = "Evaluate binary classifier predictions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Confusion matrix and metrics from hard labels or thresholded scores
    Evaluate(EvaluateArgs),
    /// ROC curve and AUC from scores
    Roc(RocArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    HardLabels,
    Scores,
}

impl From<ModeArg> for InputMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::HardLabels => InputMode::HardLabels,
            ModeArg::Scores => InputMode::Scores,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ZeroDivisionArg {
    Undefined,
    Zero,
}

impl From<ZeroDivisionArg> for ZeroDivision {
    fn from(z: ZeroDivisionArg) -> Self {
        match z {
            ZeroDivisionArg::Undefined => ZeroDivision::Undefined,
            ZeroDivisionArg::Zero => ZeroDivision::Zero,
        }
    }
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// Input file, or "-" for standard input
    input: String,
    /// Label value treated as the positive class
    #[arg(long, default_value = "1")]
    positive_label: String,
    /// Only label value accepted as negative (default: any non-positive value)
    #[arg(long)]
    negative_label: Option<String>,
    /// Field delimiter (a single character, or "tab")
    #[arg(long, default_value = ",", value_parser = parse_delimiter)]
    delimiter: char,
    /// Skip the first line
    #[arg(long)]
    header: bool,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Rendering of undefined metrics
    #[arg(long, value_enum, default_value_t = ZeroDivisionArg::Undefined)]
    zero_division: ZeroDivisionArg,
    /// Abort on the first malformed record
    #[arg(long)]
    strict: bool,
}

#[derive(Args, Debug)]
struct EvaluateArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, value_enum, default_value_t = ModeArg::HardLabels)]
    mode: ModeArg,
    /// Decision threshold (score >= threshold predicts positive); scores mode only
    #[arg(long, allow_negative_numbers = true)]
    threshold: Option<f64>,
}

#[derive(Args, Debug)]
struct RocArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Input mode; only "scores" is valid here
    #[arg(long, value_enum, default_value_t = ModeArg::Scores)]
    mode: ModeArg,
    /// Also write an SVG plot of the curve to this path
    #[arg(long)]
    svg: Option<PathBuf>,
}

fn parse_delimiter(s: &str) -> Result<char, String> {
    match s {
        "tab" | "\\t" => Ok('\t'),
        _ => {
            let mut chars = s.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) if c != '\n' && c != '\r' => Ok(c),
                _ => Err(format!("expected a single character, got {s:?}")),
            }
        }
    }
}

enum Failure {
    Usage(String),
    Run(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Run(_) => EXIT_FAILURE,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Run(m) => m,
        }
    }
}

impl From<IngestError> for Failure {
    fn from(e: IngestError) -> Self {
        match e {
            IngestError::Config(_) | IngestError::WrongMode { .. } => Failure::Usage(e.to_string()),
            IngestError::Strict { .. } | IngestError::Io(_) => Failure::Run(e.to_string()),
        }
    }
}

/// Runs the tool with `argv` (including the program name) against the given
/// streams and returns the process exit status.
pub fn run<I, S>(
    argv: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            // --help and --version exit successfully
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };

    let result = match cli.command {
        Command::Evaluate(args) => evaluate(args, stdin, stdout, stderr),
        Command::Roc(args) => roc(args, stdin, stdout, stderr),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message());
            f.code()
        }
    }
}

fn open_input<'a>(path: &str, stdin: &'a mut dyn Read) -> Result<Box<dyn BufRead + 'a>, Failure> {
    if path == "-" {
        Ok(Box::new(BufReader::new(stdin)))
    } else {
        File::open(path)
            .map(|f| Box::new(BufReader::new(f)) as Box<dyn BufRead>)
            .map_err(|e| Failure::Usage(format!("cannot open input {path:?}: {e}")))
    }
}

fn input_config(common: &CommonArgs, mode: InputMode) -> InputConfig {
    InputConfig {
        mode,
        positive_label: common.positive_label.clone(),
        negative_label: common.negative_label.clone(),
        delimiter: common.delimiter,
        has_header: common.header,
        strict: common.strict,
    }
}

fn report_meta(common: &CommonArgs, cfg: &InputConfig, threshold: Option<f64>, parsed: &ParseReport) -> ReportMeta {
    ReportMeta {
        input: common.input.clone(),
        mode: cfg.mode,
        positive_label: cfg.positive_label.clone(),
        negative_label: cfg.negative_label.clone(),
        delimiter: cfg.delimiter,
        has_header: cfg.has_header,
        strict: cfg.strict,
        threshold,
        zero_division: common.zero_division.into(),
        records_read: parsed.records_read,
        records_accepted: parsed.records_accepted,
    }
}

fn warn_failures(parsed: &ParseReport, stderr: &mut dyn Write) {
    for f in &parsed.failures {
        let _ = writeln!(stderr, "warning: line {}: {}", f.line, f.reason);
    }
}

fn emit(stdout: &mut dyn Write, text: &str) -> Result<(), Failure> {
    stdout
        .write_all(text.as_bytes())
        .and_then(|_| stdout.flush())
        .map_err(|e| Failure::Run(format!("cannot write output: {e}")))
}

fn evaluate(
    args: EvaluateArgs,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), Failure> {
    let mode: InputMode = args.mode.into();
    match (mode, args.threshold) {
        (InputMode::Scores, None) => {
            return Err(Failure::Usage("--threshold is required with --mode scores".into()))
        }
        (InputMode::HardLabels, Some(_)) => {
            return Err(Failure::Usage("--threshold is only valid with --mode scores".into()))
        }
        (_, Some(t)) if t.is_nan() => {
            return Err(Failure::Usage("--threshold must be a number".into()))
        }
        _ => {}
    }

    let cfg = input_config(&args.common, mode);
    cfg.validate()?;
    let reader = open_input(&args.common.input, stdin)?;

    let (counts, parsed) = match mode {
        InputMode::HardLabels => {
            let (preds, parsed) = parse_hard_labels(reader, &cfg)?;
            let counts = ConfusionCounts::from_predictions(&preds).map_err(|e| Failure::Run(e.to_string()))?;
            (counts, parsed)
        }
        InputMode::Scores => {
            let (samples, parsed) = parse_scores(reader, &cfg)?;
            let threshold = args.threshold.expect("checked above");
            let preds = apply_threshold(&samples, threshold).map_err(|e| Failure::Run(e.to_string()))?;
            let counts = ConfusionCounts::from_predictions(&preds).map_err(|e| Failure::Run(e.to_string()))?;
            (counts, parsed)
        }
    };
    warn_failures(&parsed, stderr);

    let report = EvaluationReport::new(counts, report_meta(&args.common, &cfg, args.threshold, &parsed));
    let out = match args.common.format {
        FormatArg::Text => render_text(&report),
        FormatArg::Json => render_json(&report),
    };
    emit(stdout, &out)
}

fn roc(
    args: RocArgs,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), Failure> {
    if args.mode != ModeArg::Scores {
        return Err(Failure::Usage("--mode: roc requires scores input".into()));
    }
    let cfg = input_config(&args.common, InputMode::Scores);
    cfg.validate()?;
    let reader = open_input(&args.common.input, stdin)?;
    let (samples, parsed) = parse_scores(reader, &cfg)?;
    warn_failures(&parsed, stderr);

    let curve = roc_points(&samples).map_err(|e| Failure::Run(e.to_string()))?;
    let meta = report_meta(&args.common, &cfg, None, &parsed);

    if let Some(path) = &args.svg {
        let title = format!("ROC curve: {}", args.common.input);
        std::fs::write(path, render_svg(&curve, &title))
            .map_err(|e| Failure::Run(format!("cannot write {}: {e}", path.display())))?;
    }

    let out = match args.common.format {
        FormatArg::Text => render_roc_text(&curve, &meta),
        FormatArg::Json => render_roc_json(&curve, &meta),
    };
    emit(stdout, &out)
}

/// Entry point for the binary.
pub fn main_with_std() -> i32 {
    let stdin = io::stdin();
    let mut stdin = stdin.lock();
    let stdout = io::stdout();
    let mut stdout = stdout.lock();
    let stderr = io::stderr();
    let mut stderr = stderr.lock();
    run(std::env::args_os(), &mut stdin, &mut stdout, &mut stderr)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str], input: &str) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["bineval"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut input.as_bytes(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn evaluate_stdin() {
        let (code, out, _) = run_str(&["evaluate", "-"], "1,1\n1,1\n1,1\n1,1\n1,0\n1,0\n0,1\n0,0\n0,0\n0,0\n");
        assert_eq!(code, 0);
        assert!(out.contains("\nACC 0.700000\n"));
        assert!(out.contains("\nMCC 0.408248\n"));
    }

    #[test]
    fn usage_errors() {
        let (code, _, err) = run_str(&["evaluate", "-", "--bogus"], "");
        assert_eq!(code, 2);
        assert!(err.contains("--bogus"));

        let (code, _, err) = run_str(&["evaluate", "-", "--mode", "scores"], "");
        assert_eq!(code, 2);
        assert!(err.contains("--threshold"));

        let (code, _, err) = run_str(&["evaluate", "-", "--threshold", "0.5"], "");
        assert_eq!(code, 2);
        assert!(err.contains("--threshold"));

        let (code, _, err) = run_str(&["roc", "-", "--mode", "hard-labels"], "");
        assert_eq!(code, 2);
        assert!(err.contains("--mode"));

        let (code, _, _) = run_str(&["evaluate", "/nonexistent/file.csv"], "");
        assert_eq!(code, 2);

        let (code, _, _) = run_str(&["evaluate", "-", "--delimiter", "ab"], "");
        assert_eq!(code, 2);

        let (code, _, _) = run_str(&["evaluate", "-", "--negative-label", "1"], "");
        assert_eq!(code, 2);
    }

    #[test]
    fn help_is_success() {
        let (code, _, _) = run_str(&["--help"], "");
        assert_eq!(code, 0);
    }

    #[test]
    fn roc_single_class() {
        let (code, _, err) = run_str(&["roc", "-"], "1,0.9\n1,0.3\n");
        assert_eq!(code, 1);
        assert!(err.contains("need both classes"));
    }

    #[test]
    fn strict_failure_exit() {
        let (code, _, err) = run_str(&["evaluate", "-", "--strict"], "1,1\nbad\n");
        assert_eq!(code, 1);
        assert!(err.contains("line 2"));
        let (code, out, err) = run_str(&["evaluate", "-"], "1,1\nbad\n");
        assert_eq!(code, 0);
        assert!(err.contains("warning: line 2"));
        assert!(out.contains("records_accepted: 1"));
    }

    #[test]
    fn negative_threshold_and_tab_delimiter() {
        let (code, out, _) = run_str(
            &["evaluate", "-", "--mode", "scores", "--threshold", "-0.5", "--delimiter", "tab"],
            "1\t-0.2\n0\t-0.9\n",
        );
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("\nACC 1.000000\n"));
    }

    #[test]
    fn json_format() {
        let (code, out, _) = run_str(&["roc", "-", "--format", "json"], "1,0.9\n0,0.8\n1,0.7\n0,0.6\n");
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["roc"]["auc"], 0.75);
        assert!(v.get("counts").is_none());
    }
}

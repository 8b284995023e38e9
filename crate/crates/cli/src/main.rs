//! `distill`: clean, assess, evaluate and score code-comment datasets.

mod inputs;
mod settings;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use distill::cleaner::write_outcomes;
use distill::corpus::write_jsonl;
use distill::metrics::{evaluate_detectors, score_corpus, BleuMode};
use distill::{assess, clean_dataset, render_report, ReportFormat};

use settings::Settings;

#[derive(Parser)]
#[command(name = "distill", version, about = "Detect and clean noisy code-comment pairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Remove or repair noisy pairs and write the distilled dataset.
    Clean(CleanArgs),
    /// Report noise statistics without modifying anything.
    Assess(AssessArgs),
    /// Compare detector output with gold category labels.
    Eval(EvalArgs),
    /// Score hypotheses against references (BLEU, ROUGE-L, METEOR, CIDEr).
    Score(ScoreArgs),
}

#[derive(Args)]
struct Common {
    /// Flat `key = value` rule configuration.
    #[arg(long, env = "CAT_CONFIG")]
    config: Option<PathBuf>,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
    /// Language for records that do not name one.
    #[arg(long)]
    language: Option<String>,
    /// Partition for records that do not name one.
    #[arg(long)]
    partition: Option<String>,
}

#[derive(Args)]
struct CleanArgs {
    #[command(flatten)]
    common: Common,
    #[arg(short, long)]
    input: PathBuf,
    /// Distilled JSONL (stdout when omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Quality report of the input.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Report format; inferred from the report file extension when omitted.
    #[arg(long)]
    format: Option<String>,
    /// Per-pair verdicts as JSONL.
    #[arg(long)]
    outcomes: Option<PathBuf>,
}

#[derive(Args)]
struct AssessArgs {
    #[command(flatten)]
    common: Common,
    #[arg(short, long)]
    input: PathBuf,
    /// Report destination (stdout when omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    format: Option<String>,
    /// Exit with status 1 when the noisy fraction exceeds this value.
    #[arg(long, value_name = "FRACTION")]
    fail_over: Option<f64>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    common: Common,
    #[arg(short, long)]
    input: PathBuf,
    /// JSONL of `{id, categories}`.
    #[arg(long)]
    gold: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BleuArg {
    Corpus,
    Sentence,
}

#[derive(Args)]
struct ScoreArgs {
    /// Hypotheses: JSONL of `{id, tokens}` or one sentence per line.
    #[arg(long)]
    hyp: PathBuf,
    /// References in the same format.
    #[arg(long = "ref")]
    reference: PathBuf,
    #[arg(long, value_enum, default_value = "sentence")]
    bleu_mode: BleuArg,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure {
            code: 2,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<ExitCode, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Clean(args) => cmd_clean(args),
        Command::Assess(args) => cmd_assess(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Score(args) => cmd_score(args),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| format!("cannot write {}: {e}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_text(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    let mut out = open_output(path)?;
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn in_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T, Failure> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    Ok(pool.install(f))
}

fn cmd_clean(args: CleanArgs) -> CmdResult {
    let settings = Settings::load(&args.common, args.format.as_deref())?;
    let dataset = inputs::read_dataset(&args.input, &settings)?;
    if dataset.is_empty() {
        return Err("empty dataset".into());
    }
    let result = in_pool(settings.jobs, || clean_dataset(&dataset, &settings.rules))?;

    let mut out = open_output(args.output.as_deref())?;
    write_jsonl(&result.distilled, &mut out)?;
    if let Some(path) = &args.outcomes {
        let mut out = open_output(Some(path))?;
        write_outcomes(&result.outcomes, &mut out)?;
        out.flush()?;
    }
    if let Some(path) = &args.report {
        let format = settings.format.unwrap_or_else(|| format_for(path));
        write_text(Some(path), &render_report(&result.report, format))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn format_for(path: &Path) -> ReportFormat {
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => ReportFormat::Json,
        Some("csv") => ReportFormat::Csv,
        _ => ReportFormat::Text,
    }
}

fn cmd_assess(args: AssessArgs) -> CmdResult {
    if let Some(limit) = args.fail_over {
        if !(0.0..=1.0).contains(&limit) {
            return Err("--fail-over takes a fraction between 0 and 1".into());
        }
    }
    let settings = Settings::load(&args.common, args.format.as_deref())?;
    let dataset = inputs::read_dataset(&args.input, &settings)?;
    let report = in_pool(settings.jobs, || assess(&dataset, &settings.rules))??;
    let format = settings
        .format
        .or_else(|| args.output.as_deref().map(format_for))
        .unwrap_or_default();
    write_text(args.output.as_deref(), &render_report(&report, format))?;
    match args.fail_over {
        Some(limit) if report.noisy_total.pct > limit => {
            eprintln!(
                "noisy fraction {:.4} exceeds {limit}",
                report.noisy_total.pct
            );
            Ok(ExitCode::from(1))
        }
        _ => Ok(ExitCode::SUCCESS),
    }
}

fn cmd_eval(args: EvalArgs) -> CmdResult {
    let settings = Settings::load(&args.common, None)?;
    let dataset = inputs::read_dataset(&args.input, &settings)?;
    let gold = inputs::read_gold(&args.gold)?;
    if gold.is_empty() {
        return Err("empty gold labels".into());
    }
    let result = in_pool(settings.jobs, || clean_dataset(&dataset, &settings.rules))?;
    let predicted: Vec<_> = result.outcomes.iter().map(|o| o.to_diagnosis()).collect();
    let eval = evaluate_detectors(&predicted, &gold)?;
    let mut text = serde_json::to_string_pretty(&eval)?;
    text.push('\n');
    write_text(args.output.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_score(args: ScoreArgs) -> CmdResult {
    let hyps = inputs::read_sentences(&args.hyp)?;
    let refs = inputs::read_sentences(&args.reference)?;
    let (h, r) = inputs::align_by_id(hyps, refs)?;
    let mode = match args.bleu_mode {
        BleuArg::Corpus => BleuMode::Corpus,
        BleuArg::Sentence => BleuMode::SentenceSmoothed,
    };
    let jobs = settings::job_count(args.jobs)?;
    let report = in_pool(jobs, || score_corpus(&h, &r, mode))??;
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    write_text(args.output.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

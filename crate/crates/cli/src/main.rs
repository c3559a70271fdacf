//! `splitrefine`: refine, reverse, split and score Split-and-Rephrase data.
//!
//! Exit status: 0 on success, 2 for usage errors, 3 for input/output
//! errors, 4 when the NLI backend fails.

mod manifest;

use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use splitrefine::corpus::{
    detokenize, Corpus, CorpusError, Format, Record, RecordReader, RecordWriter, DEFAULT_SEPARATOR,
};
use splitrefine::metrics::{self, EvalInstance, MetricError};
use splitrefine::nli::{
    judge_records, label_report, BackendError, BatchConfig, ClassifierBackend, EchoBackend,
    Fallback, FilterError, FilterOptions, HttpBackend, Judgement, TableBackend,
};
use splitrefine::partition::{split_corpus, PartitionError, PartitionSpec};
use splitrefine::reverser::{restore_output_order, reverse_simples};
use splitrefine::segmenter::{resegment_simples, RuleSet, RuleSetError};

use manifest::{beside, Manifest};

#[derive(Parser)]
#[command(
    name = "splitrefine",
    version,
    about = "Refine and evaluate Split-and-Rephrase corpora"
)]
struct Cli {
    /// Where to write the run manifest. Defaults to `<output>.manifest.json`,
    /// or `splitrefine-<command>.manifest.json` when there is no output file.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,

    /// Abbreviation list for sentence segmentation, one entry per line.
    #[arg(long, global = true)]
    abbrev_file: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Keep only records whose every simple sentence is entailed by the complex one.
    Refine(RefineArgs),
    /// Reverse simple-sentence order, or restore natural order of system outputs.
    Reverse(ReverseArgs),
    /// Shuffle and partition a corpus into train/dev/test files.
    Split(SplitArgs),
    /// Score system outputs against sources and references.
    Evaluate(EvaluateArgs),
    /// Record and sentence counts for corpus files.
    Stats(StatsArgs),
    /// Three-way NLI label distribution over a corpus.
    ClassifyReport(ClassifyReportArgs),
}

#[derive(Args)]
struct CorpusArgs {
    /// Separator between simple sentences in TSV files.
    #[arg(long, default_value = DEFAULT_SEPARATOR)]
    separator: String,

    /// Input format; inferred from the extension when omitted.
    #[arg(long)]
    in_format: Option<Format>,

    /// Output format; inferred from the extension when omitted.
    #[arg(long)]
    out_format: Option<Format>,
}

#[derive(Clone, Copy, ValueEnum)]
enum StubKind {
    /// Identical strings entail; otherwise word overlap.
    Echo,
    /// Exact (premise, hypothesis) lookups from `--stub-table`.
    Table,
}

#[derive(Args)]
struct BackendArgs {
    /// Base URL of the NLI classification service.
    #[arg(long, env = "SRR_NLI_ENDPOINT")]
    nli_endpoint: Option<String>,

    /// Use a built-in deterministic backend instead of the service.
    #[arg(long, value_enum)]
    stub: Option<StubKind>,

    /// JSONL table for `--stub table`: premise, hypothesis and the three probabilities.
    #[arg(long)]
    stub_table: Option<PathBuf>,

    /// With `--stub table`, fail on pairs missing from the table instead of
    /// scoring them with the echo heuristic.
    #[arg(long)]
    stub_strict: bool,

    #[arg(long, default_value_t = 32)]
    batch_size: usize,

    /// Requests in flight at once.
    #[arg(long, default_value_t = 4)]
    concurrency: usize,

    /// Per-request timeout in seconds.
    #[arg(long, default_value_t = 120)]
    timeout: u64,
}

#[derive(Args)]
struct RefineArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long = "out")]
    output: PathBuf,
    /// JSONL audit log: one decision with per-pair probabilities per record.
    #[arg(long)]
    decisions: Option<PathBuf>,
    /// Drop records the backend fails on instead of aborting.
    #[arg(long)]
    skip_on_error: bool,
    /// Re-segment the simple side before classification.
    #[arg(long)]
    resegment: bool,
    /// Records classified per chunk; bounds memory use.
    #[arg(long, default_value_t = 4096)]
    chunk_size: usize,
    #[command(flatten)]
    corpus: CorpusArgs,
    #[command(flatten)]
    backend: BackendArgs,
}

#[derive(Args)]
struct ReverseArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long = "out")]
    output: PathBuf,
    /// Treat input as plain text, one system output per line, and put its
    /// sentences back in natural order.
    #[arg(long)]
    restore: bool,
    #[command(flatten)]
    corpus: CorpusArgs,
}

#[derive(Args)]
struct SplitArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Train:dev:test as integer weights ("8:1:1") or fractions summing to 1.
    #[arg(long, default_value = "8:1:1")]
    ratios: String,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Keep input order instead of shuffling.
    #[arg(long)]
    no_shuffle: bool,
    /// Directory for the three output files; defaults to the input's directory.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[command(flatten)]
    corpus: CorpusArgs,
}

#[derive(Args)]
struct EvaluateArgs {
    /// JSONL instances with source, hypothesis and references.
    #[arg(long, conflicts_with_all = ["src", "hyp", "refs"])]
    instances: Option<PathBuf>,
    /// Sources, one per line.
    #[arg(long, requires_all = ["hyp", "refs"])]
    src: Option<PathBuf>,
    /// System outputs, aligned with `--src`.
    #[arg(long)]
    hyp: Option<PathBuf>,
    /// References, one line per instance, several joined by `--ref-separator`.
    #[arg(long)]
    refs: Option<PathBuf>,
    #[arg(long, default_value = "\t")]
    ref_separator: String,
    /// Detokenize every text before scoring.
    #[arg(long)]
    detokenize: bool,
    /// Outputs come from a reversed-order model: restore their order first.
    #[arg(long)]
    restore: bool,
    /// Also compute the entailment ratio with an NLI backend.
    #[arg(long)]
    with_entailment: bool,
    /// Write the JSON report here as well as printing the table.
    #[arg(long = "out")]
    output: Option<PathBuf>,
    #[command(flatten)]
    backend: BackendArgs,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(long = "in", required = true, num_args = 1..)]
    inputs: Vec<PathBuf>,
    /// Write the statistics as JSON here as well as printing them.
    #[arg(long = "out")]
    output: Option<PathBuf>,
    #[command(flatten)]
    corpus: CorpusArgs,
}

#[derive(Args)]
struct ClassifyReportArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long = "out")]
    output: Option<PathBuf>,
    #[command(flatten)]
    corpus: CorpusArgs,
    #[command(flatten)]
    backend: BackendArgs,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Input(String),
    Backend(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Input(_) => 3,
            Failure::Backend(_) => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage: {m}"),
            Failure::Input(m) => write!(f, "{m}"),
            Failure::Backend(m) => write!(f, "NLI backend: {m}"),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<CorpusError> for Failure {
    fn from(e: CorpusError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<BackendError> for Failure {
    fn from(e: BackendError) -> Self {
        Failure::Backend(e.to_string())
    }
}

impl From<FilterError> for Failure {
    fn from(e: FilterError) -> Self {
        match e {
            FilterError::Backend(e) => e.into(),
            FilterError::Corpus(e) => e.into(),
        }
    }
}

impl From<MetricError> for Failure {
    fn from(e: MetricError) -> Self {
        match e {
            MetricError::Backend(e) => e.into(),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<PartitionError> for Failure {
    fn from(e: PartitionError) -> Self {
        match e {
            PartitionError::BadRatio(_) => Failure::Usage(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<RuleSetError> for Failure {
    fn from(e: RuleSetError) -> Self {
        Failure::Input(format!("abbreviation file: {e}"))
    }
}

fn with_path<E: Into<Failure>>(path: &Path) -> impl FnOnce(E) -> Failure + '_ {
    move |e| match e.into() {
        Failure::Input(m) => Failure::Input(format!("{}: {m}", path.display())),
        other => other,
    }
}

fn open(path: &Path) -> Result<BufReader<File>, Failure> {
    File::open(path)
        .map(BufReader::new)
        .map_err(with_path(path))
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(with_path(path))
}

fn format_of(explicit: Option<Format>, path: &Path) -> Format {
    explicit.unwrap_or_else(|| Format::from_path(path))
}

impl BackendArgs {
    fn batch(&self) -> Result<BatchConfig, Failure> {
        if self.batch_size == 0 || self.concurrency == 0 {
            return Err(Failure::Usage(
                "--batch-size and --concurrency must be positive".into(),
            ));
        }
        Ok(BatchConfig {
            batch_size: self.batch_size,
            concurrency: self.concurrency,
        })
    }

    fn build(&self) -> Result<Box<dyn ClassifierBackend>, Failure> {
        match (self.stub, &self.nli_endpoint) {
            (Some(StubKind::Echo), _) => Ok(Box::new(EchoBackend)),
            (Some(StubKind::Table), _) => {
                let fallback = if self.stub_strict {
                    Fallback::Error
                } else {
                    Fallback::Echo
                };
                let table = match &self.stub_table {
                    Some(path) => TableBackend::load(path, fallback).map_err(|e| match e {
                        BackendError::Decode(m) => {
                            Failure::Input(format!("{}: {m}", path.display()))
                        }
                        other => other.into(),
                    })?,
                    None => TableBackend::new(fallback),
                };
                Ok(Box::new(table))
            }
            (None, Some(endpoint)) => {
                let backend =
                    HttpBackend::with_timeout(endpoint, Duration::from_secs(self.timeout));
                let model = backend.health()?;
                eprintln!("NLI service at {} ready ({model})", backend.endpoint());
                Ok(Box::new(backend))
            }
            (None, None) => Err(Failure::Usage(
                "no NLI backend: pass --nli-endpoint, set SRR_NLI_ENDPOINT, or use --stub".into(),
            )),
        }
    }

    fn config(&self) -> serde_json::Value {
        json!({
            "stub": self.stub.map(|s| match s { StubKind::Echo => "echo", StubKind::Table => "table" }),
            "stub_table": self.stub_table,
            "stub_strict": self.stub_strict,
            "nli_endpoint": if self.stub.is_some() { None } else { self.nli_endpoint.clone() },
            "batch_size": self.batch_size,
            "concurrency": self.concurrency,
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("splitrefine: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let loaded;
    let rules = match &cli.abbrev_file {
        Some(path) => {
            loaded = RuleSet::load(path).map_err(with_path(path))?;
            &loaded
        }
        None => RuleSet::english(),
    };
    let (name, primary, mut manifest) = match &cli.command {
        Command::Refine(a) => ("refine", Some(a.output.clone()), refine(a, rules)?),
        Command::Reverse(a) => ("reverse", Some(a.output.clone()), reverse(a, rules)?),
        Command::Split(a) => ("split", None, split(a)?),
        Command::Evaluate(a) => ("evaluate", a.output.clone(), evaluate(a, rules)?),
        Command::Stats(a) => ("stats", a.output.clone(), stats(a, rules)?),
        Command::ClassifyReport(a) => ("classify-report", a.output.clone(), classify_report(a)?),
    };
    let path = match (&cli.manifest, primary) {
        (Some(p), _) => p.clone(),
        (None, Some(out)) => beside(&out),
        (None, None) => match &cli.command {
            Command::Split(a) => beside(&a.input),
            _ => PathBuf::from(format!("splitrefine-{name}.manifest.json")),
        },
    };
    if let Some(path) = &cli.abbrev_file {
        manifest.input(path).map_err(with_path(path))?;
    }
    manifest.write(&path).map_err(with_path(&path))?;
    Ok(())
}

fn refine(a: &RefineArgs, rules: &RuleSet) -> Result<Manifest, Failure> {
    if a.chunk_size == 0 {
        return Err(Failure::Usage("--chunk-size must be positive".into()));
    }
    let options = FilterOptions {
        batch: a.backend.batch()?,
        skip_on_error: a.skip_on_error,
    };
    let backend = a.backend.build()?;
    let in_format = format_of(a.corpus.in_format, &a.input);
    let out_format = format_of(a.corpus.out_format, &a.output);
    let mut manifest = Manifest::new(
        "refine",
        json!({
            "in_format": in_format,
            "out_format": out_format,
            "separator": a.corpus.separator,
            "skip_on_error": a.skip_on_error,
            "resegment": a.resegment,
            "chunk_size": a.chunk_size,
            "backend": a.backend.config(),
            "backend_id": backend.describe(),
        }),
    );

    let mut reader = RecordReader::new(open(&a.input)?, in_format, &a.corpus.separator)?;
    let mut writer = RecordWriter::new(create(&a.output)?, out_format, &a.corpus.separator)?;
    let mut log = a.decisions.as_deref().map(create).transpose()?;

    let (mut seen, mut kept, mut skipped) = (0usize, 0usize, 0usize);
    loop {
        let mut chunk: Vec<Record> = Vec::with_capacity(a.chunk_size);
        for record in reader.by_ref().take(a.chunk_size) {
            let record = record.map_err(with_path(&a.input))?;
            chunk.push(if a.resegment {
                resegment_simples(&record, rules)
            } else {
                record
            });
        }
        if chunk.is_empty() {
            break;
        }
        for (record, judgement) in
            chunk
                .iter()
                .zip(judge_records(&chunk, seen, backend.as_ref(), &options)?)
        {
            match judgement {
                Judgement::Decided(decision) => {
                    if decision.kept() {
                        writer.write(record).map_err(with_path(&a.output))?;
                        kept += 1;
                    }
                    if let Some(log) = &mut log {
                        serde_json::to_writer(&mut *log, &decision).map_err(io::Error::from)?;
                        log.write_all(b"\n")?;
                    }
                }
                Judgement::Skipped { record_id, error } => {
                    skipped += 1;
                    eprintln!("skipped {record_id}: {error}");
                    if let Some(log) = &mut log {
                        let line = json!({"record_id": record_id, "kept": false, "skipped": true, "error": error});
                        writeln!(log, "{line}")?;
                    }
                }
            }
        }
        seen += chunk.len();
    }
    writer.finish().map_err(with_path(&a.output))?.flush()?;
    if let Some(mut log) = log {
        log.flush()?;
    }

    let removed = seen - kept;
    eprintln!(
        "refine: {seen} records, kept {kept}, removed {removed} ({:.1}%), skipped {skipped}",
        if seen == 0 {
            0.0
        } else {
            100.0 * removed as f64 / seen as f64
        }
    );
    manifest.input(&a.input)?;
    manifest.output(&a.output)?;
    if let Some(d) = &a.decisions {
        manifest.output(d)?;
    }
    manifest.count("records", seen);
    manifest.count("kept", kept);
    manifest.count("removed", removed);
    manifest.count("skipped", skipped);
    Ok(manifest)
}

fn reverse(a: &ReverseArgs, rules: &RuleSet) -> Result<Manifest, Failure> {
    let mut n = 0usize;
    let mut manifest = if a.restore {
        let mut out = create(&a.output)?;
        for line in open(&a.input)?.lines() {
            writeln!(
                out,
                "{}",
                restore_output_order(&line.map_err(with_path(&a.input))?, rules)
            )?;
            n += 1;
        }
        out.flush()?;
        Manifest::new("reverse", json!({"restore": true}))
    } else {
        let in_format = format_of(a.corpus.in_format, &a.input);
        let out_format = format_of(a.corpus.out_format, &a.output);
        let reader = RecordReader::new(open(&a.input)?, in_format, &a.corpus.separator)?;
        let mut writer = RecordWriter::new(create(&a.output)?, out_format, &a.corpus.separator)?;
        for record in reader {
            writer.write(&reverse_simples(&record.map_err(with_path(&a.input))?))?;
            n += 1;
        }
        writer.finish()?.flush()?;
        Manifest::new(
            "reverse",
            json!({"restore": false, "in_format": in_format, "out_format": out_format, "separator": a.corpus.separator}),
        )
    };
    manifest.input(&a.input)?;
    manifest.output(&a.output)?;
    manifest.count("records", n);
    Ok(manifest)
}

fn split(a: &SplitArgs) -> Result<Manifest, Failure> {
    let mut spec: PartitionSpec = a.ratios.parse()?;
    spec.seed = a.seed;
    spec = spec.with_shuffle(!a.no_shuffle);
    let in_format = format_of(a.corpus.in_format, &a.input);
    let out_format = a.corpus.out_format.unwrap_or(in_format);
    let corpus =
        Corpus::load(&a.input, in_format, &a.corpus.separator).map_err(with_path(&a.input))?;
    let (train, dev, test) = split_corpus(&corpus, &spec)?;

    let dir = match &a.out_dir {
        Some(d) => d.clone(),
        None => a.input.parent().map(Path::to_path_buf).unwrap_or_default(),
    };
    let stem = a
        .input
        .file_stem()
        .unwrap_or_default()
        .to_string_lossy()
        .into_owned();
    let mut manifest = Manifest::new(
        "split",
        json!({
            "ratios": spec.to_string(),
            "seed": a.seed,
            "shuffle": !a.no_shuffle,
            "in_format": in_format,
            "out_format": out_format,
            "separator": a.corpus.separator,
        }),
    );
    manifest.input(&a.input)?;
    for (part, name) in [(&train, "train"), (&dev, "dev"), (&test, "test")] {
        let path = dir.join(format!("{stem}.{name}.{}", out_format.extension()));
        part.write(&path, out_format, &a.corpus.separator)
            .map_err(with_path(&path))?;
        manifest.output(&path)?;
        manifest.count(name, part.len());
    }
    eprintln!(
        "split: {} -> {} / {} / {}",
        corpus.len(),
        train.len(),
        dev.len(),
        test.len()
    );
    Ok(manifest)
}

fn evaluate(a: &EvaluateArgs, rules: &RuleSet) -> Result<Manifest, Failure> {
    let mut inputs = Vec::new();
    let mut instances = match (&a.instances, &a.src, &a.hyp, &a.refs) {
        (Some(path), ..) => {
            inputs.push(path.clone());
            metrics::load_jsonl(path).map_err(with_path(path))?
        }
        (None, Some(src), Some(hyp), Some(refs)) => {
            inputs.extend([src.clone(), hyp.clone(), refs.clone()]);
            metrics::load_aligned(src, hyp, refs, &a.ref_separator)?
        }
        _ => {
            return Err(Failure::Usage(
                "pass --instances, or all of --src, --hyp and --refs".into(),
            ))
        }
    };
    if a.detokenize || a.restore {
        instances = instances
            .iter()
            .map(|i| {
                let fix = |s: &str| {
                    if a.detokenize {
                        detokenize(s)
                    } else {
                        s.to_owned()
                    }
                };
                let mut hyp = fix(i.hypothesis());
                if a.restore {
                    hyp = restore_output_order(&hyp, rules);
                }
                EvalInstance::new(fix(i.source()), hyp, i.references().iter().map(|r| fix(r)))
            })
            .collect::<Result<_, _>>()?;
    }
    let batch = a.backend.batch()?;
    let backend = if a.with_entailment {
        Some(a.backend.build()?)
    } else {
        None
    };
    let report = metrics::evaluate(&instances, backend.as_deref(), rules, &batch)?;
    println!("{report}");
    let mut manifest = Manifest::new(
        "evaluate",
        json!({
            "ref_separator": a.ref_separator,
            "detokenize": a.detokenize,
            "restore": a.restore,
            "with_entailment": a.with_entailment,
            "backend": if a.with_entailment { a.backend.config() } else { serde_json::Value::Null },
        }),
    );
    for path in &inputs {
        manifest.input(path)?;
    }
    if let Some(out) = &a.output {
        let mut text = serde_json::to_string_pretty(&report).map_err(io::Error::from)?;
        text.push('\n');
        std::fs::write(out, text).map_err(with_path(out))?;
        manifest.output(out)?;
    }
    manifest.count("instances", instances.len());
    manifest.count(
        "report",
        serde_json::to_value(&report).map_err(io::Error::from)?,
    );
    Ok(manifest)
}

#[derive(serde::Serialize)]
struct CorpusStats {
    path: PathBuf,
    records: usize,
    simples: usize,
    avg_simples: f64,
    /// Simple sides the segmenter would split into a different number of sentences.
    segment_mismatches: usize,
    avg_complex_words: f64,
    avg_simple_words: f64,
}

fn corpus_stats(path: &Path, a: &StatsArgs, rules: &RuleSet) -> Result<CorpusStats, Failure> {
    let reader = RecordReader::new(
        open(path)?,
        format_of(a.corpus.in_format, path),
        &a.corpus.separator,
    )?;
    let (mut records, mut simples, mut mismatches, mut cw, mut sw) =
        (0usize, 0usize, 0usize, 0usize, 0usize);
    for record in reader {
        let record = record.map_err(with_path(path))?;
        records += 1;
        simples += record.simples().len();
        if resegment_simples(&record, rules).simples().len() != record.simples().len() {
            mismatches += 1;
        }
        cw += record.complex().split_whitespace().count();
        sw += record
            .simples()
            .iter()
            .map(|s| s.split_whitespace().count())
            .sum::<usize>();
    }
    let per = |x: usize, n: usize| if n == 0 { 0.0 } else { x as f64 / n as f64 };
    Ok(CorpusStats {
        path: path.to_owned(),
        records,
        simples,
        avg_simples: per(simples, records),
        segment_mismatches: mismatches,
        avg_complex_words: per(cw, records),
        avg_simple_words: per(sw, records),
    })
}

fn stats(a: &StatsArgs, rules: &RuleSet) -> Result<Manifest, Failure> {
    let mut all = Vec::new();
    let mut manifest = Manifest::new("stats", json!({"separator": a.corpus.separator}));
    println!(
        "{:<40} {:>10} {:>8} {:>10} {:>10}",
        "file", "records", "#simple", "cx words", "sp words"
    );
    for path in &a.inputs {
        let s = corpus_stats(path, a, rules)?;
        println!(
            "{:<40} {:>10} {:>8.2} {:>10.2} {:>10.2}",
            path.display(),
            s.records,
            s.avg_simples,
            s.avg_complex_words,
            s.avg_simple_words
        );
        manifest.input(path)?;
        manifest.count(&path.display().to_string(), s.records);
        all.push(s);
    }
    if let Some(out) = &a.output {
        let mut text = serde_json::to_string_pretty(&all).map_err(io::Error::from)?;
        text.push('\n');
        std::fs::write(out, text).map_err(with_path(out))?;
        manifest.output(out)?;
    }
    Ok(manifest)
}

fn classify_report(a: &ClassifyReportArgs) -> Result<Manifest, Failure> {
    let batch = a.backend.batch()?;
    let backend = a.backend.build()?;
    let format = format_of(a.corpus.in_format, &a.input);
    let corpus =
        Corpus::load(&a.input, format, &a.corpus.separator).map_err(with_path(&a.input))?;
    let report = label_report(&corpus, backend.as_ref(), &batch)?;
    println!("{:<14} {:>8.2}", "Entailment", report.entailment);
    println!("{:<14} {:>8.2}", "Neutral", report.neutral);
    println!("{:<14} {:>8.2}", "Contradiction", report.contradiction);
    let mut manifest = Manifest::new(
        "classify-report",
        json!({"in_format": format, "separator": a.corpus.separator, "backend": a.backend.config(), "backend_id": backend.describe()}),
    );
    manifest.input(&a.input)?;
    if let Some(out) = &a.output {
        let mut text = serde_json::to_string_pretty(&report).map_err(io::Error::from)?;
        text.push('\n');
        std::fs::write(out, text).map_err(with_path(out))?;
        manifest.output(out)?;
    }
    manifest.count("records", report.records);
    manifest.count(
        "report",
        serde_json::to_value(report).map_err(io::Error::from)?,
    );
    Ok(manifest)
}

//! The `seqtag` command line.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on data errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{ArgAction, Args, CommandFactory, Parser, Subcommand};

use crate::augment::{augment_corpus, AugmentConfig, Technique};
use crate::corpus::{corpus_stats, parse_conll, serialize_conll, ColumnSpec, Corpus, Separator, SplitRules};
use crate::crf::{self, FeatureTemplateSet, TrainConfig};
use crate::eval::{evaluate, format_report, EvalReport, ReportStyle};
use crate::ingest::{self, DatasetDescriptor, Fetcher, HttpTransport};
use crate::schemes::{self, Scheme};
use crate::Error;

#[derive(Parser, Debug)]
#[command(
    name = "seqtag",
    version,
    about = "Named-entity corpora: tagging schemes, augmentation, CRF training and conlleval scoring",
    args_override_self = true
)]
struct Cli {
    /// File of `key = value` lines (`#` comments) supplying default flag
    /// values for the subcommand; flags on the command line win
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Download a dataset into the checksummed cache and print its path
    Fetch(FetchArgs),
    /// Print token, sentence and entity counts
    Stats(StatsArgs),
    /// Split a corpus into a train prefix and a test suffix
    Split(SplitArgs),
    /// Rewrite the tags of a corpus in another scheme
    Convert(ConvertArgs),
    /// Append augmented copies of every sentence
    Augment(AugmentArgs),
    /// Train a CRF model
    Train(TrainArgs),
    /// Tag a corpus; the prediction is appended as a last column
    Tag(TagArgs),
    /// Score predictions against gold annotations
    Eval(EvalArgs),
    /// Train and score one model per scheme and feature setting
    Benchmark(BenchmarkArgs),
}

#[derive(Args, Debug, Clone)]
struct Columns {
    /// Column separator: `space` (runs of spaces) or `tab`
    #[arg(long, default_value = "space", value_name = "SEP")]
    sep: Separator,
    /// Index of the token column
    #[arg(long, default_value_t = 0, value_name = "N")]
    surface_col: usize,
    /// Index of the tag column [default: 1, or 2 with --pos-col]
    #[arg(long, value_name = "N")]
    tag_col: Option<usize>,
    /// Index of a part-of-speech column
    #[arg(long, value_name = "N")]
    pos_col: Option<usize>,
}

impl Columns {
    fn spec(&self) -> Result<ColumnSpec, Failure> {
        let tag = self.tag_col.unwrap_or(if self.pos_col.is_some() { 2 } else { 1 });
        let attrs = self.pos_col.map(|p| vec![(p, "pos".to_string())]).unwrap_or_default();
        ColumnSpec::new(self.surface_col, tag, attrs, self.sep).map_err(|e| Failure::Usage(e.to_string()))
    }
}

#[derive(Args, Debug)]
struct FetchArgs {
    /// Source URL
    #[arg(long, default_value = ingest::EUROPEANA_FR_URL)]
    url: String,
    /// Cache root [default: $SEQTAG_CACHE, else ~/.cache/seqtag]
    #[arg(long, value_name = "DIR")]
    cache_dir: Option<PathBuf>,
    /// Expected SHA-256 of the file
    #[arg(long, value_name = "HEX")]
    sha256: Option<String>,
    /// Download again and accept a changed checksum
    #[arg(long)]
    refresh: bool,
}

#[derive(Args, Debug)]
struct StatsArgs {
    input: PathBuf,
    #[command(flatten)]
    columns: Columns,
    /// Input is a flat token stream; split it into sentences first
    #[arg(long)]
    raw: bool,
    /// Read tags in this scheme [default: inferred]
    #[arg(long)]
    scheme: Option<Scheme>,
}

#[derive(Args, Debug)]
struct SplitArgs {
    input: PathBuf,
    train_out: PathBuf,
    test_out: PathBuf,
    /// Maximum number of tokens in the test suffix
    #[arg(long, value_name = "TOKENS")]
    budget: usize,
    #[command(flatten)]
    columns: Columns,
    /// Input is a flat token stream; split it into sentences first
    #[arg(long)]
    raw: bool,
    /// Longest sentence produced by --raw splitting
    #[arg(long, default_value_t = 200, value_name = "TOKENS")]
    max_sentence_len: usize,
}

#[derive(Args, Debug)]
struct ConvertArgs {
    input: PathBuf,
    output: PathBuf,
    /// Scheme of the input [default: inferred]
    #[arg(long)]
    from: Option<Scheme>,
    /// Target scheme
    #[arg(long)]
    to: Scheme,
    #[command(flatten)]
    columns: Columns,
}

#[derive(Args, Debug, Clone)]
struct AugmentFlags {
    /// Techniques to draw from for each copy
    #[arg(long, value_delimiter = ',', default_value = "lwtr,sis")]
    techniques: Vec<Technique>,
    /// Per-token (LWTR) or per-segment (SIS) probability
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    /// Augmented copies per sentence
    #[arg(long, default_value_t = 1)]
    copies: usize,
}

impl AugmentFlags {
    fn config(&self, seed: u64) -> AugmentConfig {
        AugmentConfig { techniques: self.techniques.clone(), p: self.p, copies_per_sentence: self.copies, seed }
    }
}

#[derive(Args, Debug)]
struct AugmentArgs {
    input: PathBuf,
    output: PathBuf,
    #[command(flatten)]
    columns: Columns,
    /// Scheme of the input [default: inferred]
    #[arg(long)]
    scheme: Option<Scheme>,
    #[command(flatten)]
    augment: AugmentFlags,
    /// Random seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads [default: all cores]
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args, Debug, Clone)]
struct Training {
    /// L2 penalty weight
    #[arg(long, default_value_t = 1.0)]
    l2: f64,
    /// Maximum accepted descent steps
    #[arg(long, default_value_t = 200)]
    max_iter: usize,
    /// Relative objective decrease below which training stops
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Comma-separated feature templates [default: standard set, plus POS templates with --pos]
    #[arg(long, value_name = "LIST")]
    templates: Option<String>,
}

impl Training {
    fn config(&self, seed: u64) -> TrainConfig {
        TrainConfig { l2_lambda: self.l2, max_iter: self.max_iter, tol: self.tol, seed }
    }

    fn templates(&self, pos: bool) -> Result<FeatureTemplateSet, Failure> {
        match &self.templates {
            Some(list) => FeatureTemplateSet::parse_list(list).map_err(|e| Failure::Usage(e.to_string())),
            None if pos => Ok(FeatureTemplateSet::with_pos()),
            None => Ok(FeatureTemplateSet::standard()),
        }
    }
}

#[derive(Args, Debug)]
struct TrainArgs {
    input: PathBuf,
    model: PathBuf,
    #[command(flatten)]
    columns: Columns,
    /// Train on tags converted to this scheme [default: the input's]
    #[arg(long)]
    scheme: Option<Scheme>,
    /// Add part-of-speech templates (needs --pos-col)
    #[arg(long)]
    pos: bool,
    #[command(flatten)]
    training: Training,
    /// Random seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads [default: all cores]
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args, Debug)]
struct TagArgs {
    model: PathBuf,
    input: PathBuf,
    output: PathBuf,
    #[command(flatten)]
    columns: Columns,
    /// Worker threads [default: all cores]
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args, Debug)]
struct EvalArgs {
    gold: PathBuf,
    /// Predictions; when omitted they are read from the last column of GOLD
    pred: Option<PathBuf>,
    #[command(flatten)]
    columns: Columns,
    /// Collapse both sides to IO before matching entities
    #[arg(long)]
    normalize_io: bool,
    /// Report format: `text` or `csv`
    #[arg(long, default_value = "text")]
    format: ReportStyle,
}

#[derive(Args, Debug)]
struct BenchmarkArgs {
    /// Training corpus [default: fetch the Europeana French corpus and split it]
    #[arg(long, requires = "test")]
    train: Option<PathBuf>,
    /// Test corpus
    #[arg(long, requires = "train")]
    test: Option<PathBuf>,
    #[command(flatten)]
    columns: Columns,
    /// Source URL when fetching
    #[arg(long, default_value = ingest::EUROPEANA_FR_URL)]
    url: String,
    /// Cache root when fetching [default: $SEQTAG_CACHE, else ~/.cache/seqtag]
    #[arg(long, value_name = "DIR")]
    cache_dir: Option<PathBuf>,
    /// Test-suffix token budget when fetching
    #[arg(long, default_value_t = 20592, value_name = "TOKENS")]
    test_budget: usize,
    /// Schemes to compare
    #[arg(long, value_delimiter = ',', default_value = "io,bio,bioes")]
    schemes: Vec<Scheme>,
    /// Also run cells with part-of-speech templates (skipped when the corpus has no POS column)
    #[arg(long)]
    pos: bool,
    /// Also run cells trained on an augmented corpus
    #[arg(long)]
    augment: bool,
    #[command(flatten)]
    augment_flags: AugmentFlags,
    #[command(flatten)]
    training: Training,
    /// Random seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory for benchmark.txt and benchmark.csv
    #[arg(long, default_value = "benchmark-out", value_name = "DIR")]
    out: PathBuf,
    /// Worker threads [default: all cores]
    #[arg(long)]
    threads: Option<usize>,
}

enum Failure {
    Usage(String),
    Data(Error),
}

impl<E: Into<Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Data(e.into())
    }
}

/// Run the command line and return the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let argv = match apply_config(argv) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("error: {msg}");
            return 1;
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn strip_config(argv: &mut Vec<OsString>) -> Result<Option<PathBuf>, String> {
    let mut found = None;
    let mut i = 1;
    while i < argv.len() {
        let arg = argv[i].to_string_lossy().into_owned();
        if arg == "--" {
            break;
        }
        if arg == "--config" {
            if i + 1 >= argv.len() {
                return Err("--config needs a file".into());
            }
            found = Some(PathBuf::from(argv.remove(i + 1)));
            argv.remove(i);
        } else if let Some(v) = arg.strip_prefix("--config=") {
            found = Some(PathBuf::from(v));
            argv.remove(i);
        } else {
            i += 1;
        }
    }
    Ok(found)
}

/// Parse `key = value` lines. Keys are long flag names without dashes.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| format!("config line {}: expected key = value", i + 1))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(format!("config line {}: empty key", i + 1));
        }
        out.push((k.replace('_', "-"), v.to_string()));
    }
    Ok(out)
}

/// Splice config entries in front of the subcommand's own arguments,
/// skipping any flag the command line already sets.
fn apply_config(mut argv: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let Some(path) = strip_config(&mut argv)? else { return Ok(argv) };
    let text = fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    let entries = parse_config(&text)?;
    let Some(sub_pos) = argv.iter().skip(1).position(|a| !a.to_string_lossy().starts_with('-')).map(|p| p + 1) else {
        return Ok(argv);
    };
    let name = argv[sub_pos].to_string_lossy().into_owned();
    let cmd = Cli::command();
    let Some(sub) = cmd.find_subcommand(&name) else { return Ok(argv) };
    let given: Vec<String> = argv[sub_pos + 1..]
        .iter()
        .map(|a| a.to_string_lossy().split('=').next().unwrap_or_default().to_string())
        .collect();

    let mut injected: Vec<OsString> = Vec::new();
    for (key, value) in entries {
        let arg = sub
            .get_arguments()
            .find(|a| a.get_long() == Some(key.as_str()) && a.get_id() != "config")
            .ok_or_else(|| format!("config key `{key}` is not an option of `{name}`"))?;
        if given.iter().any(|g| *g == format!("--{key}")) {
            continue;
        }
        if matches!(arg.get_action(), ArgAction::SetTrue) {
            match value.as_str() {
                "true" | "yes" | "1" => injected.push(format!("--{key}").into()),
                "false" | "no" | "0" => {}
                _ => return Err(format!("config key `{key}` expects true or false, got `{value}`")),
            }
        } else {
            injected.push(format!("--{key}={value}").into());
        }
    }
    argv.splice(sub_pos + 1..sub_pos + 1, injected);
    Ok(argv)
}

fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R, Failure> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(Failure::Usage("--threads must be at least 1".into())),
        Some(n) => {
            let pool =
                rayon::ThreadPoolBuilder::new().num_threads(n).build().map_err(|e| Failure::Usage(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

fn dispatch(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Fetch(a) => cmd_fetch(a),
        Command::Stats(a) => cmd_stats(a),
        Command::Split(a) => cmd_split(a),
        Command::Convert(a) => cmd_convert(a),
        Command::Augment(a) => {
            let t = a.threads;
            with_threads(t, move || cmd_augment(a))?
        }
        Command::Train(a) => {
            let t = a.threads;
            with_threads(t, move || cmd_train(a))?
        }
        Command::Tag(a) => {
            let t = a.threads;
            with_threads(t, move || cmd_tag(a))?
        }
        Command::Eval(a) => cmd_eval(a),
        Command::Benchmark(a) => {
            let t = a.threads;
            with_threads(t, move || cmd_benchmark(a))?
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|source| Failure::Data(Error::Io { path: path.display().to_string(), source }))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    ingest::write_atomic(path, text.as_bytes()).map_err(|e| match e {
        ingest::IngestError::Io(source) => Failure::Data(Error::Io { path: path.display().to_string(), source }),
        other => other.into(),
    })
}

fn load(path: &Path, spec: &ColumnSpec) -> Result<Corpus, Failure> {
    let text = read(path)?;
    parse_conll(&text, spec).map_err(|source| Failure::Data(Error::Parse { path: path.display().to_string(), source }))
}

fn load_validated(path: &Path, spec: &ColumnSpec, scheme: Option<Scheme>) -> Result<Corpus, Failure> {
    let c = load(path, spec)?;
    Ok(match scheme {
        Some(s) => c.validate(s)?,
        None => c.validate_inferred()?,
    })
}

fn cache_root(dir: Option<PathBuf>) -> PathBuf {
    dir.unwrap_or_else(ingest::default_cache_dir)
}

fn fetch(url: &str, root: &Path, sha256: Option<String>, refresh: bool) -> Result<PathBuf, Failure> {
    let mut desc = DatasetDescriptor::for_url(url, root).map_err(|e| Failure::Usage(e.to_string()))?;
    desc.sha256 = sha256;
    Ok(Fetcher::new(root, HttpTransport::default()).refresh(refresh).fetch(&desc)?)
}

fn cmd_fetch(a: FetchArgs) -> Result<(), Failure> {
    let root = cache_root(a.cache_dir);
    let path = fetch(&a.url, &root, a.sha256, a.refresh)?;
    println!("{}", path.display());
    Ok(())
}

fn load_maybe_raw(path: &Path, spec: &ColumnSpec, raw: bool, max_len: usize) -> Result<Corpus, Failure> {
    if !raw {
        return load(path, spec);
    }
    let rules = SplitRules { max_len, ..SplitRules::default() };
    let (corpus, skipped) = ingest::load_raw_corpus(&read(path)?, spec, &rules);
    if skipped > 0 {
        eprintln!("skipped {skipped} unusable rows in {}", path.display());
    }
    Ok(corpus)
}

fn cmd_stats(a: StatsArgs) -> Result<(), Failure> {
    let spec = a.columns.spec()?;
    let mut corpus = load_maybe_raw(&a.input, &spec, a.raw, SplitRules::default().max_len)?;
    if let Some(s) = a.scheme {
        corpus = corpus.validate(s)?;
    }
    print!("{}", corpus_stats(&corpus)?);
    Ok(())
}

fn cmd_split(a: SplitArgs) -> Result<(), Failure> {
    let spec = a.columns.spec()?;
    let corpus = load_maybe_raw(&a.input, &spec, a.raw, a.max_sentence_len)?;
    let (train, test) = ingest::split_train_test(&corpus, a.budget);
    write(&a.train_out, &serialize_conll(&train, &spec))?;
    write(&a.test_out, &serialize_conll(&test, &spec))?;
    println!("train\t{} sentences\t{} tokens", train.len(), train.token_count());
    println!("test\t{} sentences\t{} tokens", test.len(), test.token_count());
    Ok(())
}

fn cmd_convert(a: ConvertArgs) -> Result<(), Failure> {
    let spec = a.columns.spec()?;
    let corpus = load_validated(&a.input, &spec, a.from)?;
    let out = schemes::convert(&corpus, a.to)?;
    write(&a.output, &serialize_conll(&out, &spec))
}

fn cmd_augment(a: AugmentArgs) -> Result<(), Failure> {
    let spec = a.columns.spec()?;
    let cfg = a.augment.config(a.seed);
    cfg.check().map_err(|e| Failure::Usage(e.to_string()))?;
    let corpus = load_validated(&a.input, &spec, a.scheme)?;
    let out = augment_corpus(&corpus, &cfg)?;
    write(&a.output, &serialize_conll(&out, &spec))
}

fn cmd_train(a: TrainArgs) -> Result<(), Failure> {
    let spec = a.columns.spec()?;
    if a.pos && !spec.has_pos() {
        return Err(Failure::Usage("--pos needs --pos-col".into()));
    }
    let templates = a.training.templates(a.pos)?;
    if templates.uses_pos() && !spec.has_pos() {
        return Err(Failure::Usage("POS templates need --pos-col".into()));
    }
    let cfg = a.training.config(a.seed);
    cfg.check().map_err(|e| Failure::Usage(e.to_string()))?;
    let mut corpus = load_validated(&a.input, &spec, None)?;
    if let Some(s) = a.scheme {
        corpus = schemes::convert(&corpus, s)?;
    }
    let (model, log) = crf::train_with_log(&corpus, &cfg, &templates)?;
    eprintln!(
        "objective {:.6} -> {:.6} after {} accepted steps{}",
        log.initial_objective,
        log.final_objective,
        log.accepted,
        if log.converged { " (converged)" } else { "" }
    );
    crf::save_model(&model, &a.model)?;
    Ok(())
}

fn cmd_tag(a: TagArgs) -> Result<(), Failure> {
    let spec = a.columns.spec()?;
    let model = crf::load_model(&a.model)?;
    if model.templates().uses_pos() && !spec.has_pos() {
        return Err(Failure::Usage("the model uses POS features; pass --pos-col".into()));
    }
    let corpus = load(&a.input, &spec)?;
    let tagged = crf::tag_corpus(&model, &corpus)?;
    let sep = spec.separator().as_char();
    let mut out = String::new();
    for (i, (gold, pred)) in corpus.sentences().iter().zip(tagged.sentences()).enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let one = Corpus::new(vec![gold.clone()], spec.clone());
        for (row, tag) in serialize_conll(&one, &spec).lines().zip(pred.tags()) {
            let _ = writeln!(out, "{row}{sep}{tag}");
        }
    }
    write(&a.output, &out)
}

/// Spec reading predictions from the last column of `text`.
fn last_column_spec(text: &str, spec: &ColumnSpec) -> Result<ColumnSpec, Failure> {
    let width = text
        .lines()
        .find(|l| !l.trim().is_empty() && !l.starts_with("# "))
        .map(|l| spec.split_line(l.trim_end_matches('\r')).len())
        .unwrap_or(0);
    if width <= spec.width() {
        return Err(Failure::Usage(format!(
            "single-file eval needs a prediction column after column {}",
            spec.width() - 1
        )));
    }
    ColumnSpec::new(spec.surface_col(), width - 1, Vec::new(), spec.separator())
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn cmd_eval(a: EvalArgs) -> Result<(), Failure> {
    let spec = a.columns.spec()?;
    let gold = load(&a.gold, &spec)?;
    let pred = match &a.pred {
        Some(p) => load(p, &spec)?,
        None => {
            let pspec = last_column_spec(&read(&a.gold)?, &spec)?;
            load(&a.gold, &pspec)?
        }
    };
    let report = evaluate(&gold, &pred, a.normalize_io)?;
    print!("{}", format_report(&report, a.format));
    Ok(())
}

struct Cell {
    scheme: Scheme,
    pos: bool,
    augment: bool,
    report: EvalReport,
}

fn cmd_benchmark(a: BenchmarkArgs) -> Result<(), Failure> {
    let spec = a.columns.spec()?;
    let cfg = a.training.config(a.seed);
    cfg.check().map_err(|e| Failure::Usage(e.to_string()))?;
    let aug_cfg = a.augment_flags.config(a.seed);
    if a.augment {
        aug_cfg.check().map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let mut scheme_list = a.schemes.clone();
    scheme_list.dedup();
    if scheme_list.is_empty() {
        return Err(Failure::Usage("--schemes needs at least one scheme".into()));
    }

    let (train, test) = match (&a.train, &a.test) {
        (Some(tr), Some(te)) => (load_validated(tr, &spec, None)?, load_validated(te, &spec, None)?),
        _ => {
            let path = fetch(&a.url, &cache_root(a.cache_dir.clone()), None, false)?;
            let corpus = load_maybe_raw(&path, &spec, true, SplitRules::default().max_len)?.validate_inferred()?;
            let (train, test) = ingest::split_train_test(&corpus, a.test_budget);
            (train.validate_inferred()?, test.validate_inferred()?)
        }
    };

    let mut pos_options = vec![false];
    if a.pos {
        if spec.has_pos() && a.training.templates.is_none() {
            pos_options.push(true);
        } else {
            eprintln!("skipping POS cells: the corpus has no POS column or --templates is fixed");
        }
    }
    let mut aug_options = vec![false];
    if a.augment {
        aug_options.push(true);
    }

    let mut cells = Vec::new();
    for &scheme in &scheme_list {
        let train_s = schemes::convert(&train, scheme)?;
        let test_s = schemes::convert(&test, scheme)?;
        for &augment in &aug_options {
            let data = if augment { augment_corpus(&train_s, &aug_cfg)? } else { train_s.clone() };
            for &pos in &pos_options {
                let templates = a.training.templates(pos)?;
                let (model, log) = crf::train_with_log(&data, &cfg, &templates)?;
                let pred = crf::tag_corpus(&model, &test_s)?;
                let report = evaluate(&test_s, &pred, true)?;
                eprintln!(
                    "{scheme}{}{}: {} accepted steps, F1 {:.2}",
                    if pos { "+pos" } else { "" },
                    if augment { "+aug" } else { "" },
                    log.accepted,
                    report.overall.f1
                );
                cells.push(Cell { scheme, pos, augment, report });
            }
        }
    }

    fs::create_dir_all(&a.out)
        .map_err(|source| Failure::Data(Error::Io { path: a.out.display().to_string(), source }))?;
    let table = benchmark_table(&cells, &pos_options, &aug_options);
    write(&a.out.join("benchmark.txt"), &table)?;
    write(&a.out.join("benchmark.csv"), &benchmark_csv(&cells))?;
    print!("{table}");
    Ok(())
}

fn column_name(pos: bool, augment: bool) -> String {
    let mut s = String::from("CRF");
    if pos {
        s.push_str("+POS");
    }
    if augment {
        s.push_str("+AUG");
    }
    s
}

/// Overall F1 per scheme (rows) and feature setting (columns).
fn benchmark_table(cells: &[Cell], pos: &[bool], aug: &[bool]) -> String {
    let mut columns = Vec::new();
    for &g in aug {
        for &p in pos {
            columns.push((p, g));
        }
    }
    let mut out = format!("{:<8}", "scheme");
    for &(p, g) in &columns {
        let _ = write!(out, " {:>12}", column_name(p, g));
    }
    out.push('\n');
    let mut schemes_seen: Vec<Scheme> = Vec::new();
    for c in cells {
        if !schemes_seen.contains(&c.scheme) {
            schemes_seen.push(c.scheme);
        }
    }
    for s in schemes_seen {
        let _ = write!(out, "{:<8}", s.as_str());
        for &(p, g) in &columns {
            match cells.iter().find(|c| c.scheme == s && c.pos == p && c.augment == g) {
                Some(c) => {
                    let _ = write!(out, " {:>12.2}", c.report.overall.f1);
                }
                None => {
                    let _ = write!(out, " {:>12}", "-");
                }
            }
        }
        out.push('\n');
    }
    out
}

fn benchmark_csv(cells: &[Cell]) -> String {
    let mut out = String::from("scheme,pos,augment,type,gold,pred,correct,precision,recall,f1,token_accuracy\n");
    for c in cells {
        let rows = c.report.per_type.iter().map(|(t, s)| (t.as_str(), s)).chain([("ALL", &c.report.overall)]);
        for (t, s) in rows {
            let _ = writeln!(
                out,
                "{},{},{},{t},{},{},{},{:.2},{:.2},{:.2},{:.2}",
                c.scheme.as_str(),
                c.pos,
                c.augment,
                s.gold,
                s.pred,
                s.correct,
                s.precision,
                s.recall,
                s.f1,
                c.report.token_accuracy
            );
        }
    }
    out
}

//! The `valuesift` command line: config loading, flag overrides and the
//! subcommands wiring the library together.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::corpus::{
    parse_arguments, parse_labels, parse_taxonomy, Argument, ColumnNames, LabelMatrix, Level,
    ValueTaxonomy,
};
use crate::ensemble::{
    align_to_roster, binarize_class_predictions, parse_class_predictions,
    parse_descriptor_predictions, result_set_1, result_set_2, result_set_3, result_set_4,
    write_descriptor_predictions, LabelSpace, ResultSet, Scheme, DEFAULT_CLASS_THRESHOLD,
    DEFAULT_ENTAIL_THRESHOLD,
};
use crate::eval::{compare_reports, render_report, score_run, ScoreOptions, ScoreReport};
use crate::labelalg::{l1_matrix_to_l2, ReducedSpace};
use crate::pairgen::generate_dataset;
use crate::stub::{predict_split, StubConfig, StubMode, StubScorer};
use crate::textgen::TextPolicy;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "valuesift", version, about = "Entailment pairs, ensembles and scoring for human value detection")]
pub struct Cli {
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Cap on worker threads.
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate the entailment pair file and manifest for a split.
    MakePairs(MakePairsArgs),
    /// Write stub descriptor and class predictions for a split.
    StubPredict(StubPredictArgs),
    /// Combine prediction files into a result-set run file.
    Combine(CombineArgs),
    /// Score one or more run files against gold labels.
    Score(ScoreArgs),
    /// Export the category to reduced-class mapping.
    ExportMapping(OutArgs),
    /// Print corpus and taxonomy statistics for a split.
    Stats(SplitArgs),
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    #[arg(long)]
    pub split: String,
}

#[derive(Debug, Args)]
pub struct OutArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MakePairsArgs {
    #[arg(long)]
    pub split: String,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StubPredictArgs {
    #[arg(long)]
    pub split: String,
    #[arg(long, value_enum)]
    pub stub_mode: Option<StubMode>,
    /// Score emitted in constant mode.
    #[arg(long)]
    pub constant: Option<f64>,
    #[arg(long)]
    pub noise_seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CombineArgs {
    #[arg(long)]
    pub split: String,
    #[arg(long, value_enum)]
    pub scheme: Option<Scheme>,
    #[arg(long)]
    pub entail_threshold: Option<f64>,
    #[arg(long)]
    pub class_threshold: Option<f64>,
    /// Descriptor-level entailment predictions.
    #[arg(long)]
    pub entail: Option<PathBuf>,
    /// Baseline (20-category) classifier predictions.
    #[arg(long)]
    pub baseline: Option<PathBuf>,
    /// Reduced (12-class) classifier predictions.
    #[arg(long)]
    pub reduced: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[arg(long)]
    pub split: String,
    /// Run file(s) to score; repeat for a side-by-side comparison.
    #[arg(long = "run", required = true)]
    pub runs: Vec<PathBuf>,
    /// Gold L2 labels, overriding the split's configured labels.
    #[arg(long)]
    pub gold: Option<PathBuf>,
    /// Leave categories without gold positives out of the macro averages.
    #[arg(long)]
    pub exclude_empty_gold: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitPaths {
    pub arguments: PathBuf,
    #[serde(default)]
    pub labels_l1: Option<PathBuf>,
    #[serde(default)]
    pub labels_l2: Option<PathBuf>,
}

/// Everything a run needs, serializable so each output directory records how
/// it was produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub taxonomy: Option<PathBuf>,
    pub splits: BTreeMap<String, SplitPaths>,
    pub columns: ColumnNames,
    pub text_policy: TextPolicy,
    pub seed: u64,
    pub entail_threshold: f64,
    pub class_threshold: f64,
    pub scheme: Option<Scheme>,
    pub stub: Option<StubConfig>,
    pub out: PathBuf,
    pub workers: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            taxonomy: None,
            splits: BTreeMap::new(),
            columns: ColumnNames::default(),
            text_policy: TextPolicy::default(),
            seed: 0,
            entail_threshold: DEFAULT_ENTAIL_THRESHOLD,
            class_threshold: DEFAULT_CLASS_THRESHOLD,
            scheme: None,
            stub: None,
            out: PathBuf::from("out"),
            workers: None,
        }
    }
}

/// Failure of a command, mapped onto the process exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Data(anyhow::Error),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Data(_) => EXIT_DATA,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Data(e) => write!(f, "error: {e:#}"),
        }
    }
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Data(e.into())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

impl RunConfig {
    /// Loads a config file, resolving relative paths against its directory,
    /// and checks that every referenced path exists.
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg: RunConfig = serde_json::from_str(&text)
            .map_err(|e| usage(format!("invalid config {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.taxonomy = cfg.taxonomy.map(|t| resolve(base, &t));
        for split in cfg.splits.values_mut() {
            split.arguments = resolve(base, &split.arguments);
            split.labels_l1 = split.labels_l1.as_ref().map(|p| resolve(base, p));
            split.labels_l2 = split.labels_l2.as_ref().map(|p| resolve(base, p));
        }
        cfg.out = resolve(base, &cfg.out);
        cfg.check_paths()?;
        Ok(cfg)
    }

    fn check_paths(&self) -> Result<(), Failure> {
        let mut paths: Vec<&Path> = self.taxonomy.iter().map(PathBuf::as_path).collect();
        for s in self.splits.values() {
            paths.push(&s.arguments);
            paths.extend(s.labels_l1.as_deref());
            paths.extend(s.labels_l2.as_deref());
        }
        match paths.into_iter().find(|p| !p.exists()) {
            Some(p) => Err(usage(format!("configured path does not exist: {}", p.display()))),
            None => Ok(()),
        }
    }

    pub fn check_thresholds(&self) -> Result<(), Failure> {
        for (name, t) in [
            ("entail threshold", self.entail_threshold),
            ("class threshold", self.class_threshold),
        ] {
            if !(0.0..=1.0).contains(&t) {
                return Err(usage(format!("{name} {t} outside [0, 1]")));
            }
        }
        Ok(())
    }

    fn split(&self, name: &str) -> Result<&SplitPaths, Failure> {
        self.splits.get(name).ok_or_else(|| {
            usage(format!(
                "split {name:?} is not configured (known: {:?})",
                self.splits.keys().collect::<Vec<_>>()
            ))
        })
    }

    fn taxonomy(&self) -> Result<ValueTaxonomy, Failure> {
        let path = self
            .taxonomy
            .as_ref()
            .ok_or_else(|| usage("no taxonomy configured"))?;
        Ok(parse_taxonomy(open(path)?)
            .with_context(|| format!("taxonomy {}", path.display()))?)
    }

    fn arguments(&self, split: &str) -> Result<Vec<Argument>, Failure> {
        let path = &self.split(split)?.arguments;
        Ok(parse_arguments(open(path)?, &self.columns)
            .with_context(|| format!("arguments {}", path.display()))?)
    }

    fn labels(
        &self,
        path: &Path,
        level: Level,
        taxonomy: &ValueTaxonomy,
    ) -> Result<LabelMatrix, Failure> {
        Ok(parse_labels(open(path)?, level, taxonomy, &self.columns.id)
            .with_context(|| format!("labels {}", path.display()))?)
    }

    fn l1_labels(&self, split: &str, taxonomy: &ValueTaxonomy) -> Result<Option<LabelMatrix>, Failure> {
        match &self.split(split)?.labels_l1 {
            Some(p) => Ok(Some(self.labels(p, Level::L1, taxonomy)?)),
            None => Ok(None),
        }
    }

    /// Gold L2 labels: the configured L2 file, else aggregated from L1.
    fn l2_labels(&self, split: &str, taxonomy: &ValueTaxonomy) -> Result<Option<LabelMatrix>, Failure> {
        let paths = self.split(split)?;
        if let Some(p) = &paths.labels_l2 {
            return Ok(Some(self.labels(p, Level::L2, taxonomy)?));
        }
        match self.l1_labels(split, taxonomy)? {
            Some(l1) => Ok(Some(l1_matrix_to_l2(&l1, taxonomy)?)),
            None => Ok(None),
        }
    }
}

fn open(path: &Path) -> Result<BufReader<File>, Failure> {
    File::open(path)
        .map(BufReader::new)
        .with_context(|| format!("cannot open {}", path.display()))
        .map_err(Failure::Data)
}

/// Writes `bytes` to `path` through a temporary file in the same directory,
/// so readers never observe a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

fn to_bytes(f: impl FnOnce(&mut Vec<u8>) -> crate::Result<()>) -> anyhow::Result<Vec<u8>> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    Ok(buf)
}

fn json_bytes<T: Serialize>(value: &T) -> anyhow::Result<Vec<u8>> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s.into_bytes())
}

/// Runs a parsed command line.
pub fn run(cli: Cli) -> Result<(), Failure> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if cli.workers.is_some() {
        cfg.workers = cli.workers;
    }
    if cfg.workers == Some(0) {
        return Err(usage("--workers must be at least 1"));
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cfg.workers {
        builder = builder.num_threads(n);
    }
    let pool = builder.build()?;
    pool.install(|| dispatch(cli.command, cfg))
}

fn dispatch(command: Command, mut cfg: RunConfig) -> Result<(), Failure> {
    match command {
        Command::MakePairs(a) => {
            if let Some(s) = a.seed {
                cfg.seed = s;
            }
            if let Some(o) = a.out {
                cfg.out = o;
            }
            cmd_make_pairs(&cfg, &a.split)
        }
        Command::StubPredict(a) => {
            if let Some(o) = a.out {
                cfg.out = o;
            }
            let mut stub = cfg.stub.clone().unwrap_or_else(StubConfig::lexical);
            if let Some(m) = a.stub_mode {
                stub.mode = m;
                if m != StubMode::Constant {
                    stub.constant_value = None;
                }
            }
            if a.constant.is_some() {
                stub.constant_value = a.constant;
            }
            if a.noise_seed.is_some() {
                stub.noise_seed = a.noise_seed;
            }
            stub.validate().map_err(|e| usage(e.to_string()))?;
            cfg.stub = Some(stub);
            cmd_stub_predict(&cfg, &a.split)
        }
        Command::Combine(a) => {
            if a.scheme.is_some() {
                cfg.scheme = a.scheme;
            }
            if let Some(t) = a.entail_threshold {
                cfg.entail_threshold = t;
            }
            if let Some(t) = a.class_threshold {
                cfg.class_threshold = t;
            }
            if let Some(o) = a.out {
                cfg.out = o;
            }
            cfg.check_thresholds()?;
            let scheme = cfg.scheme.ok_or_else(|| usage("no --scheme given"))?;
            let inputs = PredictionInputs {
                entail: a.entail,
                baseline: a.baseline,
                reduced: a.reduced,
            };
            cmd_combine(&cfg, &a.split, scheme, &inputs).map(|_| ())
        }
        Command::Score(a) => {
            if let Some(o) = a.out {
                cfg.out = o;
            }
            let opts = ScoreOptions {
                exclude_empty_gold: a.exclude_empty_gold,
            };
            cmd_score(&cfg, &a.split, &a.runs, a.gold.as_deref(), &opts).map(|_| ())
        }
        Command::ExportMapping(a) => {
            if let Some(o) = a.out {
                cfg.out = o;
            }
            cmd_export_mapping(&cfg)
        }
        Command::Stats(a) => cmd_stats(&cfg, &a.split),
    }
}

fn record_config(cfg: &RunConfig, command: &str) -> anyhow::Result<()> {
    write_atomic(&cfg.out.join(format!("config.{command}.json")), &json_bytes(cfg)?)
}

pub fn pair_file_path(out: &Path, split: &str) -> PathBuf {
    out.join(format!("pairs-{split}.tsv"))
}

pub fn manifest_path(out: &Path, split: &str) -> PathBuf {
    out.join(format!("pairs-{split}.manifest.json"))
}

pub fn cmd_make_pairs(cfg: &RunConfig, split: &str) -> Result<(), Failure> {
    let taxonomy = cfg.taxonomy()?;
    let arguments = cfg.arguments(split)?;
    let l1 = cfg
        .l1_labels(split, &taxonomy)?
        .ok_or_else(|| usage(format!("split {split:?} has no labels_l1 configured")))?;
    let dataset = generate_dataset(split, &arguments, &l1, &taxonomy, cfg.seed, &cfg.text_policy)?;

    write_atomic(&pair_file_path(&cfg.out, split), &dataset.to_tsv())?;
    write_atomic(&manifest_path(&cfg.out, split), &json_bytes(&dataset.manifest)?)?;
    record_config(cfg, "make-pairs")?;

    let c = &dataset.manifest.counts;
    let w = &dataset.manifest.warnings;
    println!(
        "{split}: {} arguments ({} without positives), {} pairs = {} positive + {} difficult + {} easy",
        c.arguments, c.arguments_without_positives, c.total, c.positive, c.negative_difficult, c.negative_easy
    );
    println!(
        "warnings: {} pool shortfalls, {} underfilled arguments ({} negatives missing)",
        w.pool_shortfall, w.underfilled, w.missing_negatives
    );
    Ok(())
}

pub fn entail_file_path(out: &Path, split: &str) -> PathBuf {
    out.join(format!("entail-{split}.tsv"))
}

pub fn class_file_path(out: &Path, split: &str, space: LabelSpace) -> PathBuf {
    let kind = match space {
        LabelSpace::L2 => "baseline",
        LabelSpace::Reduced => "reduced",
    };
    out.join(format!("{kind}-{split}.tsv"))
}

pub fn cmd_stub_predict(cfg: &RunConfig, split: &str) -> Result<(), Failure> {
    let stub = cfg.stub.clone().unwrap_or_else(StubConfig::lexical);
    let scorer = StubScorer::new(stub).map_err(|e| usage(e.to_string()))?;
    let taxonomy = cfg.taxonomy()?;
    let arguments = cfg.arguments(split)?;
    let gold = cfg.l1_labels(split, &taxonomy)?;
    if scorer.config().mode == StubMode::OracleFromGold && gold.is_none() {
        return Err(usage(format!(
            "oracle_from_gold needs labels_l1 for split {split:?}"
        )));
    }
    let out = predict_split(&scorer, &arguments, &taxonomy, gold.as_ref(), &cfg.text_policy)?;

    let entail = to_bytes(|b| write_descriptor_predictions(b, &out.descriptors))?;
    let baseline = to_bytes(|b| out.baseline.write_tsv(b, &cfg.columns.id))?;
    let reduced = to_bytes(|b| out.reduced.write_tsv(b, &cfg.columns.id))?;

    // Re-parse with the strict readers before anything is written.
    parse_descriptor_predictions(entail.as_slice(), &taxonomy)?;
    parse_class_predictions(baseline.as_slice(), LabelSpace::L2, &taxonomy, &cfg.columns.id)?;
    parse_class_predictions(reduced.as_slice(), LabelSpace::Reduced, &taxonomy, &cfg.columns.id)?;

    write_atomic(&entail_file_path(&cfg.out, split), &entail)?;
    write_atomic(&class_file_path(&cfg.out, split, LabelSpace::L2), &baseline)?;
    write_atomic(&class_file_path(&cfg.out, split, LabelSpace::Reduced), &reduced)?;
    record_config(cfg, "stub-predict")?;
    println!(
        "{split}: {} descriptor predictions, {} baseline rows, {} reduced rows",
        out.descriptors.len(),
        out.baseline.rows.len(),
        out.reduced.rows.len()
    );
    Ok(())
}

#[derive(Debug, Clone, Default)]
pub struct PredictionInputs {
    pub entail: Option<PathBuf>,
    pub baseline: Option<PathBuf>,
    pub reduced: Option<PathBuf>,
}

pub fn run_file_path(out: &Path, split: &str, scheme: Scheme) -> PathBuf {
    out.join(format!("run-{scheme}-{split}.tsv"))
}

pub fn cmd_combine(
    cfg: &RunConfig,
    split: &str,
    scheme: Scheme,
    inputs: &PredictionInputs,
) -> Result<ResultSet, Failure> {
    let entail = inputs
        .entail
        .as_ref()
        .ok_or_else(|| usage(format!("scheme {scheme} needs --entail predictions")))?;
    let baseline_path = match (&inputs.baseline, scheme.needs_baseline()) {
        (Some(p), true) => Some(p),
        (None, true) => return Err(usage(format!("scheme {scheme} needs --baseline predictions"))),
        _ => None,
    };
    let reduced_path = match (&inputs.reduced, scheme.needs_reduced()) {
        (Some(p), true) => Some(p),
        (None, true) => return Err(usage(format!("scheme {scheme} needs --reduced predictions"))),
        _ => None,
    };

    let taxonomy = cfg.taxonomy()?;
    let roster: Vec<String> = cfg.arguments(split)?.into_iter().map(|a| a.id).collect();
    let descriptors = parse_descriptor_predictions(open(entail)?, &taxonomy)
        .with_context(|| format!("{}", entail.display()))?;
    let (rs1, missing) = result_set_1(&descriptors, &roster, &taxonomy, cfg.entail_threshold)?;
    if !missing.is_empty() {
        eprintln!("warning: {} argument(s) without entailment predictions", missing.len());
    }

    let class_sets = |path: &PathBuf, space: LabelSpace| -> Result<_, Failure> {
        let preds = parse_class_predictions(open(path)?, space, &taxonomy, &cfg.columns.id)
            .with_context(|| format!("{}", path.display()))?;
        let (aligned, missing) =
            align_to_roster(&binarize_class_predictions(&preds, cfg.class_threshold), &roster)?;
        if !missing.is_empty() {
            eprintln!(
                "warning: {} argument(s) without {space:?} predictions in {}",
                missing.len(),
                path.display()
            );
        }
        Ok(aligned)
    };
    let baseline = baseline_path.map(|p| class_sets(p, LabelSpace::L2)).transpose()?;
    let reduced = reduced_path.map(|p| class_sets(p, LabelSpace::Reduced)).transpose()?;

    let result = match scheme {
        Scheme::Rs1 => rs1,
        Scheme::Rs2 => result_set_2(&rs1, baseline.as_ref().expect("checked"))?,
        Scheme::Rs3 => result_set_3(&rs1, reduced.as_ref().expect("checked"))?,
        Scheme::Rs4 => result_set_4(
            &rs1,
            baseline.as_ref().expect("checked"),
            reduced.as_ref().expect("checked"),
        )?,
    };
    let bytes = to_bytes(|b| result.write_tsv(b, &taxonomy, &cfg.columns.id))?;
    let path = run_file_path(&cfg.out, split, scheme);
    write_atomic(&path, &bytes)?;
    record_config(cfg, "combine")?;
    println!("{}: {} arguments -> {}", scheme, roster.len(), path.display());
    Ok(result)
}

pub fn cmd_score(
    cfg: &RunConfig,
    split: &str,
    runs: &[PathBuf],
    gold_override: Option<&Path>,
    options: &ScoreOptions,
) -> Result<Vec<(String, ScoreReport)>, Failure> {
    let taxonomy = cfg.taxonomy()?;
    let gold = match gold_override {
        Some(p) => cfg.labels(p, Level::L2, &taxonomy)?,
        None => cfg
            .l2_labels(split, &taxonomy)?
            .ok_or_else(|| usage(format!("split {split:?} has no gold labels configured")))?,
    };
    let mut reports = Vec::new();
    for path in runs {
        let matrix = parse_labels(open(path)?, Level::L2, &taxonomy, &cfg.columns.id)
            .with_context(|| format!("run file {}", path.display()))?;
        let run = ResultSet::from_matrix(&matrix)?;
        let report = score_run(&gold, &run, options)
            .with_context(|| format!("scoring {}", path.display()))?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "run".into());
        let text = render_report(&report, 4);
        write_atomic(&cfg.out.join(format!("score-{name}.json")), &json_bytes(&report)?)?;
        write_atomic(&cfg.out.join(format!("score-{name}.txt")), text.as_bytes())?;
        println!("== {name}\n{text}");
        reports.push((name, report));
    }
    if reports.len() > 1 {
        let table = compare_reports(&reports, 4);
        write_atomic(&cfg.out.join("comparison.txt"), table.as_bytes())?;
        println!("{table}");
    }
    record_config(cfg, "score")?;
    Ok(reports)
}

pub fn mapping_path(out: &Path) -> PathBuf {
    out.join("reduced-mapping.tsv")
}

pub fn cmd_export_mapping(cfg: &RunConfig) -> Result<(), Failure> {
    let taxonomy = cfg.taxonomy()?;
    let space = ReducedSpace::new(&taxonomy);
    let bytes = to_bytes(|b| space.write_mapping(b))?;
    let path = mapping_path(&cfg.out);
    write_atomic(&path, &bytes)?;
    println!(
        "{} categories -> {} reduced classes -> {}",
        taxonomy.categories().len(),
        space.len(),
        path.display()
    );
    Ok(())
}

pub fn cmd_stats(cfg: &RunConfig, split: &str) -> Result<(), Failure> {
    let taxonomy = cfg.taxonomy()?;
    let arguments = cfg.arguments(split)?;
    println!(
        "taxonomy: {} categories, {} values, {} descriptors, {} reduced classes{}",
        taxonomy.categories().len(),
        taxonomy.value_count(),
        taxonomy.descriptor_count(),
        ReducedSpace::new(&taxonomy).len(),
        if taxonomy.has_official_shape() { " (official shape)" } else { "" }
    );
    println!("{split}: {} arguments", arguments.len());
    if let Some(l1) = cfg.l1_labels(split, &taxonomy)? {
        let labeled = arguments.iter().filter(|a| l1.row(&a.id).is_some()).count();
        let positives: usize = arguments
            .iter()
            .flat_map(|a| l1.positives(&a.id).collect::<Vec<_>>())
            .map(|v| taxonomy.value(v).map_or(0, |v| v.descriptors.len()))
            .sum();
        println!("L1 labels: {labeled} of {} arguments labeled; {positives} positive pairs expected", arguments.len());
    }
    if let Some(l2) = cfg.l2_labels(split, &taxonomy)? {
        println!("L2 prevalence:");
        for (i, c) in l2.columns().iter().enumerate() {
            let n = l2.rows().values().filter(|r| r[i]).count();
            println!("  {c:<28} {n}");
        }
    }
    Ok(())
}

//! The `sfc` command line.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use sfc_core::{
    apply_lexicon, evaluate, export_projection, fit_chain, generate_synthetic, predict_chain,
    split_train_test, ChainConfig, EmbedderSpec, FactorTaxonomy, LabeledUtterance, Lexicon,
    SyntheticSpec,
};

use crate::dataset::{read_dataset, read_lexicon, read_raw, read_taxonomy, write_file};
use crate::embedder::{load_word_vectors, Embedder};
use crate::model::{load_model, save_model};
use crate::{Error, Result};

/// Environment variable holding the embedding service URL. Wins over
/// `--endpoint`.
pub const ENDPOINT_VAR: &str = "SFC_EMBED_ENDPOINT";

#[derive(Debug, Parser)]
#[command(
    name = "sfc",
    version,
    about = "Symptom factor classification with discriminant heads"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a labeled synthetic corpus.
    Synth(SynthArgs),
    /// Shuffle a labeled file and cut it into train and test parts.
    Split(SplitArgs),
    /// Label raw utterances with a keyword lexicon.
    Label(LabelArgs),
    /// Write the built-in lexicon as JSON.
    Lexicon(LexiconArgs),
    /// Fit PCA and the classifier chain.
    Train(TrainArgs),
    /// Score a model on a labeled file; prints JSON.
    Eval(EvalArgs),
    /// Predict the labels of one utterance; prints JSON.
    Predict(PredictArgs),
    /// Export the 2-D discriminant projection of one head as TSV.
    Project(ProjectArgs),
}

#[derive(Debug, Args)]
pub struct TaxonomyArg {
    /// JSON taxonomy replacing the default class lists.
    #[arg(long)]
    pub taxonomy: Option<PathBuf>,
}

impl TaxonomyArg {
    fn load(&self) -> Result<FactorTaxonomy> {
        match &self.taxonomy {
            Some(p) => read_taxonomy(p),
            None => Ok(FactorTaxonomy::default()),
        }
    }
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// Most factors mentioned in one sentence (1 to 4).
    #[arg(long, default_value_t = 4)]
    pub max_factors: usize,
    #[command(flatten)]
    pub taxonomy: TaxonomyArg,
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value_t = 0.8)]
    pub ratio: f64,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long)]
    pub train_out: PathBuf,
    #[arg(long)]
    pub test_out: PathBuf,
    #[command(flatten)]
    pub taxonomy: TaxonomyArg,
}

#[derive(Debug, Args)]
pub struct LabelArgs {
    /// Raw JSONL with `id`, `text` and `parent`.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// JSON lexicon; the built-in one when omitted.
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub taxonomy: TaxonomyArg,
}

#[derive(Debug, Args)]
pub struct LexiconArgs {
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub taxonomy: TaxonomyArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EmbedderKind {
    Hash,
    Wordvec,
    Remote,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub train: PathBuf,
    #[arg(long, value_enum)]
    pub embedder: EmbedderKind,
    /// Embedding dimension. Defaults: 256 for hash, the file's for
    /// wordvec, 1024 for remote.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Defaults to min(50, dim, N - 1).
    #[arg(long)]
    pub pca_dim: Option<usize>,
    /// Hash embedder seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub word_vectors: Option<PathBuf>,
    #[arg(long)]
    pub endpoint: Option<String>,
    /// Within-class shrinkage for every head.
    #[arg(long)]
    pub shrinkage: Option<f64>,
    #[command(flatten)]
    pub taxonomy: TaxonomyArg,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub test: PathBuf,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub text: String,
}

#[derive(Debug, Args)]
pub struct ProjectArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub factor: String,
    #[arg(long)]
    pub out: PathBuf,
}

fn env_endpoint() -> Option<String> {
    std::env::var(ENDPOINT_VAR).ok().filter(|s| !s.is_empty())
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Synth(a) => synth(a),
        Command::Split(a) => split(a),
        Command::Label(a) => label(a),
        Command::Lexicon(a) => lexicon(a),
        Command::Train(a) => train(a),
        Command::Eval(a) => eval(a, stdout),
        Command::Predict(a) => predict(a, stdout),
        Command::Project(a) => project(a),
    }
}

fn synth(a: SynthArgs) -> Result<()> {
    let tax = a.taxonomy.load()?;
    let spec = SyntheticSpec {
        count: a.n,
        seed: a.seed,
        max_factors: a.max_factors,
    };
    write_file(&a.out, &generate_synthetic(&spec, &tax)?)
}

fn split(a: SplitArgs) -> Result<()> {
    let tax = a.taxonomy.load()?;
    let records = read_dataset(&a.input, &tax)?;
    let (train, test) = split_train_test(&records, a.ratio, a.seed)?;
    write_file(&a.train_out, &train)?;
    write_file(&a.test_out, &test)
}

fn label(a: LabelArgs) -> Result<()> {
    let tax = a.taxonomy.load()?;
    let lex = match &a.lexicon {
        Some(p) => read_lexicon(p, &tax)?,
        None => Lexicon::builtin(&tax),
    };
    let labeled: Vec<LabeledUtterance> = read_raw(&a.input)?
        .into_iter()
        .map(|r| LabeledUtterance {
            labels: apply_lexicon(&r.text, &lex, &tax),
            id: r.id,
            text: r.text,
            parent: r.parent,
        })
        .collect();
    write_file(&a.out, &labeled)
}

fn lexicon(a: LexiconArgs) -> Result<()> {
    let lex = Lexicon::builtin(&a.taxonomy.load()?);
    let mut json = serde_json::to_vec_pretty(&lex).expect("lexicon serializes");
    json.push(b'\n');
    std::fs::write(&a.out, json).map_err(|e| Error::io(&a.out, e))
}

fn texts(records: &[LabeledUtterance]) -> Vec<(&str, &str)> {
    records
        .iter()
        .map(|r| (r.id.as_str(), r.text.as_str()))
        .collect()
}

fn train(a: TrainArgs) -> Result<()> {
    let tax = a.taxonomy.load()?;
    let spec = match a.embedder {
        EmbedderKind::Hash => EmbedderSpec::Hash {
            dim: a.dim.unwrap_or(256),
            seed: a.seed,
        },
        EmbedderKind::Wordvec => {
            let path = a
                .word_vectors
                .as_ref()
                .ok_or_else(|| Error::Argument("--embedder wordvec needs --word-vectors".into()))?;
            let dim = match a.dim {
                Some(d) => d,
                None => load_word_vectors(path)?.dim(),
            };
            EmbedderSpec::WordVectors {
                path: path.display().to_string(),
                dim,
            }
        }
        EmbedderKind::Remote => EmbedderSpec::Remote {
            endpoint: env_endpoint().or(a.endpoint.clone()).ok_or_else(|| {
                Error::Argument(format!(
                    "--embedder remote needs --endpoint or {ENDPOINT_VAR}"
                ))
            })?,
            dim: a.dim.unwrap_or(1024),
        },
    };
    let embedder = Embedder::from_spec(&spec, None)?;

    let records = read_dataset(&a.train, &tax)?;
    if records.len() < 2 {
        return Err(sfc_core::Error::Validation(format!(
            "{}: need at least 2 training records, got {}",
            a.train.display(),
            records.len()
        ))
        .into());
    }
    let x = embedder.embed(&texts(&records))?;
    let pca_dim = a
        .pca_dim
        .unwrap_or_else(|| 50.min(x.dim()).min(records.len() - 1));
    let mut config = ChainConfig::new(spec, pca_dim);
    if let Some(g) = a.shrinkage {
        config.lda.shrinkage = g;
    }
    let labels: Vec<_> = records.iter().map(|r| r.labels.clone()).collect();
    let model = fit_chain(&x, &labels, &tax, &config)?;
    save_model(&a.out, &model)
}

fn model_embedder(model: &sfc_core::ChainModel) -> Result<Embedder> {
    Embedder::from_spec(&model.config.embedder, env_endpoint().as_deref())
}

fn eval(a: EvalArgs, stdout: &mut dyn Write) -> Result<()> {
    let model = load_model(&a.model)?;
    let records = read_dataset(&a.test, &model.taxonomy)?;
    if records.is_empty() {
        return Err(
            sfc_core::Error::Validation(format!("{}: no records", a.test.display())).into(),
        );
    }
    let x = model_embedder(&model)?.embed(&texts(&records))?;
    let preds = (0..x.rows())
        .map(|i| predict_chain(&model, x.row(i)))
        .collect::<sfc_core::Result<Vec<_>>>()?;
    let golds: Vec<_> = records.into_iter().map(|r| r.labels).collect();
    let report = evaluate(&preds, &golds)?;
    print_json(stdout, &report)
}

fn predict(a: PredictArgs, stdout: &mut dyn Write) -> Result<()> {
    let model = load_model(&a.model)?;
    let x = model_embedder(&model)?.embed(&[("--text", a.text.as_str())])?;
    print_json(stdout, &predict_chain(&model, x.row(0))?)
}

fn print_json<T: serde::Serialize>(stdout: &mut dyn Write, value: &T) -> Result<()> {
    let json = serde_json::to_string_pretty(value).expect("reports serialize");
    writeln!(stdout, "{json}").map_err(|e| Error::io(Path::new("<stdout>"), e))
}

fn project(a: ProjectArgs) -> Result<()> {
    let model = load_model(&a.model)?;
    let head = model
        .head(&a.factor)
        .ok_or_else(|| Error::Argument(format!("no factor `{}` in the model", a.factor)))?;
    let lda = head.lda().ok_or_else(|| {
        sfc_core::Error::DegenerateClasses(format!(
            "head `{}` saw a single class in training and has no projection",
            a.factor
        ))
    })?;
    let records = read_dataset(&a.data, &model.taxonomy)?;
    let x = model_embedder(&model)?.embed(&texts(&records))?;
    let labels: Vec<_> = records.iter().map(|r| r.labels.clone()).collect();
    let features = model.head_features(&x, &labels, &a.factor)?;
    let classes: Vec<&str> = labels
        .iter()
        .map(|l| l.get(&a.factor).unwrap_or(sfc_core::ABSENT))
        .collect();
    let ids: Vec<&str> = records.iter().map(|r| r.id.as_str()).collect();
    let rows = export_projection(lda, &a.factor, &features, &classes, &ids)?;
    std::fs::write(&a.out, projection_tsv(&rows)).map_err(|e| Error::io(&a.out, e))
}

/// `id x y class` with six decimals, tab separated, LF line ends.
pub fn projection_tsv(rows: &[sfc_core::ProjectionRow]) -> String {
    let mut out = String::from("id\tx\ty\tclass\n");
    for r in rows {
        out.push_str(&format!("{}\t{:.6}\t{:.6}\t{}\n", r.id, r.x, r.y, r.class));
    }
    out
}

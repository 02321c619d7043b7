use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "fusionlens",
    version,
    about = "Identity-fusion scoring, baselines, and group statistics for text corpora"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendKind {
    /// Every candidate gets 1/V.
    Uniform,
    /// Seeded context hash; deterministic and model-free.
    Hash,
    /// HTTP masked-fill server at --backend-url or $FUSIONLENS_BACKEND_URL.
    Remote,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    #[arg(long, global = true, value_enum, default_value = "hash")]
    pub backend: BackendKind,

    /// Smoothing exponent in (0, 1].
    #[arg(long, global = true, default_value_t = fusionlens_core::DEFAULT_ALPHA)]
    pub alpha: f64,

    /// Target words: a file with one word per line, or a comma-separated list.
    #[arg(long, global = true)]
    pub targets: Option<String>,

    /// Seed for the hash backend and the bootstrap.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Output directory. Without it results go to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Vocabulary size for the uniform backend.
    #[arg(long, global = true, default_value_t = fusionlens_core::UniformBackend::DEFAULT_VOCAB_SIZE)]
    pub vocab_size: usize,

    /// Base URL of the remote backend; overrides $FUSIONLENS_BACKEND_URL.
    #[arg(long, global = true)]
    pub backend_url: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score documents and predict fusion (writes predictions.jsonl).
    Score(ScoreArgs),
    /// Filter by length and/or chunk a corpus (writes prepared.jsonl and manifest.json).
    Prepare(PrepareArgs),
    /// Rank correlation and MAE of prediction columns against truth_score.
    Evaluate(EvaluateArgs),
    /// Compare two groups of predictions (writes comparison.json and plot data).
    Compare(CompareArgs),
    /// Dictionary baselines: VRI-Fusion, nUAI, UAI.
    Baseline(BaselineArgs),
    /// Expand the target list with similar words from a candidate pool.
    VocabExpand(VocabExpandArgs),
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    /// Corpus in JSONL (or CSV with an .csv extension).
    pub corpus: PathBuf,

    /// Emit metaphor features only, without fine/coarse predictions.
    #[arg(long)]
    pub features_only: bool,

    /// Identity words (file or comma list).
    #[arg(long)]
    pub identity: Option<String>,

    /// Kinship words (file or comma list).
    #[arg(long)]
    pub kinship: Option<String>,

    /// Normalizer of the default fine-score heuristic.
    #[arg(long, default_value_t = fusionlens_core::HeuristicFine::DEFAULT_S_NORM)]
    pub s_norm: f64,

    /// Base URL of a served predictor speaking POST /v1/predict.
    #[arg(long)]
    pub predictor_url: Option<String>,
}

#[derive(Debug, Args)]
pub struct PrepareArgs {
    pub corpus: PathBuf,

    /// Keep documents with at least this many words.
    #[arg(long)]
    pub min_words: Option<usize>,

    /// Keep documents (or chunks) with at least this many sentences.
    #[arg(long)]
    pub min_sentences: Option<usize>,

    /// Split long documents into sentence-preserving chunks.
    #[arg(long)]
    pub chunk: bool,

    /// Chunk size limit in words (default 300). Only valid with --chunk.
    #[arg(long)]
    pub max_words: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Prediction JSONL files; every record needs truth_score.
    #[arg(required = true)]
    pub files: Vec<PathBuf>,

    /// Numeric fields to evaluate, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "fine")]
    pub columns: Vec<String>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Prediction JSONL with a group label on every record.
    pub predictions: PathBuf,

    /// The two groups to compare, first minus second. Defaults to the two labels present, sorted.
    #[arg(long, value_delimiter = ',')]
    pub groups: Option<Vec<String>>,

    /// Keep only records whose coarse class is high.
    #[arg(long)]
    pub high_fusion_only: bool,

    #[arg(
        long,
        value_delimiter = ',',
        default_value = "fine,proximity,k_f,s_t_to_i,s_i_to_t"
    )]
    pub features: Vec<String>,

    #[arg(long, default_value_t = fusionlens_core::BootstrapConfig::DEFAULT_RESAMPLES)]
    pub resamples: usize,

    /// Confidence level of bootstrap intervals.
    #[arg(long, default_value_t = fusionlens_core::BootstrapConfig::DEFAULT_LEVEL)]
    pub level: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BaselineKind {
    Vri,
    Nuai,
    Uai,
}

#[derive(Debug, Args)]
pub struct BaselineArgs {
    pub corpus: PathBuf,

    #[arg(long, value_enum)]
    pub method: BaselineKind,

    /// Category dictionary JSON for nuai/uai; defaults to the bundled demo dictionary.
    #[arg(long)]
    pub dict: Option<PathBuf>,

    /// Kinship words for vri (file or comma list).
    #[arg(long)]
    pub kinship: Option<String>,
}

#[derive(Debug, Args)]
pub struct VocabExpandArgs {
    /// Candidate words (file or comma list).
    #[arg(long)]
    pub pool: String,

    #[arg(long, default_value_t = fusionlens_core::ExpansionConfig::DEFAULT_TOP_K)]
    pub top_k: usize,

    #[arg(long, default_value_t = fusionlens_core::ExpansionConfig::DEFAULT_THRESHOLD)]
    pub threshold: f64,

    /// word2vec text-format embeddings used for similarity instead of the backend.
    #[arg(long)]
    pub embeddings: Option<PathBuf>,
}

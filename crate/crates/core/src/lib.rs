//! Identity-fusion features from text.
//!
//! The pipeline scores how strongly a text treats the writer ("I", "me")
//! and a group ("church", "country") as interchangeable, using masked
//! language model fill-in probabilities as a metaphor detector. Around that
//! core sit vocabulary handling, corpus preparation (sentence segmentation,
//! length filters, chunking), dictionary baselines, fine/coarse predictions,
//! and the statistics used to evaluate predictions and compare groups.
//!
//! ```
//! use fusionlens_core::{score_features, Document, ScoringParams, UniformBackend};
//!
//! let params = ScoringParams::builtin(0.25).unwrap();
//! let backend = UniformBackend::new(30_522).unwrap();
//! let doc = Document::new("d1", "My team is my family.");
//! let f = score_features(&doc, &params, &backend).unwrap();
//! assert!(f.proximity > 0.0);
//! ```

pub mod backend;
pub mod baselines;
pub mod corpus;
pub mod error;
pub mod predict;
pub mod report;
pub mod scoring;
pub mod stats;
pub mod text;
pub mod vocabulary;

pub use backend::{
    BackendError, EmbeddingSimilarity, HashBackend, MaskedLanguageModel, MaskedQuery,
    PrefixSimilarity, RemoteBackend, TokenDistribution, UniformBackend, WordSimilarity,
    BACKEND_URL_ENV,
};
pub use baselines::{
    category_rates, nuai, uai, vri_fusion, BaselineMethod, BaselineScore, CategoryDictionary,
    UaiOutput,
};
pub use corpus::{read_corpus, read_jsonl, read_records, write_jsonl, CorpusFormat};
pub use error::{Error, Result};
pub use predict::{
    filter_high_fusion, filter_high_fusion_records, predict, predict_corpus, predict_from_features,
    CoarseClass, CoarseProvider, FeatureWeights, FineProvider, FusionPrediction, HeuristicFine,
    PredictionRecord, RemotePredictor, ThresholdCoarse,
};
pub use report::{
    evaluate_method, round_significant, to_canonical_line, to_canonical_pretty, EvaluationReport,
    MethodMetrics,
};
pub use scoring::{
    directional_score, fusion_proximity, score_corpus, score_features, AnchorCounts, Direction,
    DirectionalScore, FeatureRecord, FusionFeatures, ScoringParams, DEFAULT_ALPHA,
};
pub use stats::{
    bootstrap_ci, cliffs_delta, cohens_d, compare_groups, ecdf, histogram, kde, mae, spearman,
    wasserstein1d, BootstrapConfig, BootstrapStatistic, ConfidenceInterval, GroupComparison,
    GroupSummary, PairedSample, SpearmanResult,
};
pub use text::{
    chunk, filter_corpus, segment, split_sentences, Chunking, Document, FilterReport, LengthFilter,
    SegmentedDocument, DEFAULT_CHUNK_WORDS,
};
pub use vocabulary::{builtin_lexicon, expand_targets, ExpansionConfig, Lexicon, Role};

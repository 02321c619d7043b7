use fusionlens_core::{
    chunk, filter_corpus, segment, to_canonical_pretty, write_jsonl, Document, LengthFilter,
    SegmentedDocument, DEFAULT_CHUNK_WORDS,
};
use serde_json::{json, Map, Value};

use super::load_corpus;
use crate::args::{GlobalArgs, PrepareArgs};
use crate::error::{CliError, CliResult, Status};
use crate::output::Output;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    FilterWords(usize),
    FilterSentences(usize),
    Chunk(usize),
    ChunkFilterSentences(usize, usize),
}

impl Mode {
    fn from_args(a: &PrepareArgs) -> CliResult<Self> {
        if a.max_words.is_some() && !a.chunk {
            return Err(CliError::usage("--max-words only applies with --chunk"));
        }
        let max_words = a.max_words.unwrap_or(DEFAULT_CHUNK_WORDS);
        match (a.chunk, a.min_words, a.min_sentences) {
            (false, Some(w), None) => Ok(Mode::FilterWords(w)),
            (false, None, Some(s)) => Ok(Mode::FilterSentences(s)),
            (true, None, None) => Ok(Mode::Chunk(max_words)),
            (true, None, Some(s)) => Ok(Mode::ChunkFilterSentences(max_words, s)),
            (false, None, None) => Err(CliError::usage(
                "choose a mode: --min-words, --min-sentences, --chunk, or --chunk with --min-sentences",
            )),
            (false, Some(_), Some(_)) => Err(CliError::usage("--min-words and --min-sentences are separate modes")),
            (true, Some(_), _) => Err(CliError::usage("--min-words cannot be combined with --chunk")),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Mode::FilterWords(_) => "filter-words",
            Mode::FilterSentences(_) => "filter-sentences",
            Mode::Chunk(_) => "chunk",
            Mode::ChunkFilterSentences(..) => "chunk+filter-sentences",
        }
    }

    fn params(self) -> Value {
        match self {
            Mode::FilterWords(w) => json!({"min_words": w}),
            Mode::FilterSentences(s) => json!({"min_sentences": s}),
            Mode::Chunk(m) => json!({"max_words": m}),
            Mode::ChunkFilterSentences(m, s) => json!({"max_words": m, "min_sentences": s}),
        }
    }
}

pub fn prepare(g: &GlobalArgs, a: &PrepareArgs) -> CliResult {
    let mode = Mode::from_args(a)?;
    for n in [a.min_words, a.min_sentences, a.max_words]
        .into_iter()
        .flatten()
    {
        if n == 0 {
            return Err(CliError::usage("length thresholds must be positive"));
        }
    }
    let docs = load_corpus(&a.corpus)?;
    let input_n = docs.len();

    // Documents without text have no sentences: they fail every filter and yield no chunks.
    let mut segmented = Vec::with_capacity(docs.len());
    for doc in &docs {
        if doc.text.trim().is_empty() {
            log::warn!("document {:?} has no text and is dropped", doc.id);
            continue;
        }
        segmented.push(segment(doc)?);
    }

    let mut manifest = Map::new();
    let prepared: Vec<SegmentedDocument> = match mode {
        Mode::FilterWords(w) => filter_corpus(segmented, LengthFilter::min_words(w))?.0,
        Mode::FilterSentences(s) => filter_corpus(segmented, LengthFilter::min_sentences(s))?.0,
        Mode::Chunk(m) | Mode::ChunkFilterSentences(m, _) => {
            let mut chunks = Vec::new();
            let mut oversized = 0;
            for doc in &segmented {
                let c = chunk(doc, m)?;
                oversized += c.oversized.len();
                chunks.extend(c.chunks);
            }
            manifest.insert("chunk_n".into(), json!(chunks.len()));
            manifest.insert("oversized_n".into(), json!(oversized));
            match mode {
                Mode::ChunkFilterSentences(_, s) => {
                    filter_corpus(chunks, LengthFilter::min_sentences(s))?.0
                }
                _ => chunks,
            }
        }
    };

    let out_docs: Vec<Document> = prepared.into_iter().map(|d| d.document).collect();
    manifest.insert("input_n".into(), json!(input_n));
    manifest.insert("output_n".into(), json!(out_docs.len()));
    manifest.insert("mode".into(), json!(mode.name()));
    manifest.insert("params".into(), mode.params());

    let mut buf = Vec::new();
    write_jsonl(&mut buf, &out_docs)?;
    let out = Output::new(g.out.as_deref())?;
    out.primary(
        "prepared.jsonl",
        &String::from_utf8(buf).expect("JSON is UTF-8"),
    )?;
    out.secondary(
        "manifest.json",
        &to_canonical_pretty(&Value::Object(manifest))?,
    )?;
    Ok(Status::Success)
}

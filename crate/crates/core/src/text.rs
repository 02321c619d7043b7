//! Documents, sentence segmentation, length filters, and sentence-preserving chunking.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default chunk size in words.
pub const DEFAULT_CHUNK_WORDS: usize = 300;

/// Lower-cased words that take a trailing period without ending a sentence.
const ABBREVIATIONS: &[&str] = &[
    "apr", "aug", "capt", "cf", "co", "col", "corp", "dec", "dept", "dr", "e.g", "est", "feb",
    "fig", "gen", "gov", "i.e", "inc", "jan", "jr", "jul", "jun", "lt", "ltd", "mar", "mr", "mrs",
    "ms", "mt", "no", "nov", "oct", "prof", "rep", "rev", "sen", "sep", "sept", "sgt", "sr", "st",
    "vol", "vs",
];

const TERMINATORS: &[char] = &['.', '!', '?'];
const CLOSERS: &[char] = &['"', '\'', '\u{201d}', '\u{2019}', ')', ']'];
const OPENERS: &[char] = &['"', '\'', '\u{201c}', '\u{2018}', '(', '['];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    /// Ground-truth fusion rating on the 1-7 scale.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truth_score: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent_id: Option<String>,
}

impl Document {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            text: text.into(),
            group: None,
            truth_score: None,
            parent_id: None,
        }
    }

    pub fn with_group(mut self, group: impl Into<String>) -> Self {
        self.group = Some(group.into());
        self
    }

    pub fn with_truth_score(mut self, score: f64) -> Self {
        self.truth_score = Some(score);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.id.is_empty() {
            return Err(Error::invalid("document id must not be empty"));
        }
        if let Some(t) = self.truth_score {
            if !(1.0..=7.0).contains(&t) {
                return Err(Error::invalid(format!(
                    "document {:?}: truth_score {t} outside [1, 7]",
                    self.id
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentedDocument {
    pub document: Document,
    pub sentences: Vec<String>,
    pub word_count: usize,
    pub sentence_count: usize,
}

impl SegmentedDocument {
    fn from_sentences(document: Document, sentences: Vec<String>) -> Self {
        let word_count = sentences.iter().map(|s| word_count(s)).sum();
        let sentence_count = sentences.len();
        Self {
            document,
            sentences,
            word_count,
            sentence_count,
        }
    }
}

/// Number of whitespace-delimited words.
pub fn word_count(text: &str) -> usize {
    text.split_whitespace().count()
}

/// Lower-cases a word and strips leading and trailing non-alphanumeric characters.
pub fn normalize_token(token: &str) -> String {
    token
        .trim_matches(|c: char| !c.is_alphanumeric())
        .to_lowercase()
}

/// Whitespace tokens of a text alongside their normalized forms.
#[derive(Debug, Clone, PartialEq)]
pub struct Tokens {
    pub raw: Vec<String>,
    pub normalized: Vec<String>,
}

impl Tokens {
    pub fn new(text: &str) -> Self {
        let raw: Vec<String> = text.split_whitespace().map(str::to_owned).collect();
        let normalized = raw.iter().map(|t| normalize_token(t)).collect();
        Self { raw, normalized }
    }

    pub fn len(&self) -> usize {
        self.raw.len()
    }

    pub fn is_empty(&self) -> bool {
        self.raw.is_empty()
    }
}

fn is_sentence_start(rest: &str) -> bool {
    let mut chars = rest.chars();
    match chars.next() {
        Some(c) if c.is_uppercase() || c.is_ascii_digit() => true,
        Some(c) if OPENERS.contains(&c) => chars
            .next()
            .is_some_and(|c| c.is_uppercase() || c.is_ascii_digit()),
        _ => false,
    }
}

fn is_abbreviation(before_period: &str) -> bool {
    let word = before_period
        .rsplit(char::is_whitespace)
        .next()
        .unwrap_or("")
        .trim_start_matches(OPENERS)
        .to_lowercase();
    ABBREVIATIONS.contains(&word.as_str())
}

/// Splits text into trimmed sentences.
///
/// A boundary is a run of `.`, `!`, or `?` (plus any closing quotes or
/// brackets) followed by whitespace and then an uppercase letter or digit,
/// optionally behind an opening quote or bracket. A lone period after a
/// known abbreviation is not a boundary.
pub fn split_sentences(text: &str) -> Vec<&str> {
    let mut sentences = Vec::new();
    let mut start = 0;
    let mut iter = text.char_indices().peekable();
    while let Some((i, c)) = iter.next() {
        if !TERMINATORS.contains(&c) {
            continue;
        }
        let mut end = i + c.len_utf8();
        let mut run = 1;
        while let Some(&(j, d)) = iter.peek() {
            if TERMINATORS.contains(&d) {
                run += 1;
            } else if !CLOSERS.contains(&d) {
                break;
            }
            end = j + d.len_utf8();
            iter.next();
        }
        let rest = &text[end..];
        let next_start = rest.trim_start();
        if next_start.len() == rest.len() || next_start.is_empty() {
            continue;
        }
        if !is_sentence_start(next_start) {
            continue;
        }
        if c == '.' && run == 1 && is_abbreviation(&text[start..i]) {
            continue;
        }
        let sentence = text[start..end].trim();
        if !sentence.is_empty() {
            sentences.push(sentence);
        }
        start = text.len() - next_start.len();
    }
    let tail = text[start..].trim();
    if !tail.is_empty() {
        sentences.push(tail);
    }
    sentences
}

pub fn segment(doc: &Document) -> Result<SegmentedDocument> {
    if doc.text.trim().is_empty() {
        return Err(Error::invalid(format!("document {:?} has no text", doc.id)));
    }
    let sentences = split_sentences(&doc.text)
        .into_iter()
        .map(str::to_owned)
        .collect();
    Ok(SegmentedDocument::from_sentences(doc.clone(), sentences))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthFilter {
    pub min_words: Option<usize>,
    pub min_sentences: Option<usize>,
}

impl LengthFilter {
    pub fn min_words(n: usize) -> Self {
        Self {
            min_words: Some(n),
            min_sentences: None,
        }
    }

    pub fn min_sentences(n: usize) -> Self {
        Self {
            min_words: None,
            min_sentences: Some(n),
        }
    }

    fn accepts(&self, doc: &SegmentedDocument) -> bool {
        self.min_words.is_none_or(|n| doc.word_count >= n)
            && self.min_sentences.is_none_or(|n| doc.sentence_count >= n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterReport {
    pub retained: usize,
    pub dropped: usize,
    /// False when both thresholds were combined, which no published evaluation did.
    pub replication: bool,
}

/// Keeps documents meeting every configured threshold, in input order.
pub fn filter_corpus(
    docs: Vec<SegmentedDocument>,
    filter: LengthFilter,
) -> Result<(Vec<SegmentedDocument>, FilterReport)> {
    if filter.min_words == Some(0) || filter.min_sentences == Some(0) {
        return Err(Error::invalid("length thresholds must be positive"));
    }
    let replication = !(filter.min_words.is_some() && filter.min_sentences.is_some());
    if !replication {
        log::warn!(
            "combining word and sentence thresholds does not mirror any published evaluation"
        );
    }
    let total = docs.len();
    let kept: Vec<_> = docs.into_iter().filter(|d| filter.accepts(d)).collect();
    let report = FilterReport {
        retained: kept.len(),
        dropped: total - kept.len(),
        replication,
    };
    Ok((kept, report))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chunking {
    pub chunks: Vec<SegmentedDocument>,
    /// Indices into `chunks` holding a single sentence longer than the limit.
    pub oversized: Vec<usize>,
}

/// Packs whole sentences greedily into chunks of at most `max_words` words.
///
/// A document that already fits is returned unchanged. Otherwise chunk `k`
/// gets id `"{id}#{k}"`, `parent_id = id`, and inherits group and truth score.
/// A sentence longer than the limit becomes a chunk of its own and is listed
/// in [`Chunking::oversized`].
pub fn chunk(doc: &SegmentedDocument, max_words: usize) -> Result<Chunking> {
    if max_words == 0 {
        return Err(Error::invalid("max_words must be positive"));
    }
    if doc.word_count <= max_words {
        return Ok(Chunking {
            chunks: vec![doc.clone()],
            oversized: Vec::new(),
        });
    }

    let mut groups: Vec<Vec<String>> = Vec::new();
    let mut oversized = Vec::new();
    let mut current: Vec<String> = Vec::new();
    let mut current_words = 0;
    for sentence in &doc.sentences {
        let words = word_count(sentence);
        if !current.is_empty() && current_words + words > max_words {
            groups.push(std::mem::take(&mut current));
            current_words = 0;
        }
        if words > max_words {
            oversized.push(groups.len());
        }
        current.push(sentence.clone());
        current_words += words;
    }
    if !current.is_empty() {
        groups.push(current);
    }
    for &k in &oversized {
        log::warn!(
            "document {:?}: chunk {k} is a single sentence over {max_words} words",
            doc.document.id
        );
    }

    let parent = &doc.document;
    let chunks = groups
        .into_iter()
        .enumerate()
        .map(|(k, sentences)| {
            let document = Document {
                id: format!("{}#{k}", parent.id),
                text: sentences.join(" "),
                group: parent.group.clone(),
                truth_score: parent.truth_score,
                parent_id: Some(parent.id.clone()),
            };
            SegmentedDocument::from_sentences(document, sentences)
        })
        .collect();
    Ok(Chunking { chunks, oversized })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(text: &str) -> SegmentedDocument {
        segment(&Document::new("d", text)).unwrap()
    }

    #[test]
    fn single_sentence_response() {
        let s = seg("My pray has come true");
        assert_eq!(s.sentence_count, 1);
        assert_eq!(s.word_count, 5);
    }

    #[test]
    fn one_terminator_each() {
        assert_eq!(seg("A. B! C?").sentences, vec!["A.", "B!", "C?"]);
    }

    #[test]
    fn abbreviation_guard() {
        assert_eq!(
            seg("Dr. Smith left. He returned.").sentences,
            vec!["Dr. Smith left.", "He returned."]
        );
        assert_eq!(seg("We met in the U.S. Then we left.").sentence_count, 2);
        assert_eq!(
            seg("He lives on Main St. Downtown is far.").sentence_count,
            1
        );
    }

    #[test]
    fn lowercase_continuation_does_not_split() {
        assert_eq!(seg("i like jesus. so i am converted").sentence_count, 1);
        assert_eq!(seg("Version 2.5 is out").sentence_count, 1);
    }

    #[test]
    fn quotes_and_runs() {
        let s = seg("He said \"Go.\" Then he left!! \"Why?\" she asked... 3 days passed.");
        assert_eq!(
            s.sentences,
            vec![
                "He said \"Go.\"",
                "Then he left!!",
                "\"Why?\" she asked...",
                "3 days passed."
            ]
        );
    }

    #[test]
    fn empty_text_is_invalid() {
        assert!(segment(&Document::new("d", "   \n")).is_err());
    }

    #[test]
    fn segment_is_idempotent_on_sentences() {
        let s = seg("First one. Second (really) one! \"Third\" one? 4th one.");
        for sentence in &s.sentences {
            assert_eq!(split_sentences(sentence), vec![sentence.as_str()]);
        }
    }

    #[test]
    fn filter_thresholds() {
        let doc = seg(&vec!["word"; 35].join(" "));
        let (kept, rep) = filter_corpus(vec![doc.clone()], LengthFilter::min_words(30)).unwrap();
        assert_eq!((kept.len(), rep.retained, rep.dropped), (1, 1, 0));
        assert!(rep.replication);
        let (kept, rep) = filter_corpus(vec![doc.clone()], LengthFilter::min_words(40)).unwrap();
        assert_eq!((kept.len(), rep.dropped), (0, 1));
        assert!(filter_corpus(vec![doc.clone()], LengthFilter::min_sentences(0)).is_err());
        let both = LengthFilter {
            min_words: Some(1),
            min_sentences: Some(1),
        };
        assert!(!filter_corpus(vec![doc], both).unwrap().1.replication);
    }

    #[test]
    fn short_document_is_its_own_chunk() {
        let doc = seg(&format!("{}.", vec!["word"; 100].join(" ")));
        let out = chunk(&doc, 300).unwrap();
        assert_eq!(out.chunks, vec![doc]);
    }

    #[test]
    fn long_document_is_packed_greedily() {
        // 20 sentences of 35 words = 700 words.
        let sentence = format!("Word {}.", vec!["word"; 34].join(" "));
        let text = vec![sentence.as_str(); 20].join(" ");
        let doc = seg(&text).clone();
        let doc = SegmentedDocument {
            document: doc.document.with_group("g").with_truth_score(4.0),
            ..doc
        };
        assert_eq!(doc.word_count, 700);
        let out = chunk(&doc, 300).unwrap();
        assert_eq!(out.chunks.len(), 3);
        assert!(out.oversized.is_empty());
        let words: Vec<usize> = out.chunks.iter().map(|c| c.word_count).collect();
        assert_eq!(words, vec![280, 280, 140]);
        let rejoined: Vec<String> = out
            .chunks
            .iter()
            .flat_map(|c| c.sentences.clone())
            .collect();
        assert_eq!(rejoined, doc.sentences);
        for (k, c) in out.chunks.iter().enumerate() {
            assert_eq!(c.document.id, format!("d#{k}"));
            assert_eq!(c.document.parent_id.as_deref(), Some("d"));
            assert_eq!(c.document.group.as_deref(), Some("g"));
            assert_eq!(c.document.truth_score, Some(4.0));
        }
    }

    #[test]
    fn oversized_sentence_gets_own_chunk() {
        let long = format!("Long {}.", vec!["x"; 20].join(" "));
        let text = format!("Short one. {long} Short two.");
        let doc = seg(&text);
        let out = chunk(&doc, 10).unwrap();
        assert_eq!(out.chunks.len(), 3);
        assert_eq!(out.oversized, vec![1]);
        assert_eq!(out.chunks[1].sentences, vec![long]);
        assert!(chunk(&doc, 0).is_err());
    }

    #[test]
    fn truth_score_range() {
        assert!(Document::new("a", "x")
            .with_truth_score(7.0)
            .validate()
            .is_ok());
        assert!(Document::new("a", "x")
            .with_truth_score(0.5)
            .validate()
            .is_err());
        assert!(Document::new("", "x").validate().is_err());
    }

    #[test]
    fn token_normalization() {
        let t = Tokens::new("My church, \"God's\" (FAMILY)!");
        assert_eq!(t.normalized, vec!["my", "church", "god's", "family"]);
        assert_eq!(t.raw[1], "church,");
    }
}

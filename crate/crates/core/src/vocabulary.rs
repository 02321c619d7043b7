//! Word lists: identity, kinship, fusion targets, and dictionary categories.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::backend::WordSimilarity;
use crate::error::{Error, Result};

const IDENTITY_WORDS: &str = include_str!("../data/identity.txt");
const KINSHIP_WORDS: &str = include_str!("../data/kinship.txt");
const TARGET_WORDS: &str = include_str!("../data/targets.txt");

/// Target set used for the survey and field corpora.
pub const KNOWN_GROUPS_SURVEY: [&str; 5] = ["religion", "religious", "church", "god", "faith"];

/// Augmented target set used for the manifesto corpus.
pub const KNOWN_GROUPS_MANIFESTO: [&str; 14] = [
    "religion",
    "religious",
    "church",
    "god",
    "college",
    "university",
    "school",
    "usa",
    "country",
    "america",
    "white",
    "nation",
    "nazi",
    "culture",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Identity,
    Kinship,
    Target,
    Category,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Identity => "identity",
            Role::Kinship => "kinship",
            Role::Target => "target",
            Role::Category => "category",
        })
    }
}

/// A named, lowercase, deduplicated set of single-token words.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lexicon {
    name: String,
    role: Role,
    words: BTreeSet<String>,
}

impl Lexicon {
    /// Builds a lexicon, lowercasing entries and dropping blanks.
    ///
    /// Entries with internal whitespace are rejected: scoring masks one token
    /// position at a time, so phrases cannot be matched.
    pub fn new<I, S>(name: impl Into<String>, role: Role, words: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let name = name.into();
        let mut set = BTreeSet::new();
        for w in words {
            let w = w.as_ref().trim();
            if w.is_empty() {
                continue;
            }
            if w.chars().any(char::is_whitespace) {
                return Err(Error::invalid(format!(
                    "lexicon {name:?}: multi-word entry {w:?} is not supported"
                )));
            }
            set.insert(w.to_lowercase());
        }
        if set.is_empty() && matches!(role, Role::Identity | Role::Kinship) {
            return Err(Error::invalid(format!(
                "{role} lexicon {name:?} must not be empty"
            )));
        }
        Ok(Self {
            name,
            role,
            words: set,
        })
    }

    /// Parses the one-word-per-line format; `#` starts a comment.
    pub fn parse(name: impl Into<String>, role: Role, text: &str) -> Result<Self> {
        let words = text.lines().map(|line| match line.find('#') {
            Some(i) => &line[..i],
            None => line,
        });
        Self::new(name, role, words)
    }

    pub fn from_path(role: Role, path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| role.to_string());
        Self::parse(name, role, &text)
    }

    /// Interprets `arg` as a lexicon file if such a file exists, otherwise as a comma-separated list.
    pub fn from_arg(role: Role, arg: &str) -> Result<Self> {
        let path = Path::new(arg);
        if path.is_file() {
            Self::from_path(role, path)
        } else {
            Self::new(format!("{role}-list"), role, arg.split(','))
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> + '_ {
        self.words.iter().map(String::as_str)
    }

    pub fn to_vec(&self) -> Vec<String> {
        self.words.iter().cloned().collect()
    }

    /// Case-insensitive membership.
    pub fn contains(&self, word: &str) -> bool {
        if word.chars().any(char::is_uppercase) {
            self.words.contains(&word.to_lowercase())
        } else {
            self.words.contains(word)
        }
    }

    pub fn is_superset(&self, other: &Lexicon) -> bool {
        self.words.is_superset(&other.words)
    }

    /// Union keeping `self`'s name and role.
    pub fn union(&self, other: &Lexicon) -> Lexicon {
        Lexicon {
            name: self.name.clone(),
            role: self.role,
            words: self.words.union(&other.words).cloned().collect(),
        }
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

/// The lexicon shipped for `role`. Category lexicons come from dictionaries and have no default.
pub fn builtin_lexicon(role: Role) -> Result<Lexicon> {
    let (name, text) = match role {
        Role::Identity => ("identity", IDENTITY_WORDS),
        Role::Kinship => ("kinship", KINSHIP_WORDS),
        Role::Target => ("base-targets", TARGET_WORDS),
        Role::Category => {
            return Err(Error::invalid("no built-in lexicon for the category role"));
        }
    };
    Lexicon::parse(name, role, text)
}

#[derive(Debug, Clone)]
pub struct ExpansionConfig {
    top_k: usize,
    similarity_threshold: f64,
    candidate_pool: Lexicon,
}

impl ExpansionConfig {
    pub const DEFAULT_TOP_K: usize = 10;
    pub const DEFAULT_THRESHOLD: f64 = 0.6;

    pub fn new(top_k: usize, similarity_threshold: f64, candidate_pool: Lexicon) -> Result<Self> {
        if top_k == 0 {
            return Err(Error::Config("expansion top_k must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&similarity_threshold) {
            return Err(Error::Config(format!(
                "similarity threshold {similarity_threshold} outside [0, 1]"
            )));
        }
        Ok(Self {
            top_k,
            similarity_threshold,
            candidate_pool,
        })
    }

    /// Expansion switched off: empty pool, unreachable threshold.
    pub fn disabled() -> Self {
        Self {
            top_k: Self::DEFAULT_TOP_K,
            similarity_threshold: f64::INFINITY,
            candidate_pool: Lexicon {
                name: "empty-pool".into(),
                role: Role::Category,
                words: BTreeSet::new(),
            },
        }
    }

    /// Sets the threshold without the `[0, 1]` check; anything above 1 disables expansion.
    pub fn with_threshold_unchecked(mut self, threshold: f64) -> Self {
        self.similarity_threshold = threshold;
        self
    }

    pub fn top_k(&self) -> usize {
        self.top_k
    }

    pub fn similarity_threshold(&self) -> f64 {
        self.similarity_threshold
    }

    pub fn candidate_pool(&self) -> &Lexicon {
        &self.candidate_pool
    }
}

/// Adds the base target terms and semantically related pool words to `user_targets`.
///
/// Every word of the user list and the base list acts as a seed; each seed
/// contributes its `top_k` most similar pool words scoring at least the
/// threshold (ties broken alphabetically). Newly added words seed further
/// rounds until nothing changes, so the result is closed under expansion.
pub fn expand_targets(
    user_targets: &Lexicon,
    config: &ExpansionConfig,
    similarity: &dyn WordSimilarity,
) -> Result<Lexicon> {
    if user_targets.role() != Role::Target {
        return Err(Error::invalid(format!(
            "expand_targets needs a target lexicon, got {}",
            user_targets.role()
        )));
    }
    let base = builtin_lexicon(Role::Target)?;
    let mut expanded = user_targets.union(&base);
    let pool = config.candidate_pool();
    if pool.is_empty() {
        return Ok(expanded);
    }

    let mut queue: VecDeque<String> = expanded.words.iter().cloned().collect();
    let mut visited: BTreeSet<String> = BTreeSet::new();
    while let Some(seed) = queue.pop_front() {
        if !visited.insert(seed.clone()) {
            continue;
        }
        let mut scored = Vec::new();
        for cand in pool.words() {
            if cand == seed {
                continue;
            }
            let s = similarity.similarity(&seed, cand)?;
            if s >= config.similarity_threshold() {
                scored.push((s, cand));
            }
        }
        scored.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(b.1)));
        for (_, cand) in scored.into_iter().take(config.top_k()) {
            if expanded.words.insert(cand.to_string()) {
                queue.push_back(cand.to_string());
            }
        }
    }
    Ok(expanded)
}

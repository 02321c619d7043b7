//! Implicit-metaphor features from masked-LM substitution probabilities.
//!
//! A directional score `S(x→y)` masks, one at a time, every token of a text
//! that belongs to vocabulary `y` and sums the smoothed probability mass
//! `P(w | context)^alpha` that the model gives to each word `w` of vocabulary
//! `x` at that position. The sum is averaged over the masked positions:
//!
//! ```text
//! S(x→y) = (1 / M_y) · Σ_m Σ_{w ∈ V_x} P(w | C_m)^alpha
//! ```
//!
//! Texts with no token from `y` score 0 with an anchor count of 0.
//!
//! Fusion proximity is the harmonic mean of `S(I→T)` and `S(T→I)`, and
//! fictive kinship is `S(K→T)`.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::backend::{MaskedLanguageModel, MaskedQuery};
use crate::error::{Error, Result};
use crate::text::{Document, Tokens};
use crate::vocabulary::{builtin_lexicon, Lexicon, Role};

pub const DEFAULT_ALPHA: f64 = 0.25;

#[derive(Debug, Clone)]
pub struct ScoringParams {
    alpha: f64,
    identity: Lexicon,
    kinship: Lexicon,
    targets: Lexicon,
}

impl ScoringParams {
    pub fn new(alpha: f64, identity: Lexicon, kinship: Lexicon, targets: Lexicon) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::Config(format!("alpha {alpha} outside (0, 1]")));
        }
        let roles = [
            (&identity, Role::Identity),
            (&kinship, Role::Kinship),
            (&targets, Role::Target),
        ];
        for (lex, role) in roles {
            if lex.role() != role {
                return Err(Error::Config(format!(
                    "lexicon {:?} has role {}, expected {role}",
                    lex.name(),
                    lex.role()
                )));
            }
            if lex.is_empty() {
                return Err(Error::Config(format!(
                    "{role} lexicon {:?} is empty",
                    lex.name()
                )));
            }
        }
        Ok(Self {
            alpha,
            identity,
            kinship,
            targets,
        })
    }

    /// Built-in identity, kinship, and base target lists.
    pub fn builtin(alpha: f64) -> Result<Self> {
        Self::new(
            alpha,
            builtin_lexicon(Role::Identity)?,
            builtin_lexicon(Role::Kinship)?,
            builtin_lexicon(Role::Target)?,
        )
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn identity(&self) -> &Lexicon {
        &self.identity
    }

    pub fn kinship(&self) -> &Lexicon {
        &self.kinship
    }

    pub fn targets(&self) -> &Lexicon {
        &self.targets
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "I->T")]
    IdentityToTarget,
    #[serde(rename = "T->I")]
    TargetToIdentity,
    #[serde(rename = "K->T")]
    KinshipToTarget,
}

impl Direction {
    pub fn from_roles(from: Role, to: Role) -> Option<Self> {
        match (from, to) {
            (Role::Identity, Role::Target) => Some(Direction::IdentityToTarget),
            (Role::Target, Role::Identity) => Some(Direction::TargetToIdentity),
            (Role::Kinship, Role::Target) => Some(Direction::KinshipToTarget),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectionalScore {
    pub value: f64,
    /// Number of masked positions (`M_y`).
    pub anchor_count: usize,
    pub direction: Direction,
    /// (position, candidate) pairs the backend could not score; counted as zero mass.
    pub dropped: usize,
}

impl DirectionalScore {
    pub fn empty(direction: Direction) -> Self {
        Self {
            value: 0.0,
            anchor_count: 0,
            direction,
            dropped: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FusionFeatures {
    pub s_i_to_t: DirectionalScore,
    pub s_t_to_i: DirectionalScore,
    pub k_f: DirectionalScore,
    pub proximity: f64,
    pub alpha: f64,
}

impl FusionFeatures {
    pub fn identity_anchors(&self) -> usize {
        self.s_t_to_i.anchor_count
    }

    pub fn target_anchors(&self) -> usize {
        self.s_i_to_t.anchor_count
    }

    pub fn record(&self, id: &str) -> FeatureRecord {
        FeatureRecord {
            id: id.to_string(),
            s_i_to_t: self.s_i_to_t.value,
            s_t_to_i: self.s_t_to_i.value,
            k_f: self.k_f.value,
            proximity: self.proximity,
            anchors: AnchorCounts {
                identity: self.identity_anchors(),
                target: self.target_anchors(),
            },
            alpha: self.alpha,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnchorCounts {
    pub identity: usize,
    pub target: usize,
}

/// Flat JSONL form of [`FusionFeatures`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRecord {
    pub id: String,
    pub s_i_to_t: f64,
    pub s_t_to_i: f64,
    pub k_f: f64,
    pub proximity: f64,
    pub anchors: AnchorCounts,
    pub alpha: f64,
}

/// Positions whose normalized token belongs to `vocab`.
pub fn anchor_positions(tokens: &Tokens, vocab: &Lexicon) -> Vec<usize> {
    tokens
        .normalized
        .iter()
        .enumerate()
        .filter(|(_, t)| !t.is_empty() && vocab.contains(t))
        .map(|(i, _)| i)
        .collect()
}

/// Summed smoothed mass per candidate set, over all positions.
///
/// Each position is queried once with the union of the candidate sets.
fn smoothed_mass(
    tokens: &Tokens,
    positions: &[usize],
    candidate_sets: &[&Lexicon],
    alpha: f64,
    backend: &dyn MaskedLanguageModel,
) -> Result<Vec<(f64, usize)>> {
    let mut totals = vec![(0.0, 0usize); candidate_sets.len()];
    if positions.is_empty() {
        return Ok(totals);
    }
    let candidates: Vec<String> = candidate_sets
        .iter()
        .flat_map(|lex| lex.words())
        .map(str::to_owned)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    for &pos in positions {
        let query = MaskedQuery::new(&tokens.raw, pos, &candidates)?;
        let dist = backend.query(&query)?;
        for (set, total) in candidate_sets.iter().zip(totals.iter_mut()) {
            let mut mass = 0.0;
            for word in set.words() {
                match dist.probabilities.get(word) {
                    Some(&p) => mass += p.powf(alpha),
                    None => total.1 += 1,
                }
            }
            total.0 += mass;
        }
    }
    Ok(totals)
}

fn finish(direction: Direction, anchors: usize, (mass, dropped): (f64, usize)) -> DirectionalScore {
    if anchors == 0 {
        return DirectionalScore::empty(direction);
    }
    DirectionalScore {
        value: mass / anchors as f64,
        anchor_count: anchors,
        direction,
        dropped,
    }
}

/// `S(from→to)` for one text. The direction is read off the two lexicon roles.
pub fn directional_score(
    text: &str,
    from_vocab: &Lexicon,
    to_vocab: &Lexicon,
    alpha: f64,
    backend: &dyn MaskedLanguageModel,
) -> Result<DirectionalScore> {
    let direction = Direction::from_roles(from_vocab.role(), to_vocab.role()).ok_or_else(|| {
        Error::invalid(format!(
            "no directional score from {} to {}",
            from_vocab.role(),
            to_vocab.role()
        ))
    })?;
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Config(format!("alpha {alpha} outside (0, 1]")));
    }
    if from_vocab.is_empty() || to_vocab.is_empty() {
        return Err(Error::invalid(
            "directional score needs non-empty vocabularies",
        ));
    }
    let tokens = Tokens::new(text);
    let positions = anchor_positions(&tokens, to_vocab);
    let totals = smoothed_mass(&tokens, &positions, &[from_vocab], alpha, backend)?;
    Ok(finish(direction, positions.len(), totals[0]))
}

/// Harmonic mean of the two directional identity scores; 0 when both are 0.
pub fn fusion_proximity(s_it: f64, s_ti: f64) -> f64 {
    let sum = s_it + s_ti;
    if sum == 0.0 {
        return 0.0;
    }
    // a * (b / (a + b)) * 2 keeps f(s, s) == s exactly and avoids underflow of a * b.
    // Ordering the operands makes the result bitwise symmetric.
    let (lo, hi) = if s_it <= s_ti {
        (s_it, s_ti)
    } else {
        (s_ti, s_it)
    };
    lo * (hi / sum) * 2.0
}

/// All four metaphor features of one document.
pub fn score_features(
    doc: &Document,
    params: &ScoringParams,
    backend: &dyn MaskedLanguageModel,
) -> Result<FusionFeatures> {
    let tokens = Tokens::new(&doc.text);
    if tokens.is_empty() {
        return Err(Error::invalid(format!("document {:?} has no text", doc.id)));
    }
    score_tokens(&tokens, params, backend)
}

/// Scores every document in parallel; results keep input order.
pub fn score_corpus(
    docs: &[Document],
    params: &ScoringParams,
    backend: &dyn MaskedLanguageModel,
) -> Vec<Result<FusionFeatures>> {
    docs.par_iter()
        .map(|doc| score_features(doc, params, backend))
        .collect()
}

pub fn score_tokens(
    tokens: &Tokens,
    params: &ScoringParams,
    backend: &dyn MaskedLanguageModel,
) -> Result<FusionFeatures> {
    let alpha = params.alpha();
    let target_positions = anchor_positions(tokens, params.targets());
    let identity_positions = anchor_positions(tokens, params.identity());

    let at_targets = smoothed_mass(
        tokens,
        &target_positions,
        &[params.identity(), params.kinship()],
        alpha,
        backend,
    )?;
    let at_identity = smoothed_mass(
        tokens,
        &identity_positions,
        &[params.targets()],
        alpha,
        backend,
    )?;

    let s_i_to_t = finish(
        Direction::IdentityToTarget,
        target_positions.len(),
        at_targets[0],
    );
    let k_f = finish(
        Direction::KinshipToTarget,
        target_positions.len(),
        at_targets[1],
    );
    let s_t_to_i = finish(
        Direction::TargetToIdentity,
        identity_positions.len(),
        at_identity[0],
    );
    Ok(FusionFeatures {
        s_i_to_t,
        s_t_to_i,
        k_f,
        proximity: fusion_proximity(s_i_to_t.value, s_t_to_i.value),
        alpha,
    })
}

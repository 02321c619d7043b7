use super::{
    BackendError, MaskedLanguageModel, MaskedQuery, TokenDistribution, WordSimilarity, MASK_TOKEN,
};

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn fnv1a(mut h: u64, bytes: &[u8]) -> u64 {
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

/// 64-bit FNV-1a over `seed` (little endian), the candidate, a NUL byte, then
/// every context token followed by a 0x1f unit separator. The token at
/// `mask_index` is replaced by [`MASK_TOKEN`].
pub fn stable_hash(seed: u64, candidate: &str, tokens: &[String], mask_index: usize) -> u64 {
    let mut h = fnv1a(FNV_OFFSET, &seed.to_le_bytes());
    h = fnv1a(h, candidate.as_bytes());
    h = fnv1a(h, &[0]);
    for (i, tok) in tokens.iter().enumerate() {
        let tok = if i == mask_index {
            MASK_TOKEN
        } else {
            tok.as_str()
        };
        h = fnv1a(h, tok.as_bytes());
        h = fnv1a(h, &[0x1f]);
    }
    h
}

/// Assigns `1 / vocab_size` to every candidate regardless of context.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UniformBackend {
    vocab_size: usize,
}

impl UniformBackend {
    pub const DEFAULT_VOCAB_SIZE: usize = 30_522;

    pub fn new(vocab_size: usize) -> Result<Self, BackendError> {
        if vocab_size == 0 {
            return Err(BackendError::InvalidQuery(
                "vocabulary size must be positive".into(),
            ));
        }
        Ok(Self { vocab_size })
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab_size
    }

    pub fn probability(&self) -> f64 {
        1.0 / self.vocab_size as f64
    }
}

impl Default for UniformBackend {
    fn default() -> Self {
        Self {
            vocab_size: Self::DEFAULT_VOCAB_SIZE,
        }
    }
}

impl MaskedLanguageModel for UniformBackend {
    fn name(&self) -> &str {
        "uniform"
    }

    fn query(&self, query: &MaskedQuery<'_>) -> Result<TokenDistribution, BackendError> {
        let p = self.probability();
        Ok(TokenDistribution {
            probabilities: query.candidates().iter().map(|c| (c.clone(), p)).collect(),
            dropped: Vec::new(),
        })
    }
}

impl WordSimilarity for UniformBackend {
    fn similarity(&self, a: &str, b: &str) -> Result<f64, BackendError> {
        Ok(if a == b { 1.0 } else { 0.0 })
    }
}

/// Seeded hash stub: `P(candidate) = (stable_hash mod 1000) / 1000`.
///
/// The value depends on the candidate and on the whole masked context, so
/// it behaves like a (very noisy) context-sensitive model while staying a
/// pure function of its inputs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct HashBackend {
    seed: u64,
}

impl HashBackend {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn probability(&self, candidate: &str, tokens: &[String], mask_index: usize) -> f64 {
        (stable_hash(self.seed, candidate, tokens, mask_index) % 1000) as f64 / 1000.0
    }
}

impl MaskedLanguageModel for HashBackend {
    fn name(&self) -> &str {
        "hash"
    }

    fn query(&self, query: &MaskedQuery<'_>) -> Result<TokenDistribution, BackendError> {
        let probabilities = query
            .candidates()
            .iter()
            .map(|c| {
                (
                    c.clone(),
                    self.probability(c, query.tokens(), query.mask_index()),
                )
            })
            .collect();
        Ok(TokenDistribution {
            probabilities,
            dropped: Vec::new(),
        })
    }
}

impl WordSimilarity for HashBackend {
    fn similarity(&self, a: &str, b: &str) -> Result<f64, BackendError> {
        if a == b {
            return Ok(1.0);
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let mut h = fnv1a(FNV_OFFSET, &self.seed.to_le_bytes());
        h = fnv1a(h, lo.as_bytes());
        h = fnv1a(h, &[0]);
        h = fnv1a(h, hi.as_bytes());
        Ok((h % 1000) as f64 / 1000.0)
    }
}

/// 1.0 when two words share their first `len` characters (or are equal), else 0.0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrefixSimilarity {
    len: usize,
}

impl PrefixSimilarity {
    pub fn new(len: usize) -> Self {
        Self { len: len.max(1) }
    }
}

impl WordSimilarity for PrefixSimilarity {
    fn similarity(&self, a: &str, b: &str) -> Result<f64, BackendError> {
        if a == b {
            return Ok(1.0);
        }
        let mut pa = a.chars();
        let mut pb = b.chars();
        for _ in 0..self.len {
            match (pa.next(), pb.next()) {
                (Some(x), Some(y)) if x == y => {}
                _ => return Ok(0.0),
            }
        }
        Ok(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(ws: &[&str]) -> Vec<String> {
        ws.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn uniform_assigns_inverse_vocab() {
        let b = UniformBackend::new(100).unwrap();
        let tokens = words(&["i", "love", "my", "church"]);
        let cands = words(&["a", "b", "c"]);
        let q = MaskedQuery::new(&tokens, 3, &cands).unwrap();
        let d = b.query(&q).unwrap();
        assert_eq!(d.probabilities.len(), 3);
        assert!(d.probabilities.values().all(|&p| p == 0.01));
        assert!(UniformBackend::new(0).is_err());
    }

    #[test]
    fn hash_is_reproducible_and_context_sensitive() {
        let b = HashBackend::new(7);
        let t1 = words(&["i", "love", "my", "church"]);
        let t2 = words(&["we", "love", "my", "church"]);
        let cands = words(&["family", "car"]);
        let q1 = MaskedQuery::new(&t1, 3, &cands).unwrap();
        let d1 = b.query(&q1).unwrap();
        let d1b = HashBackend::new(7).query(&q1).unwrap();
        assert_eq!(d1, d1b);
        let q2 = MaskedQuery::new(&t2, 3, &cands).unwrap();
        let d2 = b.query(&q2).unwrap();
        assert_ne!(d1, d2);
        for p in d1.probabilities.values() {
            assert!((0.0..1.0).contains(p));
        }
    }

    #[test]
    fn masked_token_does_not_leak_into_hash() {
        let a = words(&["i", "love", "my", "church"]);
        let b = words(&["i", "love", "my", "temple"]);
        assert_eq!(stable_hash(1, "god", &a, 3), stable_hash(1, "god", &b, 3));
        assert_ne!(stable_hash(1, "god", &a, 2), stable_hash(1, "god", &b, 2));
    }

    #[test]
    fn prefix_similarity() {
        let s = PrefixSimilarity::new(4);
        assert_eq!(s.similarity("nation", "national").unwrap(), 1.0);
        assert_eq!(s.similarity("nation", "nature").unwrap(), 0.0);
        assert_eq!(s.similarity("us", "us").unwrap(), 1.0);
        assert_eq!(s.similarity("us", "usa").unwrap(), 0.0);
    }

    #[test]
    fn hash_similarity_is_symmetric() {
        let b = HashBackend::new(3);
        for (x, y) in [("church", "god"), ("a", "b"), ("nation", "country")] {
            let s = b.similarity(x, y).unwrap();
            assert_eq!(s, b.similarity(y, x).unwrap());
            assert!((0.0..=1.0).contains(&s));
        }
        assert_eq!(b.similarity("faith", "faith").unwrap(), 1.0);
    }
}

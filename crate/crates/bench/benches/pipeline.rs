use criterion::{black_box, criterion_group, criterion_main, BatchSize, Criterion};
use fusionlens_core::{
    bootstrap_ci, chunk, score_corpus, segment, spearman, BootstrapConfig, BootstrapStatistic,
    Document, HashBackend, PairedSample, ScoringParams, DEFAULT_ALPHA, DEFAULT_CHUNK_WORDS,
};

const SENTENCES: &[&str] = &[
    "My team is my family and my brothers stand with me.",
    "We trained together every morning before the sun came up.",
    "The country asks a lot of its people in hard years.",
    "I would give anything for the group that raised me.",
    "Nobody outside the movement understands what we share.",
    "The weather was cold and the road was long.",
];

fn corpus(n: usize, sentences_per_doc: usize) -> Vec<Document> {
    (0..n)
        .map(|i| {
            let text: Vec<&str> = (0..sentences_per_doc)
                .map(|k| SENTENCES[(i + k) % SENTENCES.len()])
                .collect();
            Document::new(format!("d{i}"), text.join(" "))
        })
        .collect()
}

/// Small LCG so the bench inputs do not depend on an RNG crate.
fn values(n: usize, seed: u64) -> Vec<f64> {
    let mut s = seed;
    (0..n)
        .map(|_| {
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (s >> 11) as f64 / (1u64 << 53) as f64
        })
        .collect()
}

fn scoring(c: &mut Criterion) {
    let params = ScoringParams::builtin(DEFAULT_ALPHA).unwrap();
    let backend = HashBackend::new(7);
    let docs = corpus(200, 8);
    c.bench_function("score_corpus/hash/200x8", |b| {
        b.iter(|| score_corpus(black_box(&docs), &params, &backend))
    });
}

fn statistics(c: &mut Criterion) {
    let x = values(500, 1);
    let y = values(500, 2);
    let sample = PairedSample::new(x.clone(), y.clone()).unwrap();
    c.bench_function("spearman/500", |b| b.iter(|| spearman(black_box(&sample))));

    let cfg = BootstrapConfig::new(3);
    let a = values(250, 3);
    let bb = values(250, 4);
    c.bench_function("bootstrap_ci/mean/250v250", |b| {
        b.iter(|| {
            bootstrap_ci(
                black_box(&a),
                black_box(&bb),
                BootstrapStatistic::MeanDiff,
                &cfg,
            )
        })
    });
}

fn chunking(c: &mut Criterion) {
    let doc = corpus(1, 2000).pop().unwrap();
    c.bench_function("segment/2000", |b| b.iter(|| segment(black_box(&doc))));
    let seg = segment(&doc).unwrap();
    c.bench_function("chunk/2000", |b| {
        b.iter_batched(
            || seg.clone(),
            |s| chunk(&s, DEFAULT_CHUNK_WORDS),
            BatchSize::SmallInput,
        )
    });
}

criterion_group!(benches, scoring, statistics, chunking);
criterion_main!(benches);

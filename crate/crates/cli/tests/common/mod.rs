#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

use rand::seq::SliceRandom;
use rand::Rng;

pub fn fusionlens(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fusionlens"))
        .args(args)
        .current_dir(cwd)
        .env("RUST_LOG", "error")
        .env_remove("FUSIONLENS_BACKEND_URL")
        .output()
        .expect("binary runs")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

pub const IDENTITY: &[&str] = &["i", "me", "my", "myself"];
pub const TARGETS: &[&str] = &[
    "team",
    "nation",
    "people",
    "community",
    "group",
    "movement",
    "country",
];
pub const KIN: &[&str] = &[
    "brother", "brothers", "sister", "family", "mother", "father", "kin",
];
pub const FILLER: &[&str] = &[
    "the", "weather", "was", "nice", "today", "we", "walked", "to", "a", "park", "and", "ate",
    "lunch", "with", "some", "bread", "it", "rained", "later", "on", "road", "car", "blue",
    "quiet",
];

fn capitalized(words: &[&str]) -> String {
    let mut s = words.join(" ");
    if let Some(first) = s.get(0..1) {
        let up = first.to_uppercase();
        s.replace_range(0..1, &up);
    }
    s
}

/// A sentence drawing each word from `pool`, ending with a period.
pub fn sentence<R: Rng>(rng: &mut R, pool: &[&str], words: usize) -> String {
    let ws: Vec<&str> = (0..words.max(1))
        .map(|_| *pool.choose(rng).unwrap())
        .collect();
    format!("{}.", capitalized(&ws))
}

/// Dense identity/target/kinship co-occurrence.
pub fn high_fusion_text<R: Rng>(rng: &mut R) -> String {
    let n = rng.gen_range(3..6);
    (0..n)
        .map(|_| {
            let mut ws = vec![
                *IDENTITY.choose(rng).unwrap(),
                *TARGETS.choose(rng).unwrap(),
                "is",
                *IDENTITY.choose(rng).unwrap(),
                *KIN.choose(rng).unwrap(),
            ];
            ws.push(*FILLER.choose(rng).unwrap());
            ws.push(*TARGETS.choose(rng).unwrap());
            format!("{}.", capitalized(&ws))
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Everyday text without identity or group words.
pub fn low_fusion_text<R: Rng>(rng: &mut R) -> String {
    let n = rng.gen_range(3..6);
    (0..n)
        .map(|_| {
            let len = rng.gen_range(4..10);
            sentence(rng, FILLER, len)
        })
        .collect::<Vec<_>>()
        .join(" ")
}

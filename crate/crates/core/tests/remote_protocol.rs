//! Remote backend and predictor against a minimal in-process HTTP server.

use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;
use std::sync::{Arc, Mutex};
use std::thread;

use fusionlens_core::backend::{BackendError, MaskedQuery};
use fusionlens_core::*;
use serde_json::{json, Value};

type Handler = dyn Fn(&str, &Value) -> (u16, Value) + Send + Sync;

struct Server {
    url: String,
    seen: Arc<Mutex<Vec<(String, Value)>>>,
}

fn serve(handler: Box<Handler>) -> Server {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let url = format!("http://{}", listener.local_addr().unwrap());
    let seen = Arc::new(Mutex::new(Vec::new()));
    let log = Arc::clone(&seen);
    thread::spawn(move || {
        for stream in listener.incoming() {
            let Ok(mut stream) = stream else { continue };
            let mut reader = BufReader::new(stream.try_clone().unwrap());
            let mut request_line = String::new();
            if reader.read_line(&mut request_line).is_err() {
                continue;
            }
            let path = request_line
                .split_whitespace()
                .nth(1)
                .unwrap_or("")
                .to_string();
            let mut length = 0;
            loop {
                let mut line = String::new();
                reader.read_line(&mut line).unwrap();
                if line.trim().is_empty() {
                    break;
                }
                if let Some((k, v)) = line.split_once(':') {
                    if k.eq_ignore_ascii_case("content-length") {
                        length = v.trim().parse().unwrap();
                    }
                }
            }
            let mut body = vec![0; length];
            reader.read_exact(&mut body).unwrap();
            let body: Value = serde_json::from_slice(&body).unwrap_or(Value::Null);
            let (status, reply) = handler(&path, &body);
            log.lock().unwrap().push((path, body));
            let reply = reply.to_string();
            let _ = write!(
                stream,
                "HTTP/1.1 {status} X\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{reply}",
                reply.len()
            );
        }
    });
    Server { url, seen }
}

fn strings(words: &[&str]) -> Vec<String> {
    words.iter().map(|w| w.to_string()).collect()
}

#[test]
fn masked_fill_roundtrip_and_windowing() {
    let server = serve(Box::new(|path, body| {
        assert_eq!(path, "/v1/masked_fill");
        let mut probs = serde_json::Map::new();
        let mut dropped = Vec::new();
        for c in body["candidates"].as_array().unwrap() {
            let c = c.as_str().unwrap();
            if c.len() > 4 {
                dropped.push(c.to_string());
            } else {
                probs.insert(c.to_string(), json!(0.01));
            }
        }
        (200, json!({"probabilities": probs, "dropped": dropped}))
    }));
    let backend = RemoteBackend::new(format!("{}/", server.url)).with_max_context(5);
    let tokens = strings(&["a", "b", "c", "d", "e", "f", "g", "h", "i", "j"]);
    let candidates = strings(&["me", "myself"]);
    let q = MaskedQuery::new(&tokens, 6, &candidates).unwrap();
    let dist = backend.query(&q).unwrap();
    assert_eq!(dist.get("me"), 0.01);
    assert_eq!(dist.dropped, vec!["myself"]);
    assert_eq!(dist.get("myself"), 0.0);

    let seen = server.seen.lock().unwrap();
    let sent = &seen[0].1;
    assert_eq!(sent["tokens"], json!(["e", "f", "g", "h", "i"]));
    assert_eq!(sent["mask_index"], json!(2));
}

#[test]
fn remote_scores_treat_dropped_as_zero() {
    let server = serve(Box::new(|_, body| {
        let probs: serde_json::Map<String, Value> = body["candidates"]
            .as_array()
            .unwrap()
            .iter()
            .filter(|c| c.as_str() != Some("myself"))
            .map(|c| (c.as_str().unwrap().to_string(), json!(0.0625)))
            .collect();
        (200, json!({"probabilities": probs, "dropped": ["myself"]}))
    }));
    let params = ScoringParams::builtin(0.5).unwrap();
    let f = score_features(
        &Document::new("d", "my team"),
        &params,
        &RemoteBackend::new(server.url),
    )
    .unwrap();
    // four of five identity words at 0.0625^0.5
    assert!((f.s_i_to_t.value - 4.0 * 0.25).abs() < 1e-12);
    assert_eq!(f.s_i_to_t.dropped, 1);
}

#[test]
fn server_errors_surface_with_message() {
    let server = serve(Box::new(|_, _| (503, json!({"error": "model loading"}))));
    let backend = RemoteBackend::new(server.url);
    let tokens = strings(&["we"]);
    let candidates = strings(&["i"]);
    let err = backend
        .query(&MaskedQuery::new(&tokens, 0, &candidates).unwrap())
        .unwrap_err();
    match &err {
        BackendError::Status { status, message } => {
            assert_eq!(*status, 503);
            assert_eq!(message, "model loading");
        }
        other => panic!("{other:?}"),
    }
    assert!(err.is_retriable());
}

#[test]
fn protocol_violations_are_rejected() {
    let server = serve(Box::new(|_, _| {
        (200, json!({"probabilities": {"intruder": 0.5}}))
    }));
    let backend = RemoteBackend::new(server.url);
    let tokens = strings(&["we"]);
    let candidates = strings(&["i"]);
    let err = backend
        .query(&MaskedQuery::new(&tokens, 0, &candidates).unwrap())
        .unwrap_err();
    assert!(matches!(err, BackendError::Protocol(_)));
    assert!(!err.is_retriable());
}

#[test]
fn unreachable_server_is_transport_error() {
    let port = TcpListener::bind("127.0.0.1:0")
        .unwrap()
        .local_addr()
        .unwrap()
        .port();
    let backend = RemoteBackend::new(format!("http://127.0.0.1:{port}"));
    let tokens = strings(&["we"]);
    let candidates = strings(&["i"]);
    let err = backend
        .query(&MaskedQuery::new(&tokens, 0, &candidates).unwrap())
        .unwrap_err();
    assert!(matches!(err, BackendError::Transport(_)));
}

#[test]
fn similarity_endpoint() {
    let server = serve(Box::new(|path, body| {
        assert_eq!(path, "/v1/similarity");
        let same_start = body["a"].as_str().unwrap()[..1] == body["b"].as_str().unwrap()[..1];
        (
            200,
            json!({"similarity": if same_start { 0.9 } else { 0.1 }}),
        )
    }));
    let backend = RemoteBackend::new(server.url);
    assert_eq!(backend.similarity("team", "tribe").unwrap(), 0.9);
    assert_eq!(backend.similarity("team", "group").unwrap(), 0.1);
    assert_eq!(backend.similarity("x", "x").unwrap(), 1.0);
}

#[test]
fn remote_predictor_forwards_features() {
    let server = serve(Box::new(|path, body| {
        assert_eq!(path, "/v1/predict");
        let prox = body["features"]["proximity"].as_f64().unwrap();
        (
            200,
            json!({"fine": if prox > 0.0 { 9.5 } else { 2.0 }, "coarse": "high"}),
        )
    }));
    let remote = RemotePredictor::new(server.url);
    let params = ScoringParams::builtin(0.25).unwrap();
    let backend = UniformBackend::new(100).unwrap();
    let p = predict(
        &Document::new("d", "I am my team"),
        &params,
        &backend,
        &remote,
        &remote,
    )
    .unwrap();
    assert_eq!(p.fine_score, 7.0);
    assert_eq!(p.coarse_class, CoarseClass::High);
    assert_eq!(p.provider, "remote+remote");
    let seen = server.seen.lock().unwrap();
    let sent = &seen[0].1["features"];
    for key in [
        "s_i_to_t",
        "s_t_to_i",
        "k_f",
        "proximity",
        "anchors",
        "alpha",
    ] {
        assert!(sent.get(key).is_some(), "{key}");
    }
}

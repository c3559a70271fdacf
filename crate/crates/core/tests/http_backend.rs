//! Wire-protocol tests against an in-process mock of the classification
//! service.

use std::io::{BufRead, BufReader, Read, Write};
use std::net::{TcpListener, TcpStream};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::thread;

use serde_json::{json, Value};
use splitrefine::corpus::{Corpus, Record};
use splitrefine::nli::{
    classify_all, filter_corpus, BackendError, BatchConfig, ClassifierBackend, EchoBackend,
    FilterOptions, HttpBackend, NliPair,
};

#[derive(Clone, Copy, PartialEq)]
enum Mode {
    Ready,
    Loading,
    DropLast,
    Fail,
}

struct Mock {
    url: String,
    classify_calls: Arc<AtomicUsize>,
    max_batch: Arc<AtomicUsize>,
}

fn respond(stream: &mut TcpStream, status: &str, body: &Value) {
    let body = body.to_string();
    let _ = write!(
        stream,
        "HTTP/1.1 {status}\r\nContent-Type: application/json\r\nContent-Length: {}\r\n\r\n{body}",
        body.len()
    );
}

fn serve(stream: TcpStream, mode: Mode, calls: Arc<AtomicUsize>, max_batch: Arc<AtomicUsize>) {
    let mut writer = stream.try_clone().unwrap();
    let mut reader = BufReader::new(stream);
    loop {
        let mut request_line = String::new();
        if reader.read_line(&mut request_line).unwrap_or(0) == 0 {
            return;
        }
        let mut length = 0usize;
        loop {
            let mut header = String::new();
            reader.read_line(&mut header).unwrap();
            let header = header.trim_end();
            if header.is_empty() {
                break;
            }
            if let Some((name, value)) = header.split_once(':') {
                if name.eq_ignore_ascii_case("content-length") {
                    length = value.trim().parse().unwrap();
                }
            }
        }
        let mut body = vec![0; length];
        reader.read_exact(&mut body).unwrap();

        let mut parts = request_line.split_whitespace();
        match (parts.next(), parts.next(), mode) {
            (Some("GET"), Some("/v1/health"), Mode::Loading) => respond(
                &mut writer,
                "503 Service Unavailable",
                &json!({"status": "loading"}),
            ),
            (Some("GET"), Some("/v1/health"), _) => {
                respond(&mut writer, "200 OK", &json!({"model": "mock-nli"}))
            }
            (Some("POST"), Some("/v1/classify"), Mode::Fail) => respond(
                &mut writer,
                "500 Internal Server Error",
                &json!({"error": "model crashed"}),
            ),
            (Some("POST"), Some("/v1/classify"), _) => {
                calls.fetch_add(1, Ordering::SeqCst);
                let request: Value = serde_json::from_slice(&body).unwrap();
                let pairs = request["pairs"].as_array().unwrap();
                max_batch.fetch_max(pairs.len(), Ordering::SeqCst);
                let mut results: Vec<Value> = pairs
                    .iter()
                    .map(|p| {
                        let d = EchoBackend::score(p["premise"].as_str().unwrap(), p["hypothesis"].as_str().unwrap());
                        json!({"entailment": d.entailment(), "neutral": d.neutral(), "contradiction": d.contradiction()})
                    })
                    .collect();
                if mode == Mode::DropLast {
                    results.pop();
                }
                respond(
                    &mut writer,
                    "200 OK",
                    &json!({"results": results, "model": "mock-nli"}),
                )
            }
            _ => respond(&mut writer, "404 Not Found", &json!({})),
        }
    }
}

fn mock(mode: Mode) -> Mock {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let url = format!("http://{}/", listener.local_addr().unwrap());
    let classify_calls = Arc::new(AtomicUsize::new(0));
    let max_batch = Arc::new(AtomicUsize::new(0));
    let (calls, max) = (classify_calls.clone(), max_batch.clone());
    thread::spawn(move || {
        for stream in listener.incoming().flatten() {
            let (calls, max) = (calls.clone(), max.clone());
            thread::spawn(move || serve(stream, mode, calls, max));
        }
    });
    Mock {
        url,
        classify_calls,
        max_batch,
    }
}

fn pairs(texts: &[(String, String)]) -> Vec<NliPair<'_>> {
    texts
        .iter()
        .map(|(p, h)| NliPair {
            premise: p,
            hypothesis: h,
        })
        .collect()
}

fn sample(n: usize) -> Vec<(String, String)> {
    (0..n)
        .map(|i| {
            let premise = format!("Premise {i} mentions apples and pears.");
            let hypothesis = if i % 3 == 0 {
                premise.clone()
            } else {
                format!("Hypothesis {i} mentions pears only.")
            };
            (premise, hypothesis)
        })
        .collect()
}

#[test]
fn health_reports_the_model() {
    let server = mock(Mode::Ready);
    assert_eq!(HttpBackend::new(&server.url).health().unwrap(), "mock-nli");
}

#[test]
fn health_is_unavailable_while_loading() {
    let server = mock(Mode::Loading);
    match HttpBackend::new(&server.url).health() {
        Err(BackendError::Status { status, .. }) => assert_eq!(status, 503),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn results_are_aligned_with_pairs_across_batches() {
    let server = mock(Mode::Ready);
    let backend = HttpBackend::new(&server.url);
    assert_eq!(backend.endpoint(), server.url.trim_end_matches('/'));
    let texts = sample(53);
    let pairs = pairs(&texts);
    let config = BatchConfig {
        batch_size: 8,
        concurrency: 3,
    };
    let got = classify_all(&backend, &pairs, &config).unwrap();
    let want = EchoBackend.classify_batch(&pairs).unwrap();
    assert_eq!(got, want);
    assert_eq!(server.classify_calls.load(Ordering::SeqCst), 7);
    assert_eq!(server.max_batch.load(Ordering::SeqCst), 8);
}

#[test]
fn server_errors_surface_as_status_errors() {
    let server = mock(Mode::Fail);
    let texts = sample(2);
    match HttpBackend::new(&server.url).classify_batch(&pairs(&texts)) {
        Err(BackendError::Status { status, body }) => {
            assert_eq!(status, 500);
            assert!(body.contains("model crashed"));
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn short_responses_are_rejected() {
    let server = mock(Mode::DropLast);
    let texts = sample(4);
    match HttpBackend::new(&server.url).classify_batch(&pairs(&texts)) {
        Err(BackendError::Shape { expected, got }) => assert_eq!((expected, got), (4, 3)),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn unreachable_service_is_a_transport_error() {
    let port = TcpListener::bind("127.0.0.1:0")
        .unwrap()
        .local_addr()
        .unwrap()
        .port();
    let backend = HttpBackend::new(&format!("http://127.0.0.1:{port}"));
    let texts = sample(1);
    assert!(matches!(
        backend.classify_batch(&pairs(&texts)),
        Err(BackendError::Transport(_))
    ));
}

#[test]
fn filtering_over_http_matches_the_local_stub() {
    let server = mock(Mode::Ready);
    let corpus = Corpus::from_records([
        Record::new("He was born in Paris.", ["He was born in Paris."]).unwrap(),
        Record::new("She plays the violin.", ["Cats are mammals."]).unwrap(),
        Record::new(
            "It rained all day and the match was cancelled.",
            ["It rained all day.", "The match was cancelled."],
        )
        .unwrap(),
    ])
    .unwrap();
    let options = FilterOptions::default();
    let remote = filter_corpus(&corpus, &HttpBackend::new(&server.url), &options).unwrap();
    let local = filter_corpus(&corpus, &EchoBackend, &options).unwrap();
    assert_eq!(remote.kept, local.kept);
    assert_eq!(remote.decisions, local.decisions);
}

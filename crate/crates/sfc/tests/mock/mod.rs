//! A tiny HTTP/1.1 server for exercising the embedding client.
#![allow(dead_code)]

use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

pub struct MockServer {
    pub url: String,
    pub requests: Arc<AtomicUsize>,
}

/// Serves `handler(method, path, body) -> (status, json)` on a loopback
/// port until the process exits.
pub fn serve<F>(handler: F) -> MockServer
where
    F: Fn(&str, &str, &str) -> (u16, String) + Send + Sync + 'static,
{
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let url = format!("http://{}", listener.local_addr().unwrap());
    let requests = Arc::new(AtomicUsize::new(0));
    let counter = requests.clone();
    let handler = Arc::new(handler);
    std::thread::spawn(move || {
        for stream in listener.incoming() {
            let Ok(stream) = stream else { continue };
            let handler = handler.clone();
            let counter = counter.clone();
            std::thread::spawn(move || {
                let mut reader = BufReader::new(stream.try_clone().unwrap());
                let mut line = String::new();
                if reader.read_line(&mut line).is_err() {
                    return;
                }
                let mut parts = line.split_whitespace();
                let method = parts.next().unwrap_or("").to_string();
                let path = parts.next().unwrap_or("").to_string();
                let mut length = 0;
                loop {
                    let mut h = String::new();
                    if reader.read_line(&mut h).unwrap_or(0) == 0 || h == "\r\n" {
                        break;
                    }
                    if let Some((k, v)) = h.split_once(':') {
                        if k.eq_ignore_ascii_case("content-length") {
                            length = v.trim().parse().unwrap_or(0);
                        }
                    }
                }
                let mut body = vec![0; length];
                reader.read_exact(&mut body).unwrap();
                counter.fetch_add(1, Ordering::SeqCst);
                let (status, json) = handler(&method, &path, &String::from_utf8_lossy(&body));
                let mut stream = stream;
                let _ = write!(
                    stream,
                    "HTTP/1.1 {status} X\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{json}",
                    json.len()
                );
            });
        }
    });
    MockServer { url, requests }
}

/// Deterministic 2-D embedding: text length and count of the letter `e`.
pub fn toy_vector(text: &str) -> Vec<f64> {
    vec![text.len() as f64, text.matches('e').count() as f64]
}

/// A well-behaved embedding service with dimension 2.
pub fn toy_service() -> MockServer {
    serve(|method, path, body| match (method, path) {
        ("GET", "/health") => (200, r#"{"status":"ok","dim":2}"#.into()),
        ("POST", "/embed") => {
            let req: serde_json::Value = serde_json::from_str(body).unwrap();
            let texts = req["texts"].as_array().unwrap();
            if texts.is_empty() {
                return (400, r#"{"error":"empty"}"#.into());
            }
            let rows: Vec<Vec<f64>> = texts
                .iter()
                .map(|t| toy_vector(t.as_str().unwrap()))
                .collect();
            (
                200,
                serde_json::json!({"dim": 2, "embeddings": rows}).to_string(),
            )
        }
        _ => (404, "{}".into()),
    })
}

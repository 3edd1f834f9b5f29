//! OEIS b-files: parsing, bundled reference prefixes, an opt-in fetcher and
//! offset-explicit diffs.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};
use std::time::Duration;

use serde::Serialize;

use crate::error::{Error, Result};

pub const CACHE_DIR_ENV: &str = "ESPART_OEIS_CACHE";
pub const ENDPOINT_ENV: &str = "ESPART_OEIS_ENDPOINT";
pub const DEFAULT_ENDPOINT: &str = "https://oeis.org";

/// A-numbers the verifier consults.
pub const CITED: [&str; 6] = ["A131205", "A000123", "A227800", "A126236", "A213213", "A258472"];

/// Fixtures compiled into the crate.
const BUNDLED: &[(&str, &str)] = &[
    ("A000123", include_str!("../data/oeis/b000123.txt")),
    ("A131205", include_str!("../data/oeis/b131205.txt")),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Bundled,
    Fetched,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BFile {
    pub sequence_id: String,
    /// Strictly increasing indices.
    pub entries: Vec<(i64, i128)>,
    pub source: Source,
}

impl BFile {
    pub fn get(&self, n: i64) -> Option<i128> {
        self.entries
            .binary_search_by_key(&n, |&(i, _)| i)
            .ok()
            .map(|pos| self.entries[pos].1)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = format!("# {}\n", self.sequence_id);
        for (n, v) in &self.entries {
            let _ = writeln!(out, "{n} {v}");
        }
        out
    }
}

/// Lines `n value`; `#` comments and blank lines are skipped.
pub fn parse_bfile(sequence_id: &str, text: &str, source: Source) -> Result<BFile> {
    let mut entries: Vec<(i64, i128)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Parse { line: idx + 1, message };
        let mut fields = line.split_whitespace();
        let (Some(n), Some(v), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(err(format!("expected `index value`, got {line:?}")));
        };
        let n: i64 = n.parse().map_err(|_| err(format!("bad index {n:?}")))?;
        let v: i128 = v.parse().map_err(|_| err(format!("bad value {v:?}")))?;
        if let Some(&(prev, _)) = entries.last() {
            if n <= prev {
                return Err(err(format!("index {n} does not increase past {prev}")));
            }
        }
        entries.push((n, v));
    }
    Ok(BFile {
        sequence_id: sequence_id.to_string(),
        entries,
        source,
    })
}

fn validate_id(id: &str) -> Result<&str> {
    let ok = id.len() == 7 && id.starts_with('A') && id[1..].bytes().all(|b| b.is_ascii_digit());
    if ok {
        Ok(id)
    } else {
        Err(Error::InvalidArgument(format!("{id:?} is not an A-number like A000123")))
    }
}

fn file_name(id: &str) -> String {
    format!("b{}.txt", &id[1..])
}

pub fn bundled(id: &str) -> Option<BFile> {
    BUNDLED
        .iter()
        .find(|(name, _)| *name == id)
        .map(|(_, text)| parse_bfile(id, text, Source::Bundled).expect("bundled fixtures parse"))
}

#[derive(Debug, Clone)]
pub struct OeisConfig {
    pub cache_dir: Option<PathBuf>,
    pub endpoint: String,
    pub network: bool,
}

impl Default for OeisConfig {
    fn default() -> Self {
        Self {
            cache_dir: None,
            endpoint: DEFAULT_ENDPOINT.to_string(),
            network: false,
        }
    }
}

impl OeisConfig {
    /// Cache dir and endpoint from the environment; network stays off.
    pub fn from_env() -> Self {
        Self {
            cache_dir: std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from),
            endpoint: std::env::var(ENDPOINT_ENV).unwrap_or_else(|_| DEFAULT_ENDPOINT.to_string()),
            network: false,
        }
    }

    fn search_dirs(&self) -> Vec<PathBuf> {
        let mut dirs: Vec<PathBuf> = self.cache_dir.iter().cloned().collect();
        dirs.push(Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join("oeis"));
        dirs
    }
}

/// Bundled data, else a b-file in the cache dir or the crate's data dir.
pub fn load(id: &str) -> Result<BFile> {
    load_with(id, &OeisConfig::from_env())
}

pub fn load_with(id: &str, config: &OeisConfig) -> Result<BFile> {
    validate_id(id)?;
    if let Some(b) = bundled(id) {
        return Ok(b);
    }
    for dir in config.search_dirs() {
        let path = dir.join(file_name(id));
        if path.is_file() {
            let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
            return parse_bfile(id, &text, Source::Fetched);
        }
    }
    Err(Error::FixtureUnavailable(id.to_string()))
}

type Guard = Arc<Mutex<Option<BFile>>>;

/// One slot per sequence; holding its lock is the right to fetch it.
fn guard_for(id: &str) -> Guard {
    static GUARDS: OnceLock<Mutex<HashMap<String, Guard>>> = OnceLock::new();
    let mut map = GUARDS
        .get_or_init(Default::default)
        .lock()
        .unwrap_or_else(|e| e.into_inner());
    map.entry(id.to_string()).or_default().clone()
}

/// Downloads a b-file, checks it against bundled data and caches it.
///
/// Concurrent calls for the same sequence share one request: later callers
/// wait and receive the first caller's result.
pub fn fetch(id: &str, config: &OeisConfig) -> Result<BFile> {
    validate_id(id)?;
    if !config.network {
        return Err(Error::NetworkDisabled(id.to_string()));
    }
    let guard = guard_for(id);
    let mut slot = guard.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(done) = slot.as_ref() {
        return Ok(done.clone());
    }
    let url = format!("{}/{}/{}", config.endpoint.trim_end_matches('/'), id, file_name(id));
    let client = reqwest::blocking::Client::builder()
        .timeout(Duration::from_secs(30))
        .build()
        .map_err(|e| Error::Network(e.to_string()))?;
    let response = client
        .get(&url)
        .send()
        .and_then(|r| r.error_for_status())
        .map_err(|e| Error::Network(format!("{url}: {e}")))?;
    let text = response.text().map_err(|e| Error::Network(format!("{url}: {e}")))?;
    let fetched = parse_bfile(id, &text, Source::Fetched)?;
    if fetched.is_empty() {
        return Err(Error::Network(format!("{url}: no terms in response")));
    }
    if let Some(reference) = bundled(id) {
        check_integrity(&fetched, &reference)?;
    }
    if let Some(dir) = &config.cache_dir {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let path = dir.join(file_name(id));
        fs::write(&path, &text).map_err(|e| Error::io(&path, e))?;
    }
    *slot = Some(fetched.clone());
    Ok(fetched)
}

/// Fails on the first shared index where the values differ.
pub fn check_integrity(fetched: &BFile, bundled: &BFile) -> Result<()> {
    for &(n, b) in &bundled.entries {
        if let Some(f) = fetched.get(n) {
            if f != b {
                return Err(Error::Integrity {
                    sequence: fetched.sequence_id.clone(),
                    index: n,
                    fetched: f,
                    bundled: b,
                });
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub n: i64,
    pub computed: i128,
    pub reference: i128,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiffReport {
    pub sequence_id: String,
    pub offset: i64,
    pub shift: i128,
    pub compared: usize,
    pub mismatches: Vec<Mismatch>,
}

impl DiffReport {
    /// Some overlap and no mismatch.
    pub fn passed(&self) -> bool {
        self.compared > 0 && self.mismatches.is_empty()
    }
}

/// Compares `computed(n)` with `reference(n + offset) + shift` wherever the
/// reference has a term.
pub fn diff(computed: &[(i64, i128)], reference: &BFile, offset: i64, shift: i128) -> DiffReport {
    let mut compared = 0;
    let mut mismatches = Vec::new();
    for &(n, value) in computed {
        let Some(r) = reference.get(n + offset) else { continue };
        compared += 1;
        let expected = r + shift;
        if value != expected {
            mismatches.push(Mismatch {
                n,
                computed: value,
                reference: expected,
            });
        }
    }
    DiffReport {
        sequence_id: reference.sequence_id.clone(),
        offset,
        shift,
        compared,
        mismatches,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::{Read, Write};
    use std::net::TcpListener;
    use std::thread;

    #[test]
    fn parses_layouts() {
        let b = parse_bfile("A000001", "0 1\n1 1\n", Source::Bundled).unwrap();
        assert_eq!(b.entries, vec![(0, 1), (1, 1)]);
        let b = parse_bfile("A000001", "# comment\n\n5 23\n", Source::Bundled).unwrap();
        assert_eq!(b.entries, vec![(5, 23)]);
        assert!(matches!(
            parse_bfile("A000001", "5 x\n", Source::Bundled),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_bfile("A000001", "2 1\n2 1\n", Source::Bundled),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn bundled_prefixes() {
        let a = bundled("A000123").unwrap();
        assert!(a.len() >= 40);
        assert_eq!(&a.entries[..6], &[(0, 1), (1, 2), (2, 4), (3, 6), (4, 10), (5, 14)]);
        let s = bundled("A131205").unwrap();
        assert_eq!(s.get(5), Some(23));
        assert_eq!(parse_bfile("A131205", &s.render(), Source::Bundled).unwrap(), s);
    }

    #[test]
    fn diff_with_offset_and_shift() {
        let r = parse_bfile("A000002", "1 10\n2 20\n3 30\n", Source::Bundled).unwrap();
        let report = diff(&[(2, 11), (3, 21), (9, 0)], &r, -1, 1);
        assert_eq!(report.compared, 2);
        assert!(report.passed());
        let report = diff(&[(2, 10)], &r, -1, 1);
        assert_eq!(report.mismatches[0].reference, 11);
    }

    #[test]
    fn missing_fixture_is_reported() {
        let config = OeisConfig {
            cache_dir: Some(tempfile::tempdir().unwrap().path().to_path_buf()),
            ..OeisConfig::default()
        };
        assert!(matches!(load_with("A999998", &config), Err(Error::FixtureUnavailable(_))));
        assert!(load_with("B12", &config).is_err());
    }

    #[test]
    fn fetch_refuses_without_network() {
        assert!(matches!(
            fetch("A000123", &OeisConfig::default()),
            Err(Error::NetworkDisabled(_))
        ));
    }

    fn serve(body: &'static str, requests: usize) -> String {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap();
        thread::spawn(move || {
            for stream in listener.incoming().take(requests) {
                let mut stream = stream.unwrap();
                let mut buf = [0u8; 4096];
                let _ = stream.read(&mut buf);
                let reply = format!(
                    "HTTP/1.1 200 OK\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{}",
                    body.len(),
                    body
                );
                stream.write_all(reply.as_bytes()).unwrap();
            }
        });
        format!("http://{addr}")
    }

    #[test]
    fn fetch_caches_and_checks_integrity() {
        let dir = tempfile::tempdir().unwrap();
        let config = OeisConfig {
            cache_dir: Some(dir.path().to_path_buf()),
            endpoint: serve("# test\n0 5\n1 8\n", 1),
            network: true,
        };
        let b = fetch("A999997", &config).unwrap();
        assert_eq!(b.source, Source::Fetched);
        assert_eq!(b.entries, vec![(0, 5), (1, 8)]);
        assert!(dir.path().join("b999997.txt").is_file());
        assert_eq!(load_with("A999997", &config).unwrap().get(1), Some(8));
        // a second fetch reuses the first result without another request
        assert_eq!(fetch("A999997", &config).unwrap(), b);

        let bad = OeisConfig {
            cache_dir: None,
            endpoint: serve("0 1\n1 3\n", 1),
            network: true,
        };
        assert!(matches!(
            fetch("A000123", &bad),
            Err(Error::Integrity { index: 1, fetched: 3, bundled: 2, .. })
        ));
    }
}

//! Dataset download, checksummed cache, and the train/test split.
//!
//! Cache layout: `<root>/<host>/<path>` for payloads and
//! `<root>/manifest.tsv` with `url<TAB>sha256<TAB>bytes` lines. The digest
//! recorded at first download is pinned; a later mismatch is an error until
//! the caller asks for a refresh.

use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Duration;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::corpus::{split_sentences, ColumnSpec, Corpus, SplitRules, Token};

/// French portion of the Europeana Newspapers NER corpora (IO tags, one
/// `token tag` row per line).
pub const EUROPEANA_FR_URL: &str =
    "https://raw.githubusercontent.com/EuropeanaNewspapers/ner-corpora/master/enp_FR.bnf.bio/enp_FR.bnf.bio";

/// Environment variable overriding the cache root.
pub const CACHE_ENV: &str = "SEQTAG_CACHE";

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("network error fetching {url}: {reason}")]
    Network { url: String, reason: String },
    #[error("checksum mismatch: expected {expected}, got {actual} (pass --refresh to accept the new data)")]
    ChecksumMismatch { expected: String, actual: String },
    #[error("cannot derive a cache path from `{0}`")]
    BadUrl(String),
    #[error("manifest line {0} is malformed")]
    Manifest(usize),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DatasetDescriptor {
    pub source_url: String,
    pub cache_path: PathBuf,
    /// Expected digest; `None` defers to the manifest, or to the first download.
    pub sha256: Option<String>,
}

impl DatasetDescriptor {
    /// Descriptor caching `url` under `<root>/<host>/<path>`.
    pub fn for_url(url: &str, root: &Path) -> Result<Self, IngestError> {
        let rest = url
            .strip_prefix("https://")
            .or_else(|| url.strip_prefix("http://"))
            .ok_or_else(|| IngestError::BadUrl(url.to_string()))?;
        let rest = rest.split(['?', '#']).next().unwrap_or(rest);
        let mut parts = rest.split('/').filter(|p| !p.is_empty());
        let host = parts.next().ok_or_else(|| IngestError::BadUrl(url.to_string()))?;
        let mut path = root.join(host);
        let mut any = false;
        for p in parts {
            if p == ".." || p == "." {
                return Err(IngestError::BadUrl(url.to_string()));
            }
            path.push(p);
            any = true;
        }
        if !any {
            return Err(IngestError::BadUrl(url.to_string()));
        }
        Ok(DatasetDescriptor { source_url: url.to_string(), cache_path: path, sha256: None })
    }
}

/// Cache root: `$SEQTAG_CACHE`, else `$XDG_CACHE_HOME/seqtag`, else
/// `$HOME/.cache/seqtag`, else `.seqtag-cache`.
pub fn default_cache_dir() -> PathBuf {
    if let Some(p) = std::env::var_os(CACHE_ENV) {
        return PathBuf::from(p);
    }
    if let Some(p) = std::env::var_os("XDG_CACHE_HOME") {
        return PathBuf::from(p).join("seqtag");
    }
    if let Some(p) = std::env::var_os("HOME") {
        return PathBuf::from(p).join(".cache").join("seqtag");
    }
    PathBuf::from(".seqtag-cache")
}

pub trait Transport {
    fn get(&self, url: &str) -> Result<Vec<u8>, IngestError>;
}

/// HTTPS GET via ureq.
pub struct HttpTransport {
    agent: ureq::Agent,
}

impl HttpTransport {
    pub fn new(timeout: Duration) -> Self {
        let config = ureq::Agent::config_builder().timeout_global(Some(timeout)).build();
        HttpTransport { agent: config.into() }
    }
}

impl Default for HttpTransport {
    fn default() -> Self {
        HttpTransport::new(Duration::from_secs(120))
    }
}

impl Transport for HttpTransport {
    fn get(&self, url: &str) -> Result<Vec<u8>, IngestError> {
        let net = |e: ureq::Error| IngestError::Network { url: url.to_string(), reason: e.to_string() };
        let mut resp = self.agent.get(url).call().map_err(net)?;
        resp.body_mut().with_config().limit(1 << 30).read_to_vec().map_err(net)
    }
}

/// Counts calls and serves fixed bytes; for tests and offline runs.
pub struct StaticTransport {
    pub body: Vec<u8>,
    pub calls: AtomicUsize,
}

impl StaticTransport {
    pub fn new(body: impl Into<Vec<u8>>) -> Self {
        StaticTransport { body: body.into(), calls: AtomicUsize::new(0) }
    }

    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::SeqCst)
    }
}

impl Transport for StaticTransport {
    fn get(&self, _url: &str) -> Result<Vec<u8>, IngestError> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        Ok(self.body.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifestEntry {
    pub url: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Manifest {
    entries: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn path(root: &Path) -> PathBuf {
        root.join("manifest.tsv")
    }

    pub fn load(root: &Path) -> Result<Manifest, IngestError> {
        let text = match fs::read_to_string(Self::path(root)) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Manifest::default()),
            Err(e) => return Err(e.into()),
        };
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let mut f = line.split('\t');
            match (f.next(), f.next(), f.next(), f.next()) {
                (Some(url), Some(sha), Some(bytes), None) => entries.push(ManifestEntry {
                    url: url.to_string(),
                    sha256: sha.to_string(),
                    bytes: bytes.parse().map_err(|_| IngestError::Manifest(i + 1))?,
                }),
                _ => return Err(IngestError::Manifest(i + 1)),
            }
        }
        Ok(Manifest { entries })
    }

    pub fn get(&self, url: &str) -> Option<&ManifestEntry> {
        self.entries.iter().find(|e| e.url == url)
    }

    pub fn upsert(&mut self, entry: ManifestEntry) {
        match self.entries.iter_mut().find(|e| e.url == entry.url) {
            Some(e) => *e = entry,
            None => self.entries.push(entry),
        }
    }

    pub fn save(&self, root: &Path) -> Result<(), IngestError> {
        let mut text = String::new();
        for e in &self.entries {
            text.push_str(&format!("{}\t{}\t{}\n", e.url, e.sha256, e.bytes));
        }
        write_atomic(&Self::path(root), text.as_bytes())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn sha256_file(path: &Path) -> Result<(String, u64), IngestError> {
    let mut f = fs::File::open(path)?;
    let mut hasher = Sha256::new();
    let mut buf = vec![0u8; 1 << 16];
    let mut total = 0u64;
    loop {
        let n = f.read(&mut buf)?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
        total += n as u64;
    }
    Ok((hex::encode(hasher.finalize()), total))
}

/// Write through a sibling temp file and rename over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), IngestError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(format!(".tmp{}", std::process::id()));
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Downloads into a cache root, serialized by an exclusive lock on
/// `<root>/.lock`.
pub struct Fetcher<T: Transport> {
    root: PathBuf,
    transport: T,
    refresh: bool,
}

impl<T: Transport> Fetcher<T> {
    pub fn new(root: impl Into<PathBuf>, transport: T) -> Self {
        Fetcher { root: root.into(), transport, refresh: false }
    }

    /// Re-download and accept whatever digest the source now has.
    pub fn refresh(mut self, refresh: bool) -> Self {
        self.refresh = refresh;
        self
    }

    pub fn transport(&self) -> &T {
        &self.transport
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn fetch(&self, desc: &DatasetDescriptor) -> Result<PathBuf, IngestError> {
        fs::create_dir_all(&self.root)?;
        let lock = fs::OpenOptions::new().create(true).truncate(false).write(true).open(self.root.join(".lock"))?;
        lock.lock()?;

        let mut manifest = Manifest::load(&self.root)?;
        let recorded = manifest.get(&desc.source_url).cloned();
        let pinned = desc.sha256.clone().or_else(|| recorded.as_ref().map(|e| e.sha256.clone()));

        if !self.refresh && desc.cache_path.is_file() {
            let (actual, bytes) = sha256_file(&desc.cache_path)?;
            match pinned {
                Some(expected) if expected != actual => return Err(IngestError::ChecksumMismatch { expected, actual }),
                _ => {}
            }
            if recorded.as_ref().is_none_or(|e| e.sha256 != actual) {
                manifest.upsert(ManifestEntry { url: desc.source_url.clone(), sha256: actual, bytes });
                manifest.save(&self.root)?;
            }
            return Ok(desc.cache_path.clone());
        }

        let body = self.transport.get(&desc.source_url)?;
        let actual = sha256_hex(&body);
        if !self.refresh {
            if let Some(expected) = pinned {
                if expected != actual {
                    return Err(IngestError::ChecksumMismatch { expected, actual });
                }
            }
        }
        write_atomic(&desc.cache_path, &body)?;
        manifest.upsert(ManifestEntry { url: desc.source_url.clone(), sha256: actual, bytes: body.len() as u64 });
        manifest.save(&self.root)?;
        Ok(desc.cache_path.clone())
    }
}

/// Fetch over HTTPS into `root`.
pub fn fetch_dataset(desc: &DatasetDescriptor, root: &Path, refresh: bool) -> Result<PathBuf, IngestError> {
    Fetcher::new(root, HttpTransport::default()).refresh(refresh).fetch(desc)
}

/// Token rows of a raw file, ignoring blank lines and `# ` comments. Rows
/// that are too short or carry an unusable token are skipped and counted.
pub fn read_token_stream(text: &str, spec: &ColumnSpec) -> (Vec<Token>, usize) {
    let mut tokens = Vec::new();
    let mut skipped = 0;
    let width = spec.width();
    for line in text.lines() {
        if line.trim().is_empty() || line.starts_with("# ") {
            continue;
        }
        let fields = spec.split_line(line);
        if fields.len() < width {
            skipped += 1;
            continue;
        }
        let attrs = spec.attribute_cols().iter().map(|(i, _)| fields[*i].to_string()).collect();
        match Token::with_attributes(fields[spec.surface_col()], attrs, fields[spec.tag_col()]) {
            Ok(t) => tokens.push(t),
            Err(_) => skipped += 1,
        }
    }
    (tokens, skipped)
}

/// Raw flat file to a sentence-split corpus.
pub fn load_raw_corpus(text: &str, spec: &ColumnSpec, rules: &SplitRules) -> (Corpus, usize) {
    let (tokens, skipped) = read_token_stream(text, spec);
    (split_sentences(tokens, rules).with_column_spec(spec.clone()), skipped)
}

/// Test set = the longest run of whole sentences at the end of the corpus
/// holding at most `test_token_budget` tokens; train = everything before.
pub fn split_train_test(corpus: &Corpus, test_token_budget: usize) -> (Corpus, Corpus) {
    let sentences = corpus.sentences();
    let mut used = 0;
    let mut cut = sentences.len();
    while cut > 0 && used + sentences[cut - 1].len() <= test_token_budget {
        used += sentences[cut - 1].len();
        cut -= 1;
    }
    (corpus.with_sentences(sentences[..cut].to_vec()), corpus.with_sentences(sentences[cut..].to_vec()))
}

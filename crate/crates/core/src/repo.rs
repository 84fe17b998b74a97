//! On-disk ledger directory.
//!
//! ```text
//! <dir>/ledger.json      header: hash function, signature scheme, format version
//! <dir>/config.json      governance config
//! <dir>/chain.jsonl      one canonical envelope per line
//! <dir>/anchors.jsonl    Merkle anchors over contiguous seq ranges
//! <dir>/content/ab/<h>   content blobs keyed by hash
//! ```
//!
//! Writers hold an exclusive advisory lock on `chain.jsonl` for the lifetime
//! of a [`Repository`] opened with [`Repository::open`].

use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::GovernanceConfig;
use crate::error::{Error, Result};
use crate::events::EventBody;
use crate::hash::{compute_content_hash, ContentHash};
use crate::identity::{SecretKey, SIGNATURE_SCHEME};
use crate::ledger::{verify_jsonl, Ledger, LedgerEvent};
use crate::merkle::{anchors_from_jsonl, anchors_to_jsonl, verify_anchors, AnchorRecord};

pub const FORMAT_VERSION: u32 = 1;
pub const CHAIN_FILE: &str = "chain.jsonl";
pub const ANCHORS_FILE: &str = "anchors.jsonl";
pub const CONFIG_FILE: &str = "config.json";
pub const HEADER_FILE: &str = "ledger.json";
pub const CONTENT_DIR: &str = "content";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LedgerHeader {
    pub hash: String,
    pub signature_scheme: String,
    pub format_version: u32,
}

impl Default for LedgerHeader {
    fn default() -> Self {
        Self {
            hash: "sha256".into(),
            signature_scheme: SIGNATURE_SCHEME.into(),
            format_version: FORMAT_VERSION,
        }
    }
}

#[derive(Debug)]
pub struct Repository {
    root: PathBuf,
    ledger: Ledger,
    anchors: Vec<AnchorRecord>,
    chain: File,
}

impl Repository {
    /// Create a fresh ledger directory. Fails if a chain already exists.
    pub fn init(root: &Path, config: GovernanceConfig) -> Result<Self> {
        config.validate()?;
        fs::create_dir_all(root.join(CONTENT_DIR))?;
        let chain_path = root.join(CHAIN_FILE);
        if chain_path.exists() {
            return Err(Error::argument(format!("{} already exists", chain_path.display())));
        }
        let header = serde_json::to_string_pretty(&LedgerHeader::default()).expect("header serializes");
        fs::write(root.join(HEADER_FILE), header + "\n")?;
        fs::write(root.join(CONFIG_FILE), config.to_json_pretty())?;
        fs::write(root.join(ANCHORS_FILE), b"")?;
        File::create(&chain_path)?;
        Self::open(root)
    }

    /// Open, lock and fully verify an existing ledger directory.
    pub fn open(root: &Path) -> Result<Self> {
        let chain = OpenOptions::new().read(true).append(true).open(root.join(CHAIN_FILE))?;
        chain.lock()?;
        let (ledger, anchors) = load(root)?;
        Ok(Self {
            root: root.to_path_buf(),
            ledger,
            anchors,
            chain,
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn ledger(&self) -> &Ledger {
        &self.ledger
    }

    pub fn anchors(&self) -> &[AnchorRecord] {
        &self.anchors
    }

    /// Append one event and persist its line.
    pub fn append(&mut self, body: EventBody, signer: &SecretKey) -> Result<LedgerEvent> {
        let event = self.ledger.append_event(body, signer)?.clone();
        let mut line = event.to_canonical()?;
        line.push(b'\n');
        self.chain.write_all(&line)?;
        self.chain.sync_data()?;
        Ok(event)
    }

    pub fn content_path(&self, hash: &ContentHash) -> PathBuf {
        self.root.join(CONTENT_DIR).join(hash.shard()).join(hash.to_hex())
    }

    /// Store a blob under its content hash. Idempotent.
    pub fn store_content(&self, bytes: &[u8]) -> Result<ContentHash> {
        let hash = compute_content_hash(bytes);
        let path = self.content_path(&hash);
        if !path.exists() {
            fs::create_dir_all(path.parent().expect("content path has a parent"))?;
            fs::write(&path, bytes)?;
        }
        Ok(hash)
    }

    pub fn load_content(&self, hash: &ContentHash) -> Result<Vec<u8>> {
        let bytes = fs::read(self.content_path(hash))?;
        if compute_content_hash(&bytes) != *hash {
            return Err(Error::Encoding(format!("content {hash} does not match its hash")));
        }
        Ok(bytes)
    }

    /// Anchor every event appended since the last anchor. Returns `None` when
    /// there is nothing new.
    pub fn anchor(&mut self, anchored_at: i64) -> Result<Option<AnchorRecord>> {
        let from = self.anchors.last().map_or(0, |a| a.seq_to + 1);
        let len = self.ledger.len() as u64;
        if from >= len {
            return Ok(None);
        }
        let record = AnchorRecord::over(self.ledger.envelope_hashes(), from, len - 1, anchored_at)?;
        let mut f = OpenOptions::new().append(true).create(true).open(self.root.join(ANCHORS_FILE))?;
        f.write_all(&anchors_to_jsonl(std::slice::from_ref(&record))?)?;
        f.sync_data()?;
        self.anchors.push(record.clone());
        Ok(Some(record))
    }
}

/// Read and verify a ledger directory without taking the writer lock.
/// Suitable for read-only commands.
pub fn snapshot(root: &Path) -> Result<(Ledger, Vec<AnchorRecord>)> {
    load(root)
}

fn load(root: &Path) -> Result<(Ledger, Vec<AnchorRecord>)> {
    let header: LedgerHeader = serde_json::from_slice(&fs::read(root.join(HEADER_FILE))?)
        .map_err(|e| Error::Encoding(format!("{HEADER_FILE}: {e}")))?;
    if header != LedgerHeader::default() {
        return Err(Error::argument(format!(
            "unsupported ledger format {}/{}/v{}",
            header.hash, header.signature_scheme, header.format_version
        )));
    }
    let config = GovernanceConfig::load(&root.join(CONFIG_FILE))?;
    let bytes = fs::read(root.join(CHAIN_FILE))?;
    let report = verify_jsonl(&bytes);
    if !report.ok {
        return Err(Error::Malformed {
            line: report.seq.unwrap_or(0) as usize,
            reason: report.reason.unwrap_or_default(),
        });
    }
    let ledger = Ledger::from_jsonl(&bytes, config)?;
    let anchors = match fs::read(root.join(ANCHORS_FILE)) {
        Ok(b) => anchors_from_jsonl(&b)?,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Vec::new(),
        Err(e) => return Err(e.into()),
    };
    if let Err((i, reason)) = verify_anchors(&anchors, ledger.envelope_hashes()) {
        return Err(Error::Malformed {
            line: i,
            reason: format!("anchor: {reason}"),
        });
    }
    Ok((ledger, anchors))
}

//! Append-only, hash-chained event log.
//!
//! Each envelope commits to its predecessor through `prev_hash`, to its body
//! through `event_id`, and to its author through a signature over the
//! canonical body bytes. On disk the log is JSONL: one canonical envelope per
//! line, LF-terminated, so re-serializing a parsed log is byte-identical.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::canonical::canonical_encode;
use crate::config::GovernanceConfig;
use crate::error::{Error, Result};
use crate::events::{validate_event, EventBody};
use crate::hash::{compute_content_hash, envelope_hash, ContentHash};
use crate::identity::{sign, verify_with, KeyId, PublicKey, SecretKey, Signature};
use crate::state::LedgerState;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LedgerEvent {
    pub seq: u64,
    pub prev_hash: ContentHash,
    pub timestamp: i64,
    pub author_key: KeyId,
    pub signature: Signature,
    /// Content hash of the canonical body.
    pub event_id: ContentHash,
    pub body: EventBody,
}

impl LedgerEvent {
    /// Canonical bytes of the whole envelope, without line terminator.
    pub fn to_canonical(&self) -> Result<Vec<u8>> {
        canonical_encode(self)
    }

    pub fn envelope_hash(&self) -> Result<ContentHash> {
        Ok(envelope_hash(&self.to_canonical()?))
    }
}

/// Outcome of chain verification: `ok`, or the smallest failing seq.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seq: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
}

impl VerificationReport {
    pub fn ok() -> Self {
        Self {
            ok: true,
            seq: None,
            reason: None,
        }
    }

    pub fn failure(seq: u64, reason: impl Into<String>) -> Self {
        Self {
            ok: false,
            seq: Some(seq),
            reason: Some(reason.into()),
        }
    }
}

/// Incremental envelope checker. Feed events in order.
#[derive(Debug, Clone, Default)]
pub struct ChainVerifier {
    next_seq: u64,
    prev: ContentHash,
    keys: BTreeMap<KeyId, PublicKey>,
}

impl ChainVerifier {
    pub fn new() -> Self {
        Self::default()
    }

    /// Check one envelope, returning the failure reason if any invariant is broken.
    pub fn check(&mut self, ev: &LedgerEvent) -> std::result::Result<(), &'static str> {
        if ev.seq != self.next_seq {
            return Err("seq mismatch");
        }
        if ev.prev_hash != self.prev {
            return Err("prev_hash mismatch");
        }
        if ev.timestamp != ev.body.tau() {
            return Err("timestamp mismatch");
        }
        let body = ev.body.encode().map_err(|_| "encoding error")?;
        if compute_content_hash(&body) != ev.event_id {
            return Err("event_id mismatch");
        }
        let key = match &ev.body {
            EventBody::Identity(reg) if reg.public_key.key_id() == ev.author_key => reg.public_key,
            _ => *self.keys.get(&ev.author_key).ok_or("unknown author")?,
        };
        if !verify_with(&body, &ev.signature, &key) {
            return Err("signature invalid");
        }
        if let EventBody::Identity(reg) = &ev.body {
            self.keys.entry(ev.author_key).or_insert(reg.public_key);
        }
        self.prev = ev.envelope_hash().map_err(|_| "encoding error")?;
        self.next_seq += 1;
        Ok(())
    }
}

/// Verify every envelope invariant over a parsed log.
pub fn verify_chain(events: &[LedgerEvent]) -> VerificationReport {
    let mut verifier = ChainVerifier::new();
    for (k, ev) in events.iter().enumerate() {
        if let Err(reason) = verifier.check(ev) {
            return VerificationReport::failure(k as u64, reason);
        }
    }
    VerificationReport::ok()
}

/// Split JSONL bytes into lines, requiring LF termination of every line.
fn lines(bytes: &[u8]) -> Vec<std::result::Result<&[u8], &[u8]>> {
    if bytes.is_empty() {
        return Vec::new();
    }
    let mut parts: Vec<&[u8]> = bytes.split(|b| *b == b'\n').collect();
    let tail = parts.pop().expect("split yields at least one part");
    let mut out: Vec<_> = parts.into_iter().map(Ok).collect();
    if !tail.is_empty() {
        out.push(Err(tail));
    }
    out
}

fn parse_line(line: &[u8]) -> std::result::Result<LedgerEvent, &'static str> {
    let ev: LedgerEvent = serde_json::from_slice(line).map_err(|_| "malformed envelope")?;
    match ev.to_canonical() {
        Ok(bytes) if bytes == line => Ok(ev),
        _ => Err("non-canonical encoding"),
    }
}

/// Verify a serialized ledger file byte for byte.
pub fn verify_jsonl(bytes: &[u8]) -> VerificationReport {
    verify_jsonl_from(ChainVerifier::new(), 0, bytes)
}

/// Continue verification of lines `first_line..` given a verifier that has
/// already accepted every earlier line. Reported seqs are absolute.
pub fn verify_jsonl_from(mut verifier: ChainVerifier, first_line: u64, bytes: &[u8]) -> VerificationReport {
    for (k, line) in lines(bytes).into_iter().enumerate() {
        let result = match line {
            Err(_) => Err("missing line terminator"),
            Ok(line) => parse_line(line).and_then(|ev| verifier.check(&ev)),
        };
        if let Err(reason) = result {
            return VerificationReport::failure(first_line + k as u64, reason);
        }
    }
    VerificationReport::ok()
}

/// Parse a ledger file without checking chain invariants.
pub fn parse_jsonl(bytes: &[u8]) -> Result<Vec<LedgerEvent>> {
    lines(bytes)
        .into_iter()
        .enumerate()
        .map(|(k, line)| {
            let line = line.map_err(|_| Error::Malformed {
                line: k,
                reason: "missing line terminator".into(),
            })?;
            parse_line(line).map_err(|reason| Error::Malformed {
                line: k,
                reason: reason.into(),
            })
        })
        .collect()
}

pub fn to_jsonl(events: &[LedgerEvent]) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    for ev in events {
        out.extend(ev.to_canonical()?);
        out.push(b'\n');
    }
    Ok(out)
}

/// An in-memory ledger: the event log plus its projected state.
#[derive(Debug, Clone)]
pub struct Ledger {
    config: GovernanceConfig,
    events: Vec<LedgerEvent>,
    hashes: Vec<ContentHash>,
    state: LedgerState,
}

impl Ledger {
    pub fn new(config: GovernanceConfig) -> Self {
        Self {
            config,
            events: Vec::new(),
            hashes: Vec::new(),
            state: LedgerState::new(),
        }
    }

    /// Rebuild from stored events, checking the chain and replaying state.
    pub fn from_events(events: Vec<LedgerEvent>, config: GovernanceConfig) -> Result<Self> {
        let report = verify_chain(&events);
        if let (false, Some(seq)) = (report.ok, report.seq) {
            return Err(Error::Malformed {
                line: seq as usize,
                reason: report.reason.unwrap_or_default(),
            });
        }
        let state = LedgerState::replay(&events, &config)?;
        let hashes = events
            .iter()
            .map(LedgerEvent::envelope_hash)
            .collect::<Result<_>>()?;
        Ok(Self {
            config,
            events,
            hashes,
            state,
        })
    }

    pub fn from_jsonl(bytes: &[u8], config: GovernanceConfig) -> Result<Self> {
        Self::from_events(parse_jsonl(bytes)?, config)
    }

    pub fn config(&self) -> &GovernanceConfig {
        &self.config
    }

    pub fn events(&self) -> &[LedgerEvent] {
        &self.events
    }

    pub fn state(&self) -> &LedgerState {
        &self.state
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Envelope hashes in seq order.
    pub fn envelope_hashes(&self) -> &[ContentHash] {
        &self.hashes
    }

    pub fn head_hash(&self) -> ContentHash {
        self.hashes.last().copied().unwrap_or(ContentHash::ZERO)
    }

    /// Sign, chain and append `body`. On any error the log is unchanged.
    pub fn append_event(&mut self, body: EventBody, signer: &SecretKey) -> Result<&LedgerEvent> {
        let author_key = signer.key_id();
        let self_registration = matches!(&body, EventBody::Identity(r) if r.public_key.key_id() == author_key);
        if !self_registration && !self.state.identities.contains_key(&author_key) {
            return Err(Error::Identity(format!("unregistered signer {author_key}")));
        }
        let violations = validate_event(&body, &author_key, &self.state, &self.config);
        if !violations.is_empty() {
            return Err(Error::Validation(violations));
        }
        let body_bytes = body.encode()?;
        let event = LedgerEvent {
            seq: self.events.len() as u64,
            prev_hash: self.head_hash(),
            timestamp: body.tau(),
            author_key,
            signature: sign(&body_bytes, signer),
            event_id: compute_content_hash(&body_bytes),
            body,
        };
        let hash = event.envelope_hash()?;
        self.state.apply(&event, &self.config)?;
        self.events.push(event);
        self.hashes.push(hash);
        Ok(self.events.last().expect("just pushed"))
    }

    pub fn to_jsonl(&self) -> Result<Vec<u8>> {
        to_jsonl(&self.events)
    }
}

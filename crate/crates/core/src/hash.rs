//! Content addressing.
//!
//! Artifact content is hashed with plain SHA-256 so that an artifact hash
//! can be reproduced with any stock tool (`sha256sum`). Ledger envelopes and
//! Merkle interior nodes are hashed with a one-byte domain prefix so that a
//! digest from one context can never be replayed as a digest in another.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Domain prefix for ledger envelope hashes.
pub const ENVELOPE_DOMAIN: u8 = 0x01;
/// Domain prefix for Merkle interior nodes.
pub const MERKLE_NODE_DOMAIN: u8 = 0x02;

/// A 32-byte SHA-256 digest, rendered as 64 lowercase hex characters.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ContentHash([u8; 32]);

impl ContentHash {
    /// The all-zero sentinel used as the genesis `prev_hash`.
    pub const ZERO: ContentHash = ContentHash([0u8; 32]);

    pub const fn from_bytes(bytes: [u8; 32]) -> Self {
        ContentHash(bytes)
    }

    pub fn as_bytes(&self) -> &[u8; 32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0u8; 32]
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }

    /// First two hex characters, used to shard the content directory.
    pub fn shard(&self) -> String {
        hex::encode(&self.0[..1])
    }
}

impl fmt::Display for ContentHash {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for ContentHash {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ContentHash({})", self.to_hex())
    }
}

impl FromStr for ContentHash {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.len() != 64 {
            return Err(Error::argument(format!(
                "content hash must be 64 hex characters, got {}",
                s.len()
            )));
        }
        // Uppercase hex would decode to the same bytes but is not canonical.
        if !s.bytes().all(|b| matches!(b, b'0'..=b'9' | b'a'..=b'f')) {
            return Err(Error::argument("content hash must be lowercase hex"));
        }
        let mut out = [0u8; 32];
        hex::decode_to_slice(s, &mut out).map_err(|e| Error::argument(e.to_string()))?;
        Ok(ContentHash(out))
    }
}

impl Serialize for ContentHash {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for ContentHash {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// SHA-256 of `data`, with no domain prefix.
pub fn compute_content_hash(data: &[u8]) -> ContentHash {
    ContentHash(Sha256::digest(data).into())
}

pub(crate) fn domain_hash(domain: u8, parts: &[&[u8]]) -> ContentHash {
    let mut hasher = Sha256::new();
    hasher.update([domain]);
    for part in parts {
        hasher.update(part);
    }
    ContentHash(hasher.finalize().into())
}

/// Hash of a serialized ledger envelope.
pub fn envelope_hash(envelope_bytes: &[u8]) -> ContentHash {
    domain_hash(ENVELOPE_DOMAIN, &[envelope_bytes])
}

/// Merkle interior node over `left ‖ right`.
pub fn merkle_node(left: &ContentHash, right: &ContentHash) -> ContentHash {
    domain_hash(MERKLE_NODE_DOMAIN, &[left.as_bytes(), right.as_bytes()])
}

//! Binary Merkle trees over envelope hashes, and the local anchor log.
//!
//! Interior node = H(0x02 ‖ left ‖ right). A level with an odd number of
//! nodes duplicates its last node. A single leaf is its own root.

use serde::{Deserialize, Serialize};

use crate::canonical::canonical_encode;
use crate::error::{Error, Result};
use crate::hash::{merkle_node, ContentHash};

/// Which side of the running hash the sibling sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofStep {
    pub side: Side,
    pub hash: ContentHash,
}

fn next_level(level: &[ContentHash]) -> Vec<ContentHash> {
    level
        .chunks(2)
        .map(|pair| match pair {
            [l, r] => merkle_node(l, r),
            [last] => merkle_node(last, last),
            _ => unreachable!(),
        })
        .collect()
}

pub fn build_merkle_root(leaves: &[ContentHash]) -> Result<ContentHash> {
    if leaves.is_empty() {
        return Err(Error::argument("merkle tree needs at least one leaf"));
    }
    let mut level = leaves.to_vec();
    while level.len() > 1 {
        level = next_level(&level);
    }
    Ok(level[0])
}

/// Sibling path for the leaf at `index`, bottom-up.
pub fn inclusion_proof(leaves: &[ContentHash], index: usize) -> Result<Vec<ProofStep>> {
    if index >= leaves.len() {
        return Err(Error::argument(format!(
            "leaf index {index} out of range for {} leaves",
            leaves.len()
        )));
    }
    let mut proof = Vec::new();
    let mut level = leaves.to_vec();
    let mut idx = index;
    while level.len() > 1 {
        let step = if idx.is_multiple_of(2) {
            let sibling = level.get(idx + 1).unwrap_or(&level[idx]);
            ProofStep {
                side: Side::Right,
                hash: *sibling,
            }
        } else {
            ProofStep {
                side: Side::Left,
                hash: level[idx - 1],
            }
        };
        proof.push(step);
        level = next_level(&level);
        idx /= 2;
    }
    Ok(proof)
}

pub fn verify_inclusion(leaf: &ContentHash, proof: &[ProofStep], root: &ContentHash) -> bool {
    let folded = proof.iter().fold(*leaf, |acc, step| match step.side {
        Side::Left => merkle_node(&step.hash, &acc),
        Side::Right => merkle_node(&acc, &step.hash),
    });
    folded == *root
}

/// A Merkle root committed over envelopes `seq_from..=seq_to`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnchorRecord {
    pub merkle_root: ContentHash,
    pub seq_from: u64,
    pub seq_to: u64,
    pub anchored_at: i64,
}

impl AnchorRecord {
    /// Anchor envelopes `seq_from..=seq_to` out of the full hash list.
    pub fn over(envelope_hashes: &[ContentHash], seq_from: u64, seq_to: u64, anchored_at: i64) -> Result<Self> {
        if seq_from > seq_to || seq_to as usize >= envelope_hashes.len() {
            return Err(Error::argument(format!(
                "invalid anchor range {seq_from}..={seq_to} over {} events",
                envelope_hashes.len()
            )));
        }
        let root = build_merkle_root(&envelope_hashes[seq_from as usize..=seq_to as usize])?;
        Ok(Self {
            merkle_root: root,
            seq_from,
            seq_to,
            anchored_at,
        })
    }

    /// Inclusion proof for event `seq` within this anchor.
    pub fn proof_for(&self, envelope_hashes: &[ContentHash], seq: u64) -> Result<Vec<ProofStep>> {
        if seq < self.seq_from || seq > self.seq_to {
            return Err(Error::argument(format!("seq {seq} not covered by anchor")));
        }
        let range = &envelope_hashes[self.seq_from as usize..=self.seq_to as usize];
        inclusion_proof(range, (seq - self.seq_from) as usize)
    }
}

/// Check the anchor log against the ledger's envelope hashes: each root must
/// be recomputable and ranges must be contiguous from seq 0.
pub fn verify_anchors(anchors: &[AnchorRecord], envelope_hashes: &[ContentHash]) -> std::result::Result<(), (usize, &'static str)> {
    let mut expected_from = 0u64;
    for (i, a) in anchors.iter().enumerate() {
        if a.seq_from != expected_from || a.seq_to < a.seq_from {
            return Err((i, "non-contiguous anchor range"));
        }
        if a.seq_to as usize >= envelope_hashes.len() {
            return Err((i, "anchor beyond ledger end"));
        }
        let root = build_merkle_root(&envelope_hashes[a.seq_from as usize..=a.seq_to as usize])
            .map_err(|_| (i, "empty anchor range"))?;
        if root != a.merkle_root {
            return Err((i, "merkle root mismatch"));
        }
        expected_from = a.seq_to + 1;
    }
    Ok(())
}

pub fn anchors_to_jsonl(anchors: &[AnchorRecord]) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    for a in anchors {
        out.extend(canonical_encode(a)?);
        out.push(b'\n');
    }
    Ok(out)
}

pub fn anchors_from_jsonl(bytes: &[u8]) -> Result<Vec<AnchorRecord>> {
    bytes
        .split(|b| *b == b'\n')
        .filter(|l| !l.is_empty())
        .enumerate()
        .map(|(k, l)| {
            crate::canonical::canonical_decode(l).map_err(|e| Error::Malformed {
                line: k,
                reason: e.to_string(),
            })
        })
        .collect()
}

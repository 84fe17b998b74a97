//! Keypair identities, detached signatures and attestations.
//!
//! The pinned signature scheme is Ed25519: 32-byte keys, 64-byte
//! deterministic signatures. A key's id is the content hash of its public
//! key bytes.

use std::collections::BTreeMap;
use std::fmt;

use ed25519_dalek::{Signer, SigningKey, VerifyingKey};
use rand::RngCore;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::canonical::canonical_encode;
use crate::error::{Error, Result};
use crate::hash::{compute_content_hash, ContentHash};

/// Name recorded in the repository header so verification rules never drift.
pub const SIGNATURE_SCHEME: &str = "ed25519";
pub const KEY_LEN: usize = 32;
pub const SIGNATURE_LEN: usize = 64;

pub type KeyId = ContentHash;

/// Registered identities, keyed by key id.
pub type IdentityRegistry = BTreeMap<KeyId, IdentityRecord>;

macro_rules! hex_bytes {
    ($name:ident, $len:expr) => {
        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.serialize_str(&hex::encode(self.0))
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                if s.bytes().any(|b| b.is_ascii_uppercase()) {
                    return Err(serde::de::Error::custom("hex must be lowercase"));
                }
                let mut out = [0u8; $len];
                hex::decode_to_slice(&s, &mut out).map_err(serde::de::Error::custom)?;
                Ok($name(out))
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}({})", stringify!($name), hex::encode(self.0))
            }
        }
    };
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PublicKey(pub [u8; KEY_LEN]);
hex_bytes!(PublicKey, KEY_LEN);

impl PublicKey {
    pub fn key_id(&self) -> KeyId {
        compute_content_hash(&self.0)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub struct Signature(pub [u8; SIGNATURE_LEN]);
hex_bytes!(Signature, SIGNATURE_LEN);

impl Signature {
    pub fn from_slice(bytes: &[u8]) -> Result<Self> {
        let arr: [u8; SIGNATURE_LEN] = bytes.try_into().map_err(|_| {
            Error::argument(format!(
                "signature must be {SIGNATURE_LEN} bytes, got {}",
                bytes.len()
            ))
        })?;
        Ok(Signature(arr))
    }
}

/// An identity's secret signing key. Never written into the ledger.
#[derive(Clone)]
pub struct SecretKey(SigningKey);

impl SecretKey {
    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let arr: [u8; KEY_LEN] = bytes.try_into().map_err(|_| {
            Error::argument(format!("secret key must be {KEY_LEN} bytes, got {}", bytes.len()))
        })?;
        Ok(SecretKey(SigningKey::from_bytes(&arr)))
    }

    pub fn to_bytes(&self) -> [u8; KEY_LEN] {
        self.0.to_bytes()
    }

    pub fn public_key(&self) -> PublicKey {
        PublicKey(self.0.verifying_key().to_bytes())
    }

    pub fn key_id(&self) -> KeyId {
        self.public_key().key_id()
    }
}

impl fmt::Debug for SecretKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SecretKey(key_id={})", self.key_id())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttestationKind {
    InstitutionalCredential,
    ExternalId,
    EditorRole,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Attestation {
    pub issuer_key: KeyId,
    pub claim_kind: AttestationKind,
    pub payload_hash: ContentHash,
    pub signature: Signature,
}

impl Attestation {
    fn same_claim(&self, other: &Attestation) -> bool {
        self.issuer_key == other.issuer_key
            && self.claim_kind == other.claim_kind
            && self.payload_hash == other.payload_hash
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentityRecord {
    pub key_id: KeyId,
    pub public_key: PublicKey,
    pub attestations: Vec<Attestation>,
    pub created_at: i64,
}

impl IdentityRecord {
    pub fn new(public_key: PublicKey, created_at: i64) -> Self {
        Self {
            key_id: public_key.key_id(),
            public_key,
            attestations: Vec::new(),
            created_at,
        }
    }

    pub fn has_attestation(&self, kind: AttestationKind) -> bool {
        self.attestations.iter().any(|a| a.claim_kind == kind)
    }
}

/// Create a keypair, deterministically when `seed` is given.
pub fn generate_identity(seed: Option<&[u8]>, created_at: i64) -> Result<(SecretKey, IdentityRecord)> {
    let secret = match seed {
        Some(bytes) => SecretKey::from_bytes(bytes)
            .map_err(|_| Error::argument(format!("seed must be {KEY_LEN} bytes, got {}", bytes.len())))?,
        None => {
            let mut bytes = [0u8; KEY_LEN];
            rand::rngs::OsRng.fill_bytes(&mut bytes);
            SecretKey::from_bytes(&bytes)?
        }
    };
    let record = IdentityRecord::new(secret.public_key(), created_at);
    Ok((secret, record))
}

pub fn sign(body: &[u8], secret: &SecretKey) -> Signature {
    Signature(secret.0.sign(body).to_bytes())
}

/// Verify raw signature bytes against raw public key bytes.
///
/// Wrong-length inputs are argument errors; a well-formed but invalid key or
/// signature simply fails verification.
pub fn verify(body: &[u8], sig: &[u8], public_key: &[u8]) -> Result<bool> {
    let sig = Signature::from_slice(sig)?;
    let key: [u8; KEY_LEN] = public_key.try_into().map_err(|_| {
        Error::argument(format!(
            "public key must be {KEY_LEN} bytes, got {}",
            public_key.len()
        ))
    })?;
    Ok(verify_with(body, &sig, &PublicKey(key)))
}

pub fn verify_with(body: &[u8], sig: &Signature, public_key: &PublicKey) -> bool {
    let Ok(key) = VerifyingKey::from_bytes(&public_key.0) else {
        return false;
    };
    let sig = ed25519_dalek::Signature::from_bytes(&sig.0);
    key.verify_strict(body, &sig).is_ok()
}

#[derive(Serialize)]
struct AttestationMessage<'a> {
    subject: &'a KeyId,
    claim_kind: AttestationKind,
    payload_hash: &'a ContentHash,
}

/// Bytes an attestation issuer signs.
pub fn attestation_message(
    subject: &KeyId,
    claim_kind: AttestationKind,
    payload_hash: &ContentHash,
) -> Vec<u8> {
    canonical_encode(&AttestationMessage {
        subject,
        claim_kind,
        payload_hash,
    })
    .expect("attestation message has no floats")
}

pub fn issue_attestation(
    issuer: &SecretKey,
    subject: &KeyId,
    claim_kind: AttestationKind,
    payload_hash: ContentHash,
) -> Attestation {
    let msg = attestation_message(subject, claim_kind, &payload_hash);
    Attestation {
        issuer_key: issuer.key_id(),
        claim_kind,
        payload_hash,
        signature: sign(&msg, issuer),
    }
}

/// Check an attestation about `subject` against the registry.
pub fn check_attestation(subject: &KeyId, att: &Attestation, registry: &IdentityRegistry) -> Result<()> {
    let issuer = registry
        .get(&att.issuer_key)
        .ok_or_else(|| Error::Identity(format!("unknown issuer {}", att.issuer_key)))?;
    let msg = attestation_message(subject, att.claim_kind, &att.payload_hash);
    if !verify_with(&msg, &att.signature, &issuer.public_key) {
        return Err(Error::Attestation(format!(
            "signature by {} does not verify",
            att.issuer_key
        )));
    }
    Ok(())
}

/// Attach a verified attestation. Re-binding the same (issuer, kind, payload)
/// is a no-op.
pub fn bind_attestation(
    mut record: IdentityRecord,
    att: Attestation,
    registry: &IdentityRegistry,
) -> Result<IdentityRecord> {
    check_attestation(&record.key_id, &att, registry)?;
    if !record.attestations.iter().any(|a| a.same_claim(&att)) {
        record.attestations.push(att);
    }
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seeded(n: u8) -> (SecretKey, IdentityRecord) {
        generate_identity(Some(&[n; 32]), 0).unwrap()
    }

    #[test]
    fn seeded_generation_is_deterministic() {
        assert_eq!(seeded(1).1.key_id, seeded(1).1.key_id);
        assert_ne!(seeded(1).1.key_id, seeded(2).1.key_id);
    }

    #[test]
    fn random_generation_distinct() {
        let ids: std::collections::BTreeSet<_> = (0..100)
            .map(|_| generate_identity(None, 0).unwrap().1.key_id)
            .collect();
        assert_eq!(ids.len(), 100);
    }

    #[test]
    fn malformed_seed() {
        assert!(matches!(generate_identity(Some(&[0u8; 31]), 0), Err(Error::Argument(_))));
    }

    #[test]
    fn key_id_is_hash_of_public_key() {
        let (sk, rec) = seeded(3);
        assert_eq!(rec.key_id, compute_content_hash(&sk.public_key().0));
    }

    #[test]
    fn sign_verify_round_trip_and_mismatch() {
        let (sk, rec) = seeded(4);
        let (_, other) = seeded(5);
        let body = b"a commentary body";
        let sig = sign(body, &sk);
        assert!(verify(body, &sig.0, &rec.public_key.0).unwrap());
        assert!(!verify(body, &sig.0, &other.public_key.0).unwrap());
        let mut tampered = body.to_vec();
        tampered[0] ^= 1;
        assert!(!verify(&tampered, &sig.0, &rec.public_key.0).unwrap());
    }

    #[test]
    fn truncated_signature_is_argument_error() {
        let (sk, rec) = seeded(6);
        let sig = sign(b"x", &sk);
        assert!(matches!(
            verify(b"x", &sig.0[..63], &rec.public_key.0),
            Err(Error::Argument(_))
        ));
        assert!(matches!(verify(b"x", &sig.0, &rec.public_key.0[..31]), Err(Error::Argument(_))));
    }

    fn registry(records: &[&IdentityRecord]) -> IdentityRegistry {
        records.iter().map(|r| (r.key_id, (*r).clone())).collect()
    }

    #[test]
    fn bind_editor_attestation() {
        let (editor_sk, editor) = seeded(7);
        let (_, subject) = seeded(8);
        let reg = registry(&[&editor, &subject]);
        let payload = compute_content_hash(b"editorial board letter");
        let att = issue_attestation(&editor_sk, &subject.key_id, AttestationKind::EditorRole, payload);
        let bound = bind_attestation(subject.clone(), att.clone(), &reg).unwrap();
        assert_eq!(bound.attestations.len(), 1);
        assert!(bound.has_attestation(AttestationKind::EditorRole));
        let again = bind_attestation(bound, att, &reg).unwrap();
        assert_eq!(again.attestations.len(), 1);
        assert_eq!(again.key_id, subject.key_id);
    }

    #[test]
    fn forged_attestation_rejected() {
        let (_, editor) = seeded(9);
        let (forger_sk, _) = seeded(10);
        let (_, subject) = seeded(11);
        let reg = registry(&[&editor, &subject]);
        let payload = compute_content_hash(b"letter");
        let mut att = issue_attestation(&forger_sk, &subject.key_id, AttestationKind::EditorRole, payload);
        att.issuer_key = editor.key_id;
        assert!(matches!(bind_attestation(subject, att, &reg), Err(Error::Attestation(_))));
    }

    #[test]
    fn unknown_issuer_rejected() {
        let (issuer_sk, _) = seeded(12);
        let (_, subject) = seeded(13);
        let reg = registry(&[&subject]);
        let att = issue_attestation(&issuer_sk, &subject.key_id, AttestationKind::ExternalId, ContentHash::ZERO);
        assert!(matches!(bind_attestation(subject, att, &reg), Err(Error::Identity(_))));
    }
}

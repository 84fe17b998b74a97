//! Typed scholarly event bodies and their validation rules.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::analysis::Claim;
use crate::canonical::{canonical_encode, finite};
use crate::config::GovernanceConfig;
use crate::error::{Result, Violation};
use crate::hash::ContentHash;
use crate::identity::{check_attestation, Attestation, AttestationKind, KeyId, PublicKey};
use crate::state::LedgerState;

macro_rules! kebab_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        pub enum $name {
            $(#[serde(rename = $text)] $variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(&self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl std::str::FromStr for $name {
            type Err = crate::error::Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($text => Ok($name::$variant),)+
                    other => Err(crate::error::Error::argument(format!(
                        "unknown {} `{}`", stringify!($name), other
                    ))),
                }
            }
        }
    };
}

kebab_enum!(
    /// Declared type of a commentary.
    CommentaryModality {
        Criticism => "criticism",
        Endorsement => "endorsement",
        Reinterpretation => "reinterpretation",
        Derivation => "derivation",
        ErrorFlag => "error-flag",
        ReplicationNote => "replication-note",
    }
);

kebab_enum!(
    /// Declared type of a citation edge.
    CitationModality {
        Foundational => "foundational",
        Critique => "critique",
        Replication => "replication",
        MethodologicalReuse => "methodological-reuse",
        Extension => "extension",
        Contradiction => "contradiction",
    }
);

impl CitationModality {
    /// Modalities that count toward an artifact's reuse set.
    pub fn is_reuse(&self) -> bool {
        matches!(
            self,
            CitationModality::MethodologicalReuse | CitationModality::Extension | CitationModality::Replication
        )
    }
}

kebab_enum!(
    Modification {
        Corrigendum => "corrigendum",
        RetractionNotice => "retraction-notice",
        Addendum => "addendum",
        Reanalysis => "reanalysis",
        Extension => "extension",
    }
);

impl Modification {
    /// Modifications that formally correct the parent version.
    pub fn is_correction(&self) -> bool {
        matches!(
            self,
            Modification::Corrigendum
                | Modification::RetractionNotice
                | Modification::Addendum
                | Modification::Reanalysis
        )
    }
}

kebab_enum!(
    RetractionReason {
        MethodologicalFlaw => "methodological-flaw",
        EthicalBreach => "ethical-breach",
        DataFalsity => "data-falsity",
        Superseded => "superseded",
    }
);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentityRegistration {
    pub public_key: PublicKey,
    pub tau: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttestationBinding {
    pub subject: KeyId,
    pub attestation: Attestation,
    pub tau: i64,
}

/// Registers an artifact: its content hash, lineage and declared claims
/// together with optional data (`data_hash`) and protocol (`protocol_hash`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArtifactRegistration {
    pub artifact_hash: ContentHash,
    /// Equals the first version's artifact hash.
    pub lineage_id: ContentHash,
    pub title: String,
    pub domain_tags: Vec<String>,
    pub claims: Vec<Claim>,
    pub data_hash: Option<ContentHash>,
    pub protocol_hash: Option<ContentHash>,
    /// Declared creation time of the work.
    pub created_at: i64,
    /// Registration time.
    pub tau: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommentaryEvent {
    /// An artifact hash, or another commentary's event id for meta-commentary.
    pub target: ContentHash,
    pub modality: CommentaryModality,
    pub claims: Vec<Claim>,
    pub text_hash: ContentHash,
    pub tau: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CitationEvent {
    pub citing: ContentHash,
    pub cited: ContentHash,
    pub modality: CitationModality,
    /// Declared stance of the citer, in [-1, 1].
    #[serde(serialize_with = "finite")]
    pub polarity: f64,
    /// How deeply the cited work is integrated, in [0, 1].
    #[serde(serialize_with = "finite")]
    pub integration_depth: f64,
    pub tau: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VersionEvent {
    pub lineage_id: ContentHash,
    pub version_hash: ContentHash,
    pub parent_version: Option<ContentHash>,
    pub modification: Modification,
    pub tau: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RetractionEvent {
    pub target_version: ContentHash,
    pub reasons: BTreeSet<RetractionReason>,
    pub voluntary: bool,
    pub tau: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NullResultEvent {
    pub hypothesis_id: String,
    pub dataset: String,
    pub method: String,
    #[serde(serialize_with = "finite")]
    pub effect_size: f64,
    #[serde(serialize_with = "finite")]
    pub confidence: f64,
    pub tau: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReplicationEvent {
    pub target: ContentHash,
    pub dataset_variant: String,
    /// Agreement with the original result, in [0, 1].
    #[serde(serialize_with = "finite")]
    pub congruence: f64,
    pub tau: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransferUseEvent {
    pub source: ContentHash,
    pub new_domain: String,
    pub dataset: String,
    pub protocol: String,
    pub resulting_claim: Claim,
    pub tau: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EventBody {
    Identity(IdentityRegistration),
    Attestation(AttestationBinding),
    Registration(ArtifactRegistration),
    Commentary(CommentaryEvent),
    Citation(CitationEvent),
    Version(VersionEvent),
    Retraction(RetractionEvent),
    NullResult(NullResultEvent),
    Replication(ReplicationEvent),
    TransferUse(TransferUseEvent),
}

impl EventBody {
    /// The event's own timestamp.
    pub fn tau(&self) -> i64 {
        match self {
            EventBody::Identity(b) => b.tau,
            EventBody::Attestation(b) => b.tau,
            EventBody::Registration(b) => b.tau,
            EventBody::Commentary(b) => b.tau,
            EventBody::Citation(b) => b.tau,
            EventBody::Version(b) => b.tau,
            EventBody::Retraction(b) => b.tau,
            EventBody::NullResult(b) => b.tau,
            EventBody::Replication(b) => b.tau,
            EventBody::TransferUse(b) => b.tau,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            EventBody::Identity(_) => "identity",
            EventBody::Attestation(_) => "attestation",
            EventBody::Registration(_) => "registration",
            EventBody::Commentary(_) => "commentary",
            EventBody::Citation(_) => "citation",
            EventBody::Version(_) => "version",
            EventBody::Retraction(_) => "retraction",
            EventBody::NullResult(_) => "null_result",
            EventBody::Replication(_) => "replication",
            EventBody::TransferUse(_) => "transfer_use",
        }
    }

    pub fn encode(&self) -> Result<Vec<u8>> {
        canonical_encode(self)
    }
}

fn in_range(v: f64, lo: f64, hi: f64) -> bool {
    v.is_finite() && v >= lo && v <= hi
}

fn check_claims(claims: &[Claim], out: &mut Vec<Violation>) {
    for c in claims {
        if let Err(e) = c.check() {
            out.push(Violation::new("invalid claim", e.to_string()));
        }
    }
}

/// Check `body`, signed by `signer`, against the current state and config.
///
/// Returns every violated rule; an empty list means the event is admissible.
pub fn validate_event(
    body: &EventBody,
    signer: &KeyId,
    state: &LedgerState,
    config: &GovernanceConfig,
) -> Vec<Violation> {
    let mut out = config.violations();

    if let Err(e) = body.encode() {
        out.push(Violation::new("non-finite number", e.to_string()));
    }

    if let EventBody::Identity(reg) = body {
        if reg.public_key.key_id() != *signer {
            out.push(Violation::new("signer mismatch", "identity must be self-signed"));
        }
        if state.identities.contains_key(signer) {
            out.push(Violation::new("duplicate identity", signer.to_string()));
        }
        return out;
    }

    if !state.identities.contains_key(signer) {
        out.push(Violation::new("unknown signer", signer.to_string()));
    }

    match body {
        EventBody::Identity(_) => unreachable!(),
        EventBody::Attestation(b) => {
            if b.attestation.issuer_key != *signer {
                out.push(Violation::new("issuer mismatch", "attestation must be signed by its issuer"));
            }
            if !state.identities.contains_key(&b.subject) {
                out.push(Violation::new("unknown target", b.subject.to_string()));
            } else if let Err(e) = check_attestation(&b.subject, &b.attestation, &state.identities) {
                out.push(Violation::new("invalid attestation", e.to_string()));
            }
        }
        EventBody::Registration(b) => {
            if b.artifact_hash.is_zero() {
                out.push(Violation::new("zero artifact hash", ""));
            }
            if state.artifacts.contains_key(&b.artifact_hash) {
                out.push(Violation::new("duplicate artifact", b.artifact_hash.to_string()));
            }
            if b.lineage_id != b.artifact_hash && !state.lineages.contains_key(&b.lineage_id) {
                out.push(Violation::new("unknown lineage", b.lineage_id.to_string()));
            }
            check_claims(&b.claims, &mut out);
        }
        EventBody::Commentary(b) => {
            if !state.artifacts.contains_key(&b.target) && !state.commentaries.contains_key(&b.target) {
                out.push(Violation::new("unknown target", b.target.to_string()));
            }
            check_claims(&b.claims, &mut out);
        }
        EventBody::Citation(b) => {
            if b.citing == b.cited {
                out.push(Violation::new("self citation", b.citing.to_string()));
            }
            let citing = state.artifacts.get(&b.citing);
            let cited = state.artifacts.get(&b.cited);
            if citing.is_none() {
                out.push(Violation::new("unknown target", b.citing.to_string()));
            }
            if cited.is_none() {
                out.push(Violation::new("unknown target", b.cited.to_string()));
            }
            if let (Some(a), Some(c)) = (citing, cited) {
                if a.body.tau < c.body.tau {
                    out.push(Violation::new(
                        "citation order",
                        "citing artifact registered before cited artifact",
                    ));
                }
            }
            if !in_range(b.polarity, -1.0, 1.0) {
                out.push(Violation::new("polarity range", b.polarity.to_string()));
            }
            if !in_range(b.integration_depth, 0.0, 1.0) {
                out.push(Violation::new("integration depth range", b.integration_depth.to_string()));
            }
        }
        EventBody::Version(b) => match state.lineages.get(&b.lineage_id) {
            None => out.push(Violation::new("unknown lineage", b.lineage_id.to_string())),
            Some(lineage) => {
                match state.artifacts.get(&b.version_hash) {
                    None => out.push(Violation::new("unknown target", b.version_hash.to_string())),
                    Some(a) if a.body.lineage_id != b.lineage_id => {
                        out.push(Violation::new("lineage mismatch", b.version_hash.to_string()))
                    }
                    Some(_) => {}
                }
                if state.lineage_of_version(&b.version_hash).is_some() {
                    out.push(Violation::new("duplicate version", b.version_hash.to_string()));
                }
                match &b.parent_version {
                    None => out.push(Violation::new("missing parent", "only the root version has no parent")),
                    Some(p) if lineage.node(p).is_none() => {
                        out.push(Violation::new("unknown parent", p.to_string()))
                    }
                    Some(_) => {}
                }
            }
        },
        EventBody::Retraction(b) => {
            if b.reasons.is_empty() {
                out.push(Violation::new("empty reason vector", ""));
            }
            if state.lineage_of_version(&b.target_version).is_none() {
                out.push(Violation::new("unknown target", b.target_version.to_string()));
            } else {
                if state.retractions.contains_key(&b.target_version) {
                    out.push(Violation::new("already retracted", b.target_version.to_string()));
                }
                let is_author = state.authors_of(&b.target_version).contains(signer);
                let is_editor = state
                    .identities
                    .get(signer)
                    .is_some_and(|r| r.has_attestation(AttestationKind::EditorRole));
                if !is_author && !is_editor {
                    out.push(Violation::new(
                        "unauthorized retraction",
                        "signer is neither author nor editor",
                    ));
                }
            }
        }
        EventBody::NullResult(b) => {
            if b.hypothesis_id.is_empty() {
                out.push(Violation::new("empty hypothesis id", ""));
            }
            if !in_range(b.confidence, 0.0, 1.0) {
                out.push(Violation::new("confidence range", b.confidence.to_string()));
            }
        }
        EventBody::Replication(b) => {
            if !state.artifacts.contains_key(&b.target) {
                out.push(Violation::new("unknown target", b.target.to_string()));
            }
            if !in_range(b.congruence, 0.0, 1.0) {
                out.push(Violation::new("congruence range", b.congruence.to_string()));
            }
        }
        EventBody::TransferUse(b) => {
            if !state.artifacts.contains_key(&b.source) {
                out.push(Violation::new("unknown target", b.source.to_string()));
            }
            check_claims(std::slice::from_ref(&b.resulting_claim), &mut out);
        }
    }
    out
}

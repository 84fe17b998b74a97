//! State projection of the ledger: a pure fold over verified envelopes.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::config::GovernanceConfig;
use crate::error::{Error, Result};
use crate::events::{
    validate_event, ArtifactRegistration, CitationEvent, CommentaryEvent, EventBody, Modification,
    NullResultEvent, ReplicationEvent, RetractionEvent, TransferUseEvent,
};
use crate::hash::ContentHash;
use crate::identity::{IdentityRecord, IdentityRegistry, KeyId};
use crate::ledger::LedgerEvent;

/// An event body together with where and by whom it was recorded.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Recorded<T> {
    pub event_id: ContentHash,
    pub seq: u64,
    pub signer: KeyId,
    pub body: T,
}

impl<T: Clone> Recorded<T> {
    fn of(event: &LedgerEvent, body: &T) -> Self {
        Self {
            event_id: event.event_id,
            seq: event.seq,
            signer: event.author_key,
            body: body.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VersionNode {
    pub version_hash: ContentHash,
    pub parent: Option<ContentHash>,
    pub tau: i64,
    /// `None` for the root version created by registration.
    pub modification: Option<Modification>,
    pub seq: u64,
    pub signer: KeyId,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lineage {
    pub lineage_id: ContentHash,
    pub versions: Vec<VersionNode>,
}

impl Lineage {
    pub fn node(&self, version: &ContentHash) -> Option<&VersionNode> {
        self.versions.iter().find(|v| v.version_hash == *version)
    }

    pub fn root(&self) -> &VersionNode {
        &self.versions[0]
    }

    pub fn children(&self, version: &ContentHash) -> impl Iterator<Item = &VersionNode> {
        let version = *version;
        self.versions
            .iter()
            .filter(move |v| v.parent == Some(version))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct LedgerState {
    pub identities: IdentityRegistry,
    pub artifacts: BTreeMap<ContentHash, Recorded<ArtifactRegistration>>,
    pub lineages: BTreeMap<ContentHash, Lineage>,
    pub commentaries: BTreeMap<ContentHash, Recorded<CommentaryEvent>>,
    pub citations: Vec<Recorded<CitationEvent>>,
    /// Keyed by retracted version.
    pub retractions: BTreeMap<ContentHash, Recorded<RetractionEvent>>,
    pub null_results: Vec<Recorded<NullResultEvent>>,
    pub replications: Vec<Recorded<ReplicationEvent>>,
    pub transfers: Vec<Recorded<TransferUseEvent>>,
    pub event_count: u64,
    #[serde(skip)]
    version_index: BTreeMap<ContentHash, ContentHash>,
}

impl LedgerState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Lineage id of `version`, if it has been admitted as a version.
    pub fn lineage_of_version(&self, version: &ContentHash) -> Option<&ContentHash> {
        self.version_index.get(version)
    }

    pub fn version_node(&self, version: &ContentHash) -> Option<&VersionNode> {
        let lineage = self.lineage_of_version(version)?;
        self.lineages.get(lineage)?.node(version)
    }

    /// Identities entitled to act as author of `artifact`: its registrant and
    /// the registrant of its lineage root.
    pub fn authors_of(&self, artifact: &ContentHash) -> BTreeSet<KeyId> {
        let mut out = BTreeSet::new();
        if let Some(a) = self.artifacts.get(artifact) {
            out.insert(a.signer);
            if let Some(root) = self.artifacts.get(&a.body.lineage_id) {
                out.insert(root.signer);
            }
        }
        out
    }

    pub fn artifacts_by(&self, identity: &KeyId) -> impl Iterator<Item = &Recorded<ArtifactRegistration>> {
        let identity = *identity;
        self.artifacts.values().filter(move |a| a.signer == identity)
    }

    pub fn commentaries_by(&self, identity: &KeyId) -> impl Iterator<Item = &Recorded<CommentaryEvent>> {
        let identity = *identity;
        self.commentaries.values().filter(move |c| c.signer == identity)
    }

    /// Whether `version` counts as retracted at time `t`.
    pub fn is_retracted_at(&self, version: &ContentHash, t: i64) -> bool {
        self.retractions
            .get(version)
            .is_some_and(|r| r.body.tau <= t)
    }

    /// Resolve a commentary target chain down to the artifact it discusses.
    pub fn root_artifact_of(&self, target: &ContentHash) -> Option<ContentHash> {
        let mut cur = *target;
        // Commentary targets must exist when appended, so chains are finite.
        loop {
            if self.artifacts.contains_key(&cur) {
                return Some(cur);
            }
            cur = self.commentaries.get(&cur)?.body.target;
        }
    }

    /// Validate `event` and fold it into the state. Rejected events leave
    /// the state untouched.
    pub fn apply(&mut self, event: &LedgerEvent, config: &GovernanceConfig) -> Result<()> {
        let violations = validate_event(&event.body, &event.author_key, self, config);
        if !violations.is_empty() {
            return Err(Error::Validation(violations));
        }
        match &event.body {
            EventBody::Identity(b) => {
                self.identities
                    .insert(event.author_key, IdentityRecord::new(b.public_key, b.tau));
            }
            EventBody::Attestation(b) => {
                let record = self.identities.get(&b.subject).cloned().expect("validated");
                let bound = crate::identity::bind_attestation(record, b.attestation.clone(), &self.identities)?;
                self.identities.insert(b.subject, bound);
            }
            EventBody::Registration(b) => {
                if b.lineage_id == b.artifact_hash {
                    self.lineages.insert(
                        b.lineage_id,
                        Lineage {
                            lineage_id: b.lineage_id,
                            versions: vec![VersionNode {
                                version_hash: b.artifact_hash,
                                parent: None,
                                tau: b.tau,
                                modification: None,
                                seq: event.seq,
                                signer: event.author_key,
                            }],
                        },
                    );
                    self.version_index.insert(b.artifact_hash, b.lineage_id);
                }
                self.artifacts.insert(b.artifact_hash, Recorded::of(event, b));
            }
            EventBody::Commentary(b) => {
                self.commentaries.insert(event.event_id, Recorded::of(event, b));
            }
            EventBody::Citation(b) => self.citations.push(Recorded::of(event, b)),
            EventBody::Version(b) => {
                let lineage = self.lineages.get_mut(&b.lineage_id).expect("validated");
                lineage.versions.push(VersionNode {
                    version_hash: b.version_hash,
                    parent: b.parent_version,
                    tau: b.tau,
                    modification: Some(b.modification),
                    seq: event.seq,
                    signer: event.author_key,
                });
                self.version_index.insert(b.version_hash, b.lineage_id);
            }
            EventBody::Retraction(b) => {
                self.retractions.insert(b.target_version, Recorded::of(event, b));
            }
            EventBody::NullResult(b) => self.null_results.push(Recorded::of(event, b)),
            EventBody::Replication(b) => self.replications.push(Recorded::of(event, b)),
            EventBody::TransferUse(b) => self.transfers.push(Recorded::of(event, b)),
        }
        self.event_count += 1;
        Ok(())
    }

    /// Fold a whole event sequence from an empty state.
    pub fn replay<'a>(
        events: impl IntoIterator<Item = &'a LedgerEvent>,
        config: &GovernanceConfig,
    ) -> Result<Self> {
        let mut state = LedgerState::new();
        for ev in events {
            state.apply(ev, config)?;
        }
        Ok(state)
    }

    /// Canonical JSON export of the whole projected state.
    pub fn export(&self) -> Result<Vec<u8>> {
        crate::canonical::canonical_encode(self)
    }
}

/// Pure form of [`LedgerState::apply`].
pub fn apply_event(state: &LedgerState, event: &LedgerEvent, config: &GovernanceConfig) -> Result<LedgerState> {
    let mut next = state.clone();
    next.apply(event, config)?;
    Ok(next)
}

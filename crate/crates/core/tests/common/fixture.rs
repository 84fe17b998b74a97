//! The scoring fixture ledger.
//!
//! Five identities on a ten-day timeline (epoch = one day):
//!
//! | day | events |
//! |-----|--------|
//! | 0 | identities alice, bob, carol, dan, erin; carol attests erin as editor |
//! | 1 | registrations Q1 (bob), P1..P4 (alice), Q2 (bob), R1, R2 (dan), Q3 (bob) |
//! | 2 | replications P1←bob 0.9, P2←carol 0.2, Q1←carol 1, Q1←dan 1, Q1←alice 0; alice criticises Q1 four times (K1..K4) |
//! | 3 | carol endorses K1..K3; carol and dan endorse P2; bob derives from P2; dan error-flags P2; erin endorses bob's derivation |
//! | 4 | citations P1→Q1, P2→Q1 (extension), P3→Q1 (reuse), R1→Q1 (contradiction, −1), Q2→P4, R2→P4 |
//! | 5 | alice retracts P4 (voluntary) and P3 (involuntary); erin retracts Q3 |
//! | 6 | bob versions Q1 with Q1v2 (corrigendum) and Q1v3 (extension) |
//! | 7 | dan records three null results on h-sleep (0.9, 0.95, 0.3); bob transfers P1's method |

use scriptorium_core::analysis::Claim;
use scriptorium_core::events::{
    AttestationBinding, CitationEvent, CitationModality, CommentaryEvent, CommentaryModality, EventBody,
    Modification, NullResultEvent, ReplicationEvent, RetractionEvent, RetractionReason, TransferUseEvent,
    VersionEvent,
};
use scriptorium_core::identity::{issue_attestation, AttestationKind};
use scriptorium_core::{compute_content_hash, ContentHash, GovernanceConfig, KeyId, Ledger, SecretKey};

use super::gen::{identity, registration};

pub const DAY: i64 = 86_400;
pub const T_END: i64 = 10 * DAY;

pub fn fixture_key(name: &str) -> SecretKey {
    SecretKey::from_bytes(compute_content_hash(name.as_bytes()).as_bytes()).unwrap()
}

pub fn claim(spec: &str) -> Claim {
    Claim::parse(spec).unwrap()
}

pub struct Fixture {
    pub ledger: Ledger,
    pub alice: KeyId,
    pub bob: KeyId,
    pub carol: KeyId,
    pub dan: KeyId,
    pub erin: KeyId,
    pub q1: ContentHash,
    pub q2: ContentHash,
    pub q3: ContentHash,
    pub p1: ContentHash,
    pub p2: ContentHash,
    pub p3: ContentHash,
    pub p4: ContentHash,
    pub r1: ContentHash,
    pub r2: ContentHash,
    pub q1v2: ContentHash,
    pub q1v3: ContentHash,
    /// alice's four criticisms of Q1.
    pub reviews: [ContentHash; 4],
    pub p2_endorsements: [ContentHash; 2],
    pub p2_derivation: ContentHash,
    pub p2_error_flag: ContentHash,
    pub meta_endorsement: ContentHash,
}

struct Builder {
    ledger: Ledger,
}

impl Builder {
    fn push(&mut self, body: EventBody, sk: &SecretKey) -> ContentHash {
        self.ledger.append_event(body, sk).unwrap().event_id
    }

    fn register(&mut self, sk: &SecretKey, content: &str, title: &str, claims: &[&str], lineage: Option<ContentHash>, tau: i64) -> ContentHash {
        let claims = claims.iter().map(|c| claim(c)).collect();
        self.push(registration(content, title, claims, lineage, tau), sk);
        compute_content_hash(content.as_bytes())
    }

    fn comment(&mut self, sk: &SecretKey, target: ContentHash, modality: CommentaryModality, claims: &[&str], text: &str, tau: i64) -> ContentHash {
        let body = EventBody::Commentary(CommentaryEvent {
            target,
            modality,
            claims: claims.iter().map(|c| claim(c)).collect(),
            text_hash: compute_content_hash(text.as_bytes()),
            tau,
        });
        self.push(body, sk)
    }

    fn replicate(&mut self, sk: &SecretKey, target: ContentHash, congruence: f64, tau: i64) {
        let body = EventBody::Replication(ReplicationEvent {
            target,
            dataset_variant: "variant".into(),
            congruence,
            tau,
        });
        self.push(body, sk);
    }

    #[allow(clippy::too_many_arguments)]
    fn cite(&mut self, sk: &SecretKey, citing: ContentHash, cited: ContentHash, modality: CitationModality, polarity: f64, depth: f64, tau: i64) {
        let body = EventBody::Citation(CitationEvent {
            citing,
            cited,
            modality,
            polarity,
            integration_depth: depth,
            tau,
        });
        self.push(body, sk);
    }

    fn retract(&mut self, sk: &SecretKey, target: ContentHash, reason: RetractionReason, voluntary: bool, tau: i64) {
        let body = EventBody::Retraction(RetractionEvent {
            target_version: target,
            reasons: [reason].into(),
            voluntary,
            tau,
        });
        self.push(body, sk);
    }

    fn version(&mut self, sk: &SecretKey, lineage: ContentHash, version: ContentHash, parent: ContentHash, modification: Modification, tau: i64) {
        let body = EventBody::Version(VersionEvent {
            lineage_id: lineage,
            version_hash: version,
            parent_version: Some(parent),
            modification,
            tau,
        });
        self.push(body, sk);
    }

    fn null(&mut self, sk: &SecretKey, confidence: f64, tau: i64) {
        let body = EventBody::NullResult(NullResultEvent {
            hypothesis_id: "h-sleep".into(),
            dataset: "adult".into(),
            method: "rct".into(),
            effect_size: 0.01,
            confidence,
            tau,
        });
        self.push(body, sk);
    }
}

pub fn build_fixture() -> Fixture {
    use CommentaryModality as Cm;
    let [alice, bob, carol, dan, erin] = ["alice", "bob", "carol", "dan", "erin"].map(fixture_key);
    let mut b = Builder {
        ledger: Ledger::new(GovernanceConfig::default()),
    };

    for k in [&alice, &bob, &carol, &dan, &erin] {
        b.push(identity(k, 0), k);
    }
    let att = issue_attestation(&carol, &erin.key_id(), AttestationKind::EditorRole, compute_content_hash(b"editor of record"));
    b.push(
        EventBody::Attestation(AttestationBinding {
            subject: erin.key_id(),
            attestation: att,
            tau: 10,
        }),
        &carol,
    );

    let d1 = DAY;
    let q1 = b.register(&bob, "Q1 body", "Sleep and memory consolidation", &["sleep:memory:negative:adult:rct"], None, d1);
    let p1 = b.register(&alice, "P1 body", "Sleep improves memory", &["sleep:memory:positive:adult:rct", "sleep:mood:positive:adult:survey"], None, d1 + 1);
    let p2 = b.register(&alice, "P2 body", "Caffeine and recall", &["caffeine:memory:negative:adult:rct"], None, d1 + 2);
    let p3 = b.register(&alice, "P3 body", "Exercise and recall", &["exercise:memory:positive:adult:cohort"], None, d1 + 3);
    let p4 = b.register(&alice, "P4 body", "A recall protocol", &[], None, d1 + 4);
    let q2 = b.register(&bob, "Q2 body", "Protocol follow-up", &[], None, d1 + 5);
    let r1 = b.register(&dan, "R1 body", "Failure to replicate", &[], None, d1 + 6);
    let r2 = b.register(&dan, "R2 body", "Protocol in children", &[], None, d1 + 7);
    let q3 = b.register(&bob, "Q3 body", "Fabricated study", &[], None, d1 + 8);

    let d2 = 2 * DAY;
    b.replicate(&bob, p1, 0.9, d2);
    b.replicate(&carol, p2, 0.2, d2 + 1);
    b.replicate(&carol, q1, 1.0, d2 + 2);
    b.replicate(&dan, q1, 1.0, d2 + 3);
    b.replicate(&alice, q1, 0.0, d2 + 4);
    let reviews = [0, 1, 2, 3].map(|i| b.comment(&alice, q1, Cm::Criticism, &[], &format!("review {i}"), d2 + 10 + i));

    let d3 = 3 * DAY;
    for (i, r) in reviews[..3].iter().enumerate() {
        b.comment(&carol, *r, Cm::Endorsement, &[], &format!("agree {i}"), d3 + i as i64);
    }
    let p2_endorsements = [
        b.comment(&carol, p2, Cm::Endorsement, &[], "solid", d3 + 10),
        b.comment(&dan, p2, Cm::Endorsement, &[], "convincing", d3 + 11),
    ];
    let p2_derivation = b.comment(&bob, p2, Cm::Derivation, &["caffeine:memory:negative:adult:cohort"], "cohort reading", d3 + 12);
    let p2_error_flag = b.comment(&dan, p2, Cm::ErrorFlag, &[], "table 2 is wrong", d3 + 13);
    let meta_endorsement = b.comment(&erin, p2_derivation, Cm::Endorsement, &[], "good derivation", d3 + 20);

    let d4 = 4 * DAY;
    b.cite(&alice, p1, q1, CitationModality::Foundational, 1.0, 1.0, d4);
    b.cite(&alice, p2, q1, CitationModality::Extension, 0.5, 0.5, d4 + 1);
    b.cite(&alice, p3, q1, CitationModality::MethodologicalReuse, 1.0, 1.0, d4 + 2);
    b.cite(&dan, r1, q1, CitationModality::Contradiction, -1.0, 1.0, d4 + 3);
    b.cite(&bob, q2, p4, CitationModality::Foundational, 1.0, 1.0, d4 + 4);
    b.cite(&dan, r2, p4, CitationModality::Foundational, 1.0, 1.0, d4 + 5);

    let d5 = 5 * DAY;
    b.retract(&alice, p4, RetractionReason::Superseded, true, d5);
    b.retract(&alice, p3, RetractionReason::MethodologicalFlaw, false, d5 + 1);
    b.retract(&erin, q3, RetractionReason::DataFalsity, false, d5 + 2);

    let d6 = 6 * DAY;
    let q1v2 = b.register(&bob, "Q1 body v2", "Sleep and memory consolidation", &["sleep:memory:negative:adult:rct"], Some(q1), d6);
    b.version(&bob, q1, q1v2, q1, Modification::Corrigendum, d6 + 1);
    let q1v3 = b.register(&bob, "Q1 body v3", "Sleep and memory consolidation, extended", &["sleep:memory:negative:adult:rct"], Some(q1), d6 + 2);
    b.version(&bob, q1, q1v3, q1, Modification::Extension, d6 + 3);

    let d7 = 7 * DAY;
    b.null(&dan, 0.9, d7);
    b.null(&dan, 0.95, d7 + 1);
    b.null(&dan, 0.3, d7 + 2);
    b.push(
        EventBody::TransferUse(TransferUseEvent {
            source: p1,
            new_domain: "pediatrics".into(),
            dataset: "child".into(),
            protocol: "rct".into(),
            resulting_claim: claim("sleep:memory:positive:child:rct"),
            tau: d7 + 10,
        }),
        &bob,
    );

    Fixture {
        ledger: b.ledger,
        alice: alice.key_id(),
        bob: bob.key_id(),
        carol: carol.key_id(),
        dan: dan.key_id(),
        erin: erin.key_id(),
        q1,
        q2,
        q3,
        p1,
        p2,
        p3,
        p4,
        r1,
        r2,
        q1v2,
        q1v3,
        reviews,
        p2_endorsements,
        p2_derivation,
        p2_error_flag,
        meta_endorsement,
    }
}

/// Path of a checked-in fixture file.
pub fn fixture_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures").join(name)
}

/// Compare `bytes` with a frozen file. With `SCRIPTORIUM_FREEZE=1` the file
/// is (re)written instead.
pub fn assert_frozen(name: &str, bytes: &[u8]) {
    let path = fixture_path(name);
    if std::env::var_os("SCRIPTORIUM_FREEZE").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, bytes).unwrap();
    }
    let frozen = std::fs::read(&path).unwrap_or_else(|e| panic!("missing frozen file {}: {e}", path.display()));
    assert!(frozen == bytes, "{} differs from the frozen copy", path.display());
}

//! Seeded generators for valid ledgers.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use scriptorium_core::analysis::{Claim, Direction};
use scriptorium_core::events::{
    ArtifactRegistration, CitationEvent, CitationModality, CommentaryEvent, CommentaryModality, EventBody,
    IdentityRegistration, Modification, NullResultEvent, ReplicationEvent, RetractionEvent, RetractionReason,
    TransferUseEvent, VersionEvent,
};
use scriptorium_core::graphs::CitationEdge;
use scriptorium_core::{compute_content_hash, ContentHash, GovernanceConfig, Ledger, SecretKey};

use super::oracles::ScanVersion;

pub fn key(n: u64) -> SecretKey {
    let mut seed = [0xA5u8; 32];
    seed[..8].copy_from_slice(&n.to_le_bytes());
    SecretKey::from_bytes(&seed).unwrap()
}

pub fn identity(sk: &SecretKey, tau: i64) -> EventBody {
    EventBody::Identity(IdentityRegistration {
        public_key: sk.public_key(),
        tau,
    })
}

pub fn registration(content: &str, title: &str, claims: Vec<Claim>, lineage: Option<ContentHash>, tau: i64) -> EventBody {
    let artifact_hash = compute_content_hash(content.as_bytes());
    EventBody::Registration(ArtifactRegistration {
        artifact_hash,
        lineage_id: lineage.unwrap_or(artifact_hash),
        title: title.into(),
        domain_tags: vec![],
        claims,
        data_hash: None,
        protocol_hash: None,
        created_at: tau,
        tau,
    })
}

const WORDS: &[&str] = &["sleep", "memory", "caffeine", "mood", "exercise", "learning", "stress", "diet"];

fn word(rng: &mut ChaCha8Rng) -> &'static str {
    WORDS.choose(rng).unwrap()
}

fn claim(rng: &mut ChaCha8Rng) -> Claim {
    let dir = [Direction::Positive, Direction::Negative, Direction::Zero][rng.gen_range(0..3)];
    Claim::new(word(rng), word(rng), dir, ["adult", "child"][rng.gen_range(0..2)], ["rct", "cohort"][rng.gen_range(0..2)])
}

struct Artifact {
    hash: ContentHash,
    author: usize,
    lineage: ContentHash,
}

/// A valid ledger of exactly `n_events` events (at least 8), covering every
/// event kind except attestations.
pub fn random_ledger(seed: u64, n_events: usize) -> Ledger {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let keys: Vec<SecretKey> = (0..8).map(|i| key(seed.wrapping_mul(31).wrapping_add(i))).collect();
    let mut ledger = Ledger::new(GovernanceConfig::default());
    let mut tau = 0i64;
    for k in &keys {
        ledger.append_event(identity(k, tau), k).unwrap();
    }

    let mut artifacts: Vec<Artifact> = Vec::new();
    // Registered into an existing lineage but not yet linked by a version event.
    let mut pending: Vec<(ContentHash, ContentHash, usize)> = Vec::new();
    let mut versions: Vec<(ContentHash, ContentHash, usize)> = Vec::new();
    let mut retracted: Vec<ContentHash> = Vec::new();
    let mut comments: Vec<ContentHash> = Vec::new();
    let mut counter = 0u64;

    while ledger.len() < n_events {
        tau += rng.gen_range(1..100);
        counter += 1;
        let signer = rng.gen_range(0..keys.len());
        let roll = rng.gen_range(0..100);
        let body = if artifacts.len() < 3 || roll < 25 {
            let lineage = if !artifacts.is_empty() && rng.gen_bool(0.2) {
                let a = artifacts.choose(&mut rng).unwrap();
                Some(a.lineage)
            } else {
                None
            };
            let content = format!("artifact {seed} {counter}");
            let claims = (0..rng.gen_range(0..3)).map(|_| claim(&mut rng)).collect();
            let body = registration(&content, &format!("{} {}", word(&mut rng), word(&mut rng)), claims, lineage, tau);
            let hash = compute_content_hash(content.as_bytes());
            let lineage = lineage.unwrap_or(hash);
            if lineage == hash {
                versions.push((lineage, hash, signer));
            } else {
                pending.push((lineage, hash, signer));
            }
            artifacts.push(Artifact {
                hash,
                author: signer,
                lineage,
            });
            ledger.append_event(body, &keys[signer]).unwrap();
            continue;
        } else if roll < 45 {
            let target = if !comments.is_empty() && rng.gen_bool(0.3) {
                *comments.choose(&mut rng).unwrap()
            } else {
                artifacts.choose(&mut rng).unwrap().hash
            };
            let modality = *CommentaryModality::ALL.choose(&mut rng).unwrap();
            EventBody::Commentary(CommentaryEvent {
                target,
                modality,
                claims: (0..rng.gen_range(0..2)).map(|_| claim(&mut rng)).collect(),
                text_hash: compute_content_hash(format!("text {seed} {counter}").as_bytes()),
                tau,
            })
        } else if roll < 65 {
            let i = rng.gen_range(1..artifacts.len());
            let j = rng.gen_range(0..i);
            let citing = &artifacts[i];
            let body = EventBody::Citation(CitationEvent {
                citing: citing.hash,
                cited: artifacts[j].hash,
                modality: *CitationModality::ALL.choose(&mut rng).unwrap(),
                polarity: [-1.0, -0.5, 0.0, 0.5, 1.0][rng.gen_range(0..5)],
                integration_depth: [0.0, 0.25, 0.5, 1.0][rng.gen_range(0..4)],
                tau,
            });
            ledger.append_event(body, &keys[citing.author]).unwrap();
            continue;
        } else if roll < 72 && !pending.is_empty() {
            let (lineage, hash, author) = pending.remove(rng.gen_range(0..pending.len()));
            let parents: Vec<_> = versions.iter().filter(|v| v.0 == lineage).map(|v| v.1).collect();
            let body = EventBody::Version(VersionEvent {
                lineage_id: lineage,
                version_hash: hash,
                parent_version: Some(*parents.choose(&mut rng).unwrap()),
                modification: *Modification::ALL.choose(&mut rng).unwrap(),
                tau,
            });
            versions.push((lineage, hash, author));
            ledger.append_event(body, &keys[author]).unwrap();
            continue;
        } else if roll < 77 {
            let open: Vec<_> = versions.iter().filter(|v| !retracted.contains(&v.1)).collect();
            let Some(&&(_, hash, author)) = open.choose(&mut rng) else {
                continue;
            };
            retracted.push(hash);
            let reason = *RetractionReason::ALL.choose(&mut rng).unwrap();
            let body = EventBody::Retraction(RetractionEvent {
                target_version: hash,
                reasons: [reason].into(),
                voluntary: rng.gen_bool(0.5),
                tau,
            });
            ledger.append_event(body, &keys[author]).unwrap();
            continue;
        } else if roll < 85 {
            EventBody::NullResult(NullResultEvent {
                hypothesis_id: format!("h{}", rng.gen_range(0..5)),
                dataset: word(&mut rng).into(),
                method: word(&mut rng).into(),
                effect_size: rng.gen_range(-0.1..0.1),
                confidence: rng.gen_range(0.0..=1.0),
                tau,
            })
        } else if roll < 95 {
            EventBody::Replication(ReplicationEvent {
                target: artifacts.choose(&mut rng).unwrap().hash,
                dataset_variant: word(&mut rng).into(),
                congruence: rng.gen_range(0.0..=1.0),
                tau,
            })
        } else {
            EventBody::TransferUse(TransferUseEvent {
                source: artifacts.choose(&mut rng).unwrap().hash,
                new_domain: word(&mut rng).into(),
                dataset: word(&mut rng).into(),
                protocol: word(&mut rng).into(),
                resulting_claim: claim(&mut rng),
                tau,
            })
        };
        let ev = ledger.append_event(body, &keys[signer]).unwrap();
        if let EventBody::Commentary(_) = ev.body {
            comments.push(ev.event_id);
        }
    }
    ledger
}

pub fn node_hash(i: usize) -> ContentHash {
    compute_content_hash(format!("node {i}").as_bytes())
}

/// A random citation DAG on `n` nodes: node i may only cite nodes j < i.
/// Returns (citing, cited) index pairs.
pub fn random_dag(seed: u64, n: usize, density: f64) -> Vec<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 1..n {
        for j in 0..i {
            if rng.gen_bool(density) {
                edges.push((i, j));
            }
        }
    }
    edges
}

/// Citation edges over `node_hash` ids with random modality, polarity,
/// depth and τ.
pub fn weighted_edges(seed: u64, dag: &[(usize, usize)]) -> Vec<CitationEdge> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    dag.iter()
        .enumerate()
        .map(|(k, &(i, j))| CitationEdge {
            citing: node_hash(i),
            cited: node_hash(j),
            modality: *CitationModality::ALL.choose(&mut rng).unwrap(),
            polarity: rng.gen_range(-1.0..=1.0),
            integration_depth: rng.gen_range(0.0..=1.0),
            tau: rng.gen_range(0..1000),
            event_id: compute_content_hash(format!("edge {k}").as_bytes()),
        })
        .collect()
}

/// One lineage with random parents, tied and out-of-order τ values and
/// random retractions, plus the plain-data description of its versions.
pub struct RandomLineage {
    pub ledger: Ledger,
    pub lineage_id: ContentHash,
    pub versions: Vec<ContentHash>,
    pub scan: Vec<ScanVersion>,
    pub horizon: i64,
}

pub fn random_lineage(seed: u64) -> RandomLineage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sk = key(seed);
    let mut ledger = Ledger::new(GovernanceConfig::default());
    ledger.append_event(identity(&sk, 0), &sk).unwrap();
    let horizon = 200;

    let root_content = format!("lineage {seed} root");
    let root_tau = rng.gen_range(0..50);
    let root_seq = ledger.append_event(registration(&root_content, "root", vec![], None, root_tau), &sk).unwrap().seq;
    let lineage_id = compute_content_hash(root_content.as_bytes());
    let mut versions = vec![lineage_id];
    let mut scan = vec![ScanVersion {
        tau: root_tau,
        seq: root_seq,
        retracted_at: None,
    }];

    for k in 1..rng.gen_range(1..12) {
        let content = format!("lineage {seed} v{k}");
        let tau = rng.gen_range(0..horizon);
        ledger.append_event(registration(&content, "next", vec![], Some(lineage_id), tau), &sk).unwrap();
        let hash = compute_content_hash(content.as_bytes());
        let parent = *versions.choose(&mut rng).unwrap();
        // Ties are common on purpose: the version τ is drawn from a few values.
        let vtau = [tau, tau, rng.gen_range(0..horizon)][rng.gen_range(0..3)];
        let seq = ledger
            .append_event(
                EventBody::Version(VersionEvent {
                    lineage_id,
                    version_hash: hash,
                    parent_version: Some(parent),
                    modification: *Modification::ALL.choose(&mut rng).unwrap(),
                    tau: vtau,
                }),
                &sk,
            )
            .unwrap()
            .seq;
        versions.push(hash);
        scan.push(ScanVersion {
            tau: vtau,
            seq,
            retracted_at: None,
        });
    }
    for i in 0..versions.len() {
        if rng.gen_bool(0.3) {
            let tau = rng.gen_range(0..horizon);
            ledger
                .append_event(
                    EventBody::Retraction(RetractionEvent {
                        target_version: versions[i],
                        reasons: [RetractionReason::Superseded].into(),
                        voluntary: true,
                        tau,
                    }),
                    &sk,
                )
                .unwrap();
            scan[i].retracted_at = Some(tau);
        }
    }
    RandomLineage {
        ledger,
        lineage_id,
        versions,
        scan,
        horizon,
    }
}

//! Closed-form scores over a state snapshot, parameterized by the
//! governance config. Every function here is pure.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::analysis::{changed_propositions, claim_set_distance, classify_delta, novelty, Claim, DeltaClass};
use crate::config::GovernanceConfig;
use crate::error::{Error, Result};
use crate::events::{CitationModality, CommentaryModality};
use crate::graphs::{reuse_rate, CitationGraph};
use crate::hash::ContentHash;
use crate::identity::KeyId;
use crate::state::LedgerState;

/// Fixpoint iteration limits for [`influence_scores`].
pub const INFLUENCE_TOLERANCE: f64 = 1e-9;
pub const INFLUENCE_MAX_ITERATIONS: usize = 50;

fn require_identity(identity: &KeyId, state: &LedgerState) -> Result<()> {
    if state.identities.contains_key(identity) {
        Ok(())
    } else {
        Err(Error::argument(format!("unknown identity {identity}")))
    }
}

fn require_artifact(artifact: &ContentHash, state: &LedgerState) -> Result<()> {
    if state.artifacts.contains_key(artifact) {
        Ok(())
    } else {
        Err(Error::argument(format!("unknown artifact {artifact}")))
    }
}

fn endorsements_of(target: &ContentHash, state: &LedgerState) -> usize {
    state
        .commentaries
        .values()
        .filter(|c| c.body.target == *target && c.body.modality == CommentaryModality::Endorsement)
        .count()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ReputationCounts {
    /// Claims on the identity's artifacts backed by a congruent replication.
    pub validated_claims: u64,
    /// The identity's commentaries endorsed by at least one meta-commentary.
    pub endorsed_reviews: u64,
    /// Involuntary retractions of the identity's artifacts.
    pub involuntary_retractions: u64,
}

pub fn reputation_counts(identity: &KeyId, state: &LedgerState, config: &GovernanceConfig) -> Result<ReputationCounts> {
    require_identity(identity, state)?;
    let threshold = config.thresholds.congruence;
    let validated_claims = state
        .artifacts_by(identity)
        .filter(|a| {
            state
                .replications
                .iter()
                .any(|r| r.body.target == a.body.artifact_hash && r.body.congruence >= threshold)
        })
        .map(|a| a.body.claims.len() as u64)
        .sum();
    let endorsed_reviews = state
        .commentaries_by(identity)
        .filter(|c| endorsements_of(&c.event_id, state) > 0)
        .count() as u64;
    let involuntary_retractions = state
        .retractions
        .values()
        .filter(|r| !r.body.voluntary)
        .filter(|r| state.artifacts.get(&r.body.target_version).is_some_and(|a| a.signer == *identity))
        .count() as u64;
    Ok(ReputationCounts {
        validated_claims,
        endorsed_reviews,
        involuntary_retractions,
    })
}

/// α·V + β·E + γ/(1 + RC).
pub fn reputation_from_counts(counts: &ReputationCounts, config: &GovernanceConfig) -> f64 {
    let w = &config.reputation;
    w.alpha * counts.validated_claims as f64
        + w.beta * counts.endorsed_reviews as f64
        + w.gamma / (1.0 + counts.involuntary_retractions as f64)
}

pub fn reputation(identity: &KeyId, state: &LedgerState, config: &GovernanceConfig) -> Result<f64> {
    Ok(reputation_from_counts(&reputation_counts(identity, state, config)?, config))
}

/// One epoch of the affine trust update.
pub fn trust_update(
    prev: f64,
    endorsements: i64,
    flagged_errors: i64,
    replication_support: i64,
    config: &GovernanceConfig,
) -> Result<f64> {
    if endorsements < 0 || flagged_errors < 0 || replication_support < 0 {
        return Err(Error::argument("trust update counts must be non-negative"));
    }
    let w = &config.trust;
    Ok(prev + w.endorsement * endorsements as f64 - w.flagged_error * flagged_errors as f64
        + w.replication_support * replication_support as f64)
}

/// Trust of `identity` at time `t`: the trust update folded epoch by epoch
/// from zero. Endorsements and error flags count when they target the
/// identity's artifacts or commentaries and come from someone else;
/// replication support counts congruent replications of its artifacts.
pub fn trust(identity: &KeyId, t: i64, state: &LedgerState, config: &GovernanceConfig) -> Result<f64> {
    require_identity(identity, state)?;
    let owned: BTreeSet<ContentHash> = state
        .artifacts_by(identity)
        .map(|a| a.body.artifact_hash)
        .chain(state.commentaries_by(identity).map(|c| c.event_id))
        .collect();
    let epoch_len = config.epoch_length as i64;
    let mut per_epoch: BTreeMap<i64, [i64; 3]> = BTreeMap::new();
    for c in state.commentaries.values() {
        if c.body.tau > t || c.signer == *identity || !owned.contains(&c.body.target) {
            continue;
        }
        let slot = match c.body.modality {
            CommentaryModality::Endorsement => 0,
            CommentaryModality::ErrorFlag => 1,
            _ => continue,
        };
        per_epoch.entry(c.body.tau.div_euclid(epoch_len)).or_default()[slot] += 1;
    }
    for r in &state.replications {
        if r.body.tau <= t && r.body.congruence >= config.thresholds.congruence && owned.contains(&r.body.target) {
            per_epoch.entry(r.body.tau.div_euclid(epoch_len)).or_default()[2] += 1;
        }
    }
    per_epoch
        .values()
        .try_fold(0.0, |acc, [e, f, r]| trust_update(acc, *e, *f, *r, config))
}

/// Map unbounded trust into [0, 1) for use as a multiplicative weight.
pub fn clamp_trust(t: f64) -> f64 {
    if t >= 0.0 {
        t / (1.0 + t)
    } else {
        0.0
    }
}

/// Influence of every node in `graph`.
///
/// Fixpoint of I(B) = Σ m_μ·(1+polarity)/2·depth·(1 + ρ·Î(citer)) over
/// citations into B, where Î is influence divided by the current maximum.
/// Iterates from zero until the largest change is below tolerance.
pub fn influence_scores(graph: &CitationGraph, config: &GovernanceConfig) -> BTreeMap<ContentHash, f64> {
    let index: BTreeMap<ContentHash, usize> = graph.nodes.iter().enumerate().map(|(i, h)| (*h, i)).collect();
    let edges: Vec<(usize, usize, f64)> = graph
        .edges
        .iter()
        .filter_map(|e| {
            let base = config.modality_weight(e.modality.as_str()) * (1.0 + e.polarity) / 2.0 * e.integration_depth;
            Some((*index.get(&e.citing)?, *index.get(&e.cited)?, base))
        })
        .collect();
    let decay = config.influence_decay;
    let mut current = vec![0.0; index.len()];
    for _ in 0..INFLUENCE_MAX_ITERATIONS {
        let max = current.iter().copied().fold(0.0, f64::max);
        let mut next = vec![0.0; current.len()];
        for &(citing, cited, base) in &edges {
            let normalized = if max > 0.0 { current[citing] / max } else { 0.0 };
            next[cited] += base * (1.0 + decay * normalized);
        }
        let change = next
            .iter()
            .zip(&current)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        current = next;
        if change < INFLUENCE_TOLERANCE {
            break;
        }
    }
    index.into_iter().map(|(h, i)| (h, current[i])).collect()
}

/// Influence of `artifact` counting citations with τ ≤ `t`.
pub fn influence_at(artifact: &ContentHash, t: i64, state: &LedgerState, config: &GovernanceConfig) -> Result<f64> {
    require_artifact(artifact, state)?;
    let graph = CitationGraph::from_state_until(state, t);
    Ok(influence_scores(&graph, config).get(artifact).copied().unwrap_or(0.0))
}

pub fn influence(artifact: &ContentHash, state: &LedgerState, config: &GovernanceConfig) -> Result<f64> {
    influence_at(artifact, i64::MAX, state, config)
}

/// Change in influence over the epoch ending at `t`.
pub fn influence_gradient(artifact: &ContentHash, t: i64, state: &LedgerState, config: &GovernanceConfig) -> Result<f64> {
    let before = t.saturating_sub(config.epoch_length as i64);
    Ok(influence_at(artifact, t, state, config)? - influence_at(artifact, before, state, config)?)
}

/// Mean replication congruence. An artifact without replications has no
/// trust value at all, which is distinct from zero trust.
pub fn replication_trust(artifact: &ContentHash, state: &LedgerState) -> Result<f64> {
    require_artifact(artifact, state)?;
    let deltas: Vec<f64> = state
        .replications
        .iter()
        .filter(|r| r.body.target == *artifact)
        .map(|r| r.body.congruence)
        .collect();
    if deltas.is_empty() {
        return Err(Error::NoReplications(artifact.to_string()));
    }
    Ok(deltas.iter().sum::<f64>() / deltas.len() as f64)
}

/// Apply the null-result decay `k` times to `prior`.
pub fn dampen(prior: f64, lambda: f64, k: usize) -> f64 {
    (0..k).fold(prior, |p, _| lambda * p)
}

/// Prior on a hypothesis after decaying once per confident null result.
pub fn null_dampening(prior: f64, hypothesis_id: &str, state: &LedgerState, config: &GovernanceConfig) -> Result<f64> {
    if !(prior > 0.0 && prior <= 1.0) {
        return Err(Error::argument(format!("prior {prior} outside (0, 1]")));
    }
    config.validate()?;
    let k = state
        .null_results
        .iter()
        .filter(|n| n.body.hypothesis_id == hypothesis_id && n.body.confidence >= config.thresholds.null_confidence)
        .count();
    Ok(dampen(prior, config.dampening, k))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrectionScores {
    pub rectification: f64,
    pub ethics: f64,
}

/// Rectification and ethics scores over the identity's own work.
///
/// Retractions of the identity's artifacts: voluntary ones are proactive
/// and add the target's influence at retraction time to rectification;
/// involuntary but self-signed ones are responsive. Correction versions the
/// identity signs on its own lineages are proactive unless the corrected
/// version drew criticism or an error flag beforehand.
pub fn correction_scores(identity: &KeyId, state: &LedgerState, config: &GovernanceConfig) -> Result<CorrectionScores> {
    require_identity(identity, state)?;
    let mut rectification = 0.0;
    let mut proactive = 0u64;
    let mut responsive = 0u64;
    for r in state.retractions.values() {
        let target = &r.body.target_version;
        if !state.artifacts.get(target).is_some_and(|a| a.signer == *identity) {
            continue;
        }
        if r.body.voluntary {
            rectification += influence_at(target, r.body.tau, state, config)?;
            proactive += 1;
        } else if r.signer == *identity {
            responsive += 1;
        }
    }
    for lineage in state.lineages.values() {
        for v in &lineage.versions {
            let (Some(modification), Some(parent)) = (v.modification, v.parent) else {
                continue;
            };
            if v.signer != *identity || !modification.is_correction() || !state.authors_of(&parent).contains(identity) {
                continue;
            }
            let challenged = state.commentaries.values().any(|c| {
                c.body.target == parent
                    && c.body.tau <= v.tau
                    && c.signer != *identity
                    && matches!(c.body.modality, CommentaryModality::Criticism | CommentaryModality::ErrorFlag)
            });
            if challenged {
                responsive += 1;
            } else {
                proactive += 1;
            }
        }
    }
    Ok(CorrectionScores {
        rectification,
        ethics: config.ethics.proactive * proactive as f64 + config.ethics.responsive * responsive as f64,
    })
}

/// Role-weighted influence over artifacts the identity authored or
/// formally corrected, as of time `t`.
pub fn epistemic_influence(identity: &KeyId, t: i64, state: &LedgerState, config: &GovernanceConfig) -> Result<f64> {
    require_identity(identity, state)?;
    let mut roles: BTreeMap<ContentHash, f64> = BTreeMap::new();
    for a in state.artifacts_by(identity).filter(|a| a.body.tau <= t) {
        roles.insert(a.body.artifact_hash, config.roles.author);
    }
    for lineage in state.lineages.values() {
        for v in &lineage.versions {
            if v.signer != *identity || v.tau > t || !v.modification.is_some_and(|m| m.is_correction()) {
                continue;
            }
            if let Some(parent) = v.parent {
                let w = roles.entry(parent).or_insert(0.0);
                *w = w.max(config.roles.corrector);
            }
        }
    }
    if roles.is_empty() {
        return Ok(0.0);
    }
    let scores = influence_scores(&CitationGraph::from_state_until(state, t), config);
    Ok(roles
        .iter()
        .map(|(h, w)| w * scores.get(h).copied().unwrap_or(0.0))
        .sum())
}

/// α·C⁺ + β·C⁻, requiring β ≥ α > 0.
pub fn impact_weight(c_pos: u64, c_null: u64, config: &GovernanceConfig) -> Result<f64> {
    let w = &config.impact;
    let violations: Vec<_> = config
        .violations()
        .into_iter()
        .filter(|v| v.rule.starts_with("impact weight"))
        .collect();
    if !violations.is_empty() {
        return Err(Error::Config(violations));
    }
    Ok(w.alpha * c_pos as f64 + w.beta * c_null as f64)
}

/// Positive (polarity > 0) and non-affirming (polarity ≤ 0) incoming citations.
pub fn citation_counts(artifact: &ContentHash, state: &LedgerState) -> (u64, u64) {
    let incoming = state.citations.iter().filter(|c| c.body.cited == *artifact);
    incoming.fold((0, 0), |(p, n), c| {
        if c.body.polarity > 0.0 {
            (p + 1, n)
        } else {
            (p, n + 1)
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReviewAgentProfile {
    pub agent: KeyId,
    pub ontology_tags: Vec<String>,
    /// Credential weight κ, non-negative.
    pub credential_weight: f64,
}

/// Per-dimension κ-weighted mean of agent scores.
pub fn agent_valuation(
    scores: &BTreeMap<KeyId, BTreeMap<String, f64>>,
    profiles: &[ReviewAgentProfile],
) -> Result<BTreeMap<String, f64>> {
    let mut weights = BTreeMap::new();
    for p in profiles {
        if !(p.credential_weight >= 0.0) || !p.credential_weight.is_finite() {
            return Err(Error::argument(format!("credential weight of {} must be >= 0", p.agent)));
        }
        weights.insert(p.agent, p.credential_weight);
    }
    let mut sums: BTreeMap<String, (f64, f64)> = BTreeMap::new();
    for (agent, dims) in scores {
        let kappa = *weights
            .get(agent)
            .ok_or_else(|| Error::argument(format!("no profile for agent {agent}")))?;
        for (dim, score) in dims {
            if !(0.0..=1.0).contains(score) {
                return Err(Error::argument(format!("score {score} for `{dim}` outside [0, 1]")));
            }
            let e = sums.entry(dim.clone()).or_insert((0.0, 0.0));
            e.0 += kappa * score;
            e.1 += kappa;
        }
    }
    sums.into_iter()
        .map(|(dim, (num, den))| {
            if den > 0.0 {
                Ok((dim, num / den))
            } else {
                Err(Error::DegenerateWeights)
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UseSignal {
    /// Σ w_i over reuse, transfer and interpretation events.
    pub signal: f64,
    /// Σ w_i·s_i with s_i the claim distance to the artifact's claims.
    pub interpretive: f64,
}

/// Use signal and interpretive impact of `artifact` up to `t`.
pub fn use_signal(artifact: &ContentHash, t: i64, state: &LedgerState, config: &GovernanceConfig) -> Result<UseSignal> {
    require_artifact(artifact, state)?;
    let own_claims = &state.artifacts[artifact].body.claims;
    let mut terms: Vec<(KeyId, &str, &[Claim])> = Vec::new();
    for c in &state.citations {
        if c.body.cited == *artifact && c.body.tau <= t && c.body.modality.is_reuse() {
            terms.push((c.signer, c.body.modality.as_str(), &[]));
        }
    }
    for x in &state.transfers {
        if x.body.source == *artifact && x.body.tau <= t {
            terms.push((x.signer, "transfer", std::slice::from_ref(&x.body.resulting_claim)));
        }
    }
    for c in state.commentaries.values() {
        let interpretive = matches!(
            c.body.modality,
            CommentaryModality::Reinterpretation | CommentaryModality::Derivation
        );
        if interpretive && c.body.target == *artifact && c.body.tau <= t {
            terms.push((c.signer, c.body.modality.as_str(), &c.body.claims));
        }
    }
    let mut trust_cache: BTreeMap<KeyId, f64> = BTreeMap::new();
    let mut out = UseSignal {
        signal: 0.0,
        interpretive: 0.0,
    };
    for (signer, modality, claims) in terms {
        let tr = match trust_cache.get(&signer) {
            Some(v) => *v,
            None => {
                let v = clamp_trust(trust(&signer, t, state, config)?);
                trust_cache.insert(signer, v);
                v
            }
        };
        let w = config.modality_weight(modality) * tr;
        let s = if claims.is_empty() {
            1.0
        } else {
            claim_set_distance(claims, own_claims)
        };
        out.signal += w;
        out.interpretive += w * s;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CommentaryVector {
    pub v: u64,
    pub x: u64,
    pub r: u64,
    pub e: u64,
}

/// Endorsements, extensions, confirmed replications and error flags
/// aimed directly at `artifact`.
pub fn commentary_vector(artifact: &ContentHash, state: &LedgerState, config: &GovernanceConfig) -> Result<CommentaryVector> {
    require_artifact(artifact, state)?;
    let mut out = CommentaryVector { v: 0, x: 0, r: 0, e: 0 };
    for c in state.commentaries.values().filter(|c| c.body.target == *artifact) {
        match c.body.modality {
            CommentaryModality::Endorsement => out.v += 1,
            CommentaryModality::Derivation => out.x += 1,
            CommentaryModality::ErrorFlag => out.e += 1,
            _ => {}
        }
    }
    out.x += state
        .citations
        .iter()
        .filter(|c| c.body.cited == *artifact && c.body.modality == CitationModality::Extension)
        .count() as u64;
    out.r = state
        .replications
        .iter()
        .filter(|r| r.body.target == *artifact && r.body.congruence >= config.thresholds.congruence)
        .count() as u64;
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReviewQuality {
    pub claims_term: f64,
    pub confirmation_rate: f64,
    pub meta_citation_term: f64,
    pub index: f64,
}

/// Review quality index of one commentary.
///
/// An error-flag review's flags are its claims (or the review as a whole
/// when it states none). A flag is confirmed when the target is later
/// retracted, or a later child version changes the flagged proposition in
/// a critical delta.
pub fn review_quality(commentary: &ContentHash, state: &LedgerState, config: &GovernanceConfig) -> Result<ReviewQuality> {
    let review = state
        .commentaries
        .get(commentary)
        .ok_or_else(|| Error::argument(format!("{commentary} is not a commentary event")))?;
    let body = &review.body;
    let claims_term = (body.claims.len() as f64 / 5.0).min(1.0);

    let confirmation_rate = if body.modality != CommentaryModality::ErrorFlag {
        1.0
    } else {
        let target = body.target;
        let retracted = state.retractions.get(&target).is_some_and(|r| r.body.tau >= body.tau);
        let mut critical_changes: Vec<&Claim> = Vec::new();
        let mut any_critical = false;
        if let (Some(lineage_id), Some(parent)) = (state.lineage_of_version(&target), state.artifacts.get(&target)) {
            for child in state.lineages[lineage_id].children(&target).filter(|c| c.tau >= body.tau) {
                let Some(next) = state.artifacts.get(&child.version_hash) else {
                    continue;
                };
                if classify_delta(&parent.body, &next.body)? == DeltaClass::Critical {
                    any_critical = true;
                    critical_changes.extend(changed_propositions(&parent.body, &next.body));
                }
            }
        }
        if body.claims.is_empty() {
            if retracted || any_critical {
                1.0
            } else {
                0.0
            }
        } else {
            let confirmed = body
                .claims
                .iter()
                .filter(|f| {
                    retracted
                        || critical_changes.iter().any(|c| {
                            c.subject == f.subject && c.predicate == f.predicate && c.dataset_class == f.dataset_class
                        })
                })
                .count();
            confirmed as f64 / body.claims.len() as f64
        }
    };

    let meta = endorsements_of(commentary, state) as f64;
    let meta_citation_term = (meta / 3.0).min(1.0);
    let w = &config.review_quality;
    Ok(ReviewQuality {
        claims_term,
        confirmation_rate,
        meta_citation_term,
        index: w.claims * claims_term + w.confirmation * confirmation_rate + w.meta_citations * meta_citation_term,
    })
}

/// Scores for one subject, tagged with the config that produced them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreReport {
    pub subject: String,
    pub subject_kind: String,
    pub scores: BTreeMap<String, f64>,
    pub computed_at: i64,
    pub config_hash: ContentHash,
}

pub fn identity_report(identity: &KeyId, t: i64, state: &LedgerState, config: &GovernanceConfig) -> Result<ScoreReport> {
    let counts = reputation_counts(identity, state, config)?;
    let corrections = correction_scores(identity, state, config)?;
    let scores = BTreeMap::from([
        ("reputation".to_string(), reputation_from_counts(&counts, config)),
        ("validated_claims".to_string(), counts.validated_claims as f64),
        ("endorsed_reviews".to_string(), counts.endorsed_reviews as f64),
        ("involuntary_retractions".to_string(), counts.involuntary_retractions as f64),
        ("trust".to_string(), trust(identity, t, state, config)?),
        ("rectification".to_string(), corrections.rectification),
        ("ethics".to_string(), corrections.ethics),
        ("epistemic_influence".to_string(), epistemic_influence(identity, t, state, config)?),
    ]);
    Ok(ScoreReport {
        subject: identity.to_string(),
        subject_kind: "identity".into(),
        scores,
        computed_at: t,
        config_hash: config.config_hash()?,
    })
}

pub fn artifact_report(artifact: &ContentHash, t: i64, state: &LedgerState, config: &GovernanceConfig) -> Result<ScoreReport> {
    require_artifact(artifact, state)?;
    let mut scores = BTreeMap::new();
    scores.insert("influence".to_string(), influence_at(artifact, t, state, config)?);
    scores.insert("influence_gradient".to_string(), influence_gradient(artifact, t, state, config)?);
    match replication_trust(artifact, state) {
        Ok(v) => {
            scores.insert("replication_trust".to_string(), v);
        }
        Err(Error::NoReplications(_)) => {}
        Err(e) => return Err(e),
    }
    let us = use_signal(artifact, t, state, config)?;
    scores.insert("use_signal".to_string(), us.signal);
    scores.insert("interpretive_impact".to_string(), us.interpretive);
    let cv = commentary_vector(artifact, state, config)?;
    scores.insert("commentary_v".to_string(), cv.v as f64);
    scores.insert("commentary_x".to_string(), cv.x as f64);
    scores.insert("commentary_r".to_string(), cv.r as f64);
    scores.insert("commentary_e".to_string(), cv.e as f64);
    let (pos, null) = citation_counts(artifact, state);
    scores.insert("impact_weight".to_string(), impact_weight(pos, null, config)?);
    let nv = novelty(artifact, state, config)?;
    scores.insert("novelty".to_string(), nv.value);
    scores.insert("novelty_entropy".to_string(), nv.entropy);
    scores.insert("novelty_claim_distance".to_string(), nv.claim_distance);
    scores.insert("novelty_latency".to_string(), nv.latency);
    let window_start = t.saturating_sub(config.epoch_length as i64);
    scores.insert("reuse_rate".to_string(), reuse_rate(artifact, window_start, t, state, config)?);
    Ok(ScoreReport {
        subject: artifact.to_string(),
        subject_kind: "artifact".into(),
        scores,
        computed_at: t,
        config_hash: config.config_hash()?,
    })
}

pub fn commentary_report(commentary: &ContentHash, t: i64, state: &LedgerState, config: &GovernanceConfig) -> Result<ScoreReport> {
    let rq = review_quality(commentary, state, config)?;
    let scores = BTreeMap::from([
        ("review_quality".to_string(), rq.index),
        ("rqi_claims".to_string(), rq.claims_term),
        ("rqi_confirmation".to_string(), rq.confirmation_rate),
        ("rqi_meta_citations".to_string(), rq.meta_citation_term),
    ]);
    Ok(ScoreReport {
        subject: commentary.to_string(),
        subject_kind: "commentary".into(),
        scores,
        computed_at: t,
        config_hash: config.config_hash()?,
    })
}

/// Reports for every identity, then every artifact, in key order.
pub fn all_reports(t: i64, state: &LedgerState, config: &GovernanceConfig) -> Result<Vec<ScoreReport>> {
    let mut out = Vec::new();
    for id in state.identities.keys() {
        out.push(identity_report(id, t, state, config)?);
    }
    for a in state.artifacts.keys() {
        out.push(artifact_report(a, t, state, config)?);
    }
    Ok(out)
}

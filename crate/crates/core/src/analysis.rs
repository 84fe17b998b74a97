//! Claims and the detection operators built on them: contradiction,
//! overlap, novelty and version-delta classification.
//!
//! Semantic comparisons run over a pluggable [`Embedder`]. The baseline is a
//! signed hashed bag of tokens, which needs no model and is fully
//! deterministic.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::canonical::finite_opt;
use crate::config::GovernanceConfig;
use crate::error::{Error, Result};
use crate::events::ArtifactRegistration;
use crate::hash::{compute_content_hash, domain_hash, ContentHash};
use crate::state::LedgerState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Positive,
    Negative,
    Zero,
}

impl std::str::FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "positive" | "+" => Ok(Direction::Positive),
            "negative" | "-" => Ok(Direction::Negative),
            "zero" | "0" => Ok(Direction::Zero),
            other => Err(Error::argument(format!("unknown direction `{other}`"))),
        }
    }
}

/// A machine-checkable assertion: `subject` has a `direction` effect on
/// `predicate` under the given dataset and method classes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Claim {
    pub subject: String,
    pub predicate: String,
    pub direction: Direction,
    #[serde(serialize_with = "finite_opt")]
    pub magnitude: Option<f64>,
    pub dataset_class: String,
    pub method_class: String,
}

impl Claim {
    pub fn new(subject: &str, predicate: &str, direction: Direction, dataset_class: &str, method_class: &str) -> Self {
        Self {
            subject: subject.into(),
            predicate: predicate.into(),
            direction,
            magnitude: None,
            dataset_class: dataset_class.into(),
            method_class: method_class.into(),
        }
    }

    pub fn check(&self) -> Result<()> {
        if self.subject.is_empty() || self.predicate.is_empty() {
            return Err(Error::argument("claim subject and predicate must be non-empty"));
        }
        if self.magnitude.is_some_and(|m| !m.is_finite()) {
            return Err(Error::argument("claim magnitude must be finite"));
        }
        Ok(())
    }

    /// Parse `subject:predicate:direction:dataset:method[:magnitude]`.
    pub fn parse(spec: &str) -> Result<Self> {
        let parts: Vec<&str> = spec.split(':').collect();
        if !(5..=6).contains(&parts.len()) {
            return Err(Error::argument(format!(
                "claim `{spec}` must be subject:predicate:direction:dataset:method[:magnitude]"
            )));
        }
        let magnitude = match parts.get(5) {
            Some(m) => Some(
                m.parse::<f64>()
                    .map_err(|e| Error::argument(format!("claim magnitude: {e}")))?,
            ),
            None => None,
        };
        let claim = Claim {
            subject: parts[0].into(),
            predicate: parts[1].into(),
            direction: parts[2].parse()?,
            magnitude,
            dataset_class: parts[3].into(),
            method_class: parts[4].into(),
        };
        claim.check()?;
        Ok(claim)
    }

    fn same_proposition(&self, other: &Claim) -> bool {
        self.subject == other.subject
            && self.predicate == other.predicate
            && self.dataset_class == other.dataset_class
    }
}

/// Fraction of differing fields among subject, predicate, direction,
/// dataset class and method class.
pub fn claim_distance(a: &Claim, b: &Claim) -> f64 {
    let differing = [
        a.subject != b.subject,
        a.predicate != b.predicate,
        a.direction != b.direction,
        a.dataset_class != b.dataset_class,
        a.method_class != b.method_class,
    ]
    .iter()
    .filter(|d| **d)
    .count();
    differing as f64 / 5.0
}

/// Mean, over `claims`, of the distance to the nearest claim in `reference`.
/// 1 when either side is empty.
pub fn claim_set_distance(claims: &[Claim], reference: &[Claim]) -> f64 {
    if claims.is_empty() || reference.is_empty() {
        return 1.0;
    }
    let total: f64 = claims
        .iter()
        .map(|c| {
            reference
                .iter()
                .map(|r| claim_distance(c, r))
                .fold(f64::INFINITY, f64::min)
        })
        .sum();
    total / claims.len() as f64
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContradictionResult {
    pub flag: u8,
    /// Index pairs (into the first and second claim list) that contradict.
    pub witnesses: Vec<(usize, usize)>,
}

/// 1 iff some claim in `a` asserts the opposite direction of a claim in `b`
/// about the same subject, predicate and dataset class.
pub fn contradiction_flag(a: &[Claim], b: &[Claim]) -> ContradictionResult {
    let mut witnesses = Vec::new();
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            let opposite = matches!(
                (x.direction, y.direction),
                (Direction::Positive, Direction::Negative) | (Direction::Negative, Direction::Positive)
            );
            if opposite && x.same_proposition(y) {
                witnesses.push((i, j));
            }
        }
    }
    ContradictionResult {
        flag: u8::from(!witnesses.is_empty()),
        witnesses,
    }
}

/// Lowercased alphanumeric tokens.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// Unit-norm vector, or exactly zero for empty input.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbeddingVector(pub Vec<f64>);

impl EmbeddingVector {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| *x == 0.0)
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

pub trait Embedder {
    fn dim(&self) -> usize;
    fn embed(&self, tokens: &[String]) -> EmbeddingVector;
}

#[derive(Debug, Clone, Copy)]
pub struct HashedBagEmbedder {
    dim: usize,
}

impl HashedBagEmbedder {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::argument(format!("embedding dimension must be >= 2, got {dim}")));
        }
        Ok(Self { dim })
    }
}

const SIGN_DOMAIN: u8 = 0x03;

/// Bucket and sign a token lands on in a `dim`-wide hashed embedding.
pub fn token_slot(token: &str, dim: usize) -> (usize, f64) {
    let h = compute_content_hash(token.as_bytes());
    let bucket = u64::from_le_bytes(h.as_bytes()[..8].try_into().expect("8 bytes")) % dim as u64;
    let s = domain_hash(SIGN_DOMAIN, &[token.as_bytes()]);
    let sign = if s.as_bytes()[0] & 1 == 0 { 1.0 } else { -1.0 };
    (bucket as usize, sign)
}

impl Embedder for HashedBagEmbedder {
    fn dim(&self) -> usize {
        self.dim
    }

    fn embed(&self, tokens: &[String]) -> EmbeddingVector {
        let mut v = vec![0.0; self.dim];
        for t in tokens {
            let (bucket, sign) = token_slot(t, self.dim);
            v[bucket] += sign;
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            for x in &mut v {
                *x /= norm;
            }
        }
        EmbeddingVector(v)
    }
}

pub fn baseline_embed(tokens: &[String], dim: usize) -> Result<EmbeddingVector> {
    Ok(HashedBagEmbedder::new(dim)?.embed(tokens))
}

/// Cosine similarity; 0 when either side is the zero vector.
pub fn similarity(a: &EmbeddingVector, b: &EmbeddingVector) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::argument(format!(
            "dimension mismatch: {} vs {}",
            a.dim(),
            b.dim()
        )));
    }
    let (na, nb) = (a.norm(), b.norm());
    if na == 0.0 || nb == 0.0 {
        return Ok(0.0);
    }
    let dot: f64 = a.0.iter().zip(&b.0).map(|(x, y)| x * y).sum();
    Ok((dot / (na * nb)).clamp(-1.0, 1.0))
}

/// Tokens describing an artifact's subject matter.
pub fn artifact_tokens(reg: &ArtifactRegistration) -> Vec<String> {
    let mut tokens = tokenize(&reg.title);
    for tag in &reg.domain_tags {
        tokens.extend(tokenize(tag));
    }
    for c in &reg.claims {
        tokens.extend(tokenize(&c.subject));
        tokens.extend(tokenize(&c.predicate));
        tokens.extend(tokenize(&c.dataset_class));
    }
    tokens
}

/// Deduplicated, case-folded method tokens.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MethodFingerprint(pub BTreeSet<String>);

impl MethodFingerprint {
    pub fn of(reg: &ArtifactRegistration) -> Self {
        let mut set: BTreeSet<String> = reg
            .claims
            .iter()
            .flat_map(|c| tokenize(&c.method_class))
            .collect();
        if let Some(p) = &reg.protocol_hash {
            set.insert(format!("protocol:{p}"));
        }
        MethodFingerprint(set)
    }

    /// Jaccard index; two empty fingerprints count as identical.
    pub fn jaccard(&self, other: &Self) -> f64 {
        let union = self.0.union(&other.0).count();
        if union == 0 {
            return 1.0;
        }
        self.0.intersection(&other.0).count() as f64 / union as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverlapReport {
    pub semantic_distance: f64,
    pub method_distance: f64,
    pub flagged: bool,
}

fn registered<'a>(state: &'a LedgerState, artifact: &ContentHash) -> Result<&'a ArtifactRegistration> {
    state
        .artifacts
        .get(artifact)
        .map(|r| &r.body)
        .ok_or_else(|| Error::argument(format!("unknown artifact {artifact}")))
}

/// Redundancy flag: both semantic and method distance under threshold.
pub fn overlap_flag(
    a: &ContentHash,
    b: &ContentHash,
    state: &LedgerState,
    config: &GovernanceConfig,
) -> Result<OverlapReport> {
    let (ra, rb) = (registered(state, a)?, registered(state, b)?);
    let embedder = HashedBagEmbedder::new(config.embedding_dim)?;
    let ds = 1.0 - similarity(&embedder.embed(&artifact_tokens(ra)), &embedder.embed(&artifact_tokens(rb)))?;
    let dm = 1.0 - MethodFingerprint::of(ra).jaccard(&MethodFingerprint::of(rb));
    Ok(OverlapReport {
        semantic_distance: ds,
        method_distance: dm,
        flagged: ds < config.overlap.semantic && dm < config.overlap.method,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoveltyScore {
    pub entropy: f64,
    pub claim_distance: f64,
    pub latency: f64,
    pub value: f64,
}

/// Normalized Shannon entropy of the softmax over `sims`. 1 when fewer than
/// two entries, since no distribution can concentrate.
pub fn softmax_entropy(sims: &[f64], temperature: f64) -> f64 {
    if sims.len() < 2 {
        return 1.0;
    }
    let max = sims.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = sims.iter().map(|s| ((s - max) / temperature).exp()).collect();
    let z: f64 = weights.iter().sum();
    let h: f64 = weights
        .iter()
        .map(|w| w / z)
        .filter(|p| *p > 0.0)
        .map(|p| -p * p.ln())
        .sum();
    h / (sims.len() as f64).ln()
}

/// Produces a condensed summary of an artifact's content. No implementation
/// ships: novelty scoring runs on title and claim tokens, and a provider
/// plugged in here would feed its summary through an [`Embedder`] instead.
pub trait Summarizer {
    fn summarize(&self, artifact: &ArtifactRegistration, content: &[u8]) -> Result<String>;
}

/// Composite novelty of an artifact against everything registered before it.
pub fn novelty(artifact: &ContentHash, state: &LedgerState, config: &GovernanceConfig) -> Result<NoveltyScore> {
    let entry = state
        .artifacts
        .get(artifact)
        .ok_or_else(|| Error::argument(format!("unknown artifact {artifact}")))?;
    let reg = &entry.body;
    let embedder = HashedBagEmbedder::new(config.embedding_dim)?;
    let own = embedder.embed(&artifact_tokens(reg));

    let mut priors: Vec<_> = state.artifacts.values().filter(|a| a.seq < entry.seq).collect();
    priors.sort_by_key(|a| a.seq);

    let sims = priors
        .iter()
        .map(|p| similarity(&own, &embedder.embed(&artifact_tokens(&p.body))))
        .collect::<Result<Vec<_>>>()?;
    let entropy = softmax_entropy(&sims, config.novelty.temperature);

    let claim_distance = reg
        .claims
        .iter()
        .flat_map(|c| {
            priors
                .iter()
                .flat_map(|p| p.body.claims.iter())
                .map(move |q| self::claim_distance(c, q))
        })
        .fold(None, |acc: Option<f64>, d| Some(acc.map_or(d, |a| a.min(d))))
        .unwrap_or(1.0);

    let delay = (reg.tau - reg.created_at).max(0) as f64;
    let latency = 1.0 - (delay / config.novelty.latency_horizon).min(1.0);

    let n = &config.novelty;
    Ok(NoveltyScore {
        entropy,
        claim_distance,
        latency,
        value: n.entropy * entropy + n.claim_distance * claim_distance + n.latency * latency,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeltaClass {
    Minor,
    Major,
    Critical,
}

type PropositionKey<'a> = (&'a str, &'a str, &'a str);

fn by_proposition(claims: &[Claim]) -> BTreeMap<PropositionKey<'_>, Vec<&Claim>> {
    let mut map: BTreeMap<PropositionKey<'_>, Vec<&Claim>> = BTreeMap::new();
    for c in claims {
        map.entry((&c.subject, &c.predicate, &c.dataset_class)).or_default().push(c);
    }
    map
}

fn outcomes(claims: &[&Claim]) -> Vec<(Direction, Option<u64>)> {
    let mut v: Vec<_> = claims.iter().map(|c| (c.direction, c.magnitude.map(f64::to_bits))).collect();
    v.sort();
    v
}

fn methods<'a>(claims: &[&'a Claim]) -> Vec<&'a str> {
    let mut v: Vec<_> = claims.iter().map(|c| c.method_class.as_str()).collect();
    v.sort();
    v
}

/// Classify the change between two versions of one lineage.
///
/// Critical: a claim was removed or its direction or magnitude changed.
/// Major: data, protocol or method class changed. Otherwise minor.
pub fn classify_delta(prev: &ArtifactRegistration, next: &ArtifactRegistration) -> Result<DeltaClass> {
    if prev.lineage_id != next.lineage_id {
        return Err(Error::argument("versions belong to different lineages"));
    }
    let before = by_proposition(&prev.claims);
    let after = by_proposition(&next.claims);
    let mut method_changed = false;
    for (key, old) in &before {
        let Some(new) = after.get(key) else {
            return Ok(DeltaClass::Critical);
        };
        let new_outcomes = outcomes(new);
        if outcomes(old).iter().any(|o| !new_outcomes.contains(o)) {
            return Ok(DeltaClass::Critical);
        }
        method_changed |= methods(old) != methods(new);
    }
    if method_changed || prev.protocol_hash != next.protocol_hash || prev.data_hash != next.data_hash {
        return Ok(DeltaClass::Major);
    }
    Ok(DeltaClass::Minor)
}

/// Claims whose proposition was removed or whose outcome changed between
/// `prev` and `next`.
pub fn changed_propositions<'a>(prev: &'a ArtifactRegistration, next: &ArtifactRegistration) -> Vec<&'a Claim> {
    let after = by_proposition(&next.claims);
    prev.claims
        .iter()
        .filter(|c| match after.get(&(c.subject.as_str(), c.predicate.as_str(), c.dataset_class.as_str())) {
            None => true,
            Some(new) => !outcomes(new).contains(&(c.direction, c.magnitude.map(f64::to_bits))),
        })
        .collect()
}

//! Governance configuration: every tunable weight and threshold in one file.
//!
//! The config is hashed into every score report so any report can be
//! reproduced from the ledger file plus the config file.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::canonical::{canonical_encode, finite};
use crate::error::{Error, Result, Violation};
use crate::hash::{compute_content_hash, ContentHash};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReputationWeights {
    #[serde(serialize_with = "finite")]
    pub alpha: f64,
    #[serde(serialize_with = "finite")]
    pub beta: f64,
    #[serde(serialize_with = "finite")]
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrustWeights {
    #[serde(serialize_with = "finite")]
    pub endorsement: f64,
    #[serde(serialize_with = "finite")]
    pub flagged_error: f64,
    #[serde(serialize_with = "finite")]
    pub replication_support: f64,
}

/// Weights on positive and null citation counts; `beta >= alpha > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImpactWeights {
    #[serde(serialize_with = "finite")]
    pub alpha: f64,
    #[serde(serialize_with = "finite")]
    pub beta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OverlapThresholds {
    #[serde(serialize_with = "finite")]
    pub semantic: f64,
    #[serde(serialize_with = "finite")]
    pub method: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoveltyWeights {
    #[serde(serialize_with = "finite")]
    pub entropy: f64,
    #[serde(serialize_with = "finite")]
    pub claim_distance: f64,
    #[serde(serialize_with = "finite")]
    pub latency: f64,
    /// Registration delay (seconds) at which the latency term reaches zero.
    #[serde(serialize_with = "finite")]
    pub latency_horizon: f64,
    #[serde(serialize_with = "finite")]
    pub temperature: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EthicsWeights {
    #[serde(serialize_with = "finite")]
    pub proactive: f64,
    #[serde(serialize_with = "finite")]
    pub responsive: f64,
}

/// Review quality index weights; must sum to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReviewQualityWeights {
    #[serde(serialize_with = "finite")]
    pub claims: f64,
    #[serde(serialize_with = "finite")]
    pub confirmation: f64,
    #[serde(serialize_with = "finite")]
    pub meta_citations: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoleWeights {
    #[serde(serialize_with = "finite")]
    pub author: f64,
    #[serde(serialize_with = "finite")]
    pub corrector: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Thresholds {
    /// Minimum replication congruence counted as confirming.
    #[serde(serialize_with = "finite")]
    pub congruence: f64,
    /// Minimum null-result confidence counted toward dampening.
    #[serde(serialize_with = "finite")]
    pub null_confidence: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GovernanceConfig {
    pub version: u32,
    pub reputation: ReputationWeights,
    pub trust: TrustWeights,
    /// Multiplicative prior decay per confident null result, in (0, 1).
    #[serde(serialize_with = "finite")]
    pub dampening: f64,
    pub impact: ImpactWeights,
    pub overlap: OverlapThresholds,
    pub novelty: NoveltyWeights,
    pub ethics: EthicsWeights,
    pub review_quality: ReviewQualityWeights,
    pub roles: RoleWeights,
    pub thresholds: Thresholds,
    /// Per-modality weight; modalities absent from the table weigh 1.
    pub modality_weights: BTreeMap<String, f64>,
    /// Influence decay in (0, 1).
    #[serde(serialize_with = "finite")]
    pub influence_decay: f64,
    /// Epoch length in seconds.
    pub epoch_length: u64,
    pub embedding_dim: usize,
}

pub const MODALITY_NAMES: &[&str] = &[
    // citation
    "foundational",
    "critique",
    "replication",
    "methodological-reuse",
    "extension",
    "contradiction",
    // commentary
    "criticism",
    "endorsement",
    "reinterpretation",
    "derivation",
    "error-flag",
    "replication-note",
    // method transfer
    "transfer",
];

impl Default for GovernanceConfig {
    fn default() -> Self {
        Self {
            version: 1,
            reputation: ReputationWeights {
                alpha: 1.0,
                beta: 1.0,
                gamma: 1.0,
            },
            trust: TrustWeights {
                endorsement: 0.5,
                flagged_error: 1.0,
                replication_support: 0.5,
            },
            dampening: 0.5,
            impact: ImpactWeights {
                alpha: 1.0,
                beta: 2.0,
            },
            overlap: OverlapThresholds {
                semantic: 0.1,
                method: 0.2,
            },
            novelty: NoveltyWeights {
                entropy: 1.0,
                claim_distance: 1.0,
                latency: 1.0,
                latency_horizon: 31_536_000.0,
                temperature: 1.0,
            },
            ethics: EthicsWeights {
                proactive: 1.0,
                responsive: 0.5,
            },
            review_quality: ReviewQualityWeights {
                claims: 1.0 / 3.0,
                confirmation: 1.0 / 3.0,
                meta_citations: 1.0 / 3.0,
            },
            roles: RoleWeights {
                author: 1.0,
                corrector: 0.5,
            },
            thresholds: Thresholds {
                congruence: 0.5,
                null_confidence: 0.5,
            },
            modality_weights: MODALITY_NAMES.iter().map(|m| (m.to_string(), 1.0)).collect(),
            influence_decay: 0.5,
            epoch_length: 86_400,
            embedding_dim: 64,
        }
    }
}

impl GovernanceConfig {
    pub fn modality_weight(&self, modality: &str) -> f64 {
        self.modality_weights.get(modality).copied().unwrap_or(1.0)
    }

    /// Every invariant violation, empty when the config is usable.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let named: [(&str, f64); 24] = [
            ("reputation.alpha", self.reputation.alpha),
            ("reputation.beta", self.reputation.beta),
            ("reputation.gamma", self.reputation.gamma),
            ("trust.endorsement", self.trust.endorsement),
            ("trust.flagged_error", self.trust.flagged_error),
            ("trust.replication_support", self.trust.replication_support),
            ("dampening", self.dampening),
            ("impact.alpha", self.impact.alpha),
            ("impact.beta", self.impact.beta),
            ("overlap.semantic", self.overlap.semantic),
            ("overlap.method", self.overlap.method),
            ("novelty.entropy", self.novelty.entropy),
            ("novelty.claim_distance", self.novelty.claim_distance),
            ("novelty.latency", self.novelty.latency),
            ("novelty.latency_horizon", self.novelty.latency_horizon),
            ("novelty.temperature", self.novelty.temperature),
            ("ethics.proactive", self.ethics.proactive),
            ("ethics.responsive", self.ethics.responsive),
            ("review_quality.claims", self.review_quality.claims),
            ("review_quality.confirmation", self.review_quality.confirmation),
            ("review_quality.meta_citations", self.review_quality.meta_citations),
            ("roles.author", self.roles.author),
            ("roles.corrector", self.roles.corrector),
            ("influence_decay", self.influence_decay),
        ];
        let thresholds = [
            ("thresholds.congruence", self.thresholds.congruence),
            ("thresholds.null_confidence", self.thresholds.null_confidence),
        ];
        let modalities = self
            .modality_weights
            .iter()
            .map(|(k, v)| (k.as_str(), *v));
        for (name, v) in named.into_iter().chain(thresholds).chain(modalities) {
            if !v.is_finite() {
                out.push(Violation::new("non-finite weight", name));
            } else if v < 0.0 {
                out.push(Violation::new("negative weight", name));
            }
        }
        if !(self.impact.alpha > 0.0) {
            out.push(Violation::new(
                "impact weight positivity",
                format!("impact.alpha = {} must be > 0", self.impact.alpha),
            ));
        }
        if !(self.impact.beta >= self.impact.alpha) {
            out.push(Violation::new(
                "impact weight ordering",
                format!(
                    "impact.beta = {} must be >= impact.alpha = {}",
                    self.impact.beta, self.impact.alpha
                ),
            ));
        }
        if !(self.dampening > 0.0 && self.dampening < 1.0) {
            out.push(Violation::new(
                "dampening range",
                format!("dampening = {} must lie in (0, 1)", self.dampening),
            ));
        }
        if !(self.influence_decay > 0.0 && self.influence_decay < 1.0) {
            out.push(Violation::new(
                "influence decay range",
                format!("influence_decay = {} must lie in (0, 1)", self.influence_decay),
            ));
        }
        let rq = &self.review_quality;
        let sum = rq.claims + rq.confirmation + rq.meta_citations;
        if (sum - 1.0).abs() > 1e-9 {
            out.push(Violation::new(
                "review quality weights sum",
                format!("weights sum to {sum}, expected 1"),
            ));
        }
        for (name, v) in thresholds {
            if v > 1.0 {
                out.push(Violation::new("threshold range", name));
            }
        }
        if !(self.novelty.latency_horizon > 0.0) {
            out.push(Violation::new("latency horizon", "must be > 0"));
        }
        if !(self.novelty.temperature > 0.0) {
            out.push(Violation::new("softmax temperature", "must be > 0"));
        }
        if self.epoch_length == 0 {
            out.push(Violation::new("epoch length", "must be > 0"));
        }
        if self.embedding_dim < 2 {
            out.push(Violation::new("embedding dimension", "must be >= 2"));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(v))
        }
    }

    /// Content hash of the canonical encoding.
    pub fn config_hash(&self) -> Result<ContentHash> {
        Ok(compute_content_hash(&canonical_encode(self)?))
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        let cfg: GovernanceConfig =
            serde_json::from_slice(bytes).map_err(|e| Error::Encoding(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read(path)?)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

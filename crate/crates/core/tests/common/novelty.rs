//! Small corpora for the entropy convention checks.

use scriptorium_core::analysis::{tokenize, Claim};
use scriptorium_core::{compute_content_hash, ContentHash, GovernanceConfig, Ledger};

use super::gen::{identity, key, registration};
use super::sha256::sha256;

pub const X_TITLE: &str = "sleep memory";
pub const X_CLAIM: &str = "sleep:memory:positive:adult:rct";
pub const FAR: [(&str, &str); 2] = [
    ("quasar redshift", "quasar:redshift:negative:galaxy:survey"),
    ("protein folding", "protein:folding:negative:yeast:assay"),
];

pub fn wide_config() -> GovernanceConfig {
    GovernanceConfig {
        embedding_dim: 4096,
        ..GovernanceConfig::default()
    }
}

/// Ledger with two priors followed by X; returns X's hash.
pub fn corpus(priors: &[(&str, &str)], cfg: &GovernanceConfig) -> (Ledger, ContentHash) {
    let sk = key(77);
    let mut ledger = Ledger::new(cfg.clone());
    ledger.append_event(identity(&sk, 0), &sk).unwrap();
    for (i, (title, claim)) in priors.iter().enumerate() {
        let body = registration(&format!("prior {i}"), title, vec![Claim::parse(claim).unwrap()], None, 10 + i as i64);
        ledger.append_event(body, &sk).unwrap();
    }
    ledger
        .append_event(registration("x", X_TITLE, vec![Claim::parse(X_CLAIM).unwrap()], None, 100), &sk)
        .unwrap();
    (ledger, compute_content_hash(b"x"))
}

pub fn buckets(text: &str, dims: &[&str]) -> Vec<u64> {
    tokenize(text)
        .iter()
        .chain(dims.iter().map(|s| s.to_string()).collect::<Vec<_>>().iter())
        .map(|t| u64::from_le_bytes(sha256(t.as_bytes())[..8].try_into().unwrap()) % 4096)
        .collect()
}

//! Content-addressed, append-only ledger for scholarly events.
//!
//! Artifacts, commentary, citations, versions, retractions, null results,
//! replications and method transfers are recorded as signed, hash-chained
//! envelopes. The projected [`state::LedgerState`] feeds graph views
//! ([`graphs`]), detection operators ([`analysis`]) and closed-form scores
//! ([`scoring`]), all parameterized by a [`config::GovernanceConfig`].

pub mod analysis;
pub mod canonical;
pub mod config;
pub mod error;
pub mod events;
pub mod graphs;
pub mod hash;
pub mod identity;
pub mod ledger;
pub mod merkle;
pub mod repo;
pub mod scoring;
pub mod simulate;
pub mod state;

pub use config::GovernanceConfig;
pub use error::{Error, Result, Violation};
pub use hash::{compute_content_hash, ContentHash};
pub use identity::{generate_identity, KeyId, SecretKey};
pub use ledger::{verify_chain, Ledger, LedgerEvent, VerificationReport};
pub use state::LedgerState;

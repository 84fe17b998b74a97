//! Graph views derived from ledger state: the typed citation graph, version
//! DAGs, commentary traces and reuse curves.
//!
//! Every ordering here is total: ties on τ break by event id (or version
//! hash, for version nodes).

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::config::GovernanceConfig;
use crate::error::{Error, Result};
use crate::events::{CitationModality, CommentaryModality, Modification};
use crate::hash::ContentHash;
use crate::identity::KeyId;
use crate::state::LedgerState;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CitationEdge {
    pub citing: ContentHash,
    pub cited: ContentHash,
    pub modality: CitationModality,
    pub polarity: f64,
    pub integration_depth: f64,
    pub tau: i64,
    pub event_id: ContentHash,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CitationGraph {
    pub nodes: BTreeSet<ContentHash>,
    /// Sorted by (τ, event id).
    pub edges: Vec<CitationEdge>,
}

impl CitationGraph {
    pub fn from_state(state: &LedgerState) -> Self {
        Self::from_state_until(state, i64::MAX)
    }

    /// Graph restricted to citations with τ ≤ `t`.
    pub fn from_state_until(state: &LedgerState, t: i64) -> Self {
        let mut edges: Vec<CitationEdge> = state
            .citations
            .iter()
            .filter(|c| c.body.tau <= t)
            .map(|c| CitationEdge {
                citing: c.body.citing,
                cited: c.body.cited,
                modality: c.body.modality,
                polarity: c.body.polarity,
                integration_depth: c.body.integration_depth,
                tau: c.body.tau,
                event_id: c.event_id,
            })
            .collect();
        edges.sort_by_key(|e| (e.tau, e.event_id));
        Self {
            nodes: state.artifacts.keys().copied().collect(),
            edges,
        }
    }

    /// Build directly from edges; nodes are the edge endpoints plus `extra`.
    pub fn from_edges(edges: Vec<CitationEdge>, extra: impl IntoIterator<Item = ContentHash>) -> Self {
        let mut nodes: BTreeSet<ContentHash> = extra.into_iter().collect();
        for e in &edges {
            nodes.insert(e.citing);
            nodes.insert(e.cited);
        }
        let mut edges = edges;
        edges.sort_by_key(|e| (e.tau, e.event_id));
        Self { nodes, edges }
    }

    pub fn incoming<'a>(&'a self, cited: &'a ContentHash) -> impl Iterator<Item = &'a CitationEdge> + 'a {
        self.edges.iter().filter(move |e| e.cited == *cited)
    }

    /// Tab-separated edge list: citing, cited, modality, polarity, depth, τ.
    pub fn to_edge_list(&self) -> String {
        self.edges
            .iter()
            .map(|e| {
                format!(
                    "{}\t{}\t{}\t{}\t{}\t{}\n",
                    e.citing, e.cited, e.modality, e.polarity, e.integration_depth, e.tau
                )
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Propagation {
    Direct,
    Transitive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffectedArtifact {
    pub artifact: ContentHash,
    pub relation: Propagation,
    /// Reached through a citation made after the retraction.
    pub post_retraction_citation: bool,
}

/// Every artifact that cites `retracted`, directly or through a chain of
/// citations. Each is reported once, sorted by hash.
pub fn retraction_affected_set(
    graph: &CitationGraph,
    retracted: &ContentHash,
    retracted_at: i64,
) -> Result<Vec<AffectedArtifact>> {
    if !graph.nodes.contains(retracted) {
        return Err(Error::argument(format!("unknown artifact {retracted}")));
    }
    let mut citers: BTreeMap<ContentHash, Vec<&CitationEdge>> = BTreeMap::new();
    for e in &graph.edges {
        citers.entry(e.cited).or_default().push(e);
    }

    let mut found: BTreeMap<ContentHash, AffectedArtifact> = BTreeMap::new();
    let mut queue = VecDeque::from([*retracted]);
    while let Some(node) = queue.pop_front() {
        for e in citers.get(&node).into_iter().flatten() {
            if e.citing == *retracted {
                continue;
            }
            let relation = if node == *retracted {
                Propagation::Direct
            } else {
                Propagation::Transitive
            };
            let late = e.tau > retracted_at;
            match found.get_mut(&e.citing) {
                Some(a) => {
                    a.relation = a.relation.min(relation);
                    a.post_retraction_citation |= late;
                }
                None => {
                    found.insert(
                        e.citing,
                        AffectedArtifact {
                            artifact: e.citing,
                            relation,
                            post_retraction_citation: late,
                        },
                    );
                    queue.push_back(e.citing);
                }
            }
        }
    }
    Ok(found.into_values().collect())
}

/// Latest non-retracted version of a lineage at time `t`; ties on τ go to
/// the larger seq. A retraction only counts once its own τ ≤ `t`.
pub fn live_version(lineage_id: &ContentHash, t: i64, state: &LedgerState) -> Result<ContentHash> {
    let lineage = state
        .lineages
        .get(lineage_id)
        .ok_or_else(|| Error::argument(format!("unknown lineage {lineage_id}")))?;
    lineage
        .versions
        .iter()
        .filter(|v| v.tau <= t && !state.is_retracted_at(&v.version_hash, t))
        .max_by_key(|v| (v.tau, v.seq))
        .map(|v| v.version_hash)
        .ok_or_else(|| Error::NoLiveVersion(lineage_id.to_string()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VersionDagNode {
    pub version_hash: ContentHash,
    pub tau: i64,
    pub modification: Option<Modification>,
    pub retracted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VersionDag {
    pub lineage_id: ContentHash,
    pub nodes: Vec<VersionDagNode>,
    /// (parent, child) revise edges.
    pub edges: Vec<(ContentHash, ContentHash)>,
}

pub fn version_dag(lineage_id: &ContentHash, state: &LedgerState) -> Result<VersionDag> {
    let lineage = state
        .lineages
        .get(lineage_id)
        .ok_or_else(|| Error::argument(format!("unknown lineage {lineage_id}")))?;
    Ok(VersionDag {
        lineage_id: *lineage_id,
        nodes: lineage
            .versions
            .iter()
            .map(|v| VersionDagNode {
                version_hash: v.version_hash,
                tau: v.tau,
                modification: v.modification,
                retracted: state.retractions.contains_key(&v.version_hash),
            })
            .collect(),
        edges: lineage
            .versions
            .iter()
            .filter_map(|v| v.parent.map(|p| (p, v.version_hash)))
            .collect(),
    })
}

/// Every root-to-leaf path of a lineage's version DAG. Retracted versions
/// stay listed; children are visited in (τ, hash) order.
pub fn fork_branches(lineage_id: &ContentHash, state: &LedgerState) -> Result<Vec<Vec<ContentHash>>> {
    let lineage = state
        .lineages
        .get(lineage_id)
        .ok_or_else(|| Error::argument(format!("unknown lineage {lineage_id}")))?;
    let mut branches = Vec::new();
    let mut stack = vec![vec![lineage.root().version_hash]];
    while let Some(path) = stack.pop() {
        let tip = *path.last().expect("paths are non-empty");
        let mut children: Vec<_> = lineage.children(&tip).collect();
        if children.is_empty() {
            branches.push(path);
            continue;
        }
        children.sort_by_key(|c| (c.tau, c.version_hash));
        // Reverse so the earliest child is explored first.
        for c in children.into_iter().rev() {
            let mut next = path.clone();
            next.push(c.version_hash);
            stack.push(next);
        }
    }
    Ok(branches)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub event_id: ContentHash,
    pub tau: i64,
    pub signer: KeyId,
    pub modality: CommentaryModality,
    pub meta_depth: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommentaryTrace {
    pub target: ContentHash,
    pub entries: Vec<TraceEntry>,
}

/// All commentary resolving to `target`, meta-commentary included, ordered
/// by (τ, event id). Direct commentary has depth 1.
pub fn commentary_trace(target: &ContentHash, state: &LedgerState) -> Result<CommentaryTrace> {
    if !state.artifacts.contains_key(target) && !state.commentaries.contains_key(target) {
        return Err(Error::argument(format!("unknown target {target}")));
    }
    let mut entries = Vec::new();
    for (id, c) in &state.commentaries {
        let mut depth = 1u32;
        let mut cur = c.body.target;
        let hit = loop {
            if cur == *target {
                break true;
            }
            match state.commentaries.get(&cur) {
                Some(parent) => {
                    cur = parent.body.target;
                    depth += 1;
                }
                None => break false,
            }
        };
        if hit {
            entries.push(TraceEntry {
                event_id: *id,
                tau: c.body.tau,
                signer: c.signer,
                modality: c.body.modality,
                meta_depth: depth,
            });
        }
    }
    entries.sort_by_key(|e| (e.tau, e.event_id));
    Ok(CommentaryTrace {
        target: *target,
        entries,
    })
}

/// Distinct reusers of `artifact` up to time `t`: artifacts citing it with a
/// reuse modality, plus each method-transfer event sourced at it.
pub fn reuse_set(artifact: &ContentHash, t: i64, state: &LedgerState) -> BTreeSet<ContentHash> {
    let citing = state
        .citations
        .iter()
        .filter(|c| c.body.cited == *artifact && c.body.tau <= t && c.body.modality.is_reuse())
        .map(|c| c.body.citing);
    let transfers = state
        .transfers
        .iter()
        .filter(|x| x.body.source == *artifact && x.body.tau <= t)
        .map(|x| x.event_id);
    citing.chain(transfers).collect()
}

/// Growth of the reuse set per epoch over `(t0, t1]`.
pub fn reuse_rate(
    artifact: &ContentHash,
    t0: i64,
    t1: i64,
    state: &LedgerState,
    config: &GovernanceConfig,
) -> Result<f64> {
    if t1 <= t0 {
        return Err(Error::argument(format!("reuse window requires t1 > t0, got {t0}..{t1}")));
    }
    if !state.artifacts.contains_key(artifact) {
        return Err(Error::argument(format!("unknown artifact {artifact}")));
    }
    let grown = reuse_set(artifact, t1, state).len() as f64 - reuse_set(artifact, t0, state).len() as f64;
    let epochs = (t1 - t0) as f64 / config.epoch_length as f64;
    Ok(grown / epochs)
}

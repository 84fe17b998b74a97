//! Brute-force reference implementations over plain data.

use std::collections::BTreeSet;

/// Nodes that reach `target` by following citing → cited edges, found via a
/// dense reachability matrix. Returns (node, is_direct) sorted by node.
pub fn citers_closure(n: usize, edges: &[(usize, usize)], target: usize) -> Vec<(usize, bool)> {
    let mut reach = vec![vec![false; n]; n];
    for &(a, b) in edges {
        reach[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    let direct: BTreeSet<usize> = edges.iter().filter(|e| e.1 == target).map(|e| e.0).collect();
    (0..n)
        .filter(|&i| i != target && reach[i][target])
        .map(|i| (i, direct.contains(&i)))
        .collect()
}

/// One version for the live-version scan.
#[derive(Debug, Clone, Copy)]
pub struct ScanVersion {
    pub tau: i64,
    pub seq: u64,
    /// τ of the retraction, if the version was ever retracted.
    pub retracted_at: Option<i64>,
}

/// Index of the live version at `t` by a single pass over all versions.
pub fn live_scan(versions: &[ScanVersion], t: i64) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, v) in versions.iter().enumerate() {
        if v.tau > t {
            continue;
        }
        if matches!(v.retracted_at, Some(r) if r <= t) {
            continue;
        }
        best = match best {
            Some(b) if (versions[b].tau, versions[b].seq) >= (v.tau, v.seq) => Some(b),
            _ => Some(i),
        };
    }
    best
}

/// Dense scalar iteration of the influence recursion, a fixed 200 rounds.
/// `w[i][j]` is the summed base weight of citations from i into j.
pub fn dense_influence(w: &[Vec<f64>], decay: f64) -> Vec<f64> {
    let n = w.len();
    let mut x = vec![0.0; n];
    for _ in 0..200 {
        let mut max = 0.0f64;
        for v in &x {
            if *v > max {
                max = *v;
            }
        }
        let mut next = vec![0.0; n];
        for j in 0..n {
            let mut s = 0.0;
            for i in 0..n {
                if w[i][j] != 0.0 {
                    let norm = if max > 0.0 { x[i] / max } else { 0.0 };
                    s += w[i][j] * (1.0 + decay * norm);
                }
            }
            next[j] = s;
        }
        x = next;
    }
    x
}

/// A claim from the small enumerated space used by the truth-table oracle:
/// (subject, predicate, direction, dataset), direction 0 = +, 1 = −, 2 = 0.
pub type SmallClaim = (u8, u8, u8, u8);

pub fn small_claim_space() -> Vec<SmallClaim> {
    let mut out = Vec::new();
    for s in 0..2 {
        for p in 0..2 {
            for d in 0..3 {
                for ds in 0..2 {
                    out.push((s, p, d, ds));
                }
            }
        }
    }
    out
}

/// Truth table: contradiction iff same subject, predicate and dataset with
/// one positive and one negative direction.
pub fn contradicts(a: SmallClaim, b: SmallClaim) -> bool {
    let opposite = matches!((a.2, b.2), (0, 1) | (1, 0));
    a.0 == b.0 && a.1 == b.1 && a.3 == b.3 && opposite
}

//! A scripted end-to-end run of the command line against a fresh directory.

use std::path::Path;

use scriptorium::{run_command, CommandResult};
use scriptorium_core::compute_content_hash;
use serde_json::Value;

pub fn cli(dir: &Path, at: i64, args: &[&str]) -> CommandResult {
    let mut argv = vec!["scriptorium".to_string(), "--dir".into(), dir.display().to_string(), "--at".into(), at.to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    run_command(argv)
}

fn ok(dir: &Path, at: i64, args: &[&str]) -> (String, Value) {
    let r = cli(dir, at, args);
    assert_eq!(r.exit_code, 0, "{args:?} failed: {}{}", r.stdout, r.stderr);
    let v = serde_json::from_str(&r.stdout).unwrap();
    (r.stdout, v)
}

fn hash_of(content: &str) -> String {
    compute_content_hash(content.as_bytes()).to_string()
}

/// Everything a run produces that must be reproducible: command outputs,
/// the ledger files and the exported reports.
pub struct PipelineOutput {
    pub stdout: Vec<String>,
    pub files: Vec<(String, Vec<u8>)>,
}

pub fn run_pipeline(dir: &Path) -> PipelineOutput {
    let mut out = Vec::new();
    let mut step = |at: i64, args: &[&str]| {
        let (s, v) = ok(dir, at, args);
        out.push(s);
        v
    };
    step(0, &["init"]);
    step(10, &["keygen", "--name", "alice", "--seed", "alice seed"]);
    step(11, &["keygen", "--name", "bob", "--seed", "bob seed"]);
    step(12, &["keygen", "--name", "carol", "--seed", "carol seed"]);

    let (a, b, a2) = (hash_of("paper A"), hash_of("paper B"), hash_of("paper A, revised"));
    step(100, &["register", "--key", "alice", "--content", "paper A", "--title", "Sleep and memory",
        "--tag", "neuro", "--claim", "sleep:memory:positive:adult:rct"]);
    step(101, &["register", "--key", "bob", "--content", "paper B", "--title", "Sleep and memory revisited",
        "--claim", "sleep:memory:negative:adult:rct"]);
    let comment = step(200, &["comment", "--key", "carol", "--target", &a, "--modality", "criticism",
        "--claim", "sleep:memory:zero:adult:rct", "--text", "sample too small"]);
    let comment_id = comment["event_id"].as_str().unwrap().to_string();
    step(201, &["comment", "--key", "bob", "--target", &comment_id, "--modality", "endorsement", "--text", "agreed"]);
    step(300, &["cite", "--key", "bob", "--citing", &b, "--cited", &a, "--modality", "contradiction",
        "--polarity", "-1"]);
    step(400, &["register", "--key", "alice", "--content", "paper A, revised", "--title", "Sleep and memory",
        "--lineage", &a, "--claim", "sleep:memory:positive:adult:rct"]);
    step(401, &["version", "--key", "alice", "--lineage", &a, "--version", &a2, "--parent", &a,
        "--modification", "corrigendum"]);
    step(500, &["retract", "--key", "bob", "--target", &b, "--reason", "methodological-flaw", "--voluntary"]);
    step(600, &["null", "--key", "carol", "--hypothesis", "h1", "--dataset", "adult", "--method", "rct",
        "--effect", "0.01", "--confidence", "0.9"]);
    step(700, &["replicate", "--key", "carol", "--target", &a2, "--variant", "cohort-2", "--congruence", "0.8"]);
    step(800, &["anchor"]);
    step(900, &["verify"]);
    step(1000, &["score", "--all"]);
    step(1000, &["score", "--artifact", &a]);
    step(1000, &["analyze", "contradiction", "--a", &a, "--b", &b]);

    let mut files = Vec::new();
    for (kind, name, extra) in [("scores", "scores.json", None), ("graph", "graph.tsv", None), ("trace", "trace.jsonl", Some(&a))] {
        let path = dir.join(name);
        let path_s = path.display().to_string();
        let mut args = vec!["export", "--kind", kind, "--out", &path_s];
        if let Some(t) = extra {
            args.extend(["--target", t.as_str()]);
        }
        step(1000, &args);
        files.push((name.to_string(), std::fs::read(&path).unwrap()));
    }
    for name in ["chain.jsonl", "anchors.jsonl", "config.json", "ledger.json"] {
        files.push((name.to_string(), std::fs::read(dir.join(name)).unwrap()));
    }
    // Export summaries echo the output path, which differs between runs.
    let dir_s = dir.display().to_string();
    let stdout = out.into_iter().map(|s| s.replace(&dir_s, "<dir>")).collect();
    PipelineOutput { stdout, files }
}

//! The `scriptorium` command line.
//!
//! [`run_command`] is the whole tool as a pure function of argv (plus the
//! ledger directory it touches), so tests drive it in-process. Machine
//! output goes to stdout as canonical JSON; diagnostics go to stderr.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use scriptorium_core::analysis::{self, Claim};
use scriptorium_core::canonical::canonical_encode;
use scriptorium_core::events::{
    ArtifactRegistration, AttestationBinding, CitationEvent, CitationModality, CommentaryEvent,
    CommentaryModality, EventBody, IdentityRegistration, Modification, NullResultEvent, ReplicationEvent,
    RetractionEvent, RetractionReason, TransferUseEvent, VersionEvent,
};
use scriptorium_core::graphs::{self, CitationGraph};
use scriptorium_core::identity::{generate_identity, issue_attestation, AttestationKind, KeyId, SecretKey};
use scriptorium_core::ledger::{verify_jsonl, Ledger, LedgerEvent, VerificationReport};
use scriptorium_core::merkle::{anchors_from_jsonl, verify_anchors};
use scriptorium_core::repo::{self, Repository};
use scriptorium_core::simulate::{run_scenario, ScenarioConfig};
use scriptorium_core::{compute_content_hash, scoring, ContentHash, Error, GovernanceConfig, Result};

/// Environment variable naming the default ledger directory.
pub const DIR_ENV: &str = "SCRIPTORIUM_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandResult {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandResult {
    fn ok(stdout: String) -> Self {
        Self {
            exit_code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "scriptorium", version, about = "Signed, hash-chained ledger of scholarly events")]
struct Cli {
    /// Ledger directory.
    #[arg(long, global = true, env = DIR_ENV, default_value = ".")]
    dir: PathBuf,

    /// Event time in unix seconds; defaults to the wall clock.
    #[arg(long, global = true, allow_negative_numbers = true)]
    at: Option<i64>,

    /// Where key files live; defaults to <dir>/keys.
    #[arg(long, global = true)]
    keys_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Create a ledger directory.
    Init {
        /// Governance config JSON; defaults are used when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Generate a keypair and register it on the ledger.
    Keygen {
        #[arg(long)]
        name: String,
        /// Derive the key deterministically from this text.
        #[arg(long)]
        seed: Option<String>,
    },
    /// Bind an attestation issued by --key to another identity.
    Attest(AttestArgs),
    /// Register an artifact.
    Register(RegisterArgs),
    /// Comment on an artifact or on another commentary.
    Comment(CommentArgs),
    /// Record a typed citation.
    Cite(CiteArgs),
    /// Record a new version of a lineage.
    Version(VersionArgs),
    /// Retract a version.
    Retract(RetractArgs),
    /// Record a null result.
    Null(NullArgs),
    /// Record a replication attempt.
    Replicate(ReplicateArgs),
    /// Record reuse of a method in a new domain.
    Transfer(TransferArgs),
    /// Anchor all unanchored events under one Merkle root.
    Anchor,
    /// Verify a ledger file.
    Verify {
        /// Ledger file; defaults to <dir>/chain.jsonl plus its anchors.
        #[arg(long)]
        ledger: Option<PathBuf>,
    },
    /// Score an identity, artifact or commentary.
    Score(ScoreArgs),
    /// Run a detection or graph operator.
    Analyze {
        #[command(subcommand)]
        op: AnalyzeOp,
    },
    /// Run the sabotage simulation.
    Simulate(SimulateArgs),
    /// Write a report file.
    Export(ExportArgs),
}

#[derive(Debug, Args)]
struct AttestArgs {
    #[arg(long)]
    key: String,
    #[arg(long)]
    subject: KeyId,
    /// institutional-credential, external-id or editor-role.
    #[arg(long, value_parser = parse_attestation_kind)]
    kind: AttestationKind,
    /// Claim payload; its hash is attested.
    #[arg(long)]
    payload: String,
}

#[derive(Debug, Args)]
struct RegisterArgs {
    #[arg(long)]
    key: String,
    /// Artifact content file.
    #[arg(long, conflicts_with = "content", required_unless_present = "content")]
    file: Option<PathBuf>,
    /// Artifact content given inline.
    #[arg(long)]
    content: Option<String>,
    #[arg(long)]
    title: String,
    /// Existing lineage this artifact belongs to; omit to start a lineage.
    #[arg(long)]
    lineage: Option<ContentHash>,
    #[arg(long = "tag")]
    tags: Vec<String>,
    /// subject:predicate:direction:dataset:method[:magnitude]
    #[arg(long = "claim", value_parser = Claim::parse)]
    claims: Vec<Claim>,
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long)]
    protocol: Option<PathBuf>,
    /// Creation time of the work; defaults to the event time.
    #[arg(long, allow_negative_numbers = true)]
    created_at: Option<i64>,
}

#[derive(Debug, Args)]
struct CommentArgs {
    #[arg(long)]
    key: String,
    #[arg(long)]
    target: ContentHash,
    #[arg(long)]
    modality: CommentaryModality,
    #[arg(long = "claim", value_parser = Claim::parse)]
    claims: Vec<Claim>,
    #[arg(long)]
    text: String,
}

#[derive(Debug, Args)]
struct CiteArgs {
    #[arg(long)]
    key: String,
    #[arg(long)]
    citing: ContentHash,
    #[arg(long)]
    cited: ContentHash,
    #[arg(long)]
    modality: CitationModality,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    polarity: f64,
    #[arg(long, default_value_t = 1.0)]
    depth: f64,
}

#[derive(Debug, Args)]
struct VersionArgs {
    #[arg(long)]
    key: String,
    #[arg(long)]
    lineage: ContentHash,
    /// A registered artifact of the same lineage.
    #[arg(long = "version")]
    version_hash: ContentHash,
    #[arg(long)]
    parent: ContentHash,
    #[arg(long)]
    modification: Modification,
}

#[derive(Debug, Args)]
struct RetractArgs {
    #[arg(long)]
    key: String,
    #[arg(long)]
    target: ContentHash,
    #[arg(long = "reason", required = true)]
    reasons: Vec<RetractionReason>,
    #[arg(long)]
    voluntary: bool,
}

#[derive(Debug, Args)]
struct NullArgs {
    #[arg(long)]
    key: String,
    #[arg(long)]
    hypothesis: String,
    #[arg(long)]
    dataset: String,
    #[arg(long)]
    method: String,
    #[arg(long, allow_negative_numbers = true)]
    effect: f64,
    #[arg(long)]
    confidence: f64,
}

#[derive(Debug, Args)]
struct ReplicateArgs {
    #[arg(long)]
    key: String,
    #[arg(long)]
    target: ContentHash,
    #[arg(long)]
    variant: String,
    #[arg(long)]
    congruence: f64,
}

#[derive(Debug, Args)]
struct TransferArgs {
    #[arg(long)]
    key: String,
    #[arg(long)]
    source: ContentHash,
    #[arg(long)]
    domain: String,
    #[arg(long)]
    dataset: String,
    #[arg(long)]
    protocol: String,
    #[arg(long, value_parser = Claim::parse)]
    claim: Claim,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct ScoreArgs {
    #[arg(long)]
    identity: Option<KeyId>,
    #[arg(long)]
    artifact: Option<ContentHash>,
    #[arg(long)]
    commentary: Option<ContentHash>,
    #[arg(long)]
    all: bool,
}

#[derive(Debug, Subcommand)]
enum AnalyzeOp {
    /// Contradiction between the claims of two artifacts or commentaries.
    Contradiction {
        #[arg(long)]
        a: ContentHash,
        #[arg(long)]
        b: ContentHash,
    },
    /// Redundancy flag for two artifacts.
    Overlap {
        #[arg(long)]
        a: ContentHash,
        #[arg(long)]
        b: ContentHash,
    },
    Novelty {
        #[arg(long)]
        artifact: ContentHash,
    },
    /// Change class between two versions.
    Delta {
        #[arg(long)]
        prev: ContentHash,
        #[arg(long)]
        next: ContentHash,
    },
    /// Artifacts downstream of a retraction.
    Affected {
        #[arg(long)]
        artifact: ContentHash,
    },
    /// Live version of a lineage.
    Live {
        #[arg(long)]
        lineage: ContentHash,
    },
    Forks {
        #[arg(long)]
        lineage: ContentHash,
    },
    Dag {
        #[arg(long)]
        lineage: ContentHash,
    },
    Trace {
        #[arg(long)]
        target: ContentHash,
    },
    Reuse {
        #[arg(long)]
        artifact: ContentHash,
        #[arg(long, allow_negative_numbers = true)]
        from: i64,
        #[arg(long, allow_negative_numbers = true)]
        to: i64,
    },
    Influence {
        #[arg(long)]
        artifact: ContentHash,
    },
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Scenario JSON; defaults are used when omitted.
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Governance config JSON; defaults to <dir>/config.json when present.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    identity_penalties: Option<bool>,
    /// Write per-epoch metrics CSV here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExportKindArg {
    Scores,
    Graph,
    Trace,
}

#[derive(Debug, Args)]
struct ExportArgs {
    #[arg(long)]
    kind: ExportKindArg,
    #[arg(long)]
    out: PathBuf,
    /// Trace target (required for --kind trace).
    #[arg(long, required_if_eq("kind", "trace"))]
    target: Option<ContentHash>,
}

fn parse_attestation_kind(s: &str) -> std::result::Result<AttestationKind, String> {
    serde_json::from_value(Value::String(s.to_string())).map_err(|_| {
        format!("unknown attestation kind `{s}` (institutional-credential, external-id, editor-role)")
    })
}

/// What [`export_report`] writes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExportKind {
    /// JSON array of score reports for every identity and artifact.
    Scores,
    /// Tab-separated citation edge list.
    Graph,
    /// JSONL commentary trace rows for one target.
    Trace(ContentHash),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExportSummary {
    pub kind: &'static str,
    pub path: String,
    pub rows: usize,
    pub config_hash: ContentHash,
}

/// Write a deterministic report file. Score reports embed the config hash;
/// for graph and trace exports it is returned in the summary.
pub fn export_report(ledger: &Ledger, kind: &ExportKind, at: i64, path: &Path) -> Result<ExportSummary> {
    let state = ledger.state();
    let config = ledger.config();
    let (name, bytes, rows) = match kind {
        ExportKind::Scores => {
            let reports = scoring::all_reports(at, state, config)?;
            let mut bytes = canonical_encode(&reports)?;
            bytes.push(b'\n');
            ("scores", bytes, reports.len())
        }
        ExportKind::Graph => {
            let graph = CitationGraph::from_state(state);
            ("graph", graph.to_edge_list().into_bytes(), graph.edges.len())
        }
        ExportKind::Trace(target) => {
            let trace = graphs::commentary_trace(target, state)?;
            let mut bytes = Vec::new();
            for row in &trace.entries {
                bytes.extend(canonical_encode(row)?);
                bytes.push(b'\n');
            }
            ("trace", bytes, trace.entries.len())
        }
    };
    fs::write(path, bytes)?;
    Ok(ExportSummary {
        kind: name,
        path: path.display().to_string(),
        rows,
        config_hash: config.config_hash()?,
    })
}

/// Load and invariant-check a governance config file.
pub fn load_config(path: &Path) -> Result<GovernanceConfig> {
    let config = GovernanceConfig::load(path)?;
    config.validate()?;
    Ok(config)
}

/// Run the tool on `argv` (including the program name).
pub fn run_command<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    CommandResult::ok(text)
                }
                _ => CommandResult {
                    exit_code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    match dispatch(&cli) {
        Ok(outcome) => outcome,
        Err(e) => error_result(&e),
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Argument(_) => "argument",
        Error::Identity(_) => "identity",
        Error::Attestation(_) => "attestation",
        Error::Validation(_) => "validation",
        Error::Config(_) => "config",
        Error::Encoding(_) => "encoding",
        Error::NoLiveVersion(_) => "no-live-version",
        Error::NoReplications(_) => "no-replications",
        Error::DegenerateWeights => "degenerate-weights",
        Error::Malformed { .. } => "malformed",
        Error::Io(_) => "io",
    }
}

fn error_result(e: &Error) -> CommandResult {
    let payload = json!({
        "error": error_kind(e),
        "message": e.to_string(),
        "violations": e.violations(),
    });
    CommandResult {
        exit_code: EXIT_FAILURE,
        stdout: emit(&payload),
        stderr: format!("error: {e}\n"),
    }
}

/// Canonical JSON plus a trailing newline.
fn emit<T: Serialize + ?Sized>(value: &T) -> String {
    let bytes = canonical_encode(value).expect("command output is finite");
    String::from_utf8(bytes).expect("JSON is UTF-8") + "\n"
}

fn clock(at: Option<i64>) -> i64 {
    at.unwrap_or_else(|| {
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs() as i64)
    })
}

struct Context<'a> {
    cli: &'a Cli,
    tau: i64,
}

impl Context<'_> {
    fn dir(&self) -> &Path {
        &self.cli.dir
    }

    fn keys_dir(&self) -> PathBuf {
        self.cli.keys_dir.clone().unwrap_or_else(|| self.cli.dir.join("keys"))
    }

    /// `name` is either a path to a secret key file or a key name in the
    /// keys directory.
    fn secret_key(&self, name: &str) -> Result<SecretKey> {
        let direct = Path::new(name);
        let path = if direct.is_file() {
            direct.to_path_buf()
        } else {
            self.keys_dir().join(format!("{name}.sk"))
        };
        let text = fs::read_to_string(&path)
            .map_err(|e| Error::Identity(format!("cannot read key {}: {e}", path.display())))?;
        let bytes = hex::decode(text.trim())
            .map_err(|e| Error::Identity(format!("key file {} is not hex: {e}", path.display())))?;
        SecretKey::from_bytes(&bytes)
    }

    fn repo(&self) -> Result<Repository> {
        Repository::open(self.dir())
    }

    fn snapshot(&self) -> Result<Ledger> {
        Ok(repo::snapshot(self.dir())?.0)
    }

    fn submit(&self, body: EventBody, key: &str, extra: Value) -> Result<CommandResult> {
        let sk = self.secret_key(key)?;
        let mut repo = self.repo()?;
        let event = repo.append(body, &sk)?;
        Ok(CommandResult::ok(emit(&event_summary(&event, extra))))
    }
}

fn event_summary(event: &LedgerEvent, extra: Value) -> Value {
    let mut out = json!({
        "seq": event.seq,
        "event_id": event.event_id,
        "kind": event.body.kind(),
    });
    if let (Value::Object(out), Value::Object(extra)) = (&mut out, extra) {
        out.extend(extra);
    }
    out
}

fn read_file(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::argument(format!("cannot read {}: {e}", path.display())))
}

fn dispatch(cli: &Cli) -> Result<CommandResult> {
    let ctx = Context {
        cli,
        tau: clock(cli.at),
    };
    match &cli.command {
        Command::Init { config } => {
            let config = match config {
                Some(path) => load_config(path)?,
                None => GovernanceConfig::default(),
            };
            let repo = Repository::init(ctx.dir(), config)?;
            Ok(CommandResult::ok(emit(&json!({
                "dir": repo.root().display().to_string(),
                "config_hash": repo.ledger().config().config_hash()?,
            }))))
        }
        Command::Keygen { name, seed } => keygen(&ctx, name, seed.as_deref()),
        Command::Attest(a) => {
            let issuer = ctx.secret_key(&a.key)?;
            let payload_hash = compute_content_hash(a.payload.as_bytes());
            let body = EventBody::Attestation(AttestationBinding {
                subject: a.subject,
                attestation: issue_attestation(&issuer, &a.subject, a.kind, payload_hash),
                tau: ctx.tau,
            });
            ctx.submit(body, &a.key, json!({}))
        }
        Command::Register(a) => register(&ctx, a),
        Command::Comment(a) => {
            let text_hash = ctx.repo()?.store_content(a.text.as_bytes())?;
            let body = EventBody::Commentary(CommentaryEvent {
                target: a.target,
                modality: a.modality,
                claims: a.claims.clone(),
                text_hash,
                tau: ctx.tau,
            });
            ctx.submit(body, &a.key, json!({ "text_hash": text_hash }))
        }
        Command::Cite(a) => {
            let body = EventBody::Citation(CitationEvent {
                citing: a.citing,
                cited: a.cited,
                modality: a.modality,
                polarity: a.polarity,
                integration_depth: a.depth,
                tau: ctx.tau,
            });
            ctx.submit(body, &a.key, json!({}))
        }
        Command::Version(a) => {
            let body = EventBody::Version(VersionEvent {
                lineage_id: a.lineage,
                version_hash: a.version_hash,
                parent_version: Some(a.parent),
                modification: a.modification,
                tau: ctx.tau,
            });
            ctx.submit(body, &a.key, json!({}))
        }
        Command::Retract(a) => {
            let body = EventBody::Retraction(RetractionEvent {
                target_version: a.target,
                reasons: a.reasons.iter().copied().collect(),
                voluntary: a.voluntary,
                tau: ctx.tau,
            });
            ctx.submit(body, &a.key, json!({}))
        }
        Command::Null(a) => {
            let body = EventBody::NullResult(NullResultEvent {
                hypothesis_id: a.hypothesis.clone(),
                dataset: a.dataset.clone(),
                method: a.method.clone(),
                effect_size: a.effect,
                confidence: a.confidence,
                tau: ctx.tau,
            });
            ctx.submit(body, &a.key, json!({}))
        }
        Command::Replicate(a) => {
            let body = EventBody::Replication(ReplicationEvent {
                target: a.target,
                dataset_variant: a.variant.clone(),
                congruence: a.congruence,
                tau: ctx.tau,
            });
            ctx.submit(body, &a.key, json!({}))
        }
        Command::Transfer(a) => {
            let body = EventBody::TransferUse(TransferUseEvent {
                source: a.source,
                new_domain: a.domain.clone(),
                dataset: a.dataset.clone(),
                protocol: a.protocol.clone(),
                resulting_claim: a.claim.clone(),
                tau: ctx.tau,
            });
            ctx.submit(body, &a.key, json!({}))
        }
        Command::Anchor => {
            let mut repo = ctx.repo()?;
            let record = repo.anchor(ctx.tau)?;
            Ok(CommandResult::ok(emit(&json!({ "anchor": record }))))
        }
        Command::Verify { ledger } => verify(&ctx, ledger.as_deref()),
        Command::Score(a) => score(&ctx, a),
        Command::Analyze { op } => analyze(&ctx, op),
        Command::Simulate(a) => simulate(&ctx, a),
        Command::Export(a) => {
            let ledger = ctx.snapshot()?;
            let kind = match a.kind {
                ExportKindArg::Scores => ExportKind::Scores,
                ExportKindArg::Graph => ExportKind::Graph,
                ExportKindArg::Trace => ExportKind::Trace(a.target.expect("clap requires --target for trace")),
            };
            let summary = export_report(&ledger, &kind, ctx.tau, &a.out)?;
            Ok(CommandResult::ok(emit(&summary)))
        }
    }
}

fn keygen(ctx: &Context, name: &str, seed: Option<&str>) -> Result<CommandResult> {
    if name.is_empty() || name.contains(['/', '\\']) {
        return Err(Error::argument(format!("invalid key name `{name}`")));
    }
    let seed_bytes = seed.map(|s| compute_content_hash(s.as_bytes()));
    let (sk, record) = generate_identity(seed_bytes.as_ref().map(|h| &h.as_bytes()[..]), ctx.tau)?;
    let dir = ctx.keys_dir();
    fs::create_dir_all(&dir)?;
    let sk_path = dir.join(format!("{name}.sk"));
    let pk_path = dir.join(format!("{name}.pk"));
    if sk_path.exists() || pk_path.exists() {
        return Err(Error::argument(format!("key `{name}` already exists in {}", dir.display())));
    }

    let mut repo = ctx.repo()?;
    let body = EventBody::Identity(IdentityRegistration {
        public_key: record.public_key,
        tau: ctx.tau,
    });
    let event = repo.append(body, &sk)?;
    fs::write(&sk_path, hex::encode(sk.to_bytes()) + "\n")?;
    fs::write(&pk_path, hex::encode(record.public_key.0) + "\n")?;
    Ok(CommandResult::ok(emit(&event_summary(
        &event,
        json!({ "key_id": record.key_id, "public_key": record.public_key }),
    ))))
}

fn register(ctx: &Context, a: &RegisterArgs) -> Result<CommandResult> {
    let repo = ctx.repo()?;
    let content = match (&a.file, &a.content) {
        (Some(path), _) => read_file(path)?,
        (None, Some(text)) => text.clone().into_bytes(),
        (None, None) => unreachable!("clap requires --file or --content"),
    };
    let artifact_hash = repo.store_content(&content)?;
    let data_hash = a.data.as_deref().map(|p| repo.store_content(&read_file(p)?)).transpose()?;
    let protocol_hash = a
        .protocol
        .as_deref()
        .map(|p| repo.store_content(&read_file(p)?))
        .transpose()?;
    drop(repo);
    let body = EventBody::Registration(ArtifactRegistration {
        artifact_hash,
        lineage_id: a.lineage.unwrap_or(artifact_hash),
        title: a.title.clone(),
        domain_tags: a.tags.clone(),
        claims: a.claims.clone(),
        data_hash,
        protocol_hash,
        created_at: a.created_at.unwrap_or(ctx.tau),
        tau: ctx.tau,
    });
    ctx.submit(body, &a.key, json!({ "artifact_hash": artifact_hash }))
}

fn verify(ctx: &Context, ledger: Option<&Path>) -> Result<CommandResult> {
    let path = ledger.map_or_else(|| ctx.dir().join(repo::CHAIN_FILE), Path::to_path_buf);
    let bytes = read_file(&path)?;
    let mut report = verify_jsonl(&bytes);
    if report.ok && ledger.is_none() {
        report = check_anchor_log(ctx.dir(), &bytes)?;
    }
    Ok(CommandResult {
        exit_code: if report.ok { EXIT_OK } else { EXIT_FAILURE },
        stdout: emit(&report),
        stderr: String::new(),
    })
}

/// Anchor failures are reported at the first seq the bad anchor covers.
fn check_anchor_log(dir: &Path, chain: &[u8]) -> Result<VerificationReport> {
    let anchors = match fs::read(dir.join(repo::ANCHORS_FILE)) {
        Ok(b) => anchors_from_jsonl(&b)?,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(VerificationReport::ok()),
        Err(e) => return Err(e.into()),
    };
    let hashes = scriptorium_core::ledger::parse_jsonl(chain)?
        .iter()
        .map(LedgerEvent::envelope_hash)
        .collect::<Result<Vec<_>>>()?;
    Ok(match verify_anchors(&anchors, &hashes) {
        Ok(()) => VerificationReport::ok(),
        Err((i, reason)) => VerificationReport::failure(anchors[i].seq_from, format!("anchor: {reason}")),
    })
}

fn score(ctx: &Context, a: &ScoreArgs) -> Result<CommandResult> {
    let ledger = ctx.snapshot()?;
    let (state, config, t) = (ledger.state(), ledger.config(), ctx.tau);
    let out = if let Some(id) = &a.identity {
        if !state.identities.contains_key(id) {
            return Err(Error::argument(format!("unknown identity {id}")));
        }
        emit(&scoring::identity_report(id, t, state, config)?)
    } else if let Some(h) = &a.artifact {
        emit(&scoring::artifact_report(h, t, state, config)?)
    } else if let Some(h) = &a.commentary {
        emit(&scoring::commentary_report(h, t, state, config)?)
    } else {
        emit(&scoring::all_reports(t, state, config)?)
    };
    Ok(CommandResult::ok(out))
}

fn claims_of<'a>(h: &ContentHash, ledger: &'a Ledger) -> Result<&'a [Claim]> {
    let state = ledger.state();
    if let Some(a) = state.artifacts.get(h) {
        Ok(&a.body.claims)
    } else if let Some(c) = state.commentaries.get(h) {
        Ok(&c.body.claims)
    } else {
        Err(Error::argument(format!("unknown artifact or commentary {h}")))
    }
}

fn registration<'a>(h: &ContentHash, ledger: &'a Ledger) -> Result<&'a ArtifactRegistration> {
    ledger
        .state()
        .artifacts
        .get(h)
        .map(|r| &r.body)
        .ok_or_else(|| Error::argument(format!("unknown artifact {h}")))
}

fn analyze(ctx: &Context, op: &AnalyzeOp) -> Result<CommandResult> {
    let ledger = ctx.snapshot()?;
    let (state, config, t) = (ledger.state(), ledger.config(), ctx.tau);
    let (operator, subject, value): (&str, Value, Value) = match op {
        AnalyzeOp::Contradiction { a, b } => {
            let r = analysis::contradiction_flag(claims_of(a, &ledger)?, claims_of(b, &ledger)?);
            ("contradiction", json!({ "pair": [a, b] }), json!(r))
        }
        AnalyzeOp::Overlap { a, b } => (
            "overlap",
            json!({ "pair": [a, b] }),
            json!(analysis::overlap_flag(a, b, state, config)?),
        ),
        AnalyzeOp::Novelty { artifact } => (
            "novelty",
            json!({ "artifact": artifact }),
            json!(analysis::novelty(artifact, state, config)?),
        ),
        AnalyzeOp::Delta { prev, next } => {
            let (p, n) = (registration(prev, &ledger)?, registration(next, &ledger)?);
            let class = analysis::classify_delta(p, n)?;
            let changed = analysis::changed_propositions(p, n);
            (
                "delta",
                json!({ "pair": [prev, next] }),
                json!({ "class": class, "changed": changed }),
            )
        }
        AnalyzeOp::Affected { artifact } => {
            let t_r = state.retractions.get(artifact).map_or(t, |r| r.body.tau);
            let graph = CitationGraph::from_state(state);
            (
                "affected",
                json!({ "artifact": artifact }),
                json!(graphs::retraction_affected_set(&graph, artifact, t_r)?),
            )
        }
        AnalyzeOp::Live { lineage } => (
            "live-version",
            json!({ "lineage": lineage }),
            json!(graphs::live_version(lineage, t, state)?),
        ),
        AnalyzeOp::Forks { lineage } => (
            "forks",
            json!({ "lineage": lineage }),
            json!(graphs::fork_branches(lineage, state)?),
        ),
        AnalyzeOp::Dag { lineage } => (
            "version-dag",
            json!({ "lineage": lineage }),
            json!(graphs::version_dag(lineage, state)?),
        ),
        AnalyzeOp::Trace { target } => (
            "trace",
            json!({ "artifact": target }),
            json!(graphs::commentary_trace(target, state)?.entries),
        ),
        AnalyzeOp::Reuse { artifact, from, to } => (
            "reuse-rate",
            json!({ "artifact": artifact }),
            json!(graphs::reuse_rate(artifact, *from, *to, state, config)?),
        ),
        AnalyzeOp::Influence { artifact } => (
            "influence",
            json!({ "artifact": artifact }),
            json!(scoring::influence_at(artifact, t, state, config)?),
        ),
    };
    let mut record = json!({
        "operator": operator,
        "value": value,
        "config_hash": config.config_hash()?,
    });
    if let (Value::Object(r), Value::Object(s)) = (&mut record, subject) {
        r.extend(s);
    }
    Ok(CommandResult::ok(emit(&record)))
}

fn simulate(ctx: &Context, a: &SimulateArgs) -> Result<CommandResult> {
    let mut scenario = match &a.scenario {
        Some(path) => serde_json::from_slice::<ScenarioConfig>(&read_file(path)?)
            .map_err(|e| Error::argument(format!("scenario {}: {e}", path.display())))?,
        None => ScenarioConfig::default(),
    };
    if let Some(s) = a.seed {
        scenario.seed = s;
    }
    if let Some(e) = a.epochs {
        scenario.epochs = e;
    }
    if let Some(p) = a.identity_penalties {
        scenario.identity_penalties = p;
    }
    let default_config = ctx.dir().join(repo::CONFIG_FILE);
    let governance = match &a.config {
        Some(path) => load_config(path)?,
        None if default_config.is_file() => load_config(&default_config)?,
        None => GovernanceConfig::default(),
    };
    let metrics = run_scenario(&scenario, &governance)?;
    if let Some(out) = &a.out {
        fs::write(out, metrics.to_csv())?;
    }
    let last = metrics.loss.len() - 1;
    Ok(CommandResult::ok(emit(&json!({
        "scenario": scenario,
        "config_hash": governance.config_hash()?,
        "final": {
            "loss": metrics.loss[last],
            "p_m": metrics.p_m[last],
            "rep_honest": metrics.rep_honest[last],
            "rep_troll": metrics.rep_troll[last],
        },
        "csv": a.out.as_ref().map(|p| p.display().to_string()),
    }))))
}

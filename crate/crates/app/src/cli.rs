use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use exemplar_core::credit::{generate_portfolio_with_threshold, whatif_rescore, write_demo, DEFAULT_THRESHOLD_RATING};
use exemplar_core::decision_log::{DecisionLog, DEFAULT_THRESHOLD};
use exemplar_core::docs::{answer_with_provenance, load_corpus_dir, record_validated_answer, EMBED_DIM};
use exemplar_core::engine::recommend;
use exemplar_core::model::{default_catalog, read_instances_jsonl, validate_catalog, ModeWeightTable, ProfilePair};
use exemplar_core::store::{load, persist, Collection, Metric};

use crate::api::{self, RecommendRequest};
use crate::config::ServerConfig;
use crate::error::{AppError, AppResult};
use crate::methods::{explain, ExplainRequest};
use crate::plot::{write_svg, Series};
use crate::state::{read_json, AppState};

#[derive(Debug, Parser)]
#[command(name = "exemplar", version, about = "Example-based model explanations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MetricArg {
    Euclidean,
    Cosine,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Metric {
        match m {
            MetricArg::Euclidean => Metric::Euclidean,
            MetricArg::Cosine => Metric::Cosine,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CaseArg {
    Credit,
    Documentation,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Upsert JSON-lines instances into a collection file, creating it if needed.
    Ingest {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Collection name for a new file; defaults to the file stem.
        #[arg(long)]
        name: Option<String>,
        /// Dimension for a new file; defaults to the first instance's.
        #[arg(long)]
        dimension: Option<usize>,
        #[arg(long, value_enum, default_value = "euclidean")]
        metric: MetricArg,
    },
    /// Recommend explanation methods for a model/user profile pair.
    Recommend {
        /// JSON file holding {"model": ..., "user": ...}.
        #[arg(long, conflicts_with = "case", required_unless_present = "case")]
        profile: Option<PathBuf>,
        /// Built-in profile pair.
        #[arg(long, value_enum)]
        case: Option<CaseArg>,
        #[arg(long)]
        catalog: Option<PathBuf>,
        #[arg(long)]
        weight_table: Option<PathBuf>,
    },
    /// Run one explanation method against a collection file.
    Explain {
        #[arg(long)]
        collection: PathBuf,
        #[arg(long)]
        method: String,
        /// JSON request body, as accepted by POST /explain/{method}.
        #[arg(long)]
        request: Option<PathBuf>,
        /// Shorthand for a request naming a stored query instance.
        #[arg(long, conflicts_with = "request")]
        query_id: Option<String>,
    },
    /// Re-score a seeded credit applicant with edited raw features.
    Whatif {
        #[arg(long)]
        id: String,
        #[arg(long, default_value_t = 500)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD_RATING)]
        threshold: f64,
        /// Raw-unit edit, `feature=value`; repeatable.
        #[arg(long = "edit", value_parser = parse_edit)]
        edits: Vec<(String, f64)>,
    },
    /// Write a seeded credit portfolio, its recommendation and one bundle per rejection.
    DemoCredit {
        #[arg(long, default_value_t = 500)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD_RATING)]
        threshold: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Answer a question from a directory of .txt files and a validated-answer log.
    DemoDocs {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        query: String,
        /// Decision log file; read if present, written when recording.
        #[arg(long)]
        log: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        tau: f64,
        /// Store this reviewed answer for the query instead of answering.
        #[arg(long, requires_all = ["log", "validator"])]
        record: Option<String>,
        #[arg(long)]
        validator: Option<String>,
    },
    /// Start the HTTP service.
    Serve {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        port: Option<u16>,
    },
    /// Render a PDP or importance series JSON file as SVG.
    Plot {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// JSON pointer selecting the series inside the input, e.g. /pdp.
        #[arg(long)]
        pointer: Option<String>,
        #[arg(long, default_value = "")]
        title: String,
    },
}

fn parse_edit(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected feature=value, got {s:?}"))?;
    let value: f64 = value.trim().parse().map_err(|_| format!("{value:?} is not a number"))?;
    Ok((name.trim().to_owned(), value))
}

fn pretty<S: Serialize>(value: &S) -> AppResult<String> {
    serde_json::to_string_pretty(value).map_err(|e| AppError::Core(e.into()))
}

fn read_file(path: &Path) -> AppResult<String> {
    std::fs::read_to_string(path).map_err(|e| AppError::BadRequest(format!("{}: {e}", path.display())))
}

fn ingest(input: &Path, out: &Path, name: Option<String>, dimension: Option<usize>, metric: Metric) -> AppResult<String> {
    let instances = read_instances_jsonl(std::io::BufReader::new(std::fs::File::open(input)?))?;
    let mut c: Collection<f64> = if out.exists() {
        load(out)?
    } else {
        let name = name.unwrap_or_else(|| out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default());
        let dim = dimension
            .or_else(|| instances.first().map(|i| i.embedding.len()))
            .ok_or_else(|| AppError::BadRequest("cannot infer the dimension of an empty input".into()))?;
        Collection::new(name, dim, metric)?
    };
    let stored = c.upsert_all(instances)?;
    persist(&c, out)?;
    pretty(&serde_json::json!({"collection": c.name(), "stored": stored}))
}

fn run_command(command: Command) -> AppResult<String> {
    match command {
        Command::Ingest { input, out, name, dimension, metric } => ingest(&input, &out, name, dimension, metric.into()),
        Command::Recommend { profile, case, catalog, weight_table } => {
            let req = match (profile, case) {
                (Some(p), _) => serde_json::from_str::<RecommendRequest>(&read_file(&p)?)
                    .map_err(|e| AppError::BadRequest(format!("{}: {e}", p.display())))?,
                (None, Some(CaseArg::Credit)) => pair(ProfilePair::credit()),
                (None, Some(CaseArg::Documentation)) => pair(ProfilePair::documentation()),
                (None, None) => unreachable!("clap requires one of --profile and --case"),
            };
            let catalog = match catalog {
                Some(p) => read_json(&p)?,
                None => default_catalog(),
            };
            validate_catalog(&catalog)?;
            let table: ModeWeightTable = match weight_table {
                Some(p) => read_json(&p)?,
                None => ModeWeightTable::default(),
            };
            pretty(&recommend(&req.model, &req.user, &catalog, &table)?)
        }
        Command::Explain { collection, method, request, query_id } => {
            let c: Collection<f64> = load(&collection)?;
            let req = match (request, query_id) {
                (Some(p), _) => serde_json::from_str::<ExplainRequest>(&read_file(&p)?)
                    .map_err(|e| AppError::BadRequest(format!("{}: {e}", p.display())))?,
                (None, id) => ExplainRequest { query_id: id, ..ExplainRequest::default() },
            };
            pretty(&explain(&c, &method, &req)?)
        }
        Command::Whatif { id, n, seed, threshold, edits } => {
            let portfolio = generate_portfolio_with_threshold(n, seed, threshold)?;
            let applicant = portfolio.get(&id).ok_or_else(|| exemplar_core::Error::UnknownId(id.clone()))?;
            let edits: BTreeMap<String, f64> = edits.into_iter().collect();
            pretty(&whatif_rescore(applicant, &edits, threshold)?)
        }
        Command::DemoCredit { n, seed, threshold, out } => pretty(&write_demo(&out, n, seed, threshold)?),
        Command::DemoDocs { corpus, query, log, tau, record, validator } => {
            let corpus = load_corpus_dir::<f64>(&corpus)?;
            let mut decisions = match &log {
                Some(p) if p.exists() => DecisionLog::load(p)?,
                _ => DecisionLog::new(EMBED_DIM)?,
            };
            match (record, log, validator) {
                (Some(answer), Some(path), Some(validator)) => {
                    let id = format!("qa-{:04}", decisions.len() + 1);
                    record_validated_answer(&mut decisions, &id, &query, &answer, &validator)?;
                    decisions.persist(&path)?;
                    pretty(&decisions.get(&id))
                }
                _ => pretty(&answer_with_provenance(&corpus, &decisions, &query, tau)?),
            }
        }
        Command::Serve { config, port } => {
            let mut cfg = match config {
                Some(p) => ServerConfig::from_file(&p)?,
                None => ServerConfig::default(),
            }
            .with_env(|k| std::env::var(k).ok())?;
            if let Some(p) = port {
                cfg.port = p;
            }
            let state = Arc::new(AppState::new(cfg)?);
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(async move {
                let listener = api::bind(&state.config).await?;
                eprintln!("listening on {}", listener.local_addr()?);
                api::serve(state, listener, async {
                    let _ = tokio::signal::ctrl_c().await;
                })
                .await
            })?;
            Ok(String::new())
        }
        Command::Plot { input, out, pointer, title } => {
            let value: serde_json::Value = serde_json::from_str(&read_file(&input)?)
                .map_err(|e| AppError::BadRequest(format!("{}: {e}", input.display())))?;
            let series = Series::from_json(&value, pointer.as_deref())?;
            write_svg(&series, &title, &out)?;
            Ok(format!("wrote {}", out.display()))
        }
    }
}

fn pair(p: ProfilePair) -> RecommendRequest {
    RecommendRequest { model: p.model, user: p.user }
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code: 0 on success, 1 on a runtime error, 2 on a usage error.
pub fn run<I, A>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match run_command(cli.command) {
        Ok(text) => {
            if !text.is_empty() {
                let _ = writeln!(out, "{text}");
            }
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

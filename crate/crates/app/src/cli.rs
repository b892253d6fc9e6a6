//! Command-line interface.

use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::sync::Arc;

use chemagent_agent::{run, AgentOutcome, ModelTokens, Termination};
use chemagent_bench::{generate, run_benchmark, write_questions_file, write_reports, BackendSource, Labels, SetName};
use chemagent_core::corpus::{parse_molecule_list, DEFAULT_MOLECULES};
use clap::{Args, CommandFactory, Parser, Subcommand};

use crate::config::{AppConfig, Settings, CONFIG_ENV};
use crate::describe::describe;
use crate::service::{self, AppState};

#[derive(Debug, Parser)]
#[command(
    name = "chemagent",
    version,
    about = "A tool-using chemistry agent: descriptors, questions, benchmarks and an HTTP service"
)]
pub struct Cli {
    #[command(flatten)]
    pub settings: SettingFlags,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags that override config-file and environment settings.
#[derive(Debug, Default, Args)]
pub struct SettingFlags {
    /// Key-value config file (default: $CHEMAGENT_CONFIG)
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Language-model backend
    #[arg(long, global = true, value_parser = ["rule_oracle", "http", "scripted"])]
    pub backend: Option<String>,
    /// OpenAI-compatible base URL
    #[arg(long, global = true, value_name = "URL")]
    pub endpoint: Option<String>,
    /// Model id sent to the endpoint
    #[arg(long, global = true)]
    pub model: Option<String>,
    /// Completion or chat requests (default from the model token table)
    #[arg(long, global = true, value_parser = ["completion", "chat"])]
    pub wrapper_mode: Option<String>,
    /// Sampling temperature
    #[arg(long, global = true)]
    pub temperature: Option<String>,
    /// Completion length limit in tokens
    #[arg(long, global = true)]
    pub max_tokens: Option<String>,
    /// Upstream request timeout in seconds
    #[arg(long, global = true)]
    pub timeout_secs: Option<String>,
    /// Retries after a failed upstream call
    #[arg(long, global = true)]
    pub retries: Option<String>,
    /// JSON array of canned replies (scripted backend)
    #[arg(long, global = true, value_name = "FILE")]
    pub script_file: Option<PathBuf>,
    /// Probability that the rule oracle flips a categorical answer
    #[arg(long, global = true)]
    pub flip_probability: Option<String>,
    /// Seed for the rule oracle's answer flips
    #[arg(long, global = true)]
    pub oracle_seed: Option<String>,
    /// Prompt strategy
    #[arg(long, global = true, value_parser = ["minimal", "domain", "full"])]
    pub prompt: Option<String>,
    /// Directory with prompt wording overrides
    #[arg(long, global = true, value_name = "DIR")]
    pub prompt_dir: Option<PathBuf>,
    /// Tool steps allowed per question
    #[arg(long, global = true)]
    pub max_steps: Option<String>,
    /// Malformed replies tolerated per question
    #[arg(long, global = true)]
    pub parse_retry_limit: Option<String>,
    /// Directory with descriptor data overrides
    #[arg(long, global = true, value_name = "DIR")]
    pub data_dir: Option<PathBuf>,
    /// Service time limit for one question, in seconds
    #[arg(long, global = true)]
    pub request_timeout_secs: Option<String>,
    /// Log level or tracing filter (logs go to standard error)
    #[arg(long, global = true)]
    pub log_level: Option<String>,
}

impl SettingFlags {
    pub fn to_settings(&self) -> Settings {
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
        [
            ("backend", self.backend.clone()),
            ("endpoint", self.endpoint.clone()),
            ("model", self.model.clone()),
            ("wrapper_mode", self.wrapper_mode.clone()),
            ("temperature", self.temperature.clone()),
            ("max_tokens", self.max_tokens.clone()),
            ("timeout_secs", self.timeout_secs.clone()),
            ("retries", self.retries.clone()),
            ("script_file", path(&self.script_file)),
            ("flip_probability", self.flip_probability.clone()),
            ("oracle_seed", self.oracle_seed.clone()),
            ("prompt", self.prompt.clone()),
            ("prompt_dir", path(&self.prompt_dir)),
            ("max_steps", self.max_steps.clone()),
            ("parse_retry_limit", self.parse_retry_limit.clone()),
            ("data_dir", path(&self.data_dir)),
            ("request_timeout_secs", self.request_timeout_secs.clone()),
            ("log_level", self.log_level.clone()),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.map(|v| (k.to_string(), v)))
        .collect()
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print all ten tool values for a molecule
    Describe { smiles: String },
    /// Ask the agent one question
    Ask { question: String },
    /// Ask questions interactively, one per line
    Chat,
    /// Generate a question set, run it and write reports
    Bench(BenchArgs),
    /// Run the HTTP service
    Serve {
        /// Listen address (default from config, else 127.0.0.1:8080)
        #[arg(long)]
        listen: Option<String>,
    },
    /// List the tools
    Tools,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value = "full", value_parser = ["qualitative", "quantitative", "full"])]
    pub set: String,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Questions run concurrently
    #[arg(long, default_value_t = 1)]
    pub parallel: usize,
    /// Model label for the summary (default: the model id or backend kind)
    #[arg(long)]
    pub model_label: Option<String>,
    /// Hardware label for the summary
    #[arg(long, default_value = "local")]
    pub node_label: String,
    /// Report directory
    #[arg(long, default_value = "bench-out")]
    pub out: PathBuf,
    /// Molecule list, one SMILES per line (default: the bundled list)
    #[arg(long, value_name = "FILE")]
    pub molecules: Option<PathBuf>,
}

/// Parse arguments and resolve settings without running anything.
pub fn parse(args: impl IntoIterator<Item = String>) -> Result<(Cli, AppConfig), String> {
    let cli = Cli::try_parse_from(args).map_err(|e| e.render().to_string())?;
    let config_file = cli
        .settings
        .config
        .clone()
        .or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
    let cfg =
        AppConfig::resolve(config_file.as_deref(), &cli.settings.to_settings()).map_err(|e| format!("error: {e}"))?;
    Ok((cli, cfg))
}

/// Run the CLI; returns the process exit code.
pub fn run_cli(
    args: impl IntoIterator<Item = String>,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let args: Vec<String> = args.into_iter().collect();
    let (cli, cfg) = match Cli::try_parse_from(&args) {
        Err(e) if !e.use_stderr() => {
            let _ = write!(out, "{}", e.render());
            return 0;
        }
        Err(e) => {
            let rendered = e.render().to_string();
            let _ = write!(err, "{rendered}");
            if !rendered.contains("Usage:") {
                let _ = writeln!(err, "\n{}", Cli::command().render_usage());
            }
            return 2;
        }
        Ok(_) => match parse(args) {
            Ok(parsed) => parsed,
            Err(message) => {
                let _ = writeln!(err, "{message}");
                return 2;
            }
        },
    };
    match execute(cli.command, cfg, input, out, err) {
        Ok(code) => code,
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            1
        }
    }
}

fn runtime() -> Result<tokio::runtime::Runtime, String> {
    tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(|e| format!("cannot start runtime: {e}"))
}

fn execute(
    command: Command,
    cfg: AppConfig,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, String> {
    let registry = cfg.registry().map_err(|e| e.to_string())?;
    let io = |e: std::io::Error| e.to_string();
    match command {
        Command::Tools => {
            for t in registry.tools() {
                writeln!(out, "{:<20} {:<10} {}", t.name, t.output_kind.name(), t.description).map_err(io)?;
            }
            Ok(0)
        }
        Command::Describe { smiles } => {
            let values = describe(&registry, &smiles)?;
            for v in values {
                writeln!(out, "{}: {}", v.label, v.value).map_err(io)?;
            }
            Ok(0)
        }
        Command::Ask { question } => {
            let outcome = runtime()?.block_on(ask_once(&cfg, &registry, &question))?;
            write_trace(&outcome, err).map_err(io)?;
            match outcome.final_answer {
                Some(answer) => {
                    writeln!(out, "{answer}").map_err(io)?;
                    Ok(0)
                }
                None => Err(no_answer(&outcome)),
            }
        }
        Command::Chat => {
            let rt = runtime()?;
            let mut line = String::new();
            loop {
                write!(out, "> ").map_err(io)?;
                out.flush().map_err(io)?;
                line.clear();
                if input.read_line(&mut line).map_err(io)? == 0 {
                    writeln!(out).map_err(io)?;
                    return Ok(0);
                }
                let question = line.trim();
                match question {
                    "" => continue,
                    "exit" | "quit" => return Ok(0),
                    _ => {}
                }
                let outcome = rt.block_on(ask_once(&cfg, &registry, question))?;
                write_trace(&outcome, out).map_err(io)?;
                match &outcome.final_answer {
                    Some(answer) => writeln!(out, "Final Answer: {answer}").map_err(io)?,
                    None => writeln!(err, "{}", no_answer(&outcome)).map_err(io)?,
                }
            }
        }
        Command::Bench(args) => bench(&cfg, registry, args, out),
        Command::Serve { listen } => {
            let addr = listen.unwrap_or_else(|| cfg.listen.clone());
            let rt = runtime()?;
            rt.block_on(async move {
                let listener = tokio::net::TcpListener::bind(&addr)
                    .await
                    .map_err(|e| format!("cannot listen on {addr}: {e}"))?;
                service::serve(AppState::new(cfg, registry), listener)
                    .await
                    .map_err(|e| e.to_string())
            })?;
            Ok(0)
        }
    }
}

async fn ask_once(
    cfg: &AppConfig,
    registry: &Arc<chemagent_core::toolbox::ToolRegistry>,
    question: &str,
) -> Result<AgentOutcome, String> {
    let tokens = ModelTokens::embedded();
    let agent = cfg.agent_config(None, &tokens).map_err(|e| e.to_string())?;
    let backend = cfg
        .backend
        .build(registry.clone(), &tokens)
        .map_err(|e| e.to_string())?;
    Ok(run(question, &agent, registry, backend.as_ref()).await)
}

fn no_answer(outcome: &AgentOutcome) -> String {
    match (&outcome.termination, &outcome.error) {
        (Termination::BackendError, Some(e)) => format!("no answer (backend_error): {e}"),
        (t, _) => format!("no answer ({})", t.name()),
    }
}

fn write_trace(outcome: &AgentOutcome, w: &mut dyn Write) -> std::io::Result<()> {
    for step in &outcome.steps {
        writeln!(w, "Thought: {}", step.thought)?;
        writeln!(w, "Action: {}", step.action.tool)?;
        writeln!(w, "Action Input: {}", step.action.input)?;
        writeln!(w, "Observation: {}", step.observation)?;
    }
    Ok(())
}

fn bench(
    cfg: &AppConfig,
    registry: Arc<chemagent_core::toolbox::ToolRegistry>,
    args: BenchArgs,
    out: &mut dyn Write,
) -> Result<i32, String> {
    let set_name: SetName = args.set.parse()?;
    let molecules = match &args.molecules {
        Some(path) => parse_molecule_list(
            &std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?,
        ),
        None => parse_molecule_list(DEFAULT_MOLECULES),
    };
    let set = generate(&registry, set_name, &molecules, args.seed).map_err(|e| e.to_string())?;
    std::fs::create_dir_all(&args.out).map_err(|e| format!("cannot create {}: {e}", args.out.display()))?;
    write_questions_file(&set.questions, &args.out.join("questions.csv")).map_err(|e| e.to_string())?;

    let tokens = ModelTokens::embedded();
    let agent = cfg.agent_config(None, &tokens).map_err(|e| e.to_string())?;
    let backends = BackendSource::from_config(&cfg.backend, registry.clone(), &tokens).map_err(|e| e.to_string())?;
    let labels = Labels {
        model: args.model_label.unwrap_or_else(|| cfg.backend.model_label()),
        node: args.node_label,
    };
    let run = runtime()?.block_on(run_benchmark(&set, &agent, registry, &backends, args.parallel, &labels));
    write_reports(&run, &args.out).map_err(|e| e.to_string())?;

    let s = &run.summary;
    let d = &run.diagnostics;
    let io = |e: std::io::Error| e.to_string();
    writeln!(
        out,
        "summary: model={} node={} set={} prompt={} questions={} time_min={:.2} accuracy={:.1}",
        s.model,
        s.node,
        s.question_set,
        s.prompt,
        run.results.len(),
        s.time,
        s.accuracy
    )
    .map_err(io)?;
    writeln!(
        out,
        "terminations: answered={} max_steps={} parse_failure_limit={} backend_error={}",
        d.answered, d.max_steps, d.parse_failure_limit, d.backend_errors
    )
    .map_err(io)?;
    for t in &run.per_tool {
        writeln!(
            out,
            "  {:<20} {:>4}/{:<4} {:5.1}%",
            t.tool, t.correct, t.asked, t.accuracy
        )
        .map_err(io)?;
    }
    writeln!(out, "reports written to {}", args.out.display()).map_err(io)?;
    Ok(0)
}

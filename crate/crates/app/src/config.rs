//! Application settings, layered from a key-value file, environment
//! variables and command-line flags (later layers win).
//!
//! Every setting has one key. In the config file it is written `key =
//! value` (`#` starts a comment); in the environment it is
//! `CHEMAGENT_<KEY>` in upper case; on the command line it is
//! `--key-with-dashes`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use chemagent_agent::{
    AgentConfig, BackendConfig, BackendKind, ModelTokens, PromptStrategy, PromptTemplate, WrapperMode,
};
use chemagent_core::descriptors::DescriptorEngine;
use chemagent_core::toolbox::ToolRegistry;
use thiserror::Error;

/// Recognised keys, with a one-line description for the README table.
pub const KEYS: [(&str, &str); 19] = [
    ("backend", "rule_oracle | http | scripted"),
    ("endpoint", "OpenAI-compatible base URL (http backend)"),
    ("model", "model id sent upstream (http backend)"),
    ("wrapper_mode", "completion | chat; default from the model token table"),
    ("temperature", "sampling temperature"),
    ("max_tokens", "completion length limit"),
    ("timeout_secs", "per-request upstream timeout"),
    ("retries", "retries after a failed upstream call"),
    ("script_file", "JSON array of replies (scripted backend)"),
    ("flip_probability", "answer flip probability (rule_oracle backend)"),
    ("oracle_seed", "seed for the flips (rule_oracle backend)"),
    ("prompt", "minimal | domain (alias: full)"),
    (
        "prompt_dir",
        "directory with minimal.txt / domain.txt / format.txt overrides",
    ),
    ("max_steps", "tool steps per question"),
    ("parse_retry_limit", "format errors tolerated per question"),
    ("data_dir", "directory with descriptor data overrides"),
    ("listen", "service listen address"),
    ("request_timeout_secs", "service time limit for one question"),
    ("log_level", "error | warn | info | debug | trace, or a tracing filter"),
];

pub const ENV_PREFIX: &str = "CHEMAGENT_";
/// Environment variable naming the config file when `--config` is absent.
pub const CONFIG_ENV: &str = "CHEMAGENT_CONFIG";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}:{line}: {message}")]
    File { path: String, line: usize, message: String },
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("invalid value for {key}: {message}")]
    Value { key: String, message: String },
    #[error("cannot load descriptor data: {0}")]
    Assets(String),
}

/// Raw settings by key.
pub type Settings = BTreeMap<String, String>;

/// Parse `key = value` lines.
pub fn parse_config_file(text: &str, origin: &str) -> Result<Settings, ConfigError> {
    let mut out = Settings::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split_once('#').map_or(raw, |(l, _)| l).trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| ConfigError::File {
            path: origin.to_string(),
            line: i + 1,
            message,
        };
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| err("expected `key = value`".into()))?;
        let key = k.trim().to_ascii_lowercase();
        if !KEYS.iter().any(|(known, _)| *known == key) {
            return Err(err(format!("unknown key `{key}`")));
        }
        out.insert(key, v.trim().trim_matches('"').to_string());
    }
    Ok(out)
}

/// Settings from `CHEMAGENT_<KEY>` variables, read through `lookup`.
pub fn settings_from_env(lookup: impl Fn(&str) -> Option<String>) -> Settings {
    KEYS.iter()
        .filter_map(|(key, _)| {
            let var = format!("{ENV_PREFIX}{}", key.to_ascii_uppercase());
            lookup(&var)
                .filter(|v| !v.trim().is_empty())
                .map(|v| (key.to_string(), v))
        })
        .collect()
}

/// Merge layers; later ones win.
pub fn layer(layers: &[&Settings]) -> Settings {
    let mut out = Settings::new();
    for l in layers {
        out.extend(l.iter().map(|(k, v)| (k.clone(), v.clone())));
    }
    out
}

/// Resolved application settings.
#[derive(Debug, Clone)]
pub struct AppConfig {
    pub backend: BackendConfig,
    pub prompt_strategy: PromptStrategy,
    pub prompt_dir: Option<PathBuf>,
    pub max_steps: usize,
    pub parse_retry_limit: usize,
    pub data_dir: Option<PathBuf>,
    pub listen: String,
    pub request_timeout: Duration,
    pub log_level: String,
}

impl Default for AppConfig {
    fn default() -> Self {
        let agent = AgentConfig::default();
        AppConfig {
            backend: BackendConfig::rule_oracle(),
            prompt_strategy: PromptStrategy::default(),
            prompt_dir: None,
            max_steps: agent.max_steps,
            parse_retry_limit: agent.parse_retry_limit,
            data_dir: None,
            listen: "127.0.0.1:8080".into(),
            request_timeout: Duration::from_secs(300),
            log_level: "warn".into(),
        }
    }
}

fn value<T: std::str::FromStr>(s: &Settings, key: &str) -> Result<Option<T>, ConfigError>
where
    T::Err: std::fmt::Display,
{
    s.get(key)
        .map(|v| {
            v.trim().parse::<T>().map_err(|e| ConfigError::Value {
                key: key.into(),
                message: e.to_string(),
            })
        })
        .transpose()
}

impl AppConfig {
    /// Build from merged settings; absent keys keep their defaults.
    pub fn from_settings(s: &Settings) -> Result<Self, ConfigError> {
        let mut cfg = AppConfig::default();
        let mut backend = BackendConfig::default();
        let bad = |key: &str, message: String| ConfigError::Value {
            key: key.into(),
            message,
        };

        backend.endpoint_url = s.get("endpoint").cloned();
        backend.model_id = s.get("model").cloned();
        if let Some(mode) = s.get("wrapper_mode") {
            backend.wrapper_mode = Some(match mode.trim() {
                "completion" => WrapperMode::Completion,
                "chat" => WrapperMode::Chat,
                other => return Err(bad("wrapper_mode", format!("`{other}` (expected completion or chat)"))),
            });
        }
        if let Some(t) = value(s, "temperature")? {
            backend.temperature = t;
        }
        if let Some(t) = value(s, "max_tokens")? {
            backend.max_tokens = t;
        }
        if let Some(t) = value::<f64>(s, "timeout_secs")? {
            backend.timeout = Duration::try_from_secs_f64(t).map_err(|e| bad("timeout_secs", e.to_string()))?;
        }
        if let Some(r) = value(s, "retries")? {
            backend.retry_count = r;
        }
        backend.kind = match s.get("backend").map(|b| b.trim()).unwrap_or("rule_oracle") {
            "rule_oracle" | "oracle" => BackendKind::RuleOracle {
                flip_probability: value(s, "flip_probability")?.unwrap_or(0.0),
                seed: value(s, "oracle_seed")?.unwrap_or(0),
            },
            "http" | "http_openai_compatible" => BackendKind::HttpOpenaiCompatible,
            "scripted" => {
                let path = s
                    .get("script_file")
                    .ok_or_else(|| bad("script_file", "required by the scripted backend".into()))?;
                let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
                    path: path.into(),
                    source,
                })?;
                let replies: Vec<String> =
                    serde_json::from_str(&text).map_err(|e| bad("script_file", format!("{path}: {e}")))?;
                BackendKind::Scripted {
                    replies,
                    repeat_last: false,
                }
            }
            other => {
                return Err(bad(
                    "backend",
                    format!("`{other}` (expected rule_oracle, http or scripted)"),
                ))
            }
        };
        backend.validate().map_err(|e| bad("backend", e.to_string()))?;
        cfg.backend = backend;

        if let Some(p) = s.get("prompt") {
            cfg.prompt_strategy = p
                .parse()
                .map_err(|e: chemagent_agent::prompt::PromptError| bad("prompt", e.to_string()))?;
        }
        cfg.prompt_dir = s.get("prompt_dir").map(PathBuf::from);
        if let Some(n) = value(s, "max_steps")? {
            cfg.max_steps = n;
        }
        if let Some(n) = value(s, "parse_retry_limit")? {
            cfg.parse_retry_limit = n;
        }
        cfg.data_dir = s.get("data_dir").map(PathBuf::from);
        if let Some(l) = s.get("listen") {
            cfg.listen = l.clone();
        }
        if let Some(t) = value::<f64>(s, "request_timeout_secs")? {
            cfg.request_timeout =
                Duration::try_from_secs_f64(t).map_err(|e| bad("request_timeout_secs", e.to_string()))?;
        }
        if let Some(l) = s.get("log_level") {
            cfg.log_level = l.clone();
        }
        Ok(cfg)
    }

    /// Resolve from a config file (if any), the process environment and
    /// flag settings.
    pub fn resolve(config_file: Option<&Path>, flags: &Settings) -> Result<Self, ConfigError> {
        let file = match config_file {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
                    path: path.to_path_buf(),
                    source,
                })?;
                parse_config_file(&text, &path.display().to_string())?
            }
            None => Settings::new(),
        };
        let env = settings_from_env(|v| std::env::var(v).ok());
        Self::from_settings(&layer(&[&file, &env, flags]))
    }

    /// The tool registry, with descriptor data from `data_dir` if set.
    pub fn registry(&self) -> Result<Arc<ToolRegistry>, ConfigError> {
        let engine = match &self.data_dir {
            None => DescriptorEngine::embedded_shared(),
            Some(dir) => Arc::new(DescriptorEngine::load(Some(dir)).map_err(|e| ConfigError::Assets(e.to_string()))?),
        };
        Ok(Arc::new(ToolRegistry::with_engine(engine)))
    }

    /// Agent settings for `strategy` (the configured one when `None`).
    pub fn agent_config(
        &self,
        strategy: Option<PromptStrategy>,
        tokens: &ModelTokens,
    ) -> Result<AgentConfig, ConfigError> {
        let strategy = strategy.unwrap_or(self.prompt_strategy);
        let mut prompt = self.backend.template(strategy, tokens);
        if let Some(dir) = &self.prompt_dir {
            let loaded = PromptTemplate::load(strategy, Some(dir)).map_err(|e| ConfigError::Value {
                key: "prompt_dir".into(),
                message: e.to_string(),
            })?;
            prompt.preamble = loaded.preamble;
            prompt.format_rules = loaded.format_rules;
        }
        Ok(AgentConfig {
            max_steps: self.max_steps,
            parse_retry_limit: self.parse_retry_limit,
            prompt,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings(pairs: &[(&str, &str)]) -> Settings {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn readme_documents_every_key() {
        let readme = include_str!("../../../README.md");
        for (key, _) in KEYS {
            let row = format!("| `{key}` | `{ENV_PREFIX}{}` |", key.to_ascii_uppercase());
            assert!(readme.contains(&row), "README lacks a row for {key}");
        }
        let rows = readme
            .lines()
            .filter(|l| l.contains(&format!("| `{ENV_PREFIX}")))
            .count();
        assert_eq!(rows, KEYS.len());
    }

    #[test]
    fn flags_beat_env_beat_file() {
        let file = parse_config_file("prompt = minimal\nmax_steps = 3 # comment\nlisten=0.0.0.0:1\n", "f").unwrap();
        let env = settings_from_env(|v| match v {
            "CHEMAGENT_MAX_STEPS" => Some("4".into()),
            "CHEMAGENT_LISTEN" => Some("0.0.0.0:2".into()),
            _ => None,
        });
        let flags = settings(&[("listen", "0.0.0.0:3")]);
        let cfg = AppConfig::from_settings(&layer(&[&file, &env, &flags])).unwrap();
        assert_eq!(cfg.prompt_strategy, PromptStrategy::Minimal);
        assert_eq!(cfg.max_steps, 4);
        assert_eq!(cfg.listen, "0.0.0.0:3");
    }

    #[test]
    fn config_file_errors_name_the_line() {
        let e = parse_config_file("prompt = domain\nbogus = 1\n", "app.conf").unwrap_err();
        assert_eq!(e.to_string(), "app.conf:2: unknown key `bogus`");
        assert!(parse_config_file("no equals sign", "x").is_err());
    }

    #[test]
    fn values_are_validated() {
        assert!(AppConfig::from_settings(&settings(&[("max_steps", "many")])).is_err());
        assert!(AppConfig::from_settings(&settings(&[("backend", "magic")])).is_err());
        assert!(AppConfig::from_settings(&settings(&[("backend", "http")])).is_err());
        assert!(AppConfig::from_settings(&settings(&[("prompt", "verbose")])).is_err());
        assert!(AppConfig::from_settings(&settings(&[("flip_probability", "2")])).is_err());
        let http = settings(&[
            ("backend", "http"),
            ("endpoint", "http://h"),
            ("model", "m"),
            ("wrapper_mode", "chat"),
        ]);
        let cfg = AppConfig::from_settings(&http).unwrap();
        assert_eq!(cfg.backend.wrapper_mode, Some(WrapperMode::Chat));
        assert_eq!(cfg.backend.model_label(), "m");
    }

    #[test]
    fn full_is_an_alias_for_the_domain_prompt() {
        let cfg = AppConfig::from_settings(&settings(&[("prompt", "Full")])).unwrap();
        assert_eq!(cfg.prompt_strategy, PromptStrategy::Domain);
    }
}

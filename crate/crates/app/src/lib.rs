//! User-facing surfaces of the chemistry agent: the `chemagent` command
//! line and the HTTP/SSE service.

pub mod cli;
pub mod config;
pub mod describe;
pub mod service;

pub use cli::run_cli;
pub use config::{AppConfig, ConfigError};
pub use describe::{describe, DescribedValue};
pub use service::{router, AppState, AskRequest, AskResponse, ErrorBody, FinalEvent, StepView};

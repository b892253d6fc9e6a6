use std::io;
use std::process::ExitCode;

use tracing_subscriber::EnvFilter;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    // Logging goes to standard error; the level comes from the resolved
    // configuration when the arguments parse, RUST_LOG otherwise.
    let level = chemagent_app::cli::parse(args.clone())
        .map(|(_, cfg)| cfg.log_level)
        .unwrap_or_else(|_| "warn".into());
    let filter = EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new(level));
    tracing_subscriber::fmt()
        .with_env_filter(filter)
        .with_writer(io::stderr)
        .init();

    let stdin = io::stdin();
    let code = chemagent_app::run_cli(args, &mut stdin.lock(), &mut io::stdout(), &mut io::stderr());
    ExitCode::from(u8::try_from(code).unwrap_or(1))
}

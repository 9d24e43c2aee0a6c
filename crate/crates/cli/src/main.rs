use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;
use voxnav_cli::{router, run, AppState, Cli, CliError, Cmd};
use voxnav_core::dialogue::{DialogueConfig, DialogueSession};
use voxnav_core::harness::SimDevice;
use voxnav_core::lang::RuleParser;

fn serve(cli: &Cli, port: u16, empty: bool) -> Result<(), CliError> {
    let device = if empty { SimDevice::new() } else { cli.load_device()? };
    let lexicon = cli.load_lexicon()?;
    let session = DialogueSession::new(device, lexicon.clone(), DialogueConfig::default());
    let state = AppState::new(session, RuleParser::new(lexicon));
    let runtime = tokio::runtime::Runtime::new().map_err(|e| CliError::Domain(e.to_string()))?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(("127.0.0.1", port))
            .await
            .map_err(|e| CliError::Domain(format!("bind port {port}: {e}")))?;
        log::info!("listening on http://127.0.0.1:{port}");
        axum::serve(listener, router(state))
            .await
            .map_err(|e| CliError::Domain(e.to_string()))
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let outcome = match &cli.command {
        Cmd::Serve { port, empty } => serve(&cli, *port, *empty),
        _ => {
            let stdout = io::stdout();
            let mut out = BufWriter::new(stdout.lock());
            let result = run(&cli, &mut io::stdin().lock(), &mut out);
            let _ = out.flush();
            result
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

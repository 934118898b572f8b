//! Command-line front end. Every command except `stats` talks to the service,
//! either one given with `--server` or a private one started in-process.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cornerbase::agents::RewardScheme;
use cornerbase::harness::{collect_stats, csv_string, export_csv, render_pit_table, BatchStatus, Plan};
use cornerbase::wire::{PitRequest, RunRequest};
use cornerbase_client::Client;
use cornerbase_service::{serve, spawn_local, ServeConfig, DEFAULT_PORT};

#[derive(Parser)]
#[command(name = "cornerbase", version, about = "Corner-base game training and evaluation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every batch of a plan file.
    Run {
        #[arg(long)]
        plan: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Replaces the batch seeds (batch i gets seed + i).
        #[arg(long)]
        seed: Option<u64>,
        /// Service address; without it a private service is started.
        #[arg(long)]
        server: Option<String>,
    },
    /// Play two snapshots against each other.
    Pit {
        #[arg(long)]
        white: PathBuf,
        #[arg(long)]
        black: PathBuf,
        #[arg(long, default_value_t = 500)]
        games: usize,
        /// Keep both networks fixed during the pit.
        #[arg(long)]
        frozen: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        label: String,
        #[arg(long, value_enum, default_value_t = Scheme::R3)]
        scheme: Scheme,
        #[arg(long)]
        server: Option<String>,
    },
    /// Show the stage statistics collected under an output directory.
    Stats {
        #[arg(long)]
        dir: PathBuf,
        /// Also write them as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Start the HTTP service.
    Serve {
        #[arg(long)]
        plan: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_PORT)]
        port: u16,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Directory with the built browser UI.
        #[arg(long)]
        serve_ui: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Scheme {
    R1,
    R2,
    R3,
}

impl From<Scheme> for RewardScheme {
    fn from(s: Scheme) -> Self {
        match s {
            Scheme::R1 => RewardScheme::R1,
            Scheme::R2 => RewardScheme::R2,
            Scheme::R3 => RewardScheme::R3,
        }
    }
}

/// A failure with the exit code it maps to.
struct Failure(i32, String);

impl From<cornerbase::Error> for Failure {
    fn from(e: cornerbase::Error) -> Self {
        Failure(e.exit_code(), e.to_string())
    }
}

impl From<cornerbase_client::ClientError> for Failure {
    fn from(e: cornerbase_client::ClientError) -> Self {
        Failure(e.exit_code(), e.to_string())
    }
}

fn absolute(p: &Path) -> Result<PathBuf, Failure> {
    std::path::absolute(p).map_err(|e| Failure(4, format!("{}: {e}", p.display())))
}

async fn client(server: Option<String>, out: &Path) -> Result<Client, Failure> {
    match server {
        Some(url) => Ok(Client::new(url)),
        None => {
            let config = ServeConfig { out: out.to_path_buf(), ..ServeConfig::default() };
            let addr =
                spawn_local(config).await.map_err(|e| Failure(4, format!("cannot start a local service: {e}")))?;
            Ok(Client::new(format!("http://{addr}")))
        }
    }
}

async fn execute(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Run { plan, out, seed, server } => {
            // Parse locally first so plan errors surface with their own exit code.
            let plan = Plan::load(&plan)?;
            let out = absolute(&out)?;
            let client = client(server, &out).await?;
            let reply = client.run(&RunRequest { plan, out: out.clone(), seed }).await?;
            for b in &reply.batches {
                let status = match &b.status {
                    BatchStatus::Completed => "completed".to_string(),
                    BatchStatus::Running => "running".to_string(),
                    BatchStatus::Failed { message } => format!("failed: {message}"),
                    BatchStatus::Skipped { message } => format!("skipped: {message}"),
                };
                println!("{:<12} {}/{} stages  {status}", b.id, b.stages_completed, b.stages_total);
            }
            let rows: Vec<_> = reply.batches.iter().flat_map(|b| b.rows.iter().cloned()).collect();
            print!("{}", csv_string(&rows));
            println!("results in {}", out.display());
            match reply.error {
                Some(e) => Err(Failure(e.exit_code.unwrap_or(2), e.message)),
                None => Ok(()),
            }
        }
        Command::Pit { white, black, games, frozen, seed, label, scheme, server } => {
            let (white, black) = (absolute(&white)?, absolute(&black)?);
            let client = client(server, &std::env::temp_dir()).await?;
            let req = PitRequest { white, black, games, frozen, seed, label, scheme: scheme.into() };
            let report = client.pit(&req).await?;
            print!("{}", render_pit_table(&[report]));
            Ok(())
        }
        Command::Stats { dir, csv } => {
            let rows = collect_stats(&dir)?;
            print!("{}", csv_string(&rows));
            if let Some(path) = csv {
                export_csv(&rows, &path)?;
            }
            Ok(())
        }
        Command::Serve { plan, port, out, serve_ui } => {
            if let Some(p) = &plan {
                Plan::load(p)?.validate().map_err(|e| Failure(2, e.to_string()))?;
            }
            let listener = tokio::net::TcpListener::bind(("0.0.0.0", port))
                .await
                .map_err(|e| Failure(4, format!("cannot listen on port {port}: {e}")))?;
            println!("serving on http://localhost:{port}");
            let config = ServeConfig { plan, out, ui_dir: serve_ui };
            serve(listener, config, async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await
            .map_err(|e| Failure(4, e.to_string()))
        }
    }
}

#[tokio::main]
async fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::from_default_env())
        .with_writer(std::io::stderr)
        .init();
    let cli = Cli::parse();
    match execute(cli.command).await {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code as u8)
        }
    }
}

use std::net::SocketAddr;
use std::path::PathBuf;
use std::time::Duration;

use anyhow::Context;
use clap::Parser;
use portroster_service::{router, AppState, ServiceConfig};

/// Serve a depot over HTTP.
#[derive(Parser)]
#[command(version)]
struct Args {
    /// Depot document to serve.
    #[arg(long)]
    depot: PathBuf,
    #[arg(long, default_value = "127.0.0.1:8080")]
    bind: SocketAddr,
    /// Solver jobs allowed to run at once.
    #[arg(long, default_value_t = 2)]
    workers: usize,
    /// Wall-clock budget per solve, in seconds.
    #[arg(long, default_value_t = 300)]
    timeout: u64,
    /// Seconds to wait before answering a solve with a job id.
    #[arg(long, default_value_t = 2.0)]
    async_after: f64,
}

#[tokio::main]
async fn main() -> anyhow::Result<()> {
    tracing_subscriber::fmt().with_env_filter(tracing_subscriber::EnvFilter::from_default_env()).init();
    let args = Args::parse();
    portroster::store::load_snapshot(&args.depot).with_context(|| format!("opening {}", args.depot.display()))?;
    let mut config = ServiceConfig::new(&args.depot);
    config.workers = args.workers;
    config.engine.timeout = Some(Duration::from_secs(args.timeout));
    config.async_after = Duration::try_from_secs_f64(args.async_after).context("--async-after")?;
    config.validate().map_err(anyhow::Error::msg)?;
    let listener = tokio::net::TcpListener::bind(args.bind).await.with_context(|| format!("binding {}", args.bind))?;
    tracing::info!("serving {} on {}", args.depot.display(), args.bind);
    axum::serve(listener, router(AppState::new(config))).await?;
    Ok(())
}

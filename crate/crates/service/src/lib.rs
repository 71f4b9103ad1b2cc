//! The litscope HTTP service and the recompute pipeline it shares with the
//! command-line client.

pub mod config;
pub mod engine;
pub mod error;
pub mod routes;
pub mod store;
pub mod views;

use std::sync::Arc;

pub use config::{ConfigError, ServiceConfig};
pub use engine::{Derived, Engine, EngineError, Warning, WarningKind};
pub use error::ServiceError;
pub use routes::{router, AppState, REVISION_HEADER};
pub use store::{SessionStore, Snapshot};
pub use views::{suggestions_page, AuthorsPage, PublicationView, SessionView, SuggestionsPage};

/// The engine described by `config`.
pub fn engine(config: &ServiceConfig) -> Result<Engine, ConfigError> {
    let gateway = config.gateway()?;
    Ok(Engine::new(gateway, config.classify_config(), config.execution()))
}

/// Router over a fresh session store built from `config`.
pub fn app(config: &ServiceConfig) -> Result<axum::Router, ConfigError> {
    let engine = engine(config)?.with_prefetch(true);
    let store = Arc::new(SessionStore::new(engine, config.session_dir.clone()));
    Ok(router(store))
}

/// Binds `config.bind` and serves until the process is stopped.
pub async fn serve(config: &ServiceConfig) -> anyhow::Result<()> {
    let app = app(config)?;
    let listener = tokio::net::TcpListener::bind(&config.bind).await?;
    tracing::info!(addr = %listener.local_addr()?, "listening");
    axum::serve(listener, app).await?;
    Ok(())
}

//! Service configuration: an optional TOML file, then `LITSCOPE_*`
//! environment overrides.

use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use litscope_core::{ClassifyConfig, Execution};
use litscope_gateway::{
    CacheConfig, CrossrefSource, FixtureProvider, Gateway, GatewayConfig, OpenCitationsSource, RecordCache,
    RetryPolicy, SystemClock,
};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServiceConfig {
    pub bind: String,
    /// Serve from this fixture file instead of the public APIs.
    pub fixture: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
    pub cache_ttl_days: u64,
    pub parallelism: usize,
    pub crossref_url: String,
    pub opencitations_url: String,
    pub opencitations_token: Option<String>,
    /// Persist committed sessions here.
    pub session_dir: Option<PathBuf>,
    /// Reference year for tags and year repair; defaults to the clock.
    pub current_year: Option<i32>,
    /// Use the sequential engine instead of the data-parallel one.
    pub sequential: bool,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            bind: "127.0.0.1:8080".into(),
            fixture: None,
            cache_dir: None,
            cache_ttl_days: 30,
            parallelism: litscope_gateway::DEFAULT_PARALLELISM,
            crossref_url: litscope_gateway::http::CROSSREF_URL.into(),
            opencitations_url: litscope_gateway::http::OPENCITATIONS_URL.into(),
            opencitations_token: None,
            session_dir: None,
            current_year: None,
            sequential: false,
        }
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("invalid config file {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("invalid value for {name}: {value:?}")]
    Env { name: &'static str, value: String },
    #[error("cannot load fixture {path}: {source}")]
    Fixture { path: PathBuf, source: std::io::Error },
}

fn parse_env<T: std::str::FromStr>(name: &'static str, value: String) -> Result<T, ConfigError> {
    value.trim().parse().map_err(|_| ConfigError::Env { name, value })
}

impl ServiceConfig {
    /// Reads `path` if given, then applies the process environment.
    pub fn load(path: Option<&Path>) -> Result<Self, ConfigError> {
        let mut config = match path {
            Some(path) => Self::from_file(path)?,
            None => Self::default(),
        };
        config.apply_env(|name| std::env::var(name).ok())?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.into(), source })?;
        toml::from_str(&text).map_err(|e| ConfigError::Parse { path: path.into(), message: e.to_string() })
    }

    /// Applies `LITSCOPE_*` overrides looked up through `var`.
    pub fn apply_env(&mut self, var: impl Fn(&str) -> Option<String>) -> Result<(), ConfigError> {
        if let Some(v) = var("LITSCOPE_BIND") {
            self.bind = v;
        }
        if let Some(v) = var("LITSCOPE_FIXTURE") {
            self.fixture = Some(v.into());
        }
        if let Some(v) = var("LITSCOPE_CACHE_DIR") {
            self.cache_dir = Some(v.into());
        }
        if let Some(v) = var("LITSCOPE_CACHE_TTL_DAYS") {
            self.cache_ttl_days = parse_env("LITSCOPE_CACHE_TTL_DAYS", v)?;
        }
        if let Some(v) = var("LITSCOPE_PARALLELISM") {
            self.parallelism = parse_env("LITSCOPE_PARALLELISM", v)?;
        }
        if let Some(v) = var("LITSCOPE_CROSSREF_URL") {
            self.crossref_url = v;
        }
        if let Some(v) = var("LITSCOPE_OPENCITATIONS_URL") {
            self.opencitations_url = v;
        }
        if let Some(v) = var("LITSCOPE_OPENCITATIONS_TOKEN") {
            self.opencitations_token = Some(v);
        }
        if let Some(v) = var("LITSCOPE_SESSION_DIR") {
            self.session_dir = Some(v.into());
        }
        if let Some(v) = var("LITSCOPE_CURRENT_YEAR") {
            self.current_year = Some(parse_env("LITSCOPE_CURRENT_YEAR", v)?);
        }
        if let Some(v) = var("LITSCOPE_SEQUENTIAL") {
            self.sequential = parse_env("LITSCOPE_SEQUENTIAL", v)?;
        }
        Ok(())
    }

    pub fn gateway_config(&self) -> GatewayConfig {
        let mut config = GatewayConfig { parallelism: self.parallelism.max(1), ..Default::default() };
        if let Some(year) = self.current_year {
            config.current_year = year;
        }
        config
    }

    pub fn classify_config(&self) -> ClassifyConfig {
        ClassifyConfig::new(self.gateway_config().current_year)
    }

    pub fn execution(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        }
    }

    pub fn cache(&self) -> RecordCache {
        let config = CacheConfig {
            dir: self.cache_dir.clone(),
            ttl: Duration::from_secs(self.cache_ttl_days.saturating_mul(24 * 60 * 60)),
        };
        RecordCache::new(config, Arc::new(SystemClock))
    }

    /// The fixture provider when configured, the public APIs otherwise.
    pub fn gateway(&self) -> Result<Gateway, ConfigError> {
        let cache = self.cache();
        let config = self.gateway_config();
        if let Some(path) = &self.fixture {
            let provider =
                FixtureProvider::from_path(path).map_err(|source| ConfigError::Fixture { path: path.clone(), source })?;
            return Ok(Gateway::with_provider(Arc::new(provider), cache, config));
        }
        let retry = RetryPolicy::default();
        let metadata = CrossrefSource::new(&self.crossref_url, retry);
        let mut citations = OpenCitationsSource::new(&self.opencitations_url, retry);
        if let Some(token) = &self.opencitations_token {
            citations = citations.with_access_token(token);
        }
        Ok(Gateway::new(Arc::new(metadata), Arc::new(citations), cache, config))
    }
}

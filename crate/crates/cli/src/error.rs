use std::process::ExitCode;

use litscope_service::ServiceError;
use serde_json::json;

/// Failures with their exit codes: 3 for bad input data, 4 when a
/// publication source is unreachable. Usage errors (2) come from clap.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Upstream(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
            CliError::Upstream(_) => 4,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let (code, message) = match self {
            CliError::Usage(m) => ("usage", m),
            CliError::Data(m) => ("data_error", m),
            CliError::Upstream(m) => ("source_unavailable", m),
        };
        json!({"error": {"code": code, "message": message}})
    }
}

impl From<ServiceError> for CliError {
    fn from(e: ServiceError) -> Self {
        match e {
            ServiceError::Upstream(m) => CliError::Upstream(m),
            other => CliError::Data(other.to_string()),
        }
    }
}

impl From<litscope_core::Error> for CliError {
    fn from(e: litscope_core::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<litscope_service::EngineError> for CliError {
    fn from(e: litscope_service::EngineError) -> Self {
        CliError::Upstream(e.to_string())
    }
}

impl From<litscope_gateway::GatewayError> for CliError {
    fn from(e: litscope_gateway::GatewayError) -> Self {
        ServiceError::from(e).into()
    }
}

impl From<litscope_service::ConfigError> for CliError {
    fn from(e: litscope_service::ConfigError) -> Self {
        CliError::Data(e.to_string())
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

pub fn io_error(path: &std::path::Path, e: std::io::Error) -> CliError {
    CliError::Data(format!("{}: {e}", path.display()))
}

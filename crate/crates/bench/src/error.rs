use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    /// The metric was evaluated at or inside its horizon.
    #[error("horizon: r = {r} does not exceed the Schwarzschild radius {radius}")]
    Horizon { r: f64, radius: f64 },

    #[error("invalid grid: {0}")]
    InvalidSpec(String),

    #[error(transparent)]
    Core(#[from] symspace::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl BenchError {
    /// Process exit code: 2 for unusable arguments, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::InvalidSpec(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, BenchError>;

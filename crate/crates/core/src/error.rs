use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("invalid group parameters: {0}")]
    InvalidSpec(String),
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("{what} exceeds the budget of {limit}")]
    Budget { what: &'static str, limit: usize },
    #[error("element is not in the subgroup")]
    NotInSubgroup,
    #[error("group is not well generated")]
    NotWellGenerated,
    #[error("element is not parabolic quasi-Coxeter")]
    NotPqc,
    #[error("{0}")]
    Unsupported(String),
    #[error("{r} does not divide {m}")]
    NotDivisor { r: u32, m: u32 },
    #[error("factorization series too short to determine the polynomial")]
    SeriesTooShort,
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("empty spectrum set")]
    EmptySpectrum,
    #[error("invalid {primitive}: {reason}")]
    InvalidPrimitive {
        primitive: &'static str,
        reason: String,
    },
    #[error("thread leaves the level set at level {level}: {point} is not in X_{level}")]
    InfeasibleThread { level: u32, point: String },
    #[error("level {requested} is beyond the represented depth {depth}")]
    DepthExceeded { requested: u32, depth: u32 },
    #[error("level {requested} is below the thread's base level {base}")]
    BelowBase { requested: u32, base: u32 },
    #[error("point {point} is not in X_{level}")]
    NotInLevelSet { level: u32, point: String },
    #[error("rate constant needs an eventually principal thread")]
    NonPrincipalTail,
    #[error("circle section mismatch at level {level}, t = {t}: {detail}")]
    Consistency {
        level: u32,
        t: String,
        detail: String,
    },
    #[error("refusing to enumerate {count} points (cap {cap})")]
    TooManyPoints { count: String, cap: u64 },
    #[error("dyadic time {t} is not below the cap {cap}")]
    TimeCap { t: String, cap: u64 },
    #[error("level {level} exceeds the model's level cap {cap}")]
    LevelCap { level: u32, cap: u32 },
    #[error("connecting map {index} is not diagonal")]
    NonDiagonal { index: usize },
    #[error("invalid tower: {0}")]
    InvalidTower(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: {message}")]
    Semantic { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

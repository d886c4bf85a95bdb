use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("profile has no distribution for information set {0}")]
    MissingInfoset(String),
    #[error("unsupported variant: {0}")]
    UnsupportedVariant(String),
    #[error("wrong variant: {0}")]
    WrongVariant(String),
    #[error("invalid round flags: {0}")]
    InvalidFlags(String),
    #[error("{name} = {value} is outside [{low}, {high}]")]
    OutOfRange {
        name: String,
        value: String,
        low: String,
        high: String,
    },
    #[error("normal form too large: player {player} has {count} pure strategies (cap {cap})")]
    TooLarge { player: u8, count: String, cap: u128 },
    #[error("normal form too large: {rows} x {cols} matrix (cap {cap} entries)")]
    MatrixTooLarge { rows: usize, cols: usize, cap: u128 },
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("internal solver error: {0}")]
    Internal(String),
    #[error("sweep cell ({axis1}, {axis2}) failed: {source}")]
    Cell {
        axis1: String,
        axis2: String,
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

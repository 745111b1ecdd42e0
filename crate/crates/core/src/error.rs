use crate::certificate::Violation;
use crate::symbolic::Word;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("alphabet size must be at least 2, got {0}")]
    AlphabetTooSmall(usize),
    #[error("transition matrix must be {q}x{q} with 0/1 entries: {detail}")]
    MalformedMatrix { q: usize, detail: String },
    #[error("row {0} of the transition matrix is all zero")]
    DegenerateRow(usize),
    #[error("column {0} of the transition matrix is all zero")]
    DegenerateColumn(usize),
    #[error("transition matrix is not aperiodic (no positive power up to {bound})")]
    NotAperiodic { bound: usize },
    #[error("{what} would hold {count} entries, above the cap of {cap}")]
    SizeLimit { what: &'static str, count: u128, cap: usize },
    #[error("word {0} is not admissible")]
    InadmissibleWord(Word),
    #[error("word {word} has length {len} but at least {needed} symbols are required")]
    WordTooShort { word: Word, len: usize, needed: usize },
    #[error("symbol {symbol} is outside 1..={q}")]
    InvalidSymbol { symbol: usize, q: usize },
    #[error("functions live on different shifts or use different theta")]
    AlphabetMismatch,
    #[error("invalid function table: {0}")]
    InvalidTable(String),
    #[error("theta must lie strictly between 0 and 1, got {0}")]
    InvalidTheta(f64),
    #[error("lift level {level} is below the minimum {minimum} for this potential")]
    LevelTooSmall { level: usize, minimum: usize },
    #[error("power iteration did not converge after {iterations} steps (bracket width {width:e})")]
    NoConvergence { iterations: usize, width: f64 },
    #[error("dense eigensolver failed on a {0}x{0} lift")]
    EigenFailure(usize),
    #[error("orbit of length {len} is too short for an observable of memory {memory}")]
    OrbitTooShort { len: usize, memory: usize },
    #[error("function is not normalized: integral is {integral}")]
    NotNormalized { integral: f64 },
    #[error("cone condition violated: {0}")]
    ConeViolation(String),
    #[error("bound violated: {0}")]
    BoundViolated(Box<Violation>),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("alphabet must have at least one letter")]
    EmptyAlphabet,
    #[error("letter {letter} outside alphabet of size {size}")]
    LetterOutOfRange { letter: u8, size: usize },
    #[error("unknown glyph {0:?}")]
    UnknownGlyph(char),
    #[error("period of an eventually periodic word must be nonempty")]
    EmptyPeriod,
    #[error("orbit prefix not stabilizing")]
    OrbitNotStabilizing,
    #[error("seed {seed} is not a prefix of its own image under {rule}")]
    NotProlongable { rule: String, seed: u8 },
    #[error("position {pos} out of range for word of length {len}")]
    PositionOutOfRange { pos: usize, len: usize },
    #[error("hamming distance needs equal lengths, got {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("oracle limited to words of length <= {limit}, got {got}")]
    OracleTooLarge { limit: usize, got: usize },
    #[error("orbit blow-up: {needed} input letters required, cap is {cap}")]
    OrbitBlowUp { needed: u128, cap: u64 },
    #[error("{0}")]
    WrongKind(String),
    #[error("rule parse error at line {line}: {msg}")]
    RuleParse { line: usize, msg: String },
    #[error("word spec parse error: {0}")]
    SpecParse(String),
    #[error("degenerate normalizer: maximum distance is 0 over a one-letter alphabet")]
    DegenerateNormalizer,
    #[error("invalid length schedule: {0}")]
    BadLengths(String),
    #[error("operation requires eventually periodic inputs")]
    NotPeriodic,
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;

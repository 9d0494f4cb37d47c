use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UpsetError {
    #[error("arithmetic progression step must be at least 1")]
    ZeroStep,
    #[error("period must be at least 1")]
    ZeroPeriod,
    #[error("finite part value {value} is not below threshold {threshold}")]
    FinitePartAboveThreshold { value: usize, threshold: usize },
    #[error("residue {residue} is out of range for period {period}")]
    ResidueOutOfRange { residue: usize, period: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemilinearError {
    #[error("symbol {0:?} is not in the alphabet")]
    UnknownSymbol(char),
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("weight vector entries must be at least 1")]
    ZeroWeight,
    #[error("decomposition words must be nonempty (word {0} is empty)")]
    EmptyWord(usize),
    #[error("at least one decomposition word is required")]
    NoWords,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomatonError {
    #[error("residue {residue} is not below modulus {modulus}")]
    BadResidue { residue: usize, modulus: usize },
    #[error("symbol {0:?} is not in the alphabet")]
    UnknownSymbol(char),
    #[error("alphabets differ: {left:?} vs {right:?}")]
    AlphabetMismatch { left: Vec<char>, right: Vec<char> },
    #[error("malformed automaton: {0}")]
    Malformed(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrammarError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: undefined nonterminal {symbol}")]
    UndefinedSymbol { line: usize, symbol: String },
    #[error("the start symbol {0} derives no terminal string")]
    EmptyLanguage(String),
    #[error("symbol {0:?} is not a terminal of the grammar")]
    UnknownSymbol(char),
    #[error("length bound must be at least 4, got {0}")]
    DegenerateBound(usize),
    #[error("no stable period q ≤ {max_period} found on the spectrum up to {max_len}")]
    InferenceFailed { max_len: usize, max_period: usize },
    #[error("unknown builtin language {0:?}")]
    UnknownBuiltin(String),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DissectError {
    #[error("set is finite; no two infinite residue classes exist")]
    FiniteSet,
    #[error("language has only {members} members up to length {max_len}, need at least {needed}")]
    FiniteLanguage {
        members: usize,
        max_len: usize,
        needed: usize,
    },
    #[error("strategy {strategy} did not verify")]
    StrategyFailed {
        strategy: String,
        certificate: Box<crate::dissector::DissectionCertificate>,
    },
    #[error("critical matrix has no nonzero period row")]
    NoPeriodRow,
    #[error("triple ({a},{b},{k}) needs 1 ≤ a and b < a")]
    BadTriple { a: u64, b: u64, k: u64 },
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Grammar(#[from] GrammarError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeparationError {
    #[error("cover check failed: {0}")]
    CoverCheckFailed(String),
    #[error("margin language could not be dissected")]
    StrategyFailed(Box<crate::dissector::DissectionCertificate>),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Dissect(#[from] DissectError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HierarchyError {
    #[error("ill-formed class expression: {0}")]
    IllFormed(String),
    #[error("no level bound derivable for {0}")]
    NoBoundDerived(String),
    #[error("level {level} exceeds the largest join normalize will build ({limit} terms)")]
    JoinTooLarge { level: usize, limit: usize },
}

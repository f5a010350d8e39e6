use alloc::string::String;

/// Errors reported by the algorithms of this crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("hyperedge {0} is empty")]
    EmptyEdge(usize),
    #[error("edge node `{0}` is not a declared node")]
    UndeclaredNode(String),
    #[error("hypergraph has no edges")]
    EmptyHypergraph,
    #[error("hypergraph is not acyclic")]
    NotAcyclic,
    #[error("expansion would produce {requested} edges, cap is {cap}")]
    ExpansionTooLarge { requested: u128, cap: u128 },
    #[error("edge of arity {arity} exceeds the arity cap {cap}")]
    ArityCapExceeded { arity: usize, cap: usize },
    #[error("database has no relation `{0}`")]
    MissingRelation(String),
    #[error("relation `{relation}` has arity {expected}, found {found}")]
    ArityMismatch {
        relation: String,
        expected: usize,
        found: usize,
    },
    #[error("atom {0} has no variables")]
    DegenerateAtom(usize),
    #[error("query has no atoms")]
    EmptyQuery,
    #[error("{atoms} atoms exceed the core enumeration cap {cap}")]
    CapExceeded { atoms: usize, cap: usize },
    #[error("variable `{0}` does not occur in the query")]
    VarsOutOfRange(String),
    #[error("empty variable set")]
    EmptyVarSet,
    #[error("invalid view system: {0}")]
    InvalidViewSystem(String),
    #[error("database is not legal: {0}")]
    NotLegal(String),
    #[error("strategy is not winning")]
    NotWinning,
    #[error("strategy is not nice")]
    NotNice,
    #[error("strategy is not monotone")]
    NotMonotone,
    #[error("sandwich violation: {0}")]
    SandwichViolation(String),
    #[error("output variables are not contained in any view")]
    OUnsupported,
    #[error("no view covers the output variables")]
    NoCoveringView,
    #[error("plan has not been fully reduced")]
    NotReduced,
    #[error("output variable `{0}` is not covered by the plan")]
    OutputNotCovered(String),
    #[error("syntax error: {0}")]
    Syntax(String),
}

impl Error {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            Error::EmptyEdge(_) => "EmptyEdge",
            Error::UndeclaredNode(_) => "UndeclaredNode",
            Error::EmptyHypergraph => "EmptyHypergraph",
            Error::NotAcyclic => "NotAcyclic",
            Error::ExpansionTooLarge { .. } => "ExpansionTooLarge",
            Error::ArityCapExceeded { .. } => "ArityCapExceeded",
            Error::MissingRelation(_) => "MissingRelation",
            Error::ArityMismatch { .. } => "ArityMismatch",
            Error::DegenerateAtom(_) => "DegenerateAtom",
            Error::EmptyQuery => "EmptyQuery",
            Error::CapExceeded { .. } => "CapExceeded",
            Error::VarsOutOfRange(_) => "VarsOutOfRange",
            Error::EmptyVarSet => "EmptyVarSet",
            Error::InvalidViewSystem(_) => "InvalidViewSystem",
            Error::NotLegal(_) => "NotLegal",
            Error::NotWinning => "NotWinning",
            Error::NotNice => "NotNice",
            Error::NotMonotone => "NotMonotone",
            Error::SandwichViolation(_) => "SandwichViolation",
            Error::OUnsupported => "OUnsupported",
            Error::NoCoveringView => "NoCoveringView",
            Error::NotReduced => "NotReduced",
            Error::OutputNotCovered(_) => "OutputNotCovered",
            Error::Syntax(_) => "Syntax",
        }
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

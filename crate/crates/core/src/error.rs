use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed type string {input:?}: {reason}")]
    MalformedType { input: String, reason: String },

    #[error("type {0:?} is not a finite Coxeter type")]
    NonFinite(String),

    #[error("group {type_string} has {order} elements, above the bound of {bound}")]
    TooLarge { type_string: String, order: String, bound: usize },

    #[error("malformed word {input:?}: {reason}")]
    MalformedWord { input: String, reason: String },

    #[error("Hecke element is in the {found} basis, expected the {expected} basis")]
    WrongBasis { expected: &'static str, found: &'static str },

    #[error("{element} is not in {subset}")]
    OutsideCell { element: String, subset: &'static str },

    #[error("no two-sided cell matches the selector: {0}")]
    NoSuchCell(String),

    #[error("selector is ambiguous, {count} two-sided cells have a = {a}; pass --containing")]
    AmbiguousCell { a: u32, count: usize },

    #[error("negative multiplicity {value} for {context}")]
    NegativeMultiplicity { value: i64, context: String },

    #[error("cache: {0}")]
    Cache(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

use std::path::PathBuf;

use thiserror::Error;

use crate::af::Argument;
use crate::label::Label;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument id {0:?}")]
    InvalidArgumentId(String),

    #[error("unknown argument `{0}`")]
    UnknownArgument(Argument),

    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("label `{0}` is not in the label alphabet")]
    LabelNotInAlphabet(Label),

    #[error("labelling domain does not match: {0}")]
    DomainMismatch(String),

    #[error("table headers differ")]
    HeaderMismatch,

    #[error("table headers overlap on `{0}`")]
    HeaderOverlap(Argument),

    #[error("argument sets do not partition the header: {0}")]
    NotAPartition(String),

    #[error("unknown table `{0}`")]
    UnknownTable(String),

    #[error("duplicate table `{0}`")]
    DuplicateTable(String),

    #[error("{0}")]
    Query(#[from] QueryError),

    #[error("framework too large for exhaustive enumeration ({0} arguments)")]
    TooLarge(usize),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// Static errors raised while parsing or checking a query.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown table `{0}`")]
    UnknownTable(String),

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("`{var}.{arg}`: `{arg}` is not in the argument set bound to `{var}`")]
    ArgumentOutsideBinding { var: String, arg: Argument },

    #[error("variable `{0}` is free but is not the query variable")]
    FreeVariable(String),

    #[error("variable `{0}` is not bound")]
    UnboundVariable(String),

    #[error("`{table}({var})`: the argument set of `{var}` is not within the header of `{table}`")]
    BindingOutsideHeader { table: String, var: String },

    #[error("variable `{0}` is not guarded by a table membership atom")]
    Unguarded(String),

    #[error("universe of {0} candidate labellings is too large to enumerate")]
    UniverseTooLarge(u128),
}

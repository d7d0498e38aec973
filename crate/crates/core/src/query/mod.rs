//! The query calculus: a tuple relational calculus over arg-labelling
//! tables, extended with `count` comparisons.
//!
//! [`parse_query`] reads the concrete syntax and runs the static checks;
//! printing a [`QueryExpr`] yields text that parses back to the same tree.

mod ast;
mod check;
mod parse;
mod print;

pub use ast::{Atom, CountTerm, Formula, QueryExpr, Var};
pub use check::{check_wellformed, guard_tables, Binding, WellFormedReport};
pub(crate) use check::check_open_formula;
pub use parse::{parse_formula, parse_query_syntax};

use crate::db::Schema;
use crate::error::QueryError;

/// Parses a query and checks it against `schema`.
pub fn parse_query(text: &str, schema: &Schema) -> Result<QueryExpr, QueryError> {
    let q = parse_query_syntax(text, Some(schema))?;
    check_wellformed(&q, schema)?;
    Ok(q)
}

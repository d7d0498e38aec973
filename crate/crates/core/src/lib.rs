//! Argumentation labelling semantics as a relational database.
//!
//! Frameworks ([`af`]) yield labelling semantics ([`semantics`]) that are
//! stored as arg-labelling tables ([`table`]) in a [`db::Database`]. Tables
//! are queried with a tuple relational calculus extended with label counts
//! ([`query`], [`eval`]); [`catalog`] builds the queries that recover the
//! classic, partial, dependent and multi-agent semantics, and [`sqlgen`]
//! exports databases and range-restricted queries as SQL.

pub mod af;
pub mod catalog;
pub mod db;
pub mod error;
pub mod eval;
pub mod fixtures;
pub mod format;
pub mod io;
pub mod label;
pub mod query;
pub mod semantics;
pub mod sqlgen;
pub mod table;

pub use af::{Argument, ArgumentationFramework};
pub use db::{Database, Schema};
pub use error::{Error, QueryError, Result};
pub use label::{Label, Labelling};
pub use semantics::{SemanticsKind, Sense};
pub use table::ArgLabellingTable;

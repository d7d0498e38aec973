//! Schemas and databases: named arg-labelling tables over a shared label
//! alphabet.

use std::collections::{BTreeMap, BTreeSet};

use crate::af::Argument;
use crate::error::{Error, Result};
use crate::label::Label;
use crate::table::ArgLabellingTable;

/// A label alphabet plus the header of each table name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    labels: Vec<Label>,
    headers: BTreeMap<String, BTreeSet<Argument>>,
}

impl Schema {
    /// The alphabet is sorted and deduplicated; it must contain `in`.
    pub fn new(
        labels: impl IntoIterator<Item = Label>,
        headers: BTreeMap<String, BTreeSet<Argument>>,
    ) -> Result<Self> {
        let labels: BTreeSet<Label> = labels.into_iter().collect();
        if !labels.contains(&Label::In) {
            return Err(Error::UnknownLabel("alphabet must contain `in`".into()));
        }
        Ok(Schema {
            labels: labels.into_iter().collect(),
            headers,
        })
    }

    /// The label alphabet in canonical order.
    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn has_label(&self, l: Label) -> bool {
        self.labels.contains(&l)
    }

    pub fn table_names(&self) -> impl Iterator<Item = &str> {
        self.headers.keys().map(String::as_str)
    }

    pub fn header(&self, table: &str) -> Result<&BTreeSet<Argument>> {
        self.headers
            .get(table)
            .ok_or_else(|| Error::UnknownTable(table.to_string()))
    }
}

/// A schema together with a body for every table name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Database {
    schema: Schema,
    tables: BTreeMap<String, ArgLabellingTable>,
}

impl Database {
    pub fn new(
        labels: impl IntoIterator<Item = Label>,
        tables: impl IntoIterator<Item = (String, ArgLabellingTable)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (name, table) in tables {
            if map.insert(name.clone(), table).is_some() {
                return Err(Error::DuplicateTable(name));
            }
        }
        let headers = map.iter().map(|(n, t)| (n.clone(), t.header_set())).collect();
        let schema = Schema::new(labels, headers)?;
        for table in map.values() {
            for row in table.raw_rows() {
                if let Some(l) = row.iter().find(|l| !schema.has_label(**l)) {
                    return Err(Error::LabelNotInAlphabet(*l));
                }
            }
        }
        Ok(Database { schema, tables: map })
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn table(&self, name: &str) -> Result<&ArgLabellingTable> {
        self.tables
            .get(name)
            .ok_or_else(|| Error::UnknownTable(name.to_string()))
    }

    pub fn tables(&self) -> impl Iterator<Item = (&str, &ArgLabellingTable)> {
        self.tables.iter().map(|(n, t)| (n.as_str(), t))
    }

    /// Returns a copy with one more (or a replaced) table.
    pub fn with_table(&self, name: &str, table: ArgLabellingTable) -> Result<Self> {
        let mut tables = self.tables.clone();
        tables.insert(name.to_string(), table);
        Database::new(self.schema.labels.iter().copied(), tables)
    }
}

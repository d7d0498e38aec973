//! Arg-labelling tables: a header of arguments and a duplicate-free body of
//! labellings whose domain is exactly the header.
//!
//! Rows are stored as label vectors aligned with the header sorted by
//! argument id, which is also the canonical serialization order.

use std::collections::BTreeSet;

use crate::af::Argument;
use crate::error::{Error, Result};
use crate::label::{Label, Labelling};

pub type Row = Vec<Label>;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ArgLabellingTable {
    header: Vec<Argument>,
    rows: BTreeSet<Row>,
}

impl ArgLabellingTable {
    /// Builds a table, rejecting any row whose domain is not the header.
    pub fn new(
        header: BTreeSet<Argument>,
        rows: impl IntoIterator<Item = Labelling>,
    ) -> Result<Self> {
        let mut table = ArgLabellingTable::empty(header);
        for lab in rows {
            table.push(&lab)?;
        }
        Ok(table)
    }

    pub fn empty(header: BTreeSet<Argument>) -> Self {
        ArgLabellingTable {
            header: header.into_iter().collect(),
            rows: BTreeSet::new(),
        }
    }

    /// Builds a table from label vectors aligned with the sorted header.
    pub fn from_raw(header: BTreeSet<Argument>, rows: impl IntoIterator<Item = Row>) -> Result<Self> {
        let header: Vec<Argument> = header.into_iter().collect();
        let rows: BTreeSet<Row> = rows.into_iter().collect();
        if let Some(bad) = rows.iter().find(|r| r.len() != header.len()) {
            return Err(Error::DomainMismatch(format!(
                "row has {} labels, header has {} arguments",
                bad.len(),
                header.len()
            )));
        }
        Ok(ArgLabellingTable { header, rows })
    }

    fn push(&mut self, lab: &Labelling) -> Result<()> {
        let row = self.row_of(lab).ok_or_else(|| {
            Error::DomainMismatch(format!("row {lab} does not cover exactly the header"))
        })?;
        self.rows.insert(row);
        Ok(())
    }

    /// The label vector of `lab` if its domain is exactly the header.
    fn row_of(&self, lab: &Labelling) -> Option<Row> {
        if lab.len() != self.header.len() {
            return None;
        }
        self.header.iter().map(|a| lab.get(a)).collect()
    }

    /// Header arguments in ascending id order.
    pub fn header(&self) -> &[Argument] {
        &self.header
    }

    pub fn header_set(&self) -> BTreeSet<Argument> {
        self.header.iter().cloned().collect()
    }

    pub fn raw_rows(&self) -> &BTreeSet<Row> {
        &self.rows
    }

    pub fn rows(&self) -> impl Iterator<Item = Labelling> + '_ {
        self.rows
            .iter()
            .map(|r| Labelling::from_row(&self.header, r.iter().copied()))
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn contains(&self, lab: &Labelling) -> bool {
        self.row_of(lab).is_some_and(|r| self.rows.contains(&r))
    }

    fn column_positions(&self, cols: &BTreeSet<Argument>) -> Result<Vec<usize>> {
        cols.iter()
            .map(|a| {
                self.header
                    .binary_search(a)
                    .map_err(|_| Error::UnknownArgument(a.clone()))
            })
            .collect()
    }

    /// Keeps the columns in `cols`, merging rows that become equal.
    pub fn project(&self, cols: &BTreeSet<Argument>) -> Result<Self> {
        let positions = self.column_positions(cols)?;
        let rows = self
            .rows
            .iter()
            .map(|r| positions.iter().map(|&i| r[i]).collect())
            .collect();
        Ok(ArgLabellingTable {
            header: cols.iter().cloned().collect(),
            rows,
        })
    }

    pub fn select_rows(&self, mut predicate: impl FnMut(&Labelling) -> bool) -> Self {
        let rows = self
            .rows
            .iter()
            .filter(|r| predicate(&Labelling::from_row(&self.header, r.iter().copied())))
            .cloned()
            .collect();
        ArgLabellingTable {
            header: self.header.clone(),
            rows,
        }
    }

    /// Every labelling over `target_header` whose restrictions to the two
    /// (disjoint) headers are rows of `left` and `right`, optionally kept
    /// only if it is also a row of `membership`.
    pub fn condition_join(
        left: &Self,
        right: &Self,
        target_header: &BTreeSet<Argument>,
        membership: Option<&Self>,
    ) -> Result<Self> {
        if let Some(a) = left.header.iter().find(|a| right.header.binary_search(a).is_ok()) {
            return Err(Error::HeaderOverlap(a.clone()));
        }
        let union: BTreeSet<Argument> = left.header.iter().chain(&right.header).cloned().collect();
        if &union != target_header {
            return Err(Error::NotAPartition(
                "the joined headers must make up the target header".into(),
            ));
        }
        if let Some(m) = membership {
            if m.header_set() != *target_header {
                return Err(Error::HeaderMismatch);
            }
        }
        let mut out = ArgLabellingTable::empty(target_header.clone());
        for l in left.rows() {
            for r in right.rows() {
                let joined: Labelling = l.iter().chain(r.iter()).map(|(a, x)| (a.clone(), x)).collect();
                if membership.map_or(true, |m| m.contains(&joined)) {
                    out.push(&joined)?;
                }
            }
        }
        Ok(out)
    }

    fn same_header(&self, other: &Self) -> Result<()> {
        if self.header == other.header {
            Ok(())
        } else {
            Err(Error::HeaderMismatch)
        }
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.same_header(other)?;
        Ok(ArgLabellingTable {
            header: self.header.clone(),
            rows: self.rows.union(&other.rows).cloned().collect(),
        })
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.same_header(other)?;
        Ok(ArgLabellingTable {
            header: self.header.clone(),
            rows: self.rows.intersection(&other.rows).cloned().collect(),
        })
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.same_header(other)?;
        Ok(ArgLabellingTable {
            header: self.header.clone(),
            rows: self.rows.difference(&other.rows).cloned().collect(),
        })
    }
}

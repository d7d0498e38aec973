//! Labels, labellings, and the predicates defined on single labellings.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::af::{Argument, ArgumentationFramework};
use crate::error::{Error, Result};

/// A label. `Lc` is the complement of `In` used by the weak (two-valued)
/// labellings and is written `lc`.
///
/// The derived order (`in < out < und < lc`) fixes the canonical row order
/// of tables and the enumeration order of quantifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    In,
    Out,
    Und,
    Lc,
}

impl Label {
    pub const ALL: [Label; 4] = [Label::In, Label::Out, Label::Und, Label::Lc];

    pub fn as_str(self) -> &'static str {
        match self {
            Label::In => "in",
            Label::Out => "out",
            Label::Und => "und",
            Label::Lc => "lc",
        }
    }

    /// `in` and `out` are commitments; `und` and `lc` are not.
    pub fn is_decided(self) -> bool {
        matches!(self, Label::In | Label::Out)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "in" => Ok(Label::In),
            "out" => Ok(Label::Out),
            "und" => Ok(Label::Und),
            "lc" => Ok(Label::Lc),
            other => Err(Error::UnknownLabel(other.to_string())),
        }
    }
}

/// A partial function from arguments to labels.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Labelling(BTreeMap<Argument, Label>);

impl Labelling {
    pub fn new() -> Self {
        Labelling(BTreeMap::new())
    }

    /// Pairs arguments (in header order) with labels.
    pub fn from_row<'a>(
        header: impl IntoIterator<Item = &'a Argument>,
        labels: impl IntoIterator<Item = Label>,
    ) -> Self {
        Labelling(header.into_iter().cloned().zip(labels).collect())
    }

    pub fn insert(&mut self, a: Argument, l: Label) -> Option<Label> {
        self.0.insert(a, l)
    }

    pub fn get(&self, a: &Argument) -> Option<Label> {
        self.0.get(a).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Argument, Label)> {
        self.0.iter().map(|(a, l)| (a, *l))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn domain(&self) -> BTreeSet<Argument> {
        self.0.keys().cloned().collect()
    }

    /// Labels in ascending argument-id order.
    pub fn labels(&self) -> Vec<Label> {
        self.0.values().copied().collect()
    }

    pub fn with_label(&self, l: Label) -> BTreeSet<Argument> {
        self.iter()
            .filter(|(_, x)| *x == l)
            .map(|(a, _)| a.clone())
            .collect()
    }

    pub fn in_set(&self) -> BTreeSet<Argument> {
        self.with_label(Label::In)
    }

    pub fn count(&self, l: Label) -> usize {
        self.0.values().filter(|x| **x == l).count()
    }

    pub fn used_labels(&self) -> BTreeSet<Label> {
        self.0.values().copied().collect()
    }

    pub fn restrict(&self, subset: &BTreeSet<Argument>) -> Result<Labelling> {
        subset
            .iter()
            .map(|a| {
                self.get(a)
                    .map(|l| (a.clone(), l))
                    .ok_or_else(|| Error::DomainMismatch(format!("`{a}` is not labelled")))
            })
            .collect::<Result<BTreeMap<_, _>>>()
            .map(Labelling)
    }

    /// No two `in` arguments attack each other.
    pub fn is_conflict_free(&self, af: &ArgumentationFramework) -> Result<bool> {
        for a in self.0.keys() {
            if !af.contains(a) {
                return Err(Error::UnknownArgument(a.clone()));
            }
        }
        let ins = self.in_set();
        Ok(!af
            .attacks()
            .iter()
            .any(|(from, to)| ins.contains(from) && ins.contains(to)))
    }

    /// The literal three-clause order: equal domains, equal sets of used
    /// labels, and every label other than `und`/`lc` carried over.
    ///
    /// Complete labellings using different label sets are incomparable under
    /// this order, so the semantics use [`Labelling::commitment_leq`].
    pub fn literal_preceq(&self, other: &Labelling) -> bool {
        if self.domain() != other.domain() || self.used_labels() != other.used_labels() {
            return false;
        }
        self.iter()
            .all(|(a, l)| matches!(l, Label::Und | Label::Lc) || other.get(a) == Some(l))
    }

    /// Every `in`/`out` commitment of `self` is kept by `other`.
    pub fn commitment_leq(&self, other: &Labelling) -> Result<bool> {
        if self.domain() != other.domain() {
            return Err(Error::DomainMismatch(
                "commitment order needs equal domains".into(),
            ));
        }
        Ok(self
            .iter()
            .all(|(a, l)| !l.is_decided() || other.get(a) == Some(l)))
    }
}

impl FromIterator<(Argument, Label)> for Labelling {
    fn from_iter<T: IntoIterator<Item = (Argument, Label)>>(iter: T) -> Self {
        Labelling(iter.into_iter().collect())
    }
}

impl fmt::Display for Labelling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (a, l)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}: {l}")?;
        }
        f.write_str("}")
    }
}

/// Every attacker of `a` is attacked by some member of `group`.
pub fn defends(
    af: &ArgumentationFramework,
    group: &BTreeSet<Argument>,
    a: &Argument,
) -> Result<bool> {
    for g in group {
        if !af.contains(g) {
            return Err(Error::UnknownArgument(g.clone()));
        }
    }
    Ok(af
        .attackers(a)?
        .iter()
        .all(|x| group.iter().any(|g| af.attacks_between(g, x))))
}

//! Abstract argumentation frameworks: a finite set of arguments and an
//! attack relation over them.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An argument, identified by its id.
///
/// Ids are non-empty and contain no whitespace and none of `. , { } |`, so
/// they can be written unquoted in APX, TGF and query text.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Argument(String);

impl Argument {
    pub fn new(id: impl Into<String>) -> Result<Self> {
        let id = id.into();
        if Self::is_valid_id(&id) {
            Ok(Argument(id))
        } else {
            Err(Error::InvalidArgumentId(id))
        }
    }

    pub fn is_valid_id(id: &str) -> bool {
        !id.is_empty()
            && !id
                .chars()
                .any(|c| c.is_whitespace() || matches!(c, '.' | ',' | '{' | '}' | '|'))
    }

    pub fn id(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Argument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Argument {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Argument::new(s)
    }
}

impl TryFrom<String> for Argument {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        Argument::new(s)
    }
}

impl From<Argument> for String {
    fn from(a: Argument) -> String {
        a.0
    }
}

/// Builds a set of arguments from ids, panicking on an invalid id.
///
/// Intended for tests and fixtures where ids are literals.
pub fn args<I, S>(ids: I) -> BTreeSet<Argument>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    ids.into_iter()
        .map(|s| Argument::new(s.as_ref()).expect("valid argument id"))
        .collect()
}

pub fn arg(id: &str) -> Argument {
    Argument::new(id).expect("valid argument id")
}

/// A finite argumentation framework `(A, R)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ArgumentationFramework {
    arguments: BTreeSet<Argument>,
    attacks: BTreeSet<(Argument, Argument)>,
}

impl ArgumentationFramework {
    /// Fails if an attack mentions an argument that is not declared.
    pub fn new(
        arguments: impl IntoIterator<Item = Argument>,
        attacks: impl IntoIterator<Item = (Argument, Argument)>,
    ) -> Result<Self> {
        let arguments: BTreeSet<Argument> = arguments.into_iter().collect();
        let attacks: BTreeSet<(Argument, Argument)> = attacks.into_iter().collect();
        for (from, to) in &attacks {
            for end in [from, to] {
                if !arguments.contains(end) {
                    return Err(Error::UnknownArgument(end.clone()));
                }
            }
        }
        Ok(ArgumentationFramework { arguments, attacks })
    }

    pub fn arguments(&self) -> &BTreeSet<Argument> {
        &self.arguments
    }

    pub fn attacks(&self) -> &BTreeSet<(Argument, Argument)> {
        &self.attacks
    }

    pub fn len(&self) -> usize {
        self.arguments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arguments.is_empty()
    }

    pub fn contains(&self, a: &Argument) -> bool {
        self.arguments.contains(a)
    }

    pub fn attacks_between(&self, from: &Argument, to: &Argument) -> bool {
        self.attacks.contains(&(from.clone(), to.clone()))
    }

    fn check_known(&self, a: &Argument) -> Result<()> {
        if self.arguments.contains(a) {
            Ok(())
        } else {
            Err(Error::UnknownArgument(a.clone()))
        }
    }

    /// `{ x | (x, a) ∈ R }`
    pub fn attackers(&self, a: &Argument) -> Result<BTreeSet<Argument>> {
        self.check_known(a)?;
        Ok(self
            .attacks
            .iter()
            .filter(|(_, to)| to == a)
            .map(|(from, _)| from.clone())
            .collect())
    }

    /// The sub-framework induced by `subset`.
    pub fn restrict(&self, subset: &BTreeSet<Argument>) -> Result<Self> {
        for a in subset {
            self.check_known(a)?;
        }
        let attacks = self
            .attacks
            .iter()
            .filter(|(from, to)| subset.contains(from) && subset.contains(to))
            .cloned()
            .collect();
        Ok(ArgumentationFramework {
            arguments: subset.clone(),
            attacks,
        })
    }

    /// Every argument with a (possibly empty) attack path to `a`, `a` included.
    pub fn relevance_set(&self, a: &Argument) -> Result<BTreeSet<Argument>> {
        self.check_known(a)?;
        let mut seen = BTreeSet::from([a.clone()]);
        let mut frontier = vec![a.clone()];
        while let Some(x) = frontier.pop() {
            for (from, to) in &self.attacks {
                if *to == x && seen.insert(from.clone()) {
                    frontier.push(from.clone());
                }
            }
        }
        Ok(seen)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::example1_framework;

    #[test]
    fn argument_ids_are_validated() {
        assert!(Argument::new("a_1").is_ok());
        assert!(Argument::new("7").is_ok());
        for bad in ["", "a b", "a.b", "a,b", "{a", "a}", "a|b"] {
            assert!(Argument::new(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn undeclared_attack_endpoint_is_rejected() {
        let err = ArgumentationFramework::new(args(["a"]), [(arg("a"), arg("b"))]);
        assert!(matches!(err, Err(Error::UnknownArgument(a)) if a.id() == "b"));
    }

    #[test]
    fn attackers_of_example_one() {
        let af = example1_framework();
        assert_eq!(af.attackers(&arg("aC")).unwrap(), args(["aD", "aA"]));
        assert!(af.attackers(&arg("aF")).unwrap().is_empty());
        assert!(af.attackers(&arg("zz")).is_err());
    }

    #[test]
    fn isolated_node_has_no_attackers() {
        let af = ArgumentationFramework::new(args(["x", "y"]), [(arg("x"), arg("x"))]).unwrap();
        assert!(af.attackers(&arg("y")).unwrap().is_empty());
        assert_eq!(af.relevance_set(&arg("y")).unwrap(), args(["y"]));
    }

    #[test]
    fn restrict_to_agent_one_knowledge() {
        let af = example1_framework();
        let sub = af.restrict(&args(["aG", "aF", "aE", "aD"])).unwrap();
        let expected: BTreeSet<_> = [("aF", "aG"), ("aE", "aD"), ("aD", "aE")]
            .into_iter()
            .map(|(x, y)| (arg(x), arg(y)))
            .collect();
        assert_eq!(sub.attacks(), &expected);
        assert_eq!(af.restrict(af.arguments()).unwrap(), af);
        assert_eq!(
            af.restrict(&BTreeSet::new()).unwrap(),
            ArgumentationFramework::default()
        );
        assert!(af.restrict(&args(["aA", "nope"])).is_err());
    }

    #[test]
    fn relevance_of_b() {
        let af = example1_framework();
        assert_eq!(
            af.relevance_set(&arg("aB")).unwrap(),
            args(["aE", "aD", "aC", "aB", "aA"])
        );
        assert_eq!(af.relevance_set(&arg("aF")).unwrap(), args(["aF"]));
        assert_eq!(af.relevance_set(&arg("aG")).unwrap(), args(["aG", "aF"]));
    }
}

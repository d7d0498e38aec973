//! Concrete syntax output. Parentheses are emitted only where the
//! precedence (`not` > `and` > `or`, both binary operators left-associative)
//! would otherwise regroup the tree, so printing then parsing returns the
//! same tree.

use std::collections::BTreeSet;
use std::fmt;

use super::ast::{Atom, CountTerm, Formula, QueryExpr};
use crate::af::Argument;

pub(crate) struct ArgSet<'a>(pub &'a BTreeSet<Argument>);

impl fmt::Display for ArgSet<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Display for CountTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "count({}, \"{}\")", self.var, self.label)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::ArgEqArg {
                left,
                left_arg,
                right,
                right_arg,
            } => write!(f, "{left}.{left_arg} == {right}.{right_arg}"),
            Atom::ArgEqLabel { var, arg, label } => write!(f, "{var}.{arg} == \"{label}\""),
            Atom::Member { table, var } => write!(f, "{table}({var})"),
            Atom::CountLeCount { left, right } => write!(f, "{left} <= {right}"),
            Atom::CountLeNat { count, n } => write!(f, "{count} <= {n}"),
            Atom::NatLeCount { n, count } => write!(f, "{n} <= {count}"),
        }
    }
}

const OR: u8 = 0;
const AND: u8 = 1;
const UNARY: u8 = 2;

fn write_at(f: &mut fmt::Formatter<'_>, formula: &Formula, level: u8) -> fmt::Result {
    let (own, parens) = match formula {
        Formula::Or(..) => (OR, level > OR),
        Formula::And(..) => (AND, level > AND),
        _ => (UNARY, false),
    };
    if parens {
        f.write_str("(")?;
    }
    match formula {
        Formula::Atom(a) => write!(f, "{a}")?,
        Formula::Not(g) => {
            f.write_str("not ")?;
            write_at(f, g, UNARY)?;
        }
        Formula::And(l, r) | Formula::Or(l, r) => {
            write_at(f, l, own)?;
            f.write_str(if own == AND { " and " } else { " or " })?;
            write_at(f, r, own + 1)?;
        }
        Formula::Exists { var, args, body } => {
            write!(f, "exists {var} : {} [ ", ArgSet(args))?;
            write_at(f, body, OR)?;
            f.write_str(" ]")?;
        }
        Formula::Forall { var, args, body } => {
            write!(f, "forall {var} : {} [ ", ArgSet(args))?;
            write_at(f, body, OR)?;
            f.write_str(" ]")?;
        }
    }
    if parens {
        f.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(f, self, OR)
    }
}

impl fmt::Display for QueryExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{ {} : {} | {} }}", self.var, ArgSet(&self.args), self.formula)
    }
}

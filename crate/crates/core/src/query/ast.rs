use std::collections::BTreeSet;

use crate::af::Argument;
use crate::label::Label;

pub type Var = String;

/// `count(var, label)`
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CountTerm {
    pub var: Var,
    pub label: Label,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Atom {
    /// `v.a == w.b`
    ArgEqArg {
        left: Var,
        left_arg: Argument,
        right: Var,
        right_arg: Argument,
    },
    /// `v.a == "l"`
    ArgEqLabel { var: Var, arg: Argument, label: Label },
    /// `tbl(v)`
    Member { table: String, var: Var },
    /// `count(v, "l") <= count(w, "m")`
    CountLeCount { left: CountTerm, right: CountTerm },
    /// `count(v, "l") <= n`
    CountLeNat { count: CountTerm, n: u64 },
    /// `n <= count(v, "l")`
    NatLeCount { n: u64, count: CountTerm },
}

impl Atom {
    /// Variables mentioned by the atom.
    pub fn vars(&self) -> Vec<&Var> {
        match self {
            Atom::ArgEqArg { left, right, .. } => vec![left, right],
            Atom::ArgEqLabel { var, .. } | Atom::Member { var, .. } => vec![var],
            Atom::CountLeCount { left, right } => vec![&left.var, &right.var],
            Atom::CountLeNat { count, .. } | Atom::NatLeCount { count, .. } => vec![&count.var],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Exists {
        var: Var,
        args: BTreeSet<Argument>,
        body: Box<Formula>,
    },
    Forall {
        var: Var,
        args: BTreeSet<Argument>,
        body: Box<Formula>,
    },
}

impl Formula {
    pub fn member(table: &str, var: &str) -> Self {
        Formula::Atom(Atom::Member {
            table: table.to_string(),
            var: var.to_string(),
        })
    }

    pub fn arg_eq_label(var: &str, arg: &Argument, label: Label) -> Self {
        Formula::Atom(Atom::ArgEqLabel {
            var: var.to_string(),
            arg: arg.clone(),
            label,
        })
    }

    pub fn arg_eq_arg(left: &str, left_arg: &Argument, right: &str, right_arg: &Argument) -> Self {
        Formula::Atom(Atom::ArgEqArg {
            left: left.to_string(),
            left_arg: left_arg.clone(),
            right: right.to_string(),
            right_arg: right_arg.clone(),
        })
    }

    pub fn nat_le_count(n: u64, var: &str, label: Label) -> Self {
        Formula::Atom(Atom::NatLeCount {
            n,
            count: CountTerm {
                var: var.to_string(),
                label,
            },
        })
    }

    pub fn count_le_count(left: &str, left_label: Label, right: &str, right_label: Label) -> Self {
        Formula::Atom(Atom::CountLeCount {
            left: CountTerm {
                var: left.to_string(),
                label: left_label,
            },
            right: CountTerm {
                var: right.to_string(),
                label: right_label,
            },
        })
    }

    /// `0 <= count(var, "in")`, which holds for every labelling. Stands in
    /// for an empty conjunction, since the calculus has no `true`.
    pub fn tautology(var: &str) -> Self {
        Formula::nat_le_count(0, var, Label::In)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn exists(var: &str, args: BTreeSet<Argument>, body: Formula) -> Self {
        Formula::Exists {
            var: var.to_string(),
            args,
            body: Box::new(body),
        }
    }

    pub fn forall(var: &str, args: BTreeSet<Argument>, body: Formula) -> Self {
        Formula::Forall {
            var: var.to_string(),
            args,
            body: Box::new(body),
        }
    }

    /// Left-nested conjunction; `None` when `parts` is empty.
    pub fn conjunction(parts: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        parts.into_iter().reduce(Formula::and)
    }

    pub fn disjunction(parts: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        parts.into_iter().reduce(Formula::or)
    }

    /// Free variables, in order of first occurrence.
    pub fn free_vars(&self) -> Vec<Var> {
        fn go(f: &Formula, bound: &mut Vec<Var>, out: &mut Vec<Var>) {
            match f {
                Formula::Atom(a) => {
                    for v in a.vars() {
                        if !bound.contains(v) && !out.contains(v) {
                            out.push(v.clone());
                        }
                    }
                }
                Formula::Not(g) => go(g, bound, out),
                Formula::And(l, r) | Formula::Or(l, r) => {
                    go(l, bound, out);
                    go(r, bound, out);
                }
                Formula::Exists { var, body, .. } | Formula::Forall { var, body, .. } => {
                    bound.push(var.clone());
                    go(body, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }
}

/// `{ var : args | formula }`
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QueryExpr {
    pub var: Var,
    pub args: BTreeSet<Argument>,
    pub formula: Formula,
}

impl QueryExpr {
    pub fn new(var: &str, args: BTreeSet<Argument>, formula: Formula) -> Self {
        QueryExpr {
            var: var.to_string(),
            args,
            formula,
        }
    }
}

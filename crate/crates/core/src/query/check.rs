//! Static checks: scoping, argument references, table headers, and the
//! guard analysis that decides whether a query is range-restricted.
//!
//! A variable bound by `exists` (or the query binder) is guarded by table
//! `t` when its body implies `t(v)`; a variable bound by `forall` is guarded
//! when the negation of its body implies `t(v)`. Range-restricted queries
//! only ever need candidate labellings drawn from table rows.

use std::collections::BTreeSet;

use super::ast::{Atom, Formula, QueryExpr, Var};
use crate::af::Argument;
use crate::db::Schema;
use crate::error::QueryError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Binding {
    pub var: Var,
    pub args: BTreeSet<Argument>,
    /// Tables any of which alone bounds the variable's candidates.
    pub guards: BTreeSet<String>,
    pub universal: bool,
}

impl Binding {
    pub fn is_guarded(&self) -> bool {
        !self.guards.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WellFormedReport {
    /// Binder first, then quantifiers in pre-order.
    pub bindings: Vec<Binding>,
}

impl WellFormedReport {
    pub fn range_restricted(&self) -> bool {
        self.bindings.iter().all(Binding::is_guarded)
    }

    pub fn unguarded(&self) -> Vec<&str> {
        self.bindings
            .iter()
            .filter(|b| !b.is_guarded())
            .map(|b| b.var.as_str())
            .collect()
    }

    /// Fails with [`QueryError::Unguarded`] naming the first unguarded variable.
    pub fn require_range_restricted(&self) -> Result<(), QueryError> {
        match self.unguarded().first() {
            Some(v) => Err(QueryError::Unguarded(v.to_string())),
            None => Ok(()),
        }
    }
}

/// Tables `t` such that the formula (or its negation, when `positive` is
/// false) implies `t(var)`.
pub fn guard_tables(f: &Formula, var: &str, positive: bool) -> BTreeSet<String> {
    match f {
        Formula::Atom(Atom::Member { table, var: v }) if positive && v == var => {
            BTreeSet::from([table.clone()])
        }
        Formula::Atom(_) => BTreeSet::new(),
        Formula::Not(g) => guard_tables(g, var, !positive),
        Formula::And(l, r) | Formula::Or(l, r) => {
            let a = guard_tables(l, var, positive);
            let b = guard_tables(r, var, positive);
            // A conjunction implies whatever either side implies; its negation
            // only what both negations imply. Dually for disjunction.
            if matches!(f, Formula::And(..)) == positive {
                &a | &b
            } else {
                &a & &b
            }
        }
        Formula::Exists { var: w, body, .. } | Formula::Forall { var: w, body, .. } => {
            if w == var {
                BTreeSet::new()
            } else {
                guard_tables(body, var, positive)
            }
        }
    }
}

struct Checker<'a> {
    schema: &'a Schema,
    scope: Vec<(Var, BTreeSet<Argument>)>,
    bindings: Vec<Binding>,
    /// Report `v.a` outside v's set, and `t(v)` with v's set outside t's
    /// header, as errors (queries) or let them evaluate to false (direct
    /// model checking).
    strict: bool,
}

impl Checker<'_> {
    fn lookup(&self, var: &str) -> Result<&BTreeSet<Argument>, QueryError> {
        self.scope
            .iter()
            .rev()
            .find(|(v, _)| v == var)
            .map(|(_, a)| a)
            .ok_or_else(|| QueryError::FreeVariable(var.to_string()))
    }

    fn arg_ref(&self, var: &str, arg: &Argument) -> Result<(), QueryError> {
        let args = self.lookup(var)?;
        if self.strict && !args.contains(arg) {
            return Err(QueryError::ArgumentOutsideBinding {
                var: var.to_string(),
                arg: arg.clone(),
            });
        }
        Ok(())
    }

    fn label(&self, l: crate::label::Label) -> Result<(), QueryError> {
        if self.schema.has_label(l) {
            Ok(())
        } else {
            Err(QueryError::UnknownLabel(l.to_string()))
        }
    }

    fn atom(&self, a: &Atom) -> Result<(), QueryError> {
        match a {
            Atom::ArgEqArg {
                left,
                left_arg,
                right,
                right_arg,
            } => {
                self.arg_ref(left, left_arg)?;
                self.arg_ref(right, right_arg)
            }
            Atom::ArgEqLabel { var, arg, label } => {
                self.arg_ref(var, arg)?;
                self.label(*label)
            }
            Atom::Member { table, var } => {
                let header = self
                    .schema
                    .header(table)
                    .map_err(|_| QueryError::UnknownTable(table.clone()))?;
                if self.strict && !self.lookup(var)?.is_subset(header) {
                    return Err(QueryError::BindingOutsideHeader {
                        table: table.clone(),
                        var: var.clone(),
                    });
                }
                Ok(())
            }
            Atom::CountLeCount { left, right } => {
                self.lookup(&left.var)?;
                self.lookup(&right.var)?;
                self.label(left.label)?;
                self.label(right.label)
            }
            Atom::CountLeNat { count, .. } | Atom::NatLeCount { count, .. } => {
                self.lookup(&count.var)?;
                self.label(count.label)
            }
        }
    }

    fn formula(&mut self, f: &Formula) -> Result<(), QueryError> {
        match f {
            Formula::Atom(a) => self.atom(a),
            Formula::Not(g) => self.formula(g),
            Formula::And(l, r) | Formula::Or(l, r) => {
                self.formula(l)?;
                self.formula(r)
            }
            Formula::Exists { var, args, body } | Formula::Forall { var, args, body } => {
                let universal = matches!(f, Formula::Forall { .. });
                self.bindings.push(Binding {
                    var: var.clone(),
                    args: args.clone(),
                    guards: guard_tables(body, var, !universal),
                    universal,
                });
                self.scope.push((var.clone(), args.clone()));
                let r = self.formula(body);
                self.scope.pop();
                r
            }
        }
    }
}

/// Checks scoping and table references, and reports per-variable guards.
pub fn check_wellformed(q: &QueryExpr, schema: &Schema) -> Result<WellFormedReport, QueryError> {
    if let Some(v) = q.formula.free_vars().into_iter().find(|v| *v != q.var) {
        return Err(QueryError::FreeVariable(v));
    }
    let mut checker = Checker {
        schema,
        scope: vec![(q.var.clone(), q.args.clone())],
        bindings: vec![Binding {
            var: q.var.clone(),
            args: q.args.clone(),
            guards: guard_tables(&q.formula, &q.var, true),
            universal: false,
        }],
        strict: true,
    };
    checker.formula(&q.formula)?;
    Ok(WellFormedReport {
        bindings: checker.bindings,
    })
}

/// Checks a formula whose free variables are bound externally. Argument and
/// header mismatches are allowed here; they evaluate to false.
pub(crate) fn check_open_formula(
    f: &Formula,
    schema: &Schema,
    env: &[(Var, BTreeSet<Argument>)],
) -> Result<(), QueryError> {
    if let Some(v) = f
        .free_vars()
        .into_iter()
        .find(|v| !env.iter().any(|(e, _)| e == v))
    {
        return Err(QueryError::UnboundVariable(v));
    }
    let mut checker = Checker {
        schema,
        scope: env.to_vec(),
        bindings: Vec::new(),
        strict: false,
    };
    checker.formula(f)
}

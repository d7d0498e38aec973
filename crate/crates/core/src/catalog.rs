//! Queries that recover known semantics from a table of complete labellings
//! (stable, preferred, grounded) and the derived partial, dependent and
//! multi-agent semantics. Every builder returns a range-restricted query.

use std::collections::BTreeSet;

use crate::af::Argument;
use crate::db::Schema;
use crate::error::{Error, QueryError, Result};
use crate::label::Label;
use crate::query::{Formula, QueryExpr};

fn header<'s>(schema: &'s Schema, tbl: &str) -> Result<&'s BTreeSet<Argument>> {
    schema.header(tbl)
}

fn all_of(parts: impl IntoIterator<Item = Formula>, var: &str) -> Formula {
    Formula::conjunction(parts).unwrap_or_else(|| Formula::tautology(var))
}

/// `v.a` agrees with `w.a` for every `a` in `args`.
fn agree(v: &str, w: &str, args: &BTreeSet<Argument>) -> Formula {
    all_of(args.iter().map(|a| Formula::arg_eq_arg(v, a, w, a)), v)
}

/// Every in/out label of `x` is repeated by `y`.
pub fn extends(x: &str, y: &str, args: &BTreeSet<Argument>) -> Formula {
    all_of(
        args.iter().map(|a| {
            Formula::or(
                Formula::and(
                    Formula::not(Formula::arg_eq_label(x, a, Label::In)),
                    Formula::not(Formula::arg_eq_label(x, a, Label::Out)),
                ),
                Formula::arg_eq_arg(y, a, x, a),
            )
        }),
        x,
    )
}

/// Rows without `und` or `lc`. Meaningful for tables of strong-sense
/// complete labellings.
pub fn build_stable_query(schema: &Schema, tbl: &str) -> Result<QueryExpr> {
    let h = header(schema, tbl)?;
    let f = Formula::and(
        Formula::and(
            Formula::member(tbl, "v"),
            Formula::not(Formula::nat_le_count(1, "v", Label::Und)),
        ),
        Formula::not(Formula::nat_le_count(1, "v", Label::Lc)),
    );
    Ok(QueryExpr::new("v", h.clone(), f))
}

/// Rows whose in/out commitments no other row strictly extends.
pub fn build_preferred_query(schema: &Schema, tbl: &str) -> Result<QueryExpr> {
    let h = header(schema, tbl)?;
    let strictly = Formula::and(extends("v", "v2", h), Formula::not(extends("v2", "v", h)));
    let f = Formula::and(
        Formula::member(tbl, "v"),
        Formula::forall(
            "v2",
            h.clone(),
            Formula::or(Formula::not(Formula::member(tbl, "v2")), Formula::not(strictly)),
        ),
    );
    Ok(QueryExpr::new("v", h.clone(), f))
}

/// The row whose commitments every row repeats.
pub fn build_grounded_query(schema: &Schema, tbl: &str) -> Result<QueryExpr> {
    let h = header(schema, tbl)?;
    let f = Formula::and(
        Formula::member(tbl, "v"),
        Formula::forall(
            "v2",
            h.clone(),
            Formula::or(Formula::not(Formula::member(tbl, "v2")), extends("v", "v2", h)),
        ),
    );
    Ok(QueryExpr::new("v", h.clone(), f))
}

/// The preferred query exactly as first written down: it keeps a row only
/// when every row's in/out labels agree with it, so it returns nothing as
/// soon as two rows commit differently. Kept as a negative fixture; it is
/// not range-restricted and needs [`crate::eval::evaluate`].
pub fn printed_preferred_query(schema: &Schema, tbl: &str) -> Result<QueryExpr> {
    let h = header(schema, tbl)?;
    let f = Formula::and(
        Formula::exists(
            "v1",
            h.clone(),
            Formula::and(Formula::member(tbl, "v1"), agree("v", "v1", h)),
        ),
        Formula::forall(
            "v2",
            h.clone(),
            Formula::or(Formula::not(Formula::member(tbl, "v2")), extends("v2", "v", h)),
        ),
    );
    Ok(QueryExpr::new("v", h.clone(), f))
}

/// Projection of `tbl` onto `subset`.
pub fn build_partial_query(schema: &Schema, tbl: &str, subset: &BTreeSet<Argument>) -> Result<QueryExpr> {
    let h = header(schema, tbl)?;
    if let Some(a) = subset.iter().find(|a| !h.contains(*a)) {
        return Err(Error::UnknownArgument(a.clone()));
    }
    Ok(QueryExpr::new("v", subset.clone(), Formula::member(tbl, "v")))
}

/// Rows of `tbl` that carry every given label.
pub fn build_dependent_query(schema: &Schema, tbl: &str, constraints: &[(Argument, Label)]) -> Result<QueryExpr> {
    let h = header(schema, tbl)?;
    for (a, l) in constraints {
        if !h.contains(a) {
            return Err(QueryError::ArgumentOutsideBinding {
                var: "v".into(),
                arg: a.clone(),
            }
            .into());
        }
        if !schema.has_label(*l) {
            return Err(Error::LabelNotInAlphabet(*l));
        }
    }
    let f = constraints
        .iter()
        .fold(Formula::member(tbl, "v"), |f, (a, l)| {
            Formula::and(f, Formula::arg_eq_label("v", a, *l))
        });
    Ok(QueryExpr::new("v", h.clone(), f))
}

/// Rows of `tbl` that agree with some row of `fragments`, a table over a
/// subset of `tbl`'s header.
pub fn build_dependent_table_query(schema: &Schema, tbl: &str, fragments: &str) -> Result<QueryExpr> {
    let h = header(schema, tbl)?;
    let hx = header(schema, fragments)?;
    if let Some(a) = hx.iter().find(|a| !h.contains(*a)) {
        return Err(Error::UnknownArgument(a.clone()));
    }
    let f = Formula::and(
        Formula::member(tbl, "v"),
        Formula::exists(
            "w",
            hx.clone(),
            Formula::and(Formula::member(fragments, "w"), agree("v", "w", hx)),
        ),
    );
    Ok(QueryExpr::new("v", h.clone(), f))
}

/// Rows of `membership` whose restriction to each part's header is a row of
/// that part. Part headers must partition the membership header.
pub fn build_join_query(schema: &Schema, parts: &[&str], membership: &str) -> Result<QueryExpr> {
    let global = header(schema, membership)?;
    let mut covered = BTreeSet::new();
    for p in parts {
        for a in header(schema, p)? {
            if !covered.insert(a.clone()) {
                return Err(Error::NotAPartition(format!("`{a}` is in two parts")));
            }
        }
    }
    if &covered != global {
        return Err(Error::NotAPartition(format!(
            "the parts must cover exactly the header of `{membership}`"
        )));
    }
    let f = parts.iter().enumerate().try_fold(
        Formula::member(membership, "v"),
        |f, (i, p)| -> Result<Formula> {
            let var = format!("v{}", i + 1);
            let h = header(schema, p)?;
            let body = Formula::and(Formula::member(p, &var), agree("v", &var, h));
            Ok(Formula::and(f, Formula::exists(&var, h.clone(), body)))
        },
    )?;
    Ok(QueryExpr::new("v", global.clone(), f))
}

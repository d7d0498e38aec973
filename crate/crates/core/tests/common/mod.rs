//! Seeded generators shared by the integration suites.

#![allow(dead_code)]

use std::collections::BTreeSet;

use arglab::query::{Formula, QueryExpr};
use arglab::table::Row;
use arglab::{ArgLabellingTable, Argument, ArgumentationFramework, Database, Label};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn arg(id: &str) -> Argument {
    Argument::new(id).unwrap()
}

/// `n` arguments `a0 … a(n-1)`; each ordered pair (self-attacks included)
/// is an attack with a density drawn from {0, 0.1, …, 1}.
pub fn random_framework(rng: &mut impl Rng, max_n: usize) -> ArgumentationFramework {
    let n = rng.gen_range(1..=max_n);
    let density = rng.gen_range(0..=10) as f64 / 10.0;
    let args: Vec<Argument> = (0..n).map(|i| arg(&format!("a{i}"))).collect();
    let mut attacks = Vec::new();
    for x in &args {
        for y in &args {
            if rng.gen_bool(density) {
                attacks.push((x.clone(), y.clone()));
            }
        }
    }
    ArgumentationFramework::new(args, attacks).unwrap()
}

pub fn random_subset<T: Clone + Ord>(rng: &mut impl Rng, items: impl IntoIterator<Item = T>, p: f64) -> BTreeSet<T> {
    items.into_iter().filter(|_| rng.gen_bool(p)).collect()
}

/// One to three tables over subsets of `a0 … a4`, each with its own random
/// rows over a random alphabet containing `in`.
pub fn random_database(rng: &mut impl Rng) -> Database {
    let universe: Vec<Argument> = (0..5).map(|i| arg(&format!("a{i}"))).collect();
    let labels: Vec<Label> = if rng.gen_bool(0.5) {
        Label::ALL.to_vec()
    } else {
        let mut ls = vec![Label::In];
        ls.extend(random_subset(rng, [Label::Out, Label::Und, Label::Lc], 0.5));
        ls
    };
    let n_tables = rng.gen_range(1..=3);
    let tables = (0..n_tables).map(|i| {
        let header = random_subset(rng, universe.iter().cloned(), 0.7);
        let n_rows = rng.gen_range(0..=8);
        let rows: Vec<Row> = (0..n_rows)
            .map(|_| header.iter().map(|_| *labels.choose(rng).unwrap()).collect())
            .collect();
        (format!("t{i}"), ArgLabellingTable::from_raw(header, rows).unwrap())
    });
    let tables: Vec<_> = tables.collect();
    Database::new(labels, tables).unwrap()
}

/// Random range-restricted queries over a database.
pub struct QueryGen<'a, R> {
    pub rng: &'a mut R,
    tables: Vec<(String, BTreeSet<Argument>)>,
    labels: Vec<Label>,
    fresh: usize,
}

type Scope = Vec<(String, BTreeSet<Argument>)>;

impl<'a, R: Rng> QueryGen<'a, R> {
    pub fn new(rng: &'a mut R, db: &Database) -> Self {
        let s = db.schema();
        QueryGen {
            rng,
            tables: s
                .table_names()
                .map(|n| (n.to_string(), s.header(n).unwrap().clone()))
                .collect(),
            labels: s.labels().to_vec(),
            fresh: 0,
        }
    }

    fn guard(&mut self) -> (String, BTreeSet<Argument>) {
        let (t, h) = self.tables.choose(self.rng).unwrap().clone();
        let args = random_subset(self.rng, h, 0.7);
        (t, args)
    }

    pub fn query(&mut self) -> QueryExpr {
        let (t, args) = self.guard();
        let scope = vec![("v".to_string(), args.clone())];
        let body = self.formula(&scope, 2);
        QueryExpr::new("v", args, Formula::and(Formula::member(&t, "v"), body))
    }

    fn visible(scope: &Scope) -> Scope {
        let mut out: Scope = Vec::new();
        for (v, a) in scope.iter().rev() {
            if !out.iter().any(|(w, _)| w == v) {
                out.push((v.clone(), a.clone()));
            }
        }
        out
    }

    fn label(&mut self) -> Label {
        *self.labels.choose(self.rng).unwrap()
    }

    fn formula(&mut self, scope: &Scope, depth: usize) -> Formula {
        let roll = self.rng.gen_range(0..100);
        match roll {
            0..=44 => self.atom(scope),
            45..=54 => Formula::not(self.formula(scope, depth)),
            55..=69 => Formula::and(self.formula(scope, depth), self.formula(scope, depth)),
            70..=84 => Formula::or(self.formula(scope, depth), self.formula(scope, depth)),
            _ if depth == 0 => self.atom(scope),
            _ => self.quantifier(scope, depth),
        }
    }

    fn quantifier(&mut self, scope: &Scope, depth: usize) -> Formula {
        let (t, args) = self.guard();
        // occasionally shadow a visible variable
        let var = if self.rng.gen_bool(0.15) {
            Self::visible(scope).choose(self.rng).unwrap().0.clone()
        } else {
            self.fresh += 1;
            format!("w{}", self.fresh)
        };
        let mut inner = scope.clone();
        inner.push((var.clone(), args.clone()));
        let body = self.formula(&inner, depth - 1);
        if self.rng.gen_bool(0.5) {
            Formula::exists(&var, args, Formula::and(Formula::member(&t, &var), body))
        } else {
            Formula::forall(&var, args, Formula::or(Formula::not(Formula::member(&t, &var)), body))
        }
    }

    fn atom(&mut self, scope: &Scope) -> Formula {
        let vis = Self::visible(scope);
        let (v, args) = vis.choose(self.rng).unwrap().clone();
        let (w, wargs) = vis.choose(self.rng).unwrap().clone();
        let arg_of = |rng: &mut R, s: &BTreeSet<Argument>| s.iter().cloned().collect::<Vec<_>>().choose(rng).cloned();
        match self.rng.gen_range(0..6) {
            0 => {
                if let Some(a) = arg_of(self.rng, &args) {
                    let l = self.label();
                    return Formula::arg_eq_label(&v, &a, l);
                }
            }
            1 => {
                if let (Some(a), Some(b)) = (arg_of(self.rng, &args), arg_of(self.rng, &wargs)) {
                    return Formula::arg_eq_arg(&v, &a, &w, &b);
                }
            }
            2 => {
                let fits: Vec<&String> = self
                    .tables
                    .iter()
                    .filter(|(_, h)| args.is_subset(h))
                    .map(|(n, _)| n)
                    .collect();
                if let Some(t) = fits.choose(self.rng) {
                    return Formula::member(t, &v);
                }
            }
            3 => {
                let (l, m) = (self.label(), self.label());
                return Formula::count_le_count(&v, l, &w, m);
            }
            4 => {
                let n = self.rng.gen_range(0..=3);
                let l = self.label();
                return Formula::not(Formula::nat_le_count(n, &v, l));
            }
            _ => {}
        }
        let n = self.rng.gen_range(0..=3);
        let l = self.label();
        Formula::nat_le_count(n, &v, l)
    }
}

/// Runs a `SELECT` and reads its rows as label tuples of the given width.
pub fn sql_rows(conn: &rusqlite::Connection, sql: &str, width: usize) -> BTreeSet<Row> {
    let mut stmt = conn.prepare(sql).unwrap_or_else(|e| panic!("{e}\n{sql}"));
    let mut rows = stmt.query([]).unwrap();
    let mut out = BTreeSet::new();
    while let Some(r) = rows.next().unwrap() {
        let row: Row = (0..width)
            .map(|i| r.get::<_, String>(i).unwrap().parse().unwrap())
            .collect();
        out.insert(row);
    }
    out
}

pub fn load_sql(db: &Database) -> rusqlite::Connection {
    let conn = rusqlite::Connection::open_in_memory().unwrap();
    conn.execute_batch(&arglab::sqlgen::export_schema_sql(db)).unwrap();
    conn
}

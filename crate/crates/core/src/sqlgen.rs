//! SQL export of databases and range-restricted queries.
//!
//! Each table becomes `"arglab_<name>"` with one `TEXT` column per header
//! argument, quoted verbatim. A table with an empty header gets a single
//! `_present` column so that its one possible row can be stored.
//!
//! A query variable is a row alias of its guard table; its value is that
//! row's projection onto the variable's arguments. Membership atoms become
//! `EXISTS` probes on column equality, so they follow the same projection
//! reading as the native evaluator.

use std::fmt::Write;

use crate::af::Argument;
use crate::db::{Database, Schema};
use crate::error::QueryError;
use crate::label::Label;
use crate::query::{check_wellformed, guard_tables, Atom, CountTerm, Formula, QueryExpr};

/// Column name used for tables (and results) without arguments.
pub const PRESENT_COLUMN: &str = "_present";

pub fn quote_ident(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

pub fn table_ident(name: &str) -> String {
    quote_ident(&format!("arglab_{name}"))
}

fn literal(l: Label) -> String {
    format!("'{}'", l.as_str())
}

/// `CREATE TABLE` and `INSERT` statements for every table, in name order.
pub fn export_schema_sql(db: &Database) -> String {
    let labels: Vec<String> = db.schema().labels().iter().map(|&l| literal(l)).collect();
    let labels = labels.join(", ");
    let mut out = String::new();
    for (name, t) in db.tables() {
        let ident = table_ident(name);
        if t.header().is_empty() {
            let col = quote_ident(PRESENT_COLUMN);
            writeln!(out, "CREATE TABLE {ident} (\n  {col} INTEGER NOT NULL CHECK ({col} = 1)\n);").unwrap();
            if !t.is_empty() {
                writeln!(out, "INSERT INTO {ident} ({col}) VALUES (1);").unwrap();
            }
            continue;
        }
        let cols: Vec<String> = t.header().iter().map(|a| quote_ident(a.id())).collect();
        writeln!(out, "CREATE TABLE {ident} (").unwrap();
        for (i, c) in cols.iter().enumerate() {
            let sep = if i + 1 < cols.len() { "," } else { "" };
            writeln!(out, "  {c} TEXT NOT NULL CHECK ({c} IN ({labels})){sep}").unwrap();
        }
        writeln!(out, ");").unwrap();
        let col_list = cols.join(", ");
        for row in t.raw_rows() {
            let vals: Vec<String> = row.iter().map(|&l| literal(l)).collect();
            writeln!(out, "INSERT INTO {ident} ({col_list}) VALUES ({});", vals.join(", ")).unwrap();
        }
    }
    out
}

struct Translator {
    /// (variable, row alias) in scope, innermost last.
    scope: Vec<(String, String)>,
    next_alias: usize,
    next_probe: usize,
}

impl Translator {
    fn alias(&self, var: &str) -> &str {
        &self
            .scope
            .iter()
            .rev()
            .find(|(v, _)| v == var)
            .expect("checked query has no unbound variables")
            .1
    }

    fn column(&self, var: &str, arg: &Argument) -> String {
        format!("{}.{}", self.alias(var), quote_ident(arg.id()))
    }

    fn count(&self, t: &CountTerm, args: &[Argument]) -> String {
        if args.is_empty() {
            return "0".into();
        }
        let terms: Vec<String> = args
            .iter()
            .map(|a| {
                format!(
                    "CASE WHEN {} = {} THEN 1 ELSE 0 END",
                    self.column(&t.var, a),
                    literal(t.label)
                )
            })
            .collect();
        format!("({})", terms.join(" + "))
    }

    /// Guard table for a binding: the first, by name, of its guards.
    fn guard(f: &Formula, var: &str, positive: bool) -> String {
        guard_tables(f, var, positive)
            .into_iter()
            .next()
            .expect("checked query is range-restricted")
    }

    fn bind(&mut self, var: &str) -> String {
        let alias = format!("t{}", self.next_alias);
        self.next_alias += 1;
        self.scope.push((var.to_string(), alias.clone()));
        alias
    }

    fn formula(&mut self, f: &Formula, vars: &mut Vec<(String, Vec<Argument>)>) -> String {
        match f {
            Formula::Atom(a) => self.atom(a, vars),
            Formula::Not(g) => format!("NOT ({})", self.formula(g, vars)),
            Formula::And(l, r) => format!("({} AND {})", self.formula(l, vars), self.formula(r, vars)),
            Formula::Or(l, r) => format!("({} OR {})", self.formula(l, vars), self.formula(r, vars)),
            Formula::Exists { var, args, body } | Formula::Forall { var, args, body } => {
                let universal = matches!(f, Formula::Forall { .. });
                let guard = Self::guard(body, var, !universal);
                let alias = self.bind(var);
                vars.push((var.clone(), args.iter().cloned().collect()));
                let inner = self.formula(body, vars);
                vars.pop();
                self.scope.pop();
                let from = format!("{} AS {alias}", table_ident(&guard));
                if universal {
                    format!("NOT EXISTS (SELECT 1 FROM {from} WHERE NOT ({inner}))")
                } else {
                    format!("EXISTS (SELECT 1 FROM {from} WHERE {inner})")
                }
            }
        }
    }

    fn args_of<'v>(vars: &'v [(String, Vec<Argument>)], var: &str) -> &'v [Argument] {
        &vars.iter().rev().find(|(v, _)| v == var).expect("bound").1
    }

    fn atom(&mut self, a: &Atom, vars: &[(String, Vec<Argument>)]) -> String {
        match a {
            Atom::ArgEqArg {
                left,
                left_arg,
                right,
                right_arg,
            } => format!("{} = {}", self.column(left, left_arg), self.column(right, right_arg)),
            Atom::ArgEqLabel { var, arg, label } => {
                format!("{} = {}", self.column(var, arg), literal(*label))
            }
            Atom::Member { table, var } => {
                let probe = format!("m{}", self.next_probe);
                self.next_probe += 1;
                let conds: Vec<String> = Self::args_of(vars, var)
                    .iter()
                    .map(|a| {
                        let c = quote_ident(a.id());
                        format!("{probe}.{c} = {}.{c}", self.alias(var))
                    })
                    .collect();
                let mut s = format!("EXISTS (SELECT 1 FROM {} AS {probe}", table_ident(table));
                if !conds.is_empty() {
                    write!(s, " WHERE {}", conds.join(" AND ")).unwrap();
                }
                s.push(')');
                s
            }
            Atom::CountLeCount { left, right } => format!(
                "{} <= {}",
                self.count(left, Self::args_of(vars, &left.var)),
                self.count(right, Self::args_of(vars, &right.var))
            ),
            Atom::CountLeNat { count, n } => {
                format!("{} <= {n}", self.count(count, Self::args_of(vars, &count.var)))
            }
            Atom::NatLeCount { n, count } => {
                format!("{n} <= {}", self.count(count, Self::args_of(vars, &count.var)))
            }
        }
    }
}

/// A `SELECT` whose rows are the query's answers, columns in sorted
/// argument order (or a lone `_present` column for an empty binder set).
pub fn translate_query(q: &QueryExpr, schema: &Schema) -> Result<String, QueryError> {
    check_wellformed(q, schema)?.require_range_restricted()?;
    let mut t = Translator {
        scope: Vec::new(),
        next_alias: 0,
        next_probe: 0,
    };
    let guard = Translator::guard(&q.formula, &q.var, true);
    let alias = t.bind(&q.var);
    let mut vars = vec![(q.var.clone(), q.args.iter().cloned().collect())];
    let cond = t.formula(&q.formula, &mut vars);
    let cols = if q.args.is_empty() {
        format!("1 AS {}", quote_ident(PRESENT_COLUMN))
    } else {
        q.args
            .iter()
            .map(|a| format!("{alias}.{}", quote_ident(a.id())))
            .collect::<Vec<_>>()
            .join(", ")
    };
    Ok(format!(
        "SELECT DISTINCT {cols}\nFROM {} AS {alias}\nWHERE {cond};\n",
        table_ident(&guard)
    ))
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::af::args;
    use crate::catalog::{build_partial_query, build_stable_query};
    use crate::eval::evaluate;
    use crate::fixtures::figure1_database;
    use crate::query::parse_query;
    use crate::table::{ArgLabellingTable, Row};
    use rusqlite::Connection;

    fn load(db: &Database) -> Connection {
        let conn = Connection::open_in_memory().unwrap();
        conn.execute_batch(&export_schema_sql(db)).unwrap();
        conn
    }

    fn rows(conn: &Connection, sql: &str, width: usize) -> BTreeSet<Row> {
        let mut stmt = conn.prepare(sql).unwrap();
        let mut out = BTreeSet::new();
        let mut rs = stmt.query([]).unwrap();
        while let Some(r) = rs.next().unwrap() {
            let row: Row = (0..width)
                .map(|i| r.get::<_, String>(i).unwrap().parse().unwrap())
                .collect();
            out.insert(row);
        }
        out
    }

    #[test]
    fn dump_shape() {
        let db = figure1_database();
        let sql = export_schema_sql(&db);
        assert_eq!(sql.matches("CREATE TABLE").count(), 5);
        assert_eq!(sql.matches("INSERT INTO").count(), 4 + 3 + 1 + 3 + 1);
        assert_eq!(sql, export_schema_sql(&db));
    }

    #[test]
    fn round_trip_through_engine() {
        let db = figure1_database();
        let conn = load(&db);
        for (name, t) in db.tables() {
            let cols: Vec<String> = t.header().iter().map(|a| quote_ident(a.id())).collect();
            let sql = format!("SELECT {} FROM {}", cols.join(", "), table_ident(name));
            assert_eq!(&rows(&conn, &sql, cols.len()), t.raw_rows());
        }
    }

    #[test]
    fn empty_tables() {
        let db = Database::new(
            Label::ALL.to_vec(),
            [
                ("e".to_string(), ArgLabellingTable::empty(args(["x"]))),
                ("z".to_string(), ArgLabellingTable::from_raw(BTreeSet::new(), [vec![]]).unwrap()),
            ],
        )
        .unwrap();
        let sql = export_schema_sql(&db);
        assert_eq!(sql.matches("INSERT").count(), 1);
        let conn = load(&db);
        let q = parse_query("{ v : {} | z(v) }", db.schema()).unwrap();
        let n: i64 = conn
            .query_row(&format!("SELECT COUNT(*) FROM ({})", translate_query(&q, db.schema()).unwrap().trim_end_matches(";\n")), [], |r| r.get(0))
            .unwrap();
        assert_eq!(n, 1);
        assert_eq!(evaluate(&q, &db).unwrap().len(), 1);
    }

    #[test]
    fn queries_match_native() {
        let db = figure1_database();
        let conn = load(&db);
        let s = db.schema();
        let mut queries = vec![
            build_stable_query(s, "tbl2").unwrap(),
            build_partial_query(s, "tbl2", &args(["aG", "aF", "aE"])).unwrap(),
        ];
        for text in [
            r#"{ v : header(tbl2) | tbl2(v) and (3 <= count(v,"in") or 4 <= count(v,"und")) }"#,
            r#"{ v2 : header(tbl4) | tbl4(v2) and exists v1 : header(tbl2) [ tbl2(v1) and v1.aE == v1.aA and v2.aE == v1.aF ] }"#,
            r#"{ v : header(tbl2) | tbl2(v) and forall w : header(tbl2) [ not tbl2(w) or count(w,"in") <= count(v,"in") ] }"#,
            r#"{ v : {aE} | tbl4(v) and not tbl2(v) }"#,
        ] {
            queries.push(parse_query(text, s).unwrap());
        }
        for q in &queries {
            let sql = translate_query(q, s).unwrap();
            let native = evaluate(q, &db).unwrap();
            assert_eq!(&rows(&conn, &sql, q.args.len()), native.raw_rows(), "{sql}");
        }
        assert_eq!(rows(&conn, &translate_query(&queries[1], s).unwrap(), 3).len(), 3);
    }

    #[test]
    fn unguarded_refused() {
        let db = figure1_database();
        let q = parse_query("{ v : header(tbl2) | not tbl2(v) }", db.schema()).unwrap();
        assert_eq!(
            translate_query(&q, db.schema()),
            Err(QueryError::Unguarded("v".into()))
        );
    }

    #[test]
    fn quoting() {
        assert_eq!(quote_ident("a\"b"), "\"a\"\"b\"");
        assert_eq!(table_ident("tbl1"), "\"arglab_tbl1\"");
    }
}

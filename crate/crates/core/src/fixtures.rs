//! The running example (the seven-argument framework and the five tables
//! built from it) and a brute-force semantics oracle for tests.
//!
//! The data lives in `fixtures/` next to the crate manifest and is embedded
//! at compile time.

use std::collections::BTreeSet;

use crate::af::{Argument, ArgumentationFramework};
use crate::db::Database;
use crate::error::{Error, Result};
use crate::format::{parse_af, AfFormat};
use crate::io::{database_from_manifest, table_from_json};
use crate::label::{Label, Labelling};
use crate::semantics::{SemanticsKind, Sense};
use crate::table::{ArgLabellingTable, Row};

pub const EXAMPLE1_APX: &str = include_str!("../fixtures/example1.apx");
pub const EXAMPLE1_TGF: &str = include_str!("../fixtures/example1.tgf");
pub const FIGURE1_MANIFEST: &str = include_str!("../fixtures/figure1.json");

pub const TABLE_FILES: [(&str, &str); 5] = [
    ("tbl1", include_str!("../fixtures/tbl1.json")),
    ("tbl2", include_str!("../fixtures/tbl2.json")),
    ("tbl3", include_str!("../fixtures/tbl3.json")),
    ("tbl4", include_str!("../fixtures/tbl4.json")),
    ("tbl5", include_str!("../fixtures/tbl5.json")),
];

pub fn example1_framework() -> ArgumentationFramework {
    parse_af(EXAMPLE1_APX, AfFormat::Apx).expect("fixture parses")
}

/// The five tables, with the complete table holding all three complete
/// labellings.
pub fn figure1_database() -> Database {
    database_from_manifest(FIGURE1_MANIFEST, |path| {
        let name = path.trim_end_matches(".json");
        let (_, text) = TABLE_FILES
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| Error::UnknownTable(path.to_string()))?;
        table_from_json(text)
    })
    .expect("fixture database loads")
}

/// The numbered labellings λ1 … λ12 of the running example, each over its
/// own table's header. Panics outside `1..=12`.
pub fn labelling(n: usize) -> Labelling {
    use Label::{In, Lc, Out, Und};
    let (ids, labels): (&[&str], Vec<Label>) = match n {
        1..=7 => {
            let ids: &[&str] = &["aG", "aF", "aE", "aD", "aC", "aB", "aA"];
            let labels = match n {
                1 => vec![Lc, In, Lc, Lc, Lc, Lc, Lc],
                2 => vec![Lc, In, In, Lc, Lc, Lc, Lc],
                3 => vec![Lc, In, Lc, In, Lc, Lc, Lc],
                4 => vec![Lc, In, Lc, In, Lc, In, Lc],
                5 => vec![Out, In, Und, Und, Und, Und, Und],
                6 => vec![Out, In, In, Out, Und, Und, Und],
                _ => vec![Out, In, Out, In, Out, In, Out],
            };
            (ids, labels)
        }
        8 => (&["aE", "aD", "aC", "aB", "aA"], vec![Lc, In, Lc, In, Lc]),
        9 => (&["aG", "aF", "aE"], vec![Out, In, Und]),
        10 => (&["aG", "aF", "aE"], vec![Out, In, In]),
        11 => (&["aG", "aF", "aE"], vec![Out, In, Out]),
        12 => (&["aD", "aC", "aB", "aA"], vec![In, Out, In, Out]),
        _ => panic!("no labelling λ{n} in the running example"),
    };
    ids.iter()
        .map(|id| Argument::new(*id).expect("valid id"))
        .zip(labels)
        .collect()
}

/// Largest framework [`brute_force_semantics`] accepts.
pub const BRUTE_FORCE_LIMIT: usize = 8;

/// Scans every labelling over `{in, out, und, lc}` and keeps those meeting
/// the defining constraints of `kind` in `sense`.
pub fn brute_force_semantics(
    af: &ArgumentationFramework,
    kind: SemanticsKind,
    sense: Sense,
) -> Result<ArgLabellingTable> {
    let n = af.len();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge(n));
    }
    let args: Vec<&Argument> = af.arguments().iter().collect();
    let attacks = |i: usize, j: usize| af.attacks_between(args[i], args[j]);
    let attackers = |j: usize| (0..n).filter(move |&i| attacks(i, j));

    let all_rows = (0..4usize.pow(n as u32)).map(|mut code| {
        let mut row = Vec::with_capacity(n);
        for _ in 0..n {
            row.push(Label::ALL[code % 4]);
            code /= 4;
        }
        row
    });

    let ins = |r: &Row| -> Vec<bool> { r.iter().map(|l| *l == Label::In).collect() };
    let conflict_free =
        |s: &[bool]| (0..n).all(|i| (0..n).all(|j| !(s[i] && s[j] && attacks(i, j))));
    let defends = |s: &[bool], a: usize| {
        attackers(a).all(|x| (0..n).any(|g| s[g] && attacks(g, x)))
    };
    let admissible = |r: &Row| {
        let s = ins(r);
        r.iter().all(|l| matches!(l, Label::In | Label::Lc))
            && conflict_free(&s)
            && (0..n).all(|a| !s[a] || defends(&s, a))
    };
    let complete = |r: &Row| match sense {
        Sense::Weak => {
            let s = ins(r);
            admissible(r) && (0..n).all(|a| !defends(&s, a) || s[a])
        }
        Sense::Strong => {
            r.iter().all(|l| matches!(l, Label::In | Label::Out | Label::Und))
                && (0..n).all(|a| {
                    let all_out = attackers(a).all(|x| r[x] == Label::Out);
                    let some_in = attackers(a).any(|x| r[x] == Label::In);
                    (r[a] == Label::In) == all_out && (r[a] == Label::Out) == some_in
                })
        }
    };
    let leq = |lo: &Row, hi: &Row| {
        (0..n).all(|a| !matches!(lo[a], Label::In | Label::Out) || lo[a] == hi[a])
    };

    let completes: Vec<Row> = all_rows.clone().filter(|r| complete(r)).collect();
    let rows: Vec<Row> = match kind {
        SemanticsKind::Admissible => all_rows.filter(|r| admissible(r)).collect(),
        SemanticsKind::Complete => completes.clone(),
        SemanticsKind::Preferred => completes
            .iter()
            .filter(|r| !completes.iter().any(|o| o != *r && leq(r, o)))
            .cloned()
            .collect(),
        SemanticsKind::Grounded => completes
            .iter()
            .filter(|r| completes.iter().all(|o| leq(r, o)))
            .cloned()
            .collect(),
        SemanticsKind::Stable => completes
            .iter()
            .filter(|r| match sense {
                Sense::Strong => !r.iter().any(|l| matches!(l, Label::Und | Label::Lc)),
                Sense::Weak => (0..n).all(|a| r[a] == Label::In || attackers(a).any(|x| r[x] == Label::In)),
            })
            .cloned()
            .collect(),
    };
    let header: BTreeSet<Argument> = af.arguments().clone();
    ArgLabellingTable::from_raw(header, rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_one_shape() {
        let af = example1_framework();
        assert_eq!(af.len(), 7);
        assert_eq!(af.attacks().len(), 7);
        let d = crate::af::arg("aD");
        assert!(af.attacks_between(&d, &crate::af::arg("aE")));
        assert!(af.attacks_between(&d, &crate::af::arg("aC")));
    }

    #[test]
    fn oracle_on_example_one() {
        let af = example1_framework();
        let complete = brute_force_semantics(&af, SemanticsKind::Complete, Sense::Strong).unwrap();
        assert_eq!(complete, figure1_database().table("tbl2").unwrap().clone());
        assert_eq!(
            brute_force_semantics(&af, SemanticsKind::Admissible, Sense::Weak).unwrap().len(),
            8
        );
        let stable = brute_force_semantics(&af, SemanticsKind::Stable, Sense::Strong).unwrap();
        assert_eq!(stable.rows().collect::<Vec<_>>(), vec![labelling(7)]);
    }

    #[test]
    fn oracle_refuses_large_frameworks() {
        let names: Vec<Argument> = (0..9).map(|i| Argument::new(format!("x{i}")).unwrap()).collect();
        let af = ArgumentationFramework::new(names, []).unwrap();
        assert!(matches!(
            brute_force_semantics(&af, SemanticsKind::Complete, Sense::Strong),
            Err(Error::TooLarge(9))
        ));
    }
}

//! Reading and writing frameworks in the TGF and APX text formats.
//!
//! TGF: one node id per line, a line holding only `#`, then one `from to`
//! pair per line. Anything after the first token of a node line (or the
//! second token of an edge line) is a label and is ignored.
//!
//! APX: `arg(x).` and `att(x,y).` statements, one per line. Lines starting
//! with `%` are comments.
//!
//! Both writers sort by argument id so output is stable.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::af::{Argument, ArgumentationFramework};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AfFormat {
    Tgf,
    Apx,
}

impl AfFormat {
    /// Guesses the format from a file extension.
    pub fn from_extension(path: &std::path::Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "tgf" => Some(AfFormat::Tgf),
            "apx" => Some(AfFormat::Apx),
            _ => None,
        }
    }
}

impl FromStr for AfFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "tgf" => Ok(AfFormat::Tgf),
            "apx" => Ok(AfFormat::Apx),
            other => Err(format!("unknown framework format `{other}`")),
        }
    }
}

pub fn parse_af(text: &str, format: AfFormat) -> Result<ArgumentationFramework> {
    match format {
        AfFormat::Tgf => parse_tgf(text),
        AfFormat::Apx => parse_apx(text),
    }
}

pub fn write_af(af: &ArgumentationFramework, format: AfFormat) -> String {
    match format {
        AfFormat::Tgf => write_tgf(af),
        AfFormat::Apx => write_apx(af),
    }
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        message: message.into(),
    }
}

fn argument_at(line: usize, id: &str) -> Result<Argument> {
    Argument::new(id).map_err(|_| syntax(line, format!("invalid argument id {id:?}")))
}

fn build(
    arguments: BTreeSet<Argument>,
    attacks: Vec<(usize, Argument, Argument)>,
) -> Result<ArgumentationFramework> {
    for (line, from, to) in &attacks {
        for end in [from, to] {
            if !arguments.contains(end) {
                return Err(syntax(
                    *line,
                    format!("attack endpoint `{end}` is not a declared argument"),
                ));
            }
        }
    }
    ArgumentationFramework::new(arguments, attacks.into_iter().map(|(_, f, t)| (f, t)))
}

fn parse_tgf(text: &str) -> Result<ArgumentationFramework> {
    let mut arguments = BTreeSet::new();
    let mut attacks = Vec::new();
    let mut in_edges = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed == "#" {
            if in_edges {
                return Err(syntax(line, "second `#` separator"));
            }
            in_edges = true;
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        if in_edges {
            let (Some(from), Some(to)) = (tokens.next(), tokens.next()) else {
                return Err(syntax(line, "expected `from to`"));
            };
            attacks.push((line, argument_at(line, from)?, argument_at(line, to)?));
        } else {
            let id = tokens.next().expect("non-empty line has a token");
            arguments.insert(argument_at(line, id)?);
        }
    }
    // A file without edges may omit the separator.
    build(arguments, attacks)
}

/// Splits `name(body).` into `(name, body)`.
fn apx_statement(line: usize, text: &str) -> Result<(&str, &str)> {
    let body = text
        .strip_suffix('.')
        .ok_or_else(|| syntax(line, "statement must end with `.`"))?
        .trim_end();
    let open = body
        .find('(')
        .ok_or_else(|| syntax(line, "expected `(`"))?;
    let inner = body[open + 1..]
        .strip_suffix(')')
        .ok_or_else(|| syntax(line, "expected `)` before `.`"))?;
    Ok((body[..open].trim(), inner))
}

fn parse_apx(text: &str) -> Result<ArgumentationFramework> {
    let mut arguments = BTreeSet::new();
    let mut attacks = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let (name, inner) = apx_statement(line, trimmed)?;
        match name {
            "arg" => {
                arguments.insert(argument_at(line, inner.trim())?);
            }
            "att" => {
                let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
                let [from, to] = parts[..] else {
                    return Err(syntax(line, "`att` takes exactly two arguments"));
                };
                attacks.push((line, argument_at(line, from)?, argument_at(line, to)?));
            }
            other => return Err(syntax(line, format!("unknown statement `{other}`"))),
        }
    }
    build(arguments, attacks)
}

fn write_tgf(af: &ArgumentationFramework) -> String {
    let mut out = String::new();
    for a in af.arguments() {
        writeln!(out, "{a}").unwrap();
    }
    out.push_str("#\n");
    for (from, to) in af.attacks() {
        writeln!(out, "{from} {to}").unwrap();
    }
    out
}

fn write_apx(af: &ArgumentationFramework) -> String {
    let mut out = String::new();
    for a in af.arguments() {
        writeln!(out, "arg({a}).").unwrap();
    }
    for (from, to) in af.attacks() {
        writeln!(out, "att({from},{to}).").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::af::{arg, args};
    use crate::fixtures;

    use proptest::prelude::*;

    #[test]
    fn example_one_apx() {
        let af = parse_af(fixtures::EXAMPLE1_APX, AfFormat::Apx).unwrap();
        assert_eq!(af.len(), 7);
        assert_eq!(af.attacks().len(), 7);
        let tgf = parse_af(fixtures::EXAMPLE1_TGF, AfFormat::Tgf).unwrap();
        assert_eq!(af, tgf);
    }

    #[test]
    fn single_argument() {
        let af = parse_af("arg(a).", AfFormat::Apx).unwrap();
        assert_eq!(af.arguments(), &args(["a"]));
        assert!(af.attacks().is_empty());
    }

    #[test]
    fn duplicates_are_merged() {
        let af = parse_af("arg(a).\narg(a).\natt(a,a).\natt(a, a).\n", AfFormat::Apx).unwrap();
        assert_eq!(af.len(), 1);
        assert_eq!(af.attacks().len(), 1);
    }

    #[test]
    fn tgf_numeric_ids_and_labels() {
        let af = parse_af("1 first\n2\n#\n1 2 attacks\n", AfFormat::Tgf).unwrap();
        assert!(af.attacks_between(&arg("1"), &arg("2")));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_af("arg(a).\n\natt(a,b).\n", AfFormat::Apx).unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 3, .. }), "{err}");
        let err = parse_af("arg(a)\n", AfFormat::Apx).unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 1, .. }));
        let err = parse_af("arg(a).\nfoo(a).\n", AfFormat::Apx).unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 2, .. }));
        let err = parse_af("a\n#\na\n", AfFormat::Tgf).unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 3, .. }));
        let err = parse_af("a\n#\na b\n", AfFormat::Tgf).unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 3, .. }));
    }

    #[test]
    fn writers_are_sorted() {
        let af = fixtures::example1_framework();
        let apx = write_af(&af, AfFormat::Apx);
        assert!(apx.starts_with("arg(aA).\narg(aB).\n"));
        assert!(apx.ends_with("att(aF,aG).\n"));
    }

    fn arb_af() -> impl Strategy<Value = ArgumentationFramework> {
        (0usize..7).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
                let names: Vec<Argument> = (0..n).map(|i| arg(&format!("x{i}"))).collect();
                let attacks = bits.iter().enumerate().filter(|(_, b)| **b).map(|(k, _)| {
                    (names[k / n].clone(), names[k % n].clone())
                });
                ArgumentationFramework::new(names.clone(), attacks).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn parse_inverts_write(af in arb_af()) {
            for format in [AfFormat::Tgf, AfFormat::Apx] {
                let text = write_af(&af, format);
                prop_assert_eq!(&parse_af(&text, format).unwrap(), &af);
            }
        }
    }
}

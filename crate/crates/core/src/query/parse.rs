//! Recursive-descent parser for the query syntax.
//!
//! ```text
//! query    := "{" VAR ":" argset "|" formula "}"
//! argset   := "{" [ARG ("," ARG)*] "}" | "header" "(" TABLE ")"
//! formula  := conj ("or" conj)*
//! conj     := unary ("and" unary)*
//! unary    := "not" unary | "(" formula ")" | quant | atom
//! quant    := ("exists" | "forall") VAR ":" argset "[" formula "]"
//! atom     := VAR "." ARG "==" (VAR "." ARG | LABEL)
//!           | TABLE "(" VAR ")"
//!           | count "<=" (count | NAT)
//!           | NAT "<=" count
//! count    := "count" "(" VAR "," LABEL ")"
//! LABEL    := "\"" ("in" | "out" | "und" | "lc") "\""
//! ```

use std::collections::BTreeSet;

use super::ast::{Atom, CountTerm, Formula, QueryExpr};
use crate::af::Argument;
use crate::db::Schema;
use crate::error::QueryError;
use crate::label::Label;

const KEYWORDS: [&str; 7] = ["exists", "forall", "not", "and", "or", "count", "header"];

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Colon,
    Pipe,
    Comma,
    Dot,
    EqEq,
    Le,
    Word(String),
    Str(String),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::EqEq => "`==`".into(),
            Tok::Le => "`<=`".into(),
            Tok::Word(w) => format!("`{w}`"),
            Tok::Str(s) => format!("\"{s}\""),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn is_word_char(c: char) -> bool {
    !c.is_whitespace() && !"{}[]():|,.\"=<".contains(c)
}

fn lex(text: &str) -> Result<Vec<Spanned>, QueryError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    let err = |line, column, message: String| QueryError::Syntax {
        line,
        column,
        message,
    };
    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        let tok = match c {
            '{' | '}' | '[' | ']' | '(' | ')' | ':' | '|' | ',' | '.' => {
                bump(&mut chars);
                match c {
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ':' => Tok::Colon,
                    '|' => Tok::Pipe,
                    ',' => Tok::Comma,
                    _ => Tok::Dot,
                }
            }
            '=' | '<' => {
                bump(&mut chars);
                if chars.peek() != Some(&'=') {
                    return Err(err(tl, tc, format!("expected `{c}=`")));
                }
                bump(&mut chars);
                if c == '=' {
                    Tok::EqEq
                } else {
                    Tok::Le
                }
            }
            '"' => {
                bump(&mut chars);
                let mut s = String::new();
                loop {
                    match bump(&mut chars) {
                        Some('"') => break,
                        Some('\n') | None => {
                            return Err(err(tl, tc, "unterminated string".into()))
                        }
                        Some(ch) => s.push(ch),
                    }
                }
                Tok::Str(s)
            }
            _ => {
                let mut w = String::new();
                while let Some(&ch) = chars.peek() {
                    if !is_word_char(ch) {
                        break;
                    }
                    w.push(ch);
                    bump(&mut chars);
                }
                Tok::Word(w)
            }
        };
        out.push(Spanned {
            tok,
            line: tl,
            column: tc,
        });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser<'s> {
    toks: Vec<Spanned>,
    pos: usize,
    schema: Option<&'s Schema>,
}

impl<'s> Parser<'s> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn error_here(&self, message: impl Into<String>) -> QueryError {
        let t = &self.toks[self.pos];
        QueryError::Syntax {
            line: t.line,
            column: t.column,
            message: message.into(),
        }
    }

    fn unexpected(&self, wanted: &str) -> QueryError {
        self.error_here(format!("expected {wanted}, found {}", self.peek().describe()))
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok) -> Result<(), QueryError> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Word(w) if w == kw)
    }

    fn name(&mut self, what: &str) -> Result<String, QueryError> {
        match self.peek() {
            Tok::Word(w) if !KEYWORDS.contains(&w.as_str()) => {
                let w = w.clone();
                self.next();
                Ok(w)
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn argument(&mut self) -> Result<Argument, QueryError> {
        match self.peek() {
            Tok::Word(w) => {
                let a = Argument::new(w.as_str())
                    .map_err(|_| self.error_here(format!("invalid argument id `{w}`")))?;
                self.next();
                Ok(a)
            }
            _ => Err(self.unexpected("an argument id")),
        }
    }

    fn label(&mut self) -> Result<Label, QueryError> {
        match self.peek() {
            Tok::Str(s) => {
                let l = s
                    .parse::<Label>()
                    .map_err(|_| QueryError::UnknownLabel(s.clone()))?;
                self.next();
                Ok(l)
            }
            _ => Err(self.unexpected("a quoted label")),
        }
    }

    fn nat(&mut self) -> Result<u64, QueryError> {
        match self.peek() {
            Tok::Word(w) if is_nat(w) => {
                let n = w
                    .parse()
                    .map_err(|_| self.error_here(format!("number `{w}` is too large")))?;
                self.next();
                Ok(n)
            }
            _ => Err(self.unexpected("a natural number")),
        }
    }

    fn argset(&mut self) -> Result<BTreeSet<Argument>, QueryError> {
        if self.at_keyword("header") {
            self.next();
            self.expect(Tok::LParen)?;
            let table = self.name("a table name")?;
            self.expect(Tok::RParen)?;
            let schema = self
                .schema
                .ok_or_else(|| self.error_here("`header(..)` needs a schema"))?;
            return schema
                .header(&table)
                .cloned()
                .map_err(|_| QueryError::UnknownTable(table));
        }
        self.expect(Tok::LBrace)?;
        let mut out = BTreeSet::new();
        if *self.peek() != Tok::RBrace {
            loop {
                out.insert(self.argument()?);
                if *self.peek() == Tok::Comma {
                    self.next();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RBrace)?;
        Ok(out)
    }

    fn query(&mut self) -> Result<QueryExpr, QueryError> {
        self.expect(Tok::LBrace)?;
        let var = self.name("the query variable")?;
        self.expect(Tok::Colon)?;
        let args = self.argset()?;
        self.expect(Tok::Pipe)?;
        let formula = self.formula()?;
        self.expect(Tok::RBrace)?;
        Ok(QueryExpr { var, args, formula })
    }

    fn formula(&mut self) -> Result<Formula, QueryError> {
        let mut f = self.conj()?;
        while self.at_keyword("or") {
            self.next();
            f = Formula::or(f, self.conj()?);
        }
        Ok(f)
    }

    fn conj(&mut self) -> Result<Formula, QueryError> {
        let mut f = self.unary()?;
        while self.at_keyword("and") {
            self.next();
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula, QueryError> {
        if self.at_keyword("not") {
            self.next();
            return Ok(Formula::not(self.unary()?));
        }
        if *self.peek() == Tok::LParen {
            self.next();
            let f = self.formula()?;
            self.expect(Tok::RParen)?;
            return Ok(f);
        }
        for (kw, universal) in [("exists", false), ("forall", true)] {
            if self.at_keyword(kw) {
                self.next();
                let var = self.name("a variable")?;
                self.expect(Tok::Colon)?;
                let args = self.argset()?;
                self.expect(Tok::LBracket)?;
                let body = self.formula()?;
                self.expect(Tok::RBracket)?;
                return Ok(if universal {
                    Formula::forall(&var, args, body)
                } else {
                    Formula::exists(&var, args, body)
                });
            }
        }
        self.atom().map(Formula::Atom)
    }

    fn count(&mut self) -> Result<CountTerm, QueryError> {
        if !self.at_keyword("count") {
            return Err(self.unexpected("`count`"));
        }
        self.next();
        self.expect(Tok::LParen)?;
        let var = self.name("a variable")?;
        self.expect(Tok::Comma)?;
        let label = self.label()?;
        self.expect(Tok::RParen)?;
        Ok(CountTerm { var, label })
    }

    fn atom(&mut self) -> Result<Atom, QueryError> {
        if self.at_keyword("count") {
            let count = self.count()?;
            self.expect(Tok::Le)?;
            return if self.at_keyword("count") {
                Ok(Atom::CountLeCount {
                    left: count,
                    right: self.count()?,
                })
            } else {
                Ok(Atom::CountLeNat {
                    count,
                    n: self.nat()?,
                })
            };
        }
        if let (Tok::Word(w), Tok::Le) = (self.peek(), self.peek_at(1)) {
            if is_nat(w) {
                let n = self.nat()?;
                self.next();
                if !self.at_keyword("count") {
                    return Err(self.error_here(
                        "a number may only be compared with `count(..)`",
                    ));
                }
                return Ok(Atom::NatLeCount {
                    n,
                    count: self.count()?,
                });
            }
        }
        match self.peek_at(1) {
            Tok::LParen => {
                let table = self.name("a table name")?;
                self.expect(Tok::LParen)?;
                let var = self.name("a variable")?;
                self.expect(Tok::RParen)?;
                Ok(Atom::Member { table, var })
            }
            Tok::Dot => {
                let left = self.name("a variable")?;
                self.expect(Tok::Dot)?;
                let left_arg = self.argument()?;
                self.expect(Tok::EqEq)?;
                if let Tok::Str(_) = self.peek() {
                    return Ok(Atom::ArgEqLabel {
                        var: left,
                        arg: left_arg,
                        label: self.label()?,
                    });
                }
                let right = self.name("a variable or a quoted label")?;
                self.expect(Tok::Dot)?;
                let right_arg = self.argument()?;
                Ok(Atom::ArgEqArg {
                    left,
                    left_arg,
                    right,
                    right_arg,
                })
            }
            _ => Err(self.unexpected("an atomic formula")),
        }
    }

    fn finish(&self) -> Result<(), QueryError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }
}

fn is_nat(w: &str) -> bool {
    !w.is_empty() && w.bytes().all(|b| b.is_ascii_digit())
}

/// Parses query text without static checks. `header(..)` needs a schema.
pub fn parse_query_syntax(text: &str, schema: Option<&Schema>) -> Result<QueryExpr, QueryError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        schema,
    };
    let q = p.query()?;
    p.finish()?;
    Ok(q)
}

/// Parses a bare formula without static checks.
pub fn parse_formula(text: &str, schema: Option<&Schema>) -> Result<Formula, QueryError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        schema,
    };
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

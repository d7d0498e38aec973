//! The model relation and query evaluation.
//!
//! Formulas are compiled to a slot-indexed tree in which every labelling is
//! packed into a `u128`, two bits per argument (the label's position in
//! [`Label::ALL`]), arguments in sorted order from the low bits up. A
//! variable therefore ranges over at most 64 arguments.
//!
//! Table membership uses a projection-compatible reading: `t(v)` holds when
//! v's domain lies within t's header and some row of t, restricted to that
//! domain, equals v. On equal domains this is plain row membership;
//! [`EvalOptions::strict_membership`] switches to plain row membership
//! everywhere.
//!
//! [`evaluate`] enumerates every candidate labelling of each variable.
//! [`evaluate_guarded`] requires a range-restricted query and enumerates only
//! the projected rows of each variable's smallest guard table.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use crate::af::Argument;
use crate::db::Database;
use crate::error::QueryError;
use crate::label::{Label, Labelling};
use crate::query::{check_open_formula, check_wellformed, Atom, CountTerm, Formula, QueryExpr};
use crate::table::{ArgLabellingTable, Row};

/// Widest argument set a variable may range over.
pub const MAX_VAR_ARGS: usize = 64;

/// Largest candidate universe a single naive quantifier may enumerate.
pub const NAIVE_LIMIT: u128 = 1 << 24;

/// Bitsets are used for membership when codes fit in this many bits.
const DENSE_BITS: usize = 20;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EvalOptions {
    /// `t(v)` holds only when v's domain equals t's header exactly.
    pub strict_membership: bool,
}

/// Assignment of labellings to variables.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Interpretation(BTreeMap<String, Labelling>);

impl Interpretation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(mut self, var: &str, lab: Labelling) -> Self {
        self.0.insert(var.to_string(), lab);
        self
    }

    pub fn get(&self, var: &str) -> Option<&Labelling> {
        self.0.get(var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Labelling)> {
        self.0.iter().map(|(v, l)| (v.as_str(), l))
    }
}

fn digit(l: Label) -> u128 {
    Label::ALL.iter().position(|&x| x == l).expect("label in ALL") as u128
}

fn label_of(d: u128) -> Label {
    Label::ALL[d as usize]
}

/// Low bit of each of the first `n` two-bit groups.
fn low_mask(n: usize) -> u128 {
    let mut m = 0u128;
    for i in 0..n {
        m |= 1 << (2 * i);
    }
    m
}

fn encode(labels: impl IntoIterator<Item = Label>) -> u128 {
    labels
        .into_iter()
        .enumerate()
        .fold(0, |c, (i, l)| c | digit(l) << (2 * i))
}

fn decode(code: u128, n: usize) -> Row {
    (0..n).map(|i| label_of(code >> (2 * i) & 3)).collect()
}

/// Codes for which `t(v)` holds, for one table and one argument set.
struct MemberSet {
    dense: Option<Vec<u64>>,
    sparse: HashSet<u128>,
    /// Sorted, for use as a candidate list.
    codes: Vec<u128>,
}

impl MemberSet {
    fn new(codes: BTreeSet<u128>, width: usize) -> Self {
        let codes: Vec<u128> = codes.into_iter().collect();
        if 2 * width <= DENSE_BITS {
            let mut bits = vec![0u64; ((1usize << (2 * width)) + 63) / 64];
            for &c in &codes {
                bits[(c / 64) as usize] |= 1 << (c % 64);
            }
            MemberSet {
                dense: Some(bits),
                sparse: HashSet::new(),
                codes,
            }
        } else {
            MemberSet {
                dense: None,
                sparse: codes.iter().copied().collect(),
                codes,
            }
        }
    }

    #[inline]
    fn contains(&self, c: u128) -> bool {
        match &self.dense {
            Some(bits) => bits[(c / 64) as usize] >> (c % 64) & 1 == 1,
            None => self.sparse.contains(&c),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Count {
    slot: usize,
    pattern: u128,
    mask: u128,
}

impl Count {
    #[inline]
    fn eval(&self, env: &[u128]) -> u64 {
        let x = env[self.slot] ^ self.pattern;
        (!(x | x >> 1) & self.mask).count_ones() as u64
    }
}

#[derive(Debug, Clone, Copy)]
enum Domain {
    /// Every labelling over `width` arguments.
    All { width: usize },
    /// The codes of a member set.
    Guard(usize),
}

enum Node {
    Const(bool),
    EqLabel { slot: usize, shift: u32, digit: u128 },
    EqArg { l: usize, ls: u32, r: usize, rs: u32 },
    Member { slot: usize, set: usize },
    CountLeCount(Count, Count),
    CountLeNat(Count, u64),
    NatLeCount(u64, Count),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Exists { slot: usize, domain: Domain, body: Box<Node> },
    Forall { slot: usize, domain: Domain, body: Box<Node> },
}

struct Scope {
    var: String,
    args: Vec<Argument>,
}

struct Compiler<'a> {
    db: &'a Database,
    opts: EvalOptions,
    guarded: bool,
    scope: Vec<Scope>,
    sets: Vec<MemberSet>,
    set_index: HashMap<(String, Vec<Argument>), Option<usize>>,
}

impl<'a> Compiler<'a> {
    fn new(db: &'a Database, opts: EvalOptions, guarded: bool) -> Self {
        Compiler {
            db,
            opts,
            guarded,
            scope: Vec::new(),
            sets: Vec::new(),
            set_index: HashMap::new(),
        }
    }

    fn lookup(&self, var: &str) -> Result<(usize, &[Argument]), QueryError> {
        self.scope
            .iter()
            .rposition(|s| s.var == var)
            .map(|i| (i, self.scope[i].args.as_slice()))
            .ok_or_else(|| QueryError::UnboundVariable(var.to_string()))
    }

    fn push(&mut self, var: &str, args: &BTreeSet<Argument>) -> Result<usize, QueryError> {
        if args.len() > MAX_VAR_ARGS {
            return Err(QueryError::UniverseTooLarge(
                (self.alphabet().len() as u128).saturating_pow(args.len() as u32),
            ));
        }
        self.scope.push(Scope {
            var: var.to_string(),
            args: args.iter().cloned().collect(),
        });
        Ok(self.scope.len() - 1)
    }

    fn alphabet(&self) -> Vec<u128> {
        self.db.schema().labels().iter().map(|&l| digit(l)).collect()
    }

    fn position(&self, var: &str, arg: &Argument) -> Result<Option<(usize, u32)>, QueryError> {
        let (slot, args) = self.lookup(var)?;
        Ok(args
            .binary_search(arg)
            .ok()
            .map(|i| (slot, 2 * i as u32)))
    }

    fn count(&self, t: &CountTerm) -> Result<Count, QueryError> {
        let (slot, args) = self.lookup(&t.var)?;
        let mask = low_mask(args.len());
        Ok(Count {
            slot,
            pattern: mask * digit(t.label),
            mask,
        })
    }

    /// Index of the member set for `table` over `args`, or `None` when
    /// membership can never hold.
    fn member_set(&mut self, table: &str, args: &[Argument]) -> Result<Option<usize>, QueryError> {
        let key = (table.to_string(), args.to_vec());
        if let Some(&idx) = self.set_index.get(&key) {
            return Ok(idx);
        }
        let t = self
            .db
            .table(table)
            .map_err(|_| QueryError::UnknownTable(table.to_string()))?;
        let header = t.header();
        let cols: Option<Vec<usize>> = args.iter().map(|a| header.binary_search(a).ok()).collect();
        let idx = match cols {
            Some(cols) if !self.opts.strict_membership || cols.len() == header.len() => {
                let codes = t
                    .raw_rows()
                    .iter()
                    .map(|row| encode(cols.iter().map(|&c| row[c])))
                    .collect();
                self.sets.push(MemberSet::new(codes, args.len()));
                Some(self.sets.len() - 1)
            }
            _ => None,
        };
        self.set_index.insert(key, idx);
        Ok(idx)
    }

    fn domain(
        &mut self,
        var: &str,
        args: &BTreeSet<Argument>,
        body: &Formula,
        universal: bool,
    ) -> Result<Domain, QueryError> {
        if !self.guarded {
            let n = args.len() as u32;
            let size = (self.alphabet().len() as u128).saturating_pow(n);
            if size > NAIVE_LIMIT {
                return Err(QueryError::UniverseTooLarge(size));
            }
            return Ok(Domain::All { width: args.len() });
        }
        let guards = crate::query::guard_tables(body, var, !universal);
        if guards.is_empty() {
            return Err(QueryError::Unguarded(var.to_string()));
        }
        let sorted: Vec<Argument> = args.iter().cloned().collect();
        let mut best: Option<usize> = None;
        for g in &guards {
            match self.member_set(g, &sorted)? {
                Some(i) => {
                    if best.map_or(true, |b| self.sets[i].codes.len() < self.sets[b].codes.len()) {
                        best = Some(i);
                    }
                }
                // The guard can never hold, so neither can the body.
                None => {
                    self.sets.push(MemberSet::new(BTreeSet::new(), 0));
                    return Ok(Domain::Guard(self.sets.len() - 1));
                }
            }
        }
        Ok(Domain::Guard(best.expect("non-empty guards")))
    }

    fn formula(&mut self, f: &Formula) -> Result<Node, QueryError> {
        Ok(match f {
            Formula::Atom(a) => self.atom(a)?,
            Formula::Not(g) => Node::Not(Box::new(self.formula(g)?)),
            Formula::And(l, r) => Node::And(Box::new(self.formula(l)?), Box::new(self.formula(r)?)),
            Formula::Or(l, r) => Node::Or(Box::new(self.formula(l)?), Box::new(self.formula(r)?)),
            Formula::Exists { var, args, body } | Formula::Forall { var, args, body } => {
                let universal = matches!(f, Formula::Forall { .. });
                let domain = self.domain(var, args, body, universal)?;
                if let Domain::All { .. } = domain {
                    // A full universe is never empty, so parts of the body
                    // that ignore the variable can be decided once, outside.
                    let mut parts = Vec::new();
                    flatten(body, !universal, &mut parts);
                    let (outer, inner): (Vec<&Formula>, Vec<&Formula>) = parts
                        .into_iter()
                        .partition(|p| !p.free_vars().contains(var));
                    if !outer.is_empty() {
                        let join = if universal { Formula::or } else { Formula::and };
                        let rest = |ps: Vec<&Formula>| ps.into_iter().cloned().reduce(join);
                        let hoisted = match rest(inner) {
                            Some(b) if universal => Formula::forall(var, args.clone(), b),
                            Some(b) => Formula::exists(var, args.clone(), b),
                            None => return self.formula(&rest(outer).expect("non-empty")),
                        };
                        let outer = rest(outer).expect("non-empty");
                        return self.formula(&join(outer, hoisted));
                    }
                }
                let slot = self.push(var, args)?;
                let body = self.formula(body);
                self.scope.pop();
                let body = Box::new(body?);
                if universal {
                    Node::Forall { slot, domain, body }
                } else {
                    Node::Exists { slot, domain, body }
                }
            }
        })
    }

    fn atom(&mut self, a: &Atom) -> Result<Node, QueryError> {
        Ok(match a {
            Atom::ArgEqArg {
                left,
                left_arg,
                right,
                right_arg,
            } => match (self.position(left, left_arg)?, self.position(right, right_arg)?) {
                (Some((l, ls)), Some((r, rs))) => Node::EqArg { l, ls, r, rs },
                _ => Node::Const(false),
            },
            Atom::ArgEqLabel { var, arg, label } => match self.position(var, arg)? {
                Some((slot, shift)) => Node::EqLabel {
                    slot,
                    shift,
                    digit: digit(*label),
                },
                None => Node::Const(false),
            },
            Atom::Member { table, var } => {
                let (slot, args) = self.lookup(var)?;
                let args = args.to_vec();
                match self.member_set(table, &args)? {
                    Some(set) => Node::Member { slot, set },
                    None => Node::Const(false),
                }
            }
            Atom::CountLeCount { left, right } => Node::CountLeCount(self.count(left)?, self.count(right)?),
            Atom::CountLeNat { count, n } => Node::CountLeNat(self.count(count)?, *n),
            Atom::NatLeCount { n, count } => Node::NatLeCount(*n, self.count(count)?),
        })
    }
}

/// Top-level conjuncts (or disjuncts) of `f`.
fn flatten<'f>(f: &'f Formula, conj: bool, out: &mut Vec<&'f Formula>) {
    match f {
        Formula::And(l, r) if conj => {
            flatten(l, conj, out);
            flatten(r, conj, out);
        }
        Formula::Or(l, r) if !conj => {
            flatten(l, conj, out);
            flatten(r, conj, out);
        }
        _ => out.push(f),
    }
}

/// Calls `f` on every code over `width` arguments drawn from `alphabet`
/// (sorted digits), in lexicographic order with the last argument varying
/// fastest, until `f` returns false. Returns whether it ran to the end.
fn for_each_code(width: usize, alphabet: &[u128], mut f: impl FnMut(u128) -> bool) -> bool {
    let k = alphabet.len();
    if k == 0 {
        return width != 0 || f(0);
    }
    let mut idx = vec![0usize; width];
    let mut code = encode_digits(&vec![alphabet[0]; width]);
    loop {
        if !f(code) {
            return false;
        }
        let mut j = width;
        loop {
            if j == 0 {
                return true;
            }
            j -= 1;
            let shift = 2 * j;
            code &= !(3u128 << shift);
            idx[j] += 1;
            if idx[j] < k {
                code |= alphabet[idx[j]] << shift;
                break;
            }
            idx[j] = 0;
            code |= alphabet[0] << shift;
        }
    }
}

fn encode_digits(ds: &[u128]) -> u128 {
    ds.iter().enumerate().fold(0, |c, (i, d)| c | d << (2 * i))
}

struct Program {
    sets: Vec<MemberSet>,
    alphabet: Vec<u128>,
}

impl Program {
    fn eval(&self, n: &Node, env: &mut [u128]) -> bool {
        match n {
            Node::Const(b) => *b,
            Node::EqLabel { slot, shift, digit } => env[*slot] >> shift & 3 == *digit,
            Node::EqArg { l, ls, r, rs } => env[*l] >> ls & 3 == env[*r] >> rs & 3,
            Node::Member { slot, set } => self.sets[*set].contains(env[*slot]),
            Node::CountLeCount(l, r) => l.eval(env) <= r.eval(env),
            Node::CountLeNat(c, k) => c.eval(env) <= *k,
            Node::NatLeCount(k, c) => *k <= c.eval(env),
            Node::Not(g) => !self.eval(g, env),
            Node::And(l, r) => self.eval(l, env) && self.eval(r, env),
            Node::Or(l, r) => self.eval(l, env) || self.eval(r, env),
            Node::Exists { slot, domain, body } => {
                !self.all(*domain, |code, env| {
                    env[*slot] = code;
                    !self.eval(body, env)
                }, env)
            }
            Node::Forall { slot, domain, body } => self.all(*domain, |code, env| {
                env[*slot] = code;
                self.eval(body, env)
            }, env),
        }
    }

    /// Whether `f` holds for every code of `domain`, stopping at the first
    /// failure.
    fn all(&self, domain: Domain, mut f: impl FnMut(u128, &mut [u128]) -> bool, env: &mut [u128]) -> bool {
        match domain {
            Domain::All { width } => for_each_code(width, &self.alphabet, |c| f(c, env)),
            Domain::Guard(i) => self.sets[i].codes.iter().all(|&c| f(c, env)),
        }
    }
}

fn depth(f: &Formula) -> usize {
    match f {
        Formula::Atom(_) => 0,
        Formula::Not(g) => depth(g),
        Formula::And(l, r) | Formula::Or(l, r) => depth(l).max(depth(r)),
        Formula::Exists { body, .. } | Formula::Forall { body, .. } => 1 + depth(body),
    }
}

/// Whether `env` satisfies `f` over `db`. Quantifiers range over every
/// labelling of their argument set. A free variable's argument set is the
/// domain of its labelling; `v.a` with `a` outside it is false.
pub fn models(db: &Database, env: &Interpretation, f: &Formula) -> Result<bool, QueryError> {
    models_with(db, env, f, EvalOptions::default())
}

pub fn models_with(
    db: &Database,
    env: &Interpretation,
    f: &Formula,
    opts: EvalOptions,
) -> Result<bool, QueryError> {
    let bound: Vec<(String, BTreeSet<Argument>)> =
        env.iter().map(|(v, l)| (v.to_string(), l.domain())).collect();
    check_open_formula(f, db.schema(), &bound)?;
    let mut c = Compiler::new(db, opts, false);
    let mut slots = Vec::new();
    for (var, lab) in env.iter() {
        c.push(var, &lab.domain())?;
        slots.push(encode(lab.labels()));
    }
    let node = c.formula(f)?;
    let program = Program {
        alphabet: c.alphabet(),
        sets: c.sets,
    };
    slots.resize(slots.len() + depth(f), 0);
    Ok(program.eval(&node, &mut slots))
}

fn run(q: &QueryExpr, db: &Database, opts: EvalOptions, guarded: bool) -> Result<ArgLabellingTable, QueryError> {
    let report = check_wellformed(q, db.schema())?;
    if guarded {
        report.require_range_restricted()?;
    }
    let mut c = Compiler::new(db, opts, guarded);
    let domain = c.domain(&q.var, &q.args, &q.formula, false)?;
    let slot = c.push(&q.var, &q.args)?;
    let node = c.formula(&q.formula)?;
    let program = Program {
        alphabet: c.alphabet(),
        sets: c.sets,
    };
    let mut env = vec![0u128; 1 + depth(&q.formula)];
    let mut rows = BTreeSet::new();
    program.all(
        domain,
        |code, env| {
            env[slot] = code;
            if program.eval(&node, env) {
                rows.insert(decode(code, q.args.len()));
            }
            true
        },
        &mut env,
    );
    Ok(ArgLabellingTable::from_raw(q.args.clone(), rows).expect("rows match the binder"))
}

/// Reference evaluator: every labelling over the binder's arguments is a
/// candidate, and quantifiers range over every labelling of their sets.
pub fn evaluate(q: &QueryExpr, db: &Database) -> Result<ArgLabellingTable, QueryError> {
    run(q, db, EvalOptions::default(), false)
}

pub fn evaluate_with(q: &QueryExpr, db: &Database, opts: EvalOptions) -> Result<ArgLabellingTable, QueryError> {
    run(q, db, opts, false)
}

/// Evaluates a range-restricted query, drawing candidates from guard tables.
pub fn evaluate_guarded(q: &QueryExpr, db: &Database) -> Result<ArgLabellingTable, QueryError> {
    run(q, db, EvalOptions::default(), true)
}

pub fn evaluate_guarded_with(
    q: &QueryExpr,
    db: &Database,
    opts: EvalOptions,
) -> Result<ArgLabellingTable, QueryError> {
    run(q, db, opts, true)
}

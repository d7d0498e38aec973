//! Labelling semantics computed directly from a framework.
//!
//! Two label senses are supported. The weak sense labels every argument `in`
//! or `lc` and is driven by conflict-freeness and defence of the `in` set.
//! The strong sense labels every argument `in`, `out` or `und` so that an
//! argument is `in` iff all its attackers are `out`, and `out` iff some
//! attacker is `in`.
//!
//! Preferred and grounded labellings are the maximal and least complete
//! labellings under [`Labelling::commitment_leq`].

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::af::{Argument, ArgumentationFramework};
use crate::error::{Error, Result};
use crate::label::{Label, Labelling};
use crate::table::{ArgLabellingTable, Row};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Weak,
    Strong,
}

impl Sense {
    /// The labels used by labellings of this sense.
    pub fn labels(self) -> &'static [Label] {
        match self {
            Sense::Weak => &[Label::In, Label::Lc],
            Sense::Strong => &[Label::In, Label::Out, Label::Und],
        }
    }
}

impl FromStr for Sense {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "weak" => Ok(Sense::Weak),
            "strong" => Ok(Sense::Strong),
            other => Err(format!("unknown label sense `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SemanticsKind {
    /// Always in the weak sense.
    Admissible,
    Complete,
    Preferred,
    Grounded,
    Stable,
}

impl SemanticsKind {
    pub const ALL: [SemanticsKind; 5] = [
        SemanticsKind::Admissible,
        SemanticsKind::Complete,
        SemanticsKind::Preferred,
        SemanticsKind::Grounded,
        SemanticsKind::Stable,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SemanticsKind::Admissible => "admissible",
            SemanticsKind::Complete => "complete",
            SemanticsKind::Preferred => "preferred",
            SemanticsKind::Grounded => "grounded",
            SemanticsKind::Stable => "stable",
        }
    }
}

impl fmt::Display for SemanticsKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SemanticsKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        SemanticsKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown semantics `{s}`"))
    }
}

/// Framework with arguments numbered in ascending id order.
struct Indexed {
    arguments: Vec<Argument>,
    attackers: Vec<Vec<usize>>,
    attacks: Vec<Vec<bool>>,
}

impl Indexed {
    fn new(af: &ArgumentationFramework) -> Self {
        let arguments: Vec<Argument> = af.arguments().iter().cloned().collect();
        let n = arguments.len();
        let pos = |a: &Argument| arguments.binary_search(a).expect("declared");
        let mut attackers = vec![Vec::new(); n];
        let mut attacks = vec![vec![false; n]; n];
        for (from, to) in af.attacks() {
            let (f, t) = (pos(from), pos(to));
            attackers[t].push(f);
            attacks[f][t] = true;
        }
        Indexed {
            arguments,
            attackers,
            attacks,
        }
    }

    fn len(&self) -> usize {
        self.arguments.len()
    }

    fn header(&self) -> BTreeSet<Argument> {
        self.arguments.iter().cloned().collect()
    }

    fn table(&self, rows: impl IntoIterator<Item = Row>) -> ArgLabellingTable {
        ArgLabellingTable::from_raw(self.header(), rows).expect("rows match the header")
    }

    fn defends(&self, ins: &[bool], a: usize) -> bool {
        self.attackers[a]
            .iter()
            .all(|&x| self.attackers[x].iter().any(|&g| ins[g]))
    }

    fn two_valued(ins: &[bool]) -> Row {
        ins.iter()
            .map(|&b| if b { Label::In } else { Label::Lc })
            .collect()
    }
}

/// Weak-sense admissible labellings: conflict-free `in` sets defending all
/// their members, everything else `lc`. Includes the all-`lc` labelling.
pub fn enumerate_admissible(af: &ArgumentationFramework) -> ArgLabellingTable {
    let ix = Indexed::new(af);
    let rows = admissible_sets(&ix).into_iter().map(|s| Indexed::two_valued(&s));
    ix.table(rows)
}

fn admissible_sets(ix: &Indexed) -> Vec<Vec<bool>> {
    fn go(ix: &Indexed, i: usize, ins: &mut Vec<bool>, out: &mut Vec<Vec<bool>>) {
        if i == ix.len() {
            if (0..ix.len()).all(|a| !ins[a] || ix.defends(ins, a)) {
                out.push(ins.clone());
            }
            return;
        }
        ins[i] = false;
        go(ix, i + 1, ins, out);
        // Only take `i` in if it does not conflict with earlier `in` choices.
        let clashes = ix.attacks[i][i]
            || (0..i).any(|j| ins[j] && (ix.attacks[i][j] || ix.attacks[j][i]));
        if !clashes {
            ins[i] = true;
            go(ix, i + 1, ins, out);
            ins[i] = false;
        }
    }
    let mut out = Vec::new();
    go(ix, 0, &mut vec![false; ix.len()], &mut out);
    out
}

fn weak_complete_sets(ix: &Indexed) -> Vec<Vec<bool>> {
    admissible_sets(ix)
        .into_iter()
        .filter(|ins| (0..ix.len()).all(|a| ins[a] || !ix.defends(ins, a)))
        .collect()
}

/// Backtracking search over `{in, out, und}` with unit propagation.
fn strong_complete_rows(ix: &Indexed) -> Vec<Row> {
    fn consistent(ix: &Indexed, lab: &[Option<Label>], a: usize) -> bool {
        let atts = &ix.attackers[a];
        let any_in = atts.iter().any(|&x| lab[x] == Some(Label::In));
        let all_out = atts.iter().all(|&x| lab[x] == Some(Label::Out));
        let all_assigned = atts.iter().all(|&x| lab[x].is_some());
        match lab[a] {
            None => true,
            Some(Label::In) => atts
                .iter()
                .all(|&x| matches!(lab[x], None | Some(Label::Out))),
            Some(Label::Out) => any_in || !all_assigned,
            Some(Label::Und) => !any_in && !all_out,
            Some(Label::Lc) => false,
        }
    }

    /// Forces labels implied by the rules; false on contradiction.
    fn propagate(ix: &Indexed, lab: &mut [Option<Label>], trail: &mut Vec<usize>) -> bool {
        loop {
            let mut changed = false;
            for a in 0..ix.len() {
                let atts = &ix.attackers[a];
                let forced = if atts.iter().any(|&x| lab[x] == Some(Label::In)) {
                    Some(Label::Out)
                } else if atts.iter().all(|&x| lab[x] == Some(Label::Out)) {
                    Some(Label::In)
                } else {
                    None
                };
                match (lab[a], forced) {
                    (None, Some(l)) => {
                        lab[a] = Some(l);
                        trail.push(a);
                        changed = true;
                    }
                    (Some(cur), Some(l)) if cur != l => return false,
                    _ => {}
                }
                if lab[a] == Some(Label::In) {
                    for &x in atts {
                        match lab[x] {
                            None => {
                                lab[x] = Some(Label::Out);
                                trail.push(x);
                                changed = true;
                            }
                            Some(Label::Out) => {}
                            Some(_) => return false,
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        (0..ix.len()).all(|a| consistent(ix, lab, a))
    }

    fn go(ix: &Indexed, lab: &mut Vec<Option<Label>>, out: &mut Vec<Row>) {
        let Some(next) = lab.iter().position(Option::is_none) else {
            out.push(lab.iter().map(|l| l.expect("total")).collect());
            return;
        };
        for l in [Label::In, Label::Out, Label::Und] {
            let mut trail = vec![next];
            lab[next] = Some(l);
            if consistent(ix, lab, next) && propagate(ix, lab, &mut trail) {
                go(ix, lab, out);
            }
            for a in trail {
                lab[a] = None;
            }
        }
    }

    let mut lab = vec![None; ix.len()];
    let mut trail = Vec::new();
    let mut out = Vec::new();
    if propagate(ix, &mut lab, &mut trail) {
        go(ix, &mut lab, &mut out);
    }
    out
}

pub fn enumerate_complete(af: &ArgumentationFramework, sense: Sense) -> ArgLabellingTable {
    let ix = Indexed::new(af);
    match sense {
        Sense::Weak => ix.table(weak_complete_sets(&ix).iter().map(|s| Indexed::two_valued(s))),
        Sense::Strong => ix.table(strong_complete_rows(&ix)),
    }
}

fn row_commitment_leq(lo: &Row, hi: &Row) -> bool {
    lo.iter().zip(hi).all(|(l, h)| !l.is_decided() || l == h)
}

/// Complete labellings not strictly below another complete labelling.
pub fn enumerate_preferred(af: &ArgumentationFramework, sense: Sense) -> ArgLabellingTable {
    let complete = enumerate_complete(af, sense);
    let rows = complete.raw_rows();
    let maximal = rows
        .iter()
        .filter(|r| !rows.iter().any(|o| o != *r && row_commitment_leq(r, o)))
        .cloned();
    ArgLabellingTable::from_raw(complete.header_set(), maximal).expect("same header")
}

/// Least fixed point: label `in` whatever has all attackers `out`, `out`
/// whatever has an `in` attacker, and leave the rest undecided.
pub fn compute_grounded(af: &ArgumentationFramework, sense: Sense) -> Labelling {
    let ix = Indexed::new(af);
    let n = ix.len();
    let mut lab: Vec<Option<Label>> = vec![None; n];
    loop {
        let mut changed = false;
        for a in 0..n {
            if lab[a].is_some() {
                continue;
            }
            let atts = &ix.attackers[a];
            if atts.iter().all(|&x| lab[x] == Some(Label::Out)) {
                lab[a] = Some(Label::In);
                changed = true;
            } else if atts.iter().any(|&x| lab[x] == Some(Label::In)) {
                lab[a] = Some(Label::Out);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let labels = lab.into_iter().map(|l| match (sense, l) {
        (Sense::Strong, Some(l)) => l,
        (Sense::Strong, None) => Label::Und,
        (Sense::Weak, Some(Label::In)) => Label::In,
        (Sense::Weak, _) => Label::Lc,
    });
    Labelling::from_row(&ix.arguments, labels)
}

pub fn enumerate_stable(af: &ArgumentationFramework, sense: Sense) -> ArgLabellingTable {
    let ix = Indexed::new(af);
    let complete = enumerate_complete(af, sense);
    match sense {
        Sense::Strong => complete.select_rows(|l| l.count(Label::Und) == 0),
        Sense::Weak => {
            let rows = complete.raw_rows().iter().filter(|r| {
                (0..ix.len()).all(|a| {
                    r[a] == Label::In || ix.attackers[a].iter().any(|&x| r[x] == Label::In)
                })
            });
            ix.table(rows.cloned())
        }
    }
}

/// Dispatches on the semantics kind. Admissible ignores `sense`.
pub fn semantics(af: &ArgumentationFramework, kind: SemanticsKind, sense: Sense) -> ArgLabellingTable {
    match kind {
        SemanticsKind::Admissible => enumerate_admissible(af),
        SemanticsKind::Complete => enumerate_complete(af, sense),
        SemanticsKind::Preferred => enumerate_preferred(af, sense),
        SemanticsKind::Grounded => {
            ArgLabellingTable::new(af.arguments().clone(), [compute_grounded(af, sense)])
                .expect("grounded labelling covers every argument")
        }
        SemanticsKind::Stable => enumerate_stable(af, sense),
    }
}

/// Admissible labellings of the attack-closure of `a` that accept `a`.
pub fn explanation_semantics(af: &ArgumentationFramework, a: &Argument) -> Result<ArgLabellingTable> {
    let relevant = af.relevance_set(a)?;
    let sub = af.restrict(&relevant)?;
    Ok(enumerate_admissible(&sub).select_rows(|l| l.get(a) == Some(Label::In)))
}

/// One agent's view: the base semantics of the sub-framework over `known`,
/// restricted to the arguments the agent puts forward.
pub fn local_semantics(
    af: &ArgumentationFramework,
    known: &BTreeSet<Argument>,
    own: &BTreeSet<Argument>,
    base: SemanticsKind,
    sense: Sense,
) -> Result<ArgLabellingTable> {
    if let Some(x) = own.iter().find(|x| !known.contains(*x)) {
        return Err(Error::DomainMismatch(format!(
            "`{x}` is put forward but not known by the agent"
        )));
    }
    let sub = af.restrict(known)?;
    semantics(&sub, base, sense).project(own)
}

/// Global labellings whose restriction to every agent block appears in that
/// agent's local semantics.
pub fn multi_agent_semantics(
    global: &ArgLabellingTable,
    locals: &[ArgLabellingTable],
) -> Result<ArgLabellingTable> {
    let mut covered = BTreeSet::new();
    for local in locals {
        for a in local.header() {
            if !covered.insert(a.clone()) {
                return Err(Error::NotAPartition(format!("`{a}` is in two blocks")));
            }
        }
    }
    if covered != global.header_set() {
        return Err(Error::NotAPartition(
            "blocks must cover exactly the global header".into(),
        ));
    }
    let mut keep = Vec::new();
    'rows: for lab in global.rows() {
        for local in locals {
            if !local.contains(&lab.restrict(&local.header_set())?) {
                continue 'rows;
            }
        }
        keep.push(lab);
    }
    ArgLabellingTable::new(global.header_set(), keep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::af::{arg, args};
    use crate::fixtures::{self, example1_framework, labelling as lambda};

    fn rows_of(ids: &[usize]) -> ArgLabellingTable {
        let header = lambda(ids[0]).domain();
        ArgLabellingTable::new(header, ids.iter().map(|&i| lambda(i))).unwrap()
    }

    fn in_sets(t: &ArgLabellingTable) -> BTreeSet<BTreeSet<Argument>> {
        t.rows().map(|l| l.in_set()).collect()
    }

    #[test]
    fn admissible_of_example_one() {
        let adm = enumerate_admissible(&example1_framework());
        for i in 1..=4 {
            assert!(adm.contains(&lambda(i)), "λ{i}");
        }
        let expected: BTreeSet<BTreeSet<Argument>> = [
            vec![],
            vec!["aF"],
            vec!["aE"],
            vec!["aD"],
            vec!["aF", "aE"],
            vec!["aF", "aD"],
            vec!["aD", "aB"],
            vec!["aF", "aD", "aB"],
        ]
        .into_iter()
        .map(args)
        .collect();
        assert_eq!(in_sets(&adm), expected);
        let empty = enumerate_admissible(&ArgumentationFramework::default());
        assert_eq!(empty.len(), 1);
        assert!(empty.header().is_empty());
    }

    #[test]
    fn complete_strong_of_example_one_is_table_two() {
        assert_eq!(
            enumerate_complete(&example1_framework(), Sense::Strong),
            rows_of(&[5, 6, 7])
        );
    }

    #[test]
    fn self_attacker() {
        let af = ArgumentationFramework::new(args(["a"]), [(arg("a"), arg("a"))]).unwrap();
        let c = enumerate_complete(&af, Sense::Strong);
        assert_eq!(c.raw_rows().iter().collect::<Vec<_>>(), vec![&vec![Label::Und]]);
        assert!(enumerate_stable(&af, Sense::Strong).is_empty());
        assert!(enumerate_stable(&af, Sense::Weak).is_empty());
    }

    #[test]
    fn preferred() {
        // λ6 is maximal too: nothing complete extends aE = in, aD = out.
        assert_eq!(enumerate_preferred(&example1_framework(), Sense::Strong), rows_of(&[6, 7]));
        assert_eq!(
            in_sets(&enumerate_preferred(&example1_framework(), Sense::Weak)),
            BTreeSet::from([args(["aF", "aE"]), args(["aF", "aD", "aB"])])
        );
        let mutual = ArgumentationFramework::new(
            args(["a", "b"]),
            [(arg("a"), arg("b")), (arg("b"), arg("a"))],
        )
        .unwrap();
        let p = enumerate_preferred(&mutual, Sense::Strong);
        assert_eq!(
            p.raw_rows().iter().cloned().collect::<Vec<_>>(),
            vec![vec![Label::In, Label::Out], vec![Label::Out, Label::In]]
        );
        let empty = enumerate_preferred(&ArgumentationFramework::default(), Sense::Strong);
        assert_eq!(empty.len(), 1);
    }

    #[test]
    fn grounded() {
        assert_eq!(compute_grounded(&example1_framework(), Sense::Strong), lambda(5));
        let single = ArgumentationFramework::new(args(["a"]), []).unwrap();
        assert_eq!(
            compute_grounded(&single, Sense::Strong),
            [(arg("a"), Label::In)].into_iter().collect()
        );
        assert_eq!(
            compute_grounded(&example1_framework(), Sense::Weak).in_set(),
            args(["aF"])
        );
    }

    #[test]
    fn stable_of_example_one() {
        assert_eq!(enumerate_stable(&example1_framework(), Sense::Strong), rows_of(&[7]));
        assert_eq!(
            in_sets(&enumerate_stable(&example1_framework(), Sense::Weak)),
            BTreeSet::from([args(["aF", "aD", "aB"])])
        );
    }

    #[test]
    fn explanation() {
        let af = example1_framework();
        assert_eq!(explanation_semantics(&af, &arg("aB")).unwrap(), rows_of(&[8]));
        assert!(explanation_semantics(&af, &arg("aG")).unwrap().is_empty());
        let single = ArgumentationFramework::new(args(["a"]), []).unwrap();
        let e = explanation_semantics(&single, &arg("a")).unwrap();
        assert_eq!(e.rows().collect::<Vec<_>>(), vec![[(arg("a"), Label::In)].into_iter().collect()]);
        assert!(explanation_semantics(&af, &arg("zz")).is_err());
    }

    #[test]
    fn agents() {
        let af = example1_framework();
        let agent1 = local_semantics(
            &af,
            &args(["aG", "aF", "aE", "aD"]),
            &args(["aG", "aF", "aE"]),
            SemanticsKind::Complete,
            Sense::Strong,
        )
        .unwrap();
        assert_eq!(agent1, rows_of(&[9, 10, 11]));
        let agent2 = local_semantics(
            &af,
            &args(["aE", "aD", "aC", "aB", "aA"]),
            &args(["aD", "aC", "aB", "aA"]),
            SemanticsKind::Stable,
            Sense::Strong,
        )
        .unwrap();
        assert_eq!(agent2, rows_of(&[12]));
        let everything = local_semantics(
            &af,
            af.arguments(),
            af.arguments(),
            SemanticsKind::Complete,
            Sense::Strong,
        )
        .unwrap();
        assert_eq!(everything, enumerate_complete(&af, Sense::Strong));
        assert!(local_semantics(&af, &args(["aA"]), &args(["aB"]), SemanticsKind::Complete, Sense::Strong).is_err());

        let global = rows_of(&[5, 6, 7]);
        let multi = multi_agent_semantics(&global, &[agent1.clone(), agent2.clone()]).unwrap();
        assert_eq!(multi, rows_of(&[7]));

        let g = args(["aG", "aF", "aE"]);
        let rest: BTreeSet<_> = global.header_set().difference(&g).cloned().collect();
        let all = multi_agent_semantics(&global, &[global.project(&g).unwrap(), global.project(&rest).unwrap()]).unwrap();
        assert_eq!(all, global);
        let none = multi_agent_semantics(&global, &[agent1.clone(), ArgLabellingTable::empty(rest)]).unwrap();
        assert!(none.is_empty());
        assert!(multi_agent_semantics(&global, &[agent1]).is_err());
    }

    #[test]
    fn fixtures_agree_with_reference_tables() {
        let db = fixtures::figure1_database();
        assert_eq!(db.table("tbl2").unwrap(), &enumerate_complete(&example1_framework(), Sense::Strong));
    }
}

//! Abstract syntax of epistemic logic programs.
//!
//! A program is a list of disjunctive rules whose bodies mix extended
//! literals (objective literals under zero, one or two default negations)
//! with subjective elements (`K`/`M` applied to an extended literal of
//! depth at most one, optionally under a single default negation).
//!
//! Every subjective element denotes one *epistemic negation* `NOT f`,
//! either used positively or under a negation. `normalize` collapses
//! default-negation chains and [`SubjectiveElement::occurrence`] gives the
//! canonical form that reducts and guess enumeration work on.

mod parser;
mod strong;

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

pub use parser::{
    parse_program, parse_source, validate, Diagnostic, ParseError, SourceProgram, SourceRule, SyntaxError,
};
pub use strong::{eliminate_strong_negation, StrongNegationError, StrongNegationMap};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Const(String),
    Var(String),
}

impl Term {
    pub fn name(&self) -> &str {
        match self {
            Term::Const(s) | Term::Var(s) => s,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub predicate: String,
    pub terms: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, terms: Vec<Term>) -> Self {
        Atom { predicate: predicate.into(), terms }
    }

    /// A propositional (zero-arity) atom.
    pub fn prop(predicate: impl Into<String>) -> Self {
        Atom::new(predicate, Vec::new())
    }

    pub fn is_ground(&self) -> bool {
        self.terms.iter().all(|t| !t.is_var())
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.terms.iter().filter(|t| t.is_var()).map(Term::name)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.terms.is_empty() {
            f.write_str("(")?;
            for (i, t) in self.terms.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{t}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// An atom or a classically negated atom.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ObjectiveLiteral {
    pub atom: Atom,
    pub strong_neg: bool,
}

impl ObjectiveLiteral {
    pub fn new(atom: Atom, strong_neg: bool) -> Self {
        ObjectiveLiteral { atom, strong_neg }
    }

    pub fn pos(atom: Atom) -> Self {
        ObjectiveLiteral::new(atom, false)
    }

    /// Shorthand for a positive propositional literal.
    pub fn prop(name: &str) -> Self {
        ObjectiveLiteral::pos(Atom::prop(name))
    }

    /// The strong (classical) complement.
    pub fn complement(&self) -> Self {
        ObjectiveLiteral::new(self.atom.clone(), !self.strong_neg)
    }

    pub fn is_ground(&self) -> bool {
        self.atom.is_ground()
    }

    // Streams the printed form without allocating; drives `Ord`.
    fn printed_chars(&self) -> impl Iterator<Item = char> + '_ {
        let sign = self.strong_neg.then_some('-');
        let args = (!self.atom.terms.is_empty()).then(|| {
            std::iter::once('(')
                .chain(
                    self.atom
                        .terms
                        .iter()
                        .enumerate()
                        .flat_map(|(i, t)| (i > 0).then_some(',').into_iter().chain(t.name().chars())),
                )
                .chain(std::iter::once(')'))
        });
        sign.into_iter().chain(self.atom.predicate.chars()).chain(args.into_iter().flatten())
    }
}

/// Literals order lexicographically by their printed form.
impl Ord for ObjectiveLiteral {
    fn cmp(&self, other: &Self) -> Ordering {
        self.printed_chars().cmp(other.printed_chars())
    }
}

impl PartialOrd for ObjectiveLiteral {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ObjectiveLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.strong_neg {
            f.write_str("-")?;
        }
        write!(f, "{}", self.atom)
    }
}

/// Collapse a chain of `d` default negations: 0, 1 and 2 are kept, longer
/// chains reduce to 1 (odd) or 2 (even).
pub fn collapse_depth(d: u32) -> u8 {
    match d {
        0..=2 => d as u8,
        _ if d % 2 == 1 => 1,
        _ => 2,
    }
}

/// An objective literal under `depth` default negations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtLiteral {
    pub lit: ObjectiveLiteral,
    pub depth: u8,
}

impl ExtLiteral {
    pub fn new(lit: ObjectiveLiteral, depth: u8) -> Self {
        ExtLiteral { lit, depth }
    }

    pub fn plain(lit: ObjectiveLiteral) -> Self {
        ExtLiteral::new(lit, 0)
    }

    pub fn normalized(&self) -> Self {
        ExtLiteral::new(self.lit.clone(), collapse_depth(self.depth as u32))
    }

    /// Prefix `n` further default negations and collapse.
    pub fn negated(&self, n: u32) -> Self {
        ExtLiteral::new(self.lit.clone(), collapse_depth(self.depth as u32 + n))
    }

    /// Default-negation complement on depth-0/1 literals: `e` <-> `not e`.
    pub fn default_complement(&self) -> Self {
        let depth = match collapse_depth(self.depth as u32) {
            0 => 1,
            1 => 0,
            _ => 1,
        };
        ExtLiteral::new(self.lit.clone(), depth)
    }
}

impl fmt::Display for ExtLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for _ in 0..self.depth {
            f.write_str("not ")?;
        }
        write!(f, "{}", self.lit)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Modal {
    K,
    M,
}

impl fmt::Display for Modal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Modal::K => "K",
            Modal::M => "M",
        })
    }
}

/// `NOT target`: the target fails in at least one belief set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EpistemicNegation {
    pub target: ExtLiteral,
}

impl fmt::Display for EpistemicNegation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NOT {}", self.target)
    }
}

/// Canonical reading of a subjective element: the epistemic negation it
/// denotes and whether it is used negated (`K f` is `NOT f` negated).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Occurrence {
    pub negation: EpistemicNegation,
    pub negated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubjectiveElement {
    pub outer_neg: bool,
    pub modal: Modal,
    pub inner: ExtLiteral,
}

impl SubjectiveElement {
    pub fn new(outer_neg: bool, modal: Modal, inner: ExtLiteral) -> Self {
        SubjectiveElement { outer_neg, modal, inner }
    }

    /// `not K e` is `NOT e`, `K e` is its negation, and `M e` stands for
    /// `not K not e`.
    pub fn occurrence(&self) -> Occurrence {
        let inner = self.inner.normalized();
        let (target, negated) = match (self.modal, self.outer_neg) {
            (Modal::K, true) => (inner, false),
            (Modal::K, false) => (inner, true),
            (Modal::M, false) => (inner.default_complement(), false),
            (Modal::M, true) => (inner.default_complement(), true),
        };
        Occurrence { negation: EpistemicNegation { target }, negated }
    }
}

impl fmt::Display for SubjectiveElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.outer_neg {
            f.write_str("not ")?;
        }
        write!(f, "{} {}", self.modal, self.inner)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BodyElement {
    Ext(ExtLiteral),
    Subjective(SubjectiveElement),
}

impl BodyElement {
    pub fn literal(&self) -> &ObjectiveLiteral {
        match self {
            BodyElement::Ext(e) => &e.lit,
            BodyElement::Subjective(s) => &s.inner.lit,
        }
    }
}

impl fmt::Display for BodyElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BodyElement::Ext(e) => write!(f, "{e}"),
            BodyElement::Subjective(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind {
    Regular,
    /// World view constraint, written `!- body.`
    Wvc,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub kind: RuleKind,
    pub head: Vec<ObjectiveLiteral>,
    pub body: Vec<BodyElement>,
}

impl Rule {
    pub fn new(head: Vec<ObjectiveLiteral>, body: Vec<BodyElement>) -> Self {
        Rule { kind: RuleKind::Regular, head, body }
    }

    pub fn wvc(body: Vec<SubjectiveElement>) -> Self {
        Rule { kind: RuleKind::Wvc, head: Vec::new(), body: body.into_iter().map(BodyElement::Subjective).collect() }
    }

    pub fn is_constraint(&self) -> bool {
        self.head.is_empty()
    }

    pub fn has_subjective(&self) -> bool {
        self.body.iter().any(|e| matches!(e, BodyElement::Subjective(_)))
    }

    pub fn literals(&self) -> impl Iterator<Item = &ObjectiveLiteral> {
        self.head.iter().chain(self.body.iter().map(BodyElement::literal))
    }

    /// Variables in order of first occurrence.
    pub fn variables(&self) -> Vec<&str> {
        let mut seen = Vec::new();
        for v in self.literals().flat_map(|l| l.atom.variables()) {
            if !seen.contains(&v) {
                seen.push(v);
            }
        }
        seen
    }

    pub fn is_ground(&self) -> bool {
        self.literals().all(ObjectiveLiteral::is_ground)
    }
}

fn write_joined<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T], sep: &str) -> fmt::Result {
    for (i, it) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{it}")?;
    }
    Ok(())
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            RuleKind::Wvc => {
                f.write_str("!- ")?;
                write_joined(f, &self.body, ", ")?;
            }
            RuleKind::Regular => {
                write_joined(f, &self.head, " | ")?;
                if !self.body.is_empty() || self.head.is_empty() {
                    f.write_str(if self.head.is_empty() { ":- " } else { " :- " })?;
                    write_joined(f, &self.body, ", ")?;
                }
            }
        }
        f.write_str(".")
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Program {
    pub rules: Vec<Rule>,
    pub wvcs: Vec<Rule>,
}

impl Program {
    /// Splits world view constraints from ordinary rules.
    pub fn from_rules(all: impl IntoIterator<Item = Rule>) -> Self {
        let (wvcs, rules) = all.into_iter().partition(|r| r.kind == RuleKind::Wvc);
        Program { rules, wvcs }
    }

    pub fn all_rules(&self) -> impl Iterator<Item = &Rule> {
        self.rules.iter().chain(self.wvcs.iter())
    }

    pub fn is_ground(&self) -> bool {
        self.all_rules().all(Rule::is_ground)
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in self.all_rules() {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

fn normalize_element(e: &BodyElement) -> BodyElement {
    match e {
        BodyElement::Ext(x) => BodyElement::Ext(x.normalized()),
        BodyElement::Subjective(s) => {
            BodyElement::Subjective(SubjectiveElement::new(s.outer_neg, s.modal, s.inner.normalized()))
        }
    }
}

pub fn normalize_rule(r: &Rule) -> Rule {
    Rule { kind: r.kind, head: r.head.clone(), body: r.body.iter().map(normalize_element).collect() }
}

/// Collapse every default-negation chain to depth 0, 1 or 2.
pub fn normalize(p: &Program) -> Program {
    Program { rules: p.rules.iter().map(normalize_rule).collect(), wvcs: p.wvcs.iter().map(normalize_rule).collect() }
}

/// The ordered set EP of distinct epistemic negations of a program.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EpistemicNegations {
    list: Vec<EpistemicNegation>,
    index: HashMap<EpistemicNegation, usize>,
}

impl EpistemicNegations {
    pub fn from_negations(negs: impl IntoIterator<Item = EpistemicNegation>) -> Self {
        let mut keyed: Vec<(String, EpistemicNegation)> = negs.into_iter().map(|n| (n.to_string(), n)).collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        keyed.dedup_by(|a, b| a.0 == b.0);
        let list: Vec<EpistemicNegation> = keyed.into_iter().map(|(_, n)| n).collect();
        let index = list.iter().cloned().enumerate().map(|(i, n)| (n, i)).collect();
        EpistemicNegations { list, index }
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn get(&self, i: usize) -> &EpistemicNegation {
        &self.list[i]
    }

    pub fn index_of(&self, n: &EpistemicNegation) -> Option<usize> {
        self.index.get(n).copied()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, EpistemicNegation> {
        self.list.iter()
    }
}

/// EP of the ordinary rules; world view constraints do not contribute.
pub fn collect_epistemic_negations(rules: &[Rule]) -> EpistemicNegations {
    EpistemicNegations::from_negations(rules.iter().filter(|r| r.kind == RuleKind::Regular).flat_map(|r| {
        r.body.iter().filter_map(|e| match e {
            BodyElement::Subjective(s) => Some(s.occurrence().negation),
            BodyElement::Ext(_) => None,
        })
    }))
}

/// All distinct predicate names of a program.
pub fn predicates(p: &Program) -> BTreeSet<&str> {
    p.all_rules().flat_map(|r| r.literals().map(|l| l.atom.predicate.as_str())).collect()
}

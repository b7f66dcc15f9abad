//! Epistemic reducts, guess checks, and the reduct framework program.
//!
//! A guess is the subset of EP assumed true. Given a guess, every
//! subjective element is replaced according to the semantics version,
//! yielding a subjective-free program whose answer sets are the candidate
//! belief sets. The candidate is a world view when each epistemic
//! negation is satisfied by it exactly when the guess says so.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aspcore::{satisfies_ext, BeliefSet};
use crate::ground::GroundProgram;
use crate::syntax::{
    predicates, BodyElement, EpistemicNegation, EpistemicNegations, ExtLiteral, ObjectiveLiteral, Occurrence, Rule,
    SubjectiveElement,
};

/// Guesses are 64-bit masks over EP.
pub const MAX_EPISTEMIC_NEGATIONS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Semantics {
    Es1994,
    Es2014,
    Es2016,
}

impl Semantics {
    pub const ALL: [Semantics; 3] = [Semantics::Es1994, Semantics::Es2014, Semantics::Es2016];

    /// Only accepted guesses that are maximal under inclusion count.
    pub fn requires_maximality(self) -> bool {
        self == Semantics::Es2016
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Semantics::Es1994 => "es1994",
            Semantics::Es2014 => "es2014",
            Semantics::Es2016 => "es2016",
        })
    }
}

impl FromStr for Semantics {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "es1994" => Ok(Semantics::Es1994),
            "es2014" => Ok(Semantics::Es2014),
            "es2016" => Ok(Semantics::Es2016),
            _ => Err(format!("unknown semantics '{s}' (expected es1994, es2014 or es2016)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EpistemicError {
    #[error("satisfaction is undefined on an empty collection of belief sets")]
    EmptyCollection,
    #[error("guess mentions negation #{index} but EP has only {len} members")]
    GuessOutOfRange { index: usize, len: usize },
    #[error("epistemic negation {0} is not in EP")]
    UnknownNegation(String),
    #[error("{0} epistemic negations exceed the supported maximum of {MAX_EPISTEMIC_NEGATIONS}")]
    TooManyNegations(usize),
    #[error("guess atom '{0}' collides with a program predicate")]
    FreshAtomCollision(String),
}

/// Subset of EP assumed true, as a bitmask over EP indices.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Guess(pub u64);

impl Guess {
    pub fn empty() -> Self {
        Guess(0)
    }

    pub fn full(k: usize) -> Self {
        match k {
            0 => Guess(0),
            64 => Guess(u64::MAX),
            _ => Guess((1u64 << k) - 1),
        }
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        Guess(indices.into_iter().fold(0, |m, i| m | 1 << i))
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Self {
        Guess(self.0 | 1 << i)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: Guess) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_proper_subset(self, other: Guess) -> bool {
        self != other && self.is_subset(other)
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.contains(i))
    }

    /// Larger guesses first, ties broken lexicographically on index lists.
    pub fn canonical_cmp(&self, other: &Guess) -> std::cmp::Ordering {
        other.len().cmp(&self.len()).then_with(|| self.indices().cmp(other.indices()))
    }

    /// Printed members, e.g. `["NOT not q"]`.
    pub fn describe(self, ep: &EpistemicNegations) -> Vec<String> {
        self.indices().map(|i| ep.get(i).to_string()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorldView {
    pub belief_sets: Vec<BeliefSet>,
    pub guess: Guess,
    pub semantics: Semantics,
}

pub fn satisfies_subjective(w: &[BeliefSet], s: &SubjectiveElement) -> Result<bool, EpistemicError> {
    if w.is_empty() {
        return Err(EpistemicError::EmptyCollection);
    }
    let value = match s.modal {
        crate::syntax::Modal::K => w.iter().all(|b| satisfies_ext(b, &s.inner)),
        crate::syntax::Modal::M => w.iter().any(|b| satisfies_ext(b, &s.inner)),
    };
    Ok(value != s.outer_neg)
}

/// `NOT f` holds when `f` fails in some belief set.
pub fn negation_satisfied(w: &[BeliefSet], n: &EpistemicNegation) -> Result<bool, EpistemicError> {
    if w.is_empty() {
        return Err(EpistemicError::EmptyCollection);
    }
    Ok(w.iter().any(|b| !satisfies_ext(b, &n.target)))
}

/// Rejects guesses whose induced requirements cannot hold together:
/// `K l` with `not M l`, `K l` with `M l'`, `K l` with `K l'`, where `l'`
/// is the strong complement of `l`.
pub fn is_valid_guess(ep: &EpistemicNegations, phi: Guess) -> bool {
    let lookup = |lit: &ObjectiveLiteral, depth: u8| {
        ep.index_of(&EpistemicNegation { target: ExtLiteral::new(lit.clone(), depth) })
    };
    // K f is required exactly when NOT f is assumed false
    let known = |lit: &ObjectiveLiteral, depth: u8| lookup(lit, depth).is_some_and(|i| !phi.contains(i));
    let possible = |lit: &ObjectiveLiteral| lookup(lit, 1).is_some_and(|i| phi.contains(i));
    ep.iter().enumerate().filter(|&(i, n)| !phi.contains(i) && n.target.depth == 0).all(|(_, n)| {
        let l = &n.target.lit;
        let comp = l.complement();
        !(known(l, 1) || possible(&comp) || known(&comp, 0))
    })
}

enum Subst {
    Top,
    Bottom,
    Lit(ExtLiteral),
}

// Replacement of one occurrence when its negation is (not) assumed true.
fn substitute(occ: &Occurrence, assumed: bool, sem: Semantics) -> Subst {
    let f = &occ.negation.target;
    match sem {
        Semantics::Es1994 => {
            if assumed != occ.negated {
                Subst::Top
            } else {
                Subst::Bottom
            }
        }
        _ if assumed => {
            if occ.negated {
                Subst::Bottom
            } else {
                Subst::Top
            }
        }
        Semantics::Es2016 => Subst::Lit(f.negated(if occ.negated { 2 } else { 1 })),
        Semantics::Es2014 => Subst::Lit(if occ.negated { f.normalized() } else { f.negated(1) }),
    }
}

fn check_guess(ep: &EpistemicNegations, phi: Guess) -> Result<(), EpistemicError> {
    match phi.indices().last() {
        Some(i) if i >= ep.len() => Err(EpistemicError::GuessOutOfRange { index: i, len: ep.len() }),
        _ => Ok(()),
    }
}

fn occurrence_index(ep: &EpistemicNegations, s: &SubjectiveElement) -> Result<(Occurrence, usize), EpistemicError> {
    let occ = s.occurrence();
    let i = ep.index_of(&occ.negation).ok_or_else(|| EpistemicError::UnknownNegation(occ.negation.to_string()))?;
    Ok((occ, i))
}

/// Subjective-free program for guess `phi`; world view constraints are
/// not part of the reduct.
pub fn epistemic_reduct(
    g: &GroundProgram,
    ep: &EpistemicNegations,
    phi: Guess,
    sem: Semantics,
) -> Result<GroundProgram, EpistemicError> {
    check_guess(ep, phi)?;
    let mut rules = Vec::with_capacity(g.rules.len());
    'rules: for r in &g.rules {
        let mut body = Vec::with_capacity(r.body.len());
        for e in &r.body {
            match e {
                BodyElement::Ext(x) => body.push(BodyElement::Ext(x.normalized())),
                BodyElement::Subjective(s) => {
                    let (occ, i) = occurrence_index(ep, s)?;
                    match substitute(&occ, phi.contains(i), sem) {
                        Subst::Top => {}
                        Subst::Bottom => continue 'rules,
                        Subst::Lit(x) => body.push(BodyElement::Ext(x)),
                    }
                }
            }
        }
        rules.push(Rule::new(r.head.clone(), body));
    }
    Ok(g.derive(rules, Vec::new()))
}

/// Non-empty, and every negation in EP is satisfied exactly when `phi`
/// assumes it.
pub fn verify_guess(ep: &EpistemicNegations, phi: Guess, w: &[BeliefSet]) -> bool {
    !w.is_empty()
        && ep.iter().enumerate().all(|(i, n)| negation_satisfied(w, n).is_ok_and(|sat| sat == phi.contains(i)))
}

/// The guess a collection of belief sets induces on EP.
pub fn induced_guess(ep: &EpistemicNegations, w: &[BeliefSet]) -> Result<Guess, EpistemicError> {
    let mut g = Guess::empty();
    for (i, n) in ep.iter().enumerate() {
        if negation_satisfied(w, n)? {
            g = g.with(i);
        }
    }
    Ok(g)
}

pub fn guess_atom(i: usize) -> ObjectiveLiteral {
    ObjectiveLiteral::prop(&format!("__g{}", i + 1))
}

pub fn guard_atom(i: usize) -> ObjectiveLiteral {
    ObjectiveLiteral::prop(&format!("__h{}", i + 1))
}

/// One subjective-free program covering every guess: `__g<i>` stands for
/// "negation i is assumed true", `__h<i>` for its opposite.
#[derive(Debug, Clone)]
pub struct Framework {
    pub program: GroundProgram,
    pub negations: usize,
}

impl Framework {
    /// Split an answer set into the guess it encodes and its original part.
    pub fn decode(&self, s: &BeliefSet) -> (Guess, BeliefSet) {
        let fresh: HashSet<ObjectiveLiteral> =
            (0..self.negations).flat_map(|i| [guess_atom(i), guard_atom(i)]).collect();
        let phi = Guess::from_indices((0..self.negations).filter(|&i| s.contains(&guess_atom(i))));
        (phi, s.iter().filter(|l| !fresh.contains(l)).cloned().collect())
    }
}

/// Build the framework program. A rule with subjective elements is
/// duplicated once per combination of guard atoms; a combination whose
/// substitution is false is left out.
pub fn reduct_framework(
    g: &GroundProgram,
    ep: &EpistemicNegations,
    sem: Semantics,
) -> Result<Framework, EpistemicError> {
    if ep.len() > MAX_EPISTEMIC_NEGATIONS {
        return Err(EpistemicError::TooManyNegations(ep.len()));
    }
    let program = g.as_program();
    let preds = predicates(&program);
    for i in 0..ep.len() {
        for a in [guess_atom(i), guard_atom(i)] {
            if preds.contains(a.atom.predicate.as_str()) {
                return Err(EpistemicError::FreshAtomCollision(a.atom.predicate));
            }
        }
    }

    let mut rules = Vec::new();
    for r in &g.rules {
        let mut fixed = Vec::new();
        let mut choices: Vec<Vec<(usize, bool, Subst)>> = Vec::new();
        for e in &r.body {
            match e {
                BodyElement::Ext(x) => fixed.push(BodyElement::Ext(x.normalized())),
                BodyElement::Subjective(s) => {
                    let (occ, i) = occurrence_index(ep, s)?;
                    let options: Vec<(usize, bool, Subst)> = [true, false]
                        .into_iter()
                        .map(|assumed| (i, assumed, substitute(&occ, assumed, sem)))
                        .filter(|(_, _, s)| !matches!(s, Subst::Bottom))
                        .collect();
                    choices.push(options);
                }
            }
        }
        if choices.is_empty() {
            rules.push(Rule::new(r.head.clone(), fixed));
            continue;
        }
        for combo in choices.iter().map(|c| c.iter()).multi_cartesian_product() {
            let mut guards: Vec<(usize, bool)> = combo.iter().map(|&&(i, a, _)| (i, a)).collect();
            guards.sort_unstable();
            guards.dedup();
            if guards.windows(2).any(|w| w[0].0 == w[1].0) {
                continue;
            }
            let mut body = fixed.clone();
            for (_, _, s) in &combo {
                if let Subst::Lit(x) = s {
                    body.push(BodyElement::Ext(x.clone()));
                }
            }
            for (i, assumed) in guards {
                let atom = if assumed { guess_atom(i) } else { guard_atom(i) };
                body.push(BodyElement::Ext(ExtLiteral::plain(atom)));
            }
            rules.push(Rule::new(r.head.clone(), body));
        }
    }
    for i in 0..ep.len() {
        rules.push(Rule::new(vec![guess_atom(i)], vec![BodyElement::Ext(ExtLiteral::new(guard_atom(i), 1))]));
        rules.push(Rule::new(vec![guard_atom(i)], vec![BodyElement::Ext(ExtLiteral::new(guess_atom(i), 1))]));
    }
    Ok(Framework { program: GroundProgram::new(rules, Vec::new()), negations: ep.len() })
}

/// Framework program as solver input text.
pub fn emit_reduct_framework(
    g: &GroundProgram,
    ep: &EpistemicNegations,
    sem: Semantics,
) -> Result<String, EpistemicError> {
    Ok(reduct_framework(g, ep, sem)?.program.as_program().to_string())
}

//! Brute-force reference implementations used as test oracles.
//!
//! Everything here works on a private string-based representation and
//! re-derives answer sets and world views from their definitions by
//! enumerating subsets. Only suitable for tiny ground programs.

#![allow(dead_code)]

pub mod checks;

use std::collections::BTreeSet;

use elp_core::syntax::{BodyElement, Modal, Program, Rule};
use elp_core::Semantics;

pub type Set = BTreeSet<String>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    /// Objective literal under `depth` default negations (0..=2).
    Obj(String, u8),
    Subj {
        outer: bool,
        modal: Modal,
        lit: String,
        depth: u8,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ORule {
    pub head: Vec<String>,
    pub body: Vec<Item>,
}

fn collapse(d: u8) -> u8 {
    if d == 0 {
        0
    } else {
        2 - d % 2
    }
}

fn item(e: &BodyElement) -> Item {
    match e {
        BodyElement::Ext(x) => Item::Obj(x.lit.to_string(), collapse(x.depth)),
        BodyElement::Subjective(s) => Item::Subj {
            outer: s.outer_neg,
            modal: s.modal,
            lit: s.inner.lit.to_string(),
            depth: collapse(s.inner.depth),
        },
    }
}

pub fn lower(rules: &[Rule]) -> Vec<ORule> {
    rules
        .iter()
        .map(|r| ORule {
            head: r.head.iter().map(ToString::to_string).collect(),
            body: r.body.iter().map(item).collect(),
        })
        .collect()
}

pub fn complement(l: &str) -> String {
    match l.strip_prefix('-') {
        Some(a) => a.to_string(),
        None => format!("-{l}"),
    }
}

pub fn consistent(s: &Set) -> bool {
    s.iter().all(|l| !s.contains(&complement(l)))
}

pub fn holds(s: &Set, lit: &str, depth: u8) -> bool {
    s.contains(lit) == depth.is_multiple_of(2)
}

fn universe(rules: &[ORule]) -> Vec<String> {
    let mut u = BTreeSet::new();
    for r in rules {
        u.extend(r.head.iter().cloned());
        for i in &r.body {
            match i {
                Item::Obj(l, _) | Item::Subj { lit: l, .. } => {
                    u.insert(l.clone());
                }
            }
        }
    }
    u.into_iter().collect()
}

fn subsets(u: &[String]) -> impl Iterator<Item = Set> + '_ {
    assert!(u.len() <= 16, "oracle universe too large");
    (0u32..1 << u.len())
        .map(move |m| u.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, l)| l.clone()).collect())
}

/// Answer sets of a subjective-free program: consistent sets that are
/// minimal models of the reduct, where a nested `not` element is
/// evaluated against the candidate itself.
pub fn answer_sets(rules: &[ORule]) -> Vec<Set> {
    let u = universe(rules);
    let mut out = Vec::new();
    for x in subsets(&u) {
        if !consistent(&x) {
            continue;
        }
        let reduct: Vec<(Vec<String>, Vec<String>)> = rules
            .iter()
            .filter(|r| {
                r.body.iter().all(|i| match i {
                    Item::Obj(l, d) if *d > 0 => holds(&x, l, *d),
                    Item::Obj(..) => true,
                    Item::Subj { .. } => panic!("subjective element in answer set oracle"),
                })
            })
            .map(|r| {
                let pos = r
                    .body
                    .iter()
                    .filter_map(|i| match i {
                        Item::Obj(l, 0) => Some(l.clone()),
                        _ => None,
                    })
                    .collect();
                (r.head.clone(), pos)
            })
            .collect();
        let is_model =
            |s: &Set| reduct.iter().all(|(h, b)| !b.iter().all(|l| s.contains(l)) || h.iter().any(|l| s.contains(l)));
        if !is_model(&x) {
            continue;
        }
        let xs: Vec<String> = x.iter().cloned().collect();
        let minimal = subsets(&xs).all(|y| y.len() == x.len() || !is_model(&y));
        if minimal {
            out.push(x);
        }
    }
    canonical(out)
}

/// Sort belief sets by size, then lexicographically.
pub fn canonical(mut sets: Vec<Set>) -> Vec<Set> {
    sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.iter().cmp(b.iter())));
    sets
}

/// `K lit` / `M lit` with `depth` default negations on the literal.
pub fn subjective_holds(w: &[Set], outer: bool, modal: Modal, lit: &str, depth: u8) -> bool {
    let v = match modal {
        Modal::K => w.iter().all(|b| holds(b, lit, depth)),
        Modal::M => w.iter().any(|b| holds(b, lit, depth)),
    };
    v != outer
}

/// An epistemic negation "NOT f" as (literal, depth of f).
pub type Neg = (String, u8);

/// `K e` is "NOT e" negated; `M e` is "NOT comp(e)"; the outer `not`
/// flips the negated flag.
fn occurrence(outer: bool, modal: Modal, lit: &str, depth: u8) -> (Neg, bool) {
    assert!(depth <= 1, "oracle handles subjective depth 0 or 1");
    match modal {
        Modal::K => ((lit.to_string(), depth), !outer),
        Modal::M => ((lit.to_string(), 1 - depth), outer),
    }
}

pub fn negations(rules: &[ORule]) -> Vec<Neg> {
    let mut ep = BTreeSet::new();
    for r in rules {
        for i in &r.body {
            if let Item::Subj { outer, modal, lit, depth } = i {
                ep.insert(occurrence(*outer, *modal, lit, *depth).0);
            }
        }
    }
    let mut ep: Vec<Neg> = ep.into_iter().collect();
    ep.sort_by_key(show_neg);
    ep
}

fn neg_holds(w: &[Set], n: &Neg) -> bool {
    w.iter().any(|b| !holds(b, &n.0, n.1))
}

enum Subst {
    Top,
    Bottom,
    Lit(String, u8),
}

fn substitute(sem: Semantics, assumed: bool, (lit, depth): &Neg, negated: bool) -> Subst {
    match sem {
        Semantics::Es1994 => {
            if assumed != negated {
                Subst::Top
            } else {
                Subst::Bottom
            }
        }
        _ if assumed => {
            if negated {
                Subst::Bottom
            } else {
                Subst::Top
            }
        }
        Semantics::Es2014 if negated => Subst::Lit(lit.clone(), *depth),
        _ => {
            let d = depth + if negated { 2 } else { 1 };
            Subst::Lit(lit.clone(), collapse(d))
        }
    }
}

fn reduct(rules: &[ORule], ep: &[Neg], phi: u32, sem: Semantics) -> Vec<ORule> {
    let mut out = Vec::new();
    'rules: for r in rules {
        let mut body = Vec::new();
        for i in &r.body {
            match i {
                Item::Obj(..) => body.push(i.clone()),
                Item::Subj { outer, modal, lit, depth } => {
                    let (n, negated) = occurrence(*outer, *modal, lit, *depth);
                    let idx = ep.iter().position(|e| *e == n).expect("negation collected");
                    match substitute(sem, phi >> idx & 1 == 1, &n, negated) {
                        Subst::Top => {}
                        Subst::Bottom => continue 'rules,
                        Subst::Lit(l, d) => body.push(Item::Obj(l, d)),
                    }
                }
            }
        }
        out.push(ORule { head: r.head.clone(), body });
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OWorldView {
    /// Printed "NOT ..." strings of the guess, in negation order.
    pub guess: Vec<String>,
    pub belief_sets: Vec<Set>,
}

pub fn show_neg((lit, depth): &Neg) -> String {
    format!("NOT {}{lit}", "not ".repeat(*depth as usize))
}

/// World views by enumerating every guess, checking the answer sets of
/// its reduct against the guess, then keeping maximal guesses for
/// ES2016 and dropping views ruled out by a WVC.
pub fn world_views(p: &Program, sem: Semantics) -> Vec<OWorldView> {
    let rules = lower(&p.rules);
    let wvcs = lower(&p.wvcs);
    let ep = negations(&rules);
    assert!(ep.len() <= 8, "oracle handles at most 8 epistemic negations");
    let mut found: Vec<(u32, Vec<Set>)> = Vec::new();
    for phi in 0u32..1 << ep.len() {
        let w = answer_sets(&reduct(&rules, &ep, phi, sem));
        if !w.is_empty() && ep.iter().enumerate().all(|(i, n)| (phi >> i & 1 == 1) == neg_holds(&w, n)) {
            found.push((phi, w));
        }
    }
    if sem == Semantics::Es2016 {
        let guesses: Vec<u32> = found.iter().map(|(g, _)| *g).collect();
        found.retain(|(g, _)| !guesses.iter().any(|h| h != g && h & g == *g));
    }
    found.retain(|(_, w)| {
        !wvcs.iter().any(|c| {
            c.body.iter().all(|i| match i {
                Item::Subj { outer, modal, lit, depth } => subjective_holds(w, *outer, *modal, lit, *depth),
                Item::Obj(..) => unreachable!("objective literal in WVC"),
            })
        })
    });
    found.sort_by(|(a, _), (b, _)| {
        b.count_ones().cmp(&a.count_ones()).then_with(|| {
            let ia: Vec<u32> = (0..32).filter(|i| a >> i & 1 == 1).collect();
            let ib: Vec<u32> = (0..32).filter(|i| b >> i & 1 == 1).collect();
            ia.cmp(&ib)
        })
    });
    found
        .into_iter()
        .map(|(g, w)| OWorldView {
            guess: ep.iter().enumerate().filter(|(i, _)| g >> i & 1 == 1).map(|(_, n)| show_neg(n)).collect(),
            belief_sets: w,
        })
        .collect()
}

/// Library world views in the oracle's representation.
pub fn from_report(r: &elp_core::SolveReport) -> Vec<OWorldView> {
    r.world_views
        .iter()
        .map(|w| OWorldView {
            guess: w.guess.describe(&r.negations),
            belief_sets: w.belief_sets.iter().map(|b| b.iter().map(ToString::to_string).collect()).collect(),
        })
        .collect()
}

pub fn lib_sets(sets: &[elp_core::BeliefSet]) -> Vec<Set> {
    sets.iter().map(|b| b.iter().map(ToString::to_string).collect()).collect()
}

pub fn seeded_program(seed: u64, cfg: &elp_core::bench::RandomProgramConfig) -> String {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    elp_core::bench::random_program(&mut rng, cfg)
}

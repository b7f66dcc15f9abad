//! Answer sets of ground disjunctive programs with nested default negation.
//!
//! Bodies may carry `not` and `not not` in front of objective literals.
//! A set `S` is an answer set when it is a minimal model of the reduct of
//! the program with respect to `S`: every element under default negation
//! is evaluated against `S` and either dropped (true) or kills its rule
//! (false), leaving a positive disjunctive program.
//!
//! [`answer_sets`] searches over the literals that occur in rule heads,
//! propagating rule satisfaction, consistency and support, and checks
//! minimality on every total candidate. [`is_answer_set`] is the direct
//! definition and serves as an independent check.

use std::fmt;

use thiserror::Error;

use crate::ground::GroundProgram;
use crate::syntax::{BodyElement, ExtLiteral, ObjectiveLiteral};

/// Default cap on search nodes visited by one [`answer_sets`] call.
pub const DEFAULT_SEARCH_CAP: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AspError {
    #[error("answer set search exceeded {0} candidates")]
    ResourceLimit(u64),
    #[error("rule `{0}` still contains a subjective element")]
    Subjective(String),
}

/// A consistent set of ground objective literals, kept sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct BeliefSet {
    lits: Vec<ObjectiveLiteral>,
}

impl BeliefSet {
    pub fn new(lits: impl IntoIterator<Item = ObjectiveLiteral>) -> Self {
        let mut lits: Vec<ObjectiveLiteral> = lits.into_iter().collect();
        lits.sort();
        lits.dedup();
        BeliefSet { lits }
    }

    pub fn contains(&self, l: &ObjectiveLiteral) -> bool {
        self.lits.binary_search(l).is_ok()
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn literals(&self) -> &[ObjectiveLiteral] {
        &self.lits
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ObjectiveLiteral> {
        self.lits.iter()
    }

    /// No literal occurs together with its strong complement.
    pub fn is_consistent(&self) -> bool {
        self.lits.iter().filter(|l| l.strong_neg).all(|l| !self.contains(&l.complement()))
    }

    pub fn is_subset(&self, other: &BeliefSet) -> bool {
        self.lits.iter().all(|l| other.contains(l))
    }
}

/// Canonical order: by cardinality, then lexicographically.
impl Ord for BeliefSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.lits.len().cmp(&other.lits.len()).then_with(|| self.lits.cmp(&other.lits))
    }
}

impl PartialOrd for BeliefSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BeliefSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{ ")?;
        for l in &self.lits {
            write!(f, "{l} ")?;
        }
        f.write_str("}")
    }
}

impl FromIterator<ObjectiveLiteral> for BeliefSet {
    fn from_iter<I: IntoIterator<Item = ObjectiveLiteral>>(iter: I) -> Self {
        BeliefSet::new(iter)
    }
}

pub fn satisfies_ext(b: &BeliefSet, e: &ExtLiteral) -> bool {
    let present = b.contains(&e.lit);
    match e.normalized().depth {
        1 => !present,
        _ => present,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositiveRule {
    pub head: Vec<ObjectiveLiteral>,
    pub body: Vec<ObjectiveLiteral>,
}

/// A disjunctive program without default negation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PositiveProgram {
    pub rules: Vec<PositiveRule>,
}

impl PositiveProgram {
    pub fn is_model(&self, s: &BeliefSet) -> bool {
        self.rules.iter().all(|r| !r.body.iter().all(|l| s.contains(l)) || r.head.iter().any(|l| s.contains(l)))
    }
}

fn plain_body(rule: &crate::syntax::Rule) -> impl Iterator<Item = &ExtLiteral> {
    rule.body.iter().map(move |e| match e {
        BodyElement::Ext(x) => x,
        BodyElement::Subjective(_) => panic!("subjective element in `{rule}` reached the answer set layer"),
    })
}

/// Reduct of a subjective-free program: negated elements are evaluated
/// against `s`; true ones disappear, a false one removes its rule.
pub fn gl_reduct(g: &GroundProgram, s: &BeliefSet) -> PositiveProgram {
    let rules = g
        .rules
        .iter()
        .filter_map(|r| {
            let mut body = Vec::new();
            for e in plain_body(r) {
                if e.normalized().depth == 0 {
                    body.push(e.lit.clone());
                } else if !satisfies_ext(s, e) {
                    return None;
                }
            }
            Some(PositiveRule { head: r.head.clone(), body })
        })
        .collect();
    PositiveProgram { rules }
}

/// `s` is consistent, a model of the reduct, and no proper subset of `s`
/// is a model of the reduct.
pub fn is_answer_set(g: &GroundProgram, s: &BeliefSet) -> bool {
    if !s.is_consistent() {
        return false;
    }
    let reduct = gl_reduct(g, s);
    if !reduct.is_model(s) {
        return false;
    }
    let n = s.len();
    assert!(n < 64, "minimality check by subset enumeration is limited to 63 literals");
    (0..(1u64 << n) - 1).all(|mask| {
        let sub: BeliefSet = s.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, l)| l.clone()).collect();
        !reduct.is_model(&sub)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Val {
    Unk,
    True,
    False,
}

#[derive(Debug)]
struct Conflict;

fn elem_val(vals: &[Val], atom: usize, depth: u8) -> Val {
    match (vals[atom], depth) {
        (Val::Unk, _) => Val::Unk,
        (Val::True, 1) => Val::False,
        (Val::False, 1) => Val::True,
        (v, _) => v,
    }
}

fn assign(vals: &mut [Val], atom: usize, v: Val) -> Result<bool, Conflict> {
    match vals[atom] {
        Val::Unk => {
            vals[atom] = v;
            Ok(true)
        }
        cur if cur == v => Ok(false),
        _ => Err(Conflict),
    }
}

fn falsify_elem(vals: &mut [Val], atom: usize, depth: u8) -> Result<bool, Conflict> {
    assign(vals, atom, if depth == 1 { Val::True } else { Val::False })
}

struct CRule {
    head: Vec<usize>,
    body: Vec<(usize, u8)>,
}

/// Index-based form of a subjective-free ground program.
struct Compiled {
    rules: Vec<CRule>,
    complement: Vec<Option<usize>>,
    head_rules: Vec<Vec<usize>>,
}

impl Compiled {
    fn new(g: &GroundProgram) -> Result<Self, AspError> {
        let table = &g.atoms;
        let idx = |l: &ObjectiveLiteral| table.index_of(l).expect("literal missing from atom table");
        let mut rules = Vec::with_capacity(g.rules.len());
        for r in &g.rules {
            let mut body = Vec::new();
            for e in &r.body {
                match e {
                    BodyElement::Ext(x) => body.push((idx(&x.lit), x.normalized().depth)),
                    BodyElement::Subjective(_) => return Err(AspError::Subjective(r.to_string())),
                }
            }
            let mut head: Vec<usize> = r.head.iter().map(idx).collect();
            head.sort_unstable();
            head.dedup();
            rules.push(CRule { head, body });
        }
        let mut head_rules = vec![Vec::new(); table.len()];
        for (i, r) in rules.iter().enumerate() {
            for &a in &r.head {
                head_rules[a].push(i);
            }
        }
        let complement = table.literals().iter().map(|l| table.index_of(&l.complement())).collect();
        Ok(Compiled { rules, complement, head_rules })
    }

    fn propagate(&self, vals: &mut [Val]) -> Result<(), Conflict> {
        loop {
            let mut changed = false;
            for r in &self.rules {
                let mut body_unk = None;
                let mut body_unk_count = 0;
                if r.body.iter().any(|&(a, d)| {
                    let v = elem_val(vals, a, d);
                    if v == Val::Unk {
                        body_unk_count += 1;
                        body_unk = Some((a, d));
                    }
                    v == Val::False
                }) {
                    continue;
                }
                if r.head.iter().any(|&a| vals[a] == Val::True) {
                    continue;
                }
                let mut head_unk = r.head.iter().filter(|&&a| vals[a] == Val::Unk);
                let first = head_unk.next().copied();
                let more = head_unk.next().is_some();
                match (body_unk_count, first, more) {
                    (0, None, _) => return Err(Conflict),
                    (0, Some(a), false) => changed |= assign(vals, a, Val::True)?,
                    (1, None, _) => {
                        let (a, d) = body_unk.expect("one unknown body element");
                        changed |= falsify_elem(vals, a, d)?;
                    }
                    _ => {}
                }
            }
            for a in 0..vals.len() {
                if vals[a] == Val::True {
                    if let Some(c) = self.complement[a] {
                        changed |= assign(vals, c, Val::False)?;
                    }
                }
                if vals[a] != Val::False && !self.supportable(vals, a) {
                    changed |= assign(vals, a, Val::False)?;
                }
            }
            if !changed {
                return Ok(());
            }
        }
    }

    // Some rule with `a` in its head may still have a true body while no
    // other head literal is true.
    fn supportable(&self, vals: &[Val], a: usize) -> bool {
        self.head_rules[a].iter().any(|&ri| {
            let r = &self.rules[ri];
            r.body.iter().all(|&(b, d)| elem_val(vals, b, d) != Val::False)
                && r.head.iter().all(|&h| h == a || vals[h] != Val::True)
        })
    }

    /// No proper subset of the (total) candidate is a model of its reduct.
    fn is_minimal(&self, vals: &[Val]) -> bool {
        let in_s = |a: usize| vals[a] == Val::True;
        // reduct restricted to subsets of S: heads cut down to S
        let reduct: Vec<(Vec<usize>, Vec<usize>)> = self
            .rules
            .iter()
            .filter(|r| {
                r.body.iter().all(|&(a, d)| match d {
                    0 => in_s(a),
                    1 => !in_s(a),
                    _ => in_s(a),
                })
            })
            .map(|r| {
                let head = r.head.iter().copied().filter(|&a| in_s(a)).collect();
                let pos = r.body.iter().filter(|&&(_, d)| d == 0).map(|&(a, _)| a).collect();
                (head, pos)
            })
            .collect();
        let members: Vec<usize> = (0..vals.len()).filter(|&a| in_s(a)).collect();
        if members.is_empty() {
            return true;
        }
        if reduct.iter().all(|(h, _)| h.len() <= 1) {
            let mut lm = vec![false; vals.len()];
            loop {
                let mut changed = false;
                for (h, pos) in &reduct {
                    if let [a] = h[..] {
                        if !lm[a] && pos.iter().all(|&p| lm[p]) {
                            lm[a] = true;
                            changed = true;
                        }
                    }
                }
                if !changed {
                    break;
                }
            }
            return members.iter().all(|&a| lm[a]);
        }
        let mut local = vec![Val::False; vals.len()];
        for &a in &members {
            local[a] = Val::Unk;
        }
        !smaller_model_exists(&reduct, &members, local)
    }
}

fn propagate_positive(reduct: &[(Vec<usize>, Vec<usize>)], vals: &mut [Val]) -> Result<(), Conflict> {
    loop {
        let mut changed = false;
        for (head, pos) in reduct {
            if pos.iter().any(|&p| vals[p] == Val::False) || head.iter().any(|&h| vals[h] == Val::True) {
                continue;
            }
            let pos_unk: Vec<usize> = pos.iter().copied().filter(|&p| vals[p] == Val::Unk).collect();
            let head_unk: Vec<usize> = head.iter().copied().filter(|&h| vals[h] == Val::Unk).collect();
            match (pos_unk.len(), head_unk.len()) {
                (0, 0) => return Err(Conflict),
                (0, 1) => changed |= assign(vals, head_unk[0], Val::True)?,
                (1, 0) => changed |= assign(vals, pos_unk[0], Val::False)?,
                _ => {}
            }
        }
        if !changed {
            return Ok(());
        }
    }
}

// Is there a model of the positive reduct strictly inside `members`?
fn smaller_model_exists(reduct: &[(Vec<usize>, Vec<usize>)], members: &[usize], mut vals: Vec<Val>) -> bool {
    if propagate_positive(reduct, &mut vals).is_err() {
        return false;
    }
    match members.iter().find(|&&a| vals[a] == Val::Unk) {
        None => members.iter().any(|&a| vals[a] == Val::False),
        Some(&a) => {
            let mut low = vals.clone();
            low[a] = Val::False;
            if smaller_model_exists(reduct, members, low) {
                return true;
            }
            vals[a] = Val::True;
            smaller_model_exists(reduct, members, vals)
        }
    }
}

/// Backtracking answer set enumerator with a cap on visited nodes.
#[derive(Debug, Clone, Copy)]
pub struct AnswerSetSolver {
    pub cap: u64,
}

impl Default for AnswerSetSolver {
    fn default() -> Self {
        AnswerSetSolver { cap: DEFAULT_SEARCH_CAP }
    }
}

impl AnswerSetSolver {
    pub fn with_cap(cap: u64) -> Self {
        AnswerSetSolver { cap }
    }

    /// All answer sets in canonical order.
    pub fn solve(&self, g: &GroundProgram) -> Result<Vec<BeliefSet>, AspError> {
        let prog = Compiled::new(g)?;
        let mut vals = vec![Val::False; g.atoms.len()];
        for r in &prog.rules {
            for &a in &r.head {
                vals[a] = Val::Unk;
            }
        }
        let mut found = Vec::new();
        let mut nodes = 0u64;
        self.search(&prog, vals, &mut nodes, &mut found)?;
        let mut out: Vec<BeliefSet> = found
            .into_iter()
            .map(|vals| {
                let lits = (0..vals.len()).filter(|&a| vals[a] == Val::True).map(|a| g.atoms.get(a).clone());
                BeliefSet { lits: lits.collect() }
            })
            .collect();
        out.sort();
        Ok(out)
    }

    fn search(
        &self,
        prog: &Compiled,
        mut vals: Vec<Val>,
        nodes: &mut u64,
        found: &mut Vec<Vec<Val>>,
    ) -> Result<(), AspError> {
        *nodes += 1;
        if *nodes > self.cap {
            return Err(AspError::ResourceLimit(self.cap));
        }
        if prog.propagate(&mut vals).is_err() {
            return Ok(());
        }
        match vals.iter().position(|&v| v == Val::Unk) {
            None => {
                if prog.is_minimal(&vals) {
                    found.push(vals);
                }
                Ok(())
            }
            Some(a) => {
                let mut with = vals.clone();
                with[a] = Val::True;
                self.search(prog, with, nodes, found)?;
                vals[a] = Val::False;
                self.search(prog, vals, nodes, found)
            }
        }
    }
}

/// All answer sets of a subjective-free ground program, canonically ordered.
pub fn answer_sets(g: &GroundProgram) -> Result<Vec<BeliefSet>, AspError> {
    AnswerSetSolver::default().solve(g)
}

/// Literals true in some answer set.
pub fn brave_consequences(g: &GroundProgram) -> Result<BeliefSet, AspError> {
    Ok(brave_of(&answer_sets(g)?))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cautious {
    pub literals: BeliefSet,
    /// Set when there is no answer set; `literals` is then the whole table.
    pub vacuous: bool,
}

/// Literals true in every answer set.
pub fn cautious_consequences(g: &GroundProgram) -> Result<Cautious, AspError> {
    let sets = answer_sets(g)?;
    if sets.is_empty() {
        return Ok(Cautious { literals: g.atoms.literals().iter().cloned().collect(), vacuous: true });
    }
    Ok(Cautious { literals: cautious_of(&sets), vacuous: false })
}

pub fn brave_of(sets: &[BeliefSet]) -> BeliefSet {
    sets.iter().flat_map(|s| s.iter().cloned()).collect()
}

/// Intersection; empty for an empty slice.
pub fn cautious_of(sets: &[BeliefSet]) -> BeliefSet {
    match sets.split_first() {
        None => BeliefSet::default(),
        Some((first, rest)) => first.iter().filter(|l| rest.iter().all(|s| s.contains(l))).cloned().collect(),
    }
}

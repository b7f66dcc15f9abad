//! Herbrand instantiation of non-ground programs.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use itertools::Itertools;
use thiserror::Error;

use crate::syntax::{Atom, BodyElement, ExtLiteral, ObjectiveLiteral, Program, Rule, SubjectiveElement, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroundError {
    #[error("unsafe variable {variable} in rule `{rule}`")]
    Unsafe { rule: String, variable: String },
}

/// Dense index of ground objective literals, ordered by printed form.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AtomTable {
    lits: Vec<ObjectiveLiteral>,
    index: HashMap<ObjectiveLiteral, usize>,
}

impl AtomTable {
    pub fn new(lits: impl IntoIterator<Item = ObjectiveLiteral>) -> Self {
        let lits: Vec<ObjectiveLiteral> = lits.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let index = lits.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        AtomTable { lits, index }
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn get(&self, i: usize) -> &ObjectiveLiteral {
        &self.lits[i]
    }

    pub fn index_of(&self, l: &ObjectiveLiteral) -> Option<usize> {
        self.index.get(l).copied()
    }

    pub fn literals(&self) -> &[ObjectiveLiteral] {
        &self.lits
    }
}

/// A variable-free program together with its literal table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundProgram {
    pub rules: Vec<Rule>,
    pub wvcs: Vec<Rule>,
    pub atoms: Arc<AtomTable>,
    pub warnings: Vec<String>,
}

impl GroundProgram {
    /// Wraps already-ground rules, indexing every literal they mention.
    pub fn new(rules: Vec<Rule>, wvcs: Vec<Rule>) -> Self {
        let atoms = AtomTable::new(rules.iter().chain(wvcs.iter()).flat_map(|r| r.literals().cloned()));
        GroundProgram { rules, wvcs, atoms: Arc::new(atoms), warnings: Vec::new() }
    }

    /// Same literal table as `self`, different rules. The rules must only
    /// mention literals already in the table.
    pub fn derive(&self, rules: Vec<Rule>, wvcs: Vec<Rule>) -> Self {
        GroundProgram { rules, wvcs, atoms: Arc::clone(&self.atoms), warnings: Vec::new() }
    }

    pub fn as_program(&self) -> Program {
        Program { rules: self.rules.clone(), wvcs: self.wvcs.clone() }
    }
}

/// All constants of a program, sorted.
pub fn herbrand_constants(p: &Program) -> Vec<String> {
    p.all_rules()
        .flat_map(Rule::literals)
        .flat_map(|l| l.atom.terms.iter())
        .filter_map(|t| match t {
            Term::Const(c) => Some(c.clone()),
            Term::Var(_) => None,
        })
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// Every variable must occur in a body literal without default negation,
/// or inside the depth-0 inner literal of a subjective element.
pub fn check_safety(r: &Rule) -> Result<(), GroundError> {
    let bound: HashSet<&str> = r
        .body
        .iter()
        .filter_map(|e| match e {
            BodyElement::Ext(x) if x.depth == 0 => Some(&x.lit),
            BodyElement::Subjective(s) if s.inner.depth == 0 => Some(&s.inner.lit),
            _ => None,
        })
        .flat_map(|l| l.atom.variables())
        .collect();
    match r.variables().into_iter().find(|v| !bound.contains(v)) {
        None => Ok(()),
        Some(v) => Err(GroundError::Unsafe { rule: r.to_string(), variable: v.to_string() }),
    }
}

fn substitute_lit(l: &ObjectiveLiteral, sub: &HashMap<&str, &str>) -> ObjectiveLiteral {
    let terms = l
        .atom
        .terms
        .iter()
        .map(|t| match t {
            Term::Var(v) => Term::Const(sub[v.as_str()].to_string()),
            c => c.clone(),
        })
        .collect();
    ObjectiveLiteral::new(Atom::new(l.atom.predicate.clone(), terms), l.strong_neg)
}

fn substitute(r: &Rule, sub: &HashMap<&str, &str>) -> Rule {
    Rule {
        kind: r.kind,
        head: r.head.iter().map(|l| substitute_lit(l, sub)).collect(),
        body: r
            .body
            .iter()
            .map(|e| match e {
                BodyElement::Ext(x) => BodyElement::Ext(ExtLiteral::new(substitute_lit(&x.lit, sub), x.depth)),
                BodyElement::Subjective(s) => BodyElement::Subjective(SubjectiveElement::new(
                    s.outer_neg,
                    s.modal,
                    ExtLiteral::new(substitute_lit(&s.inner.lit, sub), s.inner.depth),
                )),
            })
            .collect(),
    }
}

/// All `c^v` instances of a rule, in lexicographic substitution order.
/// Ground rules come back unchanged; with no constants a non-ground rule
/// has no instances.
pub fn instantiate_rule(r: &Rule, constants: &[String]) -> Vec<Rule> {
    let vars = r.variables();
    if vars.is_empty() {
        return vec![r.clone()];
    }
    std::iter::repeat_n(constants.iter(), vars.len())
        .multi_cartesian_product()
        .map(|values| {
            let sub: HashMap<&str, &str> = vars.iter().copied().zip(values.into_iter().map(String::as_str)).collect();
            substitute(r, &sub)
        })
        .collect()
}

fn instantiate_all(rules: &[Rule], constants: &[String]) -> Vec<Rule> {
    let mut seen = HashSet::new();
    rules.iter().flat_map(|r| instantiate_rule(r, constants)).filter(|r| seen.insert(r.clone())).collect()
}

pub fn ground_program(p: &Program) -> Result<GroundProgram, GroundError> {
    for r in p.all_rules() {
        check_safety(r)?;
    }
    let constants = herbrand_constants(p);
    let mut warnings = Vec::new();
    if constants.is_empty() {
        for r in p.all_rules().filter(|r| !r.is_ground()) {
            warnings.push(format!("rule `{r}` has variables but the program has no constants; dropped"));
        }
    }
    let rules = instantiate_all(&p.rules, &constants);
    let wvcs = instantiate_all(&p.wvcs, &constants);
    let mut g = GroundProgram::new(rules, wvcs);
    g.warnings = warnings;
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{normalize, parse_program};

    const ELIG: &str = "
        eligible(S) :- highGPA(S).
        eligible(S) :- fairGPA(S), minority(S).
        -eligible(S) :- -highGPA(S), -fairGPA(S).
        interview(S) :- not K eligible(S), not K -eligible(S).
        fairGPA(mike) | highGPA(mike).
    ";

    #[test]
    fn constants() {
        assert_eq!(herbrand_constants(&parse_program(ELIG).unwrap()), vec!["mike".to_string()]);
        assert!(herbrand_constants(&parse_program("p | q. r :- M q.").unwrap()).is_empty());
    }

    #[test]
    fn interview_rule() {
        let p = parse_program("interview(S) :- not K eligible(S), not K -eligible(S). applicant(mike).").unwrap();
        assert!(check_safety(&p.rules[0]).is_ok());
        let g = ground_program(&p).unwrap();
        assert_eq!(g.rules.len(), 2);
        assert_eq!(g.rules[0].to_string(), "interview(mike) :- not K eligible(mike), not K -eligible(mike).");
    }

    #[test]
    fn propositional_passes_through() {
        let p = parse_program("p :- M q, not q. q :- M p, not p. r :- M p, M q.").unwrap();
        let g = ground_program(&p).unwrap();
        assert_eq!(g.as_program(), p);
    }

    #[test]
    fn two_variables_two_constants() {
        let p = parse_program("e(X, Y) :- v(X), v(Y). v(a). v(b).").unwrap();
        let consts = herbrand_constants(&p);
        assert_eq!(instantiate_rule(&p.rules[0], &consts).len(), 4);
        assert_eq!(ground_program(&p).unwrap().rules.len(), 6);
    }

    #[test]
    fn unsafe_rules() {
        let p = parse_program("p(X).").unwrap();
        assert_eq!(check_safety(&p.rules[0]), Err(GroundError::Unsafe { rule: "p(X).".into(), variable: "X".into() }));
        let p = parse_program("q(X) :- not p(X).").unwrap();
        assert!(matches!(check_safety(&p.rules[0]), Err(GroundError::Unsafe { variable, .. }) if variable == "X"));
        let p = parse_program("q(X) :- K not p(X).").unwrap();
        assert!(check_safety(&p.rules[0]).is_err());
        assert!(ground_program(&parse_program("p(a). q(X) :- r, not p(X).").unwrap()).is_err());
    }

    #[test]
    fn no_constants_drops_variable_rules() {
        let p = parse_program("p. q(X) :- r(X).").unwrap();
        let g = ground_program(&p).unwrap();
        assert_eq!(g.rules.len(), 1);
        assert_eq!(g.warnings.len(), 1);
    }

    #[test]
    fn idempotent_and_commutes_with_normalize() {
        let p = parse_program(ELIG).unwrap();
        let g = ground_program(&p).unwrap();
        let again = ground_program(&g.as_program()).unwrap();
        assert_eq!(again.rules, g.rules);
        assert_eq!(ground_program(&normalize(&p)).unwrap().as_program(), normalize(&g.as_program()));
    }

    #[test]
    fn atom_table_is_sorted_and_complete() {
        let g = ground_program(&parse_program(ELIG).unwrap()).unwrap();
        let lits = g.atoms.literals();
        assert!(lits.windows(2).all(|w| w[0] < w[1]));
        for r in &g.rules {
            for l in r.literals() {
                assert!(g.atoms.index_of(l).is_some());
            }
        }
    }

    #[test]
    fn duplicate_instances_removed() {
        let p = parse_program("q(a) :- p(a). q(X) :- p(X). p(a).").unwrap();
        assert_eq!(ground_program(&p).unwrap().rules.len(), 2);
    }
}

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::{predicates, Atom, BodyElement, ExtLiteral, ObjectiveLiteral, Program, Rule, SubjectiveElement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrongNegationError {
    #[error("fresh predicate '{0}' already occurs in the program")]
    Collision(String),
}

/// Maps each eliminated literal `-a` to the fresh positive literal that
/// replaced it.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StrongNegationMap {
    pub forward: BTreeMap<ObjectiveLiteral, ObjectiveLiteral>,
}

impl StrongNegationMap {
    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    /// Translate literals of the rewritten program back to the original
    /// vocabulary.
    pub fn restore<'a>(&self, lits: impl IntoIterator<Item = &'a ObjectiveLiteral>) -> Vec<ObjectiveLiteral> {
        let back: BTreeMap<&ObjectiveLiteral, &ObjectiveLiteral> = self.forward.iter().map(|(k, v)| (v, k)).collect();
        let mut out: Vec<ObjectiveLiteral> =
            lits.into_iter().map(|l| back.get(l).map_or_else(|| l.clone(), |o| (*o).clone())).collect();
        out.sort();
        out
    }
}

fn fresh_predicate(pred: &str) -> String {
    format!("__neg_{pred}")
}

/// Replace every classically negated literal `-a` by a fresh atom `a'`
/// and add the constraint `:- a, a'.` once per replaced literal.
pub fn eliminate_strong_negation(p: &Program) -> Result<(Program, StrongNegationMap), StrongNegationError> {
    let preds = predicates(p);
    let negated: BTreeSet<&ObjectiveLiteral> =
        p.all_rules().flat_map(Rule::literals).filter(|l| l.strong_neg).collect();
    let mut map = StrongNegationMap::default();
    for lit in negated {
        let name = fresh_predicate(&lit.atom.predicate);
        if preds.contains(name.as_str()) {
            return Err(StrongNegationError::Collision(name));
        }
        map.forward.insert(lit.clone(), ObjectiveLiteral::pos(Atom::new(name, lit.atom.terms.clone())));
    }
    if map.is_empty() {
        return Ok((p.clone(), map));
    }

    let swap = |l: &ObjectiveLiteral| map.forward.get(l).cloned().unwrap_or_else(|| l.clone());
    let rewrite = |r: &Rule| Rule {
        kind: r.kind,
        head: r.head.iter().map(swap).collect(),
        body: r
            .body
            .iter()
            .map(|e| match e {
                BodyElement::Ext(x) => BodyElement::Ext(ExtLiteral::new(swap(&x.lit), x.depth)),
                BodyElement::Subjective(s) => BodyElement::Subjective(SubjectiveElement::new(
                    s.outer_neg,
                    s.modal,
                    ExtLiteral::new(swap(&s.inner.lit), s.inner.depth),
                )),
            })
            .collect(),
    };
    let mut rules: Vec<Rule> = p.rules.iter().map(rewrite).collect();
    for (orig, fresh) in &map.forward {
        rules.push(Rule::new(
            Vec::new(),
            vec![
                BodyElement::Ext(ExtLiteral::plain(orig.complement())),
                BodyElement::Ext(ExtLiteral::plain(fresh.clone())),
            ],
        ));
    }
    let wvcs = p.wvcs.iter().map(rewrite).collect();
    Ok((Program { rules, wvcs }, map))
}

//! Property checks over one program text, shared by the property tests
//! and the acceptance suite. Each returns a description of the first
//! violation found.

use elp_core::epistemic::{epistemic_reduct, induced_guess, is_valid_guess, reduct_framework, verify_guess};
use elp_core::search::prune_with_consequences;
use elp_core::syntax::{collect_epistemic_negations, eliminate_strong_negation};
use elp_core::{answer_sets, prepare, solve, BeliefSet, Guess, Semantics, SolveOptions, Strategy};

pub type Check = Result<(), String>;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn views(text: &str, sem: Semantics, opts: &SolveOptions) -> Vec<super::OWorldView> {
    let g = prepare(text).expect("generated program is valid");
    super::from_report(&solve(&g, sem, opts).expect("solve"))
}

fn all_guesses(k: usize) -> impl Iterator<Item = Guess> {
    (0u64..1 << k).map(Guess)
}

/// Optimized and naive pipelines both agree with the brute-force oracle.
pub fn oracle_agreement(text: &str, sem: Semantics) -> Check {
    let p = elp_core::syntax::normalize(&elp_core::parse_program(text).expect("parse"));
    let expected = super::world_views(&p, sem);
    let optimized = views(text, sem, &SolveOptions::default());
    ensure(optimized == expected, || format!("optimized {optimized:?} vs oracle {expected:?}\n{text}"))?;
    let naive = views(text, sem, &SolveOptions::naive());
    ensure(naive == expected, || format!("naive {naive:?} vs oracle {expected:?}\n{text}"))
}

/// No accepted ES2016 guess is a proper subset of another.
pub fn antichain(text: &str) -> Check {
    let g = prepare(text).expect("parse");
    let r = solve(&g, Semantics::Es2016, &SolveOptions::default()).expect("solve");
    for a in &r.world_views {
        for b in &r.world_views {
            ensure(!a.guess.is_proper_subset(b.guess), || format!("{:?} below {:?}\n{text}", a.guess, b.guess))?;
        }
    }
    Ok(())
}

/// Every guess the filter rejects also fails verification.
pub fn filter_soundness(text: &str, sem: Semantics) -> Check {
    let g = prepare(text).expect("parse");
    let ep = collect_epistemic_negations(&g.rules);
    for phi in all_guesses(ep.len()).filter(|&phi| !is_valid_guess(&ep, phi)) {
        let w = answer_sets(&epistemic_reduct(&g, &ep, phi, sem).expect("reduct")).expect("answer sets");
        ensure(!verify_guess(&ep, phi, &w), || format!("filtered guess {phi:?} verifies\n{text}"))?;
    }
    Ok(())
}

/// Pruning never changes the result, and admits every accepted guess.
pub fn pruning_soundness(text: &str, sem: Semantics) -> Check {
    let on = SolveOptions::default();
    let off = SolveOptions { consequence_pruning: false, ..SolveOptions::default() };
    let (a, b) = (views(text, sem, &on), views(text, sem, &off));
    ensure(a == b, || format!("pruning on {a:?} vs off {b:?}\n{text}"))?;
    let g = prepare(text).expect("parse");
    let fixed = prune_with_consequences(&g, sem).expect("prune");
    let r = solve(&g, sem, &off).expect("solve");
    for w in &r.world_views {
        ensure(fixed.admits(w.guess), || format!("pruning excludes {:?}\n{text}", w.guess))?;
    }
    Ok(())
}

pub fn strategy_equivalence(text: &str, sem: Semantics) -> Check {
    let runs: Vec<_> = [Strategy::MaximalFirst, Strategy::Exhaustive, Strategy::Framework]
        .into_iter()
        .map(|strategy| views(text, sem, &SolveOptions { strategy, ..SolveOptions::default() }))
        .collect();
    ensure(runs.windows(2).all(|w| w[0] == w[1]), || format!("strategies disagree {runs:?}\n{text}"))
}

/// Decoded framework answer sets are exactly the reduct answer sets of
/// every guess.
pub fn framework_soundness(text: &str, sem: Semantics) -> Check {
    let g = prepare(text).expect("parse");
    let ep = collect_epistemic_negations(&g.rules);
    let f = reduct_framework(&g, &ep, sem).expect("framework");
    let mut decoded: Vec<(Guess, BeliefSet)> =
        answer_sets(&f.program).expect("answer sets").iter().map(|s| f.decode(s)).collect();
    let mut direct: Vec<(Guess, BeliefSet)> = all_guesses(ep.len())
        .flat_map(|phi| {
            let sets = answer_sets(&epistemic_reduct(&g, &ep, phi, sem).expect("reduct")).expect("answer sets");
            sets.into_iter().map(move |b| (phi, b))
        })
        .collect();
    decoded.sort_by(|a, b| (a.0 .0, &a.1).cmp(&(b.0 .0, &b.1)));
    direct.sort_by(|a, b| (a.0 .0, &a.1).cmp(&(b.0 .0, &b.1)));
    ensure(decoded == direct, || format!("framework {decoded:?} vs reducts {direct:?}\n{text}"))
}

/// A non-empty collection always verifies the guess it induces.
pub fn verification_symmetry(text: &str, sem: Semantics) -> Check {
    let g = prepare(text).expect("parse");
    let ep = collect_epistemic_negations(&g.rules);
    for phi in all_guesses(ep.len()) {
        let w = answer_sets(&epistemic_reduct(&g, &ep, phi, sem).expect("reduct")).expect("answer sets");
        if w.is_empty() {
            continue;
        }
        let induced = induced_guess(&ep, &w).expect("non-empty");
        ensure(verify_guess(&ep, induced, &w), || format!("induced guess fails\n{text}"))?;
        ensure(verify_guess(&ep, phi, &w) == (phi == induced), || format!("verification of {phi:?}\n{text}"))?;
    }
    Ok(())
}

/// Adding a constraint removes exactly the answer sets satisfying its body.
pub fn constraint_property(text: &str, constraint: &str) -> Check {
    let sets = |t: &str| super::lib_sets(&answer_sets(&prepare(t).expect("parse")).expect("answer sets"));
    let body = super::lower(&prepare(constraint).expect("parse").rules).remove(0).body;
    let violates = |b: &super::Set| {
        body.iter().all(|i| match i {
            super::Item::Obj(l, d) => super::holds(b, l, *d),
            super::Item::Subj { .. } => unreachable!("constraint is subjective-free"),
        })
    };
    let respecting: Vec<super::Set> = sets(text).into_iter().filter(|b| !violates(b)).collect();
    let with = sets(&format!("{text}{constraint}"));
    ensure(with == respecting, || format!("{with:?} vs {respecting:?}\n{text}{constraint}"))
}

/// Answer sets survive strong-negation elimination up to renaming.
pub fn strong_negation_elimination(text: &str) -> Check {
    let p = elp_core::parse_program(text).expect("parse");
    let (q, map) = eliminate_strong_negation(&p).expect("no collision");
    let direct = answer_sets(&prepare(text).expect("parse")).expect("answer sets");
    let rewritten = answer_sets(&elp_core::ground_program(&q).expect("ground")).expect("answer sets");
    let mut restored: Vec<BeliefSet> = rewritten.iter().map(|s| BeliefSet::new(map.restore(s.iter()))).collect();
    restored.sort();
    ensure(restored == direct, || format!("{restored:?} vs {direct:?}\n{text}"))
}

/// A random subjective-free constraint.
pub fn random_constraint(seed: u64) -> String {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let cfg = elp_core::bench::RandomProgramConfig { max_rules: 1, max_subjective: 0, ..Default::default() };
    loop {
        let r = super::seeded_program(rng.gen(), &cfg);
        if r.starts_with(":-") {
            return r;
        }
    }
}

use std::fs;
use std::path::Path;

use elp_core::bench::{elig_patterns, gen_elig, load_corpus, run_golden_corpus, Provenance, DISJUNCTIVE_PATTERN};
use elp_core::report::{format_text, WorldViewJson};
use elp_core::{parse_program, solve_source, Semantics, SolveOptions};

fn corpus() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/corpus"))
}

#[test]
fn corpus_has_every_required_case() {
    let names: Vec<String> = load_corpus(corpus()).unwrap().into_iter().map(|c| c.name).collect();
    for required in [
        "ASP1.es2016",
        "ASP1C.es2016",
        "E1.es2016",
        "E1C.es2016",
        "E2.es2016",
        "E2C.es2016",
        "E3.es2016",
        "E3.es1994",
        "E4.es2014",
        "E4.es2016",
        "E5.es2014",
        "E5.es2016",
        "E5C.es2016",
        "E5C.es2014",
        "W1.es2016",
        "W2.es2016",
        "ELIG1.es2016",
    ] {
        assert!(names.iter().any(|n| n == required), "missing {required}");
    }
}

#[test]
fn derived_cases_are_tagged() {
    for c in load_corpus(corpus()).unwrap() {
        let derived = matches!(c.name.as_str(), "E3.es2014" | "E5C.es2014" | "W1.es2016" | "W2.es2016");
        assert_eq!(c.provenance == Provenance::Derived, derived, "{}", c.name);
    }
}

#[test]
fn wrong_expectation_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let src = corpus().join("E5.es2016.elp");
    fs::copy(&src, dir.path().join("E5.es2016.elp")).unwrap();
    let mut expected: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(corpus().join("E5.es2014.expected.json")).unwrap()).unwrap();
    expected["semantics"] = "es2016".into();
    fs::write(dir.path().join("E5.es2016.expected.json"), expected.to_string()).unwrap();

    let results = run_golden_corpus(dir.path(), &SolveOptions::default()).unwrap();
    assert_eq!(results.len(), 1);
    assert!(!results[0].passed);
    let shown = results[0].to_string();
    assert!(shown.contains("expected") && shown.contains("actual"), "{shown}");
}

#[test]
fn disjunctive_applicant_is_the_mike_program() {
    let seed = (0..).find(|&s| elig_patterns(1, s) == [DISJUNCTIVE_PATTERN]).unwrap();
    let text = gen_elig(1, seed).unwrap().replace("a1", "mike");
    let mike = fs::read_to_string(corpus().join("ELIG1.es2016.elp")).unwrap();
    assert_eq!(parse_program(&text).unwrap(), parse_program(&mike).unwrap());
}

#[test]
fn every_applicant_pattern_is_solvable() {
    for seed in 0..40 {
        let r = solve_source(&gen_elig(3, seed).unwrap(), Semantics::Es2016, &SolveOptions::default()).unwrap();
        assert_eq!(r.world_views.len(), 1, "seed {seed}\n{}", format_text(&r));
        let views: Vec<WorldViewJson> = elp_core::report::ReportJson::from(&r).world_views;
        let undecided = elig_patterns(3, seed).iter().filter(|&&p| p == DISJUNCTIVE_PATTERN).count();
        assert_eq!(views[0].belief_sets.len(), 1 << undecided, "seed {seed}");
    }
}

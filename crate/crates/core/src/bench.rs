//! Instance generators and the golden corpus runner.
//!
//! A corpus directory holds one `<case>.elp` program per case next to a
//! `<case>.expected.json` file in the JSON report schema (without stats)
//! plus a `provenance` tag.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::epistemic::Semantics;
use crate::report::{ReportJson, WorldViewJson};
use crate::search::SolveOptions;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("applicant count must be at least 1")]
    NoApplicants,
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
}

const ELIGIBILITY_RULES: &str = "\
eligible(S) :- highGPA(S).
eligible(S) :- fairGPA(S), minority(S).
-eligible(S) :- -highGPA(S), -fairGPA(S).
interview(S) :- not K eligible(S), not K -eligible(S).
";

/// Applicant fact patterns, one chosen per applicant.
const APPLICANT_PATTERNS: [&[&str]; 5] = [
    &["highGPA({a})."],
    &["-highGPA({a}).", "-fairGPA({a})."],
    &["fairGPA({a}).", "minority({a})."],
    &["fairGPA({a}) | highGPA({a})."],
    &["fairGPA({a})."],
];

/// Index of the pattern with the disjunctive GPA fact.
pub const DISJUNCTIVE_PATTERN: usize = 3;

/// Pattern chosen for each of `n` applicants under `seed`.
pub fn elig_patterns(n: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen_range(0..APPLICANT_PATTERNS.len())).collect()
}

/// Scholarship eligibility program with applicants `a1..an`.
pub fn gen_elig(n: usize, seed: u64) -> Result<String, BenchError> {
    if n < 1 {
        return Err(BenchError::NoApplicants);
    }
    let mut out = format!("% scholarship eligibility, {n} applicants, seed {seed}\n{ELIGIBILITY_RULES}");
    for (i, p) in elig_patterns(n, seed).into_iter().enumerate() {
        let name = format!("a{}", i + 1);
        for fact in APPLICANT_PATTERNS[p] {
            out.push_str(&fact.replace("{a}", &name));
            out.push('\n');
        }
    }
    Ok(out)
}

/// Shape of random propositional programs.
#[derive(Debug, Clone, Copy)]
pub struct RandomProgramConfig {
    /// Distinct atoms, at most 4; with strong negation up to 8 literals.
    pub atoms: usize,
    pub strong_negation: bool,
    pub max_rules: usize,
    pub max_subjective: usize,
    pub wvcs: bool,
}

impl Default for RandomProgramConfig {
    fn default() -> Self {
        RandomProgramConfig { atoms: 4, strong_negation: true, max_rules: 5, max_subjective: 4, wvcs: false }
    }
}

const ATOM_NAMES: [&str; 4] = ["a", "b", "c", "d"];

fn random_literal(rng: &mut impl Rng, cfg: &RandomProgramConfig) -> String {
    let atom = ATOM_NAMES[rng.gen_range(0..cfg.atoms.clamp(1, ATOM_NAMES.len()))];
    if cfg.strong_negation && rng.gen_bool(0.25) {
        format!("-{atom}")
    } else {
        atom.to_string()
    }
}

fn random_subjective(rng: &mut impl Rng, cfg: &RandomProgramConfig) -> String {
    let outer = if rng.gen_bool(0.4) { "not " } else { "" };
    let modal = if rng.gen_bool(0.5) { "K" } else { "M" };
    let inner = if rng.gen_bool(0.3) { "not " } else { "" };
    format!("{outer}{modal} {inner}{}", random_literal(rng, cfg))
}

/// A random ground program in source syntax.
pub fn random_program(rng: &mut impl Rng, cfg: &RandomProgramConfig) -> String {
    let mut subjective_left = cfg.max_subjective;
    let mut out = String::new();
    for _ in 0..rng.gen_range(1..=cfg.max_rules.max(1)) {
        let mut head: Vec<String> = Vec::new();
        let head_len = *[0, 1, 1, 1, 2, 2].choose(rng).expect("nonempty");
        for _ in 0..head_len {
            let l = random_literal(rng, cfg);
            if !head.contains(&l) {
                head.push(l);
            }
        }
        let body_len = rng.gen_range(if head.is_empty() { 1 } else { 0 }..=3);
        let body: Vec<String> = (0..body_len)
            .map(|_| {
                if subjective_left > 0 && rng.gen_bool(0.35) {
                    subjective_left -= 1;
                    random_subjective(rng, cfg)
                } else {
                    let nots = ["", "", "", "not ", "not ", "not not "].choose(rng).expect("nonempty");
                    format!("{nots}{}", random_literal(rng, cfg))
                }
            })
            .collect();
        out.push_str(&head.join(" | "));
        if !body.is_empty() {
            out.push_str(if head.is_empty() { ":- " } else { " :- " });
            out.push_str(&body.join(", "));
        }
        out.push_str(".\n");
    }
    if cfg.wvcs && rng.gen_bool(0.5) {
        let n = rng.gen_range(1..=2);
        let body: Vec<String> = (0..n).map(|_| random_subjective(rng, cfg)).collect();
        out.push_str(&format!("!- {}.\n", body.join(", ")));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Paper,
    Derived,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedFile {
    pub semantics: Semantics,
    pub provenance: Provenance,
    pub count: usize,
    pub world_views: Vec<WorldViewJson>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldenCase {
    pub name: String,
    pub program: String,
    pub semantics: Semantics,
    pub expected: Vec<WorldViewJson>,
    pub provenance: Provenance,
}

fn read(path: &Path) -> Result<String, BenchError> {
    fs::read_to_string(path).map_err(|source| BenchError::Io { path: path.to_path_buf(), source })
}

/// Every `*.elp` file with its expectation, sorted by case name.
pub fn load_corpus(dir: &Path) -> Result<Vec<GoldenCase>, BenchError> {
    let entries = fs::read_dir(dir).map_err(|source| BenchError::Io { path: dir.to_path_buf(), source })?;
    let mut cases = Vec::new();
    for entry in entries {
        let path = entry.map_err(|source| BenchError::Io { path: dir.to_path_buf(), source })?.path();
        if path.extension().is_none_or(|e| e != "elp") {
            continue;
        }
        let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default().to_string();
        let expected_path = path.with_file_name(format!("{name}.expected.json"));
        let expected: ExpectedFile = serde_json::from_str(&read(&expected_path)?)
            .map_err(|source| BenchError::Json { path: expected_path.clone(), source })?;
        cases.push(GoldenCase {
            name,
            program: read(&path)?,
            semantics: expected.semantics,
            expected: expected.world_views,
            provenance: expected.provenance,
        });
    }
    cases.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(cases)
}

#[derive(Debug, Clone)]
pub struct CaseResult {
    pub name: String,
    pub passed: bool,
    pub expected: Vec<WorldViewJson>,
    pub actual: Result<Vec<WorldViewJson>, String>,
    pub elapsed: Duration,
}

fn show(views: &[WorldViewJson]) -> String {
    if views.is_empty() {
        return "none".to_string();
    }
    views
        .iter()
        .map(|w| {
            let sets: Vec<String> = w.belief_sets.iter().map(|b| format!("{{{}}}", b.join(","))).collect();
            format!("{{{}}} [{}]", sets.join(","), w.guess.join(", "))
        })
        .collect::<Vec<_>>()
        .join(" ; ")
}

impl fmt::Display for CaseResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ms = self.elapsed.as_secs_f64() * 1000.0;
        match (&self.actual, self.passed) {
            (Ok(_), true) => write!(f, "PASS {} ({ms:.1} ms)", self.name),
            (Ok(actual), false) => write!(
                f,
                "FAIL {} ({ms:.1} ms)\n  expected: {}\n  actual:   {}",
                self.name,
                show(&self.expected),
                show(actual)
            ),
            (Err(e), _) => write!(f, "FAIL {}: {e}", self.name),
        }
    }
}

pub fn run_case(case: &GoldenCase, opts: &SolveOptions) -> CaseResult {
    let start = Instant::now();
    let actual = crate::solve_source(&case.program, case.semantics, opts)
        .map(|r| ReportJson::from(&r).world_views)
        .map_err(|e| e.to_string());
    let passed = actual.as_ref().is_ok_and(|a| *a == case.expected);
    CaseResult { name: case.name.clone(), passed, expected: case.expected.clone(), actual, elapsed: start.elapsed() }
}

/// Solve every case and compare against its expectation.
pub fn run_golden_corpus(dir: &Path, opts: &SolveOptions) -> Result<Vec<CaseResult>, BenchError> {
    Ok(load_corpus(dir)?.iter().map(|c| run_case(c, opts)).collect())
}

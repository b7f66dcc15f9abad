//! Guess enumeration and world view assembly.
//!
//! Guesses are produced either largest-first (so that, under ES2016, any
//! accepted guess is maximal and its subsets can be skipped), in plain
//! binary counting order, or from the answer sets of the reduct framework.
//! Each guess is checked against the consequence-derived partial
//! assignment and the invalid-guess filter before its reduct is solved.
//!
//! Work is split into fixed-size groups of guesses that are solved in
//! parallel; the set of accepted guesses only changes between batches, so
//! the outcome does not depend on the number of workers.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::aspcore::{satisfies_ext, AnswerSetSolver, AspError, BeliefSet, DEFAULT_SEARCH_CAP};
use crate::epistemic::{
    epistemic_reduct, is_valid_guess, reduct_framework, satisfies_subjective, verify_guess, EpistemicError, Guess,
    Semantics, WorldView, MAX_EPISTEMIC_NEGATIONS,
};
use crate::ground::GroundProgram;
use crate::syntax::{collect_epistemic_negations, BodyElement, EpistemicNegations, Rule};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Asp(#[from] AspError),
    #[error(transparent)]
    Epistemic(#[from] EpistemicError),
}

impl SolveError {
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            SolveError::Asp(AspError::ResourceLimit(_)) | SolveError::Epistemic(EpistemicError::TooManyNegations(_))
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    MaximalFirst,
    Exhaustive,
    Framework,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::MaximalFirst => "maximal-first",
            Strategy::Exhaustive => "exhaustive",
            Strategy::Framework => "framework",
        })
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "maximal-first" | "maximal_first" => Ok(Strategy::MaximalFirst),
            "exhaustive" => Ok(Strategy::Exhaustive),
            "framework" => Ok(Strategy::Framework),
            _ => Err(format!("unknown strategy '{s}' (expected maximal-first, exhaustive or framework)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOptions {
    pub strategy: Strategy,
    /// 0 means all.
    pub max_world_views: usize,
    pub workers: usize,
    pub group_size: usize,
    pub guess_filter: bool,
    pub consequence_pruning: bool,
    pub search_cap: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            strategy: Strategy::MaximalFirst,
            max_world_views: 0,
            workers: 1,
            group_size: 16,
            guess_filter: true,
            consequence_pruning: true,
            search_cap: DEFAULT_SEARCH_CAP,
        }
    }
}

impl SolveOptions {
    /// Exhaustive enumeration with every optimization off.
    pub fn naive() -> Self {
        SolveOptions {
            strategy: Strategy::Exhaustive,
            guess_filter: false,
            consequence_pruning: false,
            ..SolveOptions::default()
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub guesses_enumerated: u64,
    pub filtered_invalid: u64,
    pub pruned_by_consequences: u64,
    pub skipped_by_maximality: u64,
    pub reducts_solved: u64,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub semantics: Semantics,
    pub options: SolveOptions,
    pub negations: EpistemicNegations,
    pub world_views: Vec<WorldView>,
    pub stats: SolveStats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GuessOrder {
    MaximalFirst,
    Exhaustive,
}

enum Source {
    // next combination of the current cardinality, or None when done
    Combinations { k: usize, current: Option<Vec<usize>> },
    Counter { next: u128, end: u128 },
    List { items: Vec<Guess>, pos: usize },
}

impl Source {
    fn peek(&self) -> Option<Guess> {
        match self {
            Source::Combinations { current, .. } => current.as_ref().map(|c| Guess::from_indices(c.iter().copied())),
            Source::Counter { next, end } => (next < end).then_some(Guess(*next as u64)),
            Source::List { items, pos } => items.get(*pos).copied(),
        }
    }

    fn advance(&mut self) {
        match self {
            Source::Combinations { k, current } => {
                let Some(c) = current.as_mut() else { return };
                let r = c.len();
                // rightmost position that can still move
                match (0..r).rev().find(|&i| c[i] < *k - r + i) {
                    Some(i) => {
                        c[i] += 1;
                        for j in i + 1..r {
                            c[j] = c[j - 1] + 1;
                        }
                    }
                    None if r == 0 => *current = None,
                    None => *current = Some((0..r - 1).collect()),
                }
            }
            Source::Counter { next, .. } => *next += 1,
            Source::List { pos, .. } => *pos += 1,
        }
    }
}

/// Deterministic guess stream. Once a guess is accepted, its proper
/// subsets are skipped if skipping is enabled.
pub struct GuessStream {
    source: Source,
    by_level: bool,
    skip_subsets: bool,
    accepted: Vec<Guess>,
    enumerated: u64,
    skipped: u64,
}

/// Stream over all subsets of a `k`-element EP.
pub fn enumerate_guesses(k: usize, order: GuessOrder, skip_subsets: bool) -> GuessStream {
    assert!(k <= MAX_EPISTEMIC_NEGATIONS);
    let source = match order {
        GuessOrder::MaximalFirst => Source::Combinations { k, current: Some((0..k).collect()) },
        GuessOrder::Exhaustive => Source::Counter { next: 0, end: 1u128 << k },
    };
    GuessStream::new(source, order == GuessOrder::MaximalFirst, skip_subsets)
}

impl GuessStream {
    fn new(source: Source, by_level: bool, skip_subsets: bool) -> Self {
        GuessStream { source, by_level, skip_subsets, accepted: Vec::new(), enumerated: 0, skipped: 0 }
    }

    /// Stream over an explicit guess list, reordered largest-first.
    pub fn from_list(mut items: Vec<Guess>, skip_subsets: bool) -> Self {
        items.sort_by(Guess::canonical_cmp);
        items.dedup();
        GuessStream::new(Source::List { items, pos: 0 }, true, skip_subsets)
    }

    pub fn accept(&mut self, g: Guess) {
        self.accepted.push(g);
    }

    pub fn skipped(&self) -> u64 {
        self.skipped
    }

    pub fn enumerated(&self) -> u64 {
        self.enumerated
    }

    fn is_skipped(&self, g: Guess) -> bool {
        self.skip_subsets && self.accepted.iter().any(|a| g.is_proper_subset(*a))
    }

    /// Up to `max` guesses; in largest-first streams a batch never spans
    /// two cardinalities.
    pub fn next_batch(&mut self, max: usize) -> Vec<Guess> {
        let mut out = Vec::new();
        let mut level = None;
        while out.len() < max {
            let Some(g) = self.source.peek() else { break };
            if self.by_level && *level.get_or_insert(g.len()) != g.len() {
                break;
            }
            self.source.advance();
            self.enumerated += 1;
            if self.is_skipped(g) {
                self.skipped += 1;
            } else {
                out.push(g);
            }
        }
        out
    }
}

impl Iterator for GuessStream {
    type Item = Guess;

    fn next(&mut self) -> Option<Guess> {
        loop {
            let g = self.source.peek()?;
            self.source.advance();
            self.enumerated += 1;
            if self.is_skipped(g) {
                self.skipped += 1;
            } else {
                return Some(g);
            }
        }
    }
}

/// Consecutive groups of at most `group_size` guesses.
pub fn partition_groups(stream: impl IntoIterator<Item = Guess>, group_size: usize) -> Vec<Vec<Guess>> {
    assert!(group_size >= 1, "group size must be positive");
    let items: Vec<Guess> = stream.into_iter().collect();
    items.chunks(group_size).map(<[Guess]>::to_vec).collect()
}

/// Negations whose value is fixed before enumeration.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PartialAssignment {
    pub forced_in: Guess,
    pub forced_out: Guess,
}

impl PartialAssignment {
    pub fn admits(&self, g: Guess) -> bool {
        self.forced_in.is_subset(g) && g.0 & self.forced_out.0 == 0
    }
}

// Framework answer sets, decoded into (guess, belief set) pairs.
fn framework_models(
    g: &GroundProgram,
    ep: &EpistemicNegations,
    sem: Semantics,
    solver: AnswerSetSolver,
) -> Result<Vec<(Guess, BeliefSet)>, SolveError> {
    let fw = reduct_framework(g, ep, sem)?;
    Ok(solver.solve(&fw.program)?.iter().map(|s| fw.decode(s)).collect())
}

fn consequences_assignment(ep: &EpistemicNegations, union: &[BeliefSet]) -> PartialAssignment {
    let mut pa = PartialAssignment::default();
    if union.is_empty() {
        return pa;
    }
    for (i, n) in ep.iter().enumerate() {
        if union.iter().all(|b| satisfies_ext(b, &n.target)) {
            pa.forced_out = pa.forced_out.with(i);
        } else if !union.iter().any(|b| satisfies_ext(b, &n.target)) {
            pa.forced_in = pa.forced_in.with(i);
        }
    }
    pa
}

/// Brave/cautious reasoning over the belief sets of all reducts: a
/// negation whose target holds everywhere cannot be true, one whose
/// target holds nowhere cannot be false.
pub fn prune_with_consequences(g: &GroundProgram, sem: Semantics) -> Result<PartialAssignment, SolveError> {
    let ep = collect_epistemic_negations(&g.rules);
    let models = framework_models(g, &ep, sem, AnswerSetSolver::default())?;
    let union: Vec<BeliefSet> = models.into_iter().map(|(_, b)| b).collect();
    Ok(consequences_assignment(&ep, &union))
}

/// Guesses with at least one framework answer set, largest first.
pub fn framework_driven_candidates(g: &GroundProgram, sem: Semantics) -> Result<Vec<Guess>, SolveError> {
    let ep = collect_epistemic_negations(&g.rules);
    let mut out: Vec<Guess> =
        framework_models(g, &ep, sem, AnswerSetSolver::default())?.into_iter().map(|(phi, _)| phi).collect();
    out.sort_by(Guess::canonical_cmp);
    out.dedup();
    Ok(out)
}

/// Drop every world view that satisfies the whole body of some WVC.
pub fn apply_wvcs(world_views: Vec<WorldView>, wvcs: &[Rule]) -> Vec<WorldView> {
    world_views
        .into_iter()
        .filter(|w| {
            !wvcs.iter().any(|c| {
                c.body.iter().all(|e| match e {
                    BodyElement::Subjective(s) => satisfies_subjective(&w.belief_sets, s).unwrap_or(false),
                    BodyElement::Ext(_) => false,
                })
            })
        })
        .collect()
}

enum Outcome {
    Pruned,
    Filtered,
    Rejected,
    Accepted(Vec<BeliefSet>),
}

struct Ctx<'a> {
    g: &'a GroundProgram,
    ep: &'a EpistemicNegations,
    sem: Semantics,
    opts: &'a SolveOptions,
    partial: PartialAssignment,
    solver: AnswerSetSolver,
}

impl Ctx<'_> {
    fn evaluate(&self, phi: Guess) -> Result<Outcome, SolveError> {
        if !self.partial.admits(phi) {
            return Ok(Outcome::Pruned);
        }
        if self.opts.guess_filter && !is_valid_guess(self.ep, phi) {
            return Ok(Outcome::Filtered);
        }
        let reduct = epistemic_reduct(self.g, self.ep, phi, self.sem)?;
        let w = self.solver.solve(&reduct)?;
        Ok(if verify_guess(self.ep, phi, &w) { Outcome::Accepted(w) } else { Outcome::Rejected })
    }

    fn evaluate_batch(&self, batch: Vec<Guess>, pool: Option<&rayon::ThreadPool>) -> Result<Vec<Outcome>, SolveError> {
        let groups = partition_groups(batch, self.opts.group_size);
        let run = |grp: &Vec<Guess>| grp.iter().map(|&phi| self.evaluate(phi)).collect::<Result<Vec<_>, _>>();
        let per_group: Vec<Vec<Outcome>> = match pool {
            Some(pool) => pool.install(|| groups.par_iter().map(run).collect::<Result<Vec<_>, _>>())?,
            None => groups.iter().map(run).collect::<Result<Vec<_>, _>>()?,
        };
        Ok(per_group.into_iter().flatten().collect())
    }
}

/// Keep only accepted guesses that have no accepted proper superset.
fn maximal_only(views: Vec<WorldView>) -> Vec<WorldView> {
    let guesses: Vec<Guess> = views.iter().map(|w| w.guess).collect();
    views.into_iter().filter(|w| !guesses.iter().any(|&o| w.guess.is_proper_subset(o))).collect()
}

pub fn solve(g: &GroundProgram, sem: Semantics, opts: &SolveOptions) -> Result<SolveReport, SolveError> {
    let ep = collect_epistemic_negations(&g.rules);
    let k = ep.len();
    if k > MAX_EPISTEMIC_NEGATIONS {
        return Err(EpistemicError::TooManyNegations(k).into());
    }
    let solver = AnswerSetSolver::with_cap(opts.search_cap);

    let framework = if opts.consequence_pruning || opts.strategy == Strategy::Framework {
        Some(framework_models(g, &ep, sem, solver)?)
    } else {
        None
    };
    let partial = match (&framework, opts.consequence_pruning) {
        (Some(models), true) => {
            let union: Vec<BeliefSet> = models.iter().map(|(_, b)| b.clone()).collect();
            consequences_assignment(&ep, &union)
        }
        _ => PartialAssignment::default(),
    };

    let maximality = sem.requires_maximality();
    let mut stream = match opts.strategy {
        Strategy::MaximalFirst => enumerate_guesses(k, GuessOrder::MaximalFirst, maximality),
        Strategy::Exhaustive => enumerate_guesses(k, GuessOrder::Exhaustive, false),
        Strategy::Framework => {
            let candidates = framework.as_ref().map(|m| m.iter().map(|(phi, _)| *phi).collect()).unwrap_or_default();
            GuessStream::from_list(candidates, maximality)
        }
    };
    let early_stop = opts.max_world_views > 0 && opts.strategy == Strategy::MaximalFirst;
    let batch_size = if opts.strategy == Strategy::Exhaustive {
        opts.group_size.max(1) * opts.workers.max(1) * 4
    } else {
        usize::MAX
    };

    let pool = if opts.workers > 1 {
        Some(rayon::ThreadPoolBuilder::new().num_threads(opts.workers).build().expect("failed to build worker pool"))
    } else {
        None
    };
    let ctx = Ctx { g, ep: &ep, sem, opts, partial, solver };
    let mut stats = SolveStats::default();
    let mut views = Vec::new();
    loop {
        let batch = stream.next_batch(batch_size);
        if batch.is_empty() {
            break;
        }
        let outcomes = ctx.evaluate_batch(batch.clone(), pool.as_ref())?;
        for (phi, outcome) in batch.into_iter().zip(outcomes) {
            match outcome {
                Outcome::Pruned => stats.pruned_by_consequences += 1,
                Outcome::Filtered => stats.filtered_invalid += 1,
                Outcome::Rejected => stats.reducts_solved += 1,
                Outcome::Accepted(belief_sets) => {
                    stats.reducts_solved += 1;
                    stream.accept(phi);
                    views.push(WorldView { belief_sets, guess: phi, semantics: sem });
                }
            }
        }
        if early_stop && apply_wvcs(views.clone(), &g.wvcs).len() >= opts.max_world_views {
            break;
        }
    }
    stats.guesses_enumerated = stream.enumerated();
    stats.skipped_by_maximality = stream.skipped();

    if maximality {
        views = maximal_only(views);
    }
    views.sort_by(|a, b| a.guess.canonical_cmp(&b.guess));
    let mut world_views = apply_wvcs(views, &g.wvcs);
    if opts.max_world_views > 0 {
        world_views.truncate(opts.max_world_views);
    }
    Ok(SolveReport { semantics: sem, options: opts.clone(), negations: ep, world_views, stats })
}

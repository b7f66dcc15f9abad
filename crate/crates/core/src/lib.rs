//! Solver for epistemic logic programs.
//!
//! The pipeline is `parse -> normalize -> ground -> solve`: programs are
//! read from text ([`syntax`]), instantiated over their constants
//! ([`ground`]), and their world views are found by enumerating guesses
//! over the epistemic negations ([`search`]), building the epistemic
//! reduct of each guess ([`epistemic`]) and computing its answer sets
//! ([`aspcore`]). Three semantics versions are supported: ES1994, ES2014
//! and ES2016.

pub mod aspcore;
pub mod bench;
pub mod epistemic;
pub mod ground;
pub mod report;
pub mod search;
pub mod syntax;

use thiserror::Error;

pub use aspcore::{answer_sets, BeliefSet};
pub use epistemic::{Guess, Semantics, WorldView};
pub use ground::{ground_program, GroundProgram};
pub use search::{solve, SolveError, SolveOptions, SolveReport, Strategy};
pub use syntax::{parse_program, Program};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] syntax::ParseError),
    #[error(transparent)]
    Ground(#[from] ground::GroundError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Parse, normalize and ground program text.
pub fn prepare(text: &str) -> Result<GroundProgram, Error> {
    let program = syntax::normalize(&parse_program(text)?);
    Ok(ground_program(&program)?)
}

pub fn solve_source(text: &str, sem: Semantics, opts: &SolveOptions) -> Result<SolveReport, Error> {
    Ok(solve(&prepare(text)?, sem, opts)?)
}

//! Synchronous LOCAL-model simulation on cycles.

use serde::Serialize;
use thiserror::Error;

use crate::automaton::AutomatonError;
use crate::model::ModelError;
use crate::oracle::OracleError;
use crate::solver::SolveError;

mod ergodic;
mod probe;
mod ruling;
mod view;

pub use ergodic::solve_ergodic;
pub use probe::{probe_locality, ProbeRow};
pub use ruling::{cv_iterations, log_star, ruling_set, RulingSet};
pub use view::{random_bits, run_view_algorithm, View, ViewAlgorithm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("instance carries neither ids nor a seed")]
    MissingIdsOrSeed,
    #[error("instance has no ids")]
    MissingIds,
    #[error("n = {n} is too small: {reason}")]
    TooSmall { n: usize, reason: String },
    #[error("k must be at least 1")]
    ZeroK,
    #[error("simulation runs on cycles only")]
    NotACycle,
    #[error("node {node}: rule returned output {output} outside the alphabet")]
    InvalidOutput { node: usize, output: usize },
    #[error("problem has no ergodic certificate")]
    MissingCertificate,
    #[error("no closed walk of length {0} at the anchor; the certificate is wrong")]
    WalkAbsent(usize),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Phase {
    pub name: String,
    pub rounds: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimulationTrace {
    pub algorithm: String,
    pub n: usize,
    pub rounds_used: u64,
    pub outputs: Vec<usize>,
    pub marks: Option<Vec<bool>>,
    /// Distinct distances between consecutive marks.
    pub gaps: Option<Vec<usize>>,
    pub violations: Vec<usize>,
    pub phases: Vec<Phase>,
}

/// Distances from each mark to the next one, in cycle order.
pub fn mark_gaps(marks: &[bool]) -> Vec<usize> {
    let pos: Vec<usize> = (0..marks.len()).filter(|&i| marks[i]).collect();
    let n = marks.len();
    match pos.len() {
        0 => Vec::new(),
        1 => vec![n],
        m => (0..m).map(|i| (pos[(i + 1) % m] + n - pos[i]) % n).map(|d| if d == 0 { n } else { d }).collect(),
    }
}

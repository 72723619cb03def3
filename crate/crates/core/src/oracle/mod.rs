//! Brute-force reference implementations.
//!
//! Nothing here reuses the relation composition, atlas or subpartition code of
//! the main modules; block types are computed with plain boolean matrices and
//! subpartitions are enumerated from label functions.

use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

mod blocks;
mod mixing;
mod solve;
pub mod window;

pub use blocks::oracle_block_types;
pub use mixing::{naive_subpartition_count, oracle_is_mixing, OracleVerdict};
pub use solve::oracle_solve;
pub use window::{find_window_algorithm, WindowRule, WindowSearch};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    pub max_block_length: usize,
    pub max_instance_n: usize,
    pub max_rule_radius: usize,
    pub wallclock_ms: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_block_length: 8,
            max_instance_n: 12,
            max_rule_radius: 3,
            wallclock_ms: 60_000,
        }
    }
}

/// Largest number of objects any single oracle enumeration may visit.
pub const MAX_ENUMERATION: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("outside oracle scope: {0}")]
    Scope(String),
}

pub(crate) struct Deadline {
    end: Instant,
}

impl Deadline {
    pub(crate) fn new(budget: &SearchBudget) -> Self {
        Deadline {
            end: Instant::now() + Duration::from_millis(budget.wallclock_ms),
        }
    }

    pub(crate) fn expired(&self) -> bool {
        Instant::now() >= self.end
    }
}

pub(crate) fn checked_pow(base: usize, exp: usize) -> Option<u64> {
    (base as u64).checked_pow(exp as u32)
}

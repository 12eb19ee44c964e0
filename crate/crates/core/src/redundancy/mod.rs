//! Counting repeated subderivations in large height-bounded mapped proofs.
//!
//! Levels are depth from the conclusion (the conclusion is level 0), so a
//! minimal formula sits `k` levels *below* the end of an I-part of length
//! `k`, i.e. at a larger level number.

mod growth;
mod histogram;
mod oracle;
mod spread;
mod theorem;

use serde::Serialize;
use thiserror::Error;

use crate::emap::EMappedProof;

pub use growth::{growth_fit, growth_fit_proofs, GrowthFit};
pub use histogram::{level_histogram, partition_tud, LevelHistogram, TudPartition};
pub use oracle::{brute_force_max_repeats, oracle_count, BruteForce, DEFAULT_NODE_LIMIT};
pub use spread::{pump_subderivation, spread_check, Pumped, Spread};
pub use theorem::{count_at_level, find_redundant, find_redundant_with, Case, RedundancyReport};

pub const LEVEL_CONVENTION: &str =
    "levels count inference edges from the conclusion (conclusion = 0); instances are counted by the level of their root occurrence";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RedundancyError {
    #[error("hypotheses unmet: {}", .0.join("; "))]
    HypothesesUnmet(Vec<String>),
    #[error("no cell yields {threshold} instances at one level (best multiplicity {best})")]
    NoWitness { threshold: u128, best: usize },
    #[error("cell ({vertex}, {level}) is empty")]
    EmptyCell { vertex: usize, level: usize },
    #[error("{0}")]
    BadBranch(String),
    #[error("instances are not at one level: found levels {0:?}")]
    NotLevelAligned(Vec<usize>),
    #[error("derivation has {size} nodes, over the limit of {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("need at least 3 points with distinct m, got {0}")]
    TooFewPoints(usize),
}

/// Scale and exponents for the size and height hypotheses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Bounds {
    /// Scale; defaults to the number of syntax-tree vertices of the conclusion.
    pub m: Option<u64>,
    pub p: u32,
    /// Height exponent: heights must be at most `height_factor * m^q`.
    pub q: u32,
    pub height_factor: u64,
}

impl Bounds {
    pub fn new(p: u32, q: u32) -> Bounds {
        Bounds {
            m: None,
            p,
            q,
            height_factor: 1,
        }
    }

    pub fn with_m(mut self, m: u64) -> Bounds {
        self.m = Some(m);
        self
    }

    pub fn with_height_factor(mut self, c: u64) -> Bounds {
        self.height_factor = c;
        self
    }

    pub fn scale(&self, e: &EMappedProof) -> u64 {
        self.m.unwrap_or(e.tree.len() as u64)
    }
}

/// `base^exp`, or 1 for negative exponents (thresholds below one are met
/// by any single instance). Saturates instead of overflowing.
pub fn ipow(base: u64, exp: i64) -> u128 {
    if exp <= 0 {
        return 1;
    }
    let exp = u32::try_from(exp).unwrap_or(u32::MAX);
    (base as u128).checked_pow(exp).unwrap_or(u128::MAX)
}

//! Proof-theoretic tooling for minimal implicational logic: formulas,
//! natural-deduction derivations, normalization, branch analysis, mapped
//! derivations, redundancy detection, DAG compression and proof search.

pub mod branch;
pub mod compress;
pub mod derivation;
pub mod emap;
pub mod fixtures;
pub mod formula;
pub mod prover;
pub mod redundancy;
pub mod transform;

/// Runs `f`, growing the stack first when it is close to exhausted.
/// Wraps every recursion over derivation depth.
pub(crate) fn deep<R>(f: impl FnOnce() -> R) -> R {
    stacker::maybe_grow(128 * 1024, 4 * 1024 * 1024, f)
}

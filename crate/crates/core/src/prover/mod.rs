//! Provability with proof extraction, and generators for formulas and
//! proof families.

mod families;
mod random;
mod search;

use thiserror::Error;

use crate::derivation::Derivation;
use crate::formula::Formula;
use crate::transform::{expand, normalize_with};

pub use families::{
    gen_redundant_family, planted_corpus, plant_redexes, Family, FamilySpec, BLOWUP_HEIGHT_FACTOR,
    DEEP_HEIGHT_FACTOR,
};
pub use random::gen_random_formulas;

/// Default number of search steps (and of reduction steps) per formula.
pub const DEFAULT_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProverError {
    #[error("budget of {0} steps exceeded")]
    Budget(usize),
    #[error("{0}")]
    Infeasible(String),
}

/// A closed normal expanded proof of `f`, or `None` if `f` is not provable.
pub fn decide_and_prove(f: &Formula) -> Result<Option<Derivation>, ProverError> {
    decide_and_prove_with(f, DEFAULT_BUDGET)
}

pub fn decide_and_prove_with(f: &Formula, budget: usize) -> Result<Option<Derivation>, ProverError> {
    let mut s = search::Search::new(budget);
    let term = match s.prove(f) {
        Ok(Some(t)) => t,
        Ok(None) => return Ok(None),
        Err(search::OutOfBudget) => return Err(ProverError::Budget(budget)),
    };
    let d = term.to_derivation().relabel_canonical();
    let n = normalize_with(&d, Some(budget), |_| {}).map_err(|_| ProverError::Budget(budget))?;
    let e = expand(&n).expect("normal input");
    Ok(Some(e.relabel_canonical()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::{check_derivation, open_assumptions};
    use crate::transform::{is_expanded, is_normal};

    fn f(s: &str) -> Formula {
        s.parse().unwrap()
    }

    fn provable(s: &str) -> bool {
        let g = f(s);
        match decide_and_prove(&g).unwrap() {
            Some(d) => {
                assert!(check_derivation(&d).ok, "{s}");
                assert_eq!(d.conclusion(), &g);
                assert!(is_normal(&d) && is_expanded(&d), "{s}");
                assert!(open_assumptions(&d).unwrap().is_empty());
                true
            }
            None => false,
        }
    }

    #[test]
    fn combinators() {
        for s in [
            "a -> a",
            "a -> b -> a",
            "(a -> b -> c) -> (a -> b) -> a -> c",
            "(b -> c) -> (a -> b) -> a -> c",
            "(a -> b -> c) -> b -> a -> c",
            "((a -> a) -> b) -> b",
            "((a -> b) -> c) -> b -> c",
            "(((a -> b) -> a) -> a) -> (a -> b) -> b -> (a -> b)",
        ] {
            assert!(provable(s), "{s}");
        }
    }

    #[test]
    fn unprovable() {
        for s in [
            "((a -> b) -> a) -> a",
            "a",
            "a -> b",
            "(a -> b) -> a",
            "((a -> b) -> b) -> a",
            "((a -> b) -> b) -> (b -> a) -> a",
        ] {
            assert!(!provable(s), "{s}");
        }
    }

    #[test]
    fn higher_order_hypotheses() {
        // needs the (C -> D) -> B rule twice
        assert!(provable("(((a -> b) -> b) -> b) -> a -> b"));
        assert!(provable("((((a -> b) -> b) -> b) -> b) -> (a -> b) -> b"));
    }

    #[test]
    fn budget_is_reported() {
        let g = f("(((a -> b) -> b) -> b) -> a -> b");
        assert_eq!(decide_and_prove_with(&g, 1), Err(ProverError::Budget(1)));
    }
}

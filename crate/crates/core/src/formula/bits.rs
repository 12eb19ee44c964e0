use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use super::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BitsError {
    #[error("`{0}` is not a subformula of the root formulas")]
    NotASubformula(Formula),
    #[error("ordering must list every distinct subformula exactly once")]
    NotAPermutation,
    #[error("bitstring has length {found}, expected {expected}")]
    WrongLength { expected: usize, found: usize },
}

/// A linear order on the distinct subformulas of a set of root formulas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubformulaOrder {
    order: Vec<Formula>,
    position: HashMap<Formula, usize>,
}

impl SubformulaOrder {
    /// Default order: by node count, then canonical text.
    pub fn new<'a, I: IntoIterator<Item = &'a Formula>>(roots: I) -> SubformulaOrder {
        let mut all = BTreeSet::new();
        for r in roots {
            r.collect_subformulas(&mut all);
        }
        let mut order: Vec<_> = all.into_iter().collect();
        order.sort_by_cached_key(|f| (f.node_count(), f.to_string()));
        Self::from_vec(order)
    }

    /// An explicit order; it must be a permutation of the subformulas of `roots`.
    pub fn with_order<'a, I: IntoIterator<Item = &'a Formula>>(
        roots: I,
        order: Vec<Formula>,
    ) -> Result<SubformulaOrder, BitsError> {
        let mut all = BTreeSet::new();
        for r in roots {
            r.collect_subformulas(&mut all);
        }
        let given: BTreeSet<_> = order.iter().cloned().collect();
        if given.len() != order.len() || given != all {
            return Err(BitsError::NotAPermutation);
        }
        Ok(Self::from_vec(order))
    }

    fn from_vec(order: Vec<Formula>) -> SubformulaOrder {
        let position = order
            .iter()
            .enumerate()
            .map(|(i, f)| (f.clone(), i))
            .collect();
        SubformulaOrder { order, position }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.order
    }

    pub fn position(&self, f: &Formula) -> Option<usize> {
        self.position.get(f).copied()
    }

    pub fn encode<'a, I: IntoIterator<Item = &'a Formula>>(
        &self,
        deps: I,
    ) -> Result<DependencyBits, BitsError> {
        let mut bits = vec![false; self.len()];
        for d in deps {
            let i = self
                .position(d)
                .ok_or_else(|| BitsError::NotASubformula(d.clone()))?;
            bits[i] = true;
        }
        Ok(DependencyBits(bits))
    }

    pub fn decode(&self, bits: &DependencyBits) -> Result<BTreeSet<Formula>, BitsError> {
        if bits.0.len() != self.len() {
            return Err(BitsError::WrongLength {
                expected: self.len(),
                found: bits.0.len(),
            });
        }
        Ok(bits
            .0
            .iter()
            .zip(&self.order)
            .filter(|(b, _)| **b)
            .map(|(_, f)| f.clone())
            .collect())
    }
}

/// Bit `i` is set iff the `i`-th subformula of the order is a dependency.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DependencyBits(pub Vec<bool>);

impl fmt::Display for DependencyBits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            f.write_str(if *b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

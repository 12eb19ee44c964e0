//! Formulas of the purely implicational fragment.
//!
//! A [`Formula`] is either an atom or an implication. Subterms are shared
//! through `Arc`, so cloning a formula is cheap and large derivations can
//! carry a formula per node without copying trees around.

mod bits;
mod parse;
mod syntax_tree;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use bits::{BitsError, DependencyBits, SubformulaOrder};
pub use parse::{parse_formula, ParseError};
pub use syntax_tree::{SyntaxTree, TreeError, Vertex, VertexId};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(Arc<str>),
    Imp(Arc<Formula>, Arc<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Arc::from(name))
    }

    pub fn imp(antecedent: Formula, consequent: Formula) -> Formula {
        Formula::Imp(Arc::new(antecedent), Arc::new(consequent))
    }

    /// Right-nested implication `prefix[0] -> (prefix[1] -> ... -> head)`.
    pub fn from_spine<I>(prefix: I, head: Formula) -> Formula
    where
        I: IntoIterator<Item = Formula>,
        I::IntoIter: DoubleEndedIterator,
    {
        prefix
            .into_iter()
            .rev()
            .fold(head, |acc, a| Formula::imp(a, acc))
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Atom(_))
    }

    pub fn as_imp(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Imp(a, b) => Some((a, b)),
            Formula::Atom(_) => None,
        }
    }

    pub fn antecedent(&self) -> Option<&Formula> {
        self.as_imp().map(|(a, _)| a)
    }

    pub fn consequent(&self) -> Option<&Formula> {
        self.as_imp().map(|(_, b)| b)
    }

    /// Atoms plus implication signs.
    pub fn node_count(&self) -> usize {
        match self {
            Formula::Atom(_) => 1,
            Formula::Imp(a, b) => 1 + a.node_count() + b.node_count(),
        }
    }

    pub fn atom_count(&self) -> usize {
        match self {
            Formula::Atom(_) => 1,
            Formula::Imp(a, b) => a.atom_count() + b.atom_count(),
        }
    }

    /// Length of the canonical rendering counted in symbols: every atom,
    /// every `->` and every parenthesis counts once.
    pub fn symbol_count(&self) -> usize {
        match self {
            Formula::Atom(_) => 1,
            Formula::Imp(a, b) => {
                let parens = if a.is_atom() { 0 } else { 2 };
                a.symbol_count() + parens + 1 + b.symbol_count()
            }
        }
    }

    /// Distinct subformulas, including `self`.
    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        self.collect_subformulas(&mut out);
        out
    }

    pub(crate) fn collect_subformulas(&self, out: &mut BTreeSet<Formula>) {
        if out.contains(self) {
            return;
        }
        out.insert(self.clone());
        if let Formula::Imp(a, b) = self {
            a.collect_subformulas(out);
            b.collect_subformulas(out);
        }
    }

    pub fn is_subformula_of(&self, other: &Formula) -> bool {
        if self == other {
            return true;
        }
        match other {
            Formula::Atom(_) => false,
            Formula::Imp(a, b) => self.is_subformula_of(a) || self.is_subformula_of(b),
        }
    }

    /// Splits `a0 -> (a1 -> ... -> (ak -> q))` into `([a0, .., ak], q)`.
    pub fn spine_decompose(&self) -> Spine {
        let mut prefix = Vec::new();
        let mut cur = self;
        while let Formula::Imp(a, b) = cur {
            prefix.push((**a).clone());
            cur = b;
        }
        Spine {
            prefix,
            head: cur.clone(),
        }
    }

    /// The formulas visited when repeatedly taking the consequent, ending in
    /// the head atom. This is the only shape an elimination part starting at
    /// `self` can have once minimal formulas are atomic.
    pub fn right_spine(&self) -> Vec<Formula> {
        let mut out = vec![self.clone()];
        let mut cur = self;
        while let Formula::Imp(_, b) = cur {
            out.push((**b).clone());
            cur = b;
        }
        out
    }
}

/// The spine view of a formula: antecedents in order plus the atomic head.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spine {
    pub prefix: Vec<Formula>,
    pub head: Formula,
}

impl Spine {
    pub fn reassemble(&self) -> Formula {
        Formula::from_spine(self.prefix.iter().cloned(), self.head.clone())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(name) => f.write_str(name),
            Formula::Imp(a, b) => {
                if a.is_atom() {
                    write!(f, "{a} -> {b}")
                } else {
                    write!(f, "({a}) -> {b}")
                }
            }
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

impl FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

pub fn print_formula(f: &Formula) -> String {
    f.to_string()
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_formula(&text).map_err(serde::de::Error::custom)
    }
}

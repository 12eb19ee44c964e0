//! Natural-deduction derivations with `->`-introduction and `->`-elimination.

mod address;
pub(crate) mod canon;
mod check;
mod index;
mod json;
mod ops;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::Formula;

pub use address::{OccAddress, Step};
pub use check::{check_derivation, CheckReport, Violation, ViolationKind};
pub use index::{NodeKind, ProofIndex};
pub use json::{proof_from_json, proof_from_str, proof_to_json, JsonError};
pub use ops::{
    count_instances, dependency_sets, enumerate_subderivations, greedy_discharge, metrics,
    open_assumptions, Metrics, OpError,
};

/// Discharge label. Valid labels are positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Label(pub u32);

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Distance from the conclusion; the conclusion is at level 0.
pub type Level = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Derivation {
    Hyp {
        formula: Formula,
        label: Option<Label>,
    },
    Intro {
        label: Label,
        discharged: Formula,
        premise: Box<Derivation>,
        conclusion: Formula,
    },
    Elim {
        minor: Box<Derivation>,
        major: Box<Derivation>,
        conclusion: Formula,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("major premise `{0}` is not an implication")]
    MajorNotImplication(Formula),
    #[error("major premise antecedent `{antecedent}` does not match minor premise `{minor}`")]
    AntecedentMismatch { antecedent: Formula, minor: Formula },
}

impl Derivation {
    /// An open assumption.
    pub fn hyp(formula: Formula) -> Derivation {
        Derivation::Hyp {
            formula,
            label: None,
        }
    }

    /// An assumption marked for discharge by the intro carrying `label`.
    pub fn assume(formula: Formula, label: u32) -> Derivation {
        Derivation::Hyp {
            formula,
            label: Some(Label(label)),
        }
    }

    pub fn intro(label: u32, discharged: Formula, premise: Derivation) -> Derivation {
        let conclusion = Formula::imp(discharged.clone(), premise.conclusion().clone());
        Derivation::Intro {
            label: Label(label),
            discharged,
            premise: Box::new(premise),
            conclusion,
        }
    }

    pub fn elim(minor: Derivation, major: Derivation) -> Result<Derivation, RuleError> {
        let conclusion = match major.conclusion().as_imp() {
            None => return Err(RuleError::MajorNotImplication(major.conclusion().clone())),
            Some((a, b)) => {
                if a != minor.conclusion() {
                    return Err(RuleError::AntecedentMismatch {
                        antecedent: a.clone(),
                        minor: minor.conclusion().clone(),
                    });
                }
                b.clone()
            }
        };
        Ok(Derivation::Elim {
            minor: Box::new(minor),
            major: Box::new(major),
            conclusion,
        })
    }

    /// Builds an elimination without checking the rule. Only useful for
    /// producing ill-formed input for the checker.
    pub fn elim_unchecked(minor: Derivation, major: Derivation, conclusion: Formula) -> Derivation {
        Derivation::Elim {
            minor: Box::new(minor),
            major: Box::new(major),
            conclusion,
        }
    }

    pub fn conclusion(&self) -> &Formula {
        match self {
            Derivation::Hyp { formula, .. } => formula,
            Derivation::Intro { conclusion, .. } | Derivation::Elim { conclusion, .. } => conclusion,
        }
    }

    pub fn is_hyp(&self) -> bool {
        matches!(self, Derivation::Hyp { .. })
    }

    pub fn is_intro(&self) -> bool {
        matches!(self, Derivation::Intro { .. })
    }

    pub fn is_elim(&self) -> bool {
        matches!(self, Derivation::Elim { .. })
    }

    pub fn children(&self) -> Vec<(Step, &Derivation)> {
        match self {
            Derivation::Hyp { .. } => vec![],
            Derivation::Intro { premise, .. } => vec![(Step::Premise, premise)],
            Derivation::Elim { minor, major, .. } => {
                vec![(Step::Minor, minor), (Step::Major, major)]
            }
        }
    }

    pub fn child(&self, step: Step) -> Option<&Derivation> {
        match (self, step) {
            (Derivation::Intro { premise, .. }, Step::Premise) => Some(premise),
            (Derivation::Elim { minor, .. }, Step::Minor) => Some(minor),
            (Derivation::Elim { major, .. }, Step::Major) => Some(major),
            _ => None,
        }
    }

    pub fn at(&self, addr: &OccAddress) -> Option<&Derivation> {
        addr.steps().iter().try_fold(self, |d, s| d.child(*s))
    }

    pub(crate) fn at_mut(&mut self, addr: &OccAddress) -> Option<&mut Derivation> {
        let mut cur = self;
        for s in addr.steps() {
            cur = match (cur, s) {
                (Derivation::Intro { premise, .. }, Step::Premise) => premise,
                (Derivation::Elim { minor, .. }, Step::Minor) => minor,
                (Derivation::Elim { major, .. }, Step::Major) => major,
                _ => return None,
            };
        }
        Some(cur)
    }

    /// Number of formula occurrences.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    pub fn height(&self) -> usize {
        let mut best = 0;
        let mut stack = vec![(self, 0usize)];
        while let Some((d, lvl)) = stack.pop() {
            best = best.max(lvl);
            for (_, c) in d.children() {
                stack.push((c, lvl + 1));
            }
        }
        best
    }

    pub fn max_label(&self) -> u32 {
        let mut m = 0;
        self.visit(&mut |d| match d {
            Derivation::Hyp {
                label: Some(Label(l)),
                ..
            }
            | Derivation::Intro { label: Label(l), .. } => m = m.max(*l),
            _ => {}
        });
        m
    }

    /// Preorder traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Derivation)) {
        let mut stack = vec![self];
        while let Some(d) = stack.pop() {
            f(d);
            match d {
                Derivation::Hyp { .. } => {}
                Derivation::Intro { premise, .. } => stack.push(premise),
                Derivation::Elim { minor, major, .. } => {
                    stack.push(major);
                    stack.push(minor);
                }
            }
        }
    }

    /// Renumbers intro labels 1, 2, .. in preorder and rewrites the
    /// hypotheses they bind. Labels on hypotheses with no enclosing binder
    /// are dropped, making those hypotheses open.
    pub fn relabel_canonical(&self) -> Derivation {
        fn go(d: &Derivation, scope: &mut Vec<(Label, Label)>, next: &mut u32) -> Derivation {
            crate::deep(|| match d {
                Derivation::Hyp { formula, label } => Derivation::Hyp {
                    formula: formula.clone(),
                    label: label.and_then(|l| {
                        scope.iter().rev().find(|(old, _)| *old == l).map(|p| p.1)
                    }),
                },
                Derivation::Intro {
                    label,
                    discharged,
                    premise,
                    conclusion,
                } => {
                    *next += 1;
                    let fresh = Label(*next);
                    scope.push((*label, fresh));
                    let p = go(premise, scope, next);
                    scope.pop();
                    Derivation::Intro {
                        label: fresh,
                        discharged: discharged.clone(),
                        premise: Box::new(p),
                        conclusion: conclusion.clone(),
                    }
                }
                Derivation::Elim {
                    minor,
                    major,
                    conclusion,
                } => {
                    let a = go(minor, scope, next);
                    let b = go(major, scope, next);
                    Derivation::Elim {
                        minor: Box::new(a),
                        major: Box::new(b),
                        conclusion: conclusion.clone(),
                    }
                }
            })
        }
        go(self, &mut Vec::new(), &mut 0)
    }

    /// Equality up to consistent renaming of discharge labels.
    pub fn alpha_eq(&self, other: &Derivation) -> bool {
        self.relabel_canonical() == other.relabel_canonical()
    }
}

impl Drop for Derivation {
    // Deep proofs would otherwise overflow the stack in the default
    // recursive drop.
    fn drop(&mut self) {
        let mut stack: Vec<Box<Derivation>> = Vec::new();
        take_children(self, &mut stack);
        while let Some(mut d) = stack.pop() {
            take_children(&mut d, &mut stack);
        }
    }
}

fn take_children(d: &mut Derivation, out: &mut Vec<Box<Derivation>>) {
    let dummy = || Box::new(Derivation::hyp(Formula::atom("_")));
    match d {
        Derivation::Hyp { .. } => {}
        Derivation::Intro { premise, .. } => {
            if !premise.is_hyp() {
                out.push(std::mem::replace(premise, dummy()));
            }
        }
        Derivation::Elim { minor, major, .. } => {
            if !minor.is_hyp() {
                out.push(std::mem::replace(minor, dummy()));
            }
            if !major.is_hyp() {
                out.push(std::mem::replace(major, dummy()));
            }
        }
    }
}

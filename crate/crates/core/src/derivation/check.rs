use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::formula::Formula;

use super::{Derivation, Label, OccAddress, ProofIndex};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ViolationKind {
    MajorNotImplication { major: Formula },
    AntecedentMismatch { antecedent: Formula, minor: Formula },
    WrongConclusion { stored: Formula, expected: Formula },
    ZeroLabel,
    DuplicateLabel { label: Label },
    UnboundLabel { label: Label },
    DischargeMismatch { label: Label, hypothesis: Formula, discharged: Formula },
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ViolationKind::MajorNotImplication { major } => {
                write!(f, "major premise `{major}` is not an implication")
            }
            ViolationKind::AntecedentMismatch { antecedent, minor } => write!(
                f,
                "major premise antecedent `{antecedent}` differs from minor premise `{minor}`"
            ),
            ViolationKind::WrongConclusion { stored, expected } => {
                write!(f, "conclusion `{stored}` should be `{expected}`")
            }
            ViolationKind::ZeroLabel => f.write_str("label 0 is reserved"),
            ViolationKind::DuplicateLabel { label } => {
                write!(f, "label {label} is used by more than one intro")
            }
            ViolationKind::UnboundLabel { label } => {
                write!(f, "no enclosing intro carries label {label}")
            }
            ViolationKind::DischargeMismatch {
                label,
                hypothesis,
                discharged,
            } => write!(
                f,
                "hypothesis `{hypothesis}` carries label {label} which discharges `{discharged}`"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub address: OccAddress,
    #[serde(flatten)]
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

pub fn check_derivation(d: &Derivation) -> CheckReport {
    let ix = ProofIndex::new(d);
    let mut violations = Vec::new();
    let mut seen: HashMap<Label, usize> = HashMap::new();
    let mut push = |i: usize, kind| {
        violations.push(Violation {
            address: ix.address(i),
            kind,
        })
    };
    for i in 0..ix.len() {
        match ix.derivation(i) {
            Derivation::Hyp { formula, label } => {
                let Some(l) = label else { continue };
                match ix.get(i).binder {
                    None => push(i, ViolationKind::UnboundLabel { label: *l }),
                    Some(b) => {
                        if let Derivation::Intro { discharged, .. } = ix.derivation(b) {
                            if discharged != formula {
                                push(
                                    i,
                                    ViolationKind::DischargeMismatch {
                                        label: *l,
                                        hypothesis: formula.clone(),
                                        discharged: discharged.clone(),
                                    },
                                );
                            }
                        }
                    }
                }
            }
            Derivation::Intro {
                label,
                discharged,
                premise,
                conclusion,
            } => {
                if label.0 == 0 {
                    push(i, ViolationKind::ZeroLabel);
                }
                if seen.insert(*label, i).is_some() {
                    push(i, ViolationKind::DuplicateLabel { label: *label });
                }
                let expected = Formula::imp(discharged.clone(), premise.conclusion().clone());
                if *conclusion != expected {
                    push(
                        i,
                        ViolationKind::WrongConclusion {
                            stored: conclusion.clone(),
                            expected,
                        },
                    );
                }
            }
            Derivation::Elim {
                minor,
                major,
                conclusion,
            } => match major.conclusion().as_imp() {
                None => push(
                    i,
                    ViolationKind::MajorNotImplication {
                        major: major.conclusion().clone(),
                    },
                ),
                Some((a, b)) => {
                    if a != minor.conclusion() {
                        push(
                            i,
                            ViolationKind::AntecedentMismatch {
                                antecedent: a.clone(),
                                minor: minor.conclusion().clone(),
                            },
                        );
                    }
                    if b != conclusion {
                        push(
                            i,
                            ViolationKind::WrongConclusion {
                                stored: conclusion.clone(),
                                expected: b.clone(),
                            },
                        );
                    }
                }
            },
        }
    }
    CheckReport {
        ok: violations.is_empty(),
        violations,
    }
}

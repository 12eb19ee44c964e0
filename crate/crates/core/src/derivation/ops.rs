use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::formula::Formula;

use super::canon::Canon;
use super::{check_derivation, Derivation, Label, Level, OccAddress, ProofIndex, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OpError {
    #[error("derivation is ill-formed ({} violation(s), first at {}: {})",
        .0.len(), .0[0].address, .0[0].kind)]
    IllFormed(Vec<Violation>),
    #[error("derivation has open assumptions: {0}")]
    OpenAssumptions(String),
}

fn require_checked(d: &Derivation) -> Result<(), OpError> {
    let r = check_derivation(d);
    if r.ok {
        Ok(())
    } else {
        Err(OpError::IllFormed(r.violations))
    }
}

/// Multiset of undischarged hypothesis formulas.
pub fn open_assumptions(d: &Derivation) -> Result<BTreeMap<Formula, usize>, OpError> {
    require_checked(d)?;
    let ix = ProofIndex::new(d);
    let mut out = BTreeMap::new();
    for n in ix.nodes() {
        if let Derivation::Hyp { formula, .. } = n.node {
            if n.binder.is_none() {
                *out.entry(formula.clone()).or_insert(0) += 1;
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Metrics {
    pub size_symbols: usize,
    pub size_nodes: usize,
    pub height: usize,
    pub levels: Vec<(OccAddress, Level)>,
}

pub fn metrics(d: &Derivation) -> Metrics {
    let ix = ProofIndex::new(d);
    let mut size_symbols = 0;
    for n in ix.nodes() {
        size_symbols += n.node.conclusion().symbol_count();
        if !n.node.is_hyp() {
            size_symbols += 1;
        }
    }
    Metrics {
        size_symbols,
        size_nodes: ix.len(),
        height: ix.height(),
        levels: (0..ix.len()).map(|i| (ix.address(i), ix.level(i))).collect(),
    }
}

/// Every subtree with its address, in preorder.
pub fn enumerate_subderivations(d: &Derivation) -> Vec<(OccAddress, &Derivation)> {
    let ix = ProofIndex::new(d);
    (0..ix.len())
        .map(|i| (ix.address(i), ix.derivation(i)))
        .collect()
}

/// Number of subderivations of `d` equal to `s` up to renaming of discharge
/// labels. A hypothesis bound below the subderivation counts as open.
pub fn count_instances(d: &Derivation, s: &Derivation) -> usize {
    let mut canon = Canon::new();
    let target = canon.instance_id(s);
    let ix = ProofIndex::new(d);
    canon
        .instance_ids(&ix)
        .into_iter()
        .filter(|&id| id == target)
        .count()
}

/// For every occurrence, the formulas of the hypotheses it depends on.
pub fn dependency_sets(d: &Derivation) -> Vec<(OccAddress, BTreeSet<Formula>)> {
    let ix = ProofIndex::new(d);
    (0..ix.len())
        .map(|i| {
            let end = ix.get(i).end;
            let deps = (i..end)
                .filter_map(|j| {
                    let n = ix.get(j);
                    match n.node {
                        Derivation::Hyp { formula, .. }
                            if !n.binder.is_some_and(|b| b >= i && b < end) =>
                        {
                            Some(formula.clone())
                        }
                        _ => None,
                    }
                })
                .collect();
            (ix.address(i), deps)
        })
        .collect()
}

/// Rebinds every hypothesis to the innermost enclosing intro that
/// discharges the same formula. Intro labels are kept.
pub fn greedy_discharge(d: &Derivation) -> Result<Derivation, OpError> {
    let open = open_assumptions(d)?;
    if !open.is_empty() {
        let list: Vec<_> = open.keys().map(|f| f.to_string()).collect();
        return Err(OpError::OpenAssumptions(list.join(", ")));
    }
    fn go(d: &Derivation, scope: &mut Vec<(Formula, Label)>) -> Derivation {
        crate::deep(|| match d {
            Derivation::Hyp { formula, .. } => Derivation::Hyp {
                formula: formula.clone(),
                label: scope
                    .iter()
                    .rev()
                    .find(|(f, _)| f == formula)
                    .map(|p| p.1),
            },
            Derivation::Intro {
                label,
                discharged,
                premise,
                conclusion,
            } => {
                scope.push((discharged.clone(), *label));
                let p = go(premise, scope);
                scope.pop();
                Derivation::Intro {
                    label: *label,
                    discharged: discharged.clone(),
                    premise: Box::new(p),
                    conclusion: conclusion.clone(),
                }
            }
            Derivation::Elim {
                minor,
                major,
                conclusion,
            } => Derivation::Elim {
                minor: Box::new(go(minor, scope)),
                major: Box::new(go(major, scope)),
                conclusion: conclusion.clone(),
            },
        })
    }
    Ok(go(d, &mut Vec::new()))
}

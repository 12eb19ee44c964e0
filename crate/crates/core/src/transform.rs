//! Reduction of maximal formulas and conversion to expanded normal form.

use serde::Serialize;
use thiserror::Error;

use crate::derivation::{Derivation, Label, NodeKind, OccAddress, ProofIndex};
use crate::formula::Formula;

/// An elimination whose major premise is concluded by an introduction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MaximalFormulaSite {
    pub address: OccAddress,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("address {0} does not resolve in this derivation")]
    StaleAddress(OccAddress),
    #[error("node at {0} is not an elimination of an introduced implication")]
    NotARedex(OccAddress),
    #[error("derivation is not normal ({0} maximal formula(s))")]
    NotNormal(usize),
    #[error("normalization stopped after {0} steps")]
    StepLimit(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionStep {
    pub step: usize,
    pub site: OccAddress,
    pub size_before: usize,
    pub size_after: usize,
}

fn redex_flags(ix: &ProofIndex<'_>) -> Vec<bool> {
    (0..ix.len())
        .map(|i| match ix.kind(i) {
            NodeKind::Elim { major, .. } => ix.derivation(major).is_intro(),
            _ => false,
        })
        .collect()
}

/// All maximal formula sites in preorder.
pub fn find_maximal_formulas(d: &Derivation) -> Vec<MaximalFormulaSite> {
    let ix = ProofIndex::new(d);
    redex_flags(&ix)
        .into_iter()
        .enumerate()
        .filter(|(_, r)| *r)
        .map(|(i, _)| MaximalFormulaSite {
            address: ix.address(i),
        })
        .collect()
}

pub fn is_normal(d: &Derivation) -> bool {
    let ix = ProofIndex::new(d);
    !redex_flags(&ix).into_iter().any(|r| r)
}

fn placeholder() -> Derivation {
    Derivation::hyp(Formula::atom("_"))
}

/// Replaces every hypothesis bound by `label` with a copy of `arg`. An intro
/// with the same label shadows it.
fn substitute(d: &Derivation, label: Label, arg: &Derivation) -> Derivation {
    crate::deep(|| match d {
        Derivation::Hyp { label: Some(l), .. } if *l == label => arg.clone(),
        Derivation::Hyp { .. } => d.clone(),
        Derivation::Intro { label: l, .. } if *l == label => d.clone(),
        Derivation::Intro {
            label: l,
            discharged,
            premise,
            conclusion,
        } => Derivation::Intro {
            label: *l,
            discharged: discharged.clone(),
            premise: Box::new(substitute(premise, label, arg)),
            conclusion: conclusion.clone(),
        },
        Derivation::Elim {
            minor,
            major,
            conclusion,
        } => Derivation::Elim {
            minor: Box::new(substitute(minor, label, arg)),
            major: Box::new(substitute(major, label, arg)),
            conclusion: conclusion.clone(),
        },
    })
}

/// Contracts one maximal formula. Labels of the result are renumbered
/// canonically so copies of the minor premise stay uniquely labelled.
pub fn reduce_step(d: &Derivation, site: &MaximalFormulaSite) -> Result<Derivation, TransformError> {
    let mut out = d.clone();
    contract_in_place(&mut out, &site.address)?;
    Ok(out.relabel_canonical())
}

fn contract_in_place(d: &mut Derivation, addr: &OccAddress) -> Result<(), TransformError> {
    let node = d
        .at_mut(addr)
        .ok_or_else(|| TransformError::StaleAddress(addr.clone()))?;
    let replacement = match &*node {
        Derivation::Elim { minor, major, .. } => match &**major {
            Derivation::Intro { label, premise, .. } => substitute(premise, *label, minor),
            _ => return Err(TransformError::NotARedex(addr.clone())),
        },
        _ => return Err(TransformError::NotARedex(addr.clone())),
    };
    let old = std::mem::replace(node, placeholder());
    drop(old);
    *node = replacement;
    Ok(())
}

/// The leftmost of the redexes that contain no other redex.
fn innermost_redex(d: &Derivation) -> Option<OccAddress> {
    let ix = ProofIndex::new(d);
    let flags = redex_flags(&ix);
    let mut found: Option<usize> = None;
    // first redex in preorder, then the first redex inside it, and so on
    for i in 0..ix.len() {
        if found.is_some_and(|c| !ix.contains(c, i)) {
            break;
        }
        if flags[i] {
            found = Some(i);
        }
    }
    found.map(|c| ix.address(c))
}

pub fn normalize(d: &Derivation) -> Derivation {
    normalize_with(d, None, |_| {}).expect("no step limit")
}

/// Normalizes with the leftmost-innermost strategy, reporting each
/// contraction to `trace`.
pub fn normalize_with(
    d: &Derivation,
    max_steps: Option<usize>,
    mut trace: impl FnMut(&ReductionStep),
) -> Result<Derivation, TransformError> {
    let mut cur = d.clone();
    let mut step = 0;
    let mut size = cur.size();
    while let Some(addr) = innermost_redex(&cur) {
        if max_steps.is_some_and(|m| step >= m) {
            return Err(TransformError::StepLimit(step));
        }
        contract_in_place(&mut cur, &addr)?;
        cur = cur.relabel_canonical();
        step += 1;
        let after = cur.size();
        trace(&ReductionStep {
            step,
            site: addr,
            size_before: size,
            size_after: after,
        });
        size = after;
    }
    Ok(cur)
}

/// Eta-expands every non-atomic minimal formula until all minimal formulas
/// are atomic. The input must be normal.
pub fn expand(d: &Derivation) -> Result<Derivation, TransformError> {
    let sites = find_maximal_formulas(d).len();
    if sites > 0 {
        return Err(TransformError::NotNormal(sites));
    }
    let mut next = d.max_label();
    Ok(expand_node(d, true, &mut next))
}

// `minimal_slot`: the occurrence is not a major premise, so if it is not
// concluded by an intro it ends the E-part of its branch.
fn expand_node(d: &Derivation, minimal_slot: bool, next: &mut u32) -> Derivation {
    crate::deep(|| {
        let inner = match d {
            Derivation::Hyp { .. } => d.clone(),
            Derivation::Intro {
                label,
                discharged,
                premise,
                conclusion,
            } => Derivation::Intro {
                label: *label,
                discharged: discharged.clone(),
                premise: Box::new(expand_node(premise, true, next)),
                conclusion: conclusion.clone(),
            },
            Derivation::Elim {
                minor,
                major,
                conclusion,
            } => Derivation::Elim {
                minor: Box::new(expand_node(minor, true, next)),
                major: Box::new(expand_node(major, false, next)),
                conclusion: conclusion.clone(),
            },
        };
        if minimal_slot && !d.is_intro() {
            eta(inner, next)
        } else {
            inner
        }
    })
}

// eta(d : A -> B) = intro_n A . eta(elim(eta([A]_n), d))
fn eta(d: Derivation, next: &mut u32) -> Derivation {
    crate::deep(|| {
        let Some((a, _)) = d.conclusion().as_imp() else {
            return d;
        };
        let a = a.clone();
        *next += 1;
        let n = *next;
        let arg = eta(Derivation::assume(a.clone(), n), next);
        let app = Derivation::elim(arg, d).expect("antecedent matches");
        let body = eta(app, next);
        Derivation::intro(n, a, body)
    })
}

/// Every minimal formula is atomic (for a normal derivation).
pub fn is_expanded(d: &Derivation) -> bool {
    let ix = ProofIndex::new(d);
    (0..ix.len()).all(|i| {
        let n = ix.get(i);
        let major = matches!(n.step, Some(crate::derivation::Step::Major));
        major || n.node.is_intro() || n.node.conclusion().is_atom()
    })
}

use std::collections::BTreeMap;

use serde::Serialize;

use crate::branch::{Branch, BranchAnalysis};
use crate::derivation::{Derivation, Level, NodeKind, OccAddress};
use crate::emap::EMappedProof;
use crate::formula::{Formula, VertexId};

use super::{ipow, Bounds, RedundancyError};

/// Two branches are instances of each other when they carry the same
/// formulas and their occurrences map to the same vertices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub(super) struct Signature {
    formulas: Vec<Formula>,
    vertices: Vec<Option<VertexId>>,
}

pub(super) fn signature(e: &EMappedProof, a: &BranchAnalysis<'_>, b: usize) -> Signature {
    Signature {
        formulas: a.formulas(b),
        vertices: a.branches[b].nodes.iter().map(|&i| e.vertices[i]).collect(),
    }
}

/// Rebuilds the subderivation ending at `upto` on branch `b`: the branch
/// from its top-formula down to `upto`, with the subderivation of every
/// secondary branch assembled recursively as the minor premises. Labels
/// bound outside the result are dropped and the rest renumbered.
pub(super) fn assemble(a: &BranchAnalysis<'_>, b: usize, upto: usize) -> Derivation {
    fn go(a: &BranchAnalysis<'_>, b: usize, upto: usize) -> Derivation {
        crate::deep(|| {
            let ix = &a.index;
            let nodes = &a.branches[b].nodes;
            let mut cur = ix.derivation(nodes[0]).clone();
            for &n in &nodes[1..] {
                if !ix.contains(upto, n) {
                    break;
                }
                cur = match (ix.derivation(n), ix.kind(n)) {
                    (Derivation::Intro { label, discharged, .. }, _) => {
                        Derivation::intro(label.0, discharged.clone(), cur)
                    }
                    (Derivation::Elim { conclusion, .. }, NodeKind::Elim { minor, .. }) => {
                        let s = a.branch_of[minor];
                        let m = go(a, s, a.branches[s].end());
                        Derivation::elim_unchecked(m, cur, conclusion.clone())
                    }
                    _ => unreachable!("branch edges lead to inference nodes"),
                };
            }
            cur
        })
    }
    go(a, b, upto).relabel_canonical()
}

/// Result of pigeonholing the instances of a branch over levels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Spread {
    pub level: Level,
    pub count_at_level: usize,
    /// Minimal-formula occurrences of the instances at `level`.
    pub instances: Vec<OccAddress>,
    pub total_instances: usize,
    pub levels_used: usize,
    pub threshold: u128,
    pub meets_threshold: bool,
}

/// If `b` has more than `m^p` instances, the level holding most of their
/// minimal formulas (the lowest such level on ties).
pub fn spread_check(
    e: &EMappedProof,
    b: &Branch,
    bounds: &Bounds,
) -> Result<Option<Spread>, RedundancyError> {
    let m = bounds.scale(e);
    let height = e.proof.height();
    let bound = u128::from(bounds.height_factor) * ipow(m, i64::from(bounds.q)).max(1);
    if height as u128 > bound {
        return Err(RedundancyError::HypothesesUnmet(vec![format!(
            "height {height} exceeds {} * {m}^{} = {bound}",
            bounds.height_factor, bounds.q
        )]));
    }
    let a = BranchAnalysis::new(&e.proof);
    let id = a
        .find(b)
        .map_err(|err| RedundancyError::BadBranch(err.to_string()))?;
    let sig = signature(e, &a, id);
    let mut by_level: BTreeMap<Level, Vec<usize>> = BTreeMap::new();
    let mut total = 0;
    for other in 0..a.branches.len() {
        if a.branches[other].nodes.len() == a.branches[id].nodes.len() && signature(e, &a, other) == sig {
            let min = a.branches[other].minimal();
            by_level.entry(a.index.level(min)).or_default().push(min);
            total += 1;
        }
    }
    if total as u128 <= ipow(m, i64::from(bounds.p)) {
        return Ok(None);
    }
    let (&level, nodes) = by_level
        .iter()
        .max_by(|x, y| x.1.len().cmp(&y.1.len()).then(y.0.cmp(x.0)))
        .expect("at least one instance");
    let threshold = ipow(m, i64::from(bounds.p) - 1);
    Ok(Some(Spread {
        level,
        count_at_level: nodes.len(),
        instances: nodes.iter().map(|&i| a.index.address(i)).collect(),
        total_instances: total,
        levels_used: by_level.len(),
        threshold,
        meets_threshold: nodes.len() as u128 >= threshold,
    }))
}

/// A subderivation assembled from aligned branch instances.
#[derive(Debug, Clone, Serialize)]
pub struct Pumped {
    pub subderivation: Derivation,
    /// Level of the subderivation's root occurrences.
    pub level: Level,
    /// Instances whose assembled subderivation is `subderivation`.
    pub group: Vec<OccAddress>,
    /// Occurrences at `level` equal to `subderivation`, recounted.
    pub multiplicity: usize,
    /// Occurrences anywhere in the proof equal to `subderivation`.
    pub total_multiplicity: usize,
    /// Number of distinct subderivations among the instances.
    pub distinct: usize,
}

/// Assembles the subderivation of each instance's branch and returns the
/// most frequent one with its recounted multiplicity.
pub fn pump_subderivation(
    e: &EMappedProof,
    b: &Branch,
    instances: &[OccAddress],
) -> Result<Pumped, RedundancyError> {
    if instances.is_empty() {
        return Err(RedundancyError::BadBranch("no instances given".into()));
    }
    let a = BranchAnalysis::new(&e.proof);
    let id = a
        .find(b)
        .map_err(|err| RedundancyError::BadBranch(err.to_string()))?;
    let sig = signature(e, &a, id);
    let mut branches = Vec::new();
    let mut levels = Vec::new();
    for addr in instances {
        let i = a
            .index
            .resolve(addr)
            .ok_or_else(|| RedundancyError::BadBranch(format!("no occurrence at {addr}")))?;
        let ob = a.branch_of[i];
        if a.branches[ob].minimal() != i || signature(e, &a, ob) != sig {
            return Err(RedundancyError::BadBranch(format!(
                "{addr} is not the minimal formula of an instance of the branch"
            )));
        }
        branches.push(ob);
        levels.push(a.index.level(i));
    }
    levels.sort_unstable();
    levels.dedup();
    if levels.len() > 1 {
        return Err(RedundancyError::NotLevelAligned(levels));
    }

    let mut groups: Vec<(Derivation, Vec<usize>)> = Vec::new();
    for &ob in &branches {
        let end = a.branches[ob].end();
        let pi = assemble(&a, ob, end);
        debug_assert!(pi.alpha_eq(a.index.derivation(end)));
        match groups.iter_mut().find(|g| g.0 == pi) {
            Some(g) => g.1.push(ob),
            None => groups.push((pi, vec![ob])),
        }
    }
    let distinct = groups.len();
    let (pi, members) = groups
        .into_iter()
        .rev()
        .max_by_key(|g| g.1.len())
        .unwrap();
    let end_level = a.index.level(a.branches[members[0]].end());
    let multiplicity = super::theorem::count_at_level(&e.proof, &pi, end_level);
    Ok(Pumped {
        total_multiplicity: crate::derivation::count_instances(&e.proof, &pi),
        subderivation: pi,
        level: end_level,
        group: members
            .iter()
            .map(|&ob| a.index.address(a.branches[ob].minimal()))
            .collect(),
        multiplicity,
        distinct,
    })
}

use std::collections::HashMap;

use serde::Serialize;

use crate::branch::BranchAnalysis;
use crate::derivation::canon::{Canon, Id};
use crate::derivation::{Derivation, Level, OccAddress, ProofIndex};
use crate::emap::EMappedProof;
use crate::formula::VertexId;

use super::histogram::{level_histogram, split_cell};
use super::spread::assemble;
use super::{ipow, Bounds, RedundancyError, LEVEL_CONVENTION};

/// Rule concluding the witness occurrences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    Top,
    Uno,
    Duo,
}

#[derive(Debug, Clone, Serialize)]
pub struct RedundancyReport {
    pub m: u64,
    pub p: u32,
    pub q: u32,
    pub height_factor: u64,
    pub size_nodes: usize,
    pub height: usize,
    /// `m^p`; the proof must be strictly larger.
    pub size_threshold: u128,
    /// `height_factor * m^q`.
    pub height_bound: u128,
    /// `m^(p-(q+1))`: some cell must exceed this by counting.
    pub cell_threshold: u128,
    /// `m^(p-3)` for linear height bounds, `m^(p-(q+3))` otherwise.
    pub witness_threshold: u128,
    pub case: Case,
    pub vertex: VertexId,
    pub level: Level,
    pub cell_size: usize,
    /// Sizes of the top, uno and duo parts of the cell.
    pub parts: [usize; 3],
    pub subderivation: Derivation,
    pub subderivation_size: usize,
    /// Occurrences of `subderivation` at `level`, recounted from scratch.
    pub multiplicity: usize,
    /// Witness occurrences inside the cell.
    pub group_in_cell: Vec<OccAddress>,
    pub meets_threshold: bool,
    pub exceeds_cell_bound: bool,
    /// Multiplicity reaches `m^(p-2)`.
    pub stronger_bound_observed: bool,
    pub notes: Vec<String>,
}

const P_NOTE: &str = "p >= q + 3 is required so that every threshold exponent is positive";

/// Occurrences of `s` at `level` of `d`, up to renaming of labels.
pub fn count_at_level(d: &Derivation, s: &Derivation, level: Level) -> usize {
    let mut canon = Canon::new();
    let target = canon.instance_id(s);
    let ix = ProofIndex::new(d);
    canon
        .instance_ids(&ix)
        .into_iter()
        .enumerate()
        .filter(|&(i, id)| id == target && ix.level(i) == level)
        .count()
}

fn witness_exponent(b: &Bounds) -> i64 {
    let (p, q) = (i64::from(b.p), i64::from(b.q));
    if q <= 1 {
        p - 3
    } else {
        p - (q + 3)
    }
}

pub fn find_redundant(e: &EMappedProof, bounds: &Bounds) -> Result<RedundancyReport, RedundancyError> {
    find_redundant_with(e, bounds, 1)
}

/// Largest group of equal subderivations rooted in one cell.
struct CellBest {
    key: (VertexId, Level),
    cell_size: usize,
    nodes: Vec<usize>,
}

fn best_in_cell(key: (VertexId, Level), cell: &[usize], ids: &[Id], sizes: &[usize]) -> CellBest {
    let mut groups: HashMap<Id, Vec<usize>> = HashMap::new();
    for &i in cell {
        groups.entry(ids[i]).or_default().push(i);
    }
    let (_, nodes) = groups
        .into_iter()
        .max_by(|x, y| {
            x.1.len()
                .cmp(&y.1.len())
                .then(sizes[x.1[0]].cmp(&sizes[y.1[0]]))
                .then(y.1[0].cmp(&x.1[0]))
        })
        .expect("cells are nonempty");
    CellBest {
        key,
        cell_size: cell.len(),
        nodes,
    }
}

/// Scans cells by decreasing size (then level, then vertex) and returns the
/// first whose most repeated subderivation meets the witness threshold.
/// `jobs` threads share the per-cell grouping.
pub fn find_redundant_with(
    e: &EMappedProof,
    bounds: &Bounds,
    jobs: usize,
) -> Result<RedundancyReport, RedundancyError> {
    let m = bounds.scale(e);
    let ix = ProofIndex::new(&e.proof);
    let size = ix.len();
    let height = ix.height();
    let size_threshold = ipow(m, i64::from(bounds.p));
    let height_bound = u128::from(bounds.height_factor).saturating_mul(ipow(m, i64::from(bounds.q)).max(1));
    let mut unmet = Vec::new();
    if size as u128 <= size_threshold {
        unmet.push(format!("size {size} is not above m^p = {m}^{} = {size_threshold}", bounds.p));
    }
    if height as u128 > height_bound {
        unmet.push(format!(
            "height {height} exceeds {} * m^q = {} * {m}^{} = {height_bound}",
            bounds.height_factor, bounds.height_factor, bounds.q
        ));
    }
    if bounds.p < bounds.q + 3 {
        unmet.push(format!("p = {} must be at least q + 3 = {}", bounds.p, bounds.q + 3));
    }
    if m < 2 {
        unmet.push(format!("scale m = {m} must be at least 2"));
    }
    if !unmet.is_empty() {
        return Err(RedundancyError::HypothesesUnmet(unmet));
    }

    let witness_threshold = ipow(m, witness_exponent(bounds));
    let cell_threshold = ipow(m, i64::from(bounds.p) - i64::from(bounds.q) - 1);
    let hist = level_histogram(e);
    let order = hist.by_size();
    let ids = Canon::new().instance_ids(&ix);
    let sizes: Vec<usize> = (0..size).map(|i| ix.subtree_size(i)).collect();

    let jobs = jobs.max(1).min(order.len().max(1));
    let chunk = order.len().div_ceil(jobs).max(1);
    let bests: Vec<CellBest> = std::thread::scope(|s| {
        let handles: Vec<_> = order
            .chunks(chunk)
            .map(|part| {
                let (hist, ids, sizes) = (&hist, &ids, &sizes);
                s.spawn(move || {
                    part.iter()
                        .map(|&(key, _)| best_in_cell(key, &hist.cells[&key], ids, sizes))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("cell scan panicked"))
            .collect()
    });

    let mut best_seen = 0;
    for best in bests {
        best_seen = best_seen.max(best.nodes.len());
        if (best.nodes.len() as u128) < witness_threshold {
            continue;
        }
        let (vertex, level) = best.key;
        let a = BranchAnalysis::new(&e.proof);
        let root = best.nodes[0];
        let sub = assemble(&a, a.branch_of[root], root);
        if !sub.alpha_eq(ix.derivation(root)) {
            return Err(RedundancyError::BadBranch(format!(
                "assembled subderivation at {} differs from the proof",
                ix.address(root)
            )));
        }
        let mut check = Canon::new();
        if check.instance_id(&sub) != check.instance_id(ix.derivation(root)) {
            return Err(RedundancyError::BadBranch("instance key mismatch".into()));
        }
        let multiplicity = count_at_level(&e.proof, &sub, level);
        let parts = split_cell(&ix, &hist.cells[&best.key]);
        let case = match ix.derivation(root) {
            Derivation::Hyp { .. } => Case::Top,
            Derivation::Intro { .. } => Case::Uno,
            Derivation::Elim { .. } => Case::Duo,
        };
        return Ok(RedundancyReport {
            m,
            p: bounds.p,
            q: bounds.q,
            height_factor: bounds.height_factor,
            size_nodes: size,
            height,
            size_threshold,
            height_bound,
            cell_threshold,
            witness_threshold,
            case,
            vertex,
            level,
            cell_size: best.cell_size,
            parts: parts.map(|v| v.len()),
            subderivation_size: sub.size(),
            subderivation: sub,
            multiplicity,
            group_in_cell: best.nodes.iter().map(|&i| ix.address(i)).collect(),
            meets_threshold: multiplicity as u128 >= witness_threshold,
            exceeds_cell_bound: best.cell_size as u128 > cell_threshold,
            stronger_bound_observed: multiplicity as u128 >= ipow(m, i64::from(bounds.p) - 2),
            notes: vec![LEVEL_CONVENTION.to_string(), P_NOTE.to_string()],
        });
    }
    Err(RedundancyError::NoWitness {
        threshold: witness_threshold,
        best: best_seen,
    })
}

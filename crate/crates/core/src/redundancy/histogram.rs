use std::collections::BTreeMap;

use serde::Serialize;

use crate::derivation::{Derivation, Level, OccAddress, ProofIndex};
use crate::emap::EMappedProof;
use crate::formula::VertexId;

use super::RedundancyError;

/// Mapped occurrences grouped by (vertex, level). Occurrences are preorder
/// positions in the proof.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelHistogram {
    pub cells: BTreeMap<(VertexId, Level), Vec<usize>>,
}

impl LevelHistogram {
    pub fn total(&self) -> usize {
        self.cells.values().map(Vec::len).sum()
    }

    pub fn cell(&self, vertex: VertexId, level: Level) -> &[usize] {
        self.cells
            .get(&(vertex, level))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Cells by decreasing size, then increasing level, then vertex.
    pub fn by_size(&self) -> Vec<((VertexId, Level), usize)> {
        let mut v: Vec<_> = self.cells.iter().map(|(k, s)| (*k, s.len())).collect();
        v.sort_by_key(|&((vx, lvl), n)| (std::cmp::Reverse(n), lvl, vx));
        v
    }
}

pub fn level_histogram(e: &EMappedProof) -> LevelHistogram {
    let ix = ProofIndex::new(&e.proof);
    let mut cells: BTreeMap<(VertexId, Level), Vec<usize>> = BTreeMap::new();
    for (i, v) in e.vertices.iter().enumerate() {
        if let Some(v) = v {
            cells.entry((*v, ix.level(i))).or_default().push(i);
        }
    }
    LevelHistogram { cells }
}

/// One cell split by the rule that concludes each occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TudPartition {
    /// Top-formulas (hypotheses).
    pub top: Vec<OccAddress>,
    /// Conclusions of introductions.
    pub uno: Vec<OccAddress>,
    /// Conclusions of eliminations.
    pub duo: Vec<OccAddress>,
}

impl TudPartition {
    pub fn sizes(&self) -> [usize; 3] {
        [self.top.len(), self.uno.len(), self.duo.len()]
    }
}

pub(super) fn split_cell(ix: &ProofIndex<'_>, cell: &[usize]) -> [Vec<usize>; 3] {
    let mut parts: [Vec<usize>; 3] = Default::default();
    for &i in cell {
        let k = match ix.derivation(i) {
            Derivation::Hyp { .. } => 0,
            Derivation::Intro { .. } => 1,
            Derivation::Elim { .. } => 2,
        };
        parts[k].push(i);
    }
    parts
}

pub fn partition_tud(
    e: &EMappedProof,
    vertex: VertexId,
    level: Level,
) -> Result<TudPartition, RedundancyError> {
    let h = level_histogram(e);
    let cell = h.cell(vertex, level);
    if cell.is_empty() {
        return Err(RedundancyError::EmptyCell { vertex, level });
    }
    let ix = ProofIndex::new(&e.proof);
    let [t, u, d] = split_cell(&ix, cell);
    let addrs = |v: Vec<usize>| v.into_iter().map(|i| ix.address(i)).collect();
    Ok(TudPartition {
        top: addrs(t),
        uno: addrs(u),
        duo: addrs(d),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::emap::build_emap;
    use crate::formula::{Formula, SyntaxTree};

    fn f(s: &str) -> Formula {
        s.parse().unwrap()
    }

    fn mapped(d: &Derivation) -> EMappedProof {
        build_emap(d, &SyntaxTree::build(d.conclusion())).unwrap()
    }

    /// intro f. intro x. f x (f x x) style trees: `k` copies of x at one level.
    fn siblings(k: usize) -> Derivation {
        // [g : q -> ... -> q -> q] applied to k copies of [x : q]
        let mut ty = f("q");
        for _ in 0..k {
            ty = Formula::imp(f("q"), ty);
        }
        let mut body = Derivation::assume(ty.clone(), 1);
        for _ in 0..k {
            body = Derivation::elim(Derivation::assume(f("q"), 2), body).unwrap();
        }
        Derivation::intro(1, ty, Derivation::intro(2, f("q"), body))
    }

    #[test]
    fn identity_cells() {
        let d = Derivation::intro(1, f("q"), Derivation::assume(f("q"), 1));
        let h = level_histogram(&mapped(&d));
        assert_eq!(h.cells.len(), 2);
        assert_eq!(h.cell(0, 0), &[0]);
        assert_eq!(h.cell(1, 1), &[1]);
        assert_eq!(h.total(), 2);
    }

    #[test]
    fn hypothesis_cells_and_partition() {
        // one x per elim at increasing depth: a single sibling pair
        let d = siblings(1);
        let e = mapped(&d);
        let h = level_histogram(&e);
        assert_eq!(h.total(), d.size());
        for (&(v, l), cell) in &h.cells {
            let p = partition_tud(&e, v, l).unwrap();
            assert_eq!(p.sizes().iter().sum::<usize>(), cell.len());
        }
        assert!(matches!(
            partition_tud(&e, 0, 9),
            Err(RedundancyError::EmptyCell { .. })
        ));
    }

    #[test]
    fn duo_only_cell() {
        let d = siblings(3);
        let e = mapped(&d);
        let ix = ProofIndex::new(&d);
        // the outermost application q sits at level 2
        let v = e.vertices[2].unwrap();
        assert_eq!(ix.level(2), 2);
        let p = partition_tud(&e, v, 2).unwrap();
        assert_eq!(p.sizes(), [0, 0, 1]);
    }
}

//! Branches: maximal paths from a top-formula down through major premises
//! and intro premises, ending at the conclusion or at a minor premise.

use serde::Serialize;
use thiserror::Error;

use crate::derivation::{Derivation, NodeKind, OccAddress, ProofIndex, Step};
use crate::formula::Formula;
use crate::transform::is_normal;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Branch {
    pub occurrences: Vec<OccAddress>,
}

impl Branch {
    pub fn top(&self) -> &OccAddress {
        &self.occurrences[0]
    }

    pub fn len(&self) -> usize {
        self.occurrences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.occurrences.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchSplit {
    pub e_part: Vec<OccAddress>,
    pub minimal: OccAddress,
    pub i_part: Vec<OccAddress>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BranchError {
    #[error("derivation is not normal; E/I split is undefined")]
    NotNormal,
    #[error("no branch of the derivation starts at {0}")]
    NotABranch(OccAddress),
}

/// Node-index view of one branch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchInfo {
    /// Node indices from the top-formula down to the end.
    pub nodes: Vec<usize>,
    pub order: usize,
    pub reverse_rank: usize,
    /// Number of leading nodes that are major premises. For a normal
    /// derivation `nodes[e_len]` is the minimal formula.
    pub e_len: usize,
    /// Branches ending at minor premises of eliminations in this branch.
    pub secondary: Vec<usize>,
}

impl BranchInfo {
    pub fn top(&self) -> usize {
        self.nodes[0]
    }

    pub fn end(&self) -> usize {
        *self.nodes.last().unwrap()
    }

    pub fn minimal(&self) -> usize {
        self.nodes[self.e_len]
    }

    pub fn e_part(&self) -> &[usize] {
        &self.nodes[..self.e_len]
    }

    pub fn i_part(&self) -> &[usize] {
        &self.nodes[self.e_len + 1..]
    }
}

/// All branches of a derivation with order, reverse rank and split.
#[derive(Debug, Clone)]
pub struct BranchAnalysis<'a> {
    pub index: ProofIndex<'a>,
    pub branches: Vec<BranchInfo>,
    /// Branch containing each node.
    pub branch_of: Vec<usize>,
    pub normal: bool,
}

impl<'a> BranchAnalysis<'a> {
    pub fn new(d: &'a Derivation) -> BranchAnalysis<'a> {
        let index = ProofIndex::new(d);
        let n = index.len();
        let mut branches = Vec::new();
        let mut branch_of = vec![usize::MAX; n];
        for leaf in 0..n {
            if index.kind(leaf) != NodeKind::Hyp {
                continue;
            }
            let id = branches.len();
            let mut nodes = vec![leaf];
            let mut cur = leaf;
            branch_of[cur] = id;
            while matches!(index.get(cur).step, Some(Step::Major | Step::Premise)) {
                cur = index.parent(cur).unwrap();
                branch_of[cur] = id;
                nodes.push(cur);
            }
            let e_len = nodes
                .iter()
                .take_while(|&&i| index.get(i).step == Some(Step::Major))
                .count();
            branches.push(BranchInfo {
                nodes,
                order: 0,
                reverse_rank: 0,
                e_len,
                secondary: Vec::new(),
            });
        }

        for b in 0..branches.len() {
            let mut sec = Vec::new();
            for &i in &branches[b].nodes {
                if let NodeKind::Elim { minor, .. } = index.kind(i) {
                    sec.push(branch_of[minor]);
                }
            }
            branches[b].secondary = sec;
        }

        // A branch ends above the elimination it feeds, so ordering by end
        // index puts every branch after the branch it feeds.
        let mut by_end: Vec<usize> = (0..branches.len()).collect();
        by_end.sort_by_key(|&b| branches[b].end());
        for &b in &by_end {
            let end = branches[b].end();
            branches[b].order = match index.parent(end) {
                None => 0,
                Some(e) => branches[branch_of[e]].order + 1,
            };
        }
        for &b in by_end.iter().rev() {
            let rr = if branches[b].secondary.is_empty() {
                0
            } else {
                1 + branches[b]
                    .secondary
                    .iter()
                    .map(|&s| branches[s].reverse_rank)
                    .max()
                    .unwrap()
            };
            branches[b].reverse_rank = rr;
        }

        let normal = is_normal(d);
        BranchAnalysis {
            index,
            branches,
            branch_of,
            normal,
        }
    }

    pub fn principal(&self) -> usize {
        self.branch_of[0]
    }

    pub fn branch(&self, b: usize) -> Branch {
        Branch {
            occurrences: self.branches[b]
                .nodes
                .iter()
                .map(|&i| self.index.address(i))
                .collect(),
        }
    }

    pub fn formulas(&self, b: usize) -> Vec<Formula> {
        self.branches[b]
            .nodes
            .iter()
            .map(|&i| self.index.formula(i).clone())
            .collect()
    }

    pub fn find(&self, b: &Branch) -> Result<usize, BranchError> {
        let top = self
            .index
            .resolve(b.top())
            .ok_or_else(|| BranchError::NotABranch(b.top().clone()))?;
        let id = self.branch_of[top];
        if self.branches[id].top() != top || self.branches[id].nodes.len() != b.len() {
            return Err(BranchError::NotABranch(b.top().clone()));
        }
        Ok(id)
    }

    pub fn split(&self, b: usize) -> Result<BranchSplit, BranchError> {
        if !self.normal {
            return Err(BranchError::NotNormal);
        }
        let info = &self.branches[b];
        let addr = |i: &usize| self.index.address(*i);
        Ok(BranchSplit {
            e_part: info.e_part().iter().map(addr).collect(),
            minimal: self.index.address(info.minimal()),
            i_part: info.i_part().iter().map(addr).collect(),
        })
    }
}

pub fn enumerate_branches(d: &Derivation) -> Vec<Branch> {
    let a = BranchAnalysis::new(d);
    (0..a.branches.len()).map(|b| a.branch(b)).collect()
}

pub fn split_branch(d: &Derivation, b: &Branch) -> Result<BranchSplit, BranchError> {
    let a = BranchAnalysis::new(d);
    a.split(a.find(b)?)
}

pub fn branch_order(d: &Derivation, b: &Branch) -> Result<usize, BranchError> {
    let a = BranchAnalysis::new(d);
    Ok(a.branches[a.find(b)?].order)
}

pub fn reverse_rank(d: &Derivation, b: &Branch) -> Result<usize, BranchError> {
    let a = BranchAnalysis::new(d);
    Ok(a.branches[a.find(b)?].reverse_rank)
}

/// The only E-part (including the minimal formula) an expanded normal
/// branch starting at `top` can have.
pub fn epart_from_top(top: &Formula) -> Vec<Formula> {
    top.right_spine()
}

#[derive(Debug, Clone, Serialize)]
pub struct BranchReport {
    pub addresses: Vec<OccAddress>,
    pub formulas: Vec<Formula>,
    pub order: usize,
    pub reverse_rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split: Option<BranchSplit>,
}

pub fn branch_reports(d: &Derivation) -> Vec<BranchReport> {
    let a = BranchAnalysis::new(d);
    (0..a.branches.len())
        .map(|b| BranchReport {
            addresses: a.branch(b).occurrences,
            formulas: a.formulas(b),
            order: a.branches[b].order,
            reverse_rank: a.branches[b].reverse_rank,
            split: a.split(b).ok(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        s.parse().unwrap()
    }

    fn chain() -> Derivation {
        let b = Derivation::elim(Derivation::assume(f("A"), 1), Derivation::hyp(f("A -> B"))).unwrap();
        let c = Derivation::elim(b, Derivation::hyp(f("B -> C"))).unwrap();
        Derivation::intro(1, f("A"), c)
    }

    fn text(v: &[Formula]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn chain_branches() {
        let d = chain();
        let a = BranchAnalysis::new(&d);
        assert_eq!(a.branches.len(), 3);
        let got: Vec<_> = (0..3)
            .map(|b| (text(&a.formulas(b)), a.branches[b].order, a.branches[b].reverse_rank))
            .collect();
        assert_eq!(
            got,
            vec![
                (vec!["A".to_string()], 2, 0),
                (vec!["A -> B".into(), "B".into()], 1, 1),
                (vec!["B -> C".into(), "C".into(), "A -> C".into()], 0, 2),
            ]
        );
        let principal = a.principal();
        assert_eq!(principal, 2);
        let s = a.split(principal).unwrap();
        assert_eq!(s.e_part, vec!["premise.major".parse().unwrap()]);
        assert_eq!(s.minimal, "premise".parse().unwrap());
        assert_eq!(s.i_part, vec![OccAddress::root()]);
    }

    #[test]
    fn small_cases() {
        let id = Derivation::intro(1, f("A"), Derivation::assume(f("A"), 1));
        let bs = enumerate_branches(&id);
        assert_eq!(bs.len(), 1);
        assert_eq!(bs[0].len(), 2);
        let s = split_branch(&id, &bs[0]).unwrap();
        assert!(s.e_part.is_empty());
        assert_eq!(s.minimal, bs[0].occurrences[0]);
        assert_eq!(reverse_rank(&id, &bs[0]), Ok(0));
        assert_eq!(branch_order(&id, &bs[0]), Ok(0));
        assert_eq!(enumerate_branches(&Derivation::hyp(f("A"))).len(), 1);
    }

    #[test]
    fn hypothesis_only_minors_give_rank_one() {
        let d = Derivation::elim(
            Derivation::hyp(f("B")),
            Derivation::elim(Derivation::hyp(f("A")), Derivation::hyp(f("A -> B -> C"))).unwrap(),
        )
        .unwrap();
        let a = BranchAnalysis::new(&d);
        let p = a.principal();
        assert_eq!(a.branches[p].reverse_rank, 1);
        assert_eq!(a.branches[p].secondary.len(), 2);
    }

    #[test]
    fn split_refuses_redexes() {
        let d = Derivation::elim(Derivation::hyp(f("A")), chain()).unwrap();
        let bs = enumerate_branches(&d);
        assert_eq!(split_branch(&d, &bs[0]), Err(BranchError::NotNormal));
        let bogus = Branch {
            occurrences: vec!["major".parse().unwrap()],
        };
        assert!(matches!(
            branch_order(&d, &bogus),
            Err(BranchError::NotABranch(_))
        ));
    }

    #[test]
    fn spine_examples() {
        assert_eq!(text(&epart_from_top(&f("q"))), ["q"]);
        assert_eq!(
            text(&epart_from_top(&f("A -> B -> C -> q"))),
            ["A -> B -> C -> q", "B -> C -> q", "C -> q", "q"]
        );
        assert_eq!(
            text(&epart_from_top(&f("B -> D -> q"))),
            ["B -> D -> q", "D -> q", "q"]
        );
    }
}

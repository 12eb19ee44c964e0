use super::{Derivation, Label, Level, OccAddress, Step};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Hyp,
    Intro { premise: usize },
    Elim { minor: usize, major: usize },
}

#[derive(Debug, Clone)]
pub struct IndexedNode<'a> {
    pub node: &'a Derivation,
    pub kind: NodeKind,
    pub parent: Option<usize>,
    /// Step taken from the parent to reach this node.
    pub step: Option<Step>,
    pub level: Level,
    /// One past the last node of this subtree; subtrees are contiguous.
    pub end: usize,
    /// For a hypothesis: the intro node that binds it, if any.
    pub binder: Option<usize>,
}

/// Flat preorder view of a derivation. Node 0 is the conclusion.
#[derive(Debug, Clone)]
pub struct ProofIndex<'a> {
    nodes: Vec<IndexedNode<'a>>,
}

impl<'a> ProofIndex<'a> {
    pub fn new(root: &'a Derivation) -> ProofIndex<'a> {
        let mut nodes: Vec<IndexedNode<'a>> = Vec::new();
        let mut scope: Vec<(Label, usize)> = Vec::new();
        enum Work<'a> {
            Enter(&'a Derivation, Option<usize>, Option<Step>, Level),
            Leave(usize, bool),
        }
        let mut stack = vec![Work::Enter(root, None, None, 0)];
        while let Some(w) = stack.pop() {
            match w {
                Work::Leave(i, pops) => {
                    nodes[i].end = nodes.len();
                    if pops {
                        scope.pop();
                    }
                }
                Work::Enter(d, parent, step, level) => {
                    let i = nodes.len();
                    let binder = match d {
                        Derivation::Hyp { label: Some(l), .. } => {
                            scope.iter().rev().find(|(x, _)| x == l).map(|p| p.1)
                        }
                        _ => None,
                    };
                    nodes.push(IndexedNode {
                        node: d,
                        kind: NodeKind::Hyp,
                        parent,
                        step,
                        level,
                        end: i + 1,
                        binder,
                    });
                    if let Some(p) = parent {
                        match (&mut nodes[p].kind, step) {
                            (k @ NodeKind::Hyp, Some(Step::Premise)) => {
                                *k = NodeKind::Intro { premise: i }
                            }
                            (k @ NodeKind::Hyp, Some(Step::Minor)) => {
                                *k = NodeKind::Elim {
                                    minor: i,
                                    major: usize::MAX,
                                }
                            }
                            (NodeKind::Elim { major, .. }, Some(Step::Major)) => *major = i,
                            _ => unreachable!("children are entered minor first"),
                        }
                    }
                    match d {
                        Derivation::Hyp { .. } => {}
                        Derivation::Intro { label, premise, .. } => {
                            scope.push((*label, i));
                            stack.push(Work::Leave(i, true));
                            stack.push(Work::Enter(premise, Some(i), Some(Step::Premise), level + 1));
                        }
                        Derivation::Elim { minor, major, .. } => {
                            stack.push(Work::Leave(i, false));
                            stack.push(Work::Enter(major, Some(i), Some(Step::Major), level + 1));
                            stack.push(Work::Enter(minor, Some(i), Some(Step::Minor), level + 1));
                        }
                    }
                }
            }
        }
        ProofIndex { nodes }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[IndexedNode<'a>] {
        &self.nodes
    }

    pub fn get(&self, i: usize) -> &IndexedNode<'a> {
        &self.nodes[i]
    }

    pub fn derivation(&self, i: usize) -> &'a Derivation {
        self.nodes[i].node
    }

    pub fn formula(&self, i: usize) -> &'a crate::formula::Formula {
        self.nodes[i].node.conclusion()
    }

    pub fn level(&self, i: usize) -> Level {
        self.nodes[i].level
    }

    pub fn parent(&self, i: usize) -> Option<usize> {
        self.nodes[i].parent
    }

    pub fn kind(&self, i: usize) -> NodeKind {
        self.nodes[i].kind
    }

    pub fn subtree_size(&self, i: usize) -> usize {
        self.nodes[i].end - i
    }

    /// Is `j` inside the subtree rooted at `i` (inclusive)?
    pub fn contains(&self, i: usize, j: usize) -> bool {
        i <= j && j < self.nodes[i].end
    }

    pub fn address(&self, mut i: usize) -> OccAddress {
        let mut steps = Vec::new();
        while let Some(s) = self.nodes[i].step {
            steps.push(s);
            i = self.nodes[i].parent.expect("non-root has a parent");
        }
        steps.reverse();
        OccAddress(steps)
    }

    pub fn resolve(&self, addr: &OccAddress) -> Option<usize> {
        let mut i = 0;
        for s in addr.steps() {
            i = match (self.nodes[i].kind, s) {
                (NodeKind::Intro { premise }, Step::Premise) => premise,
                (NodeKind::Elim { minor, .. }, Step::Minor) => minor,
                (NodeKind::Elim { major, .. }, Step::Major) => major,
                _ => return None,
            };
        }
        Some(i)
    }

    pub fn height(&self) -> usize {
        self.nodes.iter().map(|n| n.level).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula;

    fn f(s: &str) -> Formula {
        s.parse().unwrap()
    }

    #[test]
    fn preorder_layout() {
        let e1 = Derivation::elim(Derivation::assume(f("A"), 1), Derivation::hyp(f("A -> B"))).unwrap();
        let e2 = Derivation::elim(e1, Derivation::hyp(f("B -> C"))).unwrap();
        let d = Derivation::intro(1, f("A"), e2);
        let ix = ProofIndex::new(&d);
        assert_eq!(ix.len(), 6);
        assert_eq!(ix.kind(0), NodeKind::Intro { premise: 1 });
        assert_eq!(ix.kind(1), NodeKind::Elim { minor: 2, major: 5 });
        assert_eq!(ix.kind(2), NodeKind::Elim { minor: 3, major: 4 });
        assert_eq!(ix.get(3).binder, Some(0));
        assert_eq!(ix.get(4).binder, None);
        assert_eq!(ix.level(3), 3);
        assert_eq!(ix.height(), 3);
        assert_eq!(ix.subtree_size(1), 5);
        for i in 0..ix.len() {
            assert_eq!(ix.resolve(&ix.address(i)), Some(i));
        }
        assert_eq!(ix.address(4).to_string(), "premise.minor.major");
        assert!(ix.contains(1, 5));
        assert!(!ix.contains(2, 5));
    }
}

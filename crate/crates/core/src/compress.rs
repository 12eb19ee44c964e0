//! Sharing of repeated subderivations through hash-consing.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::derivation::canon::{Canon, Key};
use crate::derivation::{check_derivation, Derivation, ProofIndex};
use crate::formula::Formula;

pub type NodeId = u32;

/// Largest tree `from_dag` will expand.
pub const EXPANSION_LIMIT: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DagRule {
    /// `binder` counts enclosing intros outward from 1; absent when open.
    Hyp {
        formula: Formula,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        binder: Option<u32>,
    },
    Intro { discharged: Formula, premise: NodeId },
    Elim { minor: NodeId, major: NodeId },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DagNode {
    pub id: NodeId,
    #[serde(flatten)]
    pub rule: DagRule,
    /// Number of edges into this node.
    #[serde(default)]
    pub refs: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofDag {
    pub nodes: Vec<DagNode>,
    pub root: NodeId,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DagError {
    #[error("cyclic: node {0} reaches itself")]
    Cyclic(NodeId),
    #[error("dangling id {0}")]
    Dangling(NodeId),
    #[error("duplicate id {0}")]
    DuplicateId(NodeId),
    #[error("hypothesis node {node} refers to binder {binder} with only {depth} enclosing intros")]
    UnboundIndex { node: NodeId, binder: u32, depth: usize },
    #[error("expanded tree would have {0} nodes")]
    TooLarge(u64),
    #[error("expansion is ill-formed: {0}")]
    IllFormed(String),
}

impl ProofDag {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Node count of the tree the DAG stands for.
    pub fn tree_size(&self) -> Result<u64, DagError> {
        let table = self.table()?;
        let order = self.topological(&table)?;
        let mut size: HashMap<NodeId, u64> = HashMap::new();
        for id in order.into_iter().rev() {
            let s = match &table[&id].rule {
                DagRule::Hyp { .. } => 1,
                DagRule::Intro { premise, .. } => 1 + size[premise],
                DagRule::Elim { minor, major } => {
                    1u64.saturating_add(size[minor]).saturating_add(size[major])
                }
            };
            size.insert(id, s);
        }
        Ok(size[&self.root])
    }

    /// Tree nodes per DAG node.
    pub fn ratio(&self) -> Result<f64, DagError> {
        Ok(self.len() as f64 / self.tree_size()? as f64)
    }

    fn table(&self) -> Result<HashMap<NodeId, &DagNode>, DagError> {
        let mut t = HashMap::new();
        for n in &self.nodes {
            if t.insert(n.id, n).is_some() {
                return Err(DagError::DuplicateId(n.id));
            }
        }
        let known = |id: &NodeId| {
            if t.contains_key(id) {
                Ok(())
            } else {
                Err(DagError::Dangling(*id))
            }
        };
        known(&self.root)?;
        for n in &self.nodes {
            match &n.rule {
                DagRule::Hyp { .. } => {}
                DagRule::Intro { premise, .. } => known(premise)?,
                DagRule::Elim { minor, major } => {
                    known(minor)?;
                    known(major)?;
                }
            }
        }
        Ok(t)
    }

    /// Nodes reachable from the root, parents before children.
    fn topological(&self, t: &HashMap<NodeId, &DagNode>) -> Result<Vec<NodeId>, DagError> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Active,
            Done,
        }
        let mut mark: HashMap<NodeId, Mark> = HashMap::new();
        let mut post = Vec::new();
        let mut stack = vec![(self.root, false)];
        while let Some((id, leaving)) = stack.pop() {
            if leaving {
                mark.insert(id, Mark::Done);
                post.push(id);
                continue;
            }
            match mark.get(&id) {
                Some(Mark::Done) => continue,
                Some(Mark::Active) => return Err(DagError::Cyclic(id)),
                None => {}
            }
            mark.insert(id, Mark::Active);
            stack.push((id, true));
            for c in children(&t[&id].rule) {
                match mark.get(&c) {
                    Some(Mark::Active) => return Err(DagError::Cyclic(c)),
                    Some(Mark::Done) => {}
                    None => stack.push((c, false)),
                }
            }
        }
        post.reverse();
        Ok(post)
    }
}

fn children(r: &DagRule) -> Vec<NodeId> {
    match r {
        DagRule::Hyp { .. } => vec![],
        DagRule::Intro { premise, .. } => vec![*premise],
        DagRule::Elim { minor, major } => vec![*minor, *major],
    }
}

/// Shares every subderivation that recurs with the same bindings. Node 0
/// is the root; ids follow first visits in preorder.
pub fn to_dag(d: &Derivation) -> ProofDag {
    let ix = ProofIndex::new(d);
    let mut canon = Canon::new();
    let ids = canon.full_ids(&ix);
    let mut renum: HashMap<u32, NodeId> = HashMap::new();
    let mut order = Vec::new();
    for &id in &ids {
        renum.entry(id).or_insert_with(|| {
            order.push(id);
            (order.len() - 1) as NodeId
        });
    }
    let mut nodes: Vec<DagNode> = order
        .iter()
        .enumerate()
        .map(|(n, &id)| DagNode {
            id: n as NodeId,
            rule: match canon.key(id) {
                Key::Hyp { formula, index } => DagRule::Hyp {
                    formula: canon.formula(formula).clone(),
                    binder: index,
                },
                Key::Intro { discharged, body } => DagRule::Intro {
                    discharged: canon.formula(discharged).clone(),
                    premise: renum[&body],
                },
                Key::Elim { minor, major } => DagRule::Elim {
                    minor: renum[&minor],
                    major: renum[&major],
                },
            },
            refs: 0,
        })
        .collect();
    for n in 0..nodes.len() {
        for c in children(&nodes[n].rule) {
            nodes[c as usize].refs += 1;
        }
    }
    ProofDag { nodes, root: 0 }
}

/// Expands a DAG back into a tree with labels 1, 2, .. in preorder.
pub fn from_dag(g: &ProofDag) -> Result<Derivation, DagError> {
    let size = g.tree_size()?;
    if size > EXPANSION_LIMIT {
        return Err(DagError::TooLarge(size));
    }
    let table = g.table()?;

    fn go(
        t: &HashMap<NodeId, &DagNode>,
        id: NodeId,
        scope: &mut Vec<u32>,
        next: &mut u32,
    ) -> Result<Derivation, DagError> {
        crate::deep(|| match &t[&id].rule {
            DagRule::Hyp { formula, binder } => match binder {
                None => Ok(Derivation::hyp(formula.clone())),
                Some(k) if *k >= 1 && (*k as usize) <= scope.len() => {
                    Ok(Derivation::assume(formula.clone(), scope[scope.len() - *k as usize]))
                }
                Some(k) => Err(DagError::UnboundIndex {
                    node: id,
                    binder: *k,
                    depth: scope.len(),
                }),
            },
            DagRule::Intro { discharged, premise } => {
                *next += 1;
                let l = *next;
                scope.push(l);
                let p = go(t, *premise, scope, next);
                scope.pop();
                Ok(Derivation::intro(l, discharged.clone(), p?))
            }
            DagRule::Elim { minor, major } => {
                let a = go(t, *minor, scope, next)?;
                let b = go(t, *major, scope, next)?;
                Derivation::elim(a, b).map_err(|e| DagError::IllFormed(format!("node {id}: {e}")))
            }
        })
    }

    let d = go(&table, g.root, &mut Vec::new(), &mut 0)?;
    let report = check_derivation(&d);
    if !report.ok {
        let v = &report.violations[0];
        return Err(DagError::IllFormed(format!("{}: {:?}", v.address, v.kind)));
    }
    Ok(d)
}

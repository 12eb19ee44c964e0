//! Maps from formula occurrences of a normal expanded proof into the
//! syntax tree of its conclusion.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::branch::BranchAnalysis;
use crate::derivation::{Derivation, NodeKind, OccAddress, ProofIndex};
use crate::formula::{SyntaxTree, VertexId};
use crate::transform::{find_maximal_formulas, is_expanded};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmapError {
    #[error("derivation is not normal")]
    NotNormal,
    #[error("derivation is not in expanded form")]
    NotExpanded,
    #[error("syntax tree is for `{tree}` but the derivation concludes `{proof}`")]
    WrongTree { tree: String, proof: String },
    #[error("no left-child vertex labelled `{formula}` for the open assumption at {address}")]
    NoVertexForAssumption { address: OccAddress, formula: String },
    #[error("at {address}: {message}")]
    Inconsistent { address: OccAddress, message: String },
    #[error("address {0} does not resolve in the derivation")]
    BadAddress(OccAddress),
    #[error("vertex {0} is not in the syntax tree")]
    BadVertex(VertexId),
    #[error("branch starting at {0} has no mapped minimal formula")]
    Unmapped(OccAddress),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapEntry {
    pub occ: OccAddress,
    pub vertex: VertexId,
}

/// Partial map from occurrences to vertices. Serializes as a list of
/// `{"occ", "vertex"}` entries.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "Vec<MapEntry>", into = "Vec<MapEntry>")]
pub struct OccVertexMap {
    pub entries: BTreeMap<OccAddress, VertexId>,
}

impl From<Vec<MapEntry>> for OccVertexMap {
    fn from(v: Vec<MapEntry>) -> Self {
        OccVertexMap {
            entries: v.into_iter().map(|e| (e.occ, e.vertex)).collect(),
        }
    }
}

impl From<OccVertexMap> for Vec<MapEntry> {
    fn from(m: OccVertexMap) -> Self {
        m.entries
            .into_iter()
            .map(|(occ, vertex)| MapEntry { occ, vertex })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct EMappedProof {
    pub proof: Derivation,
    pub tree: SyntaxTree,
    /// Vertex per occurrence, indexed by preorder position in `proof`.
    pub vertices: Vec<Option<VertexId>>,
    /// Choices the builder made that were not forced.
    pub notes: Vec<String>,
}

impl EMappedProof {
    /// Combines a proof, tree and explicit map without checking the map.
    pub fn from_parts(
        proof: Derivation,
        tree: SyntaxTree,
        map: &OccVertexMap,
    ) -> Result<EMappedProof, EmapError> {
        let ix = ProofIndex::new(&proof);
        let mut vertices = vec![None; ix.len()];
        for (addr, &v) in &map.entries {
            let i = ix.resolve(addr).ok_or_else(|| EmapError::BadAddress(addr.clone()))?;
            if v >= tree.len() {
                return Err(EmapError::BadVertex(v));
            }
            vertices[i] = Some(v);
        }
        drop(ix);
        Ok(EMappedProof {
            proof,
            tree,
            vertices,
            notes: Vec::new(),
        })
    }

    pub fn map(&self) -> OccVertexMap {
        let ix = ProofIndex::new(&self.proof);
        OccVertexMap {
            entries: self
                .vertices
                .iter()
                .enumerate()
                .filter_map(|(i, v)| v.map(|v| (ix.address(i), v)))
                .collect(),
        }
    }
}

pub fn build_emap(d: &Derivation, t: &SyntaxTree) -> Result<EMappedProof, EmapError> {
    if d.conclusion() != t.formula() {
        return Err(EmapError::WrongTree {
            tree: t.formula().to_string(),
            proof: d.conclusion().to_string(),
        });
    }
    if !find_maximal_formulas(d).is_empty() {
        return Err(EmapError::NotNormal);
    }
    if !is_expanded(d) {
        return Err(EmapError::NotExpanded);
    }
    let a = BranchAnalysis::new(d);
    let ix = &a.index;
    let mut l: Vec<Option<VertexId>> = vec![None; ix.len()];
    let mut notes = Vec::new();

    let mut order: Vec<usize> = (0..a.branches.len()).collect();
    order.sort_by_key(|&b| (a.branches[b].order, a.branches[b].end()));

    let inconsistent = |i: usize, message: String| EmapError::Inconsistent {
        address: ix.address(i),
        message,
    };

    for &b in &order {
        let info = &a.branches[b];
        // I-part, from the end of the branch upward
        let end = info.end();
        let mut v = match ix.parent(end) {
            None => Some(t.root()),
            Some(e) => match ix.kind(e) {
                NodeKind::Elim { major, .. } => l[major].and_then(|mv| t.left(mv)),
                _ => None,
            },
        };
        for &i in info.i_part().iter().rev() {
            let vi = v.ok_or_else(|| inconsistent(i, "I-part occurrence has no vertex".into()))?;
            if t.label(vi) != ix.formula(i) {
                return Err(inconsistent(
                    i,
                    format!("vertex {vi} is labelled `{}`", t.label(vi)),
                ));
            }
            l[i] = Some(vi);
            v = t.right(vi);
        }

        // E-part including the minimal formula, from the top-formula down
        let top = info.top();
        let u = match ix.get(top).binder {
            Some(binder) => {
                let bv = l[binder]
                    .ok_or_else(|| inconsistent(top, "binding intro is unmapped".into()))?;
                t.left(bv)
                    .ok_or_else(|| inconsistent(top, format!("vertex {bv} is a leaf")))?
            }
            None => {
                let f = ix.formula(top);
                let u = (0..t.len())
                    .find(|&v| t.is_left_child(v) && t.label(v) == f)
                    .ok_or_else(|| EmapError::NoVertexForAssumption {
                        address: ix.address(top),
                        formula: f.to_string(),
                    })?;
                notes.push(format!(
                    "open assumption `{f}` at {} mapped to leftmost candidate vertex {u}",
                    ix.address(top)
                ));
                u
            }
        };
        let mut cur = Some(u);
        for &i in &info.nodes[..=info.e_len] {
            let vi = cur.ok_or_else(|| inconsistent(i, "E-part runs past a leaf".into()))?;
            if t.label(vi) != ix.formula(i) {
                return Err(inconsistent(
                    i,
                    format!("vertex {vi} is labelled `{}`", t.label(vi)),
                ));
            }
            l[i] = Some(vi);
            cur = t.right(vi);
        }
    }

    Ok(EMappedProof {
        proof: d.clone(),
        tree: t.clone(),
        vertices: l,
        notes,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmapRule {
    NotNormal,
    Label,
    Neighbourhood,
    ElimCoherence,
    IntroCoherence,
    EPartCoverage,
    TopFormula,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmapViolation {
    pub rule: EmapRule,
    pub address: OccAddress,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex: Option<VertexId>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmapReport {
    pub ok: bool,
    pub violations: Vec<EmapViolation>,
}

pub fn verify_emap(e: &EMappedProof) -> EmapReport {
    let a = BranchAnalysis::new(&e.proof);
    let ix = &a.index;
    let t = &e.tree;
    let l = &e.vertices;
    let mut out = Vec::new();
    let mut push = |rule, i: usize, vertex, detail: String| {
        out.push(EmapViolation {
            rule,
            address: ix.address(i),
            vertex,
            detail,
        })
    };
    if !a.normal {
        push(EmapRule::NotNormal, 0, None, "derivation has maximal formulas".into());
        return EmapReport {
            ok: false,
            violations: out,
        };
    }

    for (i, v) in l.iter().enumerate() {
        if let Some(v) = *v {
            if t.label(v) != ix.formula(i) {
                push(
                    EmapRule::Label,
                    i,
                    Some(v),
                    format!("`{}` mapped to vertex labelled `{}`", ix.formula(i), t.label(v)),
                );
            }
        }
    }

    for info in &a.branches {
        let j = info.e_len;
        let m = info.minimal();
        for &i in &info.nodes[..=j] {
            if l[i].is_none() {
                push(
                    EmapRule::EPartCoverage,
                    i,
                    None,
                    format!("E-part occurrence `{}` is unmapped", ix.formula(i)),
                );
            }
        }
        if l[m].is_some() && info.nodes.len() > 1 {
            let before = j.checked_sub(1).map(|k| info.nodes[k]);
            let after = info.nodes.get(j + 1).copied();
            if !before.is_some_and(|k| l[k].is_some()) && !after.is_some_and(|k| l[k].is_some()) {
                push(
                    EmapRule::Neighbourhood,
                    m,
                    l[m],
                    "neither neighbour of the minimal formula is mapped".into(),
                );
            }
        }
        if let (Some(vq), Some(vtop)) = (l[m], l[info.top()]) {
            let expect = t.right_ancestral_left_child(vq);
            if ix.formula(m).is_atom() && expect != Some(vtop) {
                push(
                    EmapRule::TopFormula,
                    info.top(),
                    Some(vtop),
                    format!(
                        "minimal formula is at vertex {vq}, whose top-formula vertex is {}",
                        expect.map_or("none".to_string(), |x| x.to_string())
                    ),
                );
            }
        }
    }

    for i in 0..ix.len() {
        let Some(v) = l[i] else { continue };
        match ix.kind(i) {
            NodeKind::Elim { minor, major } => {
                let parent = t.parent(v).filter(|&p| t.right(p) == Some(v));
                match parent {
                    None => push(
                        EmapRule::ElimCoherence,
                        i,
                        Some(v),
                        "conclusion vertex is not a right child".into(),
                    ),
                    Some(p) => {
                        if l[major] != Some(p) {
                            push(
                                EmapRule::ElimCoherence,
                                i,
                                Some(v),
                                format!("major premise should be at vertex {p}"),
                            );
                        }
                        let v1 = t.left(p).expect("inner vertex");
                        let minor_in_i_part = ix.derivation(minor).is_intro();
                        let ok = match l[minor] {
                            None => false,
                            Some(w) if minor_in_i_part => w == v1,
                            Some(w) => t.label(w) == t.label(v1),
                        };
                        if !ok {
                            push(
                                EmapRule::ElimCoherence,
                                i,
                                Some(v),
                                format!("minor premise does not match vertex {v1}"),
                            );
                        }
                    }
                }
            }
            NodeKind::Intro { premise } => {
                let ok = t
                    .right(v)
                    .is_some_and(|r| t.label(r) == ix.formula(premise));
                if !ok {
                    push(
                        EmapRule::IntroCoherence,
                        i,
                        Some(v),
                        "right child does not carry the premise".into(),
                    );
                }
            }
            NodeKind::Hyp => {}
        }
    }

    EmapReport {
        ok: out.is_empty(),
        violations: out,
    }
}

/// The tree path of a branch's E-part, top-formula to minimal formula.
pub fn epart_path(e: &EMappedProof, top: &OccAddress) -> Result<Vec<VertexId>, EmapError> {
    let a = BranchAnalysis::new(&e.proof);
    let start = a
        .index
        .resolve(top)
        .ok_or_else(|| EmapError::BadAddress(top.clone()))?;
    let info = &a.branches[a.branch_of[start]];
    if info.top() != start {
        return Err(EmapError::BadAddress(top.clone()));
    }
    info.nodes[..=info.e_len]
        .iter()
        .map(|&i| e.vertices[i].ok_or_else(|| EmapError::Unmapped(top.clone())))
        .collect()
}

/// Paths of all branches in branch order, `None` where unmapped.
pub fn epart_paths(e: &EMappedProof) -> Vec<Option<Vec<VertexId>>> {
    let a = BranchAnalysis::new(&e.proof);
    a.branches
        .iter()
        .map(|info| {
            info.nodes[..=info.e_len]
                .iter()
                .map(|&i| e.vertices[i])
                .collect()
        })
        .collect()
}

/// Number of distinct E-part paths.
pub fn count_epart_types(e: &EMappedProof) -> usize {
    epart_paths(e)
        .into_iter()
        .flatten()
        .collect::<BTreeSet<_>>()
        .len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula;

    fn f(s: &str) -> Formula {
        s.parse().unwrap()
    }

    fn el(minor: Derivation, major: Derivation) -> Derivation {
        Derivation::elim(minor, major).unwrap()
    }

    pub(crate) fn mapped_sample() -> Derivation {
        let top = Derivation::assume(f("A -> B -> C -> q"), 1);
        let bcq = el(Derivation::assume(f("A"), 4), top);
        let cq = el(Derivation::hyp(f("B")), bcq);
        let q = el(Derivation::hyp(f("C")), cq);
        let aq = Derivation::intro(4, f("A"), q);
        let dq = el(aq, Derivation::assume(f("(A -> q) -> D -> q"), 2));
        let q2 = el(Derivation::assume(f("D"), 3), dq);
        let i3 = Derivation::intro(3, f("D"), q2);
        let i2 = Derivation::intro(2, f("(A -> q) -> D -> q"), i3);
        Derivation::intro(1, f("A -> B -> C -> q"), i2)
    }

    #[test]
    fn identity_on_atom() {
        let d = Derivation::intro(1, f("q"), Derivation::assume(f("q"), 1));
        let t = SyntaxTree::build(d.conclusion());
        let e = build_emap(&d, &t).unwrap();
        assert_eq!(e.vertices, vec![Some(0), Some(1)]);
        assert!(verify_emap(&e).ok);
        assert_eq!(count_epart_types(&e), 1);
    }

    #[test]
    fn sample_map() {
        let d = mapped_sample();
        let t = SyntaxTree::build(d.conclusion());
        assert_eq!(t.len(), 19);
        let e = build_emap(&d, &t).unwrap();
        let r = verify_emap(&e);
        assert!(r.ok, "{:?}", r.violations);
        let ix = ProofIndex::new(&d);
        // the q concluded from C and C -> q
        let upper = ix
            .resolve(&"premise.premise.premise.major.minor.premise".parse().unwrap())
            .unwrap();
        assert_eq!(ix.formula(upper), &f("q"));
        assert_eq!(e.vertices[upper], Some(7));
        let lower = ix.resolve(&"premise.premise.premise".parse().unwrap()).unwrap();
        assert_eq!(ix.formula(lower), &f("q"));
        assert_eq!(e.vertices[lower], Some(15));
        assert_eq!(count_epart_types(&e), 6);
        assert!(count_epart_types(&e) <= t.len());
        assert_eq!(e.notes.len(), 2);
    }

    #[test]
    fn sample_paths() {
        let d = mapped_sample();
        let t = SyntaxTree::build(d.conclusion());
        let e = build_emap(&d, &t).unwrap();
        let top: OccAddress = "premise.premise.premise.major.minor.premise.major.major.major"
            .parse()
            .unwrap();
        assert_eq!(epart_path(&e, &top).unwrap(), vec![1, 3, 5, 7]);
        let labels: Vec<_> = [1, 3, 5, 7].iter().map(|&v| t.label(v).clone()).collect();
        assert_eq!(labels, f("A -> B -> C -> q").right_spine());
    }

    #[test]
    fn mutations_are_caught() {
        let d = mapped_sample();
        let t = SyntaxTree::build(d.conclusion());
        let e = build_emap(&d, &t).unwrap();
        let ix = ProofIndex::new(&d);
        let upper = ix
            .resolve(&"premise.premise.premise.major.minor.premise".parse().unwrap())
            .unwrap();

        let mut unmapped = e.clone();
        unmapped.vertices[upper] = None;
        let r = verify_emap(&unmapped);
        assert!(r.violations.iter().any(|v| v.rule == EmapRule::EPartCoverage));

        // another q leaf: labels agree but the top-formula chain does not
        let mut moved = e.clone();
        moved.vertices[upper] = Some(12);
        let r = verify_emap(&moved);
        assert!(r.violations.iter().any(|v| v.rule == EmapRule::TopFormula));
    }

    #[test]
    fn map_json_round_trip() {
        let d = mapped_sample();
        let t = SyntaxTree::build(d.conclusion());
        let e = build_emap(&d, &t).unwrap();
        let m = e.map();
        let text = serde_json::to_string(&m).unwrap();
        assert!(text.starts_with("[{\"occ\":"));
        let back: OccVertexMap = serde_json::from_str(&text).unwrap();
        let e2 = EMappedProof::from_parts(d, t, &back).unwrap();
        assert_eq!(e2.vertices, e.vertices);
    }

    #[test]
    fn preconditions() {
        let d = Derivation::intro(1, f("a -> b"), Derivation::assume(f("a -> b"), 1));
        let t = SyntaxTree::build(d.conclusion());
        assert_eq!(build_emap(&d, &t).unwrap_err(), EmapError::NotExpanded);
        let other = SyntaxTree::build(&f("a"));
        assert!(matches!(
            build_emap(&d, &other),
            Err(EmapError::WrongTree { .. })
        ));
    }
}

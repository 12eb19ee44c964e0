use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::Formula;

/// Dense preorder index of a syntax-tree vertex.
pub type VertexId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("vertex {0} is not in the tree")]
    NoSuchVertex(VertexId),
    #[error("vertex {0} is not a leaf")]
    NotALeaf(VertexId),
    #[error("malformed syntax tree: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: VertexId,
    pub label: Formula,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<VertexId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<VertexId>,
}

/// Ordered full binary tree of subformula occurrences.
///
/// Vertices are numbered in preorder, so the root is always `0` and the
/// left subtree of `v` occupies the ids right after `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxTree {
    vertices: Vec<Vertex>,
    parents: Vec<Option<VertexId>>,
}

#[derive(Serialize, Deserialize)]
struct TreeJson {
    vertices: Vec<Vertex>,
    root: VertexId,
}

impl SyntaxTree {
    pub fn build(formula: &Formula) -> SyntaxTree {
        let mut vertices = Vec::with_capacity(formula.node_count());
        let mut parents = Vec::with_capacity(formula.node_count());
        fn go(
            f: &Formula,
            parent: Option<VertexId>,
            vs: &mut Vec<Vertex>,
            ps: &mut Vec<Option<VertexId>>,
        ) -> VertexId {
            let id = vs.len();
            vs.push(Vertex {
                id,
                label: f.clone(),
                left: None,
                right: None,
            });
            ps.push(parent);
            if let Formula::Imp(a, b) = f {
                let l = go(a, Some(id), vs, ps);
                let r = go(b, Some(id), vs, ps);
                vs[id].left = Some(l);
                vs[id].right = Some(r);
            }
            id
        }
        go(formula, None, &mut vertices, &mut parents);
        SyntaxTree { vertices, parents }
    }

    pub fn root(&self) -> VertexId {
        0
    }

    pub fn formula(&self) -> &Formula {
        &self.vertices[0].label
    }

    /// `‖T‖`, the number of vertices.
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, v: VertexId) -> Option<&Vertex> {
        self.vertices.get(v)
    }

    pub fn label(&self, v: VertexId) -> &Formula {
        &self.vertices[v].label
    }

    pub fn left(&self, v: VertexId) -> Option<VertexId> {
        self.vertices.get(v).and_then(|x| x.left)
    }

    pub fn right(&self, v: VertexId) -> Option<VertexId> {
        self.vertices.get(v).and_then(|x| x.right)
    }

    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        self.parents.get(v).copied().flatten()
    }

    pub fn is_left_child(&self, v: VertexId) -> bool {
        self.parent(v).is_some_and(|p| self.left(p) == Some(v))
    }

    pub fn is_right_child(&self, v: VertexId) -> bool {
        self.parent(v).is_some_and(|p| self.right(p) == Some(v))
    }

    pub fn leaves(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices
            .iter()
            .filter(|v| v.left.is_none())
            .map(|v| v.id)
    }

    /// Walks up reversed right edges from `leaf` and returns the first
    /// vertex that is a left child. The starting vertex counts, so a leaf
    /// that is itself a left child is returned unchanged. `None` means the
    /// leaf lies on the root's right spine.
    pub fn top_formula_vertex(&self, leaf: VertexId) -> Result<Option<VertexId>, TreeError> {
        let v = self.vertex(leaf).ok_or(TreeError::NoSuchVertex(leaf))?;
        if v.left.is_some() {
            return Err(TreeError::NotALeaf(leaf));
        }
        Ok(self.right_ancestral_left_child(leaf))
    }

    pub(crate) fn right_ancestral_left_child(&self, mut v: VertexId) -> Option<VertexId> {
        loop {
            if self.is_left_child(v) {
                return Some(v);
            }
            if !self.is_right_child(v) {
                return None;
            }
            v = self.parent(v)?;
        }
    }

    /// The chain `u, right(u), right(right(u)), ..` down to a leaf.
    pub fn right_chain(&self, u: VertexId) -> Vec<VertexId> {
        let mut out = vec![u];
        let mut cur = u;
        while let Some(r) = self.right(cur) {
            out.push(r);
            cur = r;
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(TreeJson {
            vertices: self.vertices.clone(),
            root: 0,
        })
        .expect("syntax tree serializes")
    }

    /// Loads a tree from its JSON form and checks that it is exactly the
    /// preorder syntax tree of its root label.
    pub fn from_json(value: &serde_json::Value) -> Result<SyntaxTree, TreeError> {
        let raw: TreeJson = serde_json::from_value(value.clone())
            .map_err(|e| TreeError::Malformed(e.to_string()))?;
        let root = raw
            .vertices
            .iter()
            .find(|v| v.id == raw.root)
            .ok_or(TreeError::NoSuchVertex(raw.root))?;
        let rebuilt = SyntaxTree::build(&root.label);
        let mut given = raw.vertices.clone();
        given.sort_by_key(|v| v.id);
        if raw.root != 0 || given != rebuilt.vertices {
            return Err(TreeError::Malformed(
                "vertices do not form the preorder syntax tree of the root label".into(),
            ));
        }
        Ok(rebuilt)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tree(s: &str) -> SyntaxTree {
        SyntaxTree::build(&s.parse().unwrap())
    }

    #[test]
    fn single_vertex() {
        let t = tree("q");
        assert_eq!(t.len(), 1);
        assert!(t.vertex(0).unwrap().left.is_none());
        assert_eq!(t.top_formula_vertex(0), Ok(None));
    }

    #[test]
    fn three_vertices_for_a_implies_c() {
        let t = tree("A -> C");
        assert_eq!(t.len(), 3);
        assert_eq!(t.label(1).to_string(), "A");
        assert_eq!(t.label(2).to_string(), "C");
        assert_eq!(t.left(0), Some(1));
        assert_eq!(t.right(0), Some(2));
    }

    #[test]
    fn labels_follow_children() {
        let t = tree("(A -> (B -> (C -> q))) -> (((A -> q) -> (D -> q)) -> (D -> q))");
        for v in t.vertices() {
            if let (Some(l), Some(r)) = (v.left, v.right) {
                let (a, b) = v.label.as_imp().unwrap();
                assert_eq!(t.label(l), a);
                assert_eq!(t.label(r), b);
            } else {
                assert!(v.label.is_atom());
            }
        }
        let q_leaves = t
            .leaves()
            .filter(|&v| t.label(v).to_string() == "q")
            .count();
        assert!(q_leaves >= 2);
    }

    #[test]
    fn top_formula_of_mapped_leaf() {
        let t = tree("(A -> (B -> (C -> q))) -> (((A -> q) -> (D -> q)) -> (D -> q))");
        // preorder: 0 root, 1 A->B->C->q, 2 A, 3 B->C->q, 4 B, 5 C->q, 6 C, 7 q
        assert_eq!(t.label(7).to_string(), "q");
        assert_eq!(t.top_formula_vertex(7), Ok(Some(1)));
        assert_eq!(t.label(1).to_string(), "A -> B -> C -> q");
        assert!(t.is_left_child(1));
        // the rightmost q is on the root's right spine
        let last = t.len() - 1;
        assert_eq!(t.top_formula_vertex(last), Ok(None));
        assert_eq!(t.top_formula_vertex(0), Err(TreeError::NotALeaf(0)));
        assert_eq!(t.top_formula_vertex(99), Err(TreeError::NoSuchVertex(99)));
    }

    #[test]
    fn top_formula_under_a_implies_q() {
        let t = tree("(A -> q) -> (D -> q)");
        // 0 root, 1 A->q, 2 A, 3 q, 4 D->q, 5 D, 6 q
        assert_eq!(t.top_formula_vertex(3), Ok(Some(1)));
        assert_eq!(t.label(1).to_string(), "A -> q");
        // a left leaf is its own top-formula vertex
        assert_eq!(t.top_formula_vertex(2), Ok(Some(2)));
    }

    #[test]
    fn json_round_trip() {
        let t = tree("A -> C");
        let j = t.to_json();
        assert_eq!(
            j,
            serde_json::json!({
                "vertices": [
                    {"id": 0, "label": "A -> C", "left": 1, "right": 2},
                    {"id": 1, "label": "A"},
                    {"id": 2, "label": "C"}
                ],
                "root": 0
            })
        );
        assert_eq!(SyntaxTree::from_json(&j).unwrap(), t);
        let mut bad = j.clone();
        bad["vertices"][1]["label"] = "B".into();
        assert!(SyntaxTree::from_json(&bad).is_err());
    }
}

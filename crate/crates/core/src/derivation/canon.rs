//! Hash-consed canonical keys for derivations.
//!
//! Hypotheses are keyed by de Bruijn index: `Some(k)` refers to the `k`-th
//! enclosing intro counting outward from 1, `None` is an open hypothesis.
//! Two derivations get the same id iff they are equal up to renaming of
//! discharge labels.

use std::collections::HashMap;

use crate::formula::Formula;

use super::{Derivation, ProofIndex};

pub(crate) type Id = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum Key {
    Hyp { formula: Id, index: Option<u32> },
    Intro { discharged: Id, body: Id },
    Elim { minor: Id, major: Id },
}

#[derive(Debug, Default)]
pub(crate) struct Canon {
    formulas: Vec<Formula>,
    formula_ids: HashMap<Formula, Id>,
    keys: Vec<Key>,
    key_ids: HashMap<Key, Id>,
    /// How many binders above the subterm its free indices reach.
    escape: Vec<u32>,
    anon_memo: HashMap<(Id, u32), Id>,
}

impl Canon {
    pub fn new() -> Canon {
        Canon::default()
    }

    pub fn formula_id(&mut self, f: &Formula) -> Id {
        if let Some(&i) = self.formula_ids.get(f) {
            return i;
        }
        let i = self.formulas.len() as Id;
        self.formulas.push(f.clone());
        self.formula_ids.insert(f.clone(), i);
        i
    }

    pub fn formula(&self, id: Id) -> &Formula {
        &self.formulas[id as usize]
    }

    pub fn key(&self, id: Id) -> Key {
        self.keys[id as usize]
    }

    pub fn intern(&mut self, key: Key) -> Id {
        if let Some(&i) = self.key_ids.get(&key) {
            return i;
        }
        let esc = match key {
            Key::Hyp { index, .. } => index.unwrap_or(0),
            Key::Intro { body, .. } => self.escape[body as usize].saturating_sub(1),
            Key::Elim { minor, major } => self.escape[minor as usize].max(self.escape[major as usize]),
        };
        let i = self.keys.len() as Id;
        self.keys.push(key);
        self.key_ids.insert(key, i);
        self.escape.push(esc);
        i
    }

    /// Full ids of every node of `ix`, in preorder. Hypotheses bound
    /// anywhere above keep their index, so ids of non-root nodes depend on
    /// their context.
    pub fn full_ids(&mut self, ix: &ProofIndex<'_>) -> Vec<Id> {
        let n = ix.len();
        let mut ids = vec![0; n];
        // depth of intro binders above each node
        let mut binders = vec![0u32; n];
        for i in 1..n {
            let p = ix.parent(i).unwrap();
            binders[i] = binders[p] + u32::from(ix.derivation(p).is_intro());
        }
        for i in (0..n).rev() {
            let key = match ix.derivation(i) {
                Derivation::Hyp { formula, .. } => Key::Hyp {
                    formula: self.formula_id(formula),
                    index: ix.get(i).binder.map(|b| binders[i] - binders[b]),
                },
                Derivation::Intro { discharged, .. } => {
                    let super::NodeKind::Intro { premise } = ix.kind(i) else {
                        unreachable!()
                    };
                    Key::Intro {
                        discharged: self.formula_id(discharged),
                        body: ids[premise],
                    }
                }
                Derivation::Elim { .. } => {
                    let super::NodeKind::Elim { minor, major } = ix.kind(i) else {
                        unreachable!()
                    };
                    Key::Elim {
                        minor: ids[minor],
                        major: ids[major],
                    }
                }
            };
            ids[i] = self.intern(key);
        }
        ids
    }

    /// Forgets the binding of every index that escapes `depth` binders.
    pub fn anonymize(&mut self, id: Id, depth: u32) -> Id {
        if self.escape[id as usize] <= depth {
            return id;
        }
        if let Some(&r) = self.anon_memo.get(&(id, depth)) {
            return r;
        }
        let r = crate::deep(|| match self.key(id) {
            Key::Hyp { formula, .. } => self.intern(Key::Hyp {
                formula,
                index: None,
            }),
            Key::Intro { discharged, body } => {
                let b = self.anonymize(body, depth + 1);
                self.intern(Key::Intro { discharged, body: b })
            }
            Key::Elim { minor, major } => {
                let a = self.anonymize(minor, depth);
                let b = self.anonymize(major, depth);
                self.intern(Key::Elim { minor: a, major: b })
            }
        });
        self.anon_memo.insert((id, depth), r);
        r
    }

    /// Instance ids: each subderivation taken on its own, with hypotheses
    /// bound outside it treated as open.
    pub fn instance_ids(&mut self, ix: &ProofIndex<'_>) -> Vec<Id> {
        let full = self.full_ids(ix);
        full.into_iter().map(|id| self.anonymize(id, 0)).collect()
    }

    pub fn instance_id(&mut self, d: &Derivation) -> Id {
        let ix = ProofIndex::new(d);
        let full = self.full_ids(&ix);
        self.anonymize(full[0], 0)
    }
}

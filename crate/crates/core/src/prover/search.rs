//! Contraction-free backward search for the implicational fragment with
//! proof-term extraction.
//!
//! Rules, for an atomic goal `q`:
//!
//! ```text
//!   Γ, A ⊢ A                                     (axiom)
//!   Γ, p, B ⊢ G        from  Γ, p, p -> B ⊢ G     (p atomic)
//!   Γ, D -> B ⊢ C -> D  and  Γ, B ⊢ G
//!                      give  Γ, (C -> D) -> B ⊢ G
//! ```
//!
//! and implications on the right are always introduced first. Every rule
//! makes the sequent smaller in the multiset order on formula weights, so
//! the search terminates without loop checks.

use std::collections::HashSet;
use std::rc::Rc;

use crate::derivation::Derivation;
use crate::formula::Formula;

/// Proof terms with sharing; expanded to a tree at the end.
#[derive(Debug)]
pub(super) enum Term {
    Var(u32, Formula),
    Lam(u32, Formula, Rc<Term>),
    App(Rc<Term>, Rc<Term>),
}

impl Term {
    /// Tree form. Shared subterms are copied, so labels may repeat until
    /// the caller renumbers them.
    pub(super) fn to_derivation(&self) -> Derivation {
        crate::deep(|| match self {
            Term::Var(l, f) => Derivation::assume(f.clone(), *l),
            Term::Lam(l, f, body) => Derivation::intro(*l, f.clone(), body.to_derivation()),
            Term::App(arg, fun) => Derivation::elim(arg.to_derivation(), fun.to_derivation())
                .expect("extracted terms are well typed"),
        })
    }
}

#[derive(Clone)]
struct Entry {
    formula: Formula,
    term: Rc<Term>,
}

pub(super) struct Search {
    next: u32,
    pub(super) steps: usize,
    limit: usize,
    failed: HashSet<(Vec<Formula>, Formula)>,
}

pub(super) struct OutOfBudget;

impl Search {
    pub(super) fn new(limit: usize) -> Search {
        Search {
            next: 0,
            steps: 0,
            limit,
            failed: HashSet::new(),
        }
    }

    fn fresh(&mut self) -> u32 {
        self.next += 1;
        self.next
    }

    pub(super) fn prove(&mut self, goal: &Formula) -> Result<Option<Rc<Term>>, OutOfBudget> {
        self.sequent(Vec::new(), goal)
    }

    fn sequent(&mut self, mut ctx: Vec<Entry>, goal: &Formula) -> Result<Option<Rc<Term>>, OutOfBudget> {
        crate::deep(|| {
            self.steps += 1;
            if self.steps > self.limit {
                return Err(OutOfBudget);
            }
            if let Some((a, b)) = goal.as_imp() {
                let l = self.fresh();
                push(
                    &mut ctx,
                    Entry {
                        formula: a.clone(),
                        term: Rc::new(Term::Var(l, a.clone())),
                    },
                );
                let body = self.sequent(ctx, b)?;
                return Ok(body.map(|t| Rc::new(Term::Lam(l, a.clone(), t))));
            }
            saturate(&mut ctx);
            if let Some(e) = ctx.iter().find(|e| &e.formula == goal) {
                return Ok(Some(e.term.clone()));
            }
            let key = (sorted(&ctx), goal.clone());
            if self.failed.contains(&key) {
                return Ok(None);
            }
            for i in 0..ctx.len() {
                let Some((cd, b)) = ctx[i].formula.as_imp() else {
                    continue;
                };
                let Some((c, d)) = cd.as_imp() else {
                    continue;
                };
                let (c, d, b) = (c.clone(), d.clone(), b.clone());
                let te = ctx[i].term.clone();
                let mut rest = ctx.clone();
                rest.remove(i);

                // D -> B is realised by  λd. e (λc. d)
                let ld = self.fresh();
                let lc = self.fresh();
                let k = Rc::new(Term::Lam(lc, c.clone(), Rc::new(Term::Var(ld, d.clone()))));
                let db = Rc::new(Term::Lam(ld, d.clone(), Rc::new(Term::App(k, te.clone()))));
                let mut left = rest.clone();
                push(
                    &mut left,
                    Entry {
                        formula: Formula::imp(d.clone(), b.clone()),
                        term: db,
                    },
                );
                let Some(p1) = self.sequent(left, cd)? else {
                    continue;
                };
                let mut right = rest;
                push(
                    &mut right,
                    Entry {
                        formula: b,
                        term: Rc::new(Term::App(p1, te)),
                    },
                );
                if let Some(t) = self.sequent(right, goal)? {
                    return Ok(Some(t));
                }
            }
            self.failed.insert(key);
            Ok(None)
        })
    }
}

/// Adds an entry unless an equal formula is already present.
fn push(ctx: &mut Vec<Entry>, e: Entry) {
    if !ctx.iter().any(|x| x.formula == e.formula) {
        ctx.push(e);
    }
}

/// Applies `p, p -> B  =>  p, B` until nothing changes.
fn saturate(ctx: &mut Vec<Entry>) {
    loop {
        let hit = ctx.iter().enumerate().find_map(|(i, e)| {
            let (p, _) = e.formula.as_imp()?;
            if !p.is_atom() {
                return None;
            }
            ctx.iter().position(|x| &x.formula == p).map(|j| (i, j))
        });
        let Some((i, j)) = hit else {
            return;
        };
        let e = ctx.remove(i);
        let arg = ctx[if j > i { j - 1 } else { j }].term.clone();
        let b = e.formula.consequent().unwrap().clone();
        push(
            ctx,
            Entry {
                formula: b,
                term: Rc::new(Term::App(arg, e.term)),
            },
        );
    }
}

fn sorted(ctx: &[Entry]) -> Vec<Formula> {
    let mut v: Vec<Formula> = ctx.iter().map(|e| e.formula.clone()).collect();
    v.sort();
    v
}

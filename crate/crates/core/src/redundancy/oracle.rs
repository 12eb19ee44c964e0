//! Exhaustive repeat counting on rendered subderivations. Shares no code
//! with the hash-consing used elsewhere, so it can cross-check it.

use std::collections::HashMap;
use std::fmt::Write;

use serde::Serialize;

use crate::derivation::{Derivation, Label, Level, OccAddress, ProofIndex};

use super::RedundancyError;

pub const DEFAULT_NODE_LIMIT: usize = 5000;

#[derive(Debug, Clone, Serialize)]
pub struct BruteForce {
    pub subderivation: Derivation,
    pub multiplicity: usize,
    /// Set when counting per level.
    pub level: Option<Level>,
    /// First occurrence in preorder.
    pub address: OccAddress,
    pub size: usize,
}

/// Text of `d` with intro labels numbered from the root of `d` and
/// hypotheses bound outside `d` written as open.
pub(crate) fn render(d: &Derivation) -> String {
    fn go(d: &Derivation, scope: &mut Vec<Label>, out: &mut String) {
        crate::deep(|| match d {
            Derivation::Hyp { formula, label } => {
                let pos = label.and_then(|l| scope.iter().rposition(|&s| s == l));
                match pos {
                    Some(k) => write!(out, "[{formula}#{k}]").unwrap(),
                    None => write!(out, "[{formula}#open]").unwrap(),
                }
            }
            Derivation::Intro {
                label,
                discharged,
                premise,
                ..
            } => {
                write!(out, "(I {{{discharged}}} ").unwrap();
                scope.push(*label);
                go(premise, scope, out);
                scope.pop();
                out.push(')');
            }
            Derivation::Elim { minor, major, .. } => {
                out.push_str("(E ");
                go(minor, scope, out);
                out.push(' ');
                go(major, scope, out);
                out.push(')');
            }
        })
    }
    let mut out = String::new();
    go(d, &mut Vec::new(), &mut out);
    out
}

/// Occurrences of `s` in `d` at `level`, or anywhere when `level` is `None`.
pub fn oracle_count(d: &Derivation, s: &Derivation, level: Option<Level>) -> usize {
    let target = render(s);
    let ix = ProofIndex::new(d);
    (0..ix.len())
        .filter(|&i| level.is_none_or(|l| ix.level(i) == l))
        .filter(|&i| render(ix.derivation(i)) == target)
        .count()
}

/// The most repeated subderivation of `d`. Ties go to the larger
/// subderivation, then to the earlier first occurrence.
pub fn brute_force_max_repeats(
    d: &Derivation,
    per_level: bool,
    limit: usize,
) -> Result<BruteForce, RedundancyError> {
    let ix = ProofIndex::new(d);
    if ix.len() > limit {
        return Err(RedundancyError::TooLarge {
            size: ix.len(),
            limit,
        });
    }
    // key -> (count, first occurrence)
    let mut counts: HashMap<(String, Option<Level>), (usize, usize)> = HashMap::new();
    for i in 0..ix.len() {
        let level = per_level.then(|| ix.level(i));
        let e = counts.entry((render(ix.derivation(i)), level)).or_insert((0, i));
        e.0 += 1;
    }
    let ((_, level), (multiplicity, first)) = counts
        .into_iter()
        .max_by(|(_, x), (_, y)| {
            x.0.cmp(&y.0)
                .then(ix.subtree_size(x.1).cmp(&ix.subtree_size(y.1)))
                .then(y.1.cmp(&x.1))
        })
        .expect("derivations have at least one node");
    Ok(BruteForce {
        subderivation: ix.derivation(first).relabel_canonical(),
        multiplicity,
        level,
        address: ix.address(first),
        size: ix.subtree_size(first),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula;

    fn f(s: &str) -> Formula {
        s.parse().unwrap()
    }

    #[test]
    fn identity() {
        let d = Derivation::intro(1, f("a"), Derivation::assume(f("a"), 1));
        let b = brute_force_max_repeats(&d, false, DEFAULT_NODE_LIMIT).unwrap();
        assert_eq!(b.multiplicity, 1);
        // tie broken towards the larger subderivation
        assert_eq!(b.size, 2);
        assert_eq!(b.address, OccAddress::root());
    }

    #[test]
    fn planted_subtree() {
        // k copies of `s = (λy. y) x` under a k-ary hypothesis
        let s = Derivation::elim(
            Derivation::hyp(f("a")),
            Derivation::intro(7, f("a"), Derivation::assume(f("a"), 7)),
        )
        .unwrap();
        for k in 2..6 {
            let g = Formula::from_spine(vec![f("a"); k], f("b"));
            let mut d = Derivation::hyp(g);
            for j in 0..k {
                let copy = Derivation::elim(
                    Derivation::hyp(f("a")),
                    Derivation::intro(10 + j as u32, f("a"), Derivation::assume(f("a"), 10 + j as u32)),
                )
                .unwrap();
                d = Derivation::elim(copy, d).unwrap();
            }
            assert_eq!(oracle_count(&d, &s, None), k);
            let b = brute_force_max_repeats(&d, false, DEFAULT_NODE_LIMIT).unwrap();
            // the open `a` and each bound `a` taken alone
            assert_eq!(b.multiplicity, 2 * k);
            assert_eq!(b.subderivation, Derivation::hyp(f("a")));
        }
    }

    #[test]
    fn open_and_bound_render_differently() {
        let bound = Derivation::intro(1, f("a"), Derivation::assume(f("a"), 1));
        let open = Derivation::intro(1, f("a"), Derivation::hyp(f("a")));
        assert_ne!(render(&bound), render(&open));
        let renamed = Derivation::intro(5, f("a"), Derivation::assume(f("a"), 5));
        assert_eq!(render(&bound), render(&renamed));
    }

    #[test]
    fn limit_is_enforced() {
        let d = Derivation::intro(1, f("a"), Derivation::assume(f("a"), 1));
        assert_eq!(
            brute_force_max_repeats(&d, true, 1).unwrap_err(),
            RedundancyError::TooLarge { size: 2, limit: 1 }
        );
    }
}

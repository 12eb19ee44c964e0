//! Small derivations used as reference points in tests, docs and the
//! shipped `fixtures/` directory.

use crate::derivation::Derivation;
use crate::formula::{Formula, SubformulaOrder};

fn f(s: &str) -> Formula {
    s.parse().expect("fixed formula")
}

fn ap(minor: Derivation, major: Derivation) -> Derivation {
    Derivation::elim(minor, major).expect("fixture is well typed")
}

/// `[A]¹`, `A -> B`, `B -> C` give `C`; discharging 1 gives `A -> C`.
pub fn chain() -> Derivation {
    let b = ap(Derivation::assume(f("A"), 1), Derivation::hyp(f("A -> B")));
    let c = ap(b, Derivation::hyp(f("B -> C")));
    Derivation::intro(1, f("A"), c)
}

/// `A -> (A -> A)` from the open assumption `A` by two vacuous intros.
pub fn vacuous() -> Derivation {
    Derivation::intro(1, f("A"), Derivation::intro(2, f("A"), Derivation::hyp(f("A"))))
}

/// `A -> (A -> A)` where the lower intro discharges and the upper is vacuous.
pub fn lower_discharge() -> Derivation {
    Derivation::intro(1, f("A"), Derivation::intro(2, f("A"), Derivation::assume(f("A"), 1)))
}

/// `A -> (A -> A)` where the upper intro discharges and the lower is vacuous.
pub fn upper_discharge() -> Derivation {
    Derivation::intro(1, f("A"), Derivation::intro(2, f("A"), Derivation::assume(f("A"), 2)))
}

/// Expanded normal proof of `(A -> B -> C -> q) -> ((A -> q) -> D -> q) -> D -> q`
/// with `B` and `C` left open.
pub fn mapped() -> Derivation {
    let top = Derivation::assume(f("A -> B -> C -> q"), 1);
    let bcq = ap(Derivation::assume(f("A"), 4), top);
    let cq = ap(Derivation::hyp(f("B")), bcq);
    let q = ap(Derivation::hyp(f("C")), cq);
    let aq = Derivation::intro(4, f("A"), q);
    let dq = ap(aq, Derivation::assume(f("(A -> q) -> D -> q"), 2));
    let q2 = ap(Derivation::assume(f("D"), 3), dq);
    let i3 = Derivation::intro(3, f("D"), q2);
    let i2 = Derivation::intro(2, f("(A -> q) -> D -> q"), i3);
    Derivation::intro(1, f("A -> B -> C -> q"), i2)
}

/// Subformula order for the dependency bitstrings of [`chain`]:
/// `A, B, C, A -> B, B -> C, A -> C`.
pub fn chain_order() -> SubformulaOrder {
    SubformulaOrder::with_order(
        &[f("A -> C"), f("A -> B"), f("B -> C")],
        ["A", "B", "C", "A -> B", "B -> C", "A -> C"].iter().map(|s| f(s)).collect(),
    )
    .expect("order lists every subformula once")
}

/// Bitstrings of the conclusion and of its premise under [`chain_order`].
pub const CHAIN_BITS: [(&str, &str); 2] = [("root", "000110"), ("premise", "100110")];

/// Every fixture with its file stem.
pub fn all() -> Vec<(&'static str, Derivation)> {
    vec![
        ("chain", chain()),
        ("vacuous", vacuous()),
        ("lower-discharge", lower_discharge()),
        ("upper-discharge", upper_discharge()),
        ("mapped", mapped()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::{check_derivation, dependency_sets, greedy_discharge, metrics, open_assumptions};

    #[test]
    fn all_check() {
        for (name, d) in all() {
            assert!(check_derivation(&d).ok, "{name}");
        }
    }

    #[test]
    fn chain_facts() {
        let d = chain();
        let m = metrics(&d);
        assert_eq!((m.size_nodes, m.height), (6, 3));
        let open: Vec<_> = open_assumptions(&d).unwrap().into_keys().collect();
        assert_eq!(open, [f("A -> B"), f("B -> C")]);
        let ord = chain_order();
        let deps = dependency_sets(&d);
        for (addr, bits) in CHAIN_BITS {
            let set = &deps.iter().find(|(a, _)| a.to_string() == addr).unwrap().1;
            assert_eq!(ord.encode(set).unwrap().to_string(), bits);
        }
    }

    #[test]
    fn discharge_variants() {
        assert_eq!(open_assumptions(&vacuous()).unwrap().into_keys().collect::<Vec<_>>(), [f("A")]);
        assert_eq!(greedy_discharge(&lower_discharge()).unwrap(), upper_discharge());
    }
}

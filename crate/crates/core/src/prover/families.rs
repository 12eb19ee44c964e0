use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::derivation::{Derivation, OccAddress, ProofIndex};
use crate::formula::Formula;

use super::{decide_and_prove_with, gen_random_formulas, ProverError};

/// Heights of `blowup` members stay within this multiple of `m`.
pub const BLOWUP_HEIGHT_FACTOR: u64 = 5;
/// Heights of `deep` members stay within this multiple of `m^2`.
pub const DEEP_HEIGHT_FACTOR: u64 = 5;

const MAX_FAMILY_NODES: u128 = 20_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `λf.λx. t_k` with `t_0 = x`, `t_j = f t_{j-1} t_{j-1}`; copies of
    /// `x` spread over levels, height linear in `k`.
    Blowup,
    /// `λf.λh.λx. t_k` with `t_j = f (h^m t_{j-1}) (h^(m+1) t_{j-1})`;
    /// all copies of `t_{j-1}` inside `t_j` sit at one level.
    Deep,
    /// Random terms over `f : q -> q -> q`, `h : q -> q`, `x : q`.
    Random,
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Family, String> {
        match s {
            "blowup" => Ok(Family::Blowup),
            "deep" => Ok(Family::Deep),
            "random" => Ok(Family::Random),
            _ => Err(format!("unknown family `{s}` (expected blowup, deep or random)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub m: u64,
    /// Defaults to 4 for `blowup`, 5 for `deep` and 2 for `random`.
    pub p: Option<u32>,
    pub seed: u64,
    /// Number of members; only `random` produces more than one.
    pub members: usize,
}

impl FamilySpec {
    pub fn new(family: Family, m: u64, p: u32) -> FamilySpec {
        FamilySpec {
            family,
            m,
            p: Some(p),
            seed: 0,
            members: 1,
        }
    }

    pub fn exponent(&self) -> u32 {
        self.p.unwrap_or(match self.family {
            Family::Blowup => 4,
            Family::Deep => 5,
            Family::Random => 2,
        })
    }
}

fn f(s: &str) -> Formula {
    s.parse().expect("fixed formula")
}

fn ap(minor: Derivation, major: Derivation) -> Derivation {
    Derivation::elim(minor, major).expect("family terms are well typed")
}

pub fn gen_redundant_family(spec: &FamilySpec) -> Result<Vec<(Formula, Derivation)>, ProverError> {
    if spec.m < 2 {
        return Err(ProverError::Infeasible(format!("m = {} must be at least 2", spec.m)));
    }
    let p = spec.exponent();
    if p == 0 {
        return Err(ProverError::Infeasible("p must be at least 1".into()));
    }
    let m = spec.m as u128;
    let target = m.checked_pow(p).filter(|&t| t < MAX_FAMILY_NODES).ok_or_else(|| {
        ProverError::Infeasible(format!("{}^{p} nodes is beyond the generator's range", spec.m))
    })?;
    let out = match spec.family {
        Family::Blowup => {
            let mut k = 0u32;
            while (1u128 << k) <= target {
                k += 1;
            }
            let height = 2 * u128::from(k) + 2;
            let bound = u128::from(BLOWUP_HEIGHT_FACTOR) * m;
            if height > bound {
                return Err(ProverError::Infeasible(format!(
                    "blowup({}, {p}) needs height {height} > {BLOWUP_HEIGHT_FACTOR} * {} = {bound}",
                    spec.m, spec.m
                )));
            }
            vec![blowup(k as usize)]
        }
        Family::Deep => {
            let mut k = 0usize;
            let mut size: u128 = 1;
            while size + 3 <= target {
                size = 2 * size + 4 * m + 5;
                k += 1;
            }
            let height = 3 + k as u128 * (m + 2);
            let bound = u128::from(DEEP_HEIGHT_FACTOR) * m * m;
            if height > bound {
                return Err(ProverError::Infeasible(format!(
                    "deep({}, {p}) needs height {height} > {DEEP_HEIGHT_FACTOR} * {}^2 = {bound}",
                    spec.m, spec.m
                )));
            }
            vec![deep(spec.m as usize, k)]
        }
        Family::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            (0..spec.members)
                .map(|_| {
                    let budget = rng.gen_range(1..=target as usize);
                    random_member(&mut rng, budget)
                })
                .collect()
        }
    };
    Ok(out)
}

fn blowup(k: usize) -> (Formula, Derivation) {
    let fun = || Derivation::assume(f("q -> q -> q"), 1);
    let mut t = Derivation::assume(f("q"), 2);
    for _ in 0..k {
        t = ap(t.clone(), ap(t, fun()));
    }
    let d = Derivation::intro(1, f("q -> q -> q"), Derivation::intro(2, f("q"), t));
    (d.conclusion().clone(), d)
}

fn deep(m: usize, k: usize) -> (Formula, Derivation) {
    let fun = || Derivation::assume(f("q -> q -> q"), 1);
    let h = |mut t: Derivation, n: usize| {
        for _ in 0..n {
            t = ap(t, Derivation::assume(f("q -> q"), 3));
        }
        t
    };
    let mut t = Derivation::assume(f("q"), 2);
    for _ in 0..k {
        let inner = ap(h(t.clone(), m), fun());
        t = ap(h(t, m + 1), inner);
    }
    let d = Derivation::intro(
        1,
        f("q -> q -> q"),
        Derivation::intro(3, f("q -> q"), Derivation::intro(2, f("q"), t)),
    );
    (d.conclusion().clone(), d)
}

fn random_term(rng: &mut ChaCha8Rng, budget: usize) -> Derivation {
    crate::deep(|| {
        if budget < 3 {
            return Derivation::assume(f("q"), 2);
        }
        if budget < 5 || rng.gen_bool(1.0 / 3.0) {
            let t = random_term(rng, budget - 2);
            return ap(t, Derivation::assume(f("q -> q"), 3));
        }
        let left = rng.gen_range(1..=budget - 4);
        let a = random_term(rng, left);
        let b = random_term(rng, budget - 3 - left);
        ap(b, ap(a, Derivation::assume(f("q -> q -> q"), 1)))
    })
}

fn random_member(rng: &mut ChaCha8Rng, budget: usize) -> (Formula, Derivation) {
    let t = random_term(rng, budget.saturating_sub(3).max(1));
    let d = Derivation::intro(
        1,
        f("q -> q -> q"),
        Derivation::intro(3, f("q -> q"), Derivation::intro(2, f("q"), t)),
    );
    (d.conclusion().clone(), d)
}

/// Inserts `count` redexes by beta-expansion: a subderivation `Π` becomes
/// `(λx. Π[x/Σ]) Σ` for a subderivation `Σ` of `Π`, or `(λx. Π) Σ` with
/// `x` vacuous. Formulas of the new redexes stay within `max_symbols`.
pub fn plant_redexes(d: &Derivation, rng: &mut impl Rng, count: usize, max_symbols: usize) -> Derivation {
    let mut cur = d.relabel_canonical();
    let mut planted = 0;
    let mut attempts = 0;
    while planted < count && attempts < 50 * count.max(1) {
        attempts += 1;
        let ix = ProofIndex::new(&cur);
        let i = rng.gen_range(0..ix.len());
        let j = rng.gen_range(i..ix.get(i).end);
        // Σ may only use hypotheses bound above Π
        let ok = (j..ix.get(j).end).all(|k| ix.get(k).binder.is_none_or(|b| !ix.contains(i, b)));
        let a = ix.formula(i).clone();
        let c = ix.formula(j).clone();
        let redex = Formula::imp(c.clone(), a.clone());
        if !ok || redex.symbol_count() > max_symbols {
            continue;
        }
        let pi = ix.derivation(i).clone();
        let sigma = ix.derivation(j).clone();
        let addr_i = ix.address(i);
        let fresh = cur.max_label() + 1;
        let body = if rng.gen_bool(0.5) {
            let rel = OccAddress(ix.address(j).0[addr_i.0.len()..].to_vec());
            let mut body = pi;
            *body.at_mut(&rel).expect("address inside Π") = Derivation::assume(c.clone(), fresh);
            body
        } else {
            pi
        };
        let new = Derivation::elim(sigma, Derivation::intro(fresh, c, body)).expect("types agree");
        drop(ix);
        *cur.at_mut(&addr_i).expect("address of Π") = new;
        cur = cur.relabel_canonical();
        planted += 1;
    }
    cur
}

/// Seeded corpus: proofs of random provable formulas (some with outer
/// discharges removed, leaving open assumptions) with 1 to 3 redexes
/// planted in each. All formulas stay within 30 symbols.
pub fn planted_corpus(count: usize, seed: u64) -> Vec<Derivation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut batch = 0u64;
    while out.len() < count {
        let formulas = gen_random_formulas(20, 64, seed.wrapping_mul(1_000_003).wrapping_add(batch));
        batch += 1;
        for g in formulas {
            if out.len() == count {
                break;
            }
            let Ok(Some(mut d)) = decide_and_prove_with(&g, 100_000) else {
                continue;
            };
            if rng.gen_bool(0.25) {
                let mut strip = rng.gen_range(1..=3);
                while strip > 0 {
                    let Derivation::Intro { premise, .. } = &d else {
                        break;
                    };
                    let p = (**premise).clone();
                    d = p;
                    strip -= 1;
                }
                d = d.relabel_canonical();
            }
            let n = rng.gen_range(1..=3);
            out.push(plant_redexes(&d, &mut rng, n, 30));
        }
    }
    out
}

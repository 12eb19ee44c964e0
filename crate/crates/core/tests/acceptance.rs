//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion;
//! `cargo test --test acceptance -- --nocapture` shows them.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use mimp_core::branch::{branch_reports, enumerate_branches, epart_from_top};
use mimp_core::compress::{from_dag, to_dag};
use mimp_core::derivation::{
    check_derivation, dependency_sets, metrics, open_assumptions, Derivation,
};
use mimp_core::emap::{build_emap, count_epart_types, verify_emap, EMappedProof};
use mimp_core::fixtures;
use mimp_core::formula::{Formula, SyntaxTree};
use mimp_core::prover::{
    decide_and_prove, decide_and_prove_with, gen_random_formulas, gen_redundant_family,
    planted_corpus, Family, FamilySpec, BLOWUP_HEIGHT_FACTOR, DEEP_HEIGHT_FACTOR,
};
use mimp_core::redundancy::{
    brute_force_max_repeats, count_at_level, find_redundant, growth_fit_proofs, ipow,
    oracle_count, pump_subderivation, spread_check, Bounds, RedundancyError, DEFAULT_NODE_LIMIT,
};
use mimp_core::transform::{expand, find_maximal_formulas, is_expanded, is_normal, normalize};

const CORPUS: usize = 1000;
const SEED: u64 = 2024;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn f(s: &str) -> Formula {
    s.parse().unwrap()
}

fn open_set(d: &Derivation) -> BTreeSet<Formula> {
    open_assumptions(d).unwrap().into_keys().collect()
}

fn emapped(d: &Derivation) -> EMappedProof {
    build_emap(d, &SyntaxTree::build(d.conclusion())).expect("family proofs map")
}

fn within(t: Instant, limit: Duration) -> Result<(), String> {
    ensure(t.elapsed() < limit, || format!("took {:?}, limit {:?}", t.elapsed(), limit))
}

struct Corpus {
    planted: Vec<Derivation>,
    normal: Vec<Derivation>,
    expanded: Vec<Derivation>,
}

fn reference_fixtures() -> Outcome {
    let t = Instant::now();
    for (name, d) in fixtures::all() {
        ensure(check_derivation(&d).ok, || format!("{name} fails check"))?;
    }
    let d = fixtures::chain();
    let ord = fixtures::chain_order();
    let deps = dependency_sets(&d);
    for (addr, want) in fixtures::CHAIN_BITS {
        let set = &deps.iter().find(|(a, _)| a.to_string() == addr).unwrap().1;
        let got = ord.encode(set).unwrap().to_string();
        ensure(got == want, || format!("{addr}: {got} != {want}"))?;
    }
    within(t, Duration::from_secs(1))?;
    Ok(format!("{} fixtures check, bitstrings 000110/100110", fixtures::all().len()))
}

fn normalization(c: &Corpus, elapsed: Duration) -> Outcome {
    ensure(c.planted.len() >= 1000, || "corpus too small".into())?;
    ensure(c.planted.iter().all(|d| !is_normal(d)), || "a corpus proof has no redex".into())?;
    let mut closed = 0;
    for (i, (d, n)) in c.planted.iter().zip(&c.normal).enumerate() {
        ensure(check_derivation(n).ok, || format!("#{i}: result fails check"))?;
        ensure(find_maximal_formulas(n).is_empty(), || format!("#{i}: maximal formula left"))?;
        ensure(n.conclusion() == d.conclusion(), || format!("#{i}: conclusion changed"))?;
        ensure(open_set(n).is_subset(&open_set(d)), || format!("#{i}: new open assumption"))?;
        if open_set(n).is_empty() {
            closed += 1;
            let subs = n.conclusion().subformulas();
            let mut bad = false;
            n.visit(&mut |s| bad |= !subs.contains(s.conclusion()));
            ensure(!bad, || format!("#{i}: subformula principle fails"))?;
        }
    }
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("{} proofs ({closed} closed) normalized in {elapsed:.2?}", c.planted.len()))
}

fn expansion(c: &Corpus) -> Outcome {
    for (i, (n, x)) in c.normal.iter().zip(&c.expanded).enumerate() {
        ensure(check_derivation(x).ok, || format!("#{i}: expanded fails check"))?;
        ensure(is_normal(x) && is_expanded(x), || format!("#{i}: non-atomic minimal formula"))?;
        ensure(x.conclusion() == n.conclusion(), || format!("#{i}: conclusion changed"))?;
        ensure(open_set(x) == open_set(n), || format!("#{i}: assumptions changed"))?;
    }
    Ok(format!("{} proofs expanded", c.expanded.len()))
}

fn eparts(c: &Corpus) -> Outcome {
    let mut branches = 0;
    for (i, x) in c.expanded.iter().enumerate() {
        for r in branch_reports(x) {
            let split = r.split.as_ref().ok_or_else(|| format!("#{i}: branch does not split"))?;
            let mut seq: Vec<Formula> =
                split.e_part.iter().map(|a| x.at(a).unwrap().conclusion().clone()).collect();
            seq.push(x.at(&split.minimal).unwrap().conclusion().clone());
            let want = epart_from_top(&r.formulas[0]);
            ensure(seq == want, || format!("#{i}: E-part {seq:?} != {want:?}"))?;
            branches += 1;
        }
    }
    Ok(format!("{branches} branches match their top formula"))
}

fn emap_bound(c: &Corpus) -> Outcome {
    let mut mapped = 0;
    for (i, x) in c.expanded.iter().enumerate() {
        let tree = SyntaxTree::build(x.conclusion());
        let Ok(e) = build_emap(x, &tree) else { continue };
        mapped += 1;
        let report = verify_emap(&e);
        ensure(report.ok, || format!("#{i}: verify_emap: {:?}", report.violations))?;
        let types = count_epart_types(&e);
        ensure(types <= tree.len(), || format!("#{i}: {types} E-part types > {}", tree.len()))?;
    }
    ensure(mapped > 0, || "no corpus proof mapped".into())?;
    Ok(format!("{mapped}/{} proofs mapped and verified", c.expanded.len()))
}

fn pigeonhole() -> Outcome {
    let mut checked = 0;
    for m in [3u64, 4, 5] {
        for p in [1u32, 2] {
            let (_, d) = gen_redundant_family(&FamilySpec::new(Family::Blowup, m, p))
                .map_err(|e| e.to_string())?
                .remove(0);
            let e = emapped(&d);
            let bounds = Bounds::new(p, 1).with_m(m).with_height_factor(BLOWUP_HEIGHT_FACTOR);
            let levels = metrics(&d).levels;
            let mut hit = false;
            for b in enumerate_branches(&d) {
                let Some(s) = spread_check(&e, &b, &bounds).map_err(|e| e.to_string())? else {
                    continue;
                };
                hit = true;
                let threshold = ipow(m, i64::from(p) - 1);
                let recount = s
                    .instances
                    .iter()
                    .filter(|a| levels.iter().any(|(x, l)| x == *a && *l == s.level))
                    .count();
                ensure(recount == s.count_at_level, || {
                    format!("blowup({m},{p}): recount {recount} != {}", s.count_at_level)
                })?;
                ensure(s.threshold == threshold && recount as u128 >= threshold, || {
                    format!("blowup({m},{p}): {recount} < {m}^{}", p - 1)
                })?;
                let pumped = pump_subderivation(&e, &b, &s.instances).map_err(|e| e.to_string())?;
                let again = count_at_level(&d, &pumped.subderivation, pumped.level);
                ensure(again == pumped.multiplicity, || {
                    format!("blowup({m},{p}): pumped {} recounted {again}", pumped.multiplicity)
                })?;
            }
            ensure(hit, || format!("blowup({m},{p}): no branch exceeds {m}^{p} instances"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} members meet m^(p-1)"))
}

/// Runs the search on one family member and confirms it against the oracle.
fn theorem_member(d: &Derivation, bounds: Bounds, threshold: u128, extra: Option<u128>) -> Outcome {
    let e = emapped(d);
    let r = find_redundant(&e, &bounds).map_err(|e| e.to_string())?;
    let m = bounds.m.unwrap();
    ensure(r.size_nodes as u128 > ipow(m, i64::from(bounds.p)), || "size not above m^p".into())?;
    ensure(
        r.height as u128 <= u128::from(bounds.height_factor) * ipow(m, i64::from(bounds.q)),
        || "height above c*m^q".into(),
    )?;
    ensure(r.witness_threshold == threshold, || {
        format!("threshold {} != {threshold}", r.witness_threshold)
    })?;
    let recount = count_at_level(d, &r.subderivation, r.level);
    let oracle = oracle_count(d, &r.subderivation, Some(r.level));
    ensure(recount == r.multiplicity && oracle == r.multiplicity, || {
        format!("multiplicity {} recount {recount} oracle {oracle}", r.multiplicity)
    })?;
    ensure(r.multiplicity as u128 >= threshold, || {
        format!("multiplicity {} < {threshold}", r.multiplicity)
    })?;
    if let Some(x) = extra {
        ensure(r.multiplicity as u128 >= x, || format!("multiplicity {} < {x}", r.multiplicity))?;
    }
    let bf = brute_force_max_repeats(d, true, DEFAULT_NODE_LIMIT).map_err(|e| e.to_string())?;
    ensure(bf.multiplicity >= r.multiplicity, || {
        format!("brute force {} < {}", bf.multiplicity, r.multiplicity)
    })?;
    Ok(format!(
        "size {} height {} mult {} (brute force {}) >= {threshold}",
        r.size_nodes, r.height, r.multiplicity, bf.multiplicity
    ))
}

fn theorem_main() -> Outcome {
    let t = Instant::now();
    let mut lines = Vec::new();
    for (m, literal) in [(4u64, 4u128), (5, 25)] {
        let (_, d) = gen_redundant_family(&FamilySpec::new(Family::Blowup, m, 4))
            .map_err(|e| e.to_string())?
            .remove(0);
        let bounds = Bounds::new(4, 1).with_m(m).with_height_factor(BLOWUP_HEIGHT_FACTOR);
        let line = theorem_member(&d, bounds, ipow(m, 1), Some(literal))
            .map_err(|e| format!("blowup({m},4): {e}"))?;
        lines.push(format!("blowup({m},4): {line}"));
    }
    within(t, Duration::from_secs(300))?;
    Ok(lines.join("; "))
}

fn theorem_general() -> Outcome {
    let mut lines = Vec::new();
    for p in [6u32, 7] {
        let (_, d) = gen_redundant_family(&FamilySpec::new(Family::Deep, 3, p))
            .map_err(|e| e.to_string())?
            .remove(0);
        let bounds = Bounds::new(p, 2).with_m(3).with_height_factor(DEEP_HEIGHT_FACTOR);
        let threshold = ipow(3, i64::from(p) - 5);
        let line = theorem_member(&d, bounds, threshold, None)
            .map_err(|e| format!("deep(3,{p}): {e}"))?;
        lines.push(format!("deep(3,{p}): {line}"));
    }
    Ok(lines.join("; "))
}

fn oracle_agreement() -> Outcome {
    let spec = FamilySpec {
        seed: SEED,
        members: 200,
        ..FamilySpec::new(Family::Random, 20, 2)
    };
    let family = gen_redundant_family(&spec).map_err(|e| e.to_string())?;
    ensure(family.len() == 200, || "wrong member count".into())?;
    let bounds = Bounds::new(4, 1).with_m(2).with_height_factor(20);
    let (mut held, mut unmet, mut none) = (0, 0, 0);
    for (i, (_, d)) in family.iter().enumerate() {
        ensure(d.size() <= 400, || format!("#{i}: {} nodes", d.size()))?;
        let e = emapped(d);
        match find_redundant(&e, &bounds) {
            Ok(r) => {
                held += 1;
                let bf = brute_force_max_repeats(d, true, DEFAULT_NODE_LIMIT).map_err(|e| e.to_string())?;
                ensure(r.multiplicity <= bf.multiplicity, || {
                    format!("#{i}: {} > brute force {}", r.multiplicity, bf.multiplicity)
                })?;
                let recount = count_at_level(d, &r.subderivation, r.level);
                let oracle = oracle_count(d, &r.subderivation, Some(r.level));
                ensure(recount == r.multiplicity && oracle == r.multiplicity, || {
                    format!("#{i}: {} recount {recount} oracle {oracle}", r.multiplicity)
                })?;
            }
            Err(RedundancyError::HypothesesUnmet(_)) => unmet += 1,
            Err(RedundancyError::NoWitness { .. }) => none += 1,
            Err(e) => return Err(format!("#{i}: {e}")),
        }
    }
    ensure(held > 0, || "hypotheses never held".into())?;
    Ok(format!("{held} agree, {unmet} outside hypotheses, {none} without witness"))
}

fn compression(c: &Corpus) -> Outcome {
    for (i, d) in c.planted.iter().chain(&c.normal).chain(&c.expanded).enumerate() {
        let back = from_dag(&to_dag(d)).map_err(|e| format!("#{i}: {e}"))?;
        ensure(back.alpha_eq(d), || format!("#{i}: round trip differs"))?;
    }
    let (_, d) = gen_redundant_family(&FamilySpec::new(Family::Blowup, 4, 4))
        .map_err(|e| e.to_string())?
        .remove(0);
    let g = to_dag(&d);
    let ratio = g.len() as f64 / d.size() as f64;
    ensure(ratio < 0.5, || format!("ratio {ratio:.3}"))?;
    Ok(format!(
        "{} round trips; blowup(4,4) {} -> {} nodes ({:.2}%)",
        3 * c.planted.len(),
        d.size(),
        g.len(),
        100.0 * ratio
    ))
}

fn emitted_ok(goal: &Formula, d: &Derivation) -> Result<(), String> {
    ensure(check_derivation(d).ok, || format!("{goal}: proof fails check"))?;
    ensure(d.conclusion() == goal, || format!("{goal}: wrong conclusion"))?;
    ensure(is_normal(d) && is_expanded(d), || format!("{goal}: not expanded normal"))?;
    ensure(open_set(d).is_empty(), || format!("{goal}: open assumptions"))
}

fn elim_chain(k: usize) -> Derivation {
    let mut t = Derivation::hyp(f("q"));
    for _ in 0..k {
        t = Derivation::elim(t, Derivation::hyp(f("q -> q"))).unwrap();
    }
    t
}

fn prover() -> Outcome {
    for s in [
        "a -> a",
        "a -> b -> a",
        "(a -> b -> c) -> (a -> b) -> a -> c",
        "(b -> c) -> (a -> b) -> a -> c",
        "(a -> b -> c) -> b -> a -> c",
    ] {
        let goal = f(s);
        let d = decide_and_prove(&goal).map_err(|e| e.to_string())?.ok_or(format!("{s} not proved"))?;
        emitted_ok(&goal, &d)?;
    }
    let peirce = f("((a -> b) -> a) -> a");
    ensure(decide_and_prove(&peirce).map_err(|e| e.to_string())?.is_none(), || {
        "Peirce proved".into()
    })?;
    let (mut proved, mut refuted) = (0, 0);
    for goal in gen_random_formulas(15, 300, SEED) {
        match decide_and_prove_with(&goal, 100_000) {
            Ok(Some(d)) => {
                emitted_ok(&goal, &d)?;
                proved += 1;
            }
            Ok(None) => refuted += 1,
            Err(_) => {}
        }
    }
    let family: Vec<(u64, Derivation)> =
        (3..=21).step_by(2).map(|m| (m, elim_chain((m * m - 1) as usize / 2))).collect();
    let fit = growth_fit_proofs(&family).map_err(|e| e.to_string())?;
    ensure((fit.exponent - 2.0).abs() <= 0.05, || format!("exponent {:.4}", fit.exponent))?;
    Ok(format!(
        "I K S B C proved, Peirce refuted, {proved} random proofs valid ({refuted} refuted), fit exponent {:.4}",
        fit.exponent
    ))
}

#[test]
fn acceptance() {
    let t = Instant::now();
    let planted = planted_corpus(CORPUS, SEED);
    let built = t.elapsed();
    let t = Instant::now();
    let normal: Vec<Derivation> = planted.iter().map(normalize).collect();
    let elapsed = t.elapsed();
    let expanded: Vec<Derivation> = normal.iter().map(|n| expand(n).expect("normal input")).collect();
    let corpus = Corpus { planted, normal, expanded };
    println!("corpus of {CORPUS} built in {built:.2?}");

    let results: Vec<(&str, Outcome)> = vec![
        ("1 reference fixtures", reference_fixtures()),
        ("2 normalization", normalization(&corpus, elapsed)),
        ("3 expanded form", expansion(&corpus)),
        ("4 E-part determinism", eparts(&corpus)),
        ("5 E-map bound", emap_bound(&corpus)),
        ("6 pigeonhole", pigeonhole()),
        ("7 redundancy, q = 1", theorem_main()),
        ("8 redundancy, q = 2", theorem_general()),
        ("9 oracle agreement", oracle_agreement()),
        ("10 compression", compression(&corpus)),
        ("11 prover", prover()),
    ];
    let mut failed = Vec::new();
    for (name, r) in &results {
        match r {
            Ok(msg) => println!("PASS  {name}: {msg}"),
            Err(msg) => {
                println!("FAIL  {name}: {msg}");
                failed.push(*name);
            }
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}

//! Acceptance suite: one pass/fail line per criterion, non-zero exit on any
//! failure.

mod common;

use std::time::{Duration, Instant};

use belief_fusion::cli::run_cli;
use belief_fusion::{
    bel, belief_interval, check_associativity, conflict_degree, conjunctive, decide, fuse_sequential, krc, pl,
    DecisionKind, MassFunction, RuleSpec, Subset,
};
use common::*;
use itertools::Itertools;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn within(name: &str, value: f64, expected: f64, tol: f64) -> Result<(), String> {
    if (value - expected).abs() <= tol {
        Ok(())
    } else {
        Err(format!("{name} = {value}, expected {expected} ± {tol}"))
    }
}

fn at_most(name: &str, value: f64, bound: f64) -> Result<(), String> {
    if value <= bound {
        Ok(())
    } else {
        Err(format!("{name} = {value:e} exceeds {bound:e}"))
    }
}

fn in_time(start: Instant, limit: Duration) -> Result<Duration, String> {
    let elapsed = start.elapsed();
    if elapsed < limit {
        Ok(elapsed)
    } else {
        Err(format!("took {elapsed:?}, limit {limit:?}"))
    }
}

const A: Subset = Subset::from_bits(0b01);
const B: Subset = Subset::from_bits(0b10);
const AB: Subset = Subset::from_bits(0b11);

fn table_reproduction() -> Outcome {
    let start = Instant::now();
    let out = run_cli(["belief-fusion", "repro-paper", "--format", "json"]);
    if out.code != 0 {
        return Err(format!("repro-paper exited {}: {}", out.code, out.stderr));
    }
    let v: serde_json::Value = serde_json::from_str(&out.stdout).map_err(|e| e.to_string())?;
    let mass = |side: &str, labels: &[&str]| -> f64 {
        v[side]["entries"]
            .as_array()
            .unwrap()
            .iter()
            .find(|e| e["subset"].as_array().unwrap().iter().map(|s| s.as_str().unwrap()).collect::<Vec<_>>() == labels)
            .map_or(0.0, |e| e["mass"].as_f64().unwrap())
    };
    for (labels, l, r) in [
        (&["A"][..], 0.4339, 0.2695),
        (&["B"][..], 0.2711, 0.2917),
        (&["A", "B"][..], 0.2950, 0.4388),
    ] {
        within(&format!("left {labels:?}"), mass("left", labels), l, 5e-4)?;
        within(&format!("right {labels:?}"), mass("right", labels), r, 5e-4)?;
    }
    let t = in_time(start, Duration::from_secs(1))?;
    Ok(format!("both columns within 5e-4 in {t:?}"))
}

fn intermediate_values() -> Outcome {
    let (_, [m1, m2, m3]) = worked_example();
    within("K12", conflict_degree(&m1, &m2).unwrap(), 0.58, 1e-12)?;
    within("K23", conflict_degree(&m2, &m3).unwrap(), 0.28, 1e-12)?;
    let c12 = conjunctive(&m1, &m2).unwrap();
    within("m12(A)", c12.mass(A), 0.26, 1e-12)?;
    within("m12(B)", c12.mass(B), 0.15, 1e-12)?;
    let k12 = krc(&m1, &m2, 0.2).unwrap();
    let k23 = krc(&m2, &m3, 0.2).unwrap();
    for (name, m, x, e) in [
        ("krc12(A)", &k12, A, 0.2941),
        ("krc12(B)", &k12, B, 0.1697),
        ("krc12(AB)", &k12, AB, 0.5362),
        ("krc23(A)", &k23, A, 0.6356),
        ("krc23(B)", &k23, B, 0.0953),
        ("krc23(AB)", &k23, AB, 0.2691),
    ] {
        within(name, m.mass(x), e, 5e-4)?;
    }
    Ok("K, conjunctive and KRC intermediates reproduced".into())
}

fn fused_pair() -> (MassFunction<f64>, MassFunction<f64>) {
    let (_, [m1, m2, m3]) = worked_example();
    let rule = RuleSpec::krc(0.2).unwrap();
    let left = fuse_sequential(&rule, &[m1.clone(), m2.clone(), m3.clone()]).unwrap();
    let right = fuse_sequential(&rule, &[m2, m3, m1]).unwrap();
    (left, right)
}

fn belief_intervals() -> Outcome {
    let (left, right) = fused_pair();
    for (name, m, x, b, p) in [
        ("left A", &left, A, 0.4339, 0.7289),
        ("left B", &left, B, 0.2711, 0.5661),
        ("right A", &right, A, 0.2695, 0.7083),
        ("right B", &right, B, 0.2917, 0.7305),
    ] {
        let i = belief_interval(m, x).unwrap();
        within(&format!("{name} Bel"), i.bel, b, 5e-4)?;
        within(&format!("{name} Pl"), i.pl, p, 5e-4)?;
    }
    for m in [&left, &right] {
        let e = belief_interval(m, Subset::EMPTY).unwrap();
        within("Bel(∅)", e.bel, 0.0, 0.0)?;
        within("Pl(∅)", e.pl, 0.0, 0.0)?;
        let f = belief_interval(m, AB).unwrap();
        within("Bel(Θ)", f.bel, 1.0, 1e-12)?;
        within("Pl(Θ)", f.pl, 1.0, 1e-12)?;
    }
    Ok("four intervals within 5e-4, ∅ = [0,0], Θ = [1,1]".into())
}

fn decision_failure() -> Outcome {
    let (left, right) = fused_pair();
    for (name, m) in [("left", &left), ("right", &right)] {
        let out = decide(m).unwrap();
        if out.kind != DecisionKind::Indeterminate {
            return Err(format!("{name} decided {:?}", out.kind));
        }
    }
    Ok("both fused results are indeterminate".into())
}

fn non_associativity() -> Outcome {
    let (_, [m1, m2, m3]) = worked_example();
    let r = check_associativity(&RuleSpec::krc(0.2).unwrap(), &m1, &m2, &m3).unwrap();
    if !(0.16..=0.17).contains(&r.linf_gap) {
        return Err(format!("linf gap {} outside [0.16, 0.17]", r.linf_gap));
    }
    if r.linf_at != A {
        return Err(format!("gap attained at {:?}, expected A", r.linf_at));
    }
    Ok(format!("linf gap {:.4} at A", r.linf_gap))
}

fn property_suite() -> Outcome {
    let start = Instant::now();
    let lambdas = [0.0, 0.2, 0.5, 0.9, 1.0];
    let mut count = 0;
    for n in [2, 3, 4] {
        let f = frame(n);
        let vacuous = MassFunction::vacuous(f.clone());
        let per_frame = if n == 4 { 334 } else { 333 };
        for i in 0..per_frame {
            count += 1;
            let [a, b, c] = random_triple(&f, 1000 + n as u64, i);
            let dempster = RuleSpec::dempster();
            let gap = check_associativity(&dempster, &a, &b, &c).map_err(|e| e.to_string())?;
            at_most("dempster associativity gap", gap.linf_gap, 1e-9)?;
            let d_ab = dempster.combine(&a, &b).unwrap();
            let k_ab = krc(&a, &b, 1.0).unwrap();
            at_most("krc(1) vs dempster", d_ab.linf_distance(&k_ab).unwrap().0, 1e-12)?;
            at_most("dempster commutativity", d_ab.linf_distance(&dempster.combine(&b, &a).unwrap()).unwrap().0, 1e-12)?;
            at_most("dempster vacuous", dempster.combine(&a, &vacuous).unwrap().linf_distance(&a).unwrap().0, 1e-12)?;
            let product = conjunctive(&a, &b).unwrap();
            for &l in &lambdas {
                let x = krc(&a, &b, l).unwrap();
                let y = krc(&b, &a, l).unwrap();
                at_most("krc commutativity", x.linf_distance(&y).unwrap().0, 1e-12)?;
                at_most("krc vacuous", krc(&a, &vacuous, l).unwrap().linf_distance(&a).unwrap().0, 1e-12)?;
                if x.iter().any(|(_, m)| m < 0.0) {
                    return Err(format!("negative krc mass at lambda {l}"));
                }
                at_most("krc normalization", (x.total() - 1.0).abs(), 1e-9)?;
                if l == 0.0 {
                    let lhs = x.mass(f.full()) - product.mass(f.full());
                    at_most("krc(0) full-frame excess minus K", (lhs - product.conflict()).abs(), 1e-12)?;
                }
            }
        }
    }
    let t = in_time(start, Duration::from_secs(30))?;
    Ok(format!("{count} triples over N in {{2,3,4}} in {t:?}"))
}

fn oracle_equivalence() -> Outcome {
    let mut count = 0;
    for n in 1..=3 {
        let f = frame(n);
        let per_frame = [0, 66, 67, 67][n];
        for i in 0..per_frame {
            count += 1;
            let triple = random_triple(&f, 7000 + n as u64, i);
            let dense: Vec<Vec<f64>> = triple.iter().map(|m| m.dense()).collect();
            let oracle = global_dempster3(&dense[0], &dense[1], &dense[2]);
            for order in (0..3).permutations(3) {
                let sources: Vec<_> = order.iter().map(|&k| triple[k].clone()).collect();
                let fused = fuse_sequential(&RuleSpec::dempster(), &sources).map_err(|e| e.to_string())?;
                at_most("sequential vs global", linf(&fused.dense(), &oracle), 1e-9)?;
            }
        }
    }
    Ok(format!("{count} triples, all 6 orders each"))
}

fn search_effectiveness() -> Outcome {
    let start = Instant::now();
    let gap = |args: &[&str]| -> Result<f64, String> {
        let out = run_cli(["belief-fusion", "search", "--trials", "10000", "--seed", "42"].into_iter().chain(args.iter().copied()));
        if out.code != 0 {
            return Err(out.stderr);
        }
        let v: serde_json::Value = serde_json::from_str(&out.stdout).map_err(|e| e.to_string())?;
        Ok(v["best"]["linf_gap"].as_f64().unwrap_or(0.0))
    };
    let krc_gap = gap(&["--lambda", "0.2"])?;
    if krc_gap < 0.1 {
        return Err(format!("krc best gap {krc_gap} below 0.1"));
    }
    let ds_gap = gap(&["--rule", "dempster"])?;
    at_most("dempster best gap", ds_gap, 1e-9)?;
    let t = in_time(start, Duration::from_secs(10))?;
    Ok(format!("krc best gap {krc_gap:.4}, dempster {ds_gap:.1e}, in {t:?}"))
}

fn measure_laws() -> Outcome {
    let mut count = 0;
    for n in 1..=6 {
        let f = frame(n);
        let per_frame = if n <= 2 { 84 } else { 83 };
        for i in 0..per_frame {
            count += 1;
            let [m, _, _] = random_triple(&f, 9000 + n as u64, i);
            for x in f.subsets() {
                let b = bel(&m, x).unwrap();
                let p = pl(&m, x).unwrap();
                at_most("duality", (p - (1.0 - bel(&m, f.complement(x)).unwrap())).abs(), 1e-12)?;
                if b > p {
                    return Err(format!("Bel {b} > Pl {p}"));
                }
            }
            // Bayesian projection of the same weights: singleton masses only
            let singles: Vec<f64> = (0..n).map(|k| m.mass(Subset::from_bits(1 << k)) + 1e-3).collect();
            let total: f64 = singles.iter().sum();
            let bayes = MassFunction::new(
                f.clone(),
                singles.iter().enumerate().map(|(k, w)| (Subset::from_bits(1 << k), w / total)),
            )
            .unwrap();
            for x in f.subsets() {
                at_most("bayesian width", belief_interval(&bayes, x).unwrap().width.abs(), 1e-12)?;
            }
        }
    }
    Ok(format!("{count} random BBAs, exhaustive over subsets, N ≤ 6"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("AC1 table reproduction", table_reproduction),
        ("AC2 intermediate values", intermediate_values),
        ("AC3 belief intervals", belief_intervals),
        ("AC4 decision failure", decision_failure),
        ("AC5 non-associativity witness", non_associativity),
        ("AC6 property suite", property_suite),
        ("AC7 oracle equivalence", oracle_equivalence),
        ("AC8 search effectiveness", search_effectiveness),
        ("AC9 measure laws", measure_laws),
    ];
    let mut failures = 0;
    for (name, criterion) in criteria {
        match criterion() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failures += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("{}/{} acceptance criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}

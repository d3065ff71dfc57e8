//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero
//! if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use weylforge_core::charcalc::character_of_M;
use weylforge_core::commalg::CofiniteIdeal;
use weylforge_core::hwdata::{standard_sequence, Psi, Weight};
use weylforge_core::modeng::*;
use weylforge_core::rootsys::Gcm;
use weylforge_core::theorems::*;
use weylforge_core::Q;

// Pinned tolerances. All comparisons are exact (integer dimensions, rational
// coefficients), so the only slack is wall-clock time.
const EXACT: i128 = 0;
const C1_TIME: Duration = Duration::from_secs(120);
const C3_TIME: Duration = Duration::from_secs(300);
const SEED: u64 = 20240611;

type Outcome = Result<String, String>;

fn w(v: &[i64]) -> Weight {
    Weight::new(v.to_vec())
}

fn status(r: &VerificationReport, name: &str) -> Option<Status> {
    r.checks.iter().find(|c| c.name == name).map(|c| c.status)
}

fn detail(r: &VerificationReport, check: &str, key: &str) -> serde_json::Value {
    r.checks.iter().find(|c| c.name == check).map(|c| c.details[key].clone()).unwrap_or_default()
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg.into()) }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// build_M weight-space dimensions against the character formula.
fn criterion_1() -> Outcome {
    let start = Instant::now();
    let lambdas: &[(&str, &[i64])] = &[("A1", &[1]), ("A1", &[2]), ("A1", &[3]), ("A2", &[1, 0]), ("A2", &[1, 1])];
    let mut spaces = 0;
    let mut worst = 0i128;
    for &(name, lam) in lambdas {
        let gcm = Gcm::named(name).map_err(err)?;
        let lam = w(lam);
        for a in 1..=2 {
            let i = CofiniteIdeal::at(0, a);
            let probe = map_algebra(&gcm, &i).map_err(err)?;
            let seq = standard_sequence(&lam, &i, probe.g.table.clone()).map_err(err)?;
            let top = seq.entries.iter().map(|e| e.exponent_at(&[Q::zero()]).unwrap()).max().unwrap_or(1).max(1);
            let b = CofiniteIdeal::at(0, top);
            let alg = with_coefficients(&probe, &b).map_err(err)?;
            let psi = Psi::single(vec![Q::zero()], lam.clone(), b);
            let h = 5;
            let st = build_M(alg, &psi, Some(&seq), h, &BuildOptions::default()).map_err(err)?;
            let ch = character_of_M(&psi, &seq, h).map_err(err)?;
            for row in st.dims() {
                spaces += 1;
                let diff = (row.dim as i128 - ch.coeff(&row.eta)).abs();
                worst = worst.max(diff);
                if diff > EXACT {
                    return Err(format!("{name} {:?} a={a} eta={:?}: module {} vs character {}", lam.coroot_values, row.eta, row.dim, ch.coeff(&row.eta)));
                }
            }
        }
    }
    let t = start.elapsed();
    ensure(t < C1_TIME, format!("took {t:?}, limit {C1_TIME:?}"))?;
    Ok(format!("{spaces} weight spaces, max |diff| = {worst}, {:.2}s", t.as_secs_f64()))
}

/// Product decomposition of the relation-sequence modules.
fn criterion_2() -> Outcome {
    let mut formula = 0;
    for name in ["A1", "A2", "B2"] {
        let g = Gcm::named(name).map_err(err)?;
        for inst in random_t1_instances(&g, 20, SEED) {
            let r = check_T1(&inst.gcm, &inst.lambda, &inst.i, &inst.mu, &inst.j, 4, &T1Options::default()).map_err(err)?;
            ensure(r.pass(), format!("formula failed: {}", serde_json::to_string(&inst).unwrap()))?;
            formula += 1;
        }
    }
    ensure(formula >= 50, format!("only {formula} formula instances"))?;

    let aff = Gcm::named("A1^(1)").map_err(err)?;
    let r = check_T1(&aff, &w(&[1, 0]), &CofiniteIdeal::at(0, 1), &w(&[0, 1]), &CofiniteIdeal::at(2, 2), 6, &T1Options::default())
        .map_err(err)?;
    ensure(r.pass(), "affine A1^(1) instance failed")?;

    let brute = T1Options { brute_force: true, seeded_violation: None };
    let cases: &[(&str, &[i64], (i64, u32), &[i64], (i64, u32), u32)] = &[
        ("A1", &[1], (0, 1), &[1], (1, 1), 4),
        ("A1", &[2], (0, 1), &[1], (1, 1), 4),
        ("A1", &[1], (0, 2), &[1], (-1, 1), 4),
        ("A1", &[2], (0, 1), &[2], (2, 1), 4),
        ("A2", &[1, 0], (0, 1), &[0, 1], (1, 1), 3),
        ("A2", &[1, 1], (0, 1), &[1, 0], (1, 1), 3),
        ("B2", &[1, 0], (0, 1), &[0, 1], (1, 1), 3),
    ];
    let mut brute_n = 0;
    for &(name, l, (p, a), m, (q, b), h) in cases {
        let g = Gcm::named(name).map_err(err)?;
        let r = check_T1(&g, &w(l), &CofiniteIdeal::at(p, a), &w(m), &CofiniteIdeal::at(q, b), h, &brute).map_err(err)?;
        ensure(
            r.pass() && status(&r, "brute_force") == Some(Status::Pass),
            format!("brute force failed on {name} {l:?} {m:?}: {}", r.to_json()),
        )?;
        brute_n += 1;
    }
    ensure(brute_n >= 6, "fewer than 6 brute-force instances")?;

    let mut seeded = 0;
    for &(name, l, (p, a), m, (q, b), h) in &cases[..2] {
        let g = Gcm::named(name).map_err(err)?;
        let opts = T1Options { brute_force: true, seeded_violation: Some(0) };
        let r = check_T1(&g, &w(l), &CofiniteIdeal::at(p, a), &w(m), &CofiniteIdeal::at(q, b), h, &opts).map_err(err)?;
        ensure(
            status(&r, "formula") == Some(Status::Fail) && status(&r, "brute_force") == Some(Status::Fail),
            format!("seeded violation on {name} {l:?} {m:?} was not detected"),
        )?;
        seeded += 1;
    }
    let a2 = Gcm::named("A2").map_err(err)?;
    let opts = T1Options { brute_force: false, seeded_violation: Some(2) };
    let r = check_T1(&a2, &w(&[1, 1]), &CofiniteIdeal::at(0, 1), &w(&[1, 0]), &CofiniteIdeal::at(1, 1), 4, &opts).map_err(err)?;
    ensure(!r.pass(), "seeded violation on A2 top root was not detected")?;
    seeded += 1;
    Ok(format!("{formula} formula + 1 affine (H=6), {brute_n} brute force, {seeded} seeded negatives failed"))
}

/// Tensor decomposition of local Weyl modules for sl2.
fn criterion_3() -> Outcome {
    let start = Instant::now();
    let a1 = Gcm::named("A1").map_err(err)?;
    let mut totals = Vec::new();
    for (l, m) in [(1, 1), (2, 1), (2, 2)] {
        let r = check_tw(&a1, &w(&[l]), &CofiniteIdeal::at(0, 1), &w(&[m]), &CofiniteIdeal::at(1, 1), 4).map_err(err)?;
        ensure(r.pass(), format!("({l},{m}) failed: {}", r.to_json()))?;
        let (lhs, rhs) = (detail(&r, "graded_dimensions", "total_lhs"), detail(&r, "graded_dimensions", "total_rhs"));
        ensure(lhs == rhs, format!("({l},{m}) totals {lhs} vs {rhs}"))?;
        if (l, m) == (1, 1) {
            ensure(lhs == 4, format!("(1,1) total is {lhs}, expected 4"))?;
        }
        totals.push(format!("({l},{m})={lhs}"));
    }
    let t = start.elapsed();
    ensure(t < C3_TIME, format!("took {t:?}, limit {C3_TIME:?}"))?;
    Ok(format!("totals {}, {:.2}s", totals.join(" "), t.as_secs_f64()))
}

/// Distinct maximal ideals and the evaluation module.
fn criterion_4() -> Outcome {
    let a1 = Gcm::named("A1").map_err(err)?;
    let mut out = Vec::new();
    for (k, total) in [(2, 4), (3, 8)] {
        let pts: Vec<_> = (0..k).map(|p| (vec![Q::from_int(p)], w(&[1]))).collect();
        let r = check_max(&a1, &pts, 4).map_err(err)?;
        ensure(r.pass(), format!("k={k} failed: {}", r.to_json()))?;
        for key in ["total_lhs", "total_rhs"] {
            ensure(detail(&r, "graded_dimensions", key) == total, format!("k={k} {key} != {total}"))?;
        }
        ensure(detail(&r, "evaluation_module_relations", "total_evaluation") == total, format!("k={k} evaluation total"))?;
        ensure(status(&r, "evaluation_module_relations") == Some(Status::Pass), format!("k={k} relation audit failed"))?;
        out.push(format!("k={k}: {total}"));
    }
    Ok(format!("{}, evaluation audit passed", out.join(", ")))
}

/// Bezout witnesses and CRT codimension additivity.
fn criterion_5() -> Outcome {
    let c = bezout_suite(100, 4, SEED).map_err(err)?;
    ensure(c.status == Status::Pass, format!("{:?}", c.discrepancy))?;
    Ok("100 coprime pairs, N <= 4".into())
}

/// Lie algebra identities, the action axiom and PBW order independence.
fn criterion_6() -> Outcome {
    let types = ["A1", "A2", "B2", "C2", "G2", "A3", "B3", "C3"];
    for name in types {
        let cb = ChevalleyBasis::new(&Gcm::named(name).map_err(err)?).map_err(err)?;
        cb.verify_jacobi().map_err(|e| format!("{name}: {e}"))?;
        cb.verify_serre().map_err(|e| format!("{name}: {e}"))?;
        cb.verify().map_err(|e| format!("{name}: {e}"))?;
    }
    let c = action_axiom_suite(&property_modules().map_err(err)?, 1000, SEED).map_err(err)?;
    ensure(c.status == Status::Pass, format!("action axiom: {} {:?}", c.details, c.discrepancy))?;
    let p = pbw_order_suite().map_err(err)?;
    ensure(p.status == Status::Pass, format!("PBW order: {:?}", p.discrepancy))?;
    Ok(format!("Jacobi/Serre on {} types, {} action triples, {} PBW instances", types.len(), c.details["triples"], p.details["instances"]))
}

/// Vanishing lemma on generated instances.
fn criterion_7() -> Outcome {
    let inst = random_l1_instances(24, SEED);
    let zero = inst.iter().filter(|i| i.gammas.is_empty()).count();
    ensure(zero > 0, "no n = 0 instance generated")?;
    ensure(inst.iter().any(|i| i.gcm == "A1") && inst.iter().any(|i| i.gcm == "A2"), "missing A1 or A2")?;
    let r = check_l1(&inst, 3).map_err(err)?;
    ensure(r.pass(), format!("{}", r.to_json()))?;
    Ok(format!("{} instances ({zero} with n = 0)", inst.len()))
}

fn suite_bytes() -> Result<Vec<String>, String> {
    let a1 = Gcm::named("A1").map_err(err)?;
    let mut out = Vec::new();
    let opts = T1Options { brute_force: true, seeded_violation: None };
    out.push(check_T1(&a1, &w(&[2]), &CofiniteIdeal::at(0, 1), &w(&[1]), &CofiniteIdeal::at(1, 1), 4, &opts).map_err(err)?);
    out.push(check_tw(&a1, &w(&[2]), &CofiniteIdeal::at(0, 1), &w(&[1]), &CofiniteIdeal::at(1, 1), 4).map_err(err)?);
    let pts: Vec<_> = (0..3).map(|p| (vec![Q::from_int(p)], w(&[1]))).collect();
    out.push(check_max(&a1, &pts, 4).map_err(err)?);
    out.push(check_l1(&random_l1_instances(8, SEED), 3).map_err(err)?);
    out.push(property_suite(SEED).map_err(err)?);
    Ok(out.iter().map(|r| r.to_json().to_string()).collect())
}

/// Byte-identical reruns.
fn criterion_8() -> Outcome {
    let first = suite_bytes()?;
    let second = suite_bytes()?;
    for (k, (a, b)) in first.iter().zip(&second).enumerate() {
        ensure(a == b, format!("report {k} differs between runs"))?;
    }
    Ok(format!("{} reports, {} bytes identical", first.len(), first.iter().map(String::len).sum::<usize>()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("character-module oracle equivalence", criterion_1),
        ("product decomposition (T1)", criterion_2),
        ("Weyl module tensor decomposition (tw)", criterion_3),
        ("distinct maximal ideals (max)", criterion_4),
        ("Bezout / CRT suite", criterion_5),
        ("algebraic soundness", criterion_6),
        ("vanishing lemma instances (l1)", criterion_7),
        ("determinism", criterion_8),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(msg) => println!("PASS criterion {} {name}: {msg} [{secs:.2}s]", k + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {} {name}: {msg} [{secs:.2}s]", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}

//! End-to-end checks. Each test prints one `PASS`/`FAIL` line to stderr,
//! bypassing the test harness capture, and then asserts.

use std::io::Write;
use std::sync::{Mutex, MutexGuard};
use std::time::{Duration, Instant};

use hkoty::commands;
use hkoty::grid::{default_levels, mn_grid, SWEEP_ALGEBRAS};
use hkoty::suite::{factorization_suite, lemma_suite, SuiteTally};
use hkoty_core::algebra::AlgebraSpec;
use hkoty_core::deformed::{build_by_recursion, build_deformed_table, verify_shift_recursion, ShiftSpec};
use hkoty_core::fermionic::{appendix_q, verify_q_recurrences, MConfig, SumInstance};
use hkoty_core::genfun::constant_term_cross_check;
use hkoty_core::qsystem::{chebyshev_check, solve_q_system};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

fn spec(name: &str) -> AlgebraSpec {
    name.parse().unwrap()
}

fn sweep_specs() -> Vec<AlgebraSpec> {
    SWEEP_ALGEBRAS.iter().map(|n| spec(n)).collect()
}

static SERIAL: Mutex<()> = Mutex::new(());

/// One check at a time, so the timed sweep has the machine to itself.
fn serial() -> MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

fn verdict(criterion: &str, ok: bool, detail: String) {
    let line = format!("{} {criterion}: {detail}", if ok { "PASS" } else { "FAIL" });
    let _ = writeln!(std::io::stderr(), "{line}");
    assert!(ok, "{line}");
}

#[test]
fn mn_sweep_over_nine_algebras() {
    let _guard = serial();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let start = Instant::now();
    let out = pool.install(|| commands::sweep(&sweep_specs(), None, 3, 4, false)).unwrap();
    let elapsed = start.elapsed();
    let checked = out.report["checked"].as_u64().unwrap_or(0);
    let ok = out.passed && checked > 0 && elapsed < Duration::from_secs(600);
    verdict("M = N sweep", ok, format!("{checked} instances, 4 workers, {:.1}s", elapsed.as_secs_f64()));
}

#[test]
fn q_system_solutions_are_polynomials() {
    let _guard = serial();
    let mut failures = Vec::new();
    let mut entries = 0;
    let mut cases: Vec<(AlgebraSpec, usize)> = sweep_specs().into_iter().map(|s| (s, 4)).collect();
    cases.push((spec("F4"), 3));
    for (s, levels) in &cases {
        match solve_q_system(s, *levels) {
            Ok(table) => {
                entries += table.entries.len();
                if table.check_relations().is_err() {
                    failures.push(format!("{} relations", s.name()));
                }
                if let Some((key, _)) = table.entries.iter().find(|(_, q)| !q.is_polynomial()) {
                    failures.push(format!("{} entry {key:?}", s.name()));
                }
            }
            Err(e) => failures.push(format!("{}: {e}", s.name())),
        }
    }
    let chebyshev = chebyshev_check(8);
    if !chebyshev {
        failures.push("sl2 entries differ from Chebyshev U_j".into());
    }
    verdict(
        "Q-system polynomiality",
        failures.is_empty(),
        format!("{} algebras, {entries} entries, Chebyshev up to 8: {chebyshev} {failures:?}", cases.len()),
    );
}

#[test]
fn general_t_terms_match_explicit_lists() {
    let _guard = serial();
    let cases = [("B2", 4), ("B3", 4), ("B4", 4), ("C2", 4), ("C3", 4), ("C4", 4), ("F4", 3), ("G2", 4)];
    let mut failures = Vec::new();
    let mut checked = 0;
    for (name, levels) in cases {
        let out = commands::qsystem(&spec(name), levels).unwrap();
        let n = out.report["explicit_t_terms_checked"].as_u64().unwrap_or(0);
        checked += n;
        if !out.passed || n == 0 {
            failures.push(format!("{name}: {}", out.report["explicit_t_term_failures"]));
        }
    }
    verdict("T-term formula", failures.is_empty(), format!("{checked} explicit T-terms compared {failures:?}"));
}

fn deformed_equivalence(s: &AlgebraSpec, depth: usize) -> Result<usize, String> {
    let quad = build_deformed_table(s, depth).map_err(|e| e.to_string())?;
    let rec = build_by_recursion(s, depth).map_err(|e| e.to_string())?;
    let mut checked = 0;
    for (key, q) in &quad.entries {
        if rec.entries.get(key) != Some(q) {
            return Err(format!("{} entry {key:?}", s.name()));
        }
        checked += 1;
    }
    let tmax = s.max_t() as usize;
    for j in 1..depth {
        let shift = ShiftSpec::new(s, j, 0).map_err(|e| e.to_string())?;
        for k in 1..=tmax * (depth - j) + 1 {
            if (0..s.rank).all(|a| k + s.t[a] as usize * j <= quad.level(a)) {
                if let Some(f) = verify_shift_recursion(&quad, k, &shift).map_err(|e| e.to_string())? {
                    return Err(format!("{} shift k={k} j={j}: {f:?}", s.name()));
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}

#[test]
fn deformed_system_matches_its_recursion() {
    let _guard = serial();
    let cases = [("A1", 6), ("A2", 4), ("A3", 4), ("D4", 4), ("B2", 2), ("C2", 2), ("G2", 2), ("F4", 2)];
    let results: Vec<Result<usize, String>> =
        cases.par_iter().map(|&(n, d)| deformed_equivalence(&spec(n), d)).collect();
    let failures: Vec<&String> = results.iter().filter_map(|r| r.as_ref().err()).collect();
    let checked: usize = results.iter().filter_map(|r| r.as_ref().ok()).sum();
    verdict("deformed system equivalence", failures.is_empty(), format!("{checked} entries and shifts {failures:?}"));
}

fn summarize(t: &SuiteTally) -> String {
    let least = t.applied.keys().map(|k| t.verified.get(k).copied().unwrap_or(0)).min().unwrap_or(0);
    format!(
        "{} instances, {} identities, min {least} per identity, {} nonzero coefficients",
        t.instances,
        t.applied.len(),
        t.nonzero
    )
}

#[test]
fn factorization_statements_on_default_windows() {
    let _guard = serial();
    let mut lines = Vec::new();
    let mut ok = true;
    for s in sweep_specs() {
        match factorization_suite(&s, 5, 20) {
            Ok(t) => {
                ok &= t.passes(5);
                lines.push(format!("{} {}", s.name(), summarize(&t)));
                lines.extend(t.failures.iter().take(3).cloned());
            }
            Err(e) => {
                ok = false;
                lines.push(format!("{}: {e}", s.name()));
            }
        }
    }
    verdict("factorization suite", ok, lines.join("; "));
}

#[test]
fn power_series_lemmas_on_small_instances() {
    let _guard = serial();
    let mut lines = Vec::new();
    let mut ok = true;
    for s in sweep_specs() {
        let expected: &[&str] = if s.is_simply_laced() {
            if s.rank == 1 {
                &["inductive-z", "power-series-g", "first", "main"]
            } else {
                &["power-series-g", "first", "main"]
            }
        } else {
            &["first", "second", "main"]
        };
        match lemma_suite(&s, 5) {
            Ok(t) => {
                ok &= t.passes(5) && expected.iter().all(|l| t.verified.get(*l).copied().unwrap_or(0) >= 5);
                lines.push(format!("{} {}", s.name(), summarize(&t)));
                lines.extend(t.failures.iter().take(3).cloned());
            }
            Err(e) => {
                ok = false;
                lines.push(format!("{}: {e}", s.name()));
            }
        }
    }
    verdict("power-series lemmas", ok, lines.join("; "));
}

#[test]
fn independent_oracles_agree() {
    let _guard = serial();
    let sl2 = commands::oracle_check("sl2", 8, 1, 0).unwrap();
    let mut ok = sl2.passed;
    let mut detail = format!("sl2 {} points", sl2.report["checked"]);
    for grid in ["A2", "A3"] {
        for k in 1..=2 {
            let out = commands::oracle_check(grid, 0, k, 3).unwrap();
            ok &= out.passed;
            detail.push_str(&format!(", {grid} k={k} {} points", out.report["checked"]));
        }
    }
    verdict("oracles", ok, detail);
}

fn random_config(rng: &mut ChaCha8Rng, s: &AlgebraSpec) -> (SumInstance, MConfig) {
    let k = rng.gen_range(1..=3);
    let lambda: Vec<i64> = (0..s.rank).map(|_| rng.gen_range(0..4)).collect();
    let rows = |rng: &mut ChaCha8Rng| -> Vec<Vec<i64>> {
        (0..s.rank).map(|a| (0..s.t[a] as usize * k).map(|_| rng.gen_range(0..3)).collect()).collect()
    };
    let n = rows(rng);
    let m = rows(rng);
    (SumInstance::new(s.clone(), lambda, n, k).unwrap(), MConfig { m })
}

#[test]
fn vacancy_closed_forms_on_random_configs() {
    let _guard = serial();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut failures = Vec::new();
    let mut configs = 0;
    for name in ["B2", "B3", "C2", "C3", "F4", "G2"] {
        let s = spec(name);
        for _ in 0..1000 {
            let (inst, cfg) = random_config(&mut rng, &s);
            configs += 1;
            let rep = verify_q_recurrences(&inst, &cfg).unwrap();
            if !rep.ok() || appendix_q(&inst, &cfg).is_none() {
                failures.push(format!("{name} {:?} {:?}: {:?}", inst.n, cfg.m, rep.violations.first()));
            }
        }
    }
    verdict("vacancy closed forms", failures.is_empty(), format!("{configs} configurations {:?}", failures.first()));
}

#[test]
fn constant_terms_over_the_sweep() {
    let _guard = serial();
    let instances: Vec<SumInstance> = sweep_specs()
        .iter()
        .flat_map(|s| default_levels(s).into_iter().flat_map(move |k| mn_grid(s, k, 3, 4)))
        .collect();
    let bad: Vec<String> = instances
        .par_iter()
        .filter_map(|inst| match constant_term_cross_check(inst) {
            Ok(ct) if ct.ok() => None,
            Ok(ct) => Some(format!("{} λ={:?} n={:?}: {ct:?}", inst.spec.name(), inst.lambda, inst.n)),
            Err(e) => Some(format!("{} λ={:?} n={:?}: {e}", inst.spec.name(), inst.lambda, inst.n)),
        })
        .collect();
    verdict("constant-term cross-check", bad.is_empty(), format!("{} instances {:?}", instances.len(), bad.first()));
}

//! The computations behind each subcommand. Every function returns a JSON
//! report and whether all of its checks passed.

use hkoty_core::algebra::{AlgebraSpec, Family};
use hkoty_core::arith::{LaurentPoly, Var};
use hkoty_core::deformed::{build_by_recursion, build_deformed_table, verify_shift_recursion, ShiftSpec};
use hkoty_core::fermionic::{m_sum, n_sum, SumInstance};
use hkoty_core::genfun::{
    applicable_statements, constant_term_cross_check, lemma_steps, verify_factorization, verify_lemma_step,
    CoefficientWindow, IdentityReport, Lemma, Split, Statement,
};
use hkoty_core::oracle::{
    catalan_order_needed, catalan_residue_multiplicity, clebsch_gordan_multiplicity, verify_hkoty_character_identity,
};
use hkoty_core::qsystem::{explicit_pair_t_term, solve_q_system};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::grid::{bounded_vectors, mn_grid, weighted_vectors};
use crate::instance::{spec_json, to_json};
use crate::CliError;

/// A report and its overall verdict.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub passed: bool,
}

impl Outcome {
    fn new(mut report: Value, passed: bool) -> Self {
        if let Some(obj) = report.as_object_mut() {
            obj.insert("status".into(), json!(if passed { "pass" } else { "fail" }));
        }
        Outcome { report, passed }
    }
}

/// Integers that fit in `i64` become JSON numbers, larger ones strings.
pub fn int_json(x: &BigInt) -> Value {
    match i64::try_from(x) {
        Ok(v) => json!(v),
        Err(_) => json!(x.to_string()),
    }
}

/// Polynomial text with `t` for sl₂ and `t1, t2, …` otherwise.
pub fn render_q(spec: &AlgebraSpec, p: &LaurentPoly) -> String {
    let single = spec.rank == 1;
    p.render_with(&|v| match v {
        Var::T(_) if single => "t".to_string(),
        other => other.to_string(),
    })
}

pub fn msum(inst: &SumInstance) -> Outcome {
    Outcome::new(json!({ "M": int_json(&m_sum(inst)), "instance": to_json(inst) }), true)
}

pub fn nsum(inst: &SumInstance) -> Outcome {
    Outcome::new(json!({ "N": int_json(&n_sum(inst)), "instance": to_json(inst) }), true)
}

/// `M` and `N` for one instance, optionally with the constant-term cross-check.
pub fn check_mn(inst: &SumInstance, constant_term: bool) -> Result<Value, CliError> {
    let m = m_sum(inst);
    let n = n_sum(inst);
    let mut ok = m == n;
    let mut entry = json!({ "instance": to_json(inst), "M": int_json(&m), "N": int_json(&n) });
    if constant_term {
        let ct = constant_term_cross_check(inst)?;
        ok &= ct.ok();
        entry["constant_term"] = json!({ "M": int_json(&ct.m_genfun), "N": int_json(&ct.n_genfun) });
    }
    entry["ok"] = json!(ok);
    Ok(entry)
}

pub fn verify_mn_instance(inst: &SumInstance, constant_term: bool) -> Result<Outcome, CliError> {
    let entry = check_mn(inst, constant_term)?;
    let ok = entry["ok"] == json!(true);
    Ok(Outcome::new(entry, ok))
}

/// Exhaustive `M = N` over a grid, in parallel on the current pool.
pub fn verify_mn_grid(
    spec: &AlgebraSpec,
    levels: &[usize],
    max_n: i64,
    max_lambda: i64,
    constant_term: bool,
) -> Result<Outcome, CliError> {
    let instances: Vec<SumInstance> = levels.iter().flat_map(|&k| mn_grid(spec, k, max_n, max_lambda)).collect();
    let results: Vec<Value> =
        instances.par_iter().map(|inst| check_mn(inst, constant_term)).collect::<Result<_, _>>()?;
    let failures: Vec<&Value> = results.iter().filter(|r| r["ok"] != json!(true)).collect();
    let nonzero = results.iter().filter(|r| r["N"] != json!(0)).count();
    let passed = failures.is_empty();
    Ok(Outcome::new(
        json!({
            "algebra": spec_json(spec),
            "levels": levels,
            "max_n": max_n,
            "max_lambda": max_lambda,
            "constant_term": constant_term,
            "checked": results.len(),
            "nonzero": nonzero,
            "failures": failures.len(),
            "failed_instances": failures.into_iter().take(10).cloned().collect::<Vec<_>>(),
        }),
        passed,
    ))
}

/// Solves the Q-system and checks the recursion and the explicit T-term lists.
pub fn qsystem(spec: &AlgebraSpec, levels: usize) -> Result<Outcome, CliError> {
    let table = solve_q_system(spec, levels)?;
    let mut entries = Map::new();
    for (&(a, j), q) in &table.entries {
        entries.insert(format!("Q_({},{j})", a + 1), json!(render_q(spec, q)));
    }
    let relations = table.check_relations().is_ok();
    let mut t_terms_checked = 0usize;
    let mut t_term_failures = Vec::new();
    for a in 0..spec.rank {
        for &b in &spec.adjacency[a] {
            for j in 0..table.levels[a] {
                let general = match table.pair_t_term(a, b, j) {
                    Ok(x) => x,
                    Err(_) => continue,
                };
                if let Ok(Some(explicit)) = explicit_pair_t_term(&table, a, b, j) {
                    t_terms_checked += 1;
                    if explicit != general {
                        t_term_failures.push(format!("T_{j}^({},{})", a + 1, b + 1));
                    }
                }
            }
        }
    }
    let passed = relations && t_term_failures.is_empty();
    Ok(Outcome::new(
        json!({
            "algebra": spec_json(spec),
            "levels": levels,
            "entries": entries,
            "relations_hold": relations,
            "explicit_t_terms_checked": t_terms_checked,
            "explicit_t_term_failures": t_term_failures,
        }),
        passed,
    ))
}

/// Plain-text table, one `Q_(α,j) = …` line per entry.
pub fn qsystem_text(spec: &AlgebraSpec, levels: usize) -> Result<String, CliError> {
    let table = solve_q_system(spec, levels)?;
    let mut out = String::new();
    for (&(a, j), q) in &table.entries {
        out.push_str(&format!("Q_({},{j}) = {}\n", a + 1, render_q(spec, q)));
    }
    Ok(out)
}

/// Builds the deformed table; optionally compares against the recursion-built
/// table and checks the level shifts.
pub fn deformed(spec: &AlgebraSpec, levels: usize, verify_recursion: bool, entries: bool) -> Result<Outcome, CliError> {
    let table = build_deformed_table(spec, levels)?;
    let classical = solve_q_system(spec, levels)?;
    let relations = table.check_relations().is_ok();
    let classical_ok = table.matches_classical(&classical)?;
    let mut report = json!({
        "algebra": spec_json(spec),
        "levels": levels,
        "relations_hold": relations,
        "specializes_to_classical": classical_ok,
    });
    let mut passed = relations && classical_ok;
    if verify_recursion {
        let rec = build_by_recursion(spec, levels)?;
        let differing: Vec<String> = table
            .entries
            .iter()
            .filter(|(key, q)| rec.entries.get(key) != Some(q))
            .map(|(&(a, j), _)| format!("Q_({},{j})", a + 1))
            .collect();
        let mut shift_checks = 0usize;
        let mut shift_failures = Vec::new();
        let tmax = spec.max_t() as usize;
        for j in 1..levels {
            let shift = ShiftSpec::new(spec, j, 0)?;
            for k in 1..=tmax * (levels - j) + 1 {
                if (0..spec.rank).all(|a| k + spec.t[a] as usize * j <= table.level(a)) {
                    shift_checks += 1;
                    if let Some(f) = verify_shift_recursion(&table, k, &shift)? {
                        shift_failures.push(format!("node {} k={} j={}", f.node + 1, f.k, f.j));
                    }
                }
            }
        }
        passed &= differing.is_empty() && shift_failures.is_empty();
        report["recursion"] = json!({
            "entries_compared": table.entries.len(),
            "differing_entries": differing,
            "shift_checks": shift_checks,
            "shift_failures": shift_failures,
        });
    }
    if entries {
        let mut map = Map::new();
        for (&(a, j), q) in &table.entries {
            map.insert(format!("Q_({},{j})", a + 1), json!(q.to_string()));
        }
        report["entries"] = Value::Object(map);
    }
    Ok(Outcome::new(report, passed))
}

fn identity_json(rep: &IdentityReport) -> Value {
    json!({
        "label": rep.label,
        "checked": rep.checked,
        "nonzero": rep.nonzero_targets,
        "ok": rep.ok(),
    })
}

fn failure_json(rep: &IdentityReport) -> Option<Value> {
    rep.mismatches.first().map(|m| {
        json!({
            "label": rep.label,
            "target": m.target,
            "lhs": m.lhs,
            "rhs": m.rhs,
            "difference": m.difference,
        })
    })
}

/// Runs verification jobs in parallel and folds them into one report.
fn fold_identity_reports(header: Value, jobs: Vec<(String, Result<IdentityReport, hkoty_core::Error>)>) -> Outcome {
    let mut checks = Vec::new();
    let mut checked = 0usize;
    let mut nonzero = 0usize;
    let mut first_failure: Option<Value> = None;
    let mut passed = true;
    for (label, res) in jobs {
        match res {
            Ok(rep) => {
                checked += rep.checked;
                nonzero += rep.nonzero_targets;
                if !rep.ok() {
                    passed = false;
                    if first_failure.is_none() {
                        first_failure = failure_json(&rep);
                    }
                }
                checks.push(identity_json(&rep));
            }
            Err(e) => {
                passed = false;
                if first_failure.is_none() {
                    first_failure = Some(json!({ "label": label, "error": e.to_string() }));
                }
                checks.push(json!({ "label": label, "error": e.to_string(), "ok": false }));
            }
        }
    }
    let mut report = header;
    report["checks"] = json!(checks);
    report["checked_coefficients"] = json!(checked);
    report["nonzero_coefficients"] = json!(nonzero);
    if let Some(f) = first_failure {
        report["first_failure"] = f;
    }
    Outcome::new(report, passed)
}

/// Verifies factorization statements on a window of half-width `d`.
/// `statement = None` runs every statement that applies; `split = None` runs
/// every applicable split of the chosen statement.
pub fn verify(
    inst: &SumInstance,
    statement: Option<Statement>,
    split: Option<Split>,
    d: i64,
) -> Result<Outcome, CliError> {
    let mut todo: Vec<(Statement, Split)> = applicable_statements(inst)
        .into_iter()
        .filter(|(s, sp)| statement.is_none_or(|x| x == *s) && split.is_none_or(|x| x == *sp))
        .collect();
    if let (Some(s), Some(sp)) = (statement, split) {
        if todo.is_empty() {
            s.check_applies(inst, sp).map_err(|e| CliError::input(e.to_string()))?;
            todo.push((s, sp));
        }
    }
    if todo.is_empty() {
        let what = statement.map(|s| s.to_string()).unwrap_or_else(|| "no statement".into());
        return Err(CliError::input(format!("{what} does not apply to this instance")));
    }
    let window = CoefficientWindow::cube(inst.rank(), -d, d)?;
    let table = build_deformed_table(&inst.spec, inst.k)?;
    let jobs: Vec<(String, Result<IdentityReport, hkoty_core::Error>)> = todo
        .par_iter()
        .map(|&(s, sp)| (format!("{s} j={} p={}", sp.j, sp.p), verify_factorization(&table, inst, s, sp, &window)))
        .collect();
    let header = json!({ "instance": to_json(inst), "window": d });
    Ok(fold_identity_reports(header, jobs))
}

/// Verifies lemma steps on the power-series window of half-width `d`.
pub fn ps_check(inst: &SumInstance, lemma: Option<Lemma>, d: i64) -> Result<Outcome, CliError> {
    let lemmas: Vec<Lemma> = match lemma {
        Some(l) => vec![l],
        None => Lemma::ALL.to_vec(),
    };
    let mut steps = Vec::new();
    for l in &lemmas {
        match lemma_steps(inst, *l) {
            Ok(s) => steps.extend(s),
            Err(e) if lemma.is_some() => return Err(CliError::input(e.to_string())),
            Err(_) => {}
        }
    }
    if steps.is_empty() {
        return Err(CliError::input("no lemma step applies to this instance"));
    }
    let jobs: Vec<(String, Result<IdentityReport, hkoty_core::Error>)> =
        steps.par_iter().map(|s| (s.label(), verify_lemma_step(inst, s, d, false))).collect();
    let header = json!({ "instance": to_json(inst), "window": d });
    Ok(fold_identity_reports(header, jobs))
}

/// One sl₂ grid point: the four multiplicities and the highest-weight shift.
pub fn sl2_grid_point(l: usize, n: &[i64]) -> Result<Value, CliError> {
    let a1: AlgebraSpec = "A1".parse()?;
    let k = n.len().max(l).max(1);
    let row = |v: &[i64]| {
        let mut r = v.to_vec();
        r.resize(k, 0);
        r
    };
    let inst = SumInstance::new(a1.clone(), vec![l as i64], vec![row(n)], k)?;
    let cg = clebsch_gordan_multiplicity(l, n);
    let cat = catalan_residue_multiplicity(l, n, catalan_order_needed(l, n))?;
    let nn = n_sum(&inst);
    let mm = m_sum(&inst);
    let mut shifted = row(n);
    if l > 0 {
        shifted[l - 1] += 1;
    }
    let moved = n_sum(&SumInstance::new(a1, vec![0], vec![shifted], k)?);
    let ok = cg == cat && cg == nn && cg == mm && moved == nn;
    Ok(json!({
        "l": l,
        "n": n,
        "clebsch_gordan": int_json(&cg),
        "catalan_residue": int_json(&cat),
        "n_sum": int_json(&nn),
        "m_sum": int_json(&mm),
        "shifted_n_sum": int_json(&moved),
        "ok": ok,
    }))
}

/// Type-A character identity for every `n` with `Σ n ≤ max_n` at level `k`.
pub fn character_grid(spec: &AlgebraSpec, k: usize, max_n: i64) -> Result<Vec<Value>, CliError> {
    let lens: Vec<usize> = spec.t.iter().map(|&t| t as usize * k).collect();
    let total: usize = lens.iter().sum();
    bounded_vectors(total, max_n)
        .par_iter()
        .map(|flat| {
            let mut n = Vec::new();
            let mut at = 0;
            for &len in &lens {
                n.push(flat[at..at + len].to_vec());
                at += len;
            }
            let ok = verify_hkoty_character_identity(spec, &n, k)?;
            Ok(json!({ "n": n, "ok": ok }))
        })
        .collect()
}

/// `grid` is `sl2`, `A2` or `A3` (the type-A character identity).
pub fn oracle_check(grid: &str, max_weight: usize, k: usize, max_n: i64) -> Result<Outcome, CliError> {
    let rows: Vec<Value> = match grid.to_ascii_lowercase().as_str() {
        "sl2" | "a1" => {
            let points: Vec<(usize, Vec<i64>)> = weighted_vectors(max_weight)
                .into_iter()
                .flat_map(|n| (0..=max_weight).map(move |l| (l, n.clone())))
                .collect();
            points.par_iter().map(|(l, n)| sl2_grid_point(*l, n)).collect::<Result<_, _>>()?
        }
        other => {
            let spec: AlgebraSpec = other.parse().map_err(|e| CliError::input(format!("--grid {grid}: {e}")))?;
            if spec.family != Family::A || spec.rank > 3 {
                return Err(CliError::input(format!("--grid {grid}: the character oracle covers A1..A3")));
            }
            character_grid(&spec, k, max_n)?
        }
    };
    let failures = rows.iter().filter(|r| r["ok"] != json!(true)).count();
    let passed = failures == 0;
    Ok(Outcome::new(json!({ "grid": grid, "checked": rows.len(), "failures": failures, "matrix": rows }), passed))
}

/// `M = N` with the constant-term cross-check over several algebras.
pub fn sweep(
    algebras: &[AlgebraSpec],
    levels: Option<&[usize]>,
    max_n: i64,
    max_lambda: i64,
    constant_term: bool,
) -> Result<Outcome, CliError> {
    let mut per_algebra = Map::new();
    let mut passed = true;
    let mut checked = 0u64;
    for spec in algebras {
        let ks = levels.map(|l| l.to_vec()).unwrap_or_else(|| crate::grid::default_levels(spec));
        let out = verify_mn_grid(spec, &ks, max_n, max_lambda, constant_term)?;
        passed &= out.passed;
        checked += out.report["checked"].as_u64().unwrap_or(0);
        per_algebra.insert(spec.name(), out.report);
    }
    Ok(Outcome::new(json!({ "algebras": per_algebra, "checked": checked }), passed))
}

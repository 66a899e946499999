//! Batches of identity checks over small instances of one algebra.

use std::collections::BTreeMap;

use hkoty_core::algebra::AlgebraSpec;
use hkoty_core::deformed::build_deformed_table;
use hkoty_core::fermionic::SumInstance;
use hkoty_core::genfun::{
    applicable_statements, lemma_steps, verify_factorization, verify_lemma_step, z_coefficient, CoefficientWindow,
    Lemma,
};
use hkoty_core::Error;
use rayon::prelude::*;

use crate::grid::{default_levels, small_instances};

/// Per-identity tallies for one algebra.
#[derive(Clone, Debug, Default)]
pub struct SuiteTally {
    /// identity name → instances on which every variant held
    pub verified: BTreeMap<String, usize>,
    /// identity name → instances on which it applied
    pub applied: BTreeMap<String, usize>,
    pub failures: Vec<String>,
    pub instances: usize,
    /// nonzero coefficients compared, over all reports
    pub nonzero: usize,
}

impl SuiteTally {
    /// No failures and at least `want` verified instances per identity.
    pub fn passes(&self, want: usize) -> bool {
        self.failures.is_empty()
            && !self.applied.is_empty()
            && self.applied.keys().all(|s| self.verified.get(s).copied().unwrap_or(0) >= want)
    }

    fn record(&mut self, inst: &SumInstance, name: String, outcome: Result<(), String>) {
        *self.applied.entry(name.clone()).or_default() += 1;
        match outcome {
            Ok(()) => *self.verified.entry(name).or_default() += 1,
            Err(why) => self.failures.push(format!(
                "{} k={} λ={:?} n={:?}: {name}: {why}",
                inst.spec.name(),
                inst.k,
                inst.lambda,
                inst.n
            )),
        }
    }
}

/// The window used for the factorization suite. sl₂ extends the default
/// upwards, since `[-8, 8]` holds at most 17 coefficients.
pub fn factorization_window(spec: &AlgebraSpec) -> CoefficientWindow {
    if spec.rank == 1 {
        CoefficientWindow::boxed(&[-8], &[40]).expect("non-empty window")
    } else {
        CoefficientWindow::default_for(spec.rank)
    }
}

/// Half-width of the power-series windows.
pub fn power_series_depth(spec: &AlgebraSpec) -> i64 {
    match spec.rank {
        1 => 8,
        2 => 4,
        3 => 3,
        _ => 2,
    }
}

/// Targets of `window` at which the direct generating function is nonzero.
pub fn nonzero_targets(inst: &SumInstance, window: &CoefficientWindow) -> Result<usize, Error> {
    let mut count = 0;
    for q in &window.targets {
        if !z_coefficient(inst, q, None, None)?.is_zero() {
            count += 1;
        }
    }
    Ok(count)
}

/// The first `per_level` small instances at each level with at least
/// `min_nonzero` nonzero targets.
pub fn pick_instances(
    spec: &AlgebraSpec,
    k: usize,
    window: &CoefficientWindow,
    per_level: usize,
    min_nonzero: usize,
) -> Result<Vec<SumInstance>, Error> {
    let mut out = Vec::new();
    for inst in small_instances(spec, k) {
        if out.len() == per_level {
            break;
        }
        if nonzero_targets(&inst, window)? >= min_nonzero {
            out.push(inst);
        }
    }
    Ok(out)
}

/// Every applicable factorization statement on `per_level` instances per
/// level. An instance counts for a statement when every split holds and
/// each report has at least `min_nonzero` nonzero targets.
pub fn factorization_suite(spec: &AlgebraSpec, per_level: usize, min_nonzero: usize) -> Result<SuiteTally, Error> {
    let window = factorization_window(spec);
    let mut tally = SuiteTally::default();
    for k in default_levels(spec) {
        let table = build_deformed_table(spec, k)?;
        let picked = pick_instances(spec, k, &window, per_level, min_nonzero)?;
        for inst in &picked {
            tally.instances += 1;
            let jobs = applicable_statements(inst);
            let reports: Vec<_> = jobs
                .par_iter()
                .map(|&(s, split)| (s, split, verify_factorization(&table, inst, s, split, &window)))
                .collect();
            let mut by_statement: BTreeMap<String, Result<(), String>> = BTreeMap::new();
            for (s, split, rep) in reports {
                if let Ok(r) = &rep {
                    tally.nonzero += r.nonzero_targets;
                }
                let verdict = match rep {
                    Ok(r) if !r.ok() => Err(format!("j={} p={}: {r}", split.j, split.p)),
                    Ok(r) if r.nonzero_targets < min_nonzero => {
                        Err(format!("j={} p={}: only {} nonzero", split.j, split.p, r.nonzero_targets))
                    }
                    Ok(_) => Ok(()),
                    Err(e) => Err(format!("j={} p={}: {e}", split.j, split.p)),
                };
                let slot = by_statement.entry(s.name().to_string()).or_insert(Ok(()));
                if slot.is_ok() {
                    *slot = verdict;
                }
            }
            for (name, verdict) in by_statement {
                tally.record(inst, name, verdict);
            }
        }
    }
    Ok(tally)
}

/// Every applicable lemma step on `count` instances at the top swept level,
/// on the power-series windows.
pub fn lemma_suite(spec: &AlgebraSpec, count: usize) -> Result<SuiteTally, Error> {
    let k = *default_levels(spec).last().expect("at least one level");
    let d = power_series_depth(spec);
    let mut tally = SuiteTally::default();
    for inst in small_instances(spec, k).into_iter().take(count) {
        tally.instances += 1;
        let mut steps = Vec::new();
        for lemma in Lemma::ALL {
            if let Ok(list) = lemma_steps(&inst, lemma) {
                steps.extend(list);
            }
        }
        let reports: Vec<_> = steps.par_iter().map(|s| (s.lemma, verify_lemma_step(&inst, s, d, false))).collect();
        let mut by_lemma: BTreeMap<String, Result<(), String>> = BTreeMap::new();
        for (lemma, rep) in reports {
            if let Ok(r) = &rep {
                tally.nonzero += r.nonzero_targets;
            }
            let verdict = match rep {
                Ok(r) if r.ok() => Ok(()),
                Ok(r) => Err(r.to_string()),
                Err(e) => Err(e.to_string()),
            };
            let slot = by_lemma.entry(lemma.name().to_string()).or_insert(Ok(()));
            if slot.is_ok() {
                *slot = verdict;
            }
        }
        for (name, verdict) in by_lemma {
            tally.record(&inst, name, verdict);
        }
    }
    Ok(tally)
}

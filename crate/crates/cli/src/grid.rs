//! Instance grids for the sweeps.

use hkoty_core::algebra::AlgebraSpec;
use hkoty_core::fermionic::SumInstance;

/// Every non-negative integer vector of length `len` with sum at most `total`.
pub fn bounded_vectors(len: usize, total: i64) -> Vec<Vec<i64>> {
    fn go(i: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur[i] = v;
            go(i + 1, left - v, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    go(0, total, &mut vec![0; len], &mut out);
    out
}

/// All `(λ, n)` with `Σ l_α ≤ max_lambda` and `Σ n_{α,i} ≤ max_n` at level `k`.
pub fn mn_grid(spec: &AlgebraSpec, k: usize, max_n: i64, max_lambda: i64) -> Vec<SumInstance> {
    let lens: Vec<usize> = spec.t.iter().map(|&t| t as usize * k).collect();
    let total: usize = lens.iter().sum();
    let lambdas = bounded_vectors(spec.rank, max_lambda);
    let mut out = Vec::new();
    for flat in bounded_vectors(total, max_n) {
        let mut n = Vec::with_capacity(spec.rank);
        let mut at = 0;
        for &len in &lens {
            n.push(flat[at..at + len].to_vec());
            at += len;
        }
        for lambda in &lambdas {
            out.push(SumInstance { spec: spec.clone(), lambda: lambda.clone(), n: n.clone(), k });
        }
    }
    out
}

/// Levels swept for an algebra: `1..=3`, or `1..=2` from rank 3 on and for G₂.
pub fn default_levels(spec: &AlgebraSpec) -> Vec<usize> {
    if spec.rank >= 3 || spec.name() == "G2" {
        vec![1, 2]
    } else {
        vec![1, 2, 3]
    }
}

/// The nine algebras of the standard sweep.
pub const SWEEP_ALGEBRAS: [&str; 9] = ["A1", "A2", "A3", "B2", "B3", "C2", "C3", "D4", "G2"];

/// sl₂ multiplicity vectors `n` with `Σ i·n_i ≤ total`, of length `total`.
pub fn weighted_vectors(total: usize) -> Vec<Vec<i64>> {
    fn go(i: usize, left: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if i > cur.len() {
            out.push(cur.clone());
            return;
        }
        for c in 0..=left / i {
            cur[i - 1] = c as i64;
            go(i + 1, left - c * i, cur, out);
        }
        cur[i - 1] = 0;
    }
    let mut out = Vec::new();
    go(1, total, &mut vec![0; total], &mut out);
    out
}

/// Small instances at level `k` in a fixed order, used to pick
/// representatives for the identity checks.
pub fn small_instances(spec: &AlgebraSpec, k: usize) -> Vec<SumInstance> {
    let r = spec.rank;
    let last = r - 1;
    let top = |a: usize| spec.t[a] as usize * k;
    let weight = |pairs: &[(usize, i64)]| {
        let mut l = vec![0; r];
        for &(a, v) in pairs {
            l[a] += v;
        }
        l
    };
    type Case = (Vec<i64>, Vec<(usize, usize, i64)>);
    let cases: Vec<Case> = vec![
        (weight(&[]), vec![]),
        (weight(&[(0, 1)]), vec![]),
        (weight(&[(last, 1)]), vec![]),
        (weight(&[]), vec![(0, 1, 1)]),
        (weight(&[]), vec![(last, 1, 1)]),
        (weight(&[(0, 1), (last, 1)]), vec![]),
        (weight(&[(0, 2)]), vec![]),
        (weight(&[(0, 1)]), vec![(0, 1, 1)]),
        (weight(&[(last, 1)]), vec![(last, 1, 1)]),
        (weight(&[]), vec![(0, 1, 2)]),
        (weight(&[(last, 1)]), vec![(last, top(last), 1)]),
        (weight(&[]), vec![(0, top(0), 1)]),
        (weight(&[]), vec![(0, 1, 1), (last, 1, 1)]),
        (weight(&[]), vec![(0, 1, 3)]),
        (weight(&[]), vec![(0, 1, 2), (last, 1, 1)]),
        (weight(&[]), vec![(0, 1, 2), (last, 1, 2)]),
        (weight(&[]), vec![(0, 1, 4)]),
        (weight(&[(0, 1)]), vec![(0, 1, 3)]),
        (weight(&[]), vec![(0, 1, 5)]),
        (weight(&[]), vec![(0, 1, 3), (last, 1, 1)]),
        (weight(&[]), vec![(0, 1, 1), (last, 1, 3)]),
    ];
    let mut out: Vec<SumInstance> = Vec::new();
    for (lambda, entries) in cases {
        if let Ok(inst) = SumInstance::from_sparse(spec.clone(), lambda, &entries, k) {
            if !out.contains(&inst) {
                out.push(inst);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(bounded_vectors(3, 2).len(), 10);
        // partitions of 0..=8 summed
        assert_eq!(weighted_vectors(8).len(), 1 + 1 + 2 + 3 + 5 + 7 + 11 + 15 + 22);
        let a1: AlgebraSpec = "A1".parse().unwrap();
        assert_eq!(mn_grid(&a1, 2, 1, 1).len(), 3 * 2);
    }
}

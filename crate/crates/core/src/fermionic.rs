//! Vacancy numbers, configuration enumeration and the restricted/unrestricted
//! fermionic sums.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::AlgebraSpec;
use crate::arith::extended_binomial;
use crate::Error;

/// Algebra, highest weight `λ`, multiplicities `n_{α,i}` and level `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumInstance {
    pub spec: AlgebraSpec,
    pub lambda: Vec<i64>,
    pub n: Vec<Vec<i64>>,
    pub k: usize,
}

/// Summation variables `m_{α,i}`, same shape as `n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MConfig {
    pub m: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VacancyData {
    /// total spin `q_α`
    pub q_alpha: Vec<i64>,
    /// `p_{α,i}`, index `i-1`
    pub p: Vec<Vec<i64>>,
    /// `q_{α,i} = p_{α,i} + q_α`, index `i-1`
    pub q: Vec<Vec<i64>>,
    /// `Δ_{α,i}`, index `i-1`
    pub delta: Vec<Vec<i64>>,
}

impl SumInstance {
    pub fn new(spec: AlgebraSpec, lambda: Vec<i64>, n: Vec<Vec<i64>>, k: usize) -> Result<Self, Error> {
        let inst = SumInstance { spec, lambda, n, k };
        inst.validate()?;
        Ok(inst)
    }

    /// Instance with `n` given as sparse `(node, level, value)` triples (zero-based node, one-based level).
    pub fn from_sparse(
        spec: AlgebraSpec,
        lambda: Vec<i64>,
        entries: &[(usize, usize, i64)],
        k: usize,
    ) -> Result<Self, Error> {
        let mut n: Vec<Vec<i64>> = (0..spec.rank).map(|a| vec![0; spec.t[a] as usize * k]).collect();
        for &(a, i, v) in entries {
            let row = n.get_mut(a).ok_or_else(|| Error::Shape(format!("node {} out of range", a + 1)))?;
            if i == 0 || i > row.len() {
                return Err(Error::Shape(format!("level {i} out of range for node {}", a + 1)));
            }
            row[i - 1] += v;
        }
        Self::new(spec, lambda, n, k)
    }

    pub fn validate(&self) -> Result<(), Error> {
        let r = self.spec.rank;
        if self.k == 0 {
            return Err(Error::Shape(String::from("level k must be at least 1")));
        }
        if self.lambda.len() != r {
            return Err(Error::Shape(format!("lambda has {} entries, expected {r}", self.lambda.len())));
        }
        if self.lambda.iter().any(|&l| l < 0) {
            return Err(Error::Shape(String::from("lambda entries must be non-negative")));
        }
        if self.n.len() != r {
            return Err(Error::Shape(format!("n has {} rows, expected {r}", self.n.len())));
        }
        for (a, row) in self.n.iter().enumerate() {
            let want = self.row_len(a);
            if row.len() != want {
                return Err(Error::Shape(format!("row {} of n has {} entries, expected {want}", a + 1, row.len())));
            }
            if row.iter().any(|&x| x < 0) {
                return Err(Error::Shape(format!("row {} of n has a negative entry", a + 1)));
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.spec.rank
    }

    /// `t_α·k`.
    pub fn row_len(&self, a: usize) -> usize {
        self.spec.t[a] as usize * self.k
    }

    /// `n_{α,i}` with zero outside the stored range.
    pub fn n_at(&self, a: usize, i: i64) -> i64 {
        if i < 1 {
            return 0;
        }
        self.n[a].get(i as usize - 1).copied().unwrap_or(0)
    }

    /// `ν_α = Σ_j j·n_{α,j}`.
    pub fn nu(&self) -> Vec<i64> {
        self.n.iter().map(|row| row.iter().enumerate().map(|(j, &x)| (j as i64 + 1) * x).sum()).collect()
    }

    pub fn zero_config(&self) -> MConfig {
        MConfig { m: (0..self.rank()).map(|a| vec![0; self.row_len(a)]).collect() }
    }

    /// Same `λ` and `n` at a higher level, padding `n` with zeros.
    pub fn with_level(&self, k: usize) -> Result<SumInstance, Error> {
        let mut n = self.n.clone();
        for (a, row) in n.iter_mut().enumerate() {
            let want = self.spec.t[a] as usize * k;
            if row.len() > want {
                if row[want..].iter().any(|&x| x != 0) {
                    return Err(Error::Shape(format!("row {} does not fit level {k}", a + 1)));
                }
                row.truncate(want);
            } else {
                row.resize(want, 0);
            }
        }
        SumInstance::new(self.spec.clone(), self.lambda.clone(), n, k)
    }
}

impl MConfig {
    pub fn at(&self, a: usize, i: i64) -> i64 {
        if i < 1 {
            return 0;
        }
        self.m[a].get(i as usize - 1).copied().unwrap_or(0)
    }
}

fn check_shape(inst: &SumInstance, m: &MConfig) -> Result<(), Error> {
    if m.m.len() != inst.rank() {
        return Err(Error::Shape(format!("m has {} rows, expected {}", m.m.len(), inst.rank())));
    }
    for (a, row) in m.m.iter().enumerate() {
        if row.len() != inst.row_len(a) {
            return Err(Error::Shape(format!(
                "row {} of m has {} entries, expected {}",
                a + 1,
                row.len(),
                inst.row_len(a)
            )));
        }
        if row.iter().any(|&x| x < 0) {
            return Err(Error::Shape(format!("row {} of m has a negative entry", a + 1)));
        }
    }
    Ok(())
}

/// Total spin, vacancy numbers, modified vacancy numbers and `Δ` exponents.
pub fn compute_vacancy_data(inst: &SumInstance, m: &MConfig) -> Result<VacancyData, Error> {
    check_shape(inst, m)?;
    let spec = &inst.spec;
    let r = spec.rank;
    let nu = inst.nu();
    let mut q_alpha = vec![0i64; r];
    for a in 0..r {
        let mut s = inst.lambda[a] - nu[a];
        for b in 0..r {
            let c = spec.c(a, b);
            if c == 0 {
                continue;
            }
            for (j, &x) in m.m[b].iter().enumerate() {
                s += (j as i64 + 1) * c * x;
            }
        }
        q_alpha[a] = s;
    }
    let tg = spec.t_gamma_prime();
    let mut p = Vec::with_capacity(r);
    let mut q = Vec::with_capacity(r);
    let mut delta = Vec::with_capacity(r);
    for a in 0..r {
        let len = inst.row_len(a);
        let mut prow = vec![0i64; len];
        for (ii, slot) in prow.iter_mut().enumerate() {
            let i = ii as i64 + 1;
            let mut s: i64 = inst.n[a].iter().enumerate().map(|(j, &x)| (j as i64 + 1).min(i) * x).sum();
            for b in 0..r {
                let c = spec.c(a, b);
                if c == 0 {
                    continue;
                }
                let (cab, cba) = (c.abs(), spec.c(b, a).abs());
                for (j, &x) in m.m[b].iter().enumerate() {
                    if x != 0 {
                        s -= c.signum() * (cab * (j as i64 + 1)).min(cba * i) * x;
                    }
                }
            }
            *slot = s;
        }
        q.push(prow.iter().map(|x| x + q_alpha[a]).collect());
        p.push(prow);
        let drow = (0..len)
            .map(|ii| {
                if Some(a) == spec.gamma_prime {
                    let i = ii as i64 + 1;
                    (-i).rem_euclid(tg) * m.m[a][ii]
                } else {
                    0
                }
            })
            .collect();
        delta.push(drow);
    }
    Ok(VacancyData { q_alpha, p, q, delta })
}

impl VacancyData {
    /// `q_{α,i}` for any `i ≥ 0`: `q_α` at zero and `l_α` beyond the row.
    pub fn q_ext(&self, inst: &SumInstance, a: usize, i: i64) -> i64 {
        if i <= 0 {
            self.q_alpha[a]
        } else if i as usize > self.q[a].len() {
            inst.lambda[a]
        } else {
            self.q[a][i as usize - 1]
        }
    }
}

/// Multiplicity vectors of the partitions of `s` into parts `≤ max_part`.
pub fn partitions(s: i64, max_part: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; max_part];
    fn go(rem: i64, part: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        if part == 0 {
            return;
        }
        let p = part as i64;
        let mut c = rem / p;
        loop {
            cur[part - 1] = c;
            go(rem - c * p, part - 1, cur, out);
            if c == 0 {
                break;
            }
            c -= 1;
        }
        cur[part - 1] = 0;
    }
    if s >= 0 && (s == 0 || max_part > 0) {
        go(s, max_part, &mut cur, &mut out);
    }
    out
}

/// `S_β = Σ_j j·m_{β,j}` forced by `q_α = target_α`, or `None` when the fiber is empty.
pub fn weighted_row_sums(inst: &SumInstance, target: &[i64]) -> Option<Vec<i64>> {
    let nu = inst.nu();
    let rhs: Vec<i64> = (0..inst.rank()).map(|a| nu[a] - inst.lambda[a] + target[a]).collect();
    let s = inst.spec.cartan_inverse_times(&rhs);
    let mut out = Vec::with_capacity(s.len());
    for x in s {
        if !x.is_integer() || x < num_rational::Ratio::from_integer(0) {
            return None;
        }
        out.push(x.to_integer());
    }
    Some(out)
}

/// Calls `f` on every configuration with total spin equal to `target`.
pub fn for_each_config(inst: &SumInstance, target: &[i64], mut f: impl FnMut(&MConfig)) {
    let Some(s) = weighted_row_sums(inst, target) else { return };
    let rows: Vec<Vec<Vec<i64>>> = (0..inst.rank()).map(|b| partitions(s[b], inst.row_len(b))).collect();
    if rows.iter().any(|r| r.is_empty()) {
        return;
    }
    let mut idx = vec![0usize; rows.len()];
    let mut cfg = MConfig { m: rows.iter().map(|r| r[0].clone()).collect() };
    loop {
        f(&cfg);
        let mut b = rows.len();
        loop {
            if b == 0 {
                return;
            }
            b -= 1;
            idx[b] += 1;
            if idx[b] < rows[b].len() {
                cfg.m[b] = rows[b][idx[b]].clone();
                break;
            }
            idx[b] = 0;
            cfg.m[b] = rows[b][0].clone();
        }
    }
}

/// Configurations with `q_α = 0`; if `restricted`, also `p_{α,i} ≥ 0`.
pub fn enumerate_zero_spin_configs(inst: &SumInstance, restricted: bool) -> Vec<MConfig> {
    let zero = vec![0; inst.rank()];
    let mut out = Vec::new();
    for_each_config(inst, &zero, |m| {
        if restricted {
            let vd = compute_vacancy_data(inst, m).expect("enumerated configs have the right shape");
            if vd.p.iter().flatten().any(|&x| x < 0) {
                return;
            }
        }
        out.push(m.clone());
    });
    out
}

/// `∏ binom(m_{α,i} + p_{α,i}, m_{α,i})`.
pub fn config_weight(vd: &VacancyData, m: &MConfig) -> BigInt {
    let mut w = BigInt::one();
    for (prow, mrow) in vd.p.iter().zip(&m.m) {
        for (&p, &x) in prow.iter().zip(mrow) {
            if x == 0 {
                continue;
            }
            w *= extended_binomial(x, p).expect("m is non-negative");
            if w.is_zero() {
                return w;
            }
        }
    }
    w
}

fn sum(inst: &SumInstance, restricted: bool) -> BigInt {
    let mut total = BigInt::zero();
    let zero = vec![0; inst.rank()];
    for_each_config(inst, &zero, |m| {
        let vd = compute_vacancy_data(inst, m).expect("enumerated configs have the right shape");
        if restricted && vd.p.iter().flatten().any(|&x| x < 0) {
            return;
        }
        total += config_weight(&vd, m);
    });
    total
}

/// Restricted sum `M_{λ;n}`.
pub fn m_sum(inst: &SumInstance) -> BigInt {
    sum(inst, true)
}

/// Unrestricted sum `N_{λ;n}`.
pub fn n_sum(inst: &SumInstance) -> BigInt {
    sum(inst, false)
}

/// Outcome of [`verify_q_recurrences`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RecurrenceReport {
    pub checked: usize,
    pub violations: Vec<String>,
}

impl RecurrenceReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn check(&mut self, lhs: i64, rhs: i64, what: impl FnOnce() -> String) {
        self.checked += 1;
        if lhs != rhs {
            self.violations.push(format!("{}: {lhs} != {rhs}", what()));
        }
    }
}

/// Second-difference relations between the modified vacancy numbers and,
/// for non-simply-laced algebras, the per-family closed forms.
pub fn verify_q_recurrences(inst: &SumInstance, m: &MConfig) -> Result<RecurrenceReport, Error> {
    let vd = compute_vacancy_data(inst, m)?;
    let spec = &inst.spec;
    let r = spec.rank;
    let q = |a: usize, i: i64| vd.q_ext(inst, a, i);
    let mm = |a: usize, i: i64| m.at(a, i);
    let mut rep = RecurrenceReport::default();
    let long_sum = |a: usize| -> i64 { (0..r).filter(|&b| !spec.is_short(b)).map(|b| spec.c(a, b) * mm(b, 1)).sum() };
    let short_sum =
        |a: usize, j: i64| -> i64 { (0..r).filter(|&b| spec.is_short(b)).map(|b| spec.c(a, b) * mm(b, j)).sum() };
    match (spec.gamma, spec.gamma_prime) {
        (Some(g), Some(gp)) => {
            let t = spec.t[gp];
            for j in 1..=t {
                let rhs = 2 * q(gp, j) - q(gp, j + 1) - inst.n_at(gp, j) + short_sum(gp, j)
                    - if j == t { mm(g, 1) } else { 0 };
                rep.check(q(gp, j - 1), rhs, || format!("gamma' relation at node {} level {j}", gp + 1));
            }
            for b in (0..r).filter(|&b| spec.is_short(b) && b != gp) {
                for j in 1..=inst.row_len(b) as i64 {
                    let rhs = 2 * q(b, j) - q(b, j + 1) - inst.n_at(b, j) + short_sum(b, j);
                    rep.check(q(b, j - 1), rhs, || format!("short relation at node {} level {j}", b + 1));
                }
            }
            let corr: i64 = (1..=t).map(|j| j * mm(gp, j) + (-(t + j)).rem_euclid(t) * mm(gp, t + j)).sum();
            let rhs = -inst.n_at(g, 1) + long_sum(g) + 2 * q(g, 1) - q(g, 2) - corr;
            rep.check(q(g, 0), rhs, || format!("gamma relation at node {}", g + 1));
            for a in (0..r).filter(|&a| !spec.is_short(a) && a != g) {
                let rhs = -inst.n_at(a, 1) + long_sum(a) + 2 * q(a, 1) - q(a, 2);
                rep.check(q(a, 0), rhs, || format!("long relation at node {}", a + 1));
            }
            if let Some(table) = appendix_q(inst, m) {
                for a in 0..r {
                    for i in 0..=inst.row_len(a) {
                        rep.check(table[a][i], q(a, i as i64), || format!("closed form at node {} level {i}", a + 1));
                    }
                }
            }
        }
        _ => {
            for a in 0..r {
                let rhs = -inst.n_at(a, 1) + long_sum(a) + 2 * q(a, 1) - q(a, 2);
                rep.check(q(a, 0), rhs, || format!("long relation at node {}", a + 1));
            }
        }
    }
    Ok(rep)
}

/// Per-family closed forms of `q_{α,i}` for `0 ≤ i ≤ t_α k` (B, C, F, G only).
pub fn appendix_q(inst: &SumInstance, m: &MConfig) -> Option<Vec<Vec<i64>>> {
    use crate::algebra::Family;
    let spec = &inst.spec;
    let r = spec.rank;
    let k = inst.k as i64;
    let l = |a: usize| inst.lambda[a];
    let mm = |a: Option<usize>, j: i64| a.map_or(0, |a| m.at(a, j));
    let prev = |a: usize| a.checked_sub(1);
    let next = |a: usize| if a + 1 < r { Some(a + 1) } else { None };
    // Σ_{j=i+1}^{top} (j-i)·f(j)
    let ramp = |i: i64, top: i64, f: &dyn Fn(i64) -> i64| -> i64 { (i + 1..=top).map(|j| (j - i) * f(j)).sum() };
    // Σ_{j=si+1}^{top} (j-si)·f(j), used for doubled or tripled level spacing
    let ramp_scaled = |i: i64, s: i64, top: i64, f: &dyn Fn(i64) -> i64| -> i64 {
        (s * i + 1..=top).map(|j| (j - s * i) * f(j)).sum()
    };
    // Σ_{j: i < s·j ≤ top} (s·j - i)·f(j)
    let ramp_coarse = |i: i64, s: i64, top: i64, f: &dyn Fn(i64) -> i64| -> i64 {
        (1..=top / s).filter(|&j| s * j > i).map(|j| (s * j - i) * f(j)).sum()
    };
    let own = |a: usize| move |j: i64| 2 * m.at(a, j) - inst.n_at(a, j);
    let rows: Vec<Vec<i64>> = match spec.family {
        Family::B => (0..r)
            .map(|a| {
                (0..=spec.t[a] * k)
                    .map(|i| {
                        if a + 2 < r {
                            l(a) + ramp(i, k, &|j| own(a)(j) - mm(prev(a), j) - mm(next(a), j))
                        } else if a + 2 == r {
                            l(a) + ramp(i, k, &|j| own(a)(j) - mm(prev(a), j))
                                - ramp_scaled(i, 2, 2 * k, &|j| mm(Some(r - 1), j))
                        } else {
                            l(a) + ramp(i, 2 * k, &|j| own(a)(j)) - ramp_coarse(i, 2, 2 * k, &|j| mm(Some(r - 2), j))
                        }
                    })
                    .collect()
            })
            .collect(),
        Family::C => (0..r)
            .map(|a| {
                (0..=spec.t[a] * k)
                    .map(|i| {
                        if a + 2 < r {
                            l(a) + ramp(i, 2 * k, &|j| own(a)(j) - mm(prev(a), j) - mm(next(a), j))
                        } else if a + 2 == r {
                            l(a) + ramp(i, 2 * k, &|j| own(a)(j))
                                - ramp(i, 2 * k, &|j| mm(prev(a), j))
                                - ramp_coarse(i, 2, 2 * k, &|j| mm(Some(r - 1), j))
                        } else {
                            l(a) + ramp(i, k, &|j| own(a)(j)) - ramp_scaled(i, 2, 2 * k, &|j| mm(Some(r - 2), j))
                        }
                    })
                    .collect()
            })
            .collect(),
        Family::F => (0..4)
            .map(|a| {
                (0..=spec.t[a] * k)
                    .map(|i| match a {
                        0 => l(0) + ramp(i, k, &|j| own(0)(j) - mm(Some(1), j)),
                        1 => {
                            l(1) + ramp(i, k, &|j| own(1)(j) - mm(Some(0), j))
                                - ramp_scaled(i, 2, 2 * k, &|j| mm(Some(2), j))
                        }
                        2 => {
                            l(2) + ramp(i, 2 * k, &|j| own(2)(j) - mm(Some(3), j))
                                - ramp_coarse(i, 2, 2 * k, &|j| mm(Some(1), j))
                        }
                        _ => l(3) + ramp(i, 2 * k, &|j| own(3)(j) - mm(Some(2), j)),
                    })
                    .collect()
            })
            .collect(),
        Family::G => (0..2)
            .map(|a| {
                (0..=spec.t[a] * k)
                    .map(|i| {
                        if a == 0 {
                            l(0) + ramp(i, k, &|j| own(0)(j)) - ramp_scaled(i, 3, 3 * k, &|j| mm(Some(1), j))
                        } else {
                            l(1) + ramp(i, 3 * k, &|j| own(1)(j)) - ramp_coarse(i, 3, 3 * k, &|j| mm(Some(0), j))
                        }
                    })
                    .collect()
            })
            .collect(),
        _ => return None,
    };
    Some(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_algebra, Family};

    fn a1(l: i64, n: Vec<i64>, k: usize) -> SumInstance {
        SumInstance::new(build_algebra(Family::A, 1).unwrap(), vec![l], vec![n], k).unwrap()
    }

    #[test]
    fn vacancy_examples() {
        let inst = a1(0, vec![2], 1);
        let vd = compute_vacancy_data(&inst, &MConfig { m: vec![vec![1]] }).unwrap();
        assert_eq!((vd.q_alpha[0], vd.p[0][0], vd.q[0][0]), (0, 0, 0));
        let inst = a1(0, vec![4, 0], 2);
        let vd = compute_vacancy_data(&inst, &MConfig { m: vec![vec![0, 1]] }).unwrap();
        assert_eq!(vd.q_alpha[0], 0);
        assert_eq!(vd.p[0], vec![2, 0]);
    }

    #[test]
    fn enumeration_examples() {
        let inst = a1(0, vec![4, 0], 2);
        let mut got = enumerate_zero_spin_configs(&inst, false);
        got.sort();
        assert_eq!(got, vec![MConfig { m: vec![vec![0, 1]] }, MConfig { m: vec![vec![2, 0]] }]);
        assert!(enumerate_zero_spin_configs(&a1(1, vec![2], 1), false).is_empty());
        assert_eq!(enumerate_zero_spin_configs(&a1(0, vec![0], 1), false), vec![inst_zero()]);
    }

    fn inst_zero() -> MConfig {
        MConfig { m: vec![vec![0]] }
    }

    #[test]
    fn sums() {
        assert_eq!(m_sum(&a1(0, vec![2], 1)), BigInt::from(1));
        assert_eq!(n_sum(&a1(0, vec![4, 0], 2)), BigInt::from(2));
        assert_eq!(m_sum(&a1(0, vec![4, 0], 2)), BigInt::from(2));
        assert_eq!(n_sum(&a1(2, vec![2], 1)), BigInt::from(1));
        let a2 = build_algebra(Family::A, 2).unwrap();
        let inst = SumInstance::from_sparse(a2, vec![0, 1], &[(0, 1, 2)], 1).unwrap();
        assert_eq!(n_sum(&inst), BigInt::from(1));
    }

    #[test]
    fn partitions_count() {
        assert_eq!(partitions(4, 4).len(), 5);
        assert_eq!(partitions(4, 2).len(), 3);
        assert_eq!(partitions(0, 0).len(), 1);
        assert!(partitions(3, 0).is_empty());
    }

    #[test]
    fn empty_config_relations() {
        let inst = SumInstance::new(
            build_algebra(Family::C, 3).unwrap(),
            vec![1, 2, 3],
            vec![vec![0; 4], vec![0; 4], vec![0; 2]],
            2,
        )
        .unwrap();
        let rep = verify_q_recurrences(&inst, &inst.zero_config()).unwrap();
        assert!(rep.ok(), "{:?}", rep.violations);
    }
}

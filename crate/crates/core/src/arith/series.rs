use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed};

use super::monomial::{Monomial, Var};
use super::poly::LaurentPoly;
use crate::Error;

/// Linear grading `s(e) = G·e` of u-exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    rows: Vec<Vec<i64>>,
}

impl Grading {
    /// Degree in a single variable `u_pivot`.
    pub fn pivot(rank: usize, pivot: usize) -> Grading {
        let mut row = vec![0; rank];
        row[pivot] = 1;
        Grading { rows: vec![row] }
    }

    pub fn matrix(rows: Vec<Vec<i64>>) -> Grading {
        Grading { rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn apply(&self, e: &[i32]) -> Vec<i64> {
        self.rows.iter().map(|r| r.iter().zip(e).map(|(a, &b)| a * b as i64).sum()).collect()
    }
}

fn le(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn vadd(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn vmin(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| *x.min(y)).collect()
}

/// A Laurent series in `u_1..u_r`, exact in every graded degree `≤ bound`.
///
/// Coefficients are Laurent polynomials in the remaining variables.
/// `low` is a componentwise lower bound for the grading over the support.
#[derive(Clone, Debug)]
pub struct TruncatedSeries {
    rank: usize,
    grading: Grading,
    bound: Vec<i64>,
    low: Vec<i64>,
    terms: BTreeMap<Vec<i32>, LaurentPoly>,
}

/// Splits a monomial into its u-exponent vector and the rest.
pub fn split_u(m: &Monomial, rank: usize) -> (Vec<i32>, Monomial) {
    let mut e = vec![0; rank];
    let mut rest = Vec::new();
    for &(v, x) in m.pairs() {
        match v {
            Var::U(a) if (a as usize) < rank => e[a as usize] = x,
            _ => rest.push((v, x)),
        }
    }
    (e, Monomial::from_pairs(rest))
}

pub fn u_monomial(e: &[i32]) -> Monomial {
    Monomial::from_pairs(e.iter().enumerate().map(|(a, &x)| (Var::u(a), x)))
}

impl TruncatedSeries {
    pub fn zero(rank: usize, grading: Grading, bound: Vec<i64>) -> Self {
        let low = bound.iter().map(|b| b + 1).collect();
        TruncatedSeries { rank, grading, bound, low, terms: BTreeMap::new() }
    }

    /// The exact series of a polynomial, cut at `bound`.
    pub fn from_poly(p: &LaurentPoly, rank: usize, grading: Grading, bound: Vec<i64>) -> Self {
        let mut terms: BTreeMap<Vec<i32>, LaurentPoly> = BTreeMap::new();
        let mut low: Option<Vec<i64>> = None;
        for (m, c) in p.terms() {
            let (e, rest) = split_u(m, rank);
            let s = grading.apply(&e);
            low = Some(match low {
                None => s.clone(),
                Some(l) => vmin(&l, &s),
            });
            if le(&s, &bound) {
                terms.entry(e).or_default().add_term(rest, c.clone());
            }
        }
        terms.retain(|_, v| !v.is_zero());
        let low = low.unwrap_or_else(|| bound.iter().map(|b| b + 1).collect());
        TruncatedSeries { rank, grading, bound, low, terms }
    }

    /// Assembles a series from stored terms; terms above `bound` are dropped.
    pub fn from_parts(
        rank: usize,
        grading: Grading,
        bound: Vec<i64>,
        low: Vec<i64>,
        mut terms: BTreeMap<Vec<i32>, LaurentPoly>,
    ) -> Self {
        terms.retain(|e, c| !c.is_zero() && le(&grading.apply(e), &bound));
        TruncatedSeries { rank, grading, bound, low, terms }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn bound(&self) -> &[i64] {
        &self.bound
    }

    pub fn low(&self) -> &[i64] {
        &self.low
    }

    pub fn grading(&self) -> &Grading {
        &self.grading
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i32>, LaurentPoly> {
        &self.terms
    }

    pub fn coefficient(&self, e: &[i32]) -> LaurentPoly {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Drops everything above `bound`.
    pub fn truncate(&self, bound: &[i64]) -> Self {
        let b = vmin(&self.bound, bound);
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| le(&self.grading.apply(e), &b))
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        TruncatedSeries { rank: self.rank, grading: self.grading.clone(), bound: b, low: self.low.clone(), terms }
    }

    pub fn add(&self, o: &Self) -> Self {
        let bound = vmin(&self.bound, &o.bound);
        let mut out = self.truncate(&bound);
        for (e, c) in &o.terms {
            if le(&self.grading.apply(e), &bound) {
                let slot = out.terms.entry(e.clone()).or_default();
                *slot = &*slot + c;
            }
        }
        out.terms.retain(|_, v| !v.is_zero());
        out.low = vmin(&self.low, &o.low);
        out
    }

    /// In-place sum; the bound stays that of `self`.
    pub fn accumulate(&mut self, o: &Self) {
        for (e, c) in &o.terms {
            if le(&self.grading.apply(e), &self.bound) {
                let slot = self.terms.entry(e.clone()).or_default();
                *slot = &*slot + c;
                if slot.is_zero() {
                    self.terms.remove(e);
                }
            }
        }
        self.low = vmin(&self.low, &o.low);
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -&*c;
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let bound = vmin(&vadd(&self.bound, &o.low), &vadd(&o.bound, &self.low));
        let mut terms: BTreeMap<Vec<i32>, LaurentPoly> = BTreeMap::new();
        let right: Vec<(Vec<i64>, &Vec<i32>, &LaurentPoly)> =
            o.terms.iter().map(|(e, c)| (self.grading.apply(e), e, c)).collect();
        for (ea, ca) in &self.terms {
            let sa = self.grading.apply(ea);
            for (sb, eb, cb) in &right {
                if !le(&vadd(&sa, sb), &bound) {
                    continue;
                }
                let e: Vec<i32> = ea.iter().zip(eb.iter()).map(|(x, y)| x + y).collect();
                let slot = terms.entry(e).or_default();
                *slot = &*slot + &(ca * *cb);
            }
        }
        terms.retain(|_, v| !v.is_zero());
        TruncatedSeries { rank: self.rank, grading: self.grading.clone(), bound, low: vadd(&self.low, &o.low), terms }
    }

    /// Multiplies by an exact polynomial.
    pub fn mul_poly(&self, p: &LaurentPoly) -> Self {
        let ps = TruncatedSeries::from_poly(p, self.rank, self.grading.clone(), vec![i64::MAX / 4; self.grading.dim()]);
        self.mul(&ps)
    }

    /// Multiplies by `c·u^e·m` exactly.
    pub fn shift(&self, e: &[i32], m: &Monomial, c: &num_bigint::BigInt) -> Self {
        let s = self.grading.apply(e);
        let terms = self
            .terms
            .iter()
            .map(|(x, p)| {
                let y: Vec<i32> = x.iter().zip(e).map(|(a, b)| a + b).collect();
                (y, p.mul_monomial(m).scale(c))
            })
            .collect();
        TruncatedSeries {
            rank: self.rank,
            grading: self.grading.clone(),
            bound: vadd(&self.bound, &s),
            low: vadd(&self.low, &s),
            terms,
        }
    }

    /// Back to a polynomial (only meaningful for the stored part).
    pub fn to_poly(&self) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e, c) in &self.terms {
            out = &out + &c.mul_monomial(&u_monomial(e));
        }
        out
    }
}

/// Decomposition `f = c·u^e·m·(1 + g)` where every u-exponent of `g` has
/// strictly positive grading.
pub struct UnitLead {
    pub exponent: Vec<i32>,
    pub monomial: Monomial,
    pub sign: bool,
    pub rest: LaurentPoly,
}

/// Finds the unit lead of `f` under `grading`.
pub fn unit_lead(f: &LaurentPoly, rank: usize, grading: &Grading) -> Result<UnitLead, Error> {
    let mut groups: BTreeMap<Vec<i32>, LaurentPoly> = BTreeMap::new();
    for (m, c) in f.terms() {
        let (e, rest) = split_u(m, rank);
        groups.entry(e).or_default().add_term(rest, c.clone());
    }
    groups.retain(|_, v| !v.is_zero());
    if groups.is_empty() {
        return Err(Error::NonUnitLead(alloc::string::String::from("zero series")));
    }
    let graded: Vec<(Vec<i64>, &Vec<i32>)> = groups.keys().map(|e| (grading.apply(e), e)).collect();
    let mut min_s = graded[0].0.clone();
    for (s, _) in &graded {
        min_s = vmin(&min_s, s);
    }
    let slice: Vec<&Vec<i32>> = graded.iter().filter(|(s, _)| *s == min_s).map(|(_, e)| *e).collect();
    let lead_e = match slice.as_slice() {
        [e] => (*e).clone(),
        _ => return Err(Error::NonUnitLead(format!("minimal slice of {f} has {} u-monomials", slice.len()))),
    };
    let coeff = &groups[&lead_e];
    let (m, c) = match coeff.as_monomial() {
        Some((m, c)) if c.abs().is_one() => (m, c),
        _ => return Err(Error::NonUnitLead(format!("lead coefficient {coeff} of {f} is not a unit"))),
    };
    let sign = c.is_negative();
    let inv = u_monomial(&lead_e).mul(&m).inv();
    let mut rest = f.mul_monomial(&inv);
    if sign {
        rest = -rest;
    }
    rest.add_term(Monomial::one(), -num_bigint::BigInt::one());
    for (mm, _) in rest.terms() {
        let (e, _) = split_u(mm, rank);
        let s = grading.apply(&e);
        if s.iter().any(|x| *x < 0) || s.iter().all(|x| *x == 0) {
            return Err(Error::NonUnitLead(format!("{f} has no isolated lead under the grading")));
        }
    }
    Ok(UnitLead { exponent: lead_e, monomial: m, sign, rest })
}

/// `(1 + g)^k` for integer `k`, exact in gradings `≤ bound`; `g` must have
/// strictly positive grading.
pub fn unit_power(g: &LaurentPoly, k: i64, rank: usize, grading: &Grading, bound: &[i64]) -> TruncatedSeries {
    let gs = TruncatedSeries::from_poly(g, rank, grading.clone(), bound.to_vec());
    let mut acc = TruncatedSeries::from_poly(&LaurentPoly::one(), rank, grading.clone(), bound.to_vec());
    let mut term = acc.clone();
    // binomial series: Σ_n C(k, n) g^n
    let mut n: i64 = 0;
    let mut coeff = num_bigint::BigInt::one();
    loop {
        if k >= 0 && n >= k {
            break;
        }
        term = term.mul(&gs);
        term.bound = bound.to_vec();
        term.low = vec![0; grading.dim()];
        n += 1;
        coeff = coeff * num_bigint::BigInt::from(k - n + 1) / num_bigint::BigInt::from(n);
        if term.is_zero() {
            break;
        }
        let mut scaled = term.clone();
        for c in scaled.terms.values_mut() {
            *c = c.scale(&coeff);
        }
        acc = acc.add(&scaled);
    }
    acc.bound = bound.to_vec();
    acc.low = vec![0; grading.dim()];
    acc
}

/// `f^k` as a series exact in gradings `≤ bound`, for `f` with a unit lead.
pub fn series_power(
    f: &LaurentPoly,
    k: i64,
    rank: usize,
    grading: &Grading,
    bound: &[i64],
) -> Result<TruncatedSeries, Error> {
    let lead = unit_lead(f, rank, grading)?;
    let s_lead = grading.apply(&lead.exponent);
    let rel: Vec<i64> = bound.iter().zip(&s_lead).map(|(b, s)| b - s * k).collect();
    let h = unit_power(&lead.rest, k, rank, grading, &rel);
    let e: Vec<i32> = lead.exponent.iter().map(|x| x * k as i32).collect();
    let sign = if lead.sign && k % 2 != 0 { -num_bigint::BigInt::one() } else { num_bigint::BigInt::one() };
    Ok(h.shift(&e, &lead.monomial.pow(k as i32), &sign))
}

/// Inverse of `f` in the `u_pivot` grading, exact for pivot degrees in `[lo, hi]`.
pub fn series_invert(f: &LaurentPoly, rank: usize, pivot: usize, lo: i64, hi: i64) -> Result<TruncatedSeries, Error> {
    let grading = Grading::pivot(rank, pivot);
    let mut s = series_power(f, -1, rank, &grading, &[hi])?;
    s.terms.retain(|e, _| e[pivot] as i64 >= lo);
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_series() {
        let u = LaurentPoly::var(Var::u(0));
        let f = &LaurentPoly::one() - &u.pow(2);
        let g = series_invert(&f, 1, 0, 0, 6).unwrap();
        let expect = &(&(&LaurentPoly::one() + &u.pow(2)) + &u.pow(4)) + &u.pow(6);
        assert_eq!(g.to_poly(), expect);
    }

    #[test]
    fn shifted_lead_is_accepted() {
        let u = LaurentPoly::var(Var::u(0));
        let f = &u + &u.pow(2);
        let g = series_invert(&f, 1, 0, -1, 5).unwrap();
        let prod = TruncatedSeries::from_poly(&f, 1, Grading::pivot(1, 0), vec![100]).mul(&g);
        for (e, c) in prod.terms() {
            if e[0] <= 5 {
                assert_eq!(c.is_one(), e[0] == 0);
            }
        }
        assert_eq!(g.coefficient(&[-1]), LaurentPoly::one());
    }

    #[test]
    fn non_unit_lead_is_rejected() {
        let u = LaurentPoly::var(Var::u(0));
        let f = &LaurentPoly::constant(2) - &u;
        assert!(series_invert(&f, 1, 0, 0, 4).is_err());
    }
}

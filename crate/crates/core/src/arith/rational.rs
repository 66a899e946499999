use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed};

use super::monomial::{Monomial, Var};
use super::poly::LaurentPoly;
use crate::Error;

/// Quotient of two Laurent polynomials. Equality is decided by cross-multiplication.
#[derive(Clone, Debug)]
pub struct RationalFunction {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RationalFunction {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self, Error> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator(format!("{num} / 0")));
        }
        Ok(RationalFunction { num, den })
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        RationalFunction { num: p, den: LaurentPoly::one() }
    }

    pub fn zero() -> Self {
        Self::from_poly(LaurentPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn var(v: Var) -> Self {
        Self::from_poly(LaurentPoly::var(v))
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::from_poly(LaurentPoly::from(m))
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn into_parts(self) -> (LaurentPoly, LaurentPoly) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return RationalFunction { num: &self.num + &o.num, den: self.den.clone() };
        }
        RationalFunction { num: &(&self.num * &o.den) + &(&o.num * &self.den), den: &self.den * &o.den }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        RationalFunction { num: &self.num * &o.num, den: &self.den * &o.den }
    }

    pub fn mul_poly(&self, p: &LaurentPoly) -> Self {
        RationalFunction { num: &self.num * p, den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<Self, Error> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &Self) -> Result<Self, Error> {
        if o.num.is_zero() {
            return Err(Error::ZeroDenominator(format!("({self}) / 0")));
        }
        Ok(RationalFunction { num: &self.num * &o.den, den: &self.den * &o.num })
    }

    pub fn pow(&self, e: i32) -> Result<Self, Error> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs();
        Ok(RationalFunction { num: base.num.pow(k), den: base.den.pow(k) })
    }

    /// Cross-multiplied equality.
    pub fn equals(&self, o: &Self) -> bool {
        &self.num * &o.den == &o.num * &self.den
    }

    /// The exact Laurent polynomial value, when the denominator divides.
    pub fn to_poly(&self) -> Option<LaurentPoly> {
        self.num.exact_divide(&self.den)
    }

    /// Moves the monomial content of the denominator into the numerator,
    /// divides out the common integer content and makes the lex-least
    /// denominator coefficient positive.
    pub fn normalize(&mut self) {
        let c = self.den.monomial_content();
        if !c.is_one() {
            let ci = c.inv();
            self.den = self.den.mul_monomial(&ci);
            self.num = self.num.mul_monomial(&ci);
        }
        let mut g = num_integer::Integer::gcd(&self.den.integer_content(), &self.num.integer_content());
        if self.num.is_zero() {
            self.den = LaurentPoly::one();
            return;
        }
        if let Some((_, lc)) = self.den.trailing_term() {
            if lc.is_negative() {
                g = -g;
            }
        }
        if !g.is_one() {
            self.num = self.num.exact_divide(&LaurentPoly::constant(g.clone())).unwrap();
            self.den = self.den.exact_divide(&LaurentPoly::constant(g)).unwrap();
        }
    }

    pub fn normalized(mut self) -> Self {
        self.normalize();
        self
    }

    /// Normalizes, then cancels every factor from `pool` dividing both sides.
    pub fn reduce_with(&mut self, pool: &[LaurentPoly]) {
        self.normalize();
        if let Some(q) = self.num.exact_divide(&self.den) {
            self.num = q;
            self.den = LaurentPoly::one();
            return;
        }
        for f in pool {
            if f.len() < 2 {
                continue;
            }
            loop {
                if self.den.len() < f.len() {
                    break;
                }
                let Some(dq) = self.den.exact_divide(f) else { break };
                let Some(nq) = self.num.exact_divide(f) else { break };
                self.num = nq;
                self.den = dq;
            }
        }
        self.normalize();
    }

    /// Sets every variable accepted by `pred` to 1.
    pub fn evaluate_ones(&self, pred: impl Fn(Var) -> bool + Copy) -> Result<Self, Error> {
        Self::new(self.num.evaluate_ones(pred), self.den.evaluate_ones(pred))
    }

    pub fn vars(&self) -> alloc::collections::BTreeSet<Var> {
        let mut s = self.num.vars();
        s.extend(self.den.vars());
        s
    }

    /// Simultaneous substitution of variables by rational functions.
    pub fn substitute(&self, map: &BTreeMap<Var, RationalFunction>) -> Result<Self, Error> {
        substitute_pair(&self.num, &self.den, map)
    }
}

/// Substitutes into `num/den` with a shared clearing factor, so that the
/// result is again a quotient of two polynomials.
pub(crate) fn substitute_pair(
    num: &LaurentPoly,
    den: &LaurentPoly,
    map: &BTreeMap<Var, RationalFunction>,
) -> Result<RationalFunction, Error> {
    // exponent span of every mapped, non-monomial variable across num and den
    let mut lo: BTreeMap<Var, i32> = BTreeMap::new();
    let mut hi: BTreeMap<Var, i32> = BTreeMap::new();
    // images of the form ±monomial are applied termwise
    let mut mono_img: BTreeMap<Var, (Monomial, bool)> = BTreeMap::new();
    for (v, r) in map {
        if let (Some((nm, nc)), Some((dm, dc))) = (r.num.as_monomial(), r.den.as_monomial()) {
            if dc.abs().is_one() && nc.abs().is_one() {
                mono_img.insert(*v, (nm.div(&dm), nc.is_negative() != dc.is_negative()));
            }
        }
    }
    for p in [num, den] {
        for (m, _) in p.terms() {
            for &(v, e) in m.pairs() {
                if map.contains_key(&v) && !mono_img.contains_key(&v) {
                    let l = lo.entry(v).or_insert(0);
                    *l = (*l).min(e);
                    let h = hi.entry(v).or_insert(0);
                    *h = (*h).max(e);
                }
            }
        }
    }
    let mut cache: BTreeMap<(Var, bool, u32), LaurentPoly> = BTreeMap::new();
    let mut power = |v: Var, top: bool, k: u32| -> LaurentPoly {
        if k == 0 {
            return LaurentPoly::one();
        }
        cache
            .entry((v, top, k))
            .or_insert_with(|| {
                let r = &map[&v];
                if top {
                    r.num.pow(k)
                } else {
                    r.den.pow(k)
                }
            })
            .clone()
    };
    let mut apply = |p: &LaurentPoly| -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (m, c) in p.terms() {
            let mut mono = Monomial::one();
            let mut coef = c.clone();
            let mut factors: Vec<LaurentPoly> = Vec::new();
            for &(v, e) in m.pairs() {
                if let Some((img, neg)) = mono_img.get(&v) {
                    mono = mono.mul(&img.pow(e));
                    if *neg && e % 2 != 0 {
                        coef = -coef;
                    }
                } else if map.contains_key(&v) {
                    let l = lo[&v];
                    let h = hi[&v];
                    factors.push(power(v, true, (e - l) as u32));
                    factors.push(power(v, false, (h - e) as u32));
                } else {
                    mono = mono.mul(&Monomial::var(v, e));
                }
            }
            // clearing factors for variables absent from this term
            for (&v, &l) in &lo {
                if m.exponent(v) == 0 {
                    factors.push(power(v, true, (-l) as u32));
                    factors.push(power(v, false, hi[&v] as u32));
                }
            }
            let mut t = LaurentPoly::term(mono, coef);
            factors.sort_by_key(|f| f.len());
            for f in &factors {
                if !f.is_one() {
                    t = &t * f;
                }
            }
            out = &out + &t;
        }
        out
    };
    let n = apply(num);
    let d = apply(den);
    RationalFunction::new(n, d)
}

impl PartialEq for RationalFunction {
    fn eq(&self, o: &Self) -> bool {
        self.equals(o)
    }
}

impl From<LaurentPoly> for RationalFunction {
    fn from(p: LaurentPoly) -> Self {
        RationalFunction::from_poly(p)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluating_u_at_one_kills_q2() {
        let u = Var::u(0);
        let num = &LaurentPoly::var_pow(u, -2) - &LaurentPoly::one();
        let den = LaurentPoly::var(Var::ui(0, 1));
        let q2 = RationalFunction::new(num, den).unwrap();
        let e = q2.evaluate_ones(|v| v == u).unwrap();
        assert!(e.is_zero());
    }

    #[test]
    fn substitution_clears_denominators() {
        // x -> 1/(1-y) applied to x^2 - x gives y/(1-y)^2
        let x = Var::x(0);
        let y = LaurentPoly::var(Var::x(1));
        let p = &LaurentPoly::var_pow(x, 2) - &LaurentPoly::var(x);
        let mut map = BTreeMap::new();
        map.insert(x, RationalFunction::new(LaurentPoly::one(), &LaurentPoly::one() - &y).unwrap());
        let r = RationalFunction::from_poly(p).substitute(&map).unwrap();
        let one_minus = &LaurentPoly::one() - &y;
        let expect = RationalFunction::new(y.clone(), one_minus.pow(2)).unwrap();
        assert_eq!(r, expect);
    }

    #[test]
    fn reduce_with_cancels_pool_factor() {
        let x = LaurentPoly::var(Var::x(0));
        let f = &x + &LaurentPoly::one();
        let g = &x - &LaurentPoly::constant(2);
        let mut r = RationalFunction::new(&f * &g, &f * &x).unwrap();
        r.reduce_with(core::slice::from_ref(&f));
        assert_eq!(r.den(), &LaurentPoly::one());
        assert_eq!(r.num(), &g.mul_monomial(&Monomial::var(Var::x(0), -1)));
    }
}

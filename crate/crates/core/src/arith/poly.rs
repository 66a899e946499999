use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::monomial::{Monomial, Var};

/// Sparse Laurent polynomial with arbitrary-precision integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant<C: Into<BigInt>>(c: C) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn var(v: Var) -> Self {
        Self::term(Monomial::var(v, 1), 1)
    }

    pub fn var_pow(v: Var, e: i32) -> Self {
        Self::term(Monomial::var(v, e), 1)
    }

    pub fn term<C: Into<BigInt>>(m: Monomial, c: C) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        LaurentPoly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigInt)>>(it: I) -> Self {
        let mut p = LaurentPoly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().next().map(|(m, c)| m.is_one() && c.is_one()) == Some(true)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, BigInt> {
        self.terms
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Largest term in the monomial order.
    pub fn leading_term(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// Smallest term in the monomial order.
    pub fn trailing_term(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next()
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &LaurentPoly, scale: &BigInt) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * scale);
        }
    }

    pub fn scale(&self, c: &BigInt) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> LaurentPoly {
        if m.is_one() {
            return self.clone();
        }
        LaurentPoly { terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect() }
    }

    pub fn pow(&self, k: u32) -> LaurentPoly {
        if let Some((m, c)) = self.as_monomial() {
            return LaurentPoly::term(m.pow(k as i32), c.pow(k));
        }
        let mut result = LaurentPoly::one();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `Some((m, c))` when the polynomial is the single term `c·m`.
    pub fn as_monomial(&self) -> Option<(Monomial, BigInt)> {
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            Some((m.clone(), c.clone()))
        } else {
            None
        }
    }

    /// Componentwise minimum exponent over all terms.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let first = match it.next() {
            Some(m) => m.clone(),
            None => return Monomial::one(),
        };
        it.fold(first, |acc, m| acc.min_with(m))
    }

    /// Componentwise maximum exponent over all terms.
    pub fn monomial_span_max(&self) -> Monomial {
        let mut it = self.terms.keys();
        let first = match it.next() {
            Some(m) => m.clone(),
            None => return Monomial::one(),
        };
        it.fold(first, |acc, m| acc.max_with(m))
    }

    /// Non-negative gcd of the coefficients.
    pub fn integer_content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut s = BTreeSet::new();
        for m in self.terms.keys() {
            for &(v, _) in m.pairs() {
                s.insert(v);
            }
        }
        s
    }

    /// True if no term mentions a variable rejected by `allowed`.
    pub fn only_uses(&self, allowed: impl Fn(Var) -> bool) -> bool {
        self.terms.keys().all(|m| m.pairs().iter().all(|p| allowed(p.0)))
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|m| m.is_polynomial())
    }

    /// Sets every variable accepted by `pred` to 1.
    pub fn evaluate_ones(&self, pred: impl Fn(Var) -> bool) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.filter(|v| !pred(v)), c.clone());
        }
        out
    }

    /// Sends each variable to a monomial (identity when `f` returns `None`).
    pub fn substitute_monomials(&self, f: impl Fn(Var) -> Option<(Monomial, BigInt)>) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (m, c) in &self.terms {
            let mut mono = Monomial::one();
            let mut coef = c.clone();
            for &(v, e) in m.pairs() {
                match f(v) {
                    Some((img, k)) => {
                        mono = mono.mul(&img.pow(e));
                        if e < 0 {
                            if k.abs().is_one() {
                                if k.is_negative() && e % 2 != 0 {
                                    coef = -coef;
                                }
                            } else {
                                panic!("monomial substitution with non-unit coefficient and negative exponent");
                            }
                        } else {
                            coef *= k.pow(e as u32);
                        }
                    }
                    None => mono = mono.mul(&Monomial::var(v, e)),
                }
            }
            out.add_term(mono, coef);
        }
        out
    }

    /// Splits off the dependence on `split`: returns a map from the restricted
    /// monomial to the remaining coefficient polynomial.
    pub fn collect_by(&self, split: impl Fn(Var) -> bool) -> BTreeMap<Monomial, LaurentPoly> {
        let mut out: BTreeMap<Monomial, LaurentPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let key = m.filter(&split);
            let rest = m.filter(|v| !split(v));
            out.entry(key).or_default().add_term(rest, c.clone());
        }
        out
    }

    /// Exact quotient `self / b` in the Laurent ring, or `None`.
    ///
    /// Both operands are shifted to genuine polynomials with no monomial
    /// factor; the Laurent quotient exists iff the polynomial one does.
    pub fn exact_divide(&self, b: &LaurentPoly) -> Option<LaurentPoly> {
        assert!(!b.is_zero(), "exact_divide by zero polynomial");
        if self.is_zero() {
            return Some(LaurentPoly::zero());
        }
        if let Some((mb, cb)) = b.as_monomial() {
            let inv = mb.inv();
            let mut terms = BTreeMap::new();
            for (m, c) in &self.terms {
                let (q, r) = c.div_rem(&cb);
                if !r.is_zero() {
                    return None;
                }
                terms.insert(m.mul(&inv), q);
            }
            return Some(LaurentPoly { terms });
        }
        let ca = self.monomial_content();
        let cb = b.monomial_content();
        let a1 = self.mul_monomial(&ca.inv());
        let b1 = b.mul_monomial(&cb.inv());
        let (lm_b, lc_b) = {
            let (m, c) = b1.leading_term().unwrap();
            (m.clone(), c.clone())
        };
        let mut r = a1.terms;
        let mut q: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        while let Some((lm_r, lc_r)) = r.iter().next_back() {
            let m = lm_r.div(&lm_b);
            if !m.is_polynomial() {
                return None;
            }
            let (c, rem) = lc_r.div_rem(&lc_b);
            if !rem.is_zero() {
                return None;
            }
            for (mb, cbv) in &b1.terms {
                let key = mb.mul(&m);
                let delta = &c * cbv;
                match r.entry(key) {
                    alloc::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(-delta);
                    }
                    alloc::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() -= delta;
                        if e.get().is_zero() {
                            e.remove();
                        }
                    }
                }
            }
            q.insert(m, c);
        }
        let shift = ca.div(&cb);
        Some(LaurentPoly { terms: q }.mul_monomial(&shift))
    }

    /// Canonical text: terms in decreasing monomial order, explicit exponents.
    pub fn render_with(&self, name: &dyn Fn(Var) -> String) -> String {
        use core::fmt::Write;
        if self.terms.is_empty() {
            return String::from("0");
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut mono = String::new();
            for (j, &(v, e)) in m.pairs().iter().enumerate() {
                if j > 0 {
                    mono.push('*');
                }
                mono.push_str(&name(v));
                if e != 1 {
                    let _ = write!(mono, "^{e}");
                }
            }
            if mono.is_empty() {
                let _ = write!(out, "{abs}");
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                let _ = write!(out, "{abs}*{mono}");
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_with(&|v| alloc::format!("{v}")))
    }
}

impl From<Monomial> for LaurentPoly {
    fn from(m: Monomial) -> Self {
        LaurentPoly::term(m, 1)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let (big, small) = if self.len() >= rhs.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let (outer, inner) = if self.len() <= rhs.len() { (self, rhs) } else { (rhs, self) };
        let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (ma, ca) in &outer.terms {
            for (mb, cb) in &inner.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.entry(m) {
                    alloc::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                    alloc::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() += c;
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        LaurentPoly { terms: acc }
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> LaurentPoly {
        LaurentPoly::var(Var::x(0))
    }

    #[test]
    fn divides_difference_of_squares() {
        let a = &(&x() * &x()) - &LaurentPoly::one();
        let b = &x() - &LaurentPoly::one();
        let q = a.exact_divide(&b).unwrap();
        assert_eq!(q, &x() + &LaurentPoly::one());
    }

    #[test]
    fn rejects_non_divisor() {
        let a = &(&x() * &x()) + &LaurentPoly::one();
        let b = &x() - &LaurentPoly::one();
        assert!(a.exact_divide(&b).is_none());
    }

    #[test]
    fn laurent_division_shifts_monomials() {
        let xi = LaurentPoly::var_pow(Var::x(0), -3);
        let a = &(&x() * &x()) - &LaurentPoly::one();
        let b = &x() + &LaurentPoly::one();
        let q = (&a * &xi).exact_divide(&(&b * &LaurentPoly::var_pow(Var::x(0), 2))).unwrap();
        let expect = &(&x() - &LaurentPoly::one()) * &LaurentPoly::var_pow(Var::x(0), -5);
        assert_eq!(q, expect);
    }

    #[test]
    fn renders_in_decreasing_order() {
        let t = LaurentPoly::var(Var::t(0));
        let p = &t.pow(3) - &t.scale(&BigInt::from(2));
        assert_eq!(p.render_with(&|_| String::from("t")), "t^3 - 2*t");
    }
}

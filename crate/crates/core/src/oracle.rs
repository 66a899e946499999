//! Brute-force multiplicity oracles: the sl₂ tensor rule, the Catalan residue
//! formula, and a character ring for type A at small rank.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::{AlgebraSpec, Family};
use crate::arith::{LaurentPoly, Var};
use crate::fermionic::{n_sum, SumInstance};
use crate::qsystem::solve_q_system;
use crate::Error;

/// Multiplicity of `V(l)` in `⊗_i V(i)^{⊗n_i}` for sl₂, with `n[i-1] = n_i`.
pub fn clebsch_gordan_multiplicity(l: usize, n: &[i64]) -> BigInt {
    // highest weight -> multiplicity
    let mut decomposition: BTreeMap<usize, BigInt> = BTreeMap::new();
    decomposition.insert(0, BigInt::one());
    for (idx, &count) in n.iter().enumerate() {
        let b = idx + 1;
        for _ in 0..count.max(0) {
            let mut next: BTreeMap<usize, BigInt> = BTreeMap::new();
            for (&a, mult) in &decomposition {
                let lo = a.abs_diff(b);
                for c in (lo..=a + b).step_by(2) {
                    *next.entry(c).or_default() += mult;
                }
            }
            decomposition = next;
        }
    }
    decomposition.remove(&l).unwrap_or_default()
}

/// `c_0, …, c_{count-1}` by `c_{s+1} = c_s·2(2s+1)/(s+2)`.
pub fn catalan_numbers(count: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(count);
    let mut c = BigInt::one();
    for s in 0..count {
        out.push(c.clone());
        let s = s as u64;
        c = c * BigInt::from(2 * (2 * s + 1)) / BigInt::from(s + 2);
    }
    out
}

/// Smallest Catalan truncation order that resolves the constant term.
pub fn catalan_order_needed(l: usize, n: &[i64]) -> usize {
    let degree: i64 = n.iter().enumerate().map(|(i, &c)| (i as i64 + 1) * c).sum::<i64>() + 1;
    let spare = degree - l as i64 - 1;
    if spare <= 0 {
        0
    } else {
        (spare / 2) as usize
    }
}

/// Dense integer coefficients, index = degree.
type Univariate = Vec<BigInt>;

fn umul(a: &Univariate, b: &Univariate) -> Univariate {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn chebyshev_dense(jmax: usize) -> Vec<Univariate> {
    let mut out: Vec<Univariate> = vec![vec![BigInt::one()], vec![BigInt::zero(), BigInt::one()]];
    while out.len() <= jmax {
        let n = out.len();
        let mut next = vec![BigInt::zero(); n + 1];
        for (i, c) in out[n - 1].iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, c) in out[n - 2].iter().enumerate() {
            next[i] -= c;
        }
        out.push(next);
    }
    out
}

/// Constant term in `u` of `∏U_i(u⁻¹)^{n_i}·U_1(u⁻¹)·z(u)^{l+1}`, where
/// `z(u) = u·C(u²)` and the Catalan series `C` is cut after `order`.
pub fn catalan_residue_multiplicity(l: usize, n: &[i64], order: usize) -> Result<BigInt, Error> {
    let needed = catalan_order_needed(l, n);
    if order < needed {
        return Err(Error::Domain(format!("Catalan order {order} too small, need at least {needed}")));
    }
    let cheb = chebyshev_dense(n.len().max(1));
    // polynomial in x = u⁻¹
    let mut p: Univariate = cheb[1].clone();
    for (idx, &count) in n.iter().enumerate() {
        for _ in 0..count.max(0) {
            p = umul(&p, &cheb[idx + 1]);
        }
    }
    // C(y)^{l+1} truncated at y^order; z^{l+1} = u^{l+1}·C(u²)^{l+1}
    let cat = catalan_numbers(order + 1);
    let mut cpow: Univariate = vec![BigInt::one()];
    for _ in 0..=l {
        cpow = umul(&cpow, &cat);
        cpow.truncate(order + 1);
    }
    let mut total = BigInt::zero();
    for (s, c) in cpow.iter().enumerate() {
        let d = l + 1 + 2 * s;
        if let Some(x) = p.get(d) {
            total += x * c;
        }
    }
    Ok(total)
}

/// Weight multiset, weights in the fundamental-weight basis.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CharacterElement {
    terms: BTreeMap<Vec<i64>, BigInt>,
}

impl CharacterElement {
    pub fn zero() -> Self {
        CharacterElement::default()
    }

    pub fn one(rank: usize) -> Self {
        CharacterElement::weight(vec![0; rank])
    }

    pub fn weight(mu: Vec<i64>) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(mu, BigInt::one());
        CharacterElement { terms }
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, BigInt> {
        &self.terms
    }

    pub fn multiplicity(&self, mu: &[i64]) -> BigInt {
        self.terms.get(mu).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn dimension(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn add_scaled(&mut self, o: &Self, c: &BigInt) {
        for (mu, m) in &o.terms {
            let slot = self.terms.entry(mu.clone()).or_default();
            *slot += m * c;
            if slot.is_zero() {
                self.terms.remove(mu);
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(o, &BigInt::one());
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(o, &-BigInt::one());
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = CharacterElement::zero();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let mu: Vec<i64> = a.iter().zip(b).map(|(p, q)| p + q).collect();
                let slot = out.terms.entry(mu).or_default();
                *slot += x * y;
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    pub fn pow(&self, k: u32, rank: usize) -> Self {
        let mut out = CharacterElement::one(rank);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Invariance under every simple reflection `μ ↦ μ − μ_i α_i`.
    pub fn is_weyl_symmetric(&self, spec: &AlgebraSpec) -> bool {
        self.terms.iter().all(|(mu, m)| {
            (0..spec.rank).all(|i| {
                let reflected: Vec<i64> = (0..spec.rank).map(|j| mu[j] - mu[i] * spec.c(i, j)).collect();
                self.terms.get(&reflected) == Some(m)
            })
        })
    }
}

/// Positive roots in simple-root coordinates (type A: consecutive sums).
fn positive_roots(spec: &AlgebraSpec) -> Vec<Vec<i64>> {
    let r = spec.rank;
    let mut out = Vec::new();
    for i in 0..r {
        for j in i..r {
            let mut c = vec![0; r];
            for x in c.iter_mut().take(j + 1).skip(i) {
                *x = 1;
            }
            out.push(c);
        }
    }
    out
}

/// Simple-root coordinates to the fundamental-weight basis.
fn root_to_weight(spec: &AlgebraSpec, c: &[i64]) -> Vec<i64> {
    (0..spec.rank).map(|j| (0..spec.rank).map(|i| c[i] * spec.c(i, j)).sum()).collect()
}

/// `det(C)·(λ, μ)` for weights in the fundamental-weight basis.
fn scaled_form(adj: &[Vec<i64>], a: &[i64], b: &[i64]) -> i64 {
    let mut s = 0;
    for (i, row) in adj.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            s += a[i] * x * b[j];
        }
    }
    s
}

fn check_type_a(spec: &AlgebraSpec) -> Result<(), Error> {
    if spec.family != Family::A || spec.rank > 3 {
        return Err(Error::InvalidAlgebra(format!("character oracle supports A1..A3, not {}", spec.name())));
    }
    Ok(())
}

fn check_dominant(spec: &AlgebraSpec, lambda: &[i64]) -> Result<(), Error> {
    if lambda.len() != spec.rank {
        return Err(Error::Shape(format!("weight has {} entries, rank is {}", lambda.len(), spec.rank)));
    }
    if lambda.iter().any(|&x| x < 0) {
        return Err(Error::Domain(format!("{lambda:?} is not dominant")));
    }
    Ok(())
}

/// `dim V(λ) = ∏_{α>0} ⟨λ+ρ, α^∨⟩ / ⟨ρ, α^∨⟩`.
pub fn weyl_dimension(spec: &AlgebraSpec, lambda: &[i64]) -> Result<BigInt, Error> {
    check_type_a(spec)?;
    check_dominant(spec, lambda)?;
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for root in positive_roots(spec) {
        let h: i64 = root.iter().sum();
        let s: i64 = root.iter().zip(lambda).map(|(c, l)| c * (l + 1)).sum();
        num *= BigInt::from(s);
        den *= BigInt::from(h);
    }
    Ok(num / den)
}

/// `ch V(λ)` by Freudenthal's recursion, checked against the Weyl dimension.
pub fn weyl_character(spec: &AlgebraSpec, lambda: &[i64]) -> Result<CharacterElement, Error> {
    check_type_a(spec)?;
    check_dominant(spec, lambda)?;
    let r = spec.rank;
    let adj = spec.adjugate();
    let roots: Vec<(Vec<i64>, Vec<i64>)> = positive_roots(spec)
        .into_iter()
        .map(|c| {
            let w = root_to_weight(spec, &c);
            (c, w)
        })
        .collect();
    let simple: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|j| spec.c(i, j)).collect()).collect();
    let rho = vec![1i64; r];
    let shift = |mu: &[i64]| -> Vec<i64> { mu.iter().zip(&rho).map(|(a, b)| a + b).collect() };
    let top = shift(lambda);
    let top_norm = scaled_form(&adj, &top, &top);
    let top_height = scaled_height(&adj, lambda);

    let mut mult: BTreeMap<Vec<i64>, BigInt> = BTreeMap::new();
    mult.insert(lambda.to_vec(), BigInt::one());
    let mut layer: Vec<Vec<i64>> = vec![lambda.to_vec()];
    while !layer.is_empty() {
        let mut candidates: Vec<Vec<i64>> = Vec::new();
        for mu in &layer {
            for a in &simple {
                let next: Vec<i64> = mu.iter().zip(a).map(|(x, y)| x - y).collect();
                if !candidates.contains(&next) {
                    candidates.push(next);
                }
            }
        }
        let mut next_layer = Vec::new();
        for mu in candidates {
            let sh = shift(&mu);
            let den = top_norm - scaled_form(&adj, &sh, &sh);
            let mut num = BigInt::zero();
            for (_, alpha) in &roots {
                let mut nu = mu.clone();
                loop {
                    for (x, y) in nu.iter_mut().zip(alpha) {
                        *x += y;
                    }
                    if scaled_height(&adj, &nu) > top_height {
                        break;
                    }
                    if let Some(m) = mult.get(&nu) {
                        num += m * BigInt::from(2 * scaled_form(&adj, &nu, alpha));
                    }
                }
            }
            if num.is_zero() {
                continue;
            }
            if den <= 0 {
                return Err(Error::Domain(format!("Freudenthal denominator vanishes at {mu:?}")));
            }
            let (q, rem) = num.div_rem(&BigInt::from(den));
            if !rem.is_zero() || q.is_negative() {
                return Err(Error::NotDivisible(format!("Freudenthal step at {mu:?}")));
            }
            if !q.is_zero() {
                mult.insert(mu.clone(), q);
                next_layer.push(mu);
            }
        }
        layer = next_layer;
    }
    let ch = CharacterElement { terms: mult };
    let dim = weyl_dimension(spec, lambda)?;
    if ch.dimension() != dim {
        return Err(Error::Domain(format!("character of {lambda:?} has dimension {}, expected {dim}", ch.dimension())));
    }
    Ok(ch)
}

/// Height of a weight scaled by `det C`: the sum of its simple-root coordinates.
fn scaled_height(adj: &[Vec<i64>], mu: &[i64]) -> i64 {
    adj.iter().map(|row| row.iter().zip(mu).map(|(a, b)| a * b).sum::<i64>()).sum()
}

/// Splits a character into irreducibles, peeling the highest dominant weight
/// (by height, then lexicographically) each time.
pub fn decompose(spec: &AlgebraSpec, ch: &CharacterElement) -> Result<BTreeMap<Vec<i64>, BigInt>, Error> {
    check_type_a(spec)?;
    let adj = spec.adjugate();
    let mut rest = ch.clone();
    let mut out = BTreeMap::new();
    while !rest.is_zero() {
        let top = rest
            .terms
            .keys()
            .filter(|mu| mu.iter().all(|&x| x >= 0))
            .max_by(|a, b| scaled_height(&adj, a).cmp(&scaled_height(&adj, b)).then_with(|| a.cmp(b)))
            .cloned()
            .ok_or_else(|| Error::Domain(format!("no dominant weight left in {:?}", rest.terms)))?;
        let m = rest.multiplicity(&top);
        if m.is_negative() {
            return Err(Error::Domain(format!("negative multiplicity at {top:?}")));
        }
        rest.add_scaled(&weyl_character(spec, &top)?, &-m.clone());
        out.insert(top, m);
    }
    Ok(out)
}

/// Multiplicity of `V(μ)` in `⊗ V(λ_f)`.
pub fn tensor_multiplicity(spec: &AlgebraSpec, factors: &[Vec<i64>], target: &[i64]) -> Result<BigInt, Error> {
    check_type_a(spec)?;
    check_dominant(spec, target)?;
    let mut ch = CharacterElement::one(spec.rank);
    for f in factors {
        ch = ch.mul(&weyl_character(spec, f)?);
    }
    Ok(decompose(spec, &ch)?.remove(target).unwrap_or_default())
}

/// `ch V(i·ω_α)`.
fn kr_character(spec: &AlgebraSpec, a: usize, i: usize) -> Result<CharacterElement, Error> {
    let mut lambda = vec![0; spec.rank];
    lambda[a] = i as i64;
    weyl_character(spec, &lambda)
}

/// `∏ ch V(iω_α)^{n_{α,i}} = Σ_λ N_{λ;n}·ch V(λ)`, with `λ` running over the
/// dominant weights of the product.
pub fn verify_hkoty_character_identity(spec: &AlgebraSpec, n: &[Vec<i64>], levels: usize) -> Result<bool, Error> {
    check_type_a(spec)?;
    let inst0 = SumInstance::new(spec.clone(), vec![0; spec.rank], n.to_vec(), levels)?;
    let mut lhs = CharacterElement::one(spec.rank);
    for (a, row) in inst0.n.iter().enumerate() {
        for (idx, &c) in row.iter().enumerate() {
            if c > 0 {
                lhs = lhs.mul(&kr_character(spec, a, idx + 1)?.pow(c as u32, spec.rank));
            }
        }
    }
    // strings are never longer than Σ i·n_{α,i}, so N is unrestricted from that level on
    let weight: i64 = inst0.n.iter().flat_map(|row| row.iter().enumerate().map(|(i, &c)| (i as i64 + 1) * c)).sum();
    let inst0 = inst0.with_level(levels.max(weight as usize))?;
    let mut rhs = CharacterElement::zero();
    let dominant: Vec<Vec<i64>> = lhs.terms.keys().filter(|mu| mu.iter().all(|&x| x >= 0)).cloned().collect();
    for lambda in dominant {
        let inst = SumInstance { lambda: lambda.clone(), ..inst0.clone() };
        let nl = n_sum(&inst);
        if !nl.is_zero() {
            rhs.add_scaled(&weyl_character(spec, &lambda)?, &nl);
        }
    }
    Ok(lhs == rhs)
}

/// Evaluates a polynomial in the `t_α` at `t_α = ch V(ω_α)`.
pub fn evaluate_in_characters(spec: &AlgebraSpec, p: &LaurentPoly) -> Result<CharacterElement, Error> {
    let fundamentals: Vec<CharacterElement> =
        (0..spec.rank).map(|a| kr_character(spec, a, 1)).collect::<Result<_, _>>()?;
    let mut out = CharacterElement::zero();
    for (m, c) in p.terms() {
        let mut term = CharacterElement::one(spec.rank);
        for &(v, e) in m.pairs() {
            let a = (0..spec.rank)
                .find(|&a| v == Var::t(a))
                .ok_or_else(|| Error::Domain(format!("{v} is not a fundamental variable")))?;
            if e < 0 {
                return Err(Error::Domain(format!("negative power of {v}")));
            }
            term = term.mul(&fundamentals[a].pow(e as u32, spec.rank));
        }
        out.add_scaled(&term, c);
    }
    Ok(out)
}

/// Type A: the Q-system solution maps to `Q_{α,i} = ch V(iω_α)`.
pub fn q_system_matches_characters(spec: &AlgebraSpec, levels: usize) -> Result<bool, Error> {
    check_type_a(spec)?;
    let table = solve_q_system(spec, levels)?;
    for a in 0..spec.rank {
        for i in 0..=levels {
            if evaluate_in_characters(spec, table.get(a, i)?)? != kr_character(spec, a, i)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_algebra;

    #[test]
    fn clebsch_gordan_examples() {
        assert_eq!(clebsch_gordan_multiplicity(0, &[2]), BigInt::from(1));
        assert_eq!(clebsch_gordan_multiplicity(1, &[3]), BigInt::from(2));
        assert_eq!(clebsch_gordan_multiplicity(0, &[4]), BigInt::from(2));
    }

    #[test]
    fn catalan() {
        let c: Vec<i64> = catalan_numbers(5).iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(c, [1, 1, 2, 5, 14]);
        assert_eq!(catalan_residue_multiplicity(0, &[2], 1).unwrap(), BigInt::from(1));
        assert_eq!(catalan_residue_multiplicity(2, &[2], 0).unwrap(), BigInt::from(1));
        assert!(catalan_residue_multiplicity(0, &[6], 2).is_err());
    }

    #[test]
    fn a2_characters() {
        let a2 = build_algebra(Family::A, 2).unwrap();
        let ch = weyl_character(&a2, &[1, 0]).unwrap();
        assert_eq!(ch.terms().len(), 3);
        assert!(ch.terms().values().all(|m| m.is_one()));
        let adj = weyl_character(&a2, &[1, 1]).unwrap();
        assert_eq!(adj.multiplicity(&[0, 0]), BigInt::from(2));
        assert!(adj.is_weyl_symmetric(&a2));
        assert_eq!(tensor_multiplicity(&a2, &[vec![1, 0], vec![1, 0]], &[0, 1]).unwrap(), BigInt::from(1));
        assert_eq!(tensor_multiplicity(&a2, &[vec![1, 0], vec![0, 1]], &[0, 0]).unwrap(), BigInt::from(1));
    }

    #[test]
    fn character_identity_examples() {
        let a1 = build_algebra(Family::A, 1).unwrap();
        assert!(verify_hkoty_character_identity(&a1, &[vec![2]], 1).unwrap());
        let a2 = build_algebra(Family::A, 2).unwrap();
        assert!(verify_hkoty_character_identity(&a2, &[vec![2], vec![0]], 1).unwrap());
        assert!(verify_hkoty_character_identity(&a2, &[vec![1], vec![1]], 1).unwrap());
    }

    #[test]
    fn non_type_a_rejected() {
        let b2 = build_algebra(Family::B, 2).unwrap();
        assert!(weyl_character(&b2, &[1, 0]).is_err());
        let a2 = build_algebra(Family::A, 2).unwrap();
        assert!(weyl_character(&a2, &[-1, 0]).is_err());
    }
}

//! The classical Q-system, solved as polynomials in the fundamental variables
//! `Q_{α,1} = t_α`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{AlgebraSpec, Family};
use crate::arith::{LaurentPoly, Var};
use crate::Error;

#[derive(Clone, Debug)]
pub struct QSystemTable {
    pub spec: AlgebraSpec,
    pub entries: BTreeMap<(usize, usize), LaurentPoly>,
    /// highest computed level per node
    pub levels: Vec<usize>,
}

fn floor_indices(spec: &AlgebraSpec, a: usize, b: usize, j: usize) -> Vec<usize> {
    let cab = spec.c(a, b).unsigned_abs() as usize;
    let cba = spec.c(b, a).unsigned_abs() as usize;
    (0..cab).map(|k| (cba * j + k) / cab).collect()
}

impl QSystemTable {
    pub fn get(&self, a: usize, j: usize) -> Result<&LaurentPoly, Error> {
        self.entries.get(&(a, j)).ok_or_else(|| Error::Depth(format!("Q_({},{j}) not computed", a + 1)))
    }

    /// `T_j^{(α,β)}` from the general floor formula.
    pub fn pair_t_term(&self, a: usize, b: usize, j: usize) -> Result<LaurentPoly, Error> {
        let mut out = LaurentPoly::one();
        for i in floor_indices(&self.spec, a, b, j) {
            out = &out * self.get(b, i)?;
        }
        Ok(out)
    }

    /// `∏_{β∼α} T_j^{(α,β)}`.
    pub fn t_term(&self, a: usize, j: usize) -> Result<LaurentPoly, Error> {
        let mut out = LaurentPoly::one();
        for &b in &self.spec.adjacency[a] {
            out = &out * &self.pair_t_term(a, b, j)?;
        }
        Ok(out)
    }

    /// Every entry with all fundamental variables set to 1.
    pub fn evaluate_at_ones(&self) -> BTreeMap<(usize, usize), num_bigint::BigInt> {
        self.entries
            .iter()
            .map(|(&key, p)| (key, p.evaluate_ones(|_| true).coefficient(&crate::arith::Monomial::one())))
            .collect()
    }

    /// Checks the defining relation at every stored level.
    pub fn check_relations(&self) -> Result<(), Error> {
        for (&(a, j), q) in &self.entries {
            if j < 2 {
                continue;
            }
            let lhs = q * self.get(a, j - 2)?;
            let prev = self.get(a, j - 1)?;
            let rhs = &(prev * prev) - &self.t_term(a, j - 1)?;
            if lhs != rhs {
                return Err(Error::NotDivisible(format!("relation fails at ({}, {j})", a + 1)));
            }
        }
        Ok(())
    }
}

/// `T_j^{(α,β)}` read off the per-family exception lists; `None` for pairs
/// that follow the plain rule `Q_{β,j}^{|C_{αβ}|}`.
pub fn explicit_pair_t_term(table: &QSystemTable, a: usize, b: usize, j: usize) -> Result<Option<LaurentPoly>, Error> {
    let spec = &table.spec;
    let r = spec.rank;
    let q = |x: usize, i: usize| table.get(x, i).cloned();
    // one-based node pairs of the lists
    let (a1, b1) = (a + 1, b + 1);
    let halves = |x: usize| -> Result<LaurentPoly, Error> { Ok(&q(x, j / 2)? * &q(x, j.div_ceil(2))?) };
    let out = match spec.family {
        Family::B if (a1, b1) == (r - 1, r) => q(b, 2 * j)?,
        Family::B if (a1, b1) == (r, r - 1) => halves(b)?,
        Family::C if (a1, b1) == (r - 1, r) => halves(b)?,
        Family::C if (a1, b1) == (r, r - 1) => q(b, 2 * j)?,
        Family::F if (a1, b1) == (3, 2) => halves(b)?,
        Family::F if (a1, b1) == (2, 3) => q(b, 2 * j)?,
        Family::G if (a1, b1) == (2, 1) => &(&q(0, j / 3)? * &q(0, (j + 1) / 3)?) * &q(0, j.div_ceil(3))?,
        Family::G if (a1, b1) == (1, 2) => q(1, 3 * j)?,
        _ => return Ok(None),
    };
    Ok(Some(out))
}

/// The plain rule `Q_{β,j}^{|C_{αβ}|}`.
pub fn plain_pair_t_term(table: &QSystemTable, a: usize, b: usize, j: usize) -> Result<LaurentPoly, Error> {
    Ok(table.get(b, j)?.pow(table.spec.c(a, b).unsigned_abs() as u32))
}

/// Solves the Q-system up to level `t_α·max_scaled_level` on every node.
///
/// Steps are taken in increasing `j/t_α`, except that a step waits until the
/// entries its T-term needs exist (e.g. `Q_{2,5}` of G₂ needs `Q_{1,2}`).
pub fn solve_q_system(spec: &AlgebraSpec, max_scaled_level: usize) -> Result<QSystemTable, Error> {
    if max_scaled_level == 0 {
        return Err(Error::Domain(alloc::string::String::from("max_scaled_level must be at least 1")));
    }
    let r = spec.rank;
    let tmax = spec.max_t() as usize;
    let mut table = QSystemTable { spec: spec.clone(), entries: BTreeMap::new(), levels: vec![1; r] };
    for a in 0..r {
        table.entries.insert((a, 0), LaurentPoly::one());
        table.entries.insert((a, 1), LaurentPoly::var(Var::t(a)));
    }
    let mut steps: Vec<(usize, i64, usize, usize)> = Vec::new();
    for a in 0..r {
        let t = spec.t[a] as usize;
        for j in 2..=t * max_scaled_level {
            steps.push((j * (tmax / t), spec.t[a], a, j));
        }
    }
    steps.sort();
    let mut pending: Vec<(usize, usize)> = steps.into_iter().map(|s| (s.2, s.3)).collect();
    while !pending.is_empty() {
        let ready = pending.iter().position(|&(a, j)| table.t_term(a, j - 1).is_ok() && table.get(a, j - 1).is_ok());
        let Some(pos) = ready else {
            let (a, j) = pending[0];
            return Err(table.t_term(a, j - 1).err().unwrap_or(Error::Depth(format!("Q_({},{})", a + 1, j - 1))));
        };
        let (a, j) = pending.remove(pos);
        let prev = table.get(a, j - 1)?.clone();
        let tt = table.t_term(a, j - 1)?;
        let num = &(&prev * &prev) - &tt;
        let den = table.get(a, j - 2)?;
        let q = num.exact_divide(den).ok_or_else(|| {
            Error::NotDivisible(format!("{}: Q_({},{j}) = ({num}) / ({den}) is not a polynomial", spec.name(), a + 1))
        })?;
        table.entries.insert((a, j), q);
        table.levels[a] = j;
    }
    Ok(table)
}

/// Chebyshev polynomials of the second kind in `t_1` by the three-term recurrence.
pub fn chebyshev_u(jmax: usize) -> Vec<LaurentPoly> {
    let t = LaurentPoly::var(Var::t(0));
    let mut out = vec![LaurentPoly::one(), t.clone()];
    while out.len() <= jmax {
        let n = out.len();
        out.push(&(&t * &out[n - 1]) - &out[n - 2]);
    }
    out.truncate(jmax + 1);
    out
}

/// `U_1·U_k = U_{k-1} + U_{k+1}` and `Q_j = U_j` for sl₂ up to `jmax`.
pub fn chebyshev_check(jmax: usize) -> bool {
    let u = chebyshev_u(jmax + 1);
    for k in 1..=jmax {
        if &u[1] * &u[k] != &u[k - 1] + &u[k + 1] {
            return false;
        }
    }
    let spec = crate::algebra::build_algebra(Family::A, 1).expect("A1 exists");
    let Ok(table) = solve_q_system(&spec, jmax.max(1)) else { return false };
    (0..=jmax).all(|j| table.get(0, j).map(|q| *q == u[j]).unwrap_or(false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_algebra;

    fn t(a: usize) -> LaurentPoly {
        LaurentPoly::var(Var::t(a))
    }

    #[test]
    fn sl2_levels() {
        let tab = solve_q_system(&build_algebra(Family::A, 1).unwrap(), 3).unwrap();
        assert_eq!(tab.get(0, 2).unwrap(), &(&t(0).pow(2) - &LaurentPoly::one()));
        assert_eq!(tab.get(0, 3).unwrap(), &(&t(0).pow(3) - &t(0).scale(&2.into())));
    }

    #[test]
    fn a2_and_b2_levels() {
        let tab = solve_q_system(&build_algebra(Family::A, 2).unwrap(), 2).unwrap();
        assert_eq!(tab.get(0, 2).unwrap(), &(&t(0).pow(2) - &t(1)));
        let tab = solve_q_system(&build_algebra(Family::B, 2).unwrap(), 1).unwrap();
        assert_eq!(tab.get(1, 2).unwrap(), &(&t(1).pow(2) - &t(0)));
        let tab = solve_q_system(&build_algebra(Family::B, 2).unwrap(), 2).unwrap();
        let expect = &(&t(0).pow(2) - &t(1).pow(2)) + &t(0);
        assert_eq!(tab.get(0, 2).unwrap(), &expect);
    }

    #[test]
    fn t_terms_on_b2_and_g2() {
        let b2 = solve_q_system(&build_algebra(Family::B, 2).unwrap(), 2).unwrap();
        assert_eq!(b2.t_term(0, 1).unwrap(), b2.get(1, 2).unwrap().clone());
        assert_eq!(b2.t_term(1, 1).unwrap(), t(0));
        let g2 = solve_q_system(&build_algebra(Family::G, 2).unwrap(), 2).unwrap();
        assert_eq!(g2.t_term(0, 2).unwrap(), g2.get(1, 6).unwrap().clone());
    }

    #[test]
    fn chebyshev() {
        assert!(chebyshev_check(6));
        let u = chebyshev_u(3);
        assert_eq!(u[0], LaurentPoly::one());
        assert_eq!(u[1], t(0));
        assert_eq!(&(&u[2] * &u[2]) - &(&u[1] * &u[3]), LaurentPoly::one());
    }
}

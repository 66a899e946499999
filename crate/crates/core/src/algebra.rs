//! Root data for the simple Lie algebras.
//!
//! Cartan entries follow `C_{αβ} = 2(α_α, α_β)/(α_α, α_α)`, so the row of a
//! short node carries the entry of absolute value greater than one. Nodes are
//! stored zero-based; user-facing text is one-based.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::Error;

/// Default upper bound on the rank accepted by [`build_algebra`].
pub const DEFAULT_MAX_RANK: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraSpec {
    pub family: Family,
    pub rank: usize,
    pub cartan: Vec<Vec<i64>>,
    pub t: Vec<i64>,
    pub adjacency: Vec<Vec<usize>>,
    pub gamma: Option<usize>,
    pub gamma_prime: Option<usize>,
}

fn chain(r: usize) -> Vec<Vec<i64>> {
    let mut c = vec![vec![0i64; r]; r];
    for a in 0..r {
        c[a][a] = 2;
        if a + 1 < r {
            c[a][a + 1] = -1;
            c[a + 1][a] = -1;
        }
    }
    c
}

/// Builds the root data for `family` of the given rank (at most [`DEFAULT_MAX_RANK`]).
pub fn build_algebra(family: Family, rank: usize) -> Result<AlgebraSpec, Error> {
    build_algebra_capped(family, rank, DEFAULT_MAX_RANK)
}

pub fn build_algebra_capped(family: Family, rank: usize, max_rank: usize) -> Result<AlgebraSpec, Error> {
    let bad = |why: &str| Err(Error::InvalidAlgebra(format!("{}{}: {}", family.letter(), rank, why)));
    if rank == 0 {
        return bad("rank must be positive");
    }
    if rank > max_rank {
        return bad(&format!("rank exceeds the configured cap {max_rank}"));
    }
    let r = rank;
    let mut t = vec![1i64; r];
    let (cartan, gamma) = match family {
        Family::A => (chain(r), None),
        Family::B => {
            if r < 2 {
                return bad("B_r needs r >= 2");
            }
            let mut c = chain(r);
            c[r - 1][r - 2] = -2;
            t[r - 1] = 2;
            (c, Some((r - 2, r - 1)))
        }
        Family::C => {
            if r < 2 {
                return bad("C_r needs r >= 2");
            }
            let mut c = chain(r);
            c[r - 2][r - 1] = -2;
            for x in t.iter_mut().take(r - 1) {
                *x = 2;
            }
            (c, Some((r - 1, r - 2)))
        }
        Family::D => {
            if r < 3 {
                return bad("D_r needs r >= 3");
            }
            let mut c = chain(r);
            c[r - 2][r - 1] = 0;
            c[r - 1][r - 2] = 0;
            c[r - 3][r - 1] = -1;
            c[r - 1][r - 3] = -1;
            (c, None)
        }
        Family::E => {
            if !(6..=8).contains(&r) {
                return bad("E_r needs 6 <= r <= 8");
            }
            let mut c = vec![vec![0i64; r]; r];
            for a in 0..r {
                c[a][a] = 2;
            }
            let mut link = |a: usize, b: usize| {
                c[a][b] = -1;
                c[b][a] = -1;
            };
            link(0, 2);
            link(1, 3);
            for a in 2..r - 1 {
                link(a, a + 1);
            }
            (c, None)
        }
        Family::F => {
            if r != 4 {
                return bad("F_r needs r = 4");
            }
            let mut c = chain(4);
            c[2][1] = -2;
            t[2] = 2;
            t[3] = 2;
            (c, Some((1, 2)))
        }
        Family::G => {
            if r != 2 {
                return bad("G_r needs r = 2");
            }
            t[1] = 3;
            (vec![vec![2, -1], vec![-3, 2]], Some((0, 1)))
        }
    };
    let adjacency = (0..r).map(|a| (0..r).filter(|&b| b != a && cartan[a][b] != 0).collect()).collect();
    let spec = AlgebraSpec {
        family,
        rank: r,
        cartan,
        t,
        adjacency,
        gamma: gamma.map(|g| g.0),
        gamma_prime: gamma.map(|g| g.1),
    };
    debug_assert!(spec.check_invariants().is_ok());
    Ok(spec)
}

impl AlgebraSpec {
    pub fn name(&self) -> String {
        format!("{}{}", self.family.letter(), self.rank)
    }

    pub fn is_simply_laced(&self) -> bool {
        self.gamma.is_none()
    }

    pub fn is_short(&self, a: usize) -> bool {
        self.t[a] > 1
    }

    pub fn max_t(&self) -> i64 {
        *self.t.iter().max().unwrap()
    }

    /// `t_{γ'}`, or 1 for simply-laced algebras.
    pub fn t_gamma_prime(&self) -> i64 {
        self.gamma_prime.map_or(1, |g| self.t[g])
    }

    pub fn c(&self, a: usize, b: usize) -> i64 {
        self.cartan[a][b]
    }

    /// `C⁻¹` as exact rationals.
    pub fn cartan_inverse(&self) -> Vec<Vec<Ratio<i64>>> {
        let r = self.rank;
        let mut m: Vec<Vec<Ratio<i64>>> = (0..r)
            .map(|i| {
                let mut row: Vec<Ratio<i64>> = self.cartan[i].iter().map(|&x| Ratio::from_integer(x)).collect();
                row.extend((0..r).map(|j| if i == j { Ratio::one() } else { Ratio::zero() }));
                row
            })
            .collect();
        for col in 0..r {
            let piv = (col..r).find(|&i| !m[i][col].is_zero()).expect("Cartan matrix is invertible");
            m.swap(col, piv);
            let p = m[col][col];
            for x in m[col].iter_mut() {
                *x /= p;
            }
            for i in 0..r {
                if i != col && !m[i][col].is_zero() {
                    let f = m[i][col];
                    for j in 0..2 * r {
                        let d = m[col][j] * f;
                        m[i][j] -= d;
                    }
                }
            }
        }
        m.into_iter().map(|row| row[r..].to_vec()).collect()
    }

    /// `C⁻¹·v`.
    pub fn cartan_inverse_times(&self, v: &[i64]) -> Vec<Ratio<i64>> {
        let inv = self.cartan_inverse();
        inv.iter().map(|row| row.iter().zip(v).fold(Ratio::zero(), |acc, (x, &y)| acc + x * y)).collect()
    }

    pub fn determinant(&self) -> i64 {
        let r = self.rank;
        let mut m: Vec<Vec<Ratio<i64>>> =
            self.cartan.iter().map(|row| row.iter().map(|&x| Ratio::from_integer(x)).collect()).collect();
        let mut det = Ratio::one();
        for col in 0..r {
            let piv = match (col..r).find(|&i| !m[i][col].is_zero()) {
                Some(p) => p,
                None => return 0,
            };
            if piv != col {
                m.swap(col, piv);
                det = -det;
            }
            let p = m[col][col];
            det *= p;
            for i in col + 1..r {
                let f = m[i][col] / p;
                for j in col..r {
                    let d = m[col][j] * f;
                    m[i][j] -= d;
                }
            }
        }
        det.to_integer()
    }

    /// `det(C)·C⁻¹`, an integer matrix with positive entries.
    pub fn adjugate(&self) -> Vec<Vec<i64>> {
        let d = self.determinant();
        self.cartan_inverse().iter().map(|row| row.iter().map(|x| (x * d).to_integer()).collect()).collect()
    }

    /// Checks the structural invariants of the root data.
    pub fn check_invariants(&self) -> Result<(), Error> {
        let r = self.rank;
        let fail = |s: String| Err(Error::InvalidAlgebra(format!("{}: {s}", self.name())));
        for a in 0..r {
            if self.cartan[a][a] != 2 {
                return fail(format!("diagonal entry at node {}", a + 1));
            }
            for b in 0..r {
                if a == b {
                    continue;
                }
                let x = self.cartan[a][b];
                if !(-3..=0).contains(&x) || (x == 0) != (self.cartan[b][a] == 0) {
                    return fail(format!("entry ({}, {})", a + 1, b + 1));
                }
                // C_{ab}/t_a = C_{ba}/t_b
                if x * self.t[b] != self.cartan[b][a] * self.t[a] {
                    return fail(format!("not symmetrized by t at ({}, {})", a + 1, b + 1));
                }
            }
            let adj: Vec<usize> = (0..r).filter(|&b| b != a && self.cartan[a][b] != 0).collect();
            if adj != self.adjacency[a] {
                return fail(format!("adjacency of node {}", a + 1));
            }
        }
        if let (Some(g), Some(gp)) = (self.gamma, self.gamma_prime) {
            if self.cartan[g][gp] != -1 || self.is_short(g) || !self.is_short(gp) {
                return fail(String::from("gamma/gamma' pair"));
            }
        }
        if self.determinant() == 0 {
            return fail(String::from("singular Cartan matrix"));
        }
        if self.cartan_inverse().iter().flatten().any(|x| !x.is_positive()) {
            return fail(String::from("inverse Cartan matrix has a non-positive entry"));
        }
        Ok(())
    }
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

impl FromStr for AlgebraSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('E') => Family::E,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => return Err(Error::InvalidAlgebra(format!("unknown family in {s:?}"))),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| Error::InvalidAlgebra(format!("bad rank in {s:?}")))?;
        build_algebra(family, rank)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2() {
        let a = build_algebra(Family::A, 1).unwrap();
        assert_eq!(a.cartan, vec![vec![2]]);
        assert_eq!(a.t, vec![1]);
    }

    #[test]
    fn b2_and_g2_conventions() {
        let b = build_algebra(Family::B, 2).unwrap();
        assert_eq!(b.cartan, vec![vec![2, -1], vec![-2, 2]]);
        assert_eq!(b.t, vec![1, 2]);
        assert_eq!((b.gamma, b.gamma_prime), (Some(0), Some(1)));
        let g = build_algebra(Family::G, 2).unwrap();
        assert_eq!(g.cartan, vec![vec![2, -1], vec![-3, 2]]);
        assert_eq!(g.t, vec![1, 3]);
        assert_eq!((g.gamma, g.gamma_prime), (Some(0), Some(1)));
    }

    #[test]
    fn inverse_times() {
        let a1 = build_algebra(Family::A, 1).unwrap();
        assert_eq!(a1.cartan_inverse_times(&[2]), vec![Ratio::from_integer(1)]);
        let a2 = build_algebra(Family::A, 2).unwrap();
        assert_eq!(a2.cartan_inverse_times(&[1, 1]), vec![Ratio::from_integer(1); 2]);
        let b2 = build_algebra(Family::B, 2).unwrap();
        assert_eq!(b2.cartan_inverse_times(&[0, 0]), vec![Ratio::from_integer(0); 2]);
    }

    #[test]
    fn rejects_bad_ranks() {
        assert!(build_algebra(Family::B, 1).is_err());
        assert!(build_algebra(Family::D, 2).is_err());
        assert!(build_algebra(Family::E, 5).is_err());
        assert!(build_algebra(Family::F, 3).is_err());
        assert!(build_algebra(Family::G, 3).is_err());
        assert!(build_algebra(Family::A, 9).is_err());
    }

    #[test]
    fn every_family_satisfies_invariants() {
        let cases = [
            (Family::A, 1..=8),
            (Family::B, 2..=8),
            (Family::C, 2..=8),
            (Family::D, 3..=8),
            (Family::E, 6..=8),
            (Family::F, 4..=4),
            (Family::G, 2..=2),
        ];
        for (f, ranks) in cases {
            for r in ranks {
                build_algebra(f, r).unwrap().check_invariants().unwrap();
            }
        }
    }

    #[test]
    fn parses_names() {
        let s: AlgebraSpec = "C3".parse().unwrap();
        assert_eq!(s.name(), "C3");
        assert_eq!(s.gamma, Some(2));
        assert_eq!(s.gamma_prime, Some(1));
        assert!("X2".parse::<AlgebraSpec>().is_err());
    }
}

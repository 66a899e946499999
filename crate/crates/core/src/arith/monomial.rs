use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

/// A formal variable. Node indices are zero-based internally and rendered
/// one-based; levels are one-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    /// `u_α`
    U(u16),
    /// `u_{α,i}`
    Ui(u16, u16),
    /// `a_i`
    A(u16),
    /// fundamental Q-system variable `Q_{α,1}`
    T(u16),
    /// character-ring coordinate
    X(u16),
}

impl Var {
    pub fn u(node: usize) -> Var {
        Var::U(node as u16)
    }

    pub fn ui(node: usize, level: usize) -> Var {
        Var::Ui(node as u16, level as u16)
    }

    pub fn a(level: usize) -> Var {
        Var::A(level as u16)
    }

    pub fn t(node: usize) -> Var {
        Var::T(node as u16)
    }

    pub fn x(node: usize) -> Var {
        Var::X(node as u16)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Var::U(a) => write!(f, "u{}", a + 1),
            Var::Ui(a, i) => write!(f, "u{}_{}", a + 1, i),
            Var::A(i) => write!(f, "a{}", i),
            Var::T(a) => write!(f, "t{}", a + 1),
            Var::X(a) => write!(f, "x{}", a + 1),
        }
    }
}

/// A Laurent monomial: sorted `(variable, exponent)` pairs with no zero exponent.
///
/// The ordering is lexicographic on dense exponent vectors, the smallest
/// variable being the most significant. It is a monomial order on the
/// polynomial part, which is what exact division relies on.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(Var, i32)>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn var(v: Var, e: i32) -> Monomial {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(alloc::vec![(v, e)])
        }
    }

    /// Builds a monomial from arbitrary pairs, merging repeats and dropping zeros.
    pub fn from_pairs<I: IntoIterator<Item = (Var, i32)>>(pairs: I) -> Monomial {
        let mut v: Vec<(Var, i32)> = pairs.into_iter().collect();
        v.sort_by_key(|p| p.0);
        let mut out: Vec<(Var, i32)> = Vec::with_capacity(v.len());
        for (var, e) in v {
            match out.last_mut() {
                Some(last) if last.0 == var => last.1 += e,
                _ => out.push((var, e)),
            }
        }
        out.retain(|p| p.1 != 0);
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> &[(Var, i32)] {
        &self.0
    }

    pub fn exponent(&self, v: Var) -> i32 {
        match self.0.binary_search_by(|p| p.0.cmp(&v)) {
            Ok(i) => self.0[i].1,
            Err(_) => 0,
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a[i].1 + b[j].1;
                    if e != 0 {
                        out.push((a[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn inv(&self) -> Monomial {
        Monomial(self.0.iter().map(|&(v, e)| (v, -e)).collect())
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        self.mul(&other.inv())
    }

    pub fn pow(&self, k: i32) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|&(v, e)| (v, e * k)).collect())
    }

    /// Componentwise minimum of exponents (absent variables count as zero).
    pub fn min_with(&self, other: &Monomial) -> Monomial {
        self.merge_with(other, |a, b| a.min(b))
    }

    /// Componentwise maximum of exponents (absent variables count as zero).
    pub fn max_with(&self, other: &Monomial) -> Monomial {
        self.merge_with(other, |a, b| a.max(b))
    }

    fn merge_with(&self, other: &Monomial, f: impl Fn(i32, i32) -> i32) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        loop {
            let (v, x, y) = match (a.get(i), b.get(j)) {
                (None, None) => break,
                (Some(&(v, x)), None) => {
                    i += 1;
                    (v, x, 0)
                }
                (None, Some(&(w, y))) => {
                    j += 1;
                    (w, 0, y)
                }
                (Some(&(v, x)), Some(&(w, y))) => match v.cmp(&w) {
                    Ordering::Less => {
                        i += 1;
                        (v, x, 0)
                    }
                    Ordering::Greater => {
                        j += 1;
                        (w, 0, y)
                    }
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                        (v, x, y)
                    }
                },
            };
            let e = f(x, y);
            if e != 0 {
                out.push((v, e));
            }
        }
        Monomial(out)
    }

    /// True when every exponent is non-negative.
    pub fn is_polynomial(&self) -> bool {
        self.0.iter().all(|p| p.1 >= 0)
    }

    /// Total degree.
    pub fn degree(&self) -> i64 {
        self.0.iter().map(|p| p.1 as i64).sum()
    }

    /// Keeps only variables accepted by `keep`.
    pub fn filter(&self, keep: impl Fn(Var) -> bool) -> Monomial {
        Monomial(self.0.iter().copied().filter(|p| keep(p.0)).collect())
    }

    /// Renames variables. The map must be injective on the support.
    pub fn rename(&self, f: impl Fn(Var) -> Var) -> Monomial {
        Monomial::from_pairs(self.0.iter().map(|&(v, e)| (f(v), e)))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(&(_, e)), None) => return if e > 0 { Ordering::Greater } else { Ordering::Less },
                (None, Some(&(_, f))) => return if f > 0 { Ordering::Less } else { Ordering::Greater },
                (Some(&(v, e)), Some(&(w, f))) => match v.cmp(&w) {
                    Ordering::Equal => {
                        if e != f {
                            return e.cmp(&f);
                        }
                        i += 1;
                        j += 1;
                    }
                    Ordering::Less => {
                        return if e > 0 { Ordering::Greater } else { Ordering::Less };
                    }
                    Ordering::Greater => {
                        return if f > 0 { Ordering::Less } else { Ordering::Greater };
                    }
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, &(v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

use num_bigint::BigInt;
use num_traits::One;

use crate::Error;

/// `binom(m + p, m) = (p+m)(p+m-1)...(p+1) / m!` for any signed `p`.
///
/// Vanishes when `-m <= p <= -1` and equals the ordinary binomial for `p >= 0`.
pub fn extended_binomial(m: i64, p: i64) -> Result<BigInt, Error> {
    if m < 0 {
        return Err(Error::Domain(alloc::format!("binomial with m = {m} < 0")));
    }
    if p < 0 && p >= -m {
        return Ok(BigInt::from(0));
    }
    let mut acc = BigInt::one();
    for i in 1..=m {
        // Partial products of i consecutive integers over i! stay integral.
        acc *= p + i;
        acc /= i;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(m: i64, p: i64) -> BigInt {
        extended_binomial(m, p).unwrap()
    }

    #[test]
    fn documented_values() {
        assert_eq!(b(3, 2), BigInt::from(10));
        assert_eq!(b(1, -1), BigInt::from(0));
        assert_eq!(b(2, -3), BigInt::from(1));
        assert_eq!(b(0, -5), BigInt::from(1));
        assert_eq!(b(3, -5), BigInt::from(-4));
    }

    #[test]
    fn rejects_negative_m() {
        assert!(extended_binomial(-1, 3).is_err());
    }
}

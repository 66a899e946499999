use hkoty_core::arith::{
    extended_binomial, series_invert, Grading, LaurentPoly, Monomial, RationalFunction, TruncatedSeries, Var,
};
use num_bigint::BigInt;
use proptest::prelude::*;

fn vars() -> [Var; 3] {
    [Var::u(0), Var::u(1), Var::a(1)]
}

fn poly(terms: Vec<(i32, i32, i32, i64)>) -> LaurentPoly {
    let [x, y, z] = vars();
    LaurentPoly::from_terms(
        terms.into_iter().map(|(a, b, c, k)| (Monomial::from_pairs([(x, a), (y, b), (z, c)]), BigInt::from(k))),
    )
}

fn laurent() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-2i32..3, -2i32..3, -1i32..2, -3i64..4), 0..5).prop_map(poly)
}

fn nonzero_laurent() -> impl Strategy<Value = LaurentPoly> {
    laurent().prop_filter("nonzero", |p| !p.is_zero())
}

fn ordinary_binomial(n: i64, k: i64) -> BigInt {
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &LaurentPoly::one(), a.clone());
    }

    #[test]
    fn exact_division_undoes_multiplication(a in laurent(), b in nonzero_laurent()) {
        let prod = &a * &b;
        prop_assert_eq!(prod.exact_divide(&b), Some(a));
    }

    #[test]
    fn inexact_division_is_refused(a in nonzero_laurent()) {
        // a·(2 + u₀) + 1 is 1 at u₀ = −2, so 2 + u₀ does not divide it
        let b = &LaurentPoly::constant(2) + &LaurentPoly::var(Var::u(0));
        let odd = &(&a * &b) + &LaurentPoly::one();
        prop_assert_eq!(odd.exact_divide(&b), None);
    }

    #[test]
    fn pascal_rule(m in 1i64..9, p in -12i64..12) {
        let lhs = extended_binomial(m, p).unwrap();
        let rhs = extended_binomial(m, p - 1).unwrap() + extended_binomial(m - 1, p).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn binomial_agrees_with_the_ordinary_one(m in 0i64..10, p in 0i64..10) {
        prop_assert_eq!(extended_binomial(m, p).unwrap(), ordinary_binomial(m + p, m));
    }

    #[test]
    fn series_inverse_is_an_inverse(g in laurent(), hi in 2i64..7) {
        // f = 1 + u₀·g has unit lead in the u₀ grading once g has no negative u₀ powers
        let g = LaurentPoly::from_terms(g.terms().filter(|(m, _)| m.exponent(Var::u(0)) >= 0).map(|(m, c)| (m.clone(), c.clone())));
        let f = &LaurentPoly::one() + &(&LaurentPoly::var(Var::u(0)) * &g);
        let inv = series_invert(&f, 2, 0, 0, hi).unwrap();
        let prod = TruncatedSeries::from_poly(&f, 2, Grading::pivot(2, 0), vec![hi]).mul(&inv);
        for (e, c) in prod.terms() {
            if i64::from(e[0]) <= hi && e.iter().any(|&x| x != 0) {
                prop_assert!(c.is_zero(), "{:?} {}", e, c);
            }
        }
        prop_assert_eq!(prod.coefficient(&[0, 0]), LaurentPoly::one());
    }

    #[test]
    fn rational_functions_form_a_field(a in nonzero_laurent(), b in nonzero_laurent(), c in laurent()) {
        let x = RationalFunction::new(a.clone(), b.clone()).unwrap();
        let y = RationalFunction::new(c.clone(), b.clone()).unwrap();
        prop_assert!(x.mul(&x.inv().unwrap()).equals(&RationalFunction::one()));
        prop_assert!(x.add(&y).equals(&RationalFunction::new(&a + &c, b).unwrap()));
    }
}

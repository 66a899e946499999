use hkoty_core::algebra::{build_algebra, Family};
use hkoty_core::fermionic::{m_sum, n_sum, SumInstance};
use hkoty_core::oracle::*;
use num_bigint::BigInt;
use proptest::prelude::*;

fn sl2_instance(l: i64, n: &[i64]) -> SumInstance {
    let k = n.len().max(1);
    let mut row = n.to_vec();
    row.resize(k, 0);
    SumInstance::new(build_algebra(Family::A, 1).unwrap(), vec![l], vec![row], k).unwrap()
}

/// Every `n` with `Σ i·n_i ≤ total`, as dense vectors of length `total`.
fn weighted_vectors(total: usize) -> Vec<Vec<i64>> {
    fn go(i: usize, left: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if i > cur.len() {
            out.push(cur.clone());
            return;
        }
        for c in 0..=left / i {
            cur[i - 1] = c as i64;
            go(i + 1, left - c * i, cur, out);
        }
        cur[i - 1] = 0;
    }
    let mut out = Vec::new();
    go(1, total, &mut vec![0; total], &mut out);
    out
}

#[test]
fn sl2_grid_four_ways() {
    let mut checked = 0;
    for n in weighted_vectors(6) {
        for l in 0..=6usize {
            let cg = clebsch_gordan_multiplicity(l, &n);
            let order = catalan_order_needed(l, &n);
            let cat = catalan_residue_multiplicity(l, &n, order).unwrap();
            let inst = sl2_instance(l as i64, &n);
            assert_eq!(cg, cat, "catalan l={l} n={n:?}");
            assert_eq!(cg, n_sum(&inst), "n_sum l={l} n={n:?}");
            assert_eq!(cg, m_sum(&inst), "m_sum l={l} n={n:?}");
            checked += 1;
        }
    }
    assert!(checked > 100);
}

#[test]
fn highest_weight_moves_into_n() {
    for n in weighted_vectors(5) {
        for l in 1..=5usize {
            let mut shifted = n.clone();
            shifted.resize(n.len().max(l), 0);
            shifted[l - 1] += 1;
            assert_eq!(n_sum(&sl2_instance(l as i64, &n)), n_sum(&sl2_instance(0, &shifted)));
        }
    }
}

#[test]
fn weyl_dimensions_up_to_a3() {
    for rank in 1..=3 {
        let spec = build_algebra(Family::A, rank).unwrap();
        let mut lambdas: Vec<Vec<i64>> = vec![vec![]];
        for _ in 0..rank {
            lambdas = lambdas.into_iter().flat_map(|l| (0..=2).map(move |x| [l.clone(), vec![x]].concat())).collect();
        }
        for l in lambdas {
            let ch = weyl_character(&spec, &l).unwrap();
            assert_eq!(ch.dimension(), weyl_dimension(&spec, &l).unwrap());
            assert!(ch.is_weyl_symmetric(&spec));
        }
    }
}

#[test]
fn known_a3_dimensions() {
    let a3 = build_algebra(Family::A, 3).unwrap();
    assert_eq!(weyl_dimension(&a3, &[1, 0, 0]).unwrap(), BigInt::from(4));
    assert_eq!(weyl_dimension(&a3, &[0, 1, 0]).unwrap(), BigInt::from(6));
    assert_eq!(weyl_dimension(&a3, &[1, 0, 1]).unwrap(), BigInt::from(15));
    assert_eq!(weyl_dimension(&a3, &[0, 2, 0]).unwrap(), BigInt::from(20));
}

#[test]
fn type_a_q_system_is_kr_characters() {
    for rank in 1..=3 {
        let spec = build_algebra(Family::A, rank).unwrap();
        assert!(q_system_matches_characters(&spec, 3).unwrap(), "A{rank}");
    }
}

#[test]
fn character_identity_small_a2() {
    let a2 = build_algebra(Family::A, 2).unwrap();
    // the last two need strings longer than the row length
    for n in [
        vec![vec![1, 1], vec![1, 0]],
        vec![vec![0, 0], vec![0, 2]],
        vec![vec![2, 0], vec![0, 1]],
        vec![vec![0, 0], vec![0, 3]],
        vec![vec![0, 2], vec![0, 1]],
    ] {
        assert!(verify_hkoty_character_identity(&a2, &n, 2).unwrap(), "{n:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tensor_multiplicity_is_symmetric(a in prop::collection::vec(0i64..2, 2), b in prop::collection::vec(0i64..2, 2), c in prop::collection::vec(0i64..2, 2)) {
        let a2 = build_algebra(Family::A, 2).unwrap();
        let mut top: Vec<i64> = (0..2).map(|i| a[i] + b[i] + c[i]).collect();
        top[0] = top[0].saturating_sub(1).max(0);
        let x = tensor_multiplicity(&a2, &[a.clone(), b.clone(), c.clone()], &top).unwrap();
        let y = tensor_multiplicity(&a2, &[c, a, b], &top).unwrap();
        prop_assert_eq!(x, y);
    }

    #[test]
    fn catalan_matches_tensor_rule(n in prop::collection::vec(0i64..3, 1..4), l in 0usize..5) {
        let order = catalan_order_needed(l, &n);
        prop_assert_eq!(catalan_residue_multiplicity(l, &n, order + 2).unwrap(), clebsch_gordan_multiplicity(l, &n));
    }
}

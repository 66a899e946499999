use hkoty_core::algebra::AlgebraSpec;
use hkoty_core::arith::LaurentPoly;
use hkoty_core::deformed::{build_deformed_table, ShiftSpec};
use hkoty_core::fermionic::{n_sum, SumInstance};
use hkoty_core::genfun::*;
use num_bigint::BigInt;

fn inst(name: &str, k: usize, lambda: &[i64], entries: &[(usize, usize, i64)]) -> SumInstance {
    let spec: AlgebraSpec = name.parse().unwrap();
    SumInstance::from_sparse(spec, lambda.to_vec(), entries, k).unwrap()
}

fn all_statements(inst: &SumInstance, d: i64) -> usize {
    let table = build_deformed_table(&inst.spec, inst.k).unwrap();
    let window = CoefficientWindow::cube(inst.rank(), -d, d).unwrap();
    let todo = applicable_statements(inst);
    assert!(!todo.is_empty());
    for &(s, split) in &todo {
        let rep = verify_factorization(&table, inst, s, split, &window).unwrap();
        assert!(rep.ok(), "{rep}: {:?}", rep.mismatches.first());
        assert!(rep.nonzero_targets > 0, "{rep}");
    }
    todo.len()
}

#[test]
fn sl2_statements() {
    for k in 1..=3 {
        let i = inst("A1", k, &[1], &[(0, 1, 1), (0, k, 1)]);
        all_statements(&i, 8);
    }
}

#[test]
fn sl2_closed_form_at_level_one() {
    // the u-degree window reaches from −n−2 up to 6
    let i = inst("A1", 1, &[0], &[(0, 1, 3)]);
    let table = build_deformed_table(&i.spec, 1).unwrap();
    let window = CoefficientWindow::boxed(&[-5], &[6]).unwrap();
    let rep = verify_factorization(&table, &i, Statement::Zkone, Split::default(), &window).unwrap();
    assert!(rep.ok(), "{rep}");
}

#[test]
fn simply_laced_rank_two() {
    for k in 1..=2 {
        all_statements(&inst("A2", k, &[1, 0], &[(0, 1, 1), (1, k, 1)]), 3);
    }
}

#[test]
fn non_simply_laced_rank_two() {
    all_statements(&inst("B2", 2, &[0, 1], &[(0, 1, 1), (1, 3, 1)]), 3);
    all_statements(&inst("C2", 2, &[1, 0], &[(1, 1, 1), (1, 2, 1)]), 3);
    all_statements(&inst("G2", 1, &[1, 0], &[(0, 1, 1), (1, 2, 1)]), 3);
}

#[test]
fn statement_names_round_trip() {
    for s in Statement::ALL {
        assert_eq!(s.name().parse::<Statement>().unwrap(), s);
    }
    assert_eq!("gfactorization".parse::<Statement>().unwrap(), Statement::GFactorization);
    assert!("nonsense".parse::<Statement>().is_err());
}

#[test]
fn split_off_levels_is_a_product() {
    let i = inst("A1", 3, &[0], &[(0, 1, 1), (0, 2, 1), (0, 3, 1)]);
    assert_eq!(head_instance(&i, 1).unwrap().n, vec![vec![1]]);
    let tail = tail_instance(&i, Split { j: 1, p: 0 }).unwrap();
    assert_eq!(tail.n, vec![vec![1, 1]]);
    assert_eq!(tail.k, 2);
}

#[test]
fn lemma_steps_on_small_instances() {
    let cases = [
        (inst("A1", 3, &[1], &[(0, 1, 1), (0, 2, 1)]), 6),
        (inst("A2", 2, &[0, 1], &[(0, 1, 1)]), 3),
        (inst("B2", 1, &[1, 0], &[(1, 1, 1)]), 3),
        (inst("G2", 1, &[0, 1], &[(0, 1, 1)]), 3),
    ];
    for (i, d) in &cases {
        let mut steps = 0;
        for lemma in Lemma::ALL {
            let Ok(list) = lemma_steps(i, lemma) else { continue };
            for step in list {
                let rep = verify_lemma_step(i, &step, *d, false).unwrap();
                assert!(rep.ok(), "{} {rep}", i.spec.name());
                steps += 1;
            }
        }
        assert!(steps > 0, "{}", i.spec.name());
    }
}

#[test]
fn identities_are_power_series_only() {
    // the restricted and unrestricted sums differ once u may appear to a
    // negative power
    let i = inst("A2", 2, &[0, 0], &[(0, 1, 2)]);
    let steps = lemma_steps(&i, Lemma::Main).unwrap();
    let ps = verify_lemma_step(&i, &steps[0], 3, false).unwrap();
    assert!(ps.ok(), "{ps}");
    let neg = verify_lemma_step_on(&i, &steps[0], &CoefficientWindow::negative(2, 0, 4), false).unwrap();
    assert!(!neg.ok(), "{neg}");
}

#[test]
fn constant_terms() {
    let cases = [
        inst("A1", 2, &[0], &[(0, 1, 4)]),
        inst("B2", 1, &[0, 0], &[]),
        inst("G2", 1, &[1, 0], &[(0, 1, 1)]),
        inst("C3", 1, &[0, 1, 0], &[(1, 1, 1), (2, 1, 1)]),
    ];
    let want = [(2, 2), (1, 1), (1, 1)];
    for (idx, i) in cases.iter().enumerate() {
        let ct = constant_term_cross_check(i).unwrap();
        assert!(ct.ok(), "{}: {ct:?}", i.spec.name());
        if let Some(&(n, m)) = want.get(idx) {
            assert_eq!((ct.n_genfun.clone(), ct.m_genfun.clone()), (BigInt::from(n), BigInt::from(m)));
        }
    }
}

#[test]
fn top_level_variable_is_an_overall_factor() {
    for i in [inst("A1", 2, &[2], &[(0, 1, 2)]), inst("B2", 1, &[1, 1], &[(0, 1, 1)])] {
        let w = CoefficientWindow::default_for(i.rank());
        assert!(top_factor_holds(&i, &w).unwrap(), "{}", i.spec.name());
    }
}

#[test]
fn raising_the_level_keeps_constant_terms() {
    for i in
        [inst("A1", 1, &[1], &[(0, 1, 3)]), inst("A2", 1, &[0, 1], &[(0, 1, 2)]), inst("B2", 1, &[0, 1], &[(1, 1, 1)])]
    {
        let big = i.with_level(i.k + 1).unwrap();
        assert_eq!(n_sum(&i), n_sum(&big));
        let zero = vec![0; i.rank()];
        let ones = RestrictionK::ones(&i.spec);
        for restriction in [None, Some(&ones)] {
            let phi_small = ShiftSpec::new(&i.spec, i.k + 1, 0).unwrap();
            let phi_big = ShiftSpec::new(&i.spec, big.k + 1, 0).unwrap();
            let a = z_coefficient(&i, &zero, restriction, Some(&phi_small)).unwrap();
            let b = z_coefficient(&big, &zero, restriction, Some(&phi_big)).unwrap();
            assert_eq!(a, b, "{}", i.spec.name());
        }
    }
}

#[test]
fn evaluated_constant_term_is_n_sum() {
    let i = inst("A1", 1, &[0], &[(0, 1, 2)]);
    let phi = ShiftSpec::new(&i.spec, 2, 0).unwrap();
    assert_eq!(z_coefficient(&i, &[0], None, Some(&phi)).unwrap(), LaurentPoly::constant(1));
}

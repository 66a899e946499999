use hkoty_core::algebra::AlgebraSpec;
use hkoty_core::fermionic::{verify_q_recurrences, MConfig, SumInstance};
use proptest::prelude::*;

fn instance(name: &str, k: usize, lambda: Vec<i64>, flat_n: &[i64], flat_m: &[i64]) -> (SumInstance, MConfig) {
    let spec: AlgebraSpec = name.parse().unwrap();
    let mut n = Vec::new();
    let mut m = Vec::new();
    let mut at = 0;
    for a in 0..spec.rank {
        let len = spec.t[a] as usize * k;
        n.push(flat_n[at..at + len].to_vec());
        m.push(flat_m[at..at + len].to_vec());
        at += len;
    }
    let lambda = lambda[..spec.rank].to_vec();
    (SumInstance::new(spec, lambda, n, k).unwrap(), MConfig { m })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn relations_hold_on_random_configs(
        which in 0usize..9,
        k in 1usize..4,
        lambda in proptest::collection::vec(0i64..4, 4),
        n in proptest::collection::vec(0i64..3, 36),
        m in proptest::collection::vec(0i64..3, 36),
    ) {
        let names = ["A1", "A2", "D4", "B2", "B3", "C2", "C3", "F4", "G2"];
        let (inst, cfg) = instance(names[which], k, lambda, &n, &m);
        let rep = verify_q_recurrences(&inst, &cfg).unwrap();
        prop_assert!(rep.ok(), "{}: {:?}", names[which], rep.violations);
        prop_assert!(rep.checked > 0);
    }
}

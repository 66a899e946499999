use hkoty_core::algebra::{build_algebra, Family};
use hkoty_core::deformed::{build_by_recursion, build_deformed_table, verify_shift_recursion, ShiftSpec};

fn equivalence(family: Family, rank: usize, depth: usize) {
    let spec = build_algebra(family, rank).unwrap();
    let quad = build_deformed_table(&spec, depth).unwrap();
    let rec = build_by_recursion(&spec, depth).unwrap();
    for (key, q) in &quad.entries {
        assert_eq!(&rec.entries[key], q, "{} entry {key:?}", spec.name());
    }
    let tmax = spec.max_t() as usize;
    for j in 1..depth {
        let s = ShiftSpec::new(&spec, j, 0).unwrap();
        for k in 1..=tmax * (depth - j) + 1 {
            if (0..rank).all(|a| k + spec.t[a] as usize * j <= quad.level(a)) {
                assert_eq!(verify_shift_recursion(&quad, k, &s).unwrap(), None, "{} k={k} j={j}", spec.name());
            }
        }
    }
}

#[test]
fn sl2_depth_five() {
    equivalence(Family::A, 1, 5);
}

#[test]
fn a2_depth_four() {
    equivalence(Family::A, 2, 4);
}

#[test]
fn b2_depth_two() {
    equivalence(Family::B, 2, 2);
}

#[test]
fn g2_depth_one() {
    equivalence(Family::G, 2, 1);
}

#[test]
fn a3_depth_three() {
    equivalence(Family::A, 3, 3);
}

#[test]
fn d4_depth_two() {
    equivalence(Family::D, 4, 2);
}

#[test]
fn c2_depth_two() {
    equivalence(Family::C, 2, 2);
}

#[test]
fn f4_depth_two() {
    equivalence(Family::F, 4, 2);
}

mod common;

use common::{count_by_projection, random_degrees, set};
use multideg::exact::{count_exact_with, count_region_with, CountOptions, Strategy};
use multideg::switching::Thresholds;
use multideg::{count_exact, count_region, enumerate_multigraphs, DegreeSequence, Error, MultiplicitySet, Region};
use num_bigint::BigUint;
use proptest::prelude::{any, prop_assert_eq, prop_assume, proptest, ProptestConfig, Strategy as _};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn both(k: &DegreeSequence, j: &MultiplicitySet, js: &MultiplicitySet) -> (BigUint, BigUint) {
    let a = count_exact_with(k, j, js, CountOptions::with_strategy(Strategy::Backtracking)).unwrap();
    let b = count_exact_with(k, j, js, CountOptions::with_strategy(Strategy::RowDp)).unwrap();
    (a, b)
}

#[test]
fn small_cubic_counts() {
    for (n, want) in [(4, 1u64), (6, 70), (8, 19355)] {
        let (a, b) = both(&DegreeSequence::regular(3, n), &set("0,1"), &set("0"));
        assert_eq!(a, want.into());
        assert_eq!(b, want.into());
    }
}

#[test]
fn two_regular_simple_counts() {
    for (n, want) in [(8, 3507u64), (10, 286884), (12, 34944085)] {
        let k = DegreeSequence::regular(2, n);
        assert_eq!(count_exact(&k, &set("0,1"), &set("0")).unwrap(), want.into());
    }
    let (a, b) = both(&DegreeSequence::regular(2, 8), &set("0,1"), &set("0"));
    assert_eq!(a, b);
}

#[test]
fn odd_total_is_rejected() {
    let k = DegreeSequence::new(vec![3, 2, 2]);
    assert!(matches!(
        count_exact(&k, &set("0,1"), &set("0")),
        Err(Error::OddTotalDegree { total: 7 })
    ));
}

#[test]
fn loops_allowed_small_cases() {
    // k=(2): one double loop is forbidden, a simple loop is not possible.
    let k = DegreeSequence::new(vec![2]);
    assert_eq!(count_exact(&k, &set("0,1"), &set("0,1")).unwrap(), 1u32.into());
    assert_eq!(count_exact(&k, &set("0,1"), &set("0")).unwrap(), 0u32.into());
    // k=(2,2): a double link, two loops.
    let k = DegreeSequence::new(vec![2, 2]);
    assert_eq!(count_exact(&k, &set("0,1,2"), &set("0,1")).unwrap(), 2u32.into());
}

#[test]
fn enumeration_agrees_with_count() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..40 {
        let k = random_degrees(&mut rng, 6, 4, 12);
        let (j, js) = (set("0,1,2"), set("0,1"));
        let all = enumerate_multigraphs(&k, &j, &js, usize::MAX).unwrap();
        assert!(!all.truncated);
        assert_eq!(BigUint::from(all.graphs.len()), count_exact(&k, &j, &js).unwrap());
        for g in &all.graphs {
            assert_eq!(g.degrees(), k.degrees());
            assert!(g.respects(&j, &js));
        }
    }
}

#[test]
fn enumeration_cap_truncates() {
    let k = DegreeSequence::regular(3, 6);
    let e = enumerate_multigraphs(&k, &set("0,1"), &set("0"), 5).unwrap();
    assert_eq!(e.graphs.len(), 5);
    assert!(e.truncated);
}

#[test]
fn budget_is_enforced() {
    let k = DegreeSequence::regular(3, 10);
    let opts = CountOptions {
        budget: 1000,
        strategy: Strategy::Backtracking,
    };
    assert!(matches!(
        count_exact_with(&k, &set("0,1"), &set("0"), opts),
        Err(Error::BudgetExceeded { .. })
    ));
}

#[test]
fn regions_are_nested() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..60 {
        let k = random_degrees(&mut rng, 7, 5, 14);
        for (j, js) in [("0,1", "0"), ("0,1,2", "0,1"), ("0,1,2,3", "0")] {
            let (j, js) = (set(j), set(js));
            let exact = count_exact(&k, &j, &js).unwrap();
            let g0 = count_region(&k, &j, &js, Region::G0).unwrap();
            let gy = count_region(&k, &j, &js, Region::G0MinusY).unwrap();
            let z = count_region(&k, &j, &js, Region::Z).unwrap();
            assert!(z <= gy && gy <= exact && exact <= g0, "{:?}", k.degrees());
        }
    }
}

#[test]
fn tight_thresholds_split_regions() {
    // With all caps at 1, G0 − Y keeps only graphs with at most one double link.
    let k = DegreeSequence::regular(2, 4);
    let mut th = Thresholds::new(&k);
    th.n1 = 1;
    th.n2 = 1;
    th.n3 = 1;
    let (j, js) = (set("0,1,2"), set("0"));
    let gy = count_region_with(&k, &j, &js, Region::G0MinusY, &th, u64::MAX).unwrap();
    let exact = count_exact(&k, &j, &js).unwrap();
    // 3 four-cycles and 3 pairs of double links.
    assert_eq!(exact, BigUint::from(6u32));
    assert_eq!(gy, BigUint::from(3u32));
}

fn small_set(max_extra: u32) -> impl proptest::strategy::Strategy<Value = MultiplicitySet> {
    (proptest::collection::btree_set(2u32..=max_extra.max(2), 0..3), proptest::option::of(2u32..5))
        .prop_map(|(extra, tail)| {
            let mut v = vec![0, 1];
            v.extend(extra);
            MultiplicitySet::new(v, tail)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn strategies_match_projection_oracle(
        degrees in proptest::collection::vec(1u32..=4, 1..=5),
        j in small_set(4),
        loops_extra in proptest::collection::btree_set(1u32..4, 0..3),
    ) {
        let m: u32 = degrees.iter().sum();
        prop_assume!(m.is_multiple_of(2) && m <= 10);
        let k = DegreeSequence::new(degrees);
        let mut lv = vec![0];
        lv.extend(loops_extra);
        let js = MultiplicitySet::finite(lv);
        let (a, b) = both(&k, &j, &js);
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a, BigUint::from(count_by_projection(&k, &j, &js)));
    }

    #[test]
    fn count_ignores_vertex_order(
        mut degrees in proptest::collection::vec(1u32..=4, 2..=6),
        seed in any::<u64>(),
    ) {
        let m: u32 = degrees.iter().sum();
        prop_assume!(m.is_multiple_of(2));
        let (j, js) = (set("0,1,2"), set("0,1"));
        let before = count_exact(&DegreeSequence::new(degrees.clone()), &j, &js).unwrap();
        let r = (seed as usize) % degrees.len();
        degrees.rotate_left(r);
        degrees.reverse();
        prop_assert_eq!(before, count_exact(&DegreeSequence::new(degrees), &j, &js).unwrap());
    }
}

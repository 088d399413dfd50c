use super::*;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

const BUDGET: u64 = 1 << 22;

fn z() -> Group {
    make_group(&GroupKind::FreeAbelian { rank: 1 }).unwrap()
}

fn f2() -> Group {
    make_group(&GroupKind::FreeGroup { rank: 2 }).unwrap()
}

fn sum6() -> Group {
    make_group(&GroupKind::DirectSum {
        components: vec![ComponentKind::Z; 6],
    })
    .unwrap()
}

/// Brute-force lattice-point count, the oracle for FreeAbelian::ball_count.
fn brute_l1_count(d: usize, r: i64) -> u64 {
    fn rec(d: usize, r: i64) -> u64 {
        if d == 0 {
            return 1;
        }
        (-r..=r).map(|v| rec(d - 1, r - v.abs())).sum()
    }
    rec(d, r)
}

#[test]
fn ball_in_z_is_ordered_interval() {
    let g = z();
    let ball = g.ball(2, BUDGET).unwrap();
    let texts: Vec<String> = ball.iter().map(|e| g.format(e)).collect();
    assert_eq!(texts, ["0", "-1", "1", "-2", "2"]);
}

#[test]
fn free_group_ball_counts() {
    let g = f2();
    let b1 = g.ball(1, BUDGET).unwrap();
    let texts: Vec<String> = b1.iter().map(|e| g.format(e)).collect();
    assert_eq!(texts, ["e", "a", "A", "b", "B"]);
    // 1 + 4 + 12 reduced words of length <= 2
    assert_eq!(g.ball(2, BUDGET).unwrap().len(), 17);
    assert_eq!(FreeGroup::ball_count(2, 2), 17);
}

#[test]
fn lattice_ball_count_matches_brute_force() {
    for d in 1..=4 {
        for r in 0..=5 {
            assert_eq!(
                FreeAbelian::ball_count(d, r),
                brute_l1_count(d, i64::from(r)),
                "d={d} r={r}"
            );
        }
    }
    let g = make_group(&GroupKind::FreeAbelian { rank: 3 }).unwrap();
    assert_eq!(g.ball(4, BUDGET).unwrap().len() as u64, brute_l1_count(3, 4));
}

#[test]
fn direct_sum_ball_count_matches_enumeration() {
    let g = sum6();
    for r in 0..=4 {
        let ball = g.ball(r, BUDGET).unwrap();
        assert_eq!(
            ball.len() as u64,
            DirectSum::ball_count(&[ComponentKind::Z; 6], r)
        );
    }
}

#[test]
fn ball_is_monotone_and_deterministic() {
    for g in [z(), f2(), sum6()] {
        let b3 = g.ball(3, BUDGET).unwrap();
        let b4 = g.ball(4, BUDGET).unwrap();
        let s3: std::collections::HashSet<_> = b3.elements.iter().cloned().collect();
        let s4: std::collections::HashSet<_> = b4.elements.iter().cloned().collect();
        assert!(s3.is_subset(&s4));
        let again = g.ball(3, BUDGET).unwrap();
        assert_eq!(b3.elements, again.elements);
        assert_eq!(b3.elements[0], g.identity());
    }
}

#[test]
fn ball_budget_is_enforced() {
    let g = z();
    let err = g.ball(100, 10).unwrap_err();
    assert!(err.to_string().contains("budget"));
}

#[test]
fn support_of_direct_sum_elements() {
    let g = sum6();
    assert_eq!(g.support(&g.identity()).unwrap(), Vec::<usize>::new());
    let e = g.parse("(0,3,0,-1,0,0)").unwrap();
    assert_eq!(g.support(&e).unwrap(), vec![1, 3]);
    // disjoint supports merge under the group operation
    let f = g.parse("(2,0,0,0,0,7)").unwrap();
    assert_eq!(g.support(&g.op(&e, &f)).unwrap(), vec![0, 1, 3, 5]);
    assert!(z().support(&z().identity()).is_err());
}

#[test]
fn group_axioms_hold_on_sampled_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cyclic = make_group(&GroupKind::Finite {
        table: cyclic_table(12),
    })
    .unwrap();
    for g in [z(), f2(), sum6(), cyclic] {
        let pool = g.ball(4, BUDGET).unwrap().elements;
        let e = g.identity();
        for _ in 0..10_000 {
            let a = pool.choose(&mut rng).unwrap();
            let b = pool.choose(&mut rng).unwrap();
            let c = pool.choose(&mut rng).unwrap();
            assert_eq!(g.op(&g.op(a, b), c), g.op(a, &g.op(b, c)));
            assert_eq!(g.op(a, &e), *a);
            assert_eq!(g.op(&e, a), *a);
            assert_eq!(g.op(a, &g.inv(a)), e);
            assert_eq!(g.op(&g.inv(a), a), e);
        }
    }
}

#[test]
fn length_laws() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for g in [z(), f2(), sum6()] {
        assert_eq!(g.length(&g.identity()), 0);
        let pool = g.ball(4, BUDGET).unwrap().elements;
        for _ in 0..2_000 {
            let a = pool.choose(&mut rng).unwrap();
            let b = pool.choose(&mut rng).unwrap();
            assert_eq!(g.length(a), g.length(&g.inv(a)));
            assert!(g.length(&g.op(a, b)) <= g.length(a) + g.length(b));
        }
    }
}

#[test]
fn canonical_text_round_trips() {
    let g = f2();
    for word in ["e", "a", "abA", "BBa"] {
        let e = g.parse(word).unwrap();
        assert_eq!(g.format(&e), word);
    }
    assert!(g.parse("aA").is_err()); // not reduced
    assert!(g.parse("z").is_err()); // outside rank

    let s = sum6();
    let e = s.parse("(0,3,0,-1,0,0)").unwrap();
    assert_eq!(s.format(&e), "(0,3,0,-1,0,0)");
}

#[test]
fn invalid_parameters_are_config_errors() {
    assert!(make_group(&GroupKind::FreeAbelian { rank: 0 }).is_err());
    assert!(make_group(&GroupKind::FreeGroup { rank: 0 }).is_err());
    assert!(make_group(&GroupKind::DirectSum { components: vec![] }).is_err());
    assert!(make_group(&GroupKind::Finite { table: vec![] }).is_err());
}

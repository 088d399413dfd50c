use num_traits::Signed;

use super::*;
use crate::groups::{make_group, GroupKind};
use crate::sets::SeqGen;

const BUDGET: u64 = 1 << 22;

fn z() -> Group {
    make_group(&GroupKind::FreeAbelian { rank: 1 }).unwrap()
}

fn ctx(r: u32, h: u64, d: u32) -> EvalCtx {
    EvalCtx::new(z(), Window::new(r, h, d), BUDGET).unwrap()
}

#[test]
fn sigma_of_evens_is_one_half() {
    let ctx = ctx(8, 1 << 12, 3);
    let evens = SubsetExpr::periodic(ctx.group(), 2, [0]).unwrap();
    let family = FamilySpec::Intervals { max_len: 8 };
    let est = sigma_r(&ctx, &evens, &family, 16).unwrap();
    assert_eq!(est.value, Rational::new(1, 2));
    assert_eq!(est.optimizer_family, 1); // the length-2 interval {0,1}
    assert!(est.exact_sup);
    assert_eq!(est.direction, Direction::UpperBound);
    replay_density(&ctx, &evens, &family, &est).unwrap();

    // oracle: every even residue window of length 2 catches exactly one even
    for g in -20i64..=20 {
        let count = (0..2).filter(|f| (f - g) % 2 == 0).count();
        assert_eq!(count, 1);
    }
}

#[test]
fn sigma_of_whole_group_is_one() {
    let ctx = ctx(4, 1 << 12, 3);
    let whole = SubsetExpr::integers();
    let family = FamilySpec::Intervals { max_len: 5 };
    let est = sigma_r(&ctx, &whole, &family, 8).unwrap();
    assert_eq!(est.value, Rational::new(1, 1));
    let est_l = sigma_l(&ctx, &whole, &family, 8).unwrap();
    assert_eq!(est_l.value, Rational::new(1, 1));
}

#[test]
fn sigma_of_powers_matches_window_oracle() {
    let ctx = ctx(4, 1 << 13, 3);
    let pow2 = SubsetExpr::seq_gen(ctx.group(), SeqGen::Pow { base: 2 }).unwrap();
    let family = FamilySpec::Intervals { max_len: 64 };
    let g_radius = 1 << 12;
    let est = sigma_r(&ctx, &pow2, &family, g_radius).unwrap();

    // oracle: max number of powers of two in any shifted window of length k
    let powers: Vec<i64> = (0..13).map(|n| 1i64 << n).collect();
    let window_max = |k: i64| -> i64 {
        let mut best = 0;
        for g in -(1 << 12)..=(1i64 << 12) {
            let c = powers.iter().filter(|&&p| p - g >= 0 && p - g < k).count() as i64;
            best = best.max(c);
        }
        best
    };
    assert_eq!(window_max(64), 7); // {1,2,4,8,16,32,64} shifted to base
    let oracle_value = (1..=64)
        .map(|k| Ratio::new(window_max(k), k))
        .min()
        .unwrap();
    assert_eq!(est.value.ratio(), oracle_value);
    // the length-63 window holds only six powers, beating 7/64
    assert_eq!(est.value, Rational::new(2, 21));
    assert!(est.value.ratio() <= Ratio::new(7, 64));
    assert!(!est.exact_sup);
}

#[test]
fn family_monotonicity() {
    // enlarging the family never increases the reported bound
    let ctx = ctx(4, 1 << 12, 3);
    let set = SubsetExpr::periodic(ctx.group(), 6, [1, 4]).unwrap();
    let mut last = Rational::new(1, 1).ratio();
    for max_len in 1..=12u32 {
        let est = sigma_r(&ctx, &set, &FamilySpec::Intervals { max_len }, 8).unwrap();
        assert!(est.value.ratio() <= last);
        last = est.value.ratio();
    }
}

#[test]
fn sigma_of_finite_sets_shrinks_with_the_family() {
    let ctx = ctx(4, 1 << 12, 3);
    let fin = SubsetExpr::explicit(
        ctx.group(),
        (0..4).map(|v| crate::groups::GroupElem::from_raw(vec![v])),
    )
    .unwrap();
    let est = sigma_r(&ctx, &fin, &FamilySpec::Intervals { max_len: 16 }, 32).unwrap();
    // |A| / |F| for the largest tested interval
    assert!(est.value.ratio() <= Ratio::new(4, 16));
}

#[test]
fn empty_family_is_a_usage_error() {
    let ctx = ctx(4, 1 << 12, 3);
    let evens = SubsetExpr::periodic(ctx.group(), 2, [0]).unwrap();
    assert!(sigma_r(&ctx, &evens, &FamilySpec::Intervals { max_len: 0 }, 8).is_err());
    assert!(sigma_r(&ctx, &evens, &FamilySpec::Lists(vec![]), 8).is_err());
}

#[test]
fn box_averages_match_residue_counts() {
    let ctx = ctx(4, 1 << 12, 3);
    let evens = SubsetExpr::periodic(ctx.group(), 2, [0]).unwrap();
    let estimates = folner_density(&ctx, &evens, &[10, 100, 1000]).unwrap();
    assert_eq!(estimates[0].value, Rational::new(11, 21));
    assert_eq!(estimates[1].value, Rational::new(101, 201));
    assert_eq!(estimates[2].value, Rational::new(1001, 2001));
    for est in &estimates {
        let half = Ratio::new(1i64, 2);
        let diff = est.value.ratio() - half;
        assert!(diff.abs() <= Ratio::new(1, 2 * est.g_window as i64 + 1));
    }

    // a single congruence class from the tower prefix: exact density 1/8
    let class = SubsetExpr::periodic(ctx.group(), 8, [3]).unwrap();
    let est = folner_density(&ctx, &class, &[1000]).unwrap();
    let diff = est[0].value.ratio() - Ratio::new(1i64, 8);
    assert!(diff.abs() <= Ratio::new(1, 2001));
}

#[test]
fn box_average_of_finite_sets_vanishes() {
    let ctx = ctx(4, 1 << 12, 3);
    let fin = SubsetExpr::explicit(
        ctx.group(),
        (0..5).map(|v| crate::groups::GroupElem::from_raw(vec![v])),
    )
    .unwrap();
    let estimates = folner_density(&ctx, &fin, &[10, 100, 1000]).unwrap();
    assert_eq!(estimates[2].value, Rational::new(5, 2001));
    assert!(estimates
        .windows(2)
        .all(|w| w[1].value.ratio() <= w[0].value.ratio()));
}

#[test]
fn box_average_in_two_dimensions() {
    let g = make_group(&GroupKind::FreeAbelian { rank: 2 }).unwrap();
    let ctx = EvalCtx::new(g.clone(), Window::new(2, 64, 2), BUDGET).unwrap();
    let diag = SubsetExpr::explicit(
        &g,
        (-20..=20i64).map(|v| crate::groups::GroupElem::from_raw(vec![v, v])),
    )
    .unwrap();
    let est = folner_density(&ctx, &diag, &[10]).unwrap();
    // 21 diagonal points in the 21x21 box
    assert_eq!(est[0].value, Rational::new(21, 441));
}

#[test]
fn derivation_of_evens_is_the_even_ball() {
    let ctx = ctx(8, 1 << 12, 3);
    let evens = SubsetExpr::periodic(ctx.group(), 2, [0]).unwrap();
    let d = derivation(&ctx, &evens).unwrap();
    let found: Vec<i64> = d.members.iter().map(|(g, _)| g.raw()[0]).collect();
    let mut expected: Vec<i64> = (-8..=8i64).filter(|v| v % 2 == 0).collect();
    expected.sort_by_key(|v| (v.unsigned_abs(), *v));
    assert_eq!(found, expected);
    assert_eq!(d.excluded_unknown, 0);
    assert!(d.members.iter().all(|(_, v)| v.is_exact()));
    replay_derivation(&ctx, &evens, &d.certificate(ctx.group())).unwrap();
}

#[test]
fn derivation_of_powers_is_trivial() {
    let ctx = ctx(8, 1 << 20, 3);
    let pow2 = SubsetExpr::seq_gen(ctx.group(), SeqGen::Pow { base: 2 }).unwrap();
    let d = derivation(&ctx, &pow2).unwrap();
    let found: Vec<i64> = d.members.iter().map(|(g, _)| g.raw()[0]).collect();
    assert_eq!(found, vec![0]);
    replay_derivation(&ctx, &pow2, &d.certificate(ctx.group())).unwrap();
}

#[test]
fn derivation_of_block_unions_is_everything() {
    // translated blocks overlap unboundedly often, so every small shift
    // keeps an infinite intersection
    let g = z();
    let blocks = SubsetExpr::seq_gen(&g, SeqGen::FactorialBlocks).unwrap();
    let h = 479_001_600u64 + 32;
    let ctx = EvalCtx::new(g, Window::new(6, h, 3), BUDGET).unwrap();
    let d = derivation(&ctx, &blocks).unwrap();
    assert_eq!(d.members.len(), 13); // all of ball(6)
}

#[test]
fn derivation_symmetry_and_right_translation_on_exact_certificates() {
    let ctx = ctx(6, 1 << 12, 3);
    let set = SubsetExpr::periodic(ctx.group(), 4, [0, 1]).unwrap();
    let d = derivation(&ctx, &set).unwrap();
    for (g, v) in &d.members {
        if v.is_exact() {
            assert!(d.contains(&ctx.group().inv(g)), "g = {}", ctx.group().format(g));
        }
    }
    // right translation leaves the derivation unchanged
    let shifted = crate::sets::translate(
        ctx.group(),
        &set,
        &crate::groups::GroupElem::from_raw(vec![7]),
        crate::sets::Side::Right,
    )
    .unwrap();
    let d2 = derivation(&ctx, &shifted).unwrap();
    let gs: Vec<i64> = d.members.iter().map(|(g, _)| g.raw()[0]).collect();
    let gs2: Vec<i64> = d2.members.iter().map(|(g, _)| g.raw()[0]).collect();
    assert_eq!(gs, gs2);
}

use super::*;
use crate::groups::{make_group, GroupElem, GroupKind};

pub(crate) const BUDGET: u64 = 1 << 22;

fn z() -> Group {
    make_group(&GroupKind::FreeAbelian { rank: 1 }).unwrap()
}

fn ints(list: &[i64]) -> Vec<GroupElem> {
    list.iter().map(|&v| GroupElem::from_raw(vec![v])).collect()
}

fn raw1(members: &[GroupElem]) -> Vec<i64> {
    members.iter().map(|e| e.raw()[0]).collect()
}

/// Brute-force member oracle: scan |x| <= h against exact membership.
fn brute_members(eval: &Evaluator, expr: &SubsetExpr, h: i64) -> Vec<i64> {
    (-h..=h)
        .filter(|&v| {
            eval.contains(expr, &GroupElem::from_raw(vec![v])).unwrap()
        })
        .collect()
}

#[test]
fn members_of_evens() {
    let g = z();
    let eval = Evaluator::new(g.clone(), BUDGET);
    let evens = SubsetExpr::periodic(&g, 2, [0]).unwrap();
    let m = eval.members(&evens, 4).unwrap();
    // canonical order: 0, -2, 2, -4, 4
    assert_eq!(raw1(&m), vec![0, -2, 2, -4, 4]);
    let mut sorted = raw1(&m);
    sorted.sort_unstable();
    assert_eq!(sorted, brute_members(&eval, &evens, 4));
}

#[test]
fn members_of_powers_and_finite_products() {
    let g = z();
    let eval = Evaluator::new(g.clone(), BUDGET);
    let pow2 = SubsetExpr::seq_gen(&g, SeqGen::Pow { base: 2 }).unwrap();
    assert_eq!(raw1(&eval.members(&pow2, 16).unwrap()), vec![1, 2, 4, 8, 16]);

    let fp10 = SubsetExpr::fp_gen(&g, SeqGen::Pow { base: 10 }, None).unwrap();
    let mut m = raw1(&eval.members(&fp10, 110).unwrap());
    m.sort_unstable();
    assert_eq!(m, vec![1, 10, 11, 100, 101, 110]);
}

#[test]
fn fp_membership_against_subset_sum_oracle() {
    let g = z();
    let eval = Evaluator::new(g.clone(), BUDGET);
    let fp10 = SubsetExpr::fp_gen(&g, SeqGen::Pow { base: 10 }, None).unwrap();
    // oracle: sums of distinct powers of ten are the numbers with 0/1 digits
    for x in 0i64..=1200 {
        let digits_01 = x > 0
            && x.to_string().chars().all(|c| c == '0' || c == '1');
        assert_eq!(
            eval.contains(&fp10, &GroupElem::from_raw(vec![x])).unwrap(),
            digits_01,
            "x={x}"
        );
    }
}

#[test]
fn horizon_monotonicity() {
    let g = z();
    let eval = Evaluator::new(g.clone(), BUDGET);
    let exprs = vec![
        SubsetExpr::periodic(&g, 3, [1, 2]).unwrap(),
        SubsetExpr::seq_gen(&g, SeqGen::Pow { base: 2 }).unwrap(),
        SubsetExpr::Union(vec![
            SubsetExpr::periodic(&g, 4, [1]).unwrap(),
            SubsetExpr::explicit(&g, ints(&[7, -9])).unwrap(),
        ]),
    ];
    for expr in &exprs {
        let small: std::collections::HashSet<_> =
            eval.members(expr, 40).unwrap().into_iter().collect();
        let large: std::collections::HashSet<_> =
            eval.members(expr, 80).unwrap().into_iter().collect();
        assert!(small.is_subset(&large));
    }
}

#[test]
fn translate_coherence() {
    let g = z();
    let eval = Evaluator::new(g.clone(), BUDGET);
    let base = SubsetExpr::seq_gen(&g, SeqGen::Pow { base: 2 }).unwrap();
    let shift = GroupElem::from_raw(vec![5]);
    let translated = SubsetExpr::LeftTranslate(shift.clone(), Box::new(base.clone()));
    let h = 64u64;
    let direct = eval.members(&translated, h).unwrap();
    let expected: Vec<GroupElem> = eval
        .members(&base, h + g.length(&shift))
        .unwrap()
        .into_iter()
        .map(|x| g.op(&shift, &x))
        .filter(|x| g.length(x) <= h)
        .collect();
    let mut expected = expected;
    crate::groups::sort_canonical(g.as_ref(), &mut expected);
    assert_eq!(direct, expected);
}

#[test]
fn finiteness_examples_over_z() {
    let g = z();
    let eval = Evaluator::new(g.clone(), BUDGET);
    let w = Window::new(8, 1 << 20, 4);
    let evens = SubsetExpr::periodic(&g, 2, [0]).unwrap();
    let one = GroupElem::from_raw(vec![1]);
    let two = GroupElem::from_raw(vec![2]);

    // evens ∩ odds = ∅, exactly
    let odd_shift = translate(&g, &evens, &one, Side::Left).unwrap();
    let empty = intersect_all(&g, &[evens.clone(), odd_shift]).unwrap();
    let v = finiteness(&eval, &empty, &w);
    assert_eq!(v.tag, VerdictTag::ExactFinite { cardinality: 0 });

    // 2 + evens = evens, exactly infinite
    let even_shift = translate(&g, &evens, &two, Side::Left).unwrap();
    let same = intersect_all(&g, &[evens.clone(), even_shift]).unwrap();
    let v = finiteness(&eval, &same, &w);
    assert!(matches!(v.tag, VerdictTag::ExactInfinite { .. }));

    // powers of two meet their own shift by 1 only at 2: 2^a = 2^b + 1
    // forces (a, b) = (1, 0); confirmed by brute force within the horizon
    let pow2 = SubsetExpr::seq_gen(&g, SeqGen::Pow { base: 2 }).unwrap();
    let shifted = SubsetExpr::LeftTranslate(one.clone(), Box::new(pow2.clone()));
    let meet = SubsetExpr::Intersect(vec![pow2.clone(), shifted]);
    let v = finiteness(&eval, &meet, &w);
    assert!(matches!(v.tag, VerdictTag::WindowFinite { .. }), "{:?}", v.tag);
    assert_eq!(raw1(&eval.members(&meet, w.h).unwrap()), vec![2]);
    let mut scan = Vec::new();
    for x in 1i64..=(1 << 20) {
        let in_pow = {
            let mut v = x;
            while v % 2 == 0 {
                v /= 2;
            }
            v == 1
        };
        let pred = {
            let y = x - 1;
            let mut v = y;
            if y >= 1 {
                while v % 2 == 0 {
                    v /= 2;
                }
            }
            y >= 1 && v == 1
        };
        if in_pow && pred {
            scan.push(x);
        }
    }
    assert_eq!(scan, vec![2]);
}

#[test]
fn stability_tag_is_pure_function_of_profile() {
    let g = z();
    let eval = Evaluator::new(g.clone(), BUDGET);
    let w = Window::new(4, 100, 2); // margin 25, top zone (75, 100]
    let stable = SubsetExpr::seq_list(&g, ints(&[1, 5, 30])).unwrap();
    let v = finiteness(&eval, &stable, &w);
    assert_eq!(v.tag, VerdictTag::WindowFinite { last_growth_length: 30 });
    let growing = SubsetExpr::seq_list(&g, ints(&[1, 5, 90])).unwrap();
    let v = finiteness(&eval, &growing, &w);
    assert_eq!(v.tag, VerdictTag::WindowInfinite { top_zone_count: 1 });
    // determinism: same inputs, same verdict and certificate
    let again = finiteness(&eval, &growing, &w);
    assert_eq!(v, again);
}

#[test]
fn symbolic_algebra_normalizes_periodic_sets() {
    let g = z();
    let two = GroupElem::from_raw(vec![2]);
    let p4 = SubsetExpr::periodic(&g, 4, [1]).unwrap();
    let shifted = translate(&g, &p4, &two, Side::Left).unwrap();
    match &shifted {
        SubsetExpr::Periodic(p) => {
            assert_eq!(p.modulus, 4);
            assert_eq!(p.residues.iter().copied().collect::<Vec<_>>(), vec![3]);
        }
        other => panic!("expected a periodic set, got {other:?}"),
    }

    let p6 = SubsetExpr::periodic(&g, 6, [1]).unwrap();
    let meet = intersect_all(&g, &[p4, p6]).unwrap();
    match &meet {
        SubsetExpr::Periodic(p) => {
            assert_eq!(p.modulus, 12);
            assert_eq!(p.residues.iter().copied().collect::<Vec<_>>(), vec![1]);
        }
        other => panic!("expected a periodic set, got {other:?}"),
    }

    let e1 = SubsetExpr::explicit(&g, ints(&[1])).unwrap();
    let e2 = SubsetExpr::explicit(&g, ints(&[2])).unwrap();
    let both = union2(&g, &e1, &e2).unwrap();
    assert_eq!(both, SubsetExpr::explicit(&g, ints(&[1, 2])).unwrap());
}

#[test]
fn exact_soundness_against_scan() {
    // exact verdicts agree with brute-force membership over |x| <= 10^4
    let g = z();
    let eval = Evaluator::new(g.clone(), BUDGET);
    let expr = SubsetExpr::Union(vec![
        SubsetExpr::Intersect(vec![
            SubsetExpr::periodic(&g, 6, [1, 3]).unwrap(),
            SubsetExpr::periodic(&g, 4, [3]).unwrap(),
        ]),
        SubsetExpr::explicit(&g, ints(&[-7, 4])).unwrap(),
    ]);
    let NormalForm::Periodic(p) = normalize(&g, &expr).unwrap() else {
        panic!("expected periodic normal form")
    };
    for x in -10_000i64..=10_000 {
        assert_eq!(
            p.contains(x),
            eval.contains(&expr, &GroupElem::from_raw(vec![x])).unwrap(),
            "x={x}"
        );
    }
}

#[test]
fn generated_sets_do_not_normalize() {
    let g = z();
    let pow2 = SubsetExpr::seq_gen(&g, SeqGen::Pow { base: 2 }).unwrap();
    assert!(normalize(&g, &pow2).is_none());
    let fp = SubsetExpr::fp_list(&g, ints(&[3, 5]), None).unwrap();
    assert!(normalize(&g, &fp).is_none());
    let mixed = SubsetExpr::Union(vec![
        SubsetExpr::periodic(&g, 2, [0]).unwrap(),
        pow2,
    ]);
    assert!(normalize(&g, &mixed).is_none());
}

#[test]
fn verdict_replay_detects_tampering() {
    let g = z();
    let eval = Evaluator::new(g.clone(), BUDGET);
    let w = Window::new(4, 4096, 3);
    let evens = SubsetExpr::periodic(&g, 2, [0]).unwrap();
    let v = finiteness(&eval, &evens, &w);
    assert!(replay_verdict(&eval, &evens, &w, &v).is_ok());
    let mut tampered = v.clone();
    tampered.tag = VerdictTag::ExactFinite { cardinality: 3 };
    assert!(replay_verdict(&eval, &evens, &w, &tampered).is_err());
}

#[test]
fn expr_docs_round_trip() {
    let g = z();
    let doc: ExprDoc = serde_json::from_str(
        r#"{"union":[{"periodic":{"modulus":4,"residues":[1]}},
            {"left_translate":{"g":"3","of":{"seq":{"name":"pow","base":2}}}},
            {"fp":{"source":{"name":"pow","base":10}}}]}"#,
    )
    .unwrap();
    let expr = doc.resolve(&g).unwrap();
    let back = ExprDoc::from_expr(&g, &expr);
    let expr2 = back.resolve(&g).unwrap();
    assert_eq!(expr, expr2);
}

#[test]
fn seq_lists_must_be_strictly_monotone() {
    let g = z();
    assert!(SubsetExpr::seq_list(&g, ints(&[1, 2, 4])).is_ok());
    assert!(SubsetExpr::seq_list(&g, ints(&[1, 4, 2])).is_err());
    assert!(SubsetExpr::seq_list(&g, ints(&[1, 1])).is_err());
    assert!(SubsetExpr::fp_list(&g, ints(&[3, 3]), None).is_err());
}

#[test]
fn window_validation() {
    assert!(Window::new(1, 100, 1).validate().is_ok());
    assert!(Window { r: 0, h: 100, d: 1, margin: 10 }.validate().is_err());
    assert!(Window { r: 1, h: 10, d: 1, margin: 9 }.validate().is_err());
    assert!(Window { r: 1, h: 100, d: 0, margin: 10 }.validate().is_err());
}

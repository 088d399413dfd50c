use super::small::{prethick_outcome, small_outcome};
use super::*;
use crate::cert::Certificate;
use crate::groups::{make_group, GroupElem, GroupKind};
use crate::sets::{SeqGen, SubsetExpr, Window};

const BUDGET: u64 = 1 << 22;

fn z() -> crate::groups::Group {
    make_group(&GroupKind::FreeAbelian { rank: 1 }).unwrap()
}

fn ctx(r: u32, h: u64, d: u32) -> EvalCtx {
    EvalCtx::new(z(), Window::new(r, h, d), BUDGET).unwrap()
}

fn ints(list: &[i64]) -> Vec<GroupElem> {
    list.iter().map(|&v| GroupElem::from_raw(vec![v])).collect()
}

fn evens(ctx: &EvalCtx) -> SubsetExpr {
    SubsetExpr::periodic(ctx.group(), 2, [0]).unwrap()
}

fn pow2(ctx: &EvalCtx) -> SubsetExpr {
    SubsetExpr::seq_gen(ctx.group(), SeqGen::Pow { base: 2 }).unwrap()
}

#[test]
fn thin_fails_on_evens_with_even_witness() {
    let ctx = ctx(8, 1 << 12, 4);
    let out = IsThin.run(&ctx, &evens(&ctx)).unwrap();
    assert_eq!(out.polarity, Polarity::Fails);
    let Certificate::TranslateWitness { g, .. } = &out.certificate else {
        panic!("expected a translate witness")
    };
    assert_eq!(g, "-2"); // first even nonzero translate in canonical order
    assert_eq!(out.exactness(), Exactness::Exact);
    IsThin.replay(&ctx, &evens(&ctx), &out).unwrap();
}

#[test]
fn thin_holds_on_powers_windowed() {
    let ctx = ctx(8, 1 << 20, 4);
    let a = pow2(&ctx);
    let out = IsThin.run(&ctx, &a).unwrap();
    assert_eq!(out.polarity, Polarity::Holds);
    assert_eq!(out.exactness(), Exactness::Windowed);
    IsThin.replay(&ctx, &a, &out).unwrap();
}

#[test]
fn thin_holds_exactly_on_finite_sets() {
    let ctx = ctx(4, 1 << 12, 3);
    let a = SubsetExpr::explicit(ctx.group(), ints(&[0, 5, 7])).unwrap();
    let out = IsThin.run(&ctx, &a).unwrap();
    assert_eq!(out.polarity, Polarity::Holds);
    assert_eq!(out.exactness(), Exactness::Exact);
    IsThin.replay(&ctx, &a, &out).unwrap();
}

#[test]
fn thinness_level_of_doubled_powers_is_two() {
    let ctx = ctx(4, 1 << 20, 4);
    let a = pow2(&ctx);
    let one = GroupElem::from_raw(vec![1]);
    let shifted = crate::sets::translate(ctx.group(), &a, &one, crate::sets::Side::Left).unwrap();
    let union = SubsetExpr::Union(vec![a, shifted]);
    let (level, out) = thinness_level(&ctx, &union, 3).unwrap();
    assert_eq!(level, Some(2));
    assert_eq!(out.polarity, Polarity::Holds);
    ThinnessLevel { nmax: 3 }.replay(&ctx, &union, &out).unwrap();
}

#[test]
fn thinness_level_of_evens_is_unbounded() {
    let ctx = ctx(4, 1 << 12, 3);
    let a = evens(&ctx);
    for nmax in 1..=3 {
        let (level, out) = thinness_level(&ctx, &a, nmax).unwrap();
        assert_eq!(level, None);
        assert_eq!(out.polarity, Polarity::Fails);
    }
}

#[test]
fn thinness_level_of_finite_sets_is_zero() {
    let ctx = ctx(4, 1 << 12, 3);
    let a = SubsetExpr::explicit(ctx.group(), ints(&[3])).unwrap();
    let (level, out) = thinness_level(&ctx, &a, 3).unwrap();
    assert_eq!(level, Some(0));
    assert_eq!(out.polarity, Polarity::Holds);
    let empty = SubsetExpr::explicit(ctx.group(), ints(&[])).unwrap();
    assert_eq!(thinness_level(&ctx, &empty, 3).unwrap().0, Some(0));
}

#[test]
fn n_thin_direct_examples() {
    // gaps between powers of two exceed the translate spread beyond a small ball
    let ctx4 = ctx(4, 1 << 12, 3);
    let out = n_thin_direct(&ctx4, &pow2(&ctx4), 1).unwrap();
    assert_eq!(out.polarity, Polarity::Holds);
    NThinDirect { n: 1 }.replay(&ctx4, &pow2(&ctx4), &out).unwrap();

    // evens: every window of radius 2 catches at least two even numbers
    let ctx2 = ctx(2, 1 << 12, 3);
    let out = n_thin_direct(&ctx2, &evens(&ctx2), 1).unwrap();
    assert_eq!(out.polarity, Polarity::Fails);
    let Certificate::CountScan { exact, .. } = &out.certificate else {
        panic!("expected count scan")
    };
    assert!(exact);
    NThinDirect { n: 1 }.replay(&ctx2, &evens(&ctx2), &out).unwrap();

    // finite sets are n-thin for every n
    let a = SubsetExpr::explicit(ctx4.group(), ints(&[0, 5, 7])).unwrap();
    for n in 1..=3 {
        let out = n_thin_direct(&ctx4, &a, n).unwrap();
        assert_eq!(out.polarity, Polarity::Holds);
    }
}

#[test]
fn sparse_fails_on_evens_with_exact_chain() {
    let ctx = ctx(8, 1 << 12, 4);
    let a = evens(&ctx);
    let out = IsSparse.run(&ctx, &a).unwrap();
    assert_eq!(out.polarity, Polarity::Fails);
    let Certificate::Chain { chain, .. } = &out.certificate else {
        panic!("expected a chain")
    };
    assert_eq!(chain.len(), 4);
    // all chain elements are even, so every partial intersection is the evens
    for g in chain {
        assert_eq!(g.parse::<i64>().unwrap() % 2, 0);
    }
    assert_eq!(out.exactness(), Exactness::Exact);
    IsSparse.replay(&ctx, &a, &out).unwrap();
}

#[test]
fn sparse_holds_on_powers_at_depth_four() {
    let ctx = ctx(8, 1 << 20, 4);
    let a = pow2(&ctx);
    let out = IsSparse.run(&ctx, &a).unwrap();
    assert_eq!(out.polarity, Polarity::Holds);
    IsSparse.replay(&ctx, &a, &out).unwrap();
}

#[test]
fn sparse_chain_survives_union() {
    // a not-sparse witness chain for A remains one for A ∪ B
    let ctx = ctx(8, 1 << 12, 4);
    let a = evens(&ctx);
    let out = IsSparse.run(&ctx, &a).unwrap();
    let Certificate::Chain { chain, .. } = &out.certificate else {
        panic!("expected a chain")
    };
    let b = SubsetExpr::periodic(ctx.group(), 3, [1]).unwrap();
    let union = SubsetExpr::Union(vec![a, b]);
    assert!(chain_still_violates(&ctx, &union, chain).unwrap());
}

#[test]
fn thick_examples() {
    let ctx6 = ctx(6, 1 << 12, 3);
    let whole = SubsetExpr::integers();
    let out = IsThick.run(&ctx6, &whole).unwrap();
    assert_eq!(out.polarity, Polarity::Holds);
    assert_eq!(out.exactness(), Exactness::Exact);
    IsThick.replay(&ctx6, &whole, &out).unwrap();

    let ctx2 = ctx(2, 1 << 12, 3);
    let out = IsThick.run(&ctx2, &evens(&ctx2)).unwrap();
    assert_eq!(out.polarity, Polarity::Fails);
    let Certificate::ThickSurvey { failed_radius, .. } = &out.certificate else {
        panic!("expected a thick survey")
    };
    assert_eq!(*failed_radius, Some(1)); // no two consecutive integers are even
    IsThick.replay(&ctx2, &evens(&ctx2), &out).unwrap();
}

#[test]
fn thick_on_factorial_blocks() {
    // finite union of blocks [n!, n!+n], n <= 8: the longest run of
    // consecutive members caps the hosted ball radius
    let g = z();
    let mut elems = Vec::new();
    let mut fact = 1i64;
    for n in 1..=8i64 {
        fact *= n;
        elems.extend(fact..=fact + n);
    }
    let oracle_max_run = {
        let mut sorted: Vec<i64> = elems.clone();
        sorted.sort_unstable();
        sorted.dedup();
        let mut best = 1i64;
        let mut cur = 1i64;
        for w in sorted.windows(2) {
            if w[1] == w[0] + 1 {
                cur += 1;
                best = best.max(cur);
            } else {
                cur = 1;
            }
        }
        best
    };
    assert_eq!(oracle_max_run, 9); // the n = 8 block
    let max_hosted_radius = (oracle_max_run - 1) / 2;
    assert_eq!(max_hosted_radius, 4);

    // explicit sets take the exact route: per-radius decisions by run
    // lengths plus a bounded scan, independent of the horizon
    let blocks = SubsetExpr::explicit(&g, ints(&elems)).unwrap();
    let ctx4 = EvalCtx::new(z(), Window::new(4, 1 << 16, 3), BUDGET).unwrap();
    let out = IsThick.run(&ctx4, &blocks).unwrap();
    assert_eq!(out.polarity, Polarity::Holds);
    assert_eq!(out.exactness(), Exactness::Exact);
    IsThick.replay(&ctx4, &blocks, &out).unwrap();

    let ctx5 = EvalCtx::new(z(), Window::new(5, 1 << 16, 3), BUDGET).unwrap();
    let out = IsThick.run(&ctx5, &blocks).unwrap();
    assert_eq!(out.polarity, Polarity::Fails);
    let Certificate::ThickSurvey { failed_radius, .. } = &out.certificate else {
        panic!("expected a thick survey")
    };
    assert_eq!(*failed_radius, Some(5));

    // the unbounded block family hosts every tested radius
    let all_blocks = SubsetExpr::seq_gen(&g, SeqGen::FactorialBlocks).unwrap();
    let h = 479_001_600u64 + 32; // horizon past the n = 12 block
    let ctx_blocks = EvalCtx::new(z(), Window::new(6, h, 3), BUDGET).unwrap();
    let out = IsThick.run(&ctx_blocks, &all_blocks).unwrap();
    assert_eq!(out.polarity, Polarity::Holds);
    IsThick.replay(&ctx_blocks, &all_blocks, &out).unwrap();
}

#[test]
fn large_examples() {
    let ctx8 = ctx(8, 1 << 12, 3);
    let out = IsLarge.run(&ctx8, &evens(&ctx8)).unwrap();
    assert_eq!(out.polarity, Polarity::Holds);
    let Certificate::Cover { translators, exact, .. } = &out.certificate else {
        panic!("expected a cover")
    };
    assert_eq!(translators.len(), 2); // evens and odds
    assert!(exact);
    IsLarge.replay(&ctx8, &evens(&ctx8), &out).unwrap();

    let whole = SubsetExpr::integers();
    let out = IsLarge.run(&ctx8, &whole).unwrap();
    assert_eq!(out.polarity, Polarity::Holds);
    let Certificate::Cover { translators, .. } = &out.certificate else {
        panic!("expected a cover")
    };
    assert_eq!(translators, &["0"]);

    let out = IsLarge.run(&ctx8, &pow2(&ctx8)).unwrap();
    assert_eq!(out.polarity, Polarity::Fails);
    IsLarge.replay(&ctx8, &pow2(&ctx8), &out).unwrap();
}

#[test]
fn prethick_and_small_examples() {
    let ctx4 = ctx(4, 1 << 12, 3);
    let a = evens(&ctx4);
    let out = prethick_outcome(&ctx4, &a).unwrap();
    assert_eq!(out.polarity, Polarity::Holds);
    IsPrethick.replay(&ctx4, &a, &out).unwrap();

    let out = small_outcome(&ctx4, &a).unwrap();
    assert_eq!(out.polarity, Polarity::Fails);
    IsSmall.replay(&ctx4, &a, &out).unwrap();

    // powers of two are small by both routes at the window
    let p = pow2(&ctx4);
    let out = small_outcome(&ctx4, &p).unwrap();
    assert_eq!(out.polarity, Polarity::Holds);
    let Certificate::SmallRoutes { agree, .. } = &out.certificate else {
        panic!("expected small routes")
    };
    assert!(agree);
    IsSmall.replay(&ctx4, &p, &out).unwrap();

    // a thick set is prethick with the trivial fattening
    let g = z();
    let all_blocks = SubsetExpr::seq_gen(&g, SeqGen::FactorialBlocks).unwrap();
    let h = 479_001_600u64 + 32;
    let ctx_blocks = EvalCtx::new(z(), Window::new(2, h, 3), BUDGET).unwrap();
    let out = prethick_outcome(&ctx_blocks, &all_blocks).unwrap();
    assert_eq!(out.polarity, Polarity::Holds);
    let Certificate::PrethickSurvey { holds_at, .. } = &out.certificate else {
        panic!("expected a prethick survey")
    };
    assert_eq!(*holds_at, Some(0));
}

#[test]
fn disparse_proxy_flags_finite_product_sets() {
    let g = z();
    let ctx = EvalCtx::new(g.clone(), Window::new(2, 2000, 4), BUDGET).unwrap();
    let fp10 = SubsetExpr::fp_gen(&g, SeqGen::Pow { base: 10 }, None).unwrap();
    let out = DisparseProxy.run(&ctx, &fp10).unwrap();
    assert_eq!(out.polarity, Polarity::Fails);
    let Certificate::FpObstruction { terms, translate, products } = &out.certificate else {
        panic!("expected an obstruction")
    };
    assert_eq!(terms, &["1", "10", "100", "1000"]);
    assert_eq!(translate, "0");
    assert_eq!(products.len(), 15);
    DisparseProxy.replay(&ctx, &fp10, &out).unwrap();
}

#[test]
fn disparse_proxy_passes_powers_inconclusively() {
    let g = z();
    let ctx = EvalCtx::new(g.clone(), Window::new(4, 1 << 12, 3), BUDGET).unwrap();
    let a = SubsetExpr::seq_gen(&g, SeqGen::Pow { base: 2 }).unwrap();
    let out = DisparseProxy.run(&ctx, &a).unwrap();
    assert_eq!(out.polarity, Polarity::Holds);
    assert!(out.note.contains("never certifies disparseness"));
    DisparseProxy.replay(&ctx, &a, &out).unwrap();
}

#[test]
fn scattered_examples() {
    let ctx8 = ctx(8, 1 << 20, 3);
    let p = pow2(&ctx8);
    let out = AsymptoticallyScattered.run(&ctx8, &p).unwrap();
    assert_eq!(out.polarity, Polarity::Holds);
    assert!(matches!(out.certificate, Certificate::ScatterWitness { .. }));
    AsymptoticallyScattered.replay(&ctx8, &p, &out).unwrap();

    let ctx4 = ctx(4, 1 << 12, 3);
    let a = evens(&ctx4);
    let out = AsymptoticallyScattered.run(&ctx4, &a).unwrap();
    assert_eq!(out.polarity, Polarity::Fails);
    AsymptoticallyScattered.replay(&ctx4, &a, &out).unwrap();

    let fin = SubsetExpr::explicit(ctx4.group(), ints(&[1, 2, 3])).unwrap();
    let out = AsymptoticallyScattered.run(&ctx4, &fin).unwrap();
    assert_eq!(out.polarity, Polarity::Holds);
    assert!(matches!(out.certificate, Certificate::VacuouslyScattered { .. }));
}

#[test]
fn registry_selects_strategies_by_name() {
    let params = StrategyParams::default();
    assert!(strategy("sparse", &params).is_some());
    assert!(strategy("asymptotically-scattered", &params).is_some());
    assert!(strategy("no-such-class", &params).is_none());
    let suite = battery(&params);
    assert_eq!(suite.len(), STRATEGY_NAMES.len() - 1);
    let ctx = ctx(4, 1 << 12, 3);
    let a = evens(&ctx);
    for cls in &suite {
        let out = cls.run(&ctx, &a).unwrap();
        cls.replay(&ctx, &a, &out).unwrap();
    }
}

#[test]
fn tampered_witness_fails_replay() {
    let ctx = ctx(8, 1 << 12, 4);
    let a = evens(&ctx);
    let out = IsThin.run(&ctx, &a).unwrap();
    let mut tampered = out.clone();
    if let Certificate::TranslateWitness { g, .. } = &mut tampered.certificate {
        *g = "-1".to_string(); // odd translate: intersection is empty
    }
    assert!(IsThin.replay(&ctx, &a, &tampered).is_err());
}

//! Seeded corpora of structured sets and the cross-check suite that runs
//! the classifiers against one another.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{
    chain_still_violates, n_thin_direct, thinness_level, ClassOutcome, Classifier, EvalCtx,
    Exactness, IsSparse, IsSmall, Polarity,
};
use crate::cert::Certificate;
use crate::error::Result;
use crate::groups::{make_group, ComponentKind, GroupElem, GroupKind};
use crate::sets::{ExprDoc, SeqGen, SeqSourceDoc, SubsetExpr, Window};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorpusItem {
    pub index: usize,
    pub label: String,
    pub group: GroupKind,
    pub expr: ExprDoc,
    pub window: Window,
}

fn z_kind() -> GroupKind {
    GroupKind::FreeAbelian { rank: 1 }
}

fn random_periodic(rng: &mut ChaCha8Rng) -> ExprDoc {
    let modulus = rng.gen_range(2..=12u64);
    let residue_count = rng.gen_range(1..=modulus.min(4));
    let mut residues: Vec<u64> = (0..residue_count).map(|_| rng.gen_range(0..modulus)).collect();
    residues.sort_unstable();
    residues.dedup();
    let plus: Vec<i64> = (0..rng.gen_range(0..3))
        .map(|_| rng.gen_range(-32..=32i64))
        .collect();
    let minus: Vec<i64> = (0..rng.gen_range(0..3))
        .map(|_| rng.gen_range(-32..=32i64))
        .collect();
    ExprDoc::Periodic {
        modulus,
        residues,
        plus,
        minus,
    }
}

fn random_explicit(rng: &mut ChaCha8Rng) -> ExprDoc {
    let n = rng.gen_range(0..=10);
    let mut elems: Vec<i64> = (0..n).map(|_| rng.gen_range(-48..=48i64)).collect();
    elems.sort_unstable();
    elems.dedup();
    ExprDoc::Explicit(elems.iter().map(|v| v.to_string()).collect())
}

fn random_exact_z(rng: &mut ChaCha8Rng, depth: u32) -> ExprDoc {
    if depth == 0 {
        return if rng.gen_bool(0.6) {
            random_periodic(rng)
        } else {
            random_explicit(rng)
        };
    }
    match rng.gen_range(0..4) {
        0 => ExprDoc::Union(vec![
            random_exact_z(rng, depth - 1),
            random_exact_z(rng, depth - 1),
        ]),
        1 => ExprDoc::Intersect(vec![
            random_exact_z(rng, depth - 1),
            random_exact_z(rng, depth - 1),
        ]),
        2 => ExprDoc::LeftTranslate {
            g: rng.gen_range(-8..=8i64).to_string(),
            of: Box::new(random_exact_z(rng, depth - 1)),
        },
        _ => random_exact_z(rng, 0),
    }
}

fn random_windowed_z(rng: &mut ChaCha8Rng) -> ExprDoc {
    let base = match rng.gen_range(0..3) {
        0 => ExprDoc::Seq(SeqSourceDoc::Gen(SeqGen::Pow {
            base: *[2, 3, 10].choose(rng).unwrap(),
        })),
        1 => ExprDoc::Fp {
            source: SeqSourceDoc::Gen(SeqGen::Pow { base: 10 }),
            translate: None,
        },
        _ => ExprDoc::Seq(SeqSourceDoc::Gen(SeqGen::FactorialBlocks)),
    };
    match rng.gen_range(0..3) {
        0 => base,
        1 => ExprDoc::LeftTranslate {
            g: rng.gen_range(-6..=6i64).to_string(),
            of: Box::new(base),
        },
        _ => ExprDoc::Union(vec![base, random_exact_z(rng, 0)]),
    }
}

fn random_free_group(rng: &mut ChaCha8Rng) -> (GroupKind, ExprDoc) {
    let words = ["a", "b", "ab", "aB", "ba", "Ab", "aa", "bb", "aab"];
    let n = rng.gen_range(1..=5);
    let mut chosen: Vec<String> = (0..n)
        .map(|_| words.choose(rng).unwrap().to_string())
        .collect();
    chosen.sort();
    chosen.dedup();
    let base = ExprDoc::Explicit(chosen);
    let doc = if rng.gen_bool(0.5) {
        ExprDoc::LeftTranslate {
            g: words.choose(rng).unwrap().to_string(),
            of: Box::new(base),
        }
    } else {
        base
    };
    (GroupKind::FreeGroup { rank: 2 }, doc)
}

fn random_direct_sum(rng: &mut ChaCha8Rng) -> (GroupKind, ExprDoc) {
    let kind = GroupKind::DirectSum {
        components: vec![ComponentKind::Z; 4],
    };
    let doc = if rng.gen_bool(0.7) {
        let n = rng.gen_range(1..=2usize);
        let codes: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=4u64)).collect();
        ExprDoc::SupportCell { codes }
    } else {
        ExprDoc::Explicit(
            (0..rng.gen_range(1..=4))
                .map(|_| {
                    let mut coords = vec![0i64; 4];
                    coords[rng.gen_range(0..4)] = rng.gen_range(-2..=2i64);
                    format!(
                        "({})",
                        coords
                            .iter()
                            .map(|c| c.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    )
                })
                .collect(),
        )
    };
    (kind, doc)
}

/// Deterministic seeded corpus over the supported group families.
pub fn generate_corpus(seed: u64, count: usize) -> Vec<CorpusItem> {
    (0..count)
        .map(|index| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (index as u64).wrapping_mul(0x9e37_79b9));
            let roll = rng.gen_range(0..100);
            let (group, expr, window, label) = if roll < 64 {
                {
                    let depth = rng.gen_range(0..=2);
                    (
                        z_kind(),
                        random_exact_z(&mut rng, depth),
                        Window::new(3, 2048, 3),
                        "z-exact",
                    )
                }
            } else if roll < 80 {
                (
                    z_kind(),
                    random_windowed_z(&mut rng),
                    Window::new(3, 2048, 3),
                    "z-windowed",
                )
            } else if roll < 90 {
                let (g, e) = random_free_group(&mut rng);
                (g, e, Window::new(2, 6, 2), "free-group")
            } else {
                let (g, e) = random_direct_sum(&mut rng);
                (g, e, Window::new(2, 8, 2), "direct-sum")
            };
            CorpusItem {
                index,
                label: label.to_string(),
                group,
                expr,
                window,
            }
        })
        .collect()
}

/// Everything the cross-check suite records about one item.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ItemReport {
    pub index: usize,
    pub label: String,
    pub level: Option<u32>,
    pub level_outcome: ClassOutcome,
    pub direct_outcome: Option<ClassOutcome>,
    pub sparse: ClassOutcome,
    pub small: ClassOutcome,
    pub scattered: ClassOutcome,
    pub violations: Vec<String>,
}

const LEVEL_NMAX: u32 = 2;

/// Run the cross-check battery on one corpus item.
pub fn check_item(item: &CorpusItem, budget: u64) -> Result<ItemReport> {
    let group = make_group(&item.group)?;
    let expr = item.expr.resolve(&group)?;
    let ctx = EvalCtx::new(group.clone(), item.window, budget)?;
    let mut violations = Vec::new();

    // thinness level against the direct definition
    let (level, level_outcome) = thinness_level(&ctx, &expr, LEVEL_NMAX)?;
    let direct_outcome = match level {
        Some(n) if n >= 1 => {
            let direct = n_thin_direct(&ctx, &expr, n)?;
            if direct.polarity == Polarity::Fails && direct.exactness() == Exactness::Exact {
                violations.push(format!(
                    "item {}: level {n} but the direct count check fails exactly",
                    item.index
                ));
            }
            if n >= 2 {
                let lower = n_thin_direct(&ctx, &expr, n - 1)?;
                if lower.polarity == Polarity::Holds && lower.exactness() == Exactness::Exact {
                    violations.push(format!(
                        "item {}: level {n} but the direct check holds exactly at {}",
                        item.index,
                        n - 1
                    ));
                }
            }
            Some(direct)
        }
        _ => None,
    };

    let sparse = IsSparse.run(&ctx, &expr)?;
    let small = IsSmall.run(&ctx, &expr)?;
    let scattered = crate::classify::AsymptoticallyScattered.run(&ctx, &expr)?;

    // route agreement is part of the small outcome itself
    if let Certificate::SmallRoutes { agree, .. } = &small.certificate {
        if !agree {
            violations.push(format!(
                "item {}: smallness routes disagree: {}",
                item.index, small.note
            ));
        }
    }

    // hierarchy: nothing may be exactly/stably not-small yet pass the
    // sparse search at depth >= 3
    if small.polarity == Polarity::Fails
        && small.exactness() != Exactness::None
        && sparse.polarity == Polarity::Holds
        && item.window.d >= 3
    {
        violations.push(format!(
            "item {}: not small but sparse at depth {}",
            item.index, item.window.d
        ));
    }

    // sparse and asymptotically-scattered must agree when both are decided
    match (sparse.polarity, scattered.polarity) {
        (Polarity::Holds, Polarity::Fails) | (Polarity::Fails, Polarity::Holds) => {
            violations.push(format!(
                "item {}: sparse says {:?} but scattered says {:?}",
                item.index, sparse.polarity, scattered.polarity
            ));
        }
        _ => {}
    }

    // a failed sparse chain survives union with anything
    if let Certificate::Chain { chain, .. } = &sparse.certificate {
        let extra = SubsetExpr::explicit(
            &group,
            [group.identity()],
        )?;
        let union = SubsetExpr::Union(vec![expr.clone(), extra]);
        if !chain_still_violates(&ctx, &union, chain)? {
            violations.push(format!(
                "item {}: not-sparse chain does not survive a union",
                item.index
            ));
        }
    }

    Ok(ItemReport {
        index: item.index,
        label: item.label.clone(),
        level,
        level_outcome,
        direct_outcome,
        sparse,
        small,
        scattered,
        violations,
    })
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub items: usize,
    pub violations: Vec<String>,
    pub unknown_outcomes: u64,
    pub exact_outcomes: u64,
}

/// Run the suite over a corpus with a worker pool; reports keep item order.
pub fn run_corpus(items: &[CorpusItem], budget: u64) -> Result<(Vec<ItemReport>, SuiteSummary)> {
    let reports: Vec<ItemReport> = items
        .par_iter()
        .map(|item| check_item(item, budget))
        .collect::<Result<_>>()?;
    let mut summary = SuiteSummary {
        items: items.len(),
        ..Default::default()
    };
    for report in &reports {
        summary.violations.extend(report.violations.clone());
        for outcome in [&report.sparse, &report.small, &report.scattered] {
            match outcome.exactness() {
                Exactness::Exact => summary.exact_outcomes += 1,
                Exactness::None => summary.unknown_outcomes += 1,
                Exactness::Windowed => {}
            }
        }
    }
    Ok((reports, summary))
}

/// Statistics of the exact-class law suite.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct LawSummary {
    pub instances: usize,
    pub chain_monotonicity_checked: u64,
    pub translation_checked: u64,
    pub union_law_checked: u64,
    pub failures: Vec<String>,
}

/// Property suite over the exact Periodic/Explicit class:
/// not-sparse chains survive unions, exact outcomes are translation
/// invariant, and finitely-intersecting translate bounds add under union.
pub fn exact_class_laws(seed: u64, instances: usize, budget: u64) -> Result<LawSummary> {
    let group = make_group(&z_kind())?;
    let window = Window::new(3, 1024, 3);
    let ctx = EvalCtx::new(group.clone(), window, budget)?;
    let mut summary = LawSummary {
        instances,
        ..Default::default()
    };
    for i in 0..instances {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0x517c_c1b7));
        let a_depth = rng.gen_range(0..=2);
        let a_doc = random_exact_z(&mut rng, a_depth);
        let b_depth = rng.gen_range(0..=1);
        let b_doc = random_exact_z(&mut rng, b_depth);
        let a = a_doc.resolve(&group)?;
        let b = b_doc.resolve(&group)?;

        // (1) chain monotonicity under union
        let sparse_a = IsSparse.run(&ctx, &a)?;
        if let Certificate::Chain { chain, .. } = &sparse_a.certificate {
            summary.chain_monotonicity_checked += 1;
            let union = crate::sets::union2(&group, &a, &b)?;
            if !chain_still_violates(&ctx, &union, chain)? {
                summary
                    .failures
                    .push(format!("instance {i}: chain lost under union"));
            }
        }

        // (2) translation invariance of exact outcomes
        let shift = GroupElem::from_raw(vec![rng.gen_range(-1..=1i64)]);
        let translated = crate::sets::translate(&group, &a, &shift, crate::sets::Side::Left)?;
        for name in ["thin", "thick", "large", "sparse"] {
            let cls = crate::classify::strategy(name, &Default::default()).unwrap();
            let before = cls.run(&ctx, &a)?;
            let after = cls.run(&ctx, &translated)?;
            if before.exactness() == Exactness::Exact && after.exactness() == Exactness::Exact {
                summary.translation_checked += 1;
                if before.polarity != after.polarity {
                    summary.failures.push(format!(
                        "instance {i}: {name} changed under translation by {}",
                        group.format(&shift)
                    ));
                }
            }
        }

        // (3) union law: if every (m+1)-fold intersection of A and every
        // (n+1)-fold of B is exactly finite, every (m+n+1)-fold of A ∪ B is
        let m = rng.gen_range(1..=2u32);
        let n = rng.gen_range(1..=2u32);
        if all_tuples_exact_finite(&ctx, &a, m + 1)?
            && all_tuples_exact_finite(&ctx, &b, n + 1)?
        {
            summary.union_law_checked += 1;
            let union = crate::sets::union2(&group, &a, &b)?;
            if !all_tuples_exact_finite(&ctx, &union, m + n + 1)? {
                summary.failures.push(format!(
                    "instance {i}: union law broke for m={m} n={n}"
                ));
            }
        }
    }
    Ok(summary)
}

/// Every tuple of the given arity from the window ball has an exactly
/// finite translate intersection.
fn all_tuples_exact_finite(ctx: &EvalCtx, expr: &SubsetExpr, arity: u32) -> Result<bool> {
    let ball = ctx.ball(ctx.window().r)?;
    let mut idx: Vec<usize> = (0..arity as usize).collect();
    if idx.len() > ball.len() {
        return Ok(true);
    }
    loop {
        let tuple: Vec<GroupElem> = idx.iter().map(|&i| ball[i].clone()).collect();
        let meet = ctx.translate_intersection(&tuple, expr)?;
        let v = crate::sets::finiteness(ctx.eval(), &meet, ctx.window());
        if !matches!(v.tag, crate::sets::VerdictTag::ExactFinite { .. }) {
            return Ok(false);
        }
        // next combination in lexicographic order
        let k = idx.len();
        let mut pos = k;
        for j in (0..k).rev() {
            if idx[j] < ball.len() - (k - j) {
                pos = j;
                break;
            }
        }
        if pos == k {
            return Ok(true);
        }
        idx[pos] += 1;
        for j in (pos + 1)..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

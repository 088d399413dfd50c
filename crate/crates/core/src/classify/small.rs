//! Prethickness and smallness.
//!
//! Smallness is computed two ways and cross-checked: as the negation of
//! prethickness, and directly (the complement of every fattening F·A must
//! be large). Disagreement is reported as unknown, never resolved silently.

use super::thick_large::{exact_cover, windowed_cover, IsThick};
use super::{outcome, ClassName, ClassOutcome, Classifier, EvalCtx, Polarity};
use crate::cert::Certificate;
use crate::error::{Error, Result};
use crate::sets::{normalize, NormalForm, SubsetExpr};

pub struct IsPrethick;

/// Exact decision over the periodic algebra: fattening an infinite periodic
/// set by half its largest residue gap fills every class, giving a thick
/// fattening; a finite set has finite fattenings and is never prethick.
fn prethick_exact(ctx: &EvalCtx, p: &crate::sets::ZPeriodic) -> Result<ClassOutcome> {
    let w = *ctx.window();
    if !p.is_infinite() {
        return Ok(outcome(
            ClassName::Prethick,
            Polarity::Fails,
            "finite sets have finite fattenings, never thick",
            &w,
            crate::sets::residue_cert_for(p),
        ));
    }
    let m = p.modulus as u32;
    for rf in 0..=w.r.max(m) {
        let fattened = fatten_periodic(p, rf);
        if fattened.residues.len() as u64 == fattened.modulus {
            let thick = IsThick.run(ctx, &SubsetExpr::Periodic(fattened))?;
            debug_assert_eq!(thick.polarity, Polarity::Holds);
            return Ok(outcome(
                ClassName::Prethick,
                Polarity::Holds,
                format!("ball({rf})·A fills every residue class"),
                &w,
                Certificate::PrethickSurvey {
                    per_radius: vec![(rf, thick.certificate)],
                    holds_at: Some(rf),
                },
            ));
        }
    }
    unreachable!("a nonempty residue set fills within half a modulus of fattening")
}

pub(crate) fn fatten_periodic(p: &crate::sets::ZPeriodic, rf: u32) -> crate::sets::ZPeriodic {
    let mut acc = p.clone();
    for f in 1..=i64::from(rf) {
        for shift in [f, -f] {
            if let Some(next) = acc.union(&p.translate(shift)) {
                acc = next;
            }
        }
    }
    acc
}

pub(crate) fn prethick_outcome(ctx: &EvalCtx, expr: &SubsetExpr) -> Result<ClassOutcome> {
    let w = *ctx.window();
    if let Some(NormalForm::Periodic(p)) = normalize(ctx.group(), expr) {
        return prethick_exact(ctx, &p);
    }
    let mut per_radius = Vec::new();
    let mut unknown = false;
    for rf in 0..=w.r {
        let fattened = ctx.fatten(rf, expr)?;
        // fattening by ball(rf) buys runs of radius rf for free; thickness
        // must be probed past that or every infinite set would pass
        let thick_ctx = ctx.with_radius(w.r + rf + 1);
        let thick = IsThick.run(&thick_ctx, &fattened)?;
        let polarity = thick.polarity;
        per_radius.push((rf, thick.certificate));
        match polarity {
            Polarity::Holds => {
                return Ok(outcome(
                    ClassName::Prethick,
                    Polarity::Holds,
                    format!("ball({rf})·A is thick"),
                    &w,
                    Certificate::PrethickSurvey {
                        per_radius,
                        holds_at: Some(rf),
                    },
                ))
            }
            Polarity::Fails => {}
            Polarity::UnknownAtWindow => unknown = true,
        }
    }
    if unknown {
        return Ok(outcome(
            ClassName::Prethick,
            Polarity::UnknownAtWindow,
            "some fattenings were undecidable at this window",
            &w,
            Certificate::inconclusive("undecidable fattening"),
        ));
    }
    Ok(outcome(
        ClassName::Prethick,
        Polarity::Fails,
        format!("no fattening by a ball up to radius {} is thick", w.r),
        &w,
        Certificate::PrethickSurvey {
            per_radius,
            holds_at: None,
        },
    ))
}

impl Classifier for IsPrethick {
    fn name(&self) -> &'static str {
        "prethick"
    }

    fn run(&self, ctx: &EvalCtx, expr: &SubsetExpr) -> Result<ClassOutcome> {
        prethick_outcome(ctx, expr)
    }

    fn replay(&self, ctx: &EvalCtx, expr: &SubsetExpr, out: &ClassOutcome) -> Result<()> {
        let fresh = prethick_outcome(ctx, expr)?;
        if fresh.polarity != out.polarity || fresh.certificate != out.certificate {
            return Err(Error::model("prethick survey does not replay"));
        }
        Ok(())
    }
}

/// Cover pool cap for the complement-largeness route.
const COMPLEMENT_POOL_CAP: u32 = 128;

/// The complement of a fattening by ball(rf) must be large. Escaping the
/// fattened set takes translates longer than rf — and longer than any dense
/// prefix the fattening merges into a run — so the cover pool grows
/// adaptively up to a cap.
fn complement_large(
    ctx: &EvalCtx,
    of: &SubsetExpr,
    fatten_radius: u32,
) -> Result<(Polarity, Certificate)> {
    let base = ctx.window().r + fatten_radius + 1;
    if let Some(NormalForm::Periodic(p)) = normalize(ctx.group(), of) {
        let complement = p.complement();
        // exact rule: an infinite periodic part is large (its modulus many
        // shifts cover the group); a finite complement never is
        let pool = if complement.is_infinite() {
            (complement.modulus as u32).max(base)
        } else {
            base
        };
        return exact_cover(ctx, &complement, pool);
    }
    let member = |x: &crate::groups::GroupElem| Ok(!ctx.eval().contains(of, x)?);
    let mut pool = base;
    loop {
        let (polarity, cert) = windowed_cover(ctx, pool, &member)?;
        if polarity == Polarity::Holds || pool >= COMPLEMENT_POOL_CAP {
            return Ok((polarity, cert));
        }
        pool = (pool * 2).min(COMPLEMENT_POOL_CAP);
    }
}

pub struct IsSmall;

/// Route (b) step over the exact algebra: the complement of the fattened
/// set is large exactly when it keeps an infinite periodic part.
fn complement_large_exact(
    ctx: &EvalCtx,
    p: &crate::sets::ZPeriodic,
    rf: u32,
) -> Result<(Polarity, Certificate)> {
    let complement = fatten_periodic(p, rf).complement();
    if !complement.is_infinite() {
        return Ok((Polarity::Fails, crate::sets::residue_cert_for(&complement)));
    }
    // adaptive pool: residue shifts plus enough room to escape the runs the
    // exceptional points create
    let span = complement
        .plus
        .iter()
        .chain(&complement.minus)
        .map(|d| d.abs())
        .max()
        .unwrap_or(0) as u32;
    let base = (complement.modulus as u32).max(ctx.window().r + rf + 1);
    let cap = base + 2 * (complement.modulus as u32) + span + 64;
    let mut pool = base;
    loop {
        let (polarity, cert) = exact_cover(ctx, &complement, pool)?;
        if polarity == Polarity::Holds || pool >= cap {
            return Ok((polarity, cert));
        }
        pool = (pool * 2).min(cap);
    }
}

pub(crate) fn small_outcome(ctx: &EvalCtx, expr: &SubsetExpr) -> Result<ClassOutcome> {
    let w = *ctx.window();
    let prethick = prethick_outcome(ctx, expr)?;
    let route_a = match prethick.polarity {
        Polarity::Holds => Polarity::Fails,
        Polarity::Fails => Polarity::Holds,
        Polarity::UnknownAtWindow => Polarity::UnknownAtWindow,
    };

    let normal = normalize(ctx.group(), expr);
    let rf_max = match &normal {
        Some(NormalForm::Periodic(p)) => w.r.max(p.modulus as u32),
        _ => w.r,
    };
    let mut complement_certs = Vec::new();
    let mut route_b = Polarity::Holds;
    for rf in 0..=rf_max {
        let (polarity, cert) = match &normal {
            Some(NormalForm::Periodic(p)) => complement_large_exact(ctx, p, rf)?,
            _ => {
                let fattened = ctx.fatten(rf, expr)?;
                complement_large(ctx, &fattened, rf)?
            }
        };
        complement_certs.push((rf, cert));
        match polarity {
            Polarity::Holds => {}
            Polarity::Fails => {
                route_b = Polarity::Fails;
                break;
            }
            Polarity::UnknownAtWindow => {
                route_b = Polarity::UnknownAtWindow;
                break;
            }
        }
    }

    let agree = route_a == route_b;
    let decided = agree && route_a != Polarity::UnknownAtWindow;
    let certificate = Certificate::SmallRoutes {
        not_prethick: Box::new(prethick.certificate),
        prethick_holds: prethick.polarity == Polarity::Holds,
        complement_large: complement_certs,
        complement_all_large: route_b == Polarity::Holds,
        agree,
    };
    let (polarity, note) = if decided {
        (
            route_a,
            "both routes agree: not-prethick and complement-of-fattening-large".to_string(),
        )
    } else if !agree {
        (
            Polarity::UnknownAtWindow,
            format!("route discrepancy: negation-of-prethick says {route_a:?}, complement cover says {route_b:?}"),
        )
    } else {
        (
            Polarity::UnknownAtWindow,
            "both routes undecidable at this window".to_string(),
        )
    };
    Ok(outcome(ClassName::Small, polarity, note, &w, certificate))
}

impl Classifier for IsSmall {
    fn name(&self) -> &'static str {
        "small"
    }

    fn run(&self, ctx: &EvalCtx, expr: &SubsetExpr) -> Result<ClassOutcome> {
        small_outcome(ctx, expr)
    }

    fn replay(&self, ctx: &EvalCtx, expr: &SubsetExpr, out: &ClassOutcome) -> Result<()> {
        let fresh = small_outcome(ctx, expr)?;
        if fresh.polarity != out.polarity || fresh.certificate != out.certificate {
            return Err(Error::model("small routes do not replay"));
        }
        Ok(())
    }
}

//! Asymptotic scatteredness, the windowed counterpart of sparseness.
//!
//! A point x deep in the set with (ball(R) \ ball(h))·x missing the set
//! entirely witnesses the scattered condition for every finite translate
//! family avoiding ball(h); subsets of the maximal shell inherit the miss.

use super::{outcome, ClassName, ClassOutcome, Classifier, EvalCtx, Polarity};
use crate::cert::{BlockedPoint, Certificate};
use crate::error::{Error, Result};
use crate::groups::GroupElem;
use crate::sets::{finiteness, SubsetExpr};

/// Tail points sampled per exclusion radius.
const TAIL_SAMPLE: usize = 24;

pub struct AsymptoticallyScattered;

fn shell(ctx: &EvalCtx, h: u32) -> Result<Vec<GroupElem>> {
    let outer = ctx.ball(ctx.window().r)?;
    Ok(outer
        .into_iter()
        .filter(|g| ctx.group().length(g) > u64::from(h))
        .collect())
}

impl Classifier for AsymptoticallyScattered {
    fn name(&self) -> &'static str {
        "asymptotically-scattered"
    }

    fn run(&self, ctx: &EvalCtx, expr: &SubsetExpr) -> Result<ClassOutcome> {
        let w = *ctx.window();
        let base = finiteness(ctx.eval(), expr, &w);
        if base.is_finite() {
            return Ok(outcome(
                ClassName::AsymptoticallyScattered,
                Polarity::Holds,
                "vacuously scattered: finite at this window, no infinite subset exists",
                &w,
                Certificate::VacuouslyScattered {
                    inner: Box::new(base.certificate),
                },
            ));
        }
        if base.is_unknown() {
            return Ok(outcome(
                ClassName::AsymptoticallyScattered,
                Polarity::UnknownAtWindow,
                "membership growth undecidable at this window",
                &w,
                Certificate::inconclusive("undecidable growth"),
            ));
        }
        // a set with an infinite periodic part is never scattered: its
        // residue class is an infinite subset that modulus multiples hit
        // from every deep point, beyond any excluded ball
        if let Some(minor) = crate::sets::periodic_minorant(ctx.group(), expr) {
            return Ok(outcome(
                ClassName::AsymptoticallyScattered,
                Polarity::Fails,
                format!(
                    "modulus multiples hit the periodic part from every deep point (mod {})",
                    minor.modulus
                ),
                &w,
                crate::sets::residue_cert_for(&minor),
            ));
        }
        let members = ctx.eval().members(expr, w.h)?;
        // the deepest quartile tail is the hardest test: any witness for it
        // also serves every longer tail
        let tail_index = (members.len() * 3) / 4;
        let tail = &members[tail_index..];
        let mut per_excluded = Vec::new();
        for h in 0..w.r {
            let shell_elems = shell(ctx, h)?;
            if shell_elems.is_empty() {
                continue;
            }
            let mut blocked = Vec::new();
            let mut witness = None;
            'points: for x in tail.iter().take(TAIL_SAMPLE) {
                for f in &shell_elems {
                    if ctx.eval().contains(expr, &ctx.group().op(f, x))? {
                        blocked.push(BlockedPoint {
                            x: ctx.format(x),
                            hit: ctx.format(f),
                        });
                        continue 'points;
                    }
                }
                witness = Some(x.clone());
                break;
            }
            if let Some(x) = witness {
                return Ok(outcome(
                    ClassName::AsymptoticallyScattered,
                    Polarity::Holds,
                    format!(
                        "translates avoiding ball({h}) miss the set at a deep point"
                    ),
                    &w,
                    Certificate::ScatterWitness {
                        excluded_radius: h,
                        radius: w.r,
                        tail_index: tail_index as u64,
                        point: ctx.format(&x),
                    },
                ));
            }
            per_excluded.push((h, blocked));
        }
        Ok(outcome(
            ClassName::AsymptoticallyScattered,
            Polarity::Fails,
            "every sampled deep point is hit by some translate at every exclusion radius",
            &w,
            Certificate::ScatterBlocked {
                radius: w.r,
                per_excluded,
            },
        ))
    }

    fn replay(&self, ctx: &EvalCtx, expr: &SubsetExpr, out: &ClassOutcome) -> Result<()> {
        match (&out.polarity, &out.certificate) {
            (Polarity::Holds, Certificate::VacuouslyScattered { inner }) => {
                let v = finiteness(ctx.eval(), expr, ctx.window());
                if !v.is_finite() || v.certificate != **inner {
                    return Err(Error::model("vacuous scatteredness does not replay"));
                }
                Ok(())
            }
            (Polarity::Holds, Certificate::ScatterWitness { excluded_radius, point, .. }) => {
                let x = ctx.parse(point)?;
                if !ctx.eval().contains(expr, &x)? {
                    return Err(Error::model("scatter witness is not in the set"));
                }
                for f in shell(ctx, *excluded_radius)? {
                    if ctx.eval().contains(expr, &ctx.group().op(&f, &x))? {
                        return Err(Error::model("scatter witness is hit by the shell"));
                    }
                }
                Ok(())
            }
            (Polarity::Fails, Certificate::Residue { .. }) => {
                let minor = crate::sets::periodic_minorant(ctx.group(), expr)
                    .ok_or_else(|| Error::model("no periodic part to replay against"))?;
                if crate::sets::residue_cert_for(&minor) != out.certificate {
                    return Err(Error::model("periodic-part evidence does not replay"));
                }
                Ok(())
            }
            (Polarity::Fails, Certificate::ScatterBlocked { per_excluded, .. }) => {
                for (h, blocked) in per_excluded {
                    for bp in blocked {
                        let x = ctx.parse(&bp.x)?;
                        let f = ctx.parse(&bp.hit)?;
                        let len = ctx.group().length(&f);
                        if len <= u64::from(*h) || len > u64::from(ctx.window().r) {
                            return Err(Error::model("blocking translate outside the shell"));
                        }
                        if !ctx.eval().contains(expr, &x)?
                            || !ctx.eval().contains(expr, &ctx.group().op(&f, &x))?
                        {
                            return Err(Error::model("blocking pair does not replay"));
                        }
                    }
                }
                Ok(())
            }
            (Polarity::UnknownAtWindow, _) => Ok(()),
            _ => Err(Error::model("malformed scattered certificate")),
        }
    }
}

//! Sparseness via violating chains: a depth-D chain of distinct translates
//! whose partial intersections are all infinite is windowed evidence that
//! the set is not sparse.

use super::{outcome, ClassName, ClassOutcome, Classifier, EvalCtx, Polarity};
use crate::cert::Certificate;
use crate::error::{Error, Result};
use crate::groups::GroupElem;
use crate::sets::{finiteness, SubsetExpr};

/// Node cap for one chain search.
const NODE_CAP: u64 = 100_000;

pub struct IsSparse;

struct ChainSearch<'a> {
    ctx: &'a EvalCtx,
    expr: &'a SubsetExpr,
    ball: Vec<GroupElem>,
    explored: u64,
    unknown_prunes: u64,
    capped: bool,
}

enum ChainResult {
    Found {
        chain: Vec<GroupElem>,
        levels: Vec<Certificate>,
    },
    Exhausted,
}

impl<'a> ChainSearch<'a> {
    /// Depth-first over index-increasing chains, elements in canonical
    /// order, pruning on the first finite partial intersection.
    fn run(&mut self) -> Result<ChainResult> {
        let mut chain = Vec::new();
        let mut levels = Vec::new();
        if self.rec(0, &mut chain, &mut levels)? {
            return Ok(ChainResult::Found {
                chain,
                levels,
            });
        }
        Ok(ChainResult::Exhausted)
    }

    fn rec(
        &mut self,
        start: usize,
        chain: &mut Vec<GroupElem>,
        levels: &mut Vec<Certificate>,
    ) -> Result<bool> {
        if chain.len() == self.ctx.window().d as usize {
            return Ok(true);
        }
        for i in start..self.ball.len() {
            if self.explored >= NODE_CAP {
                self.capped = true;
                return Ok(false);
            }
            chain.push(self.ball[i].clone());
            let meet = self.ctx.translate_intersection(chain, self.expr)?;
            let v = finiteness(self.ctx.eval(), &meet, self.ctx.window());
            self.explored += 1;
            if v.is_infinite() {
                levels.push(v.certificate);
                if self.rec(i + 1, chain, levels)? {
                    return Ok(true);
                }
                levels.pop();
            } else if v.is_unknown() {
                self.unknown_prunes += 1;
            }
            chain.pop();
        }
        Ok(false)
    }
}

/// When the set has an infinite periodic part, the multiples of that part's
/// modulus form a violating chain of any depth: every partial intersection
/// still holds the whole residue class.
fn minorant_chain(ctx: &EvalCtx, expr: &SubsetExpr) -> Result<Option<ClassOutcome>> {
    let w = *ctx.window();
    let Some(minor) = crate::sets::periodic_minorant(ctx.group(), expr) else {
        return Ok(None);
    };
    let m = minor.modulus as i64;
    let chain: Vec<GroupElem> = (0..i64::from(w.d))
        .map(|k| GroupElem::from_raw(vec![k * m]))
        .collect();
    let mut levels = Vec::new();
    for k in 1..=chain.len() {
        let meet = ctx.translate_intersection(&chain[..k], expr)?;
        let v = finiteness(ctx.eval(), &meet, ctx.window());
        if !v.is_infinite() {
            return Ok(None);
        }
        levels.push(v.certificate);
    }
    Ok(Some(super::outcome(
        ClassName::Sparse,
        Polarity::Fails,
        format!(
            "multiples of {m} form a depth-{} chain through the periodic part",
            w.d
        ),
        &w,
        Certificate::Chain {
            chain: chain.iter().map(|x| ctx.format(x)).collect(),
            levels,
        },
    )))
}

impl Classifier for IsSparse {
    fn name(&self) -> &'static str {
        "sparse"
    }

    fn run(&self, ctx: &EvalCtx, expr: &SubsetExpr) -> Result<ClassOutcome> {
        let w = *ctx.window();
        if let Some(out) = minorant_chain(ctx, expr)? {
            return Ok(out);
        }
        let mut search = ChainSearch {
            ctx,
            expr,
            ball: ctx.ball(w.r)?,
            explored: 0,
            unknown_prunes: 0,
            capped: false,
        };
        match search.run()? {
            ChainResult::Found { chain, levels } => Ok(outcome(
                ClassName::Sparse,
                Polarity::Fails,
                format!(
                    "chain of depth {} with every partial intersection infinite",
                    chain.len()
                ),
                &w,
                Certificate::Chain {
                    chain: chain.iter().map(|x| ctx.format(x)).collect(),
                    levels,
                },
            )),
            ChainResult::Exhausted => {
                if search.capped {
                    return Ok(outcome(
                        ClassName::Sparse,
                        Polarity::UnknownAtWindow,
                        format!("chain search hit the {NODE_CAP}-node cap"),
                        &w,
                        Certificate::inconclusive("chain search capped"),
                    ));
                }
                let polarity = if search.unknown_prunes > 0 {
                    // undecided partials pruned as if finite; never claim a pass
                    Polarity::UnknownAtWindow
                } else {
                    Polarity::Holds
                };
                Ok(outcome(
                    ClassName::Sparse,
                    polarity,
                    format!("no violating chain up to depth {}", w.d),
                    &w,
                    Certificate::ChainSearch {
                        radius: w.r,
                        depth: w.d,
                        explored: search.explored,
                        unknown_prunes: search.unknown_prunes,
                    },
                ))
            }
        }
    }

    fn replay(&self, ctx: &EvalCtx, expr: &SubsetExpr, out: &ClassOutcome) -> Result<()> {
        match (&out.polarity, &out.certificate) {
            (Polarity::Fails, Certificate::Chain { chain, levels }) => {
                replay_chain(ctx, expr, chain, levels)
            }
            (Polarity::Holds | Polarity::UnknownAtWindow, _) => {
                let fresh = self.run(ctx, expr)?;
                if fresh.polarity != out.polarity || fresh.certificate != out.certificate {
                    return Err(Error::model("chain search does not replay"));
                }
                Ok(())
            }
            _ => Err(Error::model("malformed sparse certificate")),
        }
    }
}

/// Re-verify a violating chain: elements distinct, inside the ball, and
/// every partial intersection infinite with the recorded evidence.
pub fn replay_chain(
    ctx: &EvalCtx,
    expr: &SubsetExpr,
    chain: &[String],
    levels: &[Certificate],
) -> Result<()> {
    if chain.is_empty() || chain.len() != levels.len() {
        return Err(Error::model("chain and level evidence lengths differ"));
    }
    let elems: Vec<GroupElem> = chain
        .iter()
        .map(|t| ctx.parse(t))
        .collect::<Result<_>>()?;
    for (i, x) in elems.iter().enumerate() {
        if elems[..i].contains(x) {
            return Err(Error::model("chain elements must be distinct"));
        }
    }
    for k in 1..=elems.len() {
        let meet = ctx.translate_intersection(&elems[..k], expr)?;
        let v = finiteness(ctx.eval(), &meet, ctx.window());
        if !v.is_infinite() {
            return Err(Error::model(format!(
                "partial intersection at depth {k} is not infinite"
            )));
        }
        if v.certificate != levels[k - 1] {
            return Err(Error::model(format!(
                "level {k} evidence does not replay"
            )));
        }
    }
    Ok(())
}

/// Replay a chain against a superset expression (union monotonicity): the
/// partial intersections must still be infinite, though the certificates may
/// differ from the originals.
pub fn chain_still_violates(
    ctx: &EvalCtx,
    superset: &SubsetExpr,
    chain: &[String],
) -> Result<bool> {
    let elems: Vec<GroupElem> = chain
        .iter()
        .map(|t| ctx.parse(t))
        .collect::<Result<_>>()?;
    for k in 1..=elems.len() {
        let meet = ctx.translate_intersection(&elems[..k], superset)?;
        let v = finiteness(ctx.eval(), &meet, ctx.window());
        if !v.is_infinite() {
            return Ok(false);
        }
    }
    Ok(true)
}

//! The finite-product obstruction to disparseness.
//!
//! Finding distinct a_1..a_D and a translate g with every finite product
//! of the a_i (indices increasing) landing in A·g⁻¹ is evidence that A is
//! not disparse. The converse direction is not decidable here: a clean
//! search is reported as "no obstruction found", never as "disparse".

use super::{outcome, ClassName, ClassOutcome, Classifier, EvalCtx, Polarity};
use crate::cert::Certificate;
use crate::error::{Error, Result};
use crate::groups::GroupElem;
use crate::sets::{finiteness, SubsetExpr};

/// Candidate terms examined per translate.
const CANDIDATE_CAP: usize = 48;
/// Hard cap on the product-tree depth (2^D products).
const DEPTH_CAP: u32 = 20;

pub struct DisparseProxy;

struct ObstructionSearch<'a> {
    ctx: &'a EvalCtx,
    expr: &'a SubsetExpr,
    depth: usize,
    explored: u64,
}

impl<'a> ObstructionSearch<'a> {
    /// Extend the prefix by candidates with increasing index; `products`
    /// holds every product of a nonempty subsequence of the prefix.
    fn rec(
        &mut self,
        candidates: &[GroupElem],
        g: &GroupElem,
        from: usize,
        prefix: &mut Vec<GroupElem>,
        products: &mut Vec<GroupElem>,
    ) -> Result<bool> {
        if prefix.len() == self.depth {
            return Ok(true);
        }
        'next: for i in from..candidates.len() {
            let a = &candidates[i];
            self.explored += 1;
            let mut appended = vec![a.clone()];
            for p in products.iter() {
                appended.push(self.ctx.group().op(p, a));
            }
            for q in &appended {
                let translated = self.ctx.group().op(q, g);
                if !self.ctx.eval().contains(self.expr, &translated)? {
                    continue 'next;
                }
            }
            let added = appended.len();
            prefix.push(a.clone());
            products.extend(appended);
            if self.rec(candidates, g, i + 1, prefix, products)? {
                return Ok(true);
            }
            products.truncate(products.len() - added);
            prefix.pop();
        }
        Ok(false)
    }
}

impl Classifier for DisparseProxy {
    fn name(&self) -> &'static str {
        "disparse-proxy"
    }

    fn run(&self, ctx: &EvalCtx, expr: &SubsetExpr) -> Result<ClassOutcome> {
        let w = *ctx.window();
        if w.d > DEPTH_CAP {
            return Err(Error::Resource {
                what: "finite-product search depth",
                needed: u64::from(w.d),
                budget: u64::from(DEPTH_CAP),
            });
        }
        let base = finiteness(ctx.eval(), expr, &w);
        let members = match ctx.eval().members(expr, w.h) {
            Ok(m) => m,
            Err(e) => {
                return Ok(outcome(
                    ClassName::DisparseProxy,
                    Polarity::UnknownAtWindow,
                    e.to_string(),
                    &w,
                    Certificate::inconclusive(e.to_string()),
                ))
            }
        };
        let mut search = ObstructionSearch {
            ctx,
            expr,
            depth: w.d as usize,
            explored: 0,
        };
        let identity = ctx.group().identity();
        for g in ctx.ball(w.r)? {
            // singleton products must lie in A·g^{-1}, so candidates do too;
            // the identity is excluded as a term, it contributes nothing to
            // a finite-products pattern
            let g_inv = ctx.group().inv(&g);
            let mut candidates: Vec<GroupElem> = members
                .iter()
                .map(|x| ctx.group().op(x, &g_inv))
                .filter(|x| *x != identity)
                .collect();
            crate::groups::sort_canonical(ctx.group().as_ref(), &mut candidates);
            candidates.dedup();
            candidates.truncate(CANDIDATE_CAP);
            let mut prefix = Vec::new();
            let mut products = Vec::new();
            if search.rec(&candidates, &g, 0, &mut prefix, &mut products)? {
                let product_texts = products.iter().map(|p| ctx.format(p)).collect();
                return Ok(outcome(
                    ClassName::DisparseProxy,
                    Polarity::Fails,
                    format!(
                        "finite products of {} terms translate into the set; evidence of non-disparseness",
                        prefix.len()
                    ),
                    &w,
                    Certificate::FpObstruction {
                        terms: prefix.iter().map(|a| ctx.format(a)).collect(),
                        translate: ctx.format(&g),
                        products: product_texts,
                    },
                ));
            }
        }
        let note = if base.is_finite() {
            format!(
                "no finite-product obstruction at depth {}; the set is finite at this window — not a disparseness certificate",
                w.d
            )
        } else {
            format!(
                "no finite-product obstruction at depth {} within the window — a pass never certifies disparseness",
                w.d
            )
        };
        Ok(outcome(
            ClassName::DisparseProxy,
            Polarity::Holds,
            note,
            &w,
            Certificate::FpSearch {
                depth: w.d,
                translate_radius: w.r,
                candidate_cap: CANDIDATE_CAP as u64,
                explored: search.explored,
            },
        ))
    }

    fn replay(&self, ctx: &EvalCtx, expr: &SubsetExpr, out: &ClassOutcome) -> Result<()> {
        match (&out.polarity, &out.certificate) {
            (
                Polarity::Fails,
                Certificate::FpObstruction {
                    terms,
                    translate,
                    products,
                },
            ) => {
                let term_elems: Vec<GroupElem> = terms
                    .iter()
                    .map(|t| ctx.parse(t))
                    .collect::<Result<_>>()?;
                let identity = ctx.group().identity();
                for (i, a) in term_elems.iter().enumerate() {
                    if term_elems[..i].contains(a) {
                        return Err(Error::model("obstruction terms must be distinct"));
                    }
                    if *a == identity {
                        return Err(Error::model("obstruction terms must be nontrivial"));
                    }
                }
                let g = ctx.parse(translate)?;
                let mut all = Vec::new();
                subseq_products(ctx, &term_elems, 0, None, &mut all);
                let mut recorded = products.clone();
                recorded.sort();
                let mut recomputed: Vec<String> = all.iter().map(|p| ctx.format(p)).collect();
                recomputed.sort();
                if recorded != recomputed {
                    return Err(Error::model("obstruction products do not replay"));
                }
                for p in &all {
                    if !ctx.eval().contains(expr, &ctx.group().op(p, &g))? {
                        return Err(Error::model("obstruction product escapes the set"));
                    }
                }
                Ok(())
            }
            (Polarity::Holds | Polarity::UnknownAtWindow, _) => {
                let fresh = self.run(ctx, expr)?;
                if fresh.polarity != out.polarity || fresh.certificate != out.certificate {
                    return Err(Error::model("obstruction search does not replay"));
                }
                Ok(())
            }
            _ => Err(Error::model("malformed disparse-proxy certificate")),
        }
    }
}

fn subseq_products(
    ctx: &EvalCtx,
    terms: &[GroupElem],
    from: usize,
    acc: Option<GroupElem>,
    out: &mut Vec<GroupElem>,
) {
    for i in from..terms.len() {
        let next = match &acc {
            Some(p) => ctx.group().op(p, &terms[i]),
            None => terms[i].clone(),
        };
        out.push(next.clone());
        subseq_products(ctx, terms, i + 1, Some(next), out);
    }
}

//! Symbolic subset algebra with a three-valued, certificate-carrying
//! finiteness judgment.
//!
//! A [`SubsetExpr`] describes a subset of a group without enumerating it.
//! Expressions built from `Explicit` and `Periodic` leaves (under translate,
//! union and finite intersection) normalize into an exact residue algebra;
//! everything else is judged through a bounded [`Window`] and tagged as
//! windowed evidence rather than proof.

mod doc;
mod finiteness;
mod gens;
pub(crate) mod members;
pub mod periodic;

pub use doc::{ExprDoc, SeqSourceDoc};
pub use finiteness::{
    finiteness, normalize, periodic_minorant, replay_verdict, residue_cert_for, NormalForm,
    Verdict, VerdictTag,
};
pub use gens::SeqGen;
pub use members::Evaluator;
pub use periodic::ZPeriodic;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{Group, GroupElem};

/// Resource bounds for windowed evaluation.
///
/// `r` bounds translate searches, `h` bounds element length during
/// enumeration, `d` bounds chain and finite-product search depth, and
/// `margin` is the stability zone: a windowed set counts as finite only if
/// no member has length in `(h - margin, h]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub r: u32,
    pub h: u64,
    pub d: u32,
    pub margin: u64,
}

impl Window {
    pub fn new(r: u32, h: u64, d: u32) -> Self {
        Window {
            r,
            h,
            d,
            margin: h / 4,
        }
    }

    pub fn with_margin(mut self, margin: u64) -> Self {
        self.margin = margin;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.r < 1 {
            return Err(Error::config("window radius R must be >= 1"));
        }
        if self.h < 2 * self.margin {
            return Err(Error::config("window must satisfy H >= 2*margin"));
        }
        if self.d < 1 {
            return Err(Error::config("window depth D must be >= 1"));
        }
        Ok(())
    }
}

/// Source of a generated sequence: a named builtin or a finite list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeqSource {
    Gen(SeqGen),
    List(Vec<GroupElem>),
}

/// Symbolic description of a subset of a group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubsetExpr {
    /// A finite set, canonically sorted and deduplicated.
    Explicit(Vec<GroupElem>),
    /// Residue classes with finite corrections; integers only.
    Periodic(ZPeriodic),
    /// The image of a strictly length-monotone sequence.
    Seq(SeqSource),
    /// All products of finite subsequences (indices increasing), optionally
    /// right-translated.
    Fp {
        source: SeqSource,
        translate: Option<GroupElem>,
    },
    /// `{left[i] * right[j] : i <= j}`.
    PairProduct {
        left: Vec<GroupElem>,
        right: Vec<GroupElem>,
    },
    /// One cell of the support partition of a restricted direct sum:
    /// elements whose support has exactly `codes.len()` coordinates, with
    /// the stated coordinate codes in ascending index order.
    SupportCell { codes: Vec<u64> },
    Union(Vec<SubsetExpr>),
    Intersect(Vec<SubsetExpr>),
    LeftTranslate(GroupElem, Box<SubsetExpr>),
    RightTranslate(Box<SubsetExpr>, GroupElem),
}

impl SubsetExpr {
    pub fn explicit(group: &Group, elems: impl IntoIterator<Item = GroupElem>) -> Result<Self> {
        let mut v: Vec<GroupElem> = elems.into_iter().collect();
        for e in &v {
            group.validate(e)?;
        }
        crate::groups::sort_canonical(group.as_ref(), &mut v);
        v.dedup();
        Ok(SubsetExpr::Explicit(v))
    }

    pub fn periodic(
        group: &Group,
        modulus: u64,
        residues: impl IntoIterator<Item = u64>,
    ) -> Result<Self> {
        if !group.is_integers() {
            return Err(Error::usage("periodic sets are only defined over the integers"));
        }
        if modulus == 0 {
            return Err(Error::config("periodic modulus must be >= 1"));
        }
        Ok(SubsetExpr::Periodic(ZPeriodic::new(modulus, residues, [], [])))
    }

    pub fn seq_gen(group: &Group, gen: SeqGen) -> Result<Self> {
        if !group.is_integers() {
            return Err(Error::usage("builtin sequence generators are integer sequences"));
        }
        gen.validate()?;
        Ok(SubsetExpr::Seq(SeqSource::Gen(gen)))
    }

    pub fn seq_list(group: &Group, elems: Vec<GroupElem>) -> Result<Self> {
        for e in &elems {
            group.validate(e)?;
        }
        for pair in elems.windows(2) {
            if group.sort_key(&pair[0]) >= group.sort_key(&pair[1]) {
                return Err(Error::config(
                    "sequence lists must be strictly increasing in canonical order",
                ));
            }
        }
        Ok(SubsetExpr::Seq(SeqSource::List(elems)))
    }

    pub fn fp_gen(group: &Group, gen: SeqGen, translate: Option<GroupElem>) -> Result<Self> {
        if !group.is_integers() {
            return Err(Error::usage("builtin sequence generators are integer sequences"));
        }
        gen.validate()?;
        if let Some(t) = &translate {
            group.validate(t)?;
        }
        Ok(SubsetExpr::Fp {
            source: SeqSource::Gen(gen),
            translate,
        })
    }

    pub fn fp_list(
        group: &Group,
        terms: Vec<GroupElem>,
        translate: Option<GroupElem>,
    ) -> Result<Self> {
        for e in &terms {
            group.validate(e)?;
        }
        let distinct: BTreeSet<&GroupElem> = terms.iter().collect();
        if distinct.len() != terms.len() {
            return Err(Error::config("finite-product terms must be an injective sequence"));
        }
        if terms.len() > members::FP_TERM_CAP {
            return Err(Error::Resource {
                what: "finite-product term count",
                needed: terms.len() as u64,
                budget: members::FP_TERM_CAP as u64,
            });
        }
        if let Some(t) = &translate {
            group.validate(t)?;
        }
        Ok(SubsetExpr::Fp {
            source: SeqSource::List(terms),
            translate,
        })
    }

    pub fn pair_product(group: &Group, left: Vec<GroupElem>, right: Vec<GroupElem>) -> Result<Self> {
        for e in left.iter().chain(&right) {
            group.validate(e)?;
        }
        Ok(SubsetExpr::PairProduct { left, right })
    }

    /// The whole group as a periodic set; integers only.
    pub fn integers() -> Self {
        SubsetExpr::Periodic(ZPeriodic::full())
    }

    pub fn union(parts: Vec<SubsetExpr>) -> SubsetExpr {
        SubsetExpr::Union(parts)
    }

    pub fn intersect(parts: Vec<SubsetExpr>) -> SubsetExpr {
        SubsetExpr::Intersect(parts)
    }
}

/// Which side a translate acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// Translate an expression, normalizing periodic sets over the integers.
pub fn translate(group: &Group, expr: &SubsetExpr, g: &GroupElem, side: Side) -> Result<SubsetExpr> {
    group.validate(g)?;
    if let SubsetExpr::Periodic(p) = expr {
        // Z is abelian, both sides shift residues
        return Ok(SubsetExpr::Periodic(p.translate(g.raw()[0])));
    }
    if let SubsetExpr::Explicit(list) = expr {
        let shifted = list
            .iter()
            .map(|x| match side {
                Side::Left => group.op(g, x),
                Side::Right => group.op(x, g),
            })
            .collect::<Vec<_>>();
        return SubsetExpr::explicit(group, shifted);
    }
    Ok(match side {
        Side::Left => SubsetExpr::LeftTranslate(g.clone(), Box::new(expr.clone())),
        Side::Right => SubsetExpr::RightTranslate(Box::new(expr.clone()), g.clone()),
    })
}

/// Union, normalizing inside the exact algebra where possible.
pub fn union2(group: &Group, a: &SubsetExpr, b: &SubsetExpr) -> Result<SubsetExpr> {
    match (a, b) {
        (SubsetExpr::Explicit(x), SubsetExpr::Explicit(y)) => {
            SubsetExpr::explicit(group, x.iter().chain(y).cloned())
        }
        (SubsetExpr::Periodic(x), SubsetExpr::Periodic(y)) => Ok(x
            .union(y)
            .map(SubsetExpr::Periodic)
            .unwrap_or_else(|| SubsetExpr::Union(vec![a.clone(), b.clone()]))),
        _ => Ok(SubsetExpr::Union(vec![a.clone(), b.clone()])),
    }
}

/// Intersection of a family, normalizing periodic operands via the lcm
/// modulus.
pub fn intersect_all(group: &Group, parts: &[SubsetExpr]) -> Result<SubsetExpr> {
    if parts.is_empty() {
        return Err(Error::usage("intersection of an empty family"));
    }
    if parts.iter().all(|p| matches!(p, SubsetExpr::Periodic(_))) && group.is_integers() {
        let mut acc = match &parts[0] {
            SubsetExpr::Periodic(p) => p.clone(),
            _ => unreachable!(),
        };
        let mut ok = true;
        for part in &parts[1..] {
            let SubsetExpr::Periodic(p) = part else { unreachable!() };
            match acc.intersect(p) {
                Some(next) => acc = next,
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            return Ok(SubsetExpr::Periodic(acc));
        }
    }
    Ok(SubsetExpr::Intersect(parts.to_vec()))
}

#[cfg(test)]
mod tests;

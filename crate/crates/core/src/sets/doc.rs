//! Serializable expression trees with elements in canonical text form.
//!
//! Expressions travel as JSON documents; element strings are resolved
//! against a concrete group model when a document is bound to a run.

use serde::{Deserialize, Serialize};

use super::{SeqGen, SeqSource, SubsetExpr, ZPeriodic};
use crate::error::Result;
use crate::groups::{Group, GroupElem};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SeqSourceDoc {
    Gen(SeqGen),
    List(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExprDoc {
    Explicit(Vec<String>),
    Periodic {
        modulus: u64,
        residues: Vec<u64>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        plus: Vec<i64>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        minus: Vec<i64>,
    },
    Seq(SeqSourceDoc),
    Fp {
        source: SeqSourceDoc,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        translate: Option<String>,
    },
    PairProduct {
        left: Vec<String>,
        right: Vec<String>,
    },
    SupportCell {
        codes: Vec<u64>,
    },
    Union(Vec<ExprDoc>),
    Intersect(Vec<ExprDoc>),
    LeftTranslate {
        g: String,
        of: Box<ExprDoc>,
    },
    RightTranslate {
        of: Box<ExprDoc>,
        h: String,
    },
}

fn parse_elems(group: &Group, texts: &[String]) -> Result<Vec<GroupElem>> {
    texts.iter().map(|t| group.parse(t)).collect()
}

impl ExprDoc {
    /// Bind the document to a group model, validating every element.
    pub fn resolve(&self, group: &Group) -> Result<SubsetExpr> {
        Ok(match self {
            ExprDoc::Explicit(texts) => {
                SubsetExpr::explicit(group, parse_elems(group, texts)?)?
            }
            ExprDoc::Periodic {
                modulus,
                residues,
                plus,
                minus,
            } => {
                // reuse the constructor's Z-only check
                SubsetExpr::periodic(group, *modulus, residues.iter().copied())?;
                SubsetExpr::Periodic(ZPeriodic::new(
                    *modulus,
                    residues.iter().copied(),
                    plus.iter().copied(),
                    minus.iter().copied(),
                ))
            }
            ExprDoc::Seq(SeqSourceDoc::Gen(gen)) => SubsetExpr::seq_gen(group, gen.clone())?,
            ExprDoc::Seq(SeqSourceDoc::List(texts)) => {
                SubsetExpr::seq_list(group, parse_elems(group, texts)?)?
            }
            ExprDoc::Fp { source, translate } => {
                let t = translate.as_ref().map(|t| group.parse(t)).transpose()?;
                match source {
                    SeqSourceDoc::Gen(gen) => SubsetExpr::fp_gen(group, gen.clone(), t)?,
                    SeqSourceDoc::List(texts) => {
                        SubsetExpr::fp_list(group, parse_elems(group, texts)?, t)?
                    }
                }
            }
            ExprDoc::PairProduct { left, right } => SubsetExpr::pair_product(
                group,
                parse_elems(group, left)?,
                parse_elems(group, right)?,
            )?,
            ExprDoc::SupportCell { codes } => SubsetExpr::SupportCell {
                codes: codes.clone(),
            },
            ExprDoc::Union(parts) => SubsetExpr::Union(
                parts
                    .iter()
                    .map(|p| p.resolve(group))
                    .collect::<Result<_>>()?,
            ),
            ExprDoc::Intersect(parts) => SubsetExpr::Intersect(
                parts
                    .iter()
                    .map(|p| p.resolve(group))
                    .collect::<Result<_>>()?,
            ),
            ExprDoc::LeftTranslate { g, of } => {
                SubsetExpr::LeftTranslate(group.parse(g)?, Box::new(of.resolve(group)?))
            }
            ExprDoc::RightTranslate { of, h } => {
                SubsetExpr::RightTranslate(Box::new(of.resolve(group)?), group.parse(h)?)
            }
        })
    }

    /// Render a resolved expression back into document form.
    pub fn from_expr(group: &Group, expr: &SubsetExpr) -> ExprDoc {
        let fmt = |elems: &[GroupElem]| elems.iter().map(|e| group.format(e)).collect::<Vec<_>>();
        match expr {
            SubsetExpr::Explicit(list) => ExprDoc::Explicit(fmt(list)),
            SubsetExpr::Periodic(p) => ExprDoc::Periodic {
                modulus: p.modulus,
                residues: p.residues.iter().copied().collect(),
                plus: p.plus.iter().copied().collect(),
                minus: p.minus.iter().copied().collect(),
            },
            SubsetExpr::Seq(SeqSource::Gen(gen)) => ExprDoc::Seq(SeqSourceDoc::Gen(gen.clone())),
            SubsetExpr::Seq(SeqSource::List(list)) => {
                ExprDoc::Seq(SeqSourceDoc::List(fmt(list)))
            }
            SubsetExpr::Fp { source, translate } => ExprDoc::Fp {
                source: match source {
                    SeqSource::Gen(gen) => SeqSourceDoc::Gen(gen.clone()),
                    SeqSource::List(list) => SeqSourceDoc::List(fmt(list)),
                },
                translate: translate.as_ref().map(|t| group.format(t)),
            },
            SubsetExpr::PairProduct { left, right } => ExprDoc::PairProduct {
                left: fmt(left),
                right: fmt(right),
            },
            SubsetExpr::SupportCell { codes } => ExprDoc::SupportCell {
                codes: codes.clone(),
            },
            SubsetExpr::Union(parts) => ExprDoc::Union(
                parts
                    .iter()
                    .map(|p| ExprDoc::from_expr(group, p))
                    .collect(),
            ),
            SubsetExpr::Intersect(parts) => ExprDoc::Intersect(
                parts
                    .iter()
                    .map(|p| ExprDoc::from_expr(group, p))
                    .collect(),
            ),
            SubsetExpr::LeftTranslate(g, inner) => ExprDoc::LeftTranslate {
                g: group.format(g),
                of: Box::new(ExprDoc::from_expr(group, inner)),
            },
            SubsetExpr::RightTranslate(inner, g) => ExprDoc::RightTranslate {
                of: Box::new(ExprDoc::from_expr(group, inner)),
                h: group.format(g),
            },
        }
    }
}

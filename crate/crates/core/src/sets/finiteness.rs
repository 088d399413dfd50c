//! The three-valued finiteness judgment.

use serde::{Deserialize, Serialize};

use super::{Evaluator, SubsetExpr, Window, ZPeriodic};
use crate::cert::{Certificate, GrowthProfile, ResidueClaim};
use crate::error::{Error, Result};
use crate::groups::{Group, GroupElem};

/// Exact normal form of an expression, when it has one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormalForm {
    /// Residue algebra over the integers.
    Periodic(ZPeriodic),
    /// Finite set in an arbitrary model.
    Finite(Vec<GroupElem>),
}

/// Normalize into the exact Explicit/Periodic algebra.
///
/// Over the integers, translates, finite unions and finite intersections of
/// `Periodic` and `Explicit` leaves normalize; elsewhere only the explicit
/// algebra does. Generated sets never normalize: their judgments stay
/// windowed by design.
pub fn normalize(group: &Group, expr: &SubsetExpr) -> Option<NormalForm> {
    if group.is_integers() {
        z_normalize(expr).map(NormalForm::Periodic)
    } else {
        finite_normalize(group, expr).map(NormalForm::Finite)
    }
}

fn z_normalize(expr: &SubsetExpr) -> Option<ZPeriodic> {
    match expr {
        SubsetExpr::Explicit(list) => {
            Some(ZPeriodic::from_finite(list.iter().map(|e| e.raw()[0])))
        }
        SubsetExpr::Periodic(p) => Some(p.clone()),
        SubsetExpr::Union(parts) => {
            let mut acc = ZPeriodic::empty();
            for p in parts {
                acc = acc.union(&z_normalize(p)?)?;
            }
            Some(acc)
        }
        SubsetExpr::Intersect(parts) => {
            let mut acc: Option<ZPeriodic> = None;
            for p in parts {
                let norm = z_normalize(p)?;
                acc = Some(match acc {
                    None => norm,
                    Some(prev) => prev.intersect(&norm)?,
                });
            }
            acc
        }
        SubsetExpr::LeftTranslate(g, inner) => Some(z_normalize(inner)?.translate(g.raw()[0])),
        SubsetExpr::RightTranslate(inner, g) => Some(z_normalize(inner)?.translate(g.raw()[0])),
        _ => None,
    }
}

fn finite_normalize(group: &Group, expr: &SubsetExpr) -> Option<Vec<GroupElem>> {
    let mut out = match expr {
        SubsetExpr::Explicit(list) => list.clone(),
        SubsetExpr::Union(parts) => {
            let mut acc = Vec::new();
            for p in parts {
                acc.extend(finite_normalize(group, p)?);
            }
            acc
        }
        SubsetExpr::Intersect(parts) => {
            let mut iter = parts.iter();
            let mut acc = finite_normalize(group, iter.next()?)?;
            for p in iter {
                let other = finite_normalize(group, p)?;
                acc.retain(|x| other.contains(x));
            }
            acc
        }
        SubsetExpr::LeftTranslate(g, inner) => finite_normalize(group, inner)?
            .into_iter()
            .map(|x| group.op(g, &x))
            .collect(),
        SubsetExpr::RightTranslate(inner, g) => finite_normalize(group, inner)?
            .into_iter()
            .map(|x| group.op(&x, g))
            .collect(),
        _ => return None,
    };
    crate::groups::sort_canonical(group.as_ref(), &mut out);
    out.dedup();
    Some(out)
}

/// Outcome tag of the finiteness judgment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum VerdictTag {
    ExactFinite { cardinality: u64 },
    ExactInfinite { reason: String },
    WindowFinite { last_growth_length: u64 },
    WindowInfinite { top_zone_count: u64 },
    Unknown { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub tag: VerdictTag,
    pub certificate: Certificate,
}

impl Verdict {
    pub fn is_finite(&self) -> bool {
        matches!(
            self.tag,
            VerdictTag::ExactFinite { .. } | VerdictTag::WindowFinite { .. }
        )
    }

    pub fn is_infinite(&self) -> bool {
        matches!(
            self.tag,
            VerdictTag::ExactInfinite { .. } | VerdictTag::WindowInfinite { .. }
        )
    }

    pub fn is_exact(&self) -> bool {
        matches!(
            self.tag,
            VerdictTag::ExactFinite { .. } | VerdictTag::ExactInfinite { .. }
        )
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self.tag, VerdictTag::Unknown { .. })
    }
}

/// An infinite periodic subset of the expression, when one is visible in
/// its structure. Union branches, translates and full normalization are
/// searched; generated leaves contribute nothing.
pub fn periodic_minorant(group: &Group, expr: &SubsetExpr) -> Option<ZPeriodic> {
    if !group.is_integers() {
        return None;
    }
    minorant_rec(expr)
}

fn minorant_rec(expr: &SubsetExpr) -> Option<ZPeriodic> {
    match expr {
        SubsetExpr::Periodic(p) if p.is_infinite() => Some(p.clone()),
        SubsetExpr::Union(parts) => parts.iter().find_map(minorant_rec),
        SubsetExpr::LeftTranslate(g, inner) | SubsetExpr::RightTranslate(inner, g) => {
            minorant_rec(inner).map(|p| p.translate(g.raw()[0]))
        }
        SubsetExpr::Intersect(_) => {
            z_normalize(expr).filter(|p| p.is_infinite())
        }
        _ => None,
    }
}

/// Residue certificate for a periodic set, usable outside the verdict path.
pub fn residue_cert_for(p: &ZPeriodic) -> Certificate {
    residue_certificate(p)
}

pub(crate) fn residue_certificate(p: &ZPeriodic) -> Certificate {
    let claim = match p.infinite_witness() {
        Some((residue, modulus)) => ResidueClaim::Infinite { residue, modulus },
        None => ResidueClaim::Finite {
            cardinality: p.finite_cardinality().unwrap_or(0),
        },
    };
    Certificate::Residue {
        modulus: p.modulus,
        residues: p.residues.iter().copied().collect(),
        plus: p.plus.iter().copied().collect(),
        minus: p.minus.iter().copied().collect(),
        claim,
    }
}

/// Profile of a member list against a window; the stability tag is a pure
/// function of this profile.
pub(crate) fn growth_profile(
    eval: &Evaluator,
    members: &[GroupElem],
    window: &Window,
) -> GrowthProfile {
    let mut quartiles = [0u64; 4];
    let mut top_zone = 0;
    let mut max_len = 0;
    let h = window.h.max(1);
    for m in members {
        let len = eval.group().length(m);
        max_len = max_len.max(len);
        let q = ((4 * len.saturating_sub(1)) / h).min(3) as usize;
        quartiles[q] += 1;
        if len > window.h - window.margin && len <= window.h {
            top_zone += 1;
        }
    }
    GrowthProfile {
        horizon: window.h,
        margin: window.margin,
        total: members.len() as u64,
        max_len,
        top_zone,
        quartiles,
    }
}

/// Judge finiteness of `expr`: exact whenever the expression normalizes
/// into the Explicit/Periodic algebra, windowed stability evidence
/// otherwise. Unknown is a value, not an error.
pub fn finiteness(eval: &Evaluator, expr: &SubsetExpr, window: &Window) -> Verdict {
    match normalize(eval.group(), expr) {
        Some(NormalForm::Periodic(p)) => {
            let certificate = residue_certificate(&p);
            let tag = match p.infinite_witness() {
                Some((residue, modulus)) => VerdictTag::ExactInfinite {
                    reason: format!("contains the residue class {residue} mod {modulus}"),
                },
                None => VerdictTag::ExactFinite {
                    cardinality: p.finite_cardinality().unwrap_or(0),
                },
            };
            Verdict { tag, certificate }
        }
        Some(NormalForm::Finite(list)) => Verdict {
            tag: VerdictTag::ExactFinite {
                cardinality: list.len() as u64,
            },
            certificate: Certificate::FiniteList {
                members: list.iter().map(|e| eval.group().format(e)).collect(),
            },
        },
        None => match eval.members(expr, window.h) {
            Ok(members) => {
                let profile = growth_profile(eval, &members, window);
                let stable = profile.top_zone == 0;
                let tag = if stable {
                    VerdictTag::WindowFinite {
                        last_growth_length: profile.max_len,
                    }
                } else {
                    VerdictTag::WindowInfinite {
                        top_zone_count: profile.top_zone,
                    }
                };
                Verdict {
                    tag,
                    certificate: Certificate::Growth { profile, stable },
                }
            }
            Err(err) => Verdict {
                tag: VerdictTag::Unknown {
                    reason: err.to_string(),
                },
                certificate: Certificate::inconclusive(err.to_string()),
            },
        },
    }
}

/// Re-verify a finiteness certificate against its expression.
pub fn replay_verdict(
    eval: &Evaluator,
    expr: &SubsetExpr,
    window: &Window,
    claimed: &Verdict,
) -> Result<()> {
    let fresh = finiteness(eval, expr, window);
    if fresh.tag != claimed.tag {
        return Err(Error::model(format!(
            "verdict tag mismatch: recorded {:?}, replayed {:?}",
            claimed.tag, fresh.tag
        )));
    }
    if fresh.certificate != claimed.certificate {
        return Err(Error::model("verdict certificate does not replay"));
    }
    Ok(())
}

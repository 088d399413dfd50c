//! Overlap densities and the combinatorial derivation.
//!
//! The min-max estimates are one-sided: the reported value is the minimum
//! over the tested family of the maximum overlap ratio over the tested
//! translates, an upper bound for the true infimum. Over the periodic
//! algebra the inner supremum is exact by residue counting; elsewhere it is
//! windowed and labeled as such. Nothing here ever claims a zero infimum.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::cert::{Certificate, SurveyEntry};
use crate::classify::EvalCtx;
use crate::error::{Error, Result};
use crate::groups::{Group, GroupElem, GroupKind};
use crate::sets::{finiteness, normalize, NormalForm, SubsetExpr, Verdict, Window};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    SigmaR,
    SigmaL,
    FolnerDensity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    UpperBound,
    PointEstimate,
}

/// Exact rational with a decimal rendering for reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rational {
    pub num: i64,
    pub den: i64,
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        let r = Ratio::new(num, den);
        Rational {
            num: *r.numer(),
            den: *r.denom(),
        }
    }

    pub fn ratio(&self) -> Ratio<i64> {
        Ratio::new(self.num, self.den)
    }

    pub fn decimal(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityEstimate {
    pub quantity: Quantity,
    pub value: Rational,
    pub direction: Direction,
    pub family_used: Vec<String>,
    pub g_window: u64,
    pub optimizer_family: usize,
    pub optimizer_g: String,
    /// true when the inner supremum over g is exact (periodic algebra)
    pub exact_sup: bool,
    pub certificate: Certificate,
}

/// Families of finite test sets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilySpec {
    /// Intervals {0..k-1} for k = 1..=max_len; integers only.
    Intervals { max_len: u32 },
    /// Balls of radius 0..=max_radius.
    Balls { max_radius: u32 },
    /// Explicit member lists in canonical text form.
    Lists(Vec<Vec<String>>),
}

impl FamilySpec {
    fn realize(&self, group: &Group, budget: u64) -> Result<Vec<(String, Vec<GroupElem>)>> {
        match self {
            FamilySpec::Intervals { max_len } => {
                if !group.is_integers() {
                    return Err(Error::usage("interval families are defined over the integers"));
                }
                if *max_len == 0 {
                    return Err(Error::usage("empty density family"));
                }
                Ok((1..=*max_len)
                    .map(|k| {
                        let f: Vec<GroupElem> =
                            (0..i64::from(k)).map(|v| GroupElem::from_raw(vec![v])).collect();
                        (format!("interval({k})"), f)
                    })
                    .collect())
            }
            FamilySpec::Balls { max_radius } => (0..=*max_radius)
                .map(|r| Ok((format!("ball({r})"), group.ball(r, budget)?.elements)))
                .collect(),
            FamilySpec::Lists(lists) => {
                if lists.is_empty() || lists.iter().any(|l| l.is_empty()) {
                    return Err(Error::usage("empty density family"));
                }
                lists
                    .iter()
                    .enumerate()
                    .map(|(i, texts)| {
                        let elems = texts
                            .iter()
                            .map(|t| group.parse(t))
                            .collect::<Result<Vec<_>>>()?;
                        Ok((format!("list({i})"), elems))
                    })
                    .collect()
            }
        }
    }
}

/// Which side the translate acts on in the overlap count.
#[derive(Clone, Copy, PartialEq, Eq)]
enum SupSide {
    /// |F ∩ Ag|: membership of f·g^{-1}
    Right,
    /// |F ∩ gA|: membership of g^{-1}·f
    Left,
}

fn overlap_count(
    ctx: &EvalCtx,
    expr: &SubsetExpr,
    f_set: &[GroupElem],
    g: &GroupElem,
    side: SupSide,
) -> Result<u32> {
    let group = ctx.group();
    let g_inv = group.inv(g);
    let mut count = 0;
    for f in f_set {
        let probe = match side {
            SupSide::Right => group.op(f, &g_inv),
            SupSide::Left => group.op(&g_inv, f),
        };
        if ctx.eval().contains(expr, &probe)? {
            count += 1;
        }
    }
    Ok(count)
}

/// Exact supremum of the overlap count over all translates, for periodic
/// sets: away from the finitely many exceptional points the count depends
/// only on the residue class of g, so a far representative per class plus
/// the delta-adjacent candidates exhaust the supremum.
fn exact_sup_candidates(
    p: &crate::sets::ZPeriodic,
    f_set: &[GroupElem],
) -> Vec<i64> {
    let m = p.modulus as i64;
    let delta_zone = p
        .plus
        .iter()
        .chain(&p.minus)
        .map(|d| d.abs())
        .max()
        .unwrap_or(0);
    let max_f = f_set.iter().map(|f| f.raw()[0].abs()).max().unwrap_or(0);
    let lift = (delta_zone + max_f + 1) / m + 1;
    let mut out: Vec<i64> = (0..m).map(|r| r + m * lift).collect();
    for f in f_set {
        for d in p.plus.iter().chain(&p.minus) {
            out.push(f.raw()[0] - d);
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn sigma(
    ctx: &EvalCtx,
    expr: &SubsetExpr,
    family: &FamilySpec,
    g_radius: u64,
    side: SupSide,
) -> Result<DensityEstimate> {
    let group = ctx.group();
    let realized = family.realize(group, ctx.eval().budget())?;
    let periodic = match normalize(group, expr) {
        Some(NormalForm::Periodic(p)) => Some(p),
        _ => None,
    };
    let mut best: Option<(Ratio<i64>, usize, GroupElem)> = None;
    let mut exact_sup = periodic.is_some();
    for (idx, (_, f_set)) in realized.iter().enumerate() {
        if f_set.is_empty() {
            continue;
        }
        let candidates: Vec<GroupElem> = match &periodic {
            Some(p) => exact_sup_candidates(p, f_set)
                .into_iter()
                .map(|v| GroupElem::from_raw(vec![v]))
                .collect(),
            None => {
                exact_sup = false;
                group
                    .ball(g_radius.min(u32::MAX as u64) as u32, ctx.eval().budget())?
                    .elements
            }
        };
        let mut sup: Option<(u32, GroupElem)> = None;
        for g in candidates {
            let count = overlap_count(ctx, expr, f_set, &g, side)?;
            if sup.as_ref().map_or(true, |(c, _)| count > *c) {
                sup = Some((count, g));
            }
        }
        let (count, g) = sup.ok_or_else(|| Error::usage("empty translate candidates"))?;
        let ratio = Ratio::new(i64::from(count), f_set.len() as i64);
        if best.as_ref().map_or(true, |(b, _, _)| ratio < *b) {
            best = Some((ratio, idx, g));
        }
    }
    let (value, opt_idx, opt_g) = best.ok_or_else(|| Error::usage("empty density family"))?;
    let quantity = match side {
        SupSide::Right => Quantity::SigmaR,
        SupSide::Left => Quantity::SigmaL,
    };
    let family_labels: Vec<String> = realized.iter().map(|(l, _)| l.clone()).collect();
    let certificate = Certificate::DensityGrid {
        family_labels: family_labels.clone(),
        optimizer_family: opt_idx,
        optimizer_g: group.format(&opt_g),
        numerator: *value.numer(),
        denominator: *value.denom(),
        exact_sup,
        g_radius,
    };
    Ok(DensityEstimate {
        quantity,
        value: Rational::new(*value.numer(), *value.denom()),
        direction: Direction::UpperBound,
        family_used: family_labels,
        g_window: g_radius,
        optimizer_family: opt_idx,
        optimizer_g: group.format(&opt_g),
        exact_sup,
        certificate,
    })
}

/// Upper bound on the right overlap density: min over the family of the
/// max over translates of |F ∩ Ag| / |F|.
pub fn sigma_r(
    ctx: &EvalCtx,
    expr: &SubsetExpr,
    family: &FamilySpec,
    g_radius: u64,
) -> Result<DensityEstimate> {
    sigma(ctx, expr, family, g_radius, SupSide::Right)
}

/// Left-translate counterpart of [`sigma_r`].
pub fn sigma_l(
    ctx: &EvalCtx,
    expr: &SubsetExpr,
    family: &FamilySpec,
    g_radius: u64,
) -> Result<DensityEstimate> {
    sigma(ctx, expr, family, g_radius, SupSide::Left)
}

/// Empirical averages |A ∩ box| / |box| along centered boxes in Z^d.
/// Point estimates only; no convergence is claimed.
pub fn folner_density(
    ctx: &EvalCtx,
    expr: &SubsetExpr,
    sizes: &[u64],
) -> Result<Vec<DensityEstimate>> {
    let group = ctx.group();
    let GroupKind::FreeAbelian { rank } = group.kind() else {
        return Err(Error::usage("box averages are defined on free abelian models"));
    };
    let mut out = Vec::new();
    for &s in sizes {
        let s_i = s as i64;
        let box_size = (2 * s_i + 1).pow(rank as u32);
        let count: i64 = if rank == 1 {
            match normalize(group, expr) {
                Some(NormalForm::Periodic(p)) => p.count_in_interval(-s_i, s_i) as i64,
                _ => ctx.eval().members(expr, s)?.len() as i64,
            }
        } else {
            let mut total = 0i64;
            let mut coords = vec![0i64; rank];
            count_box(ctx, expr, &mut coords, 0, s_i, &mut total)?;
            total
        };
        let value = Rational::new(count, box_size);
        out.push(DensityEstimate {
            quantity: Quantity::FolnerDensity,
            value,
            direction: Direction::PointEstimate,
            family_used: vec![format!("box({s})")],
            g_window: 0,
            optimizer_family: 0,
            optimizer_g: String::new(),
            exact_sup: true,
            certificate: Certificate::DensityGrid {
                family_labels: vec![format!("box({s})")],
                optimizer_family: 0,
                optimizer_g: String::new(),
                numerator: value.num,
                denominator: value.den,
                exact_sup: true,
                g_radius: s,
            },
        });
    }
    Ok(out)
}

fn count_box(
    ctx: &EvalCtx,
    expr: &SubsetExpr,
    coords: &mut Vec<i64>,
    idx: usize,
    s: i64,
    total: &mut i64,
) -> Result<()> {
    if idx == coords.len() {
        if ctx
            .eval()
            .contains(expr, &GroupElem::from_raw(coords.clone()))?
        {
            *total += 1;
        }
        return Ok(());
    }
    for v in -s..=s {
        coords[idx] = v;
        count_box(ctx, expr, coords, idx + 1, s, total)?;
    }
    coords[idx] = 0;
    Ok(())
}

/// The windowed combinatorial derivation: translates g in the ball whose
/// shift-intersection gA ∩ A is infinite, each with its evidence.
#[derive(Clone, Debug)]
pub struct DerivationSet {
    pub members: Vec<(GroupElem, Verdict)>,
    pub excluded_unknown: u64,
    pub window: Window,
}

impl DerivationSet {
    pub fn certificate(&self, group: &Group) -> Certificate {
        Certificate::DerivationMembers {
            entries: self
                .members
                .iter()
                .map(|(g, v)| SurveyEntry {
                    g: group.format(g),
                    cert: v.certificate.clone(),
                })
                .collect(),
            excluded_unknown: self.excluded_unknown,
        }
    }

    pub fn contains(&self, g: &GroupElem) -> bool {
        self.members.iter().any(|(m, _)| m == g)
    }
}

pub fn derivation(ctx: &EvalCtx, expr: &SubsetExpr) -> Result<DerivationSet> {
    let w = *ctx.window();
    let mut members = Vec::new();
    let mut excluded_unknown = 0;
    for g in ctx.ball(w.r)? {
        let meet = ctx.shift_meet(&g, expr)?;
        let v = finiteness(ctx.eval(), &meet, &w);
        if v.is_infinite() {
            members.push((g, v));
        } else if v.is_unknown() {
            excluded_unknown += 1;
        }
    }
    Ok(DerivationSet {
        members,
        excluded_unknown,
        window: w,
    })
}

/// Re-verify a derivation certificate: recompute the ball scan and compare.
pub fn replay_derivation(
    ctx: &EvalCtx,
    expr: &SubsetExpr,
    claimed: &Certificate,
) -> Result<()> {
    let Certificate::DerivationMembers {
        entries,
        excluded_unknown,
    } = claimed
    else {
        return Err(Error::model("malformed derivation certificate"));
    };
    let fresh = derivation(ctx, expr)?;
    if fresh.excluded_unknown != *excluded_unknown || fresh.members.len() != entries.len() {
        return Err(Error::model("derivation census does not replay"));
    }
    for ((g, v), entry) in fresh.members.iter().zip(entries) {
        if ctx.group().format(g) != entry.g || v.certificate != entry.cert {
            return Err(Error::model("derivation member does not replay"));
        }
    }
    Ok(())
}

/// Re-verify a density estimate by recomputation.
pub fn replay_density(
    ctx: &EvalCtx,
    expr: &SubsetExpr,
    family: &FamilySpec,
    estimate: &DensityEstimate,
) -> Result<()> {
    let fresh = match estimate.quantity {
        Quantity::SigmaR => sigma_r(ctx, expr, family, estimate.g_window)?,
        Quantity::SigmaL => sigma_l(ctx, expr, family, estimate.g_window)?,
        Quantity::FolnerDensity => {
            return Err(Error::usage("box averages replay through folner_density"))
        }
    };
    if fresh != *estimate {
        return Err(Error::model("density estimate does not replay"));
    }
    Ok(())
}

#[cfg(test)]
mod tests;

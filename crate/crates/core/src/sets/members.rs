//! Windowed enumeration and exact membership for subset expressions.

use std::collections::HashSet;

use super::{SeqSource, SubsetExpr};
use crate::error::{Error, Result};
use crate::groups::{ComponentKind, Group, GroupElem, GroupKind};

/// Finite-product expressions keep at most this many terms; beyond it the
/// 2^k product enumeration is refused as a resource error.
pub const FP_TERM_CAP: usize = 20;

/// Evaluates expressions against one group model under an element budget.
pub struct Evaluator {
    group: Group,
    budget: u64,
}

impl Evaluator {
    pub fn new(group: Group, budget: u64) -> Self {
        Evaluator { group, budget }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    fn z_elem(&self, v: i64) -> GroupElem {
        GroupElem::from_raw(vec![v])
    }

    fn check_budget(&self, needed: u64, what: &'static str) -> Result<()> {
        if needed > self.budget {
            return Err(Error::Resource {
                what,
                needed,
                budget: self.budget,
            });
        }
        Ok(())
    }

    /// All members of length at most `h`, canonically ordered, deduplicated.
    pub fn members(&self, expr: &SubsetExpr, h: u64) -> Result<Vec<GroupElem>> {
        let mut out = self.members_unsorted(expr, h)?;
        crate::groups::sort_canonical(self.group.as_ref(), &mut out);
        out.dedup();
        Ok(out)
    }

    fn members_unsorted(&self, expr: &SubsetExpr, h: u64) -> Result<Vec<GroupElem>> {
        match expr {
            SubsetExpr::Explicit(list) => Ok(list
                .iter()
                .filter(|e| self.group.length(e) <= h)
                .cloned()
                .collect()),
            SubsetExpr::Periodic(p) => {
                self.check_budget(p.count_in_interval(-(h as i64), h as i64), "periodic members")?;
                Ok(p.members_in_range(h).into_iter().map(|v| self.z_elem(v)).collect())
            }
            SubsetExpr::Seq(SeqSource::Gen(gen)) => {
                Ok(gen.members_up_to(h).into_iter().map(|v| self.z_elem(v)).collect())
            }
            SubsetExpr::Seq(SeqSource::List(list)) => Ok(list
                .iter()
                .filter(|e| self.group.length(e) <= h)
                .cloned()
                .collect()),
            SubsetExpr::Fp { source, translate } => self.fp_members(source, translate.as_ref(), h),
            SubsetExpr::PairProduct { left, right } => {
                self.check_budget(
                    (left.len() as u64) * (right.len() as u64),
                    "pair product members",
                )?;
                let mut out = Vec::new();
                for (i, a) in left.iter().enumerate() {
                    for b in right.iter().skip(i) {
                        let x = self.group.op(a, b);
                        if self.group.length(&x) <= h {
                            out.push(x);
                        }
                    }
                }
                Ok(out)
            }
            SubsetExpr::SupportCell { codes } => self.support_cell_members(codes, h),
            SubsetExpr::Union(parts) => {
                let mut out = Vec::new();
                for part in parts {
                    out.extend(self.members_unsorted(part, h)?);
                    self.check_budget(out.len() as u64, "union members")?;
                }
                Ok(out)
            }
            SubsetExpr::Intersect(parts) => {
                if parts.is_empty() {
                    return Err(Error::usage("intersection of an empty family"));
                }
                let cheapest = parts
                    .iter()
                    .enumerate()
                    .min_by_key(|(_, p)| enum_cost(p))
                    .map(|(i, _)| i)
                    .unwrap();
                let base = self.members_unsorted(&parts[cheapest], h)?;
                let mut out = Vec::new();
                'outer: for x in base {
                    for (i, part) in parts.iter().enumerate() {
                        if i != cheapest && !self.contains(part, &x)? {
                            continue 'outer;
                        }
                    }
                    out.push(x);
                }
                Ok(out)
            }
            SubsetExpr::LeftTranslate(g, inner) => {
                let inner_members = self.members_unsorted(inner, h + self.group.length(g))?;
                Ok(inner_members
                    .into_iter()
                    .map(|x| self.group.op(g, &x))
                    .filter(|x| self.group.length(x) <= h)
                    .collect())
            }
            SubsetExpr::RightTranslate(inner, g) => {
                let inner_members = self.members_unsorted(inner, h + self.group.length(g))?;
                Ok(inner_members
                    .into_iter()
                    .map(|x| self.group.op(&x, g))
                    .filter(|x| self.group.length(x) <= h)
                    .collect())
            }
        }
    }

    fn fp_terms(&self, source: &SeqSource, h: u64) -> Result<Vec<GroupElem>> {
        match source {
            SeqSource::Gen(gen) => {
                Ok(gen.members_up_to(h).into_iter().map(|v| self.z_elem(v)).collect())
            }
            SeqSource::List(list) => Ok(list.clone()),
        }
    }

    fn fp_members(
        &self,
        source: &SeqSource,
        translate: Option<&GroupElem>,
        h: u64,
    ) -> Result<Vec<GroupElem>> {
        let t_len = translate.map_or(0, |t| self.group.length(t));
        let h_eff = h + t_len;
        let terms = self.fp_terms(source, h_eff)?;
        let positive = self.group.is_integers() && terms.iter().all(|t| t.raw()[0] > 0);
        if !positive {
            self.check_budget(
                1u64.checked_shl(terms.len() as u32).unwrap_or(u64::MAX),
                "finite-product enumeration",
            )?;
            if terms.len() > FP_TERM_CAP {
                return Err(Error::Resource {
                    what: "finite-product term count",
                    needed: terms.len() as u64,
                    budget: FP_TERM_CAP as u64,
                });
            }
        }
        let mut products = Vec::new();
        let mut stack = Vec::new();
        self.fp_rec(&terms, 0, None, positive, h_eff, &mut stack, &mut products)?;
        drop(stack);
        let out = products
            .into_iter()
            .map(|x| match translate {
                Some(t) => self.group.op(&x, t),
                None => x,
            })
            .filter(|x| self.group.length(x) <= h)
            .collect();
        Ok(out)
    }

    fn fp_rec(
        &self,
        terms: &[GroupElem],
        from: usize,
        acc: Option<GroupElem>,
        positive: bool,
        h_eff: u64,
        stack: &mut Vec<usize>,
        out: &mut Vec<GroupElem>,
    ) -> Result<()> {
        if let Some(x) = &acc {
            out.push(x.clone());
            self.check_budget(out.len() as u64, "finite-product enumeration")?;
        }
        for i in from..terms.len() {
            let next = match &acc {
                Some(x) => self.group.op(x, &terms[i]),
                None => terms[i].clone(),
            };
            // positive integer terms only grow, so overshooting prunes the branch
            if positive && self.group.length(&next) > h_eff {
                break;
            }
            stack.push(i);
            self.fp_rec(terms, i + 1, Some(next), positive, h_eff, stack, out)?;
            stack.pop();
        }
        Ok(())
    }

    fn support_cell_members(&self, codes: &[u64], h: u64) -> Result<Vec<GroupElem>> {
        let GroupKind::DirectSum { components } = self.group.kind() else {
            return Err(Error::usage("support cells are only defined on direct sums"));
        };
        let n = codes.len();
        if n == 0 {
            return Ok(Vec::new());
        }
        if n > components.len() {
            return Ok(Vec::new());
        }
        let per_code: Vec<Vec<Option<i64>>> = codes
            .iter()
            .map(|&c| {
                components
                    .iter()
                    .map(|&k| decode_component(k, c))
                    .collect()
            })
            .collect();
        // choose ascending support positions, then fill decoded values
        let mut out = Vec::new();
        let mut positions = Vec::with_capacity(n);
        self.cell_rec(&components, codes, &per_code, 0, &mut positions, h, &mut out)?;
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn cell_rec(
        &self,
        components: &[ComponentKind],
        codes: &[u64],
        per_code: &[Vec<Option<i64>>],
        start: usize,
        positions: &mut Vec<usize>,
        h: u64,
        out: &mut Vec<GroupElem>,
    ) -> Result<()> {
        let slot = positions.len();
        if slot == codes.len() {
            let mut raw = vec![0i64; components.len()];
            for (s, &pos) in positions.iter().enumerate() {
                match per_code[s][pos] {
                    Some(v) => raw[pos] = v,
                    None => return Ok(()),
                }
            }
            let elem = GroupElem::from_raw(raw);
            if self.group.length(&elem) <= h {
                out.push(elem);
                self.check_budget(out.len() as u64, "support cell members")?;
            }
            return Ok(());
        }
        for pos in start..components.len() {
            positions.push(pos);
            self.cell_rec(components, codes, per_code, pos + 1, positions, h, out)?;
            positions.pop();
        }
        Ok(())
    }

    /// Exact membership; no horizon is involved for any variant.
    pub fn contains(&self, expr: &SubsetExpr, x: &GroupElem) -> Result<bool> {
        match expr {
            SubsetExpr::Explicit(list) => Ok(list.contains(x)),
            SubsetExpr::Periodic(p) => Ok(p.contains(x.raw()[0])),
            SubsetExpr::Seq(SeqSource::Gen(gen)) => Ok(gen.contains(x.raw()[0])),
            SubsetExpr::Seq(SeqSource::List(list)) => Ok(list.contains(x)),
            SubsetExpr::Fp { source, translate } => {
                let target = match translate {
                    Some(t) => self.group.op(x, &self.group.inv(t)),
                    None => x.clone(),
                };
                let terms = self.fp_terms(source, self.group.length(&target))?;
                if matches!(source, SeqSource::List(_)) {
                    // lists are small; search all index-increasing products
                    self.fp_decide(&terms, 0, None, &target, false)
                } else {
                    // builtin generators are positive integer sequences
                    self.fp_decide(&terms, 0, None, &target, true)
                }
            }
            SubsetExpr::PairProduct { left, right } => {
                for (i, a) in left.iter().enumerate() {
                    for b in right.iter().skip(i) {
                        if self.group.op(a, b) == *x {
                            return Ok(true);
                        }
                    }
                }
                Ok(false)
            }
            SubsetExpr::SupportCell { codes } => {
                let GroupKind::DirectSum { components } = self.group.kind() else {
                    return Err(Error::usage("support cells are only defined on direct sums"));
                };
                let support = self.group.support(x)?;
                if support.len() != codes.len() || codes.is_empty() {
                    return Ok(false);
                }
                Ok(support
                    .iter()
                    .zip(codes)
                    .all(|(&pos, &c)| encode_component(components[pos], x.raw()[pos]) == Some(c)))
            }
            SubsetExpr::Union(parts) => {
                for p in parts {
                    if self.contains(p, x)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            SubsetExpr::Intersect(parts) => {
                for p in parts {
                    if !self.contains(p, x)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            SubsetExpr::LeftTranslate(g, inner) => {
                self.contains(inner, &self.group.op(&self.group.inv(g), x))
            }
            SubsetExpr::RightTranslate(inner, g) => {
                self.contains(inner, &self.group.op(x, &self.group.inv(g)))
            }
        }
    }

    fn fp_decide(
        &self,
        terms: &[GroupElem],
        from: usize,
        acc: Option<GroupElem>,
        target: &GroupElem,
        positive: bool,
    ) -> Result<bool> {
        if let Some(x) = &acc {
            if x == target {
                return Ok(true);
            }
            if positive && self.group.length(x) >= self.group.length(target) {
                // positive sums only grow past the target
                return Ok(false);
            }
        }
        for i in from..terms.len() {
            let next = match &acc {
                Some(x) => self.group.op(x, &terms[i]),
                None => terms[i].clone(),
            };
            if positive && self.group.length(&next) > self.group.length(target) {
                break;
            }
            if self.fp_decide(terms, i + 1, Some(next), target, positive)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Membership set of the window, for repeated lookups.
    pub fn member_set(&self, expr: &SubsetExpr, h: u64) -> Result<HashSet<GroupElem>> {
        Ok(self.members(expr, h)?.into_iter().collect())
    }
}

fn decode_component(kind: ComponentKind, code: u64) -> Option<i64> {
    if code == 0 {
        return None;
    }
    match kind {
        // zigzag: z > 0 -> 2z-1, z < 0 -> -2z
        ComponentKind::Z => {
            if code % 2 == 1 {
                Some((code as i64 + 1) / 2)
            } else {
                Some(-(code as i64) / 2)
            }
        }
        ComponentKind::ZMod { modulus } => {
            if code < u64::from(modulus) {
                Some(code as i64)
            } else {
                None
            }
        }
    }
}

fn encode_component(kind: ComponentKind, value: i64) -> Option<u64> {
    if value == 0 {
        return None;
    }
    match kind {
        ComponentKind::Z => {
            if value > 0 {
                Some((2 * value - 1) as u64)
            } else {
                Some((-2 * value) as u64)
            }
        }
        ComponentKind::ZMod { .. } => Some(value as u64),
    }
}

/// Rough cost class used to pick which operand of an intersection to
/// enumerate; periodic sets are dense, generated sets are sparse.
fn enum_cost(expr: &SubsetExpr) -> u8 {
    match expr {
        SubsetExpr::Explicit(_) => 0,
        SubsetExpr::Seq(_) | SubsetExpr::Fp { .. } | SubsetExpr::PairProduct { .. } => 1,
        SubsetExpr::SupportCell { .. } => 1,
        SubsetExpr::Periodic(_) => 3,
        SubsetExpr::Union(parts) => parts.iter().map(enum_cost).max().unwrap_or(0),
        SubsetExpr::Intersect(parts) => parts.iter().map(enum_cost).min().unwrap_or(3),
        SubsetExpr::LeftTranslate(_, inner) | SubsetExpr::RightTranslate(inner, _) => {
            enum_cost(inner)
        }
    }
}

pub(crate) fn zigzag_encode(kind: ComponentKind, value: i64) -> Option<u64> {
    encode_component(kind, value)
}

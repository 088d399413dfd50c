//! Greedy builders for the explicit witness sets separating the size
//! classes, each emitting the set plus a transcript of every side condition
//! checked on the generated prefix.
//!
//! Builders run for `count` steps and certify the prefix; every property
//! used downstream (witness chains, finite-product obstructions, isolation)
//! is prefix-checkable. Choices are always "first admissible element in
//! canonical order", so rebuilding with the same parameters reproduces the
//! witness bit for bit.

mod congruence_tower;
mod fp_small;
mod pair_product;
mod support_partition;

pub use congruence_tower::{build_congruence_tower, verify_tower, CongruenceTower, TowerTerm};
pub use fp_small::{build_fp_small, verify_fp_conditions, FpWitness};
pub use pair_product::{
    build_pair_product, check_tail_isolation, designated_chain, verify_pair_conditions,
    PairProductWitness,
};
pub use support_partition::{
    build_support_partition, cell_code, check_support_isolation, display_code, verify_partition,
    SupportPartition,
};

use crate::error::{Error, Result};
use crate::groups::{Group, GroupElem};

/// Elements in canonical order, one length shell at a time.
pub(crate) struct CandidateStream<'g> {
    group: &'g Group,
    budget: u64,
    shell: Vec<GroupElem>,
    pos: usize,
    radius: u32,
    tried: u64,
}

impl<'g> CandidateStream<'g> {
    pub fn new(group: &'g Group, budget: u64) -> Self {
        CandidateStream {
            group,
            budget,
            shell: vec![group.identity()],
            pos: 0,
            radius: 0,
            tried: 0,
        }
    }

    pub fn tried(&self) -> u64 {
        self.tried
    }

    /// Next candidate, or a construction error once the budget is spent.
    pub fn next(&mut self, constraint: &str) -> Result<GroupElem> {
        if self.tried >= self.budget {
            return Err(Error::Construction {
                constraint: constraint.to_string(),
                tried: self.tried,
            });
        }
        while self.pos >= self.shell.len() {
            self.radius += 1;
            let ball = self.group.ball(self.radius, u64::MAX)?;
            self.shell = ball
                .elements
                .into_iter()
                .filter(|e| self.group.length(e) == u64::from(self.radius))
                .collect();
            self.pos = 0;
        }
        self.tried += 1;
        let out = self.shell[self.pos].clone();
        self.pos += 1;
        Ok(out)
    }
}

pub(crate) fn disjoint(
    a: &std::collections::HashSet<GroupElem>,
    b: &std::collections::HashSet<GroupElem>,
) -> bool {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    small.iter().all(|x| !large.contains(x))
}

#[cfg(test)]
mod tests;

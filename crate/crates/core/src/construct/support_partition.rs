//! Partition of a restricted direct sum into support-coded cells.
//!
//! Every non-identity element is coded by its support size followed by the
//! per-coordinate codes (zigzag for Z components, the value itself for
//! finite cyclic components), in ascending coordinate order. Cells are the
//! fibers of this code; membership is decidable from the element alone.
//! The identity carries no code and is reported separately.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cert::Certificate;
use crate::error::{Error, Result};
use crate::groups::{Group, GroupElem, GroupKind};
use crate::sets::SubsetExpr;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SupportPartition {
    pub horizon: u32,
    pub max_support: usize,
    /// code vector -> number of elements of the cell inside ball(horizon)
    pub cells: Vec<(Vec<u64>, u64)>,
    pub ball_size: u64,
}

/// The code of one element: per-coordinate codes in ascending index order.
pub fn cell_code(group: &Group, x: &GroupElem) -> Result<Option<Vec<u64>>> {
    let GroupKind::DirectSum { components } = group.kind() else {
        return Err(Error::usage("support partitions need a direct sum model"));
    };
    let support = group.support(x)?;
    if support.is_empty() {
        return Ok(None); // the identity is assigned to no cell
    }
    let codes = support
        .iter()
        .map(|&pos| {
            crate::sets::members::zigzag_encode(components[pos], x.raw()[pos])
                .ok_or_else(|| Error::model("non-canonical coordinate"))
        })
        .collect::<Result<Vec<u64>>>()?;
    Ok(Some(codes))
}

/// Full code including the leading support size, as displayed in reports.
pub fn display_code(codes: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(codes.len() + 1);
    out.push(codes.len() as u64);
    out.extend_from_slice(codes);
    out
}

pub fn build_support_partition(
    group: &Group,
    horizon: u32,
    max_support: usize,
    budget: u64,
) -> Result<SupportPartition> {
    let ball = group.ball(horizon, budget)?;
    let mut cells: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
    let mut covered = 0u64;
    for x in ball.iter() {
        match cell_code(group, x)? {
            None => continue,
            Some(codes) => {
                if codes.len() > max_support {
                    return Err(Error::usage(format!(
                        "element {} has support {} beyond the cap {max_support}",
                        group.format(x),
                        codes.len()
                    )));
                }
                *cells.entry(codes).or_insert(0) += 1;
                covered += 1;
            }
        }
    }
    debug_assert_eq!(covered + 1, ball.len() as u64);
    Ok(SupportPartition {
        horizon,
        max_support,
        cells: cells.into_iter().collect(),
        ball_size: ball.len() as u64,
    })
}

impl SupportPartition {
    pub fn cell_expr(&self, codes: &[u64]) -> SubsetExpr {
        SubsetExpr::SupportCell {
            codes: codes.to_vec(),
        }
    }

    pub fn covered(&self) -> u64 {
        self.cells.iter().map(|(_, n)| n).sum()
    }

    pub fn certificate(&self) -> Certificate {
        Certificate::PartitionCensus {
            horizon: self.horizon,
            cells: self.cells.len() as u64,
            covered: self.covered(),
            ball_size: self.ball_size,
        }
    }
}

/// Re-verify a partition census from scratch.
pub fn verify_partition(group: &Group, partition: &SupportPartition, budget: u64) -> Result<()> {
    let fresh = build_support_partition(group, partition.horizon, partition.max_support, budget)?;
    if fresh.cells != partition.cells || fresh.ball_size != partition.ball_size {
        return Err(Error::model("partition census does not replay"));
    }
    // the cells must cover the ball minus the identity, each exactly once
    if fresh.covered() + 1 != fresh.ball_size {
        return Err(Error::model("partition does not cover the punctured ball"));
    }
    Ok(())
}

/// Isolation scan for one cell: disjointly-supported translates move cell
/// members out of the cell, because supports add.
pub fn check_support_isolation(
    group: &Group,
    codes: &[u64],
    radius: u32,
    horizon: u32,
    budget: u64,
) -> Result<Certificate> {
    let eval = crate::sets::Evaluator::new(group.clone(), budget);
    let cell = SubsetExpr::SupportCell {
        codes: codes.to_vec(),
    };
    let members = eval.members(&cell, u64::from(horizon))?;
    let e = group.identity();
    let mut pairs_checked = 0u64;
    let mut violations = Vec::new();
    for g in group.ball(radius, budget)?.iter() {
        if *g == e {
            continue;
        }
        let g_support = group.support(g)?;
        for x in &members {
            let x_support = group.support(x)?;
            let disjoint_support = g_support.iter().all(|i| !x_support.contains(i));
            if !disjoint_support {
                continue;
            }
            pairs_checked += 1;
            let moved = group.op(g, x);
            if eval.contains(&cell, &moved)? {
                violations.push(format!(
                    "g={} x={} stays in the cell",
                    group.format(g),
                    group.format(x)
                ));
            }
        }
    }
    Ok(Certificate::IsolationTranscript {
        cell: codes.to_vec(),
        radius,
        horizon,
        pairs_checked,
        violations,
    })
}

//! The pair-product witness: a set {a_i b_j : i <= j} that is not sparse
//! but carries no finite-product obstruction.
//!
//! Both sequences start at the identity. Each new b is chosen so that its
//! ball-block avoids all previous b-blocks and its product blocks avoid all
//! committed product blocks; each new a keeps every product block F_i a_i b_j
//! pairwise disjoint. The disjointness of same-b blocks follows from the
//! disjointness of the F_i a_i, which right translation preserves.
//!
//! The block conditions alone do not stop the generated prefix from
//! containing small finite-product patterns by numeric coincidence, which
//! would spoil the separation the witness exists to show. Candidates are
//! therefore also required to keep the prefix free of finite-product
//! obstructions up to [`GUARD_DEPTH`] with translates in
//! ball([`GUARD_RADIUS`]); the final transcript records this check.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{disjoint, CandidateStream};
use crate::cert::{Certificate, CheckedInstance};
use crate::classify::{Classifier, DisparseProxy, EvalCtx, Polarity};
use crate::error::{Error, Result};
use crate::groups::{Group, GroupElem};
use crate::sets::{SubsetExpr, Window};

/// Finite-product pattern depth the prefix must stay free of.
pub const GUARD_DEPTH: u32 = 3;
/// Translate radius of the pattern guard.
pub const GUARD_RADIUS: u32 = 3;

#[derive(Clone, Debug)]
pub struct PairProductWitness {
    pub a_seq: Vec<GroupElem>,
    pub b_seq: Vec<GroupElem>,
    pub transcript: Vec<CheckedInstance>,
    pub candidates_tried: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairProductDoc {
    pub a_seq: Vec<String>,
    pub b_seq: Vec<String>,
    pub transcript: Vec<CheckedInstance>,
}

impl PairProductWitness {
    pub fn set(&self, group: &Group) -> Result<SubsetExpr> {
        SubsetExpr::pair_product(group, self.a_seq.clone(), self.b_seq.clone())
    }

    pub fn to_doc(&self, group: &Group) -> PairProductDoc {
        PairProductDoc {
            a_seq: self.a_seq.iter().map(|x| group.format(x)).collect(),
            b_seq: self.b_seq.iter().map(|x| group.format(x)).collect(),
            transcript: self.transcript.clone(),
        }
    }

    pub fn from_doc(doc: &PairProductDoc, group: &Group) -> Result<Self> {
        Ok(PairProductWitness {
            a_seq: doc
                .a_seq
                .iter()
                .map(|t| group.parse(t))
                .collect::<Result<_>>()?,
            b_seq: doc
                .b_seq
                .iter()
                .map(|t| group.parse(t))
                .collect::<Result<_>>()?,
            transcript: doc.transcript.clone(),
            candidates_tried: 0,
        })
    }

    pub fn certificate(&self) -> Certificate {
        Certificate::DisjointnessTranscript {
            instances: self.transcript.clone(),
        }
    }

    /// All elements a_i b_j, i <= j, deduplicated.
    pub fn elements(&self, group: &Group) -> Vec<GroupElem> {
        let mut out = Vec::new();
        for (i, a) in self.a_seq.iter().enumerate() {
            for b in self.b_seq.iter().skip(i) {
                out.push(group.op(a, b));
            }
        }
        crate::groups::sort_canonical(group.as_ref(), &mut out);
        out.dedup();
        out
    }
}

fn block(group: &Group, radius: u32, a: &GroupElem, b: Option<&GroupElem>) -> Result<HashSet<GroupElem>> {
    let ball = group.ball(radius, u64::MAX)?;
    Ok(ball
        .iter()
        .map(|f| {
            let fa = group.op(f, a);
            match b {
                Some(b) => group.op(&fa, b),
                None => fa,
            }
        })
        .collect())
}

/// All products a_i b_j with i <= j over the current prefixes.
fn prefix_elements(group: &Group, a_seq: &[GroupElem], b_seq: &[GroupElem]) -> Vec<GroupElem> {
    let mut out = Vec::new();
    for (i, a) in a_seq.iter().enumerate() {
        for b in b_seq.iter().skip(i) {
            out.push(group.op(a, b));
        }
    }
    out
}

/// No finite-product obstruction up to the guard depth in the given finite
/// prefix.
fn obstruction_free(group: &Group, elements: Vec<GroupElem>) -> Result<bool> {
    if elements.is_empty() {
        return Ok(true);
    }
    let h = elements.iter().map(|x| group.length(x)).max().unwrap_or(0)
        + u64::from(GUARD_RADIUS)
        + 1;
    let expr = SubsetExpr::explicit(group, elements)?;
    let window = Window {
        r: GUARD_RADIUS,
        h,
        d: GUARD_DEPTH,
        margin: 0,
    };
    let ctx = EvalCtx::new(group.clone(), window, u64::MAX)?;
    let out = DisparseProxy.run(&ctx, &expr)?;
    Ok(out.polarity != Polarity::Fails)
}

/// Greedy construction of the two sequences; `count` terms each.
pub fn build_pair_product(group: &Group, count: usize, budget: u64) -> Result<PairProductWitness> {
    if count < 1 {
        return Err(Error::usage("pair product needs count >= 1"));
    }
    let e = group.identity();
    let mut a_seq = vec![e.clone()];
    let mut b_seq = vec![e.clone()];
    let mut stream_tried = 0u64;

    while b_seq.len() < count {
        // next b: its b-block avoids all previous b-blocks, and the product
        // blocks it opens avoid all committed product blocks
        let b_next = {
            let mut stream = CandidateStream::new(group, budget);
            loop {
                let cand = stream.next("b-block disjointness")?;
                if ok_as_b(group, &a_seq, &b_seq, &cand)? {
                    stream_tried += stream.tried();
                    break cand;
                }
            }
        };
        b_seq.push(b_next);

        // next a: its product block avoids all committed blocks, including
        // the same-b blocks just opened
        let a_next = {
            let mut stream = CandidateStream::new(group, budget);
            loop {
                let cand = stream.next("product-block disjointness")?;
                if ok_as_a(group, &a_seq, &b_seq, &cand)? {
                    stream_tried += stream.tried();
                    break cand;
                }
            }
        };
        a_seq.push(a_next);
    }

    let transcript = condition_transcript(group, &a_seq, &b_seq)?;
    for inst in &transcript {
        if inst.result == "violated" {
            return Err(Error::Construction {
                constraint: inst.condition.clone(),
                tried: stream_tried,
            });
        }
    }
    Ok(PairProductWitness {
        a_seq,
        b_seq,
        transcript,
        candidates_tried: stream_tried,
    })
}

fn ok_as_b(
    group: &Group,
    a_seq: &[GroupElem],
    b_seq: &[GroupElem],
    cand: &GroupElem,
) -> Result<bool> {
    let next_idx = b_seq.len() as u32;
    let cand_block = block(group, next_idx, cand, None)?;
    for (i, b) in b_seq.iter().enumerate() {
        if !disjoint(&cand_block, &block(group, i as u32, b, None)?) {
            return Ok(false);
        }
    }
    // product blocks with the new b against all committed product blocks
    for (i, a) in a_seq.iter().enumerate() {
        let new_block = block(group, i as u32, a, Some(cand))?;
        for (k, ak) in a_seq.iter().enumerate() {
            for bm in b_seq.iter().skip(k) {
                if !disjoint(&new_block, &block(group, k as u32, ak, Some(bm))?) {
                    return Ok(false);
                }
            }
        }
    }
    let mut extended = b_seq.to_vec();
    extended.push(cand.clone());
    obstruction_free(group, prefix_elements(group, a_seq, &extended))
}

fn ok_as_a(
    group: &Group,
    a_seq: &[GroupElem],
    b_seq: &[GroupElem],
    cand: &GroupElem,
) -> Result<bool> {
    let next_idx = a_seq.len() as u32;
    let b_new = b_seq.last().expect("b chosen first");
    let cand_block = block(group, next_idx, cand, Some(b_new))?;
    // committed blocks
    for (k, ak) in a_seq.iter().enumerate() {
        for bm in b_seq.iter().skip(k) {
            if !disjoint(&cand_block, &block(group, k as u32, ak, Some(bm))?) {
                return Ok(false);
            }
        }
    }
    let mut extended = a_seq.to_vec();
    extended.push(cand.clone());
    obstruction_free(group, prefix_elements(group, &extended, b_seq))
}

/// The full pairwise transcript for a finished witness: all pairs of
/// b-blocks, and all pairs of product blocks with generated indices.
pub fn condition_transcript(
    group: &Group,
    a_seq: &[GroupElem],
    b_seq: &[GroupElem],
) -> Result<Vec<CheckedInstance>> {
    let mut out = Vec::new();
    let count = b_seq.len();
    for i in 0..count {
        for j in (i + 1)..count {
            let d = disjoint(
                &block(group, i as u32, &b_seq[i], None)?,
                &block(group, j as u32, &b_seq[j], None)?,
            );
            out.push(CheckedInstance {
                condition: "b_blocks_disjoint".to_string(),
                indices: vec![i as i64, j as i64],
                result: if d { "disjoint" } else { "violated" }.to_string(),
            });
        }
    }
    let mut blocks: Vec<(usize, usize, HashSet<GroupElem>)> = Vec::new();
    for (i, a) in a_seq.iter().enumerate() {
        for (j, b) in b_seq.iter().enumerate().skip(i) {
            blocks.push((i, j, block(group, i as u32, a, Some(b))?));
        }
    }
    for x in 0..blocks.len() {
        for y in (x + 1)..blocks.len() {
            let d = disjoint(&blocks[x].2, &blocks[y].2);
            out.push(CheckedInstance {
                condition: "product_blocks_disjoint".to_string(),
                indices: vec![
                    blocks[x].0 as i64,
                    blocks[x].1 as i64,
                    blocks[y].0 as i64,
                    blocks[y].1 as i64,
                ],
                result: if d { "disjoint" } else { "violated" }.to_string(),
            });
        }
    }
    let clean = obstruction_free(group, prefix_elements(group, a_seq, b_seq))?;
    out.push(CheckedInstance {
        condition: "prefix_free_of_small_fp_patterns".to_string(),
        indices: vec![i64::from(GUARD_DEPTH), i64::from(GUARD_RADIUS)],
        result: if clean { "clean" } else { "violated" }.to_string(),
    });
    Ok(out)
}

/// Independent re-verification of a recorded transcript.
pub fn verify_pair_conditions(group: &Group, doc: &PairProductDoc) -> Result<()> {
    let witness = PairProductWitness::from_doc(doc, group)?;
    let fresh = condition_transcript(group, &witness.a_seq, &witness.b_seq)?;
    if fresh != doc.transcript {
        return Err(Error::model("pair-product transcript does not replay"));
    }
    if fresh.iter().any(|i| i.result == "violated") {
        return Err(Error::model("pair-product transcript records a violation"));
    }
    Ok(())
}

/// Exhaustive tail isolation: for every g in ball(m) except the identity,
/// g·{a_i b_j : i > m} misses the whole set. Returns (pairs checked,
/// violations as text).
pub fn check_tail_isolation(
    group: &Group,
    witness: &PairProductWitness,
    m: usize,
) -> Result<(u64, Vec<String>)> {
    let all: HashSet<GroupElem> = witness.elements(group).into_iter().collect();
    let mut tail = Vec::new();
    for (i, a) in witness.a_seq.iter().enumerate() {
        if i <= m {
            continue;
        }
        for b in witness.b_seq.iter().skip(i) {
            tail.push(group.op(a, b));
        }
    }
    let e = group.identity();
    let mut checked = 0u64;
    let mut violations = Vec::new();
    for g in group.ball(m as u32, u64::MAX)?.iter() {
        if *g == e {
            continue;
        }
        for t in &tail {
            checked += 1;
            let moved = group.op(g, t);
            if all.contains(&moved) {
                violations.push(format!(
                    "g={} tail={} lands at {}",
                    group.format(g),
                    group.format(t),
                    group.format(&moved)
                ));
            }
        }
    }
    Ok((checked, violations))
}

/// The chain of inverse a-translates designed to violate sparseness:
/// {b_j : j >= k} sits inside every a_i^{-1}·A for i <= k.
pub fn designated_chain(group: &Group, witness: &PairProductWitness, depth: usize) -> Vec<GroupElem> {
    witness
        .a_seq
        .iter()
        .take(depth)
        .map(|a| group.inv(a))
        .collect()
}

//! The finite-products witness: a set FP(a_n) that is small but carries its
//! own finite-product obstruction.
//!
//! The sequence starts at the identity; each step picks b_{m+1} and then
//! a_{m+1}, first admissible in canonical order, so that the translate
//! separation b_m·FP ∩ ball(m)·FP = ∅ holds for every generated index m
//! against the whole generated prefix. This re-verifies the full prefix at
//! every step: the stepwise conditions alone do not cover products mixing
//! several later terms with an early b.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{disjoint, CandidateStream};
use crate::cert::{Certificate, CheckedInstance};
use crate::error::{Error, Result};
use crate::groups::{Group, GroupElem};
use crate::sets::SubsetExpr;

#[derive(Clone, Debug)]
pub struct FpWitness {
    /// Nontrivial terms a_1..a_count; the identity term a_0 is implicit.
    pub a_seq: Vec<GroupElem>,
    /// Separating translates b_1..b_count.
    pub b_seq: Vec<GroupElem>,
    pub transcript: Vec<CheckedInstance>,
    pub candidates_tried: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FpDoc {
    pub a_seq: Vec<String>,
    pub b_seq: Vec<String>,
    pub transcript: Vec<CheckedInstance>,
}

impl FpWitness {
    pub fn set(&self, group: &Group) -> Result<SubsetExpr> {
        SubsetExpr::fp_list(group, self.a_seq.clone(), None)
    }

    pub fn to_doc(&self, group: &Group) -> FpDoc {
        FpDoc {
            a_seq: self.a_seq.iter().map(|x| group.format(x)).collect(),
            b_seq: self.b_seq.iter().map(|x| group.format(x)).collect(),
            transcript: self.transcript.clone(),
        }
    }

    pub fn from_doc(doc: &FpDoc, group: &Group) -> Result<Self> {
        Ok(FpWitness {
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
}

/// Products of all nonempty subsequences of (e, a_1..a_k): the finite
/// products of the prefix, always containing the identity.
fn prefix_products(group: &Group, terms: &[GroupElem]) -> HashSet<GroupElem> {
    let mut out = HashSet::new();
    out.insert(group.identity());
    fn rec(
        group: &Group,
        terms: &[GroupElem],
        from: usize,
        acc: Option<GroupElem>,
        out: &mut HashSet<GroupElem>,
    ) {
        for i in from..terms.len() {
            let next = match &acc {
                Some(p) => group.op(p, &terms[i]),
                None => terms[i].clone(),
            };
            out.insert(next.clone());
            rec(group, terms, i + 1, Some(next), out);
        }
    }
    rec(group, terms, 0, None, &mut out);
    out
}

fn translate_set(group: &Group, g: &GroupElem, set: &HashSet<GroupElem>) -> HashSet<GroupElem> {
    set.iter().map(|x| group.op(g, x)).collect()
}

fn fatten_set(group: &Group, radius: u32, set: &HashSet<GroupElem>) -> Result<HashSet<GroupElem>> {
    let ball = group.ball(radius, u64::MAX)?;
    let mut out = HashSet::new();
    for f in ball.iter() {
        for x in set {
            out.insert(group.op(f, x));
        }
    }
    Ok(out)
}

/// Does the translate separation hold for every generated index against the
/// given prefix products?
fn separation_holds(
    group: &Group,
    b_seq: &[GroupElem],
    products: &HashSet<GroupElem>,
) -> Result<bool> {
    for (idx, b) in b_seq.iter().enumerate() {
        let m = idx + 1;
        let left = translate_set(group, b, products);
        let right = fatten_set(group, m as u32, products)?;
        if !disjoint(&left, &right) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn build_fp_small(group: &Group, count: usize, budget: u64) -> Result<FpWitness> {
    if count < 1 {
        return Err(Error::usage("finite-products witness needs count >= 1"));
    }
    let e = group.identity();
    let mut a_seq: Vec<GroupElem> = Vec::new();
    let mut b_seq: Vec<GroupElem> = Vec::new();
    let mut tried = 0u64;

    for _ in 0..count {
        let products = prefix_products(group, &a_seq);

        // b_{m+1}: translate separation against the current prefix
        let b_next = {
            let mut stream = CandidateStream::new(group, budget);
            loop {
                let cand = stream.next("translate separation for b")?;
                let mut extended = b_seq.clone();
                extended.push(cand.clone());
                if separation_holds(group, &extended, &products)? {
                    tried += stream.tried();
                    break cand;
                }
            }
        };
        b_seq.push(b_next);

        // a_{m+1}: the enlarged product set must keep every separation
        let a_next = {
            let mut stream = CandidateStream::new(group, budget);
            loop {
                let cand = stream.next("translate separation for a")?;
                if cand == e || a_seq.contains(&cand) {
                    continue;
                }
                let mut extended = a_seq.clone();
                extended.push(cand.clone());
                let extended_products = prefix_products(group, &extended);
                if separation_holds(group, &b_seq, &extended_products)? {
                    tried += stream.tried();
                    break cand;
                }
            }
        };
        a_seq.push(a_next);
    }

    let transcript = condition_transcript(group, &a_seq, &b_seq)?;
    if transcript.iter().any(|i| i.result != "disjoint") {
        return Err(Error::Construction {
            constraint: "translate separation".to_string(),
            tried,
        });
    }
    Ok(FpWitness {
        a_seq,
        b_seq,
        transcript,
        candidates_tried: tried,
    })
}

/// Final transcript: one instance per generated index m, checking
/// b_m·FP ∩ ball(m)·FP = ∅ over the full prefix products.
pub fn condition_transcript(
    group: &Group,
    a_seq: &[GroupElem],
    b_seq: &[GroupElem],
) -> Result<Vec<CheckedInstance>> {
    let products = prefix_products(group, a_seq);
    let mut out = Vec::new();
    for (idx, b) in b_seq.iter().enumerate() {
        let m = idx + 1;
        let left = translate_set(group, b, &products);
        let right = fatten_set(group, m as u32, &products)?;
        out.push(CheckedInstance {
            condition: "translate_separation".to_string(),
            indices: vec![m as i64],
            result: if disjoint(&left, &right) {
                "disjoint"
            } else {
                "violated"
            }
            .to_string(),
        });
    }
    Ok(out)
}

pub fn verify_fp_conditions(group: &Group, doc: &FpDoc) -> Result<()> {
    let witness = FpWitness::from_doc(doc, group)?;
    let fresh = condition_transcript(group, &witness.a_seq, &witness.b_seq)?;
    if fresh != doc.transcript {
        return Err(Error::model("finite-products transcript does not replay"));
    }
    if fresh.iter().any(|i| i.result != "disjoint") {
        return Err(Error::model("finite-products transcript records a violation"));
    }
    Ok(())
}

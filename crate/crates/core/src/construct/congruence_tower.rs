//! A nested tower of congruence classes a_n + 2^(a_n)·Z with exact
//! disjointness certificates.
//!
//! The sequence is pinned by the step form a_{n+1} = a_n + c_n·2^(a_n) with
//! the smallest admissible c_n, which keeps the classes nested: every finite
//! intersection of the tower equals its deepest class and is nonempty. Terms
//! materialize as integers while they fit; past the materialization cap the
//! step form itself is the value, and every arithmetic fact needed by the
//! checks follows from chain divisibility plus small residues — no giant
//! number is ever constructed.
//!
//! Checked separation instances: for each m and each offset i with
//! 0 < |i| <= m+1, the class a_n + 2^(a_n)·Z (n > m) misses
//! i + a_N + 2^(a_N)·Z, because a_n ≡ a_N (mod 2^(a_n)) while i is not
//! divisible by 2^(a_n).

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cert::{Certificate, CheckedInstance};
use crate::error::{Error, Result};

/// Terms stop materializing past this bit length.
pub const MATERIAL_BITS: u64 = 1 << 14;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TowerTerm {
    /// The integer value, as a decimal string in serialized form.
    Value(String),
    /// Too large to materialize; defined by the step recurrence from the
    /// last materialized term.
    Symbolic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceTower {
    /// a_0.
    pub start: String,
    /// c_n with a_{n+1} = a_n + c_n·2^(a_n).
    pub steps: Vec<u64>,
    pub terms: Vec<TowerTerm>,
    pub transcript: Vec<CheckedInstance>,
}

impl CongruenceTower {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn certificate(&self) -> Certificate {
        Certificate::TowerTranscript {
            instances: self.transcript.clone(),
        }
    }

    /// Materialized value of term n, when it exists.
    pub fn value(&self, n: usize) -> Option<BigUint> {
        match &self.terms[n] {
            TowerTerm::Value(text) => text.parse().ok(),
            TowerTerm::Symbolic => None,
        }
    }
}

/// Materialized prefix values, recomputed from start and steps.
fn materialize(start: &BigUint, steps: &[u64]) -> Vec<Option<BigUint>> {
    let mut out = vec![Some(start.clone())];
    let mut current = Some(start.clone());
    for &c in steps {
        current = current.and_then(|a| {
            // 2^a needs a bits; only follow while that fits the cap
            a.to_u64().filter(|&bits| bits <= MATERIAL_BITS).map(|bits| {
                let pow = BigUint::one() << (bits as usize);
                a + pow * BigUint::from(c)
            })
        });
        out.push(current.clone());
    }
    out
}

/// One separation instance: does the class at index n avoid
/// i + (class at index last)?
///
/// Exactly when 2^(a_n) does not divide i + a_last - a_n. The difference
/// a_last - a_n is a sum of terms c_k·2^(a_k) with a_k >= a_n, each
/// divisible by 2^(a_n); so the check reduces to 2^(a_n) not dividing i.
fn instance_separated(values: &[Option<BigUint>], n: usize, i: i64) -> bool {
    if i == 0 {
        return false;
    }
    match &values[n] {
        Some(a_n) => match a_n.to_u64() {
            Some(bits) if bits < 63 => i.unsigned_abs() % (1u64 << bits) != 0,
            // 2^(a_n) exceeds any witness offset
            _ => true,
        },
        // symbolic terms exceed the materialization cap, so 2^(a_n) is huge
        None => true,
    }
}

/// Nesting instance: class n+1 inside class n. From the step form,
/// a_{n+1} - a_n = c_n·2^(a_n) and a_{n+1} >= a_n, so this is structural;
/// it fails only for a zero step.
fn instance_nested(steps: &[u64], n: usize) -> bool {
    steps[n] >= 1
}

fn build_transcript(start: &BigUint, steps: &[u64]) -> Vec<CheckedInstance> {
    let values = materialize(start, steps);
    let last = values.len() - 1;
    let mut out = Vec::new();
    for n in 0..last {
        out.push(CheckedInstance {
            condition: "nested_classes".to_string(),
            indices: vec![n as i64, (n + 1) as i64],
            result: if instance_nested(steps, n) {
                "nested"
            } else {
                "violated"
            }
            .to_string(),
        });
    }
    for m in 0..last {
        for mag in 1..=(m as i64 + 1) {
            for i in [mag, -mag] {
                for n in (m + 1)..=last {
                    let ok = instance_separated(&values, n, i);
                    out.push(CheckedInstance {
                        condition: "class_avoids_offset_tail".to_string(),
                        indices: vec![m as i64, i, n as i64],
                        result: if ok { "disjoint" } else { "violated" }.to_string(),
                    });
                }
            }
        }
    }
    out
}

/// Build a tower of `n_terms` terms, smallest steps first.
pub fn build_congruence_tower(n_terms: usize, budget: u64) -> Result<CongruenceTower> {
    if n_terms < 2 {
        return Err(Error::usage("a congruence tower needs at least 2 terms"));
    }
    let start = BigUint::one();
    let mut steps: Vec<u64> = Vec::new();
    for _ in 0..(n_terms - 1) {
        let mut chosen = None;
        for c in 1..=budget {
            let mut candidate = steps.clone();
            candidate.push(c);
            let transcript = build_transcript(&start, &candidate);
            if transcript.iter().all(|inst| {
                inst.result == "disjoint" || inst.result == "nested"
            }) {
                chosen = Some(c);
                break;
            }
        }
        match chosen {
            Some(c) => steps.push(c),
            None => {
                return Err(Error::Construction {
                    constraint: "separation instances".to_string(),
                    tried: budget,
                })
            }
        }
    }
    let values = materialize(&start, &steps);
    let terms = values
        .iter()
        .map(|v| match v {
            Some(value) => TowerTerm::Value(value.to_string()),
            None => TowerTerm::Symbolic,
        })
        .collect();
    let transcript = build_transcript(&start, &steps);
    Ok(CongruenceTower {
        start: start.to_string(),
        steps,
        terms,
        transcript,
    })
}

/// Independent checker: recompute terms and every instance from the step
/// form and compare with the recorded transcript.
pub fn verify_tower(tower: &CongruenceTower) -> Result<()> {
    let start: BigUint = tower
        .start
        .parse()
        .map_err(|_| Error::parse("bad tower start"))?;
    if start.is_zero() {
        return Err(Error::model("tower must start at a positive integer"));
    }
    if tower.steps.len() + 1 != tower.terms.len() {
        return Err(Error::model("tower step/term lengths disagree"));
    }
    let values = materialize(&start, &tower.steps);
    for (n, (value, term)) in values.iter().zip(&tower.terms).enumerate() {
        let expected = match value {
            Some(v) => TowerTerm::Value(v.to_string()),
            None => TowerTerm::Symbolic,
        };
        if *term != expected {
            return Err(Error::model(format!("tower term {n} does not replay")));
        }
    }
    let fresh = build_transcript(&start, &tower.steps);
    if fresh != tower.transcript {
        return Err(Error::model("tower transcript does not replay"));
    }
    if fresh
        .iter()
        .any(|inst| inst.result != "disjoint" && inst.result != "nested")
    {
        return Err(Error::model("tower transcript records a violation"));
    }
    Ok(())
}

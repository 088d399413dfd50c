//! Replayable evidence attached to every verdict and outcome.
//!
//! A certificate is self-describing data: an independent checker re-verifies
//! it against the originating expression and group without trusting the
//! search that produced it. Witness-style certificates replay by direct
//! membership checks; exhaustive-style certificates replay by deterministic
//! recomputation of the recorded transcript summary.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Exact claim carried by a residue certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidueClaim {
    Finite { cardinality: u64 },
    Infinite { residue: u64, modulus: u64 },
}

/// Count profile of a windowed member enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthProfile {
    pub horizon: u64,
    pub margin: u64,
    pub total: u64,
    pub max_len: u64,
    /// members with length in (horizon - margin, horizon]
    pub top_zone: u64,
    /// members per horizon quartile
    pub quartiles: [u64; 4],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyEntry {
    pub g: String,
    pub cert: Certificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockedPoint {
    pub x: String,
    pub hit: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckedInstance {
    pub condition: String,
    pub indices: Vec<i64>,
    pub result: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// Exact verdict via the residue normal form over the integers.
    Residue {
        modulus: u64,
        residues: Vec<u64>,
        plus: Vec<i64>,
        minus: Vec<i64>,
        claim: ResidueClaim,
    },
    /// Exact finite verdict via the explicit-set algebra.
    FiniteList { members: Vec<String> },
    /// Windowed verdict from the member-count profile.
    Growth { profile: GrowthProfile, stable: bool },
    /// Nothing is claimed.
    Inconclusive { reason: String },

    /// A translate g with gA ∩ A infinite.
    TranslateWitness { g: String, inner: Box<Certificate> },
    /// Every g in ball(radius) \ {e} has gA ∩ A finite.
    TranslateSurvey { radius: u32, entries: Vec<SurveyEntry> },
    /// Distinct translates whose common intersection is infinite.
    TupleWitness { tuple: Vec<String>, inner: Box<Certificate> },
    /// Every tuple of the stated arity from ball(radius) intersects finitely.
    TupleSurvey { radius: u32, arity: u32, tuples_checked: u64, exact_only: bool },
    /// Counts |Fg ∩ A| stayed <= bound outside ball(excluded), within the scan range.
    CountScan {
        f_radius: u32,
        excluded_radius: u64,
        bound: u32,
        scan_len: u64,
        violations_in_top_zone: u64,
        witness_violations: Vec<String>,
        exact: bool,
    },
    /// Thinness level: a witness that the lower level fails plus the
    /// exhaustive survey at the returned level.
    Level {
        #[serde(skip_serializing_if = "Option::is_none")]
        not_lower: Option<Box<Certificate>>,
        survey: Box<Certificate>,
    },
    /// A chain x1..xk with every partial intersection infinite.
    Chain { chain: Vec<String>, levels: Vec<Certificate> },
    /// Depth-first chain search exhausted without a violating chain.
    ChainSearch { radius: u32, depth: u32, explored: u64, unknown_prunes: u64 },
    /// Per-radius thick witnesses Fa ⊆ A, or the first radius with none.
    ThickSurvey {
        witnesses: Vec<(u32, String)>,
        failed_radius: Option<u32>,
        candidates_tried: u64,
        exact: bool,
    },
    /// Translating set F with ball(target_radius) ⊆ F·A, or the uncovered rest.
    Cover {
        translators: Vec<String>,
        target_radius: u32,
        covered: u64,
        uncovered: Vec<String>,
        exact: bool,
    },
    /// Thick outcomes of F·A for F = ball(r), r <= radius.
    PrethickSurvey { per_radius: Vec<(u32, Certificate)>, holds_at: Option<u32> },
    /// Both routes of the smallness decision.
    SmallRoutes {
        not_prethick: Box<Certificate>,
        prethick_holds: bool,
        complement_large: Vec<(u32, Certificate)>,
        complement_all_large: bool,
        agree: bool,
    },
    /// Terms and translate with every finite product inside the set.
    FpObstruction {
        terms: Vec<String>,
        translate: String,
        products: Vec<String>,
    },
    /// Bounded search found no finite-product obstruction.
    FpSearch {
        depth: u32,
        translate_radius: u32,
        candidate_cap: u64,
        explored: u64,
    },
    /// A tail point x with (ball(radius) \ ball(excluded))·x missing the set.
    ScatterWitness {
        excluded_radius: u32,
        radius: u32,
        tail_index: u64,
        point: String,
    },
    /// For every exclusion radius, every sampled tail point is hit.
    ScatterBlocked {
        radius: u32,
        per_excluded: Vec<(u32, Vec<BlockedPoint>)>,
    },
    /// The set is already finite, so the scattered test is vacuous.
    VacuouslyScattered { inner: Box<Certificate> },

    /// Builder transcript: each recorded instance replays to "disjoint".
    DisjointnessTranscript { instances: Vec<CheckedInstance> },
    /// Congruence-tower transcript: nesting steps plus class-disjointness
    /// instances, all verified by residue arithmetic on the step form.
    TowerTranscript { instances: Vec<CheckedInstance> },
    /// Census of a support partition restricted to a ball.
    PartitionCensus {
        horizon: u32,
        cells: u64,
        covered: u64,
        ball_size: u64,
    },
    /// Isolation scan of one partition cell.
    IsolationTranscript {
        cell: Vec<u64>,
        radius: u32,
        horizon: u32,
        pairs_checked: u64,
        violations: Vec<String>,
    },

    /// Min-max grid behind a density estimate.
    DensityGrid {
        family_labels: Vec<String>,
        optimizer_family: usize,
        optimizer_g: String,
        numerator: i64,
        denominator: i64,
        exact_sup: bool,
        g_radius: u64,
    },
    /// Members of a combinatorial derivation with per-element evidence.
    DerivationMembers {
        entries: Vec<SurveyEntry>,
        excluded_unknown: u64,
    },
}

impl Certificate {
    /// Stable identifier: prefix of the SHA-256 of the canonical JSON form.
    pub fn id(&self) -> String {
        let value = serde_json::to_value(self).expect("certificates serialize");
        let canonical = serde_json::to_string(&value).expect("values serialize");
        let digest = Sha256::digest(canonical.as_bytes());
        let mut out = String::with_capacity(16);
        for byte in digest.iter().take(8) {
            out.push_str(&format!("{byte:02x}"));
        }
        out
    }

    pub fn inconclusive(reason: impl Into<String>) -> Self {
        Certificate::Inconclusive {
            reason: reason.into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn id_is_stable_and_tamper_evident() {
        let a = Certificate::FiniteList {
            members: vec!["0".into(), "5".into()],
        };
        let b = Certificate::FiniteList {
            members: vec!["0".into(), "5".into()],
        };
        assert_eq!(a.id(), b.id());
        let c = Certificate::FiniteList {
            members: vec!["0".into(), "6".into()],
        };
        assert_ne!(a.id(), c.id());
    }

    #[test]
    fn round_trips_through_json() {
        let cert = Certificate::TranslateWitness {
            g: "2".into(),
            inner: Box::new(Certificate::Residue {
                modulus: 2,
                residues: vec![0],
                plus: vec![],
                minus: vec![],
                claim: ResidueClaim::Infinite { residue: 0, modulus: 2 },
            }),
        };
        let json = serde_json::to_string(&cert).unwrap();
        let back: Certificate = serde_json::from_str(&json).unwrap();
        assert_eq!(cert, back);
        assert_eq!(cert.id(), back.id());
    }
}

//! Exact residue-class normal form for subsets of the integers.
//!
//! A [`ZPeriodic`] value denotes the set
//! `{x : x mod m ∈ residues} ∪ plus \ minus` with `plus` disjoint from the
//! residue classes and `minus` contained in them. Translation, union and
//! finite intersection stay inside this normal form, which is what makes
//! the Exact verdicts replayable by residue arithmetic alone.

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// Moduli above this are not normalized; evaluation falls back to the
/// windowed path instead of manipulating giant residue tables.
pub const MAX_MODULUS: u64 = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZPeriodic {
    pub modulus: u64,
    pub residues: BTreeSet<u64>,
    pub plus: BTreeSet<i64>,
    pub minus: BTreeSet<i64>,
}

impl ZPeriodic {
    pub fn new(
        modulus: u64,
        residues: impl IntoIterator<Item = u64>,
        plus: impl IntoIterator<Item = i64>,
        minus: impl IntoIterator<Item = i64>,
    ) -> Self {
        let modulus = modulus.max(1);
        let residues: BTreeSet<u64> = residues.into_iter().map(|r| r % modulus).collect();
        let mut out = ZPeriodic {
            modulus,
            residues,
            plus: BTreeSet::new(),
            minus: BTreeSet::new(),
        };
        for p in plus {
            if !out.in_classes(p) {
                out.plus.insert(p);
            }
        }
        for m in minus {
            if out.in_classes(m) {
                out.minus.insert(m);
            }
        }
        out.plus = &out.plus - &out.minus;
        out
    }

    pub fn empty() -> Self {
        ZPeriodic::new(1, [], [], [])
    }

    pub fn full() -> Self {
        ZPeriodic::new(1, [0], [], [])
    }

    pub fn from_finite(points: impl IntoIterator<Item = i64>) -> Self {
        ZPeriodic::new(1, [], points, [])
    }

    fn in_classes(&self, x: i64) -> bool {
        self.residues.contains(&x.rem_euclid(self.modulus as i64).unsigned_abs())
    }

    pub fn contains(&self, x: i64) -> bool {
        if self.minus.contains(&x) {
            return false;
        }
        self.in_classes(x) || self.plus.contains(&x)
    }

    pub fn is_infinite(&self) -> bool {
        !self.residues.is_empty()
    }

    /// Cardinality when the set is finite.
    pub fn finite_cardinality(&self) -> Option<u64> {
        if self.is_infinite() {
            None
        } else {
            Some(self.plus.len() as u64)
        }
    }

    /// A residue class witnessing infinitude, as (residue, modulus).
    pub fn infinite_witness(&self) -> Option<(u64, u64)> {
        self.residues.iter().next().map(|&r| (r, self.modulus))
    }

    /// Shift the set by `g` (the set `g + A`).
    pub fn translate(&self, g: i64) -> Self {
        let m = self.modulus as i64;
        ZPeriodic {
            modulus: self.modulus,
            residues: self
                .residues
                .iter()
                .map(|&r| (r as i64 + g).rem_euclid(m).unsigned_abs())
                .collect(),
            plus: self.plus.iter().map(|&p| p + g).collect(),
            minus: self.minus.iter().map(|&p| p + g).collect(),
        }
    }

    fn combine(&self, other: &Self, is_union: bool) -> Option<Self> {
        let modulus = self.modulus.lcm(&other.modulus);
        if modulus > MAX_MODULUS {
            return None;
        }
        let residues: BTreeSet<u64> = (0..modulus)
            .filter(|&r| {
                let a = self.residues.contains(&(r % self.modulus));
                let b = other.residues.contains(&(r % other.modulus));
                if is_union {
                    a || b
                } else {
                    a && b
                }
            })
            .collect();
        let mut out = ZPeriodic {
            modulus,
            residues,
            plus: BTreeSet::new(),
            minus: BTreeSet::new(),
        };
        // exceptional points can only come from the operands' deltas
        let candidates: BTreeSet<i64> = self
            .plus
            .iter()
            .chain(&self.minus)
            .chain(&other.plus)
            .chain(&other.minus)
            .copied()
            .collect();
        for x in candidates {
            let actual = if is_union {
                self.contains(x) || other.contains(x)
            } else {
                self.contains(x) && other.contains(x)
            };
            let periodic = out.in_classes(x);
            if actual && !periodic {
                out.plus.insert(x);
            } else if !actual && periodic {
                out.minus.insert(x);
            }
        }
        Some(out)
    }

    pub fn union(&self, other: &Self) -> Option<Self> {
        self.combine(other, true)
    }

    /// Complement within the integers: residues flip, plus and minus swap.
    pub fn complement(&self) -> Self {
        ZPeriodic {
            modulus: self.modulus,
            residues: (0..self.modulus)
                .filter(|r| !self.residues.contains(r))
                .collect(),
            plus: self.minus.clone(),
            minus: self.plus.clone(),
        }
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        self.combine(other, false)
    }

    /// All members x with |x| <= h, ascending.
    pub fn members_in_range(&self, h: u64) -> Vec<i64> {
        let h = h as i64;
        let m = self.modulus as i64;
        let mut out = Vec::new();
        for &r in &self.residues {
            let mut x = -h + (r as i64 - (-h).rem_euclid(m)).rem_euclid(m);
            while x <= h {
                out.push(x);
                x += m;
            }
        }
        out.extend(self.plus.iter().filter(|&&p| p.abs() <= h));
        out.retain(|x| !self.minus.contains(x));
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Number of members in [lo, hi], by residue counting.
    pub fn count_in_interval(&self, lo: i64, hi: i64) -> u64 {
        if lo > hi {
            return 0;
        }
        let m = self.modulus as i64;
        let mut count = 0i64;
        for &r in &self.residues {
            // members of r + mZ in [lo, hi]
            let first = lo + (r as i64 - lo.rem_euclid(m)).rem_euclid(m);
            if first <= hi {
                count += (hi - first) / m + 1;
            }
        }
        count += self.plus.iter().filter(|&&p| lo <= p && p <= hi).count() as i64;
        count -= self.minus.iter().filter(|&&p| lo <= p && p <= hi).count() as i64;
        count.max(0) as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Brute-force membership oracle over a bounded range.
    fn brute(set: &ZPeriodic, h: i64) -> Vec<i64> {
        (-h..=h).filter(|&x| set.contains(x)).collect()
    }

    #[test]
    fn evens_intersect_odds_is_empty() {
        let evens = ZPeriodic::new(2, [0], [], []);
        let odds = evens.translate(1);
        let both = evens.intersect(&odds).unwrap();
        assert!(!both.is_infinite());
        assert_eq!(both.finite_cardinality(), Some(0));
    }

    #[test]
    fn translate_by_modulus_is_identity() {
        let evens = ZPeriodic::new(2, [0], [], []);
        assert_eq!(evens.translate(2), evens);
    }

    #[test]
    fn crt_intersection() {
        let a = ZPeriodic::new(4, [1], [], []);
        let b = ZPeriodic::new(6, [1], [], []);
        let c = a.intersect(&b).unwrap();
        assert_eq!(c.modulus, 12);
        assert_eq!(c.residues.iter().copied().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn members_in_range_matches_brute_force() {
        let set = ZPeriodic::new(6, [1, 4], [3, -17], [7]);
        assert_eq!(set.members_in_range(30), brute(&set, 30));
        assert_eq!(
            set.count_in_interval(-30, 30),
            brute(&set, 30).len() as u64
        );
    }

    proptest! {
        #[test]
        fn combine_agrees_with_pointwise_oracle(
            m1 in 1u64..12, m2 in 1u64..12,
            r1 in proptest::collection::btree_set(0u64..12, 0..4),
            r2 in proptest::collection::btree_set(0u64..12, 0..4),
            p1 in proptest::collection::btree_set(-30i64..30, 0..4),
            p2 in proptest::collection::btree_set(-30i64..30, 0..4),
            n1 in proptest::collection::btree_set(-30i64..30, 0..4),
            n2 in proptest::collection::btree_set(-30i64..30, 0..4),
            g in -20i64..20,
        ) {
            let a = ZPeriodic::new(m1, r1, p1, n1);
            let b = ZPeriodic::new(m2, r2, p2, n2);
            let u = a.union(&b).unwrap();
            let i = a.intersect(&b).unwrap();
            let t = a.translate(g);
            let c = a.complement();
            for x in -60..=60 {
                prop_assert_eq!(u.contains(x), a.contains(x) || b.contains(x));
                prop_assert_eq!(i.contains(x), a.contains(x) && b.contains(x));
                prop_assert_eq!(t.contains(x), a.contains(x - g));
                prop_assert_eq!(c.contains(x), !a.contains(x));
            }
        }

        #[test]
        fn counting_matches_enumeration(
            m in 1u64..10,
            rs in proptest::collection::btree_set(0u64..10, 0..4),
            lo in -50i64..0, hi in 0i64..50,
        ) {
            let set = ZPeriodic::new(m, rs, [], []);
            let by_count = set.count_in_interval(lo, hi);
            let by_scan = (lo..=hi).filter(|&x| set.contains(x)).count() as u64;
            prop_assert_eq!(by_count, by_scan);
        }
    }
}

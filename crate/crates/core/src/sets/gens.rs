//! Named builtin sequence generators over the integers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A strictly increasing integer sequence selected by name.
///
/// Serialized forms carry only the name and integer parameters, never code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum SeqGen {
    /// n -> base^n for n >= 0.
    Pow { base: i64 },
    /// Ascending enumeration of the union of the blocks [n!, n! + n], n >= 1.
    FactorialBlocks,
}

impl SeqGen {
    pub fn validate(&self) -> Result<()> {
        match self {
            SeqGen::Pow { base } if *base < 2 => {
                Err(Error::config("pow generator needs base >= 2"))
            }
            _ => Ok(()),
        }
    }

    /// All terms with value at most `h`, ascending.
    pub fn members_up_to(&self, h: u64) -> Vec<i64> {
        let h = h.min(i64::MAX as u64) as i64;
        match self {
            SeqGen::Pow { base } => {
                let mut out = Vec::new();
                let mut x: i64 = 1;
                while x <= h {
                    out.push(x);
                    match x.checked_mul(*base) {
                        Some(next) => x = next,
                        None => break,
                    }
                }
                out
            }
            SeqGen::FactorialBlocks => {
                let mut out = Vec::new();
                let mut fact: i64 = 1;
                let mut n: i64 = 1;
                loop {
                    match fact.checked_mul(n) {
                        Some(f) if f <= h => fact = f,
                        _ => break,
                    }
                    for x in fact..=(fact + n).min(h) {
                        out.push(x);
                    }
                    n += 1;
                }
                out.sort_unstable();
                out.dedup();
                out
            }
        }
    }

    pub fn contains(&self, x: i64) -> bool {
        if x < 1 {
            return false;
        }
        match self {
            SeqGen::Pow { base } => {
                let mut v = x;
                while v % base == 0 {
                    v /= base;
                }
                v == 1
            }
            SeqGen::FactorialBlocks => {
                // find the largest n with n! <= x; the block [n!, n!+n] is the
                // only one that can contain x, since (n-1)!+(n-1) < n! for n >= 3
                // and the n = 1,2 blocks are handled by the same scan
                let mut fact: i64 = 1;
                let mut n: i64 = 1;
                loop {
                    let next = match fact.checked_mul(n) {
                        Some(f) => f,
                        None => return false,
                    };
                    if next > x {
                        break;
                    }
                    fact = next;
                    if x >= fact && x <= fact + n {
                        return true;
                    }
                    n += 1;
                }
                false
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow_terms_and_membership() {
        let g = SeqGen::Pow { base: 2 };
        assert_eq!(g.members_up_to(16), vec![1, 2, 4, 8, 16]);
        assert!(g.contains(1024));
        assert!(!g.contains(12));
        assert!(!g.contains(0));
        assert!(!g.contains(-4));
    }

    #[test]
    fn factorial_blocks_match_direct_scan() {
        let g = SeqGen::FactorialBlocks;
        let members = g.members_up_to(200);
        // blocks within 200: [1,2], [2,4], [6,9], [24,28], [120,125]
        assert_eq!(
            members,
            vec![1, 2, 3, 4, 6, 7, 8, 9, 24, 25, 26, 27, 28, 120, 121, 122, 123, 124, 125]
        );
        for x in -5i64..=200 {
            assert_eq!(g.contains(x), members.contains(&x), "x={x}");
        }
    }

    #[test]
    fn generators_are_strictly_increasing() {
        for g in [SeqGen::Pow { base: 3 }, SeqGen::FactorialBlocks] {
            let m = g.members_up_to(100_000);
            assert!(m.windows(2).all(|w| w[0] < w[1]));
        }
    }
}

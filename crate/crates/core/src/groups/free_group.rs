use super::{check_ball_budget, Ball, GroupElem, GroupKind, GroupModel, SortKey};
use crate::error::{Error, Result};

/// Free group F_k with reduced-word canonical forms.
///
/// Letters are encoded as nonzero integers: `i` is the i-th generator,
/// `-i` its inverse. A word is canonical when no letter is followed by its
/// negation.
pub struct FreeGroup {
    rank: usize,
}

impl FreeGroup {
    pub fn new(rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::config("free group rank must be at least 1"));
        }
        if rank > 26 {
            return Err(Error::config("free group rank is capped at 26 (letters a..z)"));
        }
        Ok(FreeGroup { rank })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// 1 + sum over i of 2k(2k-1)^(i-1): reduced words of length at most r.
    pub fn ball_count(rank: usize, r: u32) -> u64 {
        let k = rank as u64;
        let mut total = 1u64;
        let mut level = 2 * k;
        for _ in 0..r {
            total += level;
            level *= 2 * k - 1;
        }
        total
    }

    fn reduce(word: &[i64]) -> Vec<i64> {
        let mut buf: Vec<i64> = Vec::with_capacity(word.len());
        for &x in word {
            if x == 0 {
                continue;
            }
            if buf.last().is_some_and(|&y| y == -x) {
                buf.pop();
            } else {
                buf.push(x);
            }
        }
        buf
    }

    fn letter_key(letter: i64) -> i64 {
        // generator index first, positive letter before its inverse
        2 * (letter.abs() - 1) + i64::from(letter < 0)
    }
}

impl GroupModel for FreeGroup {
    fn kind(&self) -> GroupKind {
        GroupKind::FreeGroup { rank: self.rank }
    }

    fn identity(&self) -> GroupElem {
        GroupElem(Vec::new())
    }

    fn op(&self, a: &GroupElem, b: &GroupElem) -> GroupElem {
        let mut word = a.0.clone();
        word.extend_from_slice(&b.0);
        GroupElem(Self::reduce(&word))
    }

    fn inv(&self, a: &GroupElem) -> GroupElem {
        GroupElem(a.0.iter().rev().map(|x| -x).collect())
    }

    fn length(&self, a: &GroupElem) -> u64 {
        a.0.len() as u64
    }

    fn ball(&self, r: u32, budget: u64) -> Result<Ball> {
        check_ball_budget(Self::ball_count(self.rank, r), budget)?;
        let mut elements = vec![self.identity()];
        let mut frontier = vec![Vec::<i64>::new()];
        for _ in 0..r {
            let mut next = Vec::new();
            for word in &frontier {
                for gen in 1..=self.rank as i64 {
                    for letter in [gen, -gen] {
                        if word.last().is_some_and(|&y| y == -letter) {
                            continue;
                        }
                        let mut w = word.clone();
                        w.push(letter);
                        next.push(w);
                    }
                }
            }
            elements.extend(next.iter().cloned().map(GroupElem));
            frontier = next;
        }
        super::sort_canonical(self, &mut elements);
        Ok(Ball { radius: r, elements })
    }

    fn sort_key(&self, a: &GroupElem) -> SortKey {
        (self.length(a), a.0.iter().map(|&x| Self::letter_key(x)).collect())
    }

    fn format(&self, a: &GroupElem) -> String {
        if a.0.is_empty() {
            return "e".to_string();
        }
        a.0.iter()
            .map(|&x| {
                let c = (b'a' + (x.abs() - 1) as u8) as char;
                if x > 0 {
                    c
                } else {
                    c.to_ascii_uppercase()
                }
            })
            .collect()
    }

    fn parse(&self, text: &str) -> Result<GroupElem> {
        let trimmed = text.trim();
        if trimmed == "e" || trimmed.is_empty() {
            return Ok(self.identity());
        }
        let mut word = Vec::new();
        for c in trimmed.chars() {
            let (base, sign) = if c.is_ascii_lowercase() {
                (c as u8 - b'a', 1i64)
            } else if c.is_ascii_uppercase() {
                (c as u8 - b'A', -1i64)
            } else {
                return Err(Error::parse(format!("bad letter {c:?} in word {trimmed:?}")));
            };
            let idx = base as usize + 1;
            if idx > self.rank {
                return Err(Error::parse(format!(
                    "letter {c:?} is outside rank {}",
                    self.rank
                )));
            }
            word.push(sign * idx as i64);
        }
        let reduced = Self::reduce(&word);
        if reduced != word {
            return Err(Error::parse(format!("word {trimmed:?} is not reduced")));
        }
        Ok(GroupElem(word))
    }

    fn validate(&self, a: &GroupElem) -> Result<()> {
        for pair in a.0.windows(2) {
            if pair[0] == -pair[1] {
                return Err(Error::model("word is not reduced".to_string()));
            }
        }
        for &x in &a.0 {
            if x == 0 || x.unsigned_abs() as usize > self.rank {
                return Err(Error::model(format!("letter {x} outside rank {}", self.rank)));
            }
        }
        Ok(())
    }
}

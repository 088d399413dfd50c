use super::{check_ball_budget, Ball, GroupElem, GroupKind, GroupModel, SortKey};
use crate::error::{Error, Result};

/// Finite group given by its multiplication table.
///
/// Row 0 must be the identity. Word lengths are BFS distances from the
/// identity with all non-identity elements as generators, so `ball(0)` is
/// the identity and `ball(1)` is the whole group.
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    lengths: Vec<u64>,
}

impl FiniteGroup {
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::config("finite group table must be nonempty"));
        }
        for row in &table {
            if row.len() != n || row.iter().any(|&x| x >= n) {
                return Err(Error::config("finite group table must be a square over 0..n"));
            }
        }
        for i in 0..n {
            if table[0][i] != i || table[i][0] != i {
                return Err(Error::config("row 0 of the table must be the identity"));
            }
        }
        let mut inverse = vec![usize::MAX; n];
        for i in 0..n {
            for j in 0..n {
                if table[i][j] == 0 {
                    inverse[i] = j;
                }
            }
            if inverse[i] == usize::MAX {
                return Err(Error::config(format!("element {i} has no inverse")));
            }
        }
        let lengths = (0..n).map(|i| u64::from(i != 0)).collect();
        Ok(FiniteGroup {
            table,
            inverse,
            lengths,
        })
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    fn index(a: &GroupElem) -> usize {
        a.0[0] as usize
    }
}

impl GroupModel for FiniteGroup {
    fn kind(&self) -> GroupKind {
        GroupKind::Finite {
            table: self.table.clone(),
        }
    }

    fn identity(&self) -> GroupElem {
        GroupElem(vec![0])
    }

    fn op(&self, a: &GroupElem, b: &GroupElem) -> GroupElem {
        GroupElem(vec![self.table[Self::index(a)][Self::index(b)] as i64])
    }

    fn inv(&self, a: &GroupElem) -> GroupElem {
        GroupElem(vec![self.inverse[Self::index(a)] as i64])
    }

    fn length(&self, a: &GroupElem) -> u64 {
        self.lengths[Self::index(a)]
    }

    fn ball(&self, r: u32, budget: u64) -> Result<Ball> {
        let elements: Vec<GroupElem> = (0..self.table.len())
            .filter(|&i| self.lengths[i] <= u64::from(r))
            .map(|i| GroupElem(vec![i as i64]))
            .collect();
        check_ball_budget(elements.len() as u64, budget)?;
        Ok(Ball { radius: r, elements })
    }

    fn sort_key(&self, a: &GroupElem) -> SortKey {
        (self.length(a), a.0.clone())
    }

    fn format(&self, a: &GroupElem) -> String {
        format!("g{}", Self::index(a))
    }

    fn parse(&self, text: &str) -> Result<GroupElem> {
        let trimmed = text.trim();
        let idx: usize = trimmed
            .strip_prefix('g')
            .unwrap_or(trimmed)
            .parse()
            .map_err(|e| Error::parse(format!("bad finite group element {trimmed:?}: {e}")))?;
        if idx >= self.table.len() {
            return Err(Error::parse(format!(
                "index {idx} outside group of order {}",
                self.table.len()
            )));
        }
        Ok(GroupElem(vec![idx as i64]))
    }

    fn validate(&self, a: &GroupElem) -> Result<()> {
        if a.0.len() != 1 || a.0[0] < 0 || a.0[0] as usize >= self.table.len() {
            return Err(Error::model("bad finite group element".to_string()));
        }
        Ok(())
    }
}

/// Multiplication table of the cyclic group Z_n.
pub fn cyclic_table(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect()
}

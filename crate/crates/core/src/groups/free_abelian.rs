use super::{check_ball_budget, Ball, GroupElem, GroupKind, GroupModel, SortKey};
use crate::error::{Error, Result};

/// Z^d with the L1 word length (generators are the coordinate units).
pub struct FreeAbelian {
    rank: usize,
}

impl FreeAbelian {
    pub fn new(rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::config("free abelian rank must be at least 1"));
        }
        Ok(FreeAbelian { rank })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Exact number of lattice points with L1 norm at most `r`.
    pub fn ball_count(rank: usize, r: u32) -> u64 {
        // sum over k of 2^k * C(rank,k) * C(r,k): choose the nonzero
        // coordinates, their signs, and a composition of the norm.
        let r = r as u64;
        let d = rank as u64;
        let mut total = 0u64;
        for k in 0..=d.min(r) {
            total += (1u64 << k) * binomial(d, k) * binomial(r, k);
        }
        total
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

impl GroupModel for FreeAbelian {
    fn kind(&self) -> GroupKind {
        GroupKind::FreeAbelian { rank: self.rank }
    }

    fn identity(&self) -> GroupElem {
        GroupElem(vec![0; self.rank])
    }

    fn op(&self, a: &GroupElem, b: &GroupElem) -> GroupElem {
        GroupElem(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }

    fn inv(&self, a: &GroupElem) -> GroupElem {
        GroupElem(a.0.iter().map(|x| -x).collect())
    }

    fn length(&self, a: &GroupElem) -> u64 {
        a.0.iter().map(|x| x.unsigned_abs()).sum()
    }

    fn ball(&self, r: u32, budget: u64) -> Result<Ball> {
        check_ball_budget(Self::ball_count(self.rank, r), budget)?;
        let mut elements = Vec::new();
        let mut coords = vec![0i64; self.rank];
        enumerate_l1(&mut coords, 0, r as i64, &mut elements);
        super::sort_canonical(self, &mut elements);
        Ok(Ball { radius: r, elements })
    }

    fn sort_key(&self, a: &GroupElem) -> SortKey {
        (self.length(a), a.0.clone())
    }

    fn format(&self, a: &GroupElem) -> String {
        if self.rank == 1 {
            a.0[0].to_string()
        } else {
            let parts: Vec<String> = a.0.iter().map(|x| x.to_string()).collect();
            format!("({})", parts.join(","))
        }
    }

    fn parse(&self, text: &str) -> Result<GroupElem> {
        let coords = parse_tuple(text, self.rank)?;
        Ok(GroupElem(coords))
    }

    fn validate(&self, a: &GroupElem) -> Result<()> {
        if a.0.len() != self.rank {
            return Err(Error::model(format!(
                "element arity {} does not match rank {}",
                a.0.len(),
                self.rank
            )));
        }
        Ok(())
    }

    fn is_integers(&self) -> bool {
        self.rank == 1
    }
}

fn enumerate_l1(coords: &mut Vec<i64>, idx: usize, remaining: i64, out: &mut Vec<GroupElem>) {
    if idx == coords.len() {
        out.push(GroupElem(coords.clone()));
        return;
    }
    for v in -remaining..=remaining {
        coords[idx] = v;
        enumerate_l1(coords, idx + 1, remaining - v.abs(), out);
    }
    coords[idx] = 0;
}

pub(crate) fn parse_tuple(text: &str, rank: usize) -> Result<Vec<i64>> {
    let trimmed = text.trim();
    let inner = if trimmed.starts_with('(') && trimmed.ends_with(')') {
        &trimmed[1..trimmed.len() - 1]
    } else {
        trimmed
    };
    let coords: Vec<i64> = inner
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<i64>()
                .map_err(|e| Error::parse(format!("bad coordinate {p:?}: {e}")))
        })
        .collect::<Result<_>>()?;
    if coords.len() != rank {
        return Err(Error::parse(format!(
            "expected {} coordinates, found {}",
            rank,
            coords.len()
        )));
    }
    Ok(coords)
}

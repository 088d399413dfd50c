use super::{check_ball_budget, Ball, ComponentKind, GroupElem, GroupKind, GroupModel, SortKey};
use crate::error::{Error, Result};

/// Restricted direct sum of Z and Z_m components.
///
/// Elements are coordinate tuples, one slot per component; Z_m coordinates
/// are canonical in `0..m`. The word length is the sum of the per-coordinate
/// lengths (|z| for Z, the cyclic distance min(k, m-k) for Z_m), which keeps
/// balls finite and nested.
pub struct DirectSum {
    components: Vec<ComponentKind>,
}

impl DirectSum {
    pub fn new(components: Vec<ComponentKind>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::config("direct sum needs at least one component"));
        }
        for c in &components {
            if let ComponentKind::ZMod { modulus } = c {
                if *modulus < 2 {
                    return Err(Error::config("Z_m component needs modulus >= 2"));
                }
            }
        }
        Ok(DirectSum { components })
    }

    pub fn components(&self) -> &[ComponentKind] {
        &self.components
    }

    fn coord_op(kind: ComponentKind, a: i64, b: i64) -> i64 {
        match kind {
            ComponentKind::Z => a + b,
            ComponentKind::ZMod { modulus } => (a + b).rem_euclid(modulus as i64),
        }
    }

    fn coord_inv(kind: ComponentKind, a: i64) -> i64 {
        match kind {
            ComponentKind::Z => -a,
            ComponentKind::ZMod { modulus } => (-a).rem_euclid(modulus as i64),
        }
    }

    fn coord_len(kind: ComponentKind, a: i64) -> u64 {
        match kind {
            ComponentKind::Z => a.unsigned_abs(),
            ComponentKind::ZMod { modulus } => {
                let m = modulus as i64;
                a.min(m - a).unsigned_abs()
            }
        }
    }

    /// Values of length exactly `l` in one component.
    fn coord_count(kind: ComponentKind, l: u32) -> u64 {
        match kind {
            ComponentKind::Z => {
                if l == 0 {
                    1
                } else {
                    2
                }
            }
            ComponentKind::ZMod { modulus } => {
                if l == 0 {
                    1
                } else if 2 * l < modulus {
                    2
                } else if 2 * l == modulus {
                    1
                } else {
                    0
                }
            }
        }
    }

    pub fn ball_count(components: &[ComponentKind], r: u32) -> u64 {
        let mut dp = vec![0u64; r as usize + 1];
        dp[0] = 1;
        for &c in components {
            let mut next = vec![0u64; r as usize + 1];
            for (t, &ways) in dp.iter().enumerate() {
                if ways == 0 {
                    continue;
                }
                for l in 0..=(r - t as u32) {
                    next[t + l as usize] =
                        next[t + l as usize].saturating_add(ways * Self::coord_count(c, l));
                }
            }
            dp = next;
        }
        dp.iter().sum()
    }

    fn coord_values_up_to(kind: ComponentKind, l: u32) -> Vec<i64> {
        match kind {
            ComponentKind::Z => (-(l as i64)..=l as i64).collect(),
            ComponentKind::ZMod { modulus } => (0..modulus as i64)
                .filter(|&v| Self::coord_len(kind, v) <= u64::from(l))
                .collect(),
        }
    }
}

impl GroupModel for DirectSum {
    fn kind(&self) -> GroupKind {
        GroupKind::DirectSum {
            components: self.components.clone(),
        }
    }

    fn identity(&self) -> GroupElem {
        GroupElem(vec![0; self.components.len()])
    }

    fn op(&self, a: &GroupElem, b: &GroupElem) -> GroupElem {
        GroupElem(
            self.components
                .iter()
                .zip(a.0.iter().zip(&b.0))
                .map(|(&c, (&x, &y))| Self::coord_op(c, x, y))
                .collect(),
        )
    }

    fn inv(&self, a: &GroupElem) -> GroupElem {
        GroupElem(
            self.components
                .iter()
                .zip(&a.0)
                .map(|(&c, &x)| Self::coord_inv(c, x))
                .collect(),
        )
    }

    fn length(&self, a: &GroupElem) -> u64 {
        self.components
            .iter()
            .zip(&a.0)
            .map(|(&c, &x)| Self::coord_len(c, x))
            .sum()
    }

    fn ball(&self, r: u32, budget: u64) -> Result<Ball> {
        check_ball_budget(Self::ball_count(&self.components, r), budget)?;
        let mut elements = Vec::new();
        let mut coords = vec![0i64; self.components.len()];
        self.enumerate(&mut coords, 0, r, &mut elements);
        super::sort_canonical(self, &mut elements);
        Ok(Ball { radius: r, elements })
    }

    fn sort_key(&self, a: &GroupElem) -> SortKey {
        (self.length(a), a.0.clone())
    }

    fn format(&self, a: &GroupElem) -> String {
        let parts: Vec<String> = a.0.iter().map(|x| x.to_string()).collect();
        format!("({})", parts.join(","))
    }

    fn parse(&self, text: &str) -> Result<GroupElem> {
        let coords = super::free_abelian::parse_tuple(text, self.components.len())?;
        let elem = GroupElem(coords);
        self.validate(&elem)?;
        Ok(elem)
    }

    fn validate(&self, a: &GroupElem) -> Result<()> {
        if a.0.len() != self.components.len() {
            return Err(Error::model(format!(
                "element arity {} does not match component count {}",
                a.0.len(),
                self.components.len()
            )));
        }
        for (&c, &x) in self.components.iter().zip(&a.0) {
            if let ComponentKind::ZMod { modulus } = c {
                if x < 0 || x >= modulus as i64 {
                    return Err(Error::model(format!(
                        "coordinate {x} is not canonical mod {modulus}"
                    )));
                }
            }
        }
        Ok(())
    }

    fn support(&self, a: &GroupElem) -> Result<Vec<usize>> {
        self.validate(a)?;
        Ok(a.0
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(i, _)| i)
            .collect())
    }

    fn component_count(&self) -> Option<usize> {
        Some(self.components.len())
    }
}

impl DirectSum {
    fn enumerate(&self, coords: &mut Vec<i64>, idx: usize, remaining: u32, out: &mut Vec<GroupElem>) {
        if idx == self.components.len() {
            out.push(GroupElem(coords.clone()));
            return;
        }
        let kind = self.components[idx];
        for v in Self::coord_values_up_to(kind, remaining) {
            coords[idx] = v;
            let used = Self::coord_len(kind, v) as u32;
            self.enumerate(coords, idx + 1, remaining - used, out);
        }
        coords[idx] = 0;
    }
}

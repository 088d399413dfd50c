//! Operational models of countable groups with deterministic ball enumeration.
//!
//! A [`GroupModel`] exposes the group operation, inversion, a word-length
//! grading, and canonical text forms for elements. Every model keeps one
//! canonical representation per element, so structural equality of
//! [`GroupElem`] values coincides with equality in the group.

mod descriptor;
mod direct_sum;
mod finite;
mod free_abelian;
mod free_group;

pub use descriptor::{ComponentKind, GroupKind};
pub use direct_sum::DirectSum;
pub use finite::{cyclic_table, FiniteGroup};
pub use free_abelian::FreeAbelian;
pub use free_group::FreeGroup;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Canonical representation of a group element.
///
/// The interpretation of the backing vector is owned by the model that
/// produced it: coordinate tuples for abelian models, reduced letter
/// sequences for free groups, a single table index for finite groups.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElem(pub(crate) Vec<i64>);

impl GroupElem {
    pub fn raw(&self) -> &[i64] {
        &self.0
    }

    pub(crate) fn from_raw(raw: Vec<i64>) -> Self {
        GroupElem(raw)
    }
}

impl std::fmt::Debug for GroupElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GroupElem{:?}", self.0)
    }
}

/// Sort key realizing the canonical element order: word length first, then a
/// fixed total order on canonical forms.
pub type SortKey = (u64, Vec<i64>);

/// All elements of word length at most `radius`, in canonical order.
#[derive(Clone, Debug)]
pub struct Ball {
    pub radius: u32,
    pub elements: Vec<GroupElem>,
}

impl Ball {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, GroupElem> {
        self.elements.iter()
    }
}

/// Operational model of a countable group.
///
/// Implementations must keep elements canonical: `op` and `inv` return
/// canonical forms, and canonicalization is idempotent.
pub trait GroupModel: Send + Sync {
    fn kind(&self) -> GroupKind;

    fn identity(&self) -> GroupElem;

    fn op(&self, a: &GroupElem, b: &GroupElem) -> GroupElem;

    fn inv(&self, a: &GroupElem) -> GroupElem;

    /// Word length with respect to the model's fixed generating set.
    fn length(&self, a: &GroupElem) -> u64;

    /// Elements of length at most `r`, canonically ordered. `budget` caps the
    /// number of elements the enumeration may produce.
    fn ball(&self, r: u32, budget: u64) -> Result<Ball>;

    /// Key for the canonical (length, canonical-form) order.
    fn sort_key(&self, a: &GroupElem) -> SortKey;

    /// Canonical text form of an element.
    fn format(&self, a: &GroupElem) -> String;

    /// Parse the canonical text form.
    fn parse(&self, text: &str) -> Result<GroupElem>;

    /// Check that an element is a valid canonical form for this model.
    fn validate(&self, a: &GroupElem) -> Result<()>;

    /// Coordinate indices where `a` differs from the component identity.
    /// Only restricted direct sums support this.
    fn support(&self, _a: &GroupElem) -> Result<Vec<usize>> {
        Err(Error::usage(
            "support is only defined for restricted direct sum models",
        ))
    }

    /// Number of direct-sum components, when applicable.
    fn component_count(&self) -> Option<usize> {
        None
    }

    /// True for the integers presented as FreeAbelian(1); the periodic
    /// residue algebra is exact only there.
    fn is_integers(&self) -> bool {
        false
    }
}

/// Shared handle to a group model.
pub type Group = Arc<dyn GroupModel>;

/// Construct a model from a serializable descriptor.
pub fn make_group(kind: &GroupKind) -> Result<Group> {
    match kind {
        GroupKind::FreeAbelian { rank } => Ok(Arc::new(FreeAbelian::new(*rank)?)),
        GroupKind::FreeGroup { rank } => Ok(Arc::new(FreeGroup::new(*rank)?)),
        GroupKind::DirectSum { components } => Ok(Arc::new(DirectSum::new(components.clone())?)),
        GroupKind::Finite { table } => Ok(Arc::new(FiniteGroup::new(table.clone())?)),
    }
}

/// Sort elements into the canonical (length, canonical form) order.
pub fn sort_canonical(model: &dyn GroupModel, elems: &mut [GroupElem]) {
    elems.sort_by_cached_key(|e| model.sort_key(e));
}

pub(crate) fn check_ball_budget(needed: u64, budget: u64) -> Result<()> {
    if needed > budget {
        return Err(Error::Resource {
            what: "ball element budget",
            needed,
            budget,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests;

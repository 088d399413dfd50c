use serde::{Deserialize, Serialize};

/// Serializable description of a group model: `{"kind": ..., "params": ...}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum GroupKind {
    FreeAbelian { rank: usize },
    FreeGroup { rank: usize },
    DirectSum { components: Vec<ComponentKind> },
    Finite { table: Vec<Vec<usize>> },
}

/// One component of a restricted direct sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ComponentKind {
    Z,
    ZMod { modulus: u32 },
}

impl GroupKind {
    /// Short display name used in report headers.
    pub fn label(&self) -> String {
        match self {
            GroupKind::FreeAbelian { rank } => format!("free_abelian({rank})"),
            GroupKind::FreeGroup { rank } => format!("free_group({rank})"),
            GroupKind::DirectSum { components } => format!("direct_sum({})", components.len()),
            GroupKind::Finite { table } => format!("finite({})", table.len()),
        }
    }
}

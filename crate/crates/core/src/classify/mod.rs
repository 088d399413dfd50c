//! The decision suite: one strategy per combinatorial size class.
//!
//! Each classifier implements the [`Classifier`] trait and is registered by
//! name; runs select strategies at runtime from the registry. Every outcome
//! carries a certificate that [`Classifier::replay`] re-verifies without
//! trusting the search that produced it.

mod disparse;
mod scattered;
mod small;
mod sparse;
mod thick_large;
mod thin;

pub use disparse::DisparseProxy;
pub use scattered::AsymptoticallyScattered;
pub use small::{IsPrethick, IsSmall};
pub use sparse::{chain_still_violates, replay_chain, IsSparse};
pub use thick_large::{IsLarge, IsThick};
pub use thin::{n_thin_direct, thinness_level, IsThin, NThinDirect, ThinnessLevel};

use serde::{Deserialize, Serialize};

use crate::cert::Certificate;
use crate::error::{Error, Result};
use crate::groups::{Group, GroupElem};
use crate::sets::{Evaluator, SubsetExpr, Window};

/// Class names of the classification suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum ClassName {
    Thin,
    NThin { n: u32 },
    Sparse,
    Thick,
    Large,
    Prethick,
    Small,
    DisparseProxy,
    AsymptoticallyScattered,
}

impl std::fmt::Display for ClassName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ClassName::Thin => write!(f, "thin"),
            ClassName::NThin { n } => write!(f, "{n}-thin"),
            ClassName::Sparse => write!(f, "sparse"),
            ClassName::Thick => write!(f, "thick"),
            ClassName::Large => write!(f, "large"),
            ClassName::Prethick => write!(f, "prethick"),
            ClassName::Small => write!(f, "small"),
            ClassName::DisparseProxy => write!(f, "disparse-proxy"),
            ClassName::AsymptoticallyScattered => write!(f, "asymptotically-scattered"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarity {
    Holds,
    Fails,
    UnknownAtWindow,
}

/// Result of one classifier run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassOutcome {
    #[serde(flatten)]
    pub class: ClassName,
    pub polarity: Polarity,
    /// Human-readable qualifier; proxies state their one-sidedness here.
    pub note: String,
    pub window: Window,
    pub certificate: Certificate,
}

impl ClassOutcome {
    pub fn exactness(&self) -> Exactness {
        certificate_exactness(&self.certificate)
    }
}

/// Whether an outcome's evidence is exact or merely windowed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exactness {
    Exact,
    Windowed,
    None,
}

fn certificate_exactness(cert: &Certificate) -> Exactness {
    match cert {
        Certificate::Residue { .. } | Certificate::FiniteList { .. } => Exactness::Exact,
        Certificate::Growth { .. } => Exactness::Windowed,
        Certificate::Inconclusive { .. } => Exactness::None,
        Certificate::TranslateWitness { inner, .. } | Certificate::TupleWitness { inner, .. } => {
            certificate_exactness(inner)
        }
        Certificate::TranslateSurvey { entries, .. } => entries
            .iter()
            .map(|e| certificate_exactness(&e.cert))
            .fold(Exactness::Exact, combine_exactness),
        Certificate::TupleSurvey { exact_only, .. } => {
            if *exact_only {
                Exactness::Exact
            } else {
                Exactness::Windowed
            }
        }
        Certificate::CountScan { .. } => Exactness::Windowed,
        Certificate::Chain { levels, .. } => levels
            .iter()
            .map(certificate_exactness)
            .fold(Exactness::Exact, combine_exactness),
        Certificate::ChainSearch { .. } => Exactness::Windowed,
        Certificate::ThickSurvey { exact, .. } | Certificate::Cover { exact, .. } => {
            if *exact {
                Exactness::Exact
            } else {
                Exactness::Windowed
            }
        }
        Certificate::PrethickSurvey { per_radius, .. } => per_radius
            .iter()
            .map(|(_, c)| certificate_exactness(c))
            .fold(Exactness::Exact, combine_exactness),
        Certificate::SmallRoutes {
            not_prethick,
            complement_large,
            ..
        } => complement_large
            .iter()
            .map(|(_, c)| certificate_exactness(c))
            .chain([certificate_exactness(not_prethick)])
            .fold(Exactness::Exact, combine_exactness),
        Certificate::VacuouslyScattered { inner } => certificate_exactness(inner),
        _ => Exactness::Windowed,
    }
}

fn combine_exactness(a: Exactness, b: Exactness) -> Exactness {
    match (a, b) {
        (Exactness::Exact, Exactness::Exact) => Exactness::Exact,
        (Exactness::None, _) | (_, Exactness::None) => Exactness::None,
        _ => Exactness::Windowed,
    }
}

/// Shared evaluation context for one classification run.
pub struct EvalCtx {
    eval: Evaluator,
    window: Window,
}

impl EvalCtx {
    pub fn new(group: Group, window: Window, budget: u64) -> Result<Self> {
        window.validate()?;
        Ok(EvalCtx {
            eval: Evaluator::new(group, budget),
            window,
        })
    }

    pub fn eval(&self) -> &Evaluator {
        &self.eval
    }

    pub fn group(&self) -> &Group {
        self.eval.group()
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    /// Same context with a different translate-search radius.
    pub fn with_radius(&self, r: u32) -> EvalCtx {
        EvalCtx {
            eval: Evaluator::new(self.eval.group().clone(), self.eval.budget()),
            window: Window { r, ..self.window },
        }
    }

    pub fn ball(&self, r: u32) -> Result<Vec<GroupElem>> {
        Ok(self.group().ball(r, self.eval.budget())?.elements)
    }

    /// The intersection of left translates x·A over `xs`.
    pub fn translate_intersection(&self, xs: &[GroupElem], expr: &SubsetExpr) -> Result<SubsetExpr> {
        let parts: Vec<SubsetExpr> = xs
            .iter()
            .map(|x| crate::sets::translate(self.group(), expr, x, crate::sets::Side::Left))
            .collect::<Result<_>>()?;
        crate::sets::intersect_all(self.group(), &parts)
    }

    /// The set gA ∩ A.
    pub fn shift_meet(&self, g: &GroupElem, expr: &SubsetExpr) -> Result<SubsetExpr> {
        let shifted = crate::sets::translate(self.group(), expr, g, crate::sets::Side::Left)?;
        crate::sets::intersect_all(self.group(), &[shifted, expr.clone()])
    }

    /// The fattened set F·A for F = ball(r).
    pub fn fatten(&self, r: u32, expr: &SubsetExpr) -> Result<SubsetExpr> {
        let ball = self.ball(r)?;
        let mut acc: Option<SubsetExpr> = None;
        for f in &ball {
            let t = crate::sets::translate(self.group(), expr, f, crate::sets::Side::Left)?;
            acc = Some(match acc {
                None => t,
                Some(prev) => crate::sets::union2(self.group(), &prev, &t)?,
            });
        }
        acc.ok_or_else(|| Error::usage("empty ball"))
    }

    pub fn format(&self, e: &GroupElem) -> String {
        self.group().format(e)
    }

    pub fn parse(&self, text: &str) -> Result<GroupElem> {
        self.group().parse(text)
    }
}

/// One strategy of the decision suite.
pub trait Classifier: Send + Sync {
    fn name(&self) -> &'static str;

    fn run(&self, ctx: &EvalCtx, expr: &SubsetExpr) -> Result<ClassOutcome>;

    /// Re-verify an outcome's certificate against the expression. Witness
    /// certificates replay by direct membership checks; exhaustive
    /// certificates replay by deterministic recomputation.
    fn replay(&self, ctx: &EvalCtx, expr: &SubsetExpr, outcome: &ClassOutcome) -> Result<()>;
}

/// Runtime parameters for classifiers that take arguments.
#[derive(Clone, Copy, Debug)]
pub struct StrategyParams {
    /// Largest n probed by the thinness-level search.
    pub nmax: u32,
    /// n used by the direct n-thinness check.
    pub nthin: u32,
}

impl Default for StrategyParams {
    fn default() -> Self {
        StrategyParams { nmax: 3, nthin: 1 }
    }
}

/// All registered strategy names, in battery order.
pub const STRATEGY_NAMES: [&str; 10] = [
    "thin",
    "thinness-level",
    "n-thin-direct",
    "sparse",
    "thick",
    "large",
    "prethick",
    "small",
    "disparse-proxy",
    "asymptotically-scattered",
];

/// Look up one strategy by name.
pub fn strategy(name: &str, params: &StrategyParams) -> Option<Box<dyn Classifier>> {
    match name {
        "thin" => Some(Box::new(IsThin)),
        "thinness-level" => Some(Box::new(ThinnessLevel { nmax: params.nmax })),
        "n-thin-direct" => Some(Box::new(NThinDirect { n: params.nthin })),
        "sparse" => Some(Box::new(IsSparse)),
        "thick" => Some(Box::new(IsThick)),
        "large" => Some(Box::new(IsLarge)),
        "prethick" => Some(Box::new(IsPrethick)),
        "small" => Some(Box::new(IsSmall)),
        "disparse-proxy" => Some(Box::new(DisparseProxy)),
        "asymptotically-scattered" => Some(Box::new(AsymptoticallyScattered)),
        _ => None,
    }
}

/// The default battery: every strategy except the n-thin cross-check,
/// which exists to validate thinness-level and is selected explicitly.
pub fn battery(params: &StrategyParams) -> Vec<Box<dyn Classifier>> {
    STRATEGY_NAMES
        .iter()
        .filter(|&&n| n != "n-thin-direct")
        .map(|n| strategy(n, params).expect("registered"))
        .collect()
}

/// Replay an outcome by dispatching on its class.
pub fn replay_outcome(
    ctx: &EvalCtx,
    expr: &SubsetExpr,
    name: &str,
    params: &StrategyParams,
    outcome: &ClassOutcome,
) -> Result<()> {
    let cls = strategy(name, params)
        .ok_or_else(|| Error::usage(format!("unknown strategy {name:?}")))?;
    cls.replay(ctx, expr, outcome)
}

pub(crate) fn outcome(
    class: ClassName,
    polarity: Polarity,
    note: impl Into<String>,
    window: &Window,
    certificate: Certificate,
) -> ClassOutcome {
    ClassOutcome {
        class,
        polarity,
        note: note.into(),
        window: *window,
        certificate,
    }
}

#[cfg(test)]
mod tests;

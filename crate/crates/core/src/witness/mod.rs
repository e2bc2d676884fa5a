//! Growth certificates: explicit families of `N` pairwise distinct values
//! inside `KA - LA` (or `K(A.A) - L(A.A)`), each re-checkable from scratch.
//!
//! Two pipelines build them. The cube pipeline ([`theorem1_certificate`])
//! uses ratios from a greedy multiplicative cube as weights, so every weighted
//! sum expands into `±θ^γ c` terms lying in `A`. The polynomial pipeline
//! ([`theorem2_certificate`]) evaluates `0/±1` polynomials vanishing at 1 to
//! prescribed orders at one ratio `θ`, with terms `±θ^e y` in `A.A`. The
//! module also has the progression search those terms rely on, and an audit
//! of the Ruzsa–Plünnecke inequality.

mod audit;
mod block;
mod certificate;
mod progression;
mod theorem1;
mod theorem2;
mod thinning;

use serde::{Deserialize, Serialize};

pub use audit::{ruzsa_plunnecke_audit, ruzsa_plunnecke_audit_capped, AuditReport};
pub use block::{min_gap_block, min_gap_window, MinGapBlock};
pub use certificate::{
    recheck_certificate, recheck_detailed, recheck_json, set_digest, Branch, CertificateJsonError, ExpansionBound,
    GrowthCertificate, Mode, SignedTerm, SourceRef, TermTarget, CERTIFICATE_VERSION,
};
pub use progression::{progression_search, ProgressionReport, ProgressionWitness};
pub use theorem1::{theorem1_certificate, theorem1_certificate_with};
pub use theorem2::{theorem2_certificate, theorem2_certificate_with};
pub use thinning::{Thinning, ThinningRecord, ThinningRule};

use crate::distinct::DEFAULT_ENUMERATION_BUDGET;
use crate::setcore::Caps;

/// Pipeline stage names, used in errors and experiment rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Input,
    Block,
    Family,
    Cube,
    Progression,
    Spread,
    Weights,
    Thinning,
    Separation,
    Partition,
    Enumeration,
    Expansion,
    Membership,
    CrossCheck,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Input => "input",
            Stage::Block => "block",
            Stage::Family => "family",
            Stage::Cube => "cube",
            Stage::Progression => "progression",
            Stage::Spread => "spread",
            Stage::Weights => "weights",
            Stage::Thinning => "thinning",
            Stage::Separation => "separation",
            Stage::Partition => "partition",
            Stage::Enumeration => "enumeration",
            Stage::Expansion => "expansion",
            Stage::Membership => "membership",
            Stage::CrossCheck => "cross-check",
        }
    }
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WitnessError {
    #[error("stage {stage} failed: {reason}")]
    Stage { stage: Stage, reason: String },
}

impl WitnessError {
    pub(crate) fn at(stage: Stage, reason: impl std::fmt::Display) -> Self {
        WitnessError::Stage { stage, reason: reason.to_string() }
    }

    pub fn stage(&self) -> Stage {
        match self {
            WitnessError::Stage { stage, .. } => *stage,
        }
    }

    pub fn reason(&self) -> &str {
        match self {
            WitnessError::Stage { reason, .. } => reason,
        }
    }
}

/// Tunables shared by both pipelines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineOptions {
    pub caps: Caps,
    /// Limit on the number of weighted sums enumerated.
    pub enumeration_budget: u64,
    /// Limit on witnesses returned by the progression search.
    pub progression_budget: usize,
    pub thinning: Thinning,
    /// `|KA - LA|` is computed for the cross-check only below this size.
    pub cross_check_cap: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            caps: Caps::default(),
            enumeration_budget: DEFAULT_ENUMERATION_BUDGET,
            progression_budget: 10_000,
            thinning: Thinning::default(),
            cross_check_cap: 1_000_000,
        }
    }
}

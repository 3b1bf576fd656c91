//! Allowable paths: the validity check, an exhaustive maximum-channel
//! search, and a direct three-channel construction.

mod allowable;
mod cases;
mod search;

use thiserror::Error;

pub use allowable::{is_allowable, validate_path, AllowablePath, Arc, Violation};
pub use cases::{case_label, construct_case_path, CaseLabel, CasePath, IndexKind, RunBranch};
pub use search::{default_budget, max_channels, search_max_channels, SearchOutcome, DEFAULT_NODE_BUDGET};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("path references missing {kind} {id}")]
    DanglingReference { kind: &'static str, id: usize },
    #[error("path is not allowable: {0}")]
    NotAllowable(Violation),
    #[error("search budget exhausted after {nodes} nodes")]
    BudgetExhausted { nodes: u64 },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("case construction failed: {0}")]
    ConstructionFailed(String),
}

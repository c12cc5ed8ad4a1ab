//! Which orders can a set of Gozinta boxes be nested in?
//!
//! [`search`] decides a [`PermSpec`] exactly by walking every discrete case
//! (expandable side, closed/expanded state and sorted position of every
//! expanded side) and solving each as a strict linear system. Subtrees are
//! pruned as soon as their partial system is infeasible, which is sound
//! because adding constraints never restores feasibility. [`brute`] is an
//! independent bounded integer search used to cross-check the engine.

pub mod brute;
pub mod cases;
pub mod normal;
pub mod search;

use thiserror::Error;

use crate::feasibility::FeasibilityError;
use crate::model::ModelError;
use crate::nesting::{verify_trick, TrickInstance};
use crate::perm::{label_for, Permutation};

pub use brute::{brute_force_search, brute_force_witnesses, BruteError};
pub use cases::{case_count, case_to_system, enumerate_cases, CaseAssignment, CaseState, CaseSystem};
pub use normal::observation_normal_form;
pub use search::{
    achievable, jointly_achievable, search, verify_impossibility, ImpossibilityReport, SearchReport,
    SearchResult,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AchievabilityError {
    #[error("invalid permutation spec: {0}")]
    InvalidSpec(String),
    #[error("normalization only applies to the natural/reverse pair")]
    NormalizeUnsupported,
    #[error("inconsistent case: {0}")]
    InconsistentCase(String),
    #[error("instance does not verify: {0}")]
    NotVerified(String),
    #[error("solver produced a witness that fails verification: {0}")]
    WitnessRejected(String),
    #[error(transparent)]
    Solver(#[from] FeasibilityError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A box count, a dimension and the orders to realize jointly. The natural
/// order is always included and always comes first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PermSpec {
    boxes: usize,
    dim: usize,
    arrangements: Vec<Permutation>,
}

impl PermSpec {
    pub fn new(
        boxes: usize,
        dim: usize,
        perms: impl IntoIterator<Item = Permutation>,
    ) -> Result<Self, AchievabilityError> {
        if boxes == 0 {
            return Err(AchievabilityError::InvalidSpec("need at least one box".into()));
        }
        if dim < 2 {
            return Err(AchievabilityError::InvalidSpec(format!(
                "dimension {dim} is below 2"
            )));
        }
        let mut others: Vec<Permutation> = Vec::new();
        for p in perms {
            if p.len() != boxes {
                return Err(AchievabilityError::InvalidSpec(format!(
                    "permutation {p} is not on {boxes} elements"
                )));
            }
            if !p.is_identity() {
                others.push(p);
            }
        }
        others.sort();
        others.dedup();
        let mut arrangements = vec![Permutation::identity(boxes)];
        arrangements.extend(others);
        Ok(PermSpec {
            boxes,
            dim,
            arrangements,
        })
    }

    /// Natural order plus its reversal.
    pub fn natural_reverse(boxes: usize, dim: usize) -> Result<Self, AchievabilityError> {
        Self::new(boxes, dim, [Permutation::reverse(boxes)])
    }

    pub fn boxes(&self) -> usize {
        self.boxes
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Identity first, then the other permutations in lexicographic order.
    pub fn arrangements(&self) -> &[Permutation] {
        &self.arrangements
    }

    pub fn is_natural_reverse(&self) -> bool {
        self.boxes >= 2
            && self.arrangements.len() == 2
            && self.arrangements[1] == Permutation::reverse(self.boxes)
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.boxes).map(label_for).collect()
    }

    /// The same problem with boxes renamed by `sigma`: box `i` becomes box
    /// `σ(i)`, so each order `p` becomes `σ∘p∘σ⁻¹` (the identity is fixed).
    pub fn relabeled(&self, sigma: &Permutation) -> Result<Self, AchievabilityError> {
        let inv = sigma.inverse();
        Self::new(
            self.boxes,
            self.dim,
            self.arrangements.iter().map(|p| sigma.compose(p).compose(&inv)),
        )
    }
}

/// Closed/expanded pattern of each arrangement, innermost first, e.g.
/// `["CCEE", "CCEE"]`. The instance must verify under its own bound flag.
pub fn pattern_report(witness: &TrickInstance) -> Result<Vec<String>, AchievabilityError> {
    let report = verify_trick(witness);
    if !report.ok() {
        let first = report.violations[0].to_string();
        return Err(AchievabilityError::NotVerified(first));
    }
    Ok(witness
        .arrangements
        .iter()
        .map(|arr| {
            arr.order
                .iter()
                .map(|l| if arr.presentation[l].is_closed() { 'C' } else { 'E' })
                .collect()
        })
        .collect())
}

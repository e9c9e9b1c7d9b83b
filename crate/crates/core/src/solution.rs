//! Verdicts and errors shared by all solvers.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Configuration, TransformationSequence};
use crate::logic::{Fragment, LogicError};

/// A yes-answer. Solvers fill in as much of the certificate as they construct.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Solution {
    pub cost: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<Configuration>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sequence: Option<TransformationSequence>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Yes(Solution),
    No,
}

impl Verdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes(_))
    }

    pub fn solution(&self) -> Option<&Solution> {
        match self {
            Verdict::Yes(s) => Some(s),
            Verdict::No => None,
        }
    }

    pub fn cost(&self) -> Option<usize> {
        self.solution().map(|s| s.cost)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("search space of {size} exceeds the limit {limit}")]
    SearchSpaceTooLarge { size: u128, limit: u64 },
    #[error("{0:?} formulas are not supported by this solver")]
    FragmentUnsupported(Fragment),
    #[error("DP table of {size} states exceeds the cap {cap}")]
    StateBudgetExceeded { size: usize, cap: usize },
    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("infeasible flow network: {0}")]
    UnbalancedIntervals(String),
    #[error(transparent)]
    Logic(#[from] LogicError),
}

/// Binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(40, 20), 137_846_528_820);
    }
}

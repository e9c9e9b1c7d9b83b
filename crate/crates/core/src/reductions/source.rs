//! Source problems of the hardness constructions and their exhaustive solvers.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::ReductionError;

/// A graph on `kappa * n` vertices; vertex `v` lies in class `v / n` and has
/// index `v % n + 1` within it. Unused vertices act as degree-0 padding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MulticoloredCliqueInstance {
    pub kappa: usize,
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl MulticoloredCliqueInstance {
    pub fn new(
        kappa: usize,
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, ReductionError> {
        let mut norm: Vec<[usize; 2]> = edges
            .into_iter()
            .map(|(a, b)| [a.min(b), a.max(b)])
            .collect();
        norm.sort_unstable();
        norm.dedup();
        let inst = MulticoloredCliqueInstance {
            kappa,
            n,
            edges: norm,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<(), ReductionError> {
        if self.kappa < 2 || self.n < 1 {
            return Err(ReductionError::InvalidSource(format!(
                "need kappa >= 2 and n >= 1, got kappa={} n={}",
                self.kappa, self.n
            )));
        }
        let total = self.kappa * self.n;
        let mut seen = BTreeSet::new();
        for &[a, b] in &self.edges {
            if a >= total || b >= total {
                return Err(ReductionError::InvalidSource(format!(
                    "edge {a}-{b} leaves the {total} vertices"
                )));
            }
            if self.class(a) == self.class(b) {
                return Err(ReductionError::InvalidSource(format!(
                    "edge {a}-{b} joins one color class"
                )));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(ReductionError::InvalidSource(format!(
                    "duplicate edge {a}-{b}"
                )));
            }
        }
        Ok(())
    }

    pub fn class(&self, v: usize) -> usize {
        v / self.n
    }

    /// One-based index of `v` within its class.
    pub fn iota(&self, v: usize) -> usize {
        v % self.n + 1
    }

    pub fn vertex(&self, class: usize, index: usize) -> usize {
        class * self.n + index - 1
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.binary_search(&[a.min(b), a.max(b)]).is_ok()
    }

    /// Edges between classes `i < j`, each oriented `(vertex in i, vertex in j)`, in input order.
    pub fn edges_between(&self, i: usize, j: usize) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .filter_map(|&[a, b]| {
                let (ca, cb) = (self.class(a), self.class(b));
                if (ca, cb) == (i, j) {
                    Some((a, b))
                } else if (ca, cb) == (j, i) {
                    Some((b, a))
                } else {
                    None
                }
            })
            .collect()
    }

    /// Unordered class pairs `(i, j)` with `i < j` in lexicographic order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.kappa).tuple_combinations().collect()
    }

    /// Whether `clique` picks one adjacent vertex per class, in class order.
    pub fn is_solution(&self, clique: &[usize]) -> bool {
        clique.len() == self.kappa
            && clique
                .iter()
                .enumerate()
                .all(|(i, &v)| v < self.kappa * self.n && self.class(v) == i)
            && clique
                .iter()
                .tuple_combinations()
                .all(|(&a, &b)| self.has_edge(a, b))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self, ReductionError> {
        let inst: Self =
            serde_json::from_str(text).map_err(|e| ReductionError::InvalidSource(e.to_string()))?;
        inst.validate()?;
        Ok(inst)
    }
}

/// Exhaustive search over one vertex per class; the first clique in lexicographic order.
pub fn solve_mcc_bruteforce(mcc: &MulticoloredCliqueInstance) -> Option<Vec<usize>> {
    (0..mcc.kappa)
        .map(|i| (1..=mcc.n).map(move |x| mcc.vertex(i, x)))
        .multi_cartesian_product()
        .find(|choice| mcc.is_solution(choice))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SupplyArc {
    pub from: usize,
    pub to: usize,
    /// Supply pairs `(to from, to to)`.
    pub pairs: Vec<(u64, u64)>,
}

/// Arc supply: choose one pair per arc so every vertex receives exactly its demand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcSupplyInstance {
    pub demands: Vec<u64>,
    pub arcs: Vec<SupplyArc>,
}

impl ArcSupplyInstance {
    pub fn validate(&self) -> Result<(), ReductionError> {
        let n = self.demands.len();
        let mut seen = BTreeSet::new();
        for (i, a) in self.arcs.iter().enumerate() {
            if a.from >= n || a.to >= n {
                return Err(ReductionError::InvalidSource(format!(
                    "arc {i} leaves the {n} vertices"
                )));
            }
            if a.from == a.to {
                return Err(ReductionError::InvalidSource(format!("arc {i} is a loop")));
            }
            if !seen.insert((a.from.min(a.to), a.from.max(a.to))) {
                return Err(ReductionError::InvalidSource(format!(
                    "arc {i} doubles an earlier arc"
                )));
            }
            if a.pairs.is_empty() {
                return Err(ReductionError::InvalidSource(format!(
                    "arc {i} has no supply pairs"
                )));
            }
        }
        Ok(())
    }

    /// Gadgets encode each supply value by at least one node.
    pub fn require_positive_supplies(&self) -> Result<(), ReductionError> {
        for (i, a) in self.arcs.iter().enumerate() {
            if a.pairs.iter().any(|&(x, y)| x == 0 || y == 0) {
                return Err(ReductionError::InvalidSource(format!(
                    "arc {i} has a zero supply value, which the gadgets cannot encode"
                )));
            }
        }
        Ok(())
    }

    pub fn total(&self) -> u64 {
        self.demands.iter().sum::<u64>()
            + self
                .arcs
                .iter()
                .flat_map(|a| a.pairs.iter().map(|&(x, y)| x + y))
                .sum::<u64>()
    }

    pub fn degree(&self, u: usize) -> usize {
        self.arcs
            .iter()
            .filter(|a| a.from == u || a.to == u)
            .count()
    }

    /// Whether choosing pair `choice[i]` on arc `i` meets every demand exactly.
    pub fn is_solution(&self, choice: &[usize]) -> bool {
        if choice.len() != self.arcs.len()
            || choice
                .iter()
                .zip(&self.arcs)
                .any(|(&c, a)| c >= a.pairs.len())
        {
            return false;
        }
        let mut got = vec![0u64; self.demands.len()];
        for (a, &c) in self.arcs.iter().zip(choice) {
            let (x, y) = a.pairs[c];
            got[a.from] += x;
            got[a.to] += y;
        }
        got == self.demands
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self, ReductionError> {
        let inst: Self =
            serde_json::from_str(text).map_err(|e| ReductionError::InvalidSource(e.to_string()))?;
        inst.validate()?;
        Ok(inst)
    }
}

/// Exhaustive search over pair choices; the first solution in lexicographic order.
pub fn solve_pas_bruteforce(pas: &ArcSupplyInstance) -> Option<Vec<usize>> {
    pas.arcs
        .iter()
        .map(|a| 0..a.pairs.len())
        .multi_cartesian_product()
        .find(|c| pas.is_solution(c))
}

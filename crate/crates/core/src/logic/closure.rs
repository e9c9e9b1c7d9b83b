//! Budget closure: the formula `psi(X)` stating that some set reachable from
//! `X` within `b` single-token moves satisfies `phi`.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use super::ast::{Atom, Formula, Quantifier, Sort};
use super::eval::ModelChecker;
use super::LogicError;
use crate::graph::{ColoredGraph, Configuration};

/// How a single token may move in one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MoveModel {
    /// Along an edge to an unoccupied vertex.
    Slide,
    /// To any unoccupied vertex.
    Jump,
}

/// Largest budget for which [`ClosureChecker::auto`] evaluates the expanded formula.
pub const EXPANDED_MAX_BUDGET: usize = 3;

/// Builds `psi(X) = exists X1 ... Xb (Step(X,X1) & ... & Step(X{b-1},Xb) & phi(Xb))`
/// with the existentials nested so that each step sees only its two sets.
/// Consecutive sets may be equal, so fewer than `b` moves are also covered.
pub fn budget_closure(f: &Formula, b: i64, model: MoveModel) -> Result<Formula, LogicError> {
    if b < 0 {
        return Err(LogicError::NegativeBudget(b));
    }
    let b = b as usize;
    let taken = f.identifiers();
    let fresh = |stem: &str| -> String {
        (0..)
            .map(|i| format!("{stem}{i}"))
            .find(|s| !taken.contains(s))
            .expect("unbounded supply")
    };
    let sets: Vec<String> = (1..=b).map(|i| fresh(&format!("Xb{i}_"))).collect();
    let vars = [fresh("zs"), fresh("us"), fresh("vs"), fresh("ws")];
    let mut body = match sets.last() {
        Some(last) => f.substitute_free_set(last),
        None => f.clone(),
    };
    for i in (0..b).rev() {
        let prev = if i == 0 {
            None
        } else {
            Some(sets[i - 1].as_str())
        };
        let step = step_formula(prev, &sets[i], &vars, model);
        body = Formula::quant(
            Quantifier::Exists,
            Sort::VertexSet,
            &sets[i],
            Formula::and(step, body),
        );
    }
    Ok(body)
}

fn member(set: Option<&str>, v: &str) -> Formula {
    Formula::Atom(match set {
        None => Atom::FreeSet(v.to_string()),
        Some(s) => Atom::SetMember(s.to_string(), v.to_string()),
    })
}

/// `A = B`, or `B` arises from `A` by moving one token from `u` to `v`.
fn step_formula(a: Option<&str>, b: &str, vars: &[String; 4], model: MoveModel) -> Formula {
    let [z, u, v, w] = vars;
    let b = Some(b);
    let same = |x: &str| Formula::iff(member(a, x), member(b, x));
    let eq = |x: &str, y: &str| Formula::Atom(Atom::Eq(x.into(), y.into()));
    let equal = Formula::quant(Quantifier::Forall, Sort::Vertex, z, same(z));
    let rest_same = Formula::quant(
        Quantifier::Forall,
        Sort::Vertex,
        w,
        Formula::implies(
            Formula::and(Formula::not(eq(w, u)), Formula::not(eq(w, v))),
            same(w),
        ),
    );
    let mut target = vec![Formula::not(member(a, v)), member(b, v), rest_same];
    if model == MoveModel::Slide {
        target.insert(0, Formula::Atom(Atom::Edge(u.clone(), v.clone())));
    }
    let moved = Formula::quant(
        Quantifier::Exists,
        Sort::Vertex,
        u,
        Formula::and_all([
            member(a, u),
            Formula::not(member(b, u)),
            Formula::quant(
                Quantifier::Exists,
                Sort::Vertex,
                v,
                Formula::and_all(target),
            ),
        ]),
    );
    Formula::or(equal, moved)
}

/// All configurations reachable from `start` within `budget` moves, by distance.
pub fn reachable_layers(
    g: &ColoredGraph,
    start: &Configuration,
    budget: usize,
    model: MoveModel,
) -> Vec<Vec<Configuration>> {
    let mut seen: HashSet<Configuration> = HashSet::from([start.clone()]);
    let mut layers = vec![vec![start.clone()]];
    for _ in 0..budget {
        let mut next = Vec::new();
        for c in layers.last().expect("nonempty") {
            for succ in successors(g, c, model) {
                if seen.insert(succ.clone()) {
                    next.push(succ);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort();
        layers.push(next);
    }
    layers
}

/// Configurations one strict move away, ascending.
pub fn successors(g: &ColoredGraph, c: &Configuration, model: MoveModel) -> Vec<Configuration> {
    let occupied: BTreeSet<usize> = c.iter().collect();
    let mut out = Vec::new();
    for u in c.iter() {
        let targets: Vec<usize> = match model {
            MoveModel::Slide => g.neighbors(u).to_vec(),
            MoveModel::Jump => (0..g.n()).collect(),
        };
        for v in targets {
            if !occupied.contains(&v) {
                out.push(c.iter().map(|w| if w == u { v } else { w }).collect());
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

enum Mode<'g> {
    Expanded(ModelChecker<'g>),
    Lazy(ModelChecker<'g>),
}

/// Decides `G |= psi(S)` for the budget closure `psi` of a formula.
pub struct ClosureChecker<'g> {
    g: &'g ColoredGraph,
    budget: usize,
    model: MoveModel,
    mode: Mode<'g>,
}

impl<'g> ClosureChecker<'g> {
    /// Expanded formula for budgets up to [`EXPANDED_MAX_BUDGET`], lazy search above.
    pub fn auto(
        g: &'g ColoredGraph,
        f: &Formula,
        b: i64,
        model: MoveModel,
    ) -> Result<Self, LogicError> {
        if b >= 0 && b as usize <= EXPANDED_MAX_BUDGET {
            Self::expanded(g, f, b, model)
        } else {
            Self::lazy(g, f, b, model)
        }
    }

    /// Model checks the literally expanded closure formula.
    pub fn expanded(
        g: &'g ColoredGraph,
        f: &Formula,
        b: i64,
        model: MoveModel,
    ) -> Result<Self, LogicError> {
        let psi = budget_closure(f, b, model)?;
        let mc = ModelChecker::new(g, &psi, &[])?;
        Ok(ClosureChecker {
            g,
            budget: b as usize,
            model,
            mode: Mode::Expanded(mc),
        })
    }

    /// Explores successor configurations and checks `phi` on each.
    pub fn lazy(
        g: &'g ColoredGraph,
        f: &Formula,
        b: i64,
        model: MoveModel,
    ) -> Result<Self, LogicError> {
        if b < 0 {
            return Err(LogicError::NegativeBudget(b));
        }
        let mc = ModelChecker::new(g, f, &[])?;
        Ok(ClosureChecker {
            g,
            budget: b as usize,
            model,
            mode: Mode::Lazy(mc),
        })
    }

    pub fn is_lazy(&self) -> bool {
        matches!(self.mode, Mode::Lazy(_))
    }

    pub fn check(&mut self, s: &Configuration) -> bool {
        match &mut self.mode {
            Mode::Expanded(mc) => mc.check(s),
            Mode::Lazy(_) => self.witness(s).is_some(),
        }
    }

    /// A nearest satisfying configuration and its move distance (lazy mode
    /// computes it directly; expanded mode only supports [`Self::check`]).
    pub fn witness(&mut self, s: &Configuration) -> Option<(Configuration, usize)> {
        let mc = match &mut self.mode {
            Mode::Lazy(mc) => mc,
            Mode::Expanded(_) => panic!("witness requires the lazy mode"),
        };
        for (d, layer) in reachable_layers(self.g, s, self.budget, self.model)
            .into_iter()
            .enumerate()
        {
            if let Some(c) = layer.into_iter().find(|c| mc.check(c)) {
                return Some((c, d));
            }
        }
        None
    }
}

//! Exact reference solvers: subset enumeration in the discovery model and
//! breadth-first search in the strict sliding model.

use std::collections::HashMap;

use itertools::Itertools;
use rayon::prelude::*;

use crate::assignment::min_cost_assignment;
use crate::graph::{relocation_plan, route_pairs, Configuration, TransformationSequence};
use crate::instance::DiscoveryInstance;
use crate::logic::closure::successors;
use crate::logic::{ModelChecker, MoveModel};
use crate::solution::{binomial, Solution, SolveError, Verdict};

pub const DEFAULT_LIMIT: u64 = 5_000_000;

/// Caps on enumerated subsets and visited configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub subsets: u64,
    pub nodes: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            subsets: DEFAULT_LIMIT,
            nodes: DEFAULT_LIMIT,
        }
    }
}

impl Limits {
    pub fn uniform(limit: u64) -> Self {
        Limits {
            subsets: limit,
            nodes: limit,
        }
    }
}

/// Cheapest satisfying target within `cap` slides, ties broken by the smallest vertex set.
fn best_target(
    inst: &DiscoveryInstance,
    cap: Option<usize>,
    limits: &Limits,
) -> Result<Option<(usize, Configuration)>, SolveError> {
    let g = &inst.graph;
    let (n, k) = (g.n(), inst.k());
    let size = binomial(n, k);
    if size > limits.subsets as u128 {
        return Err(SolveError::SearchSpaceTooLarge {
            size,
            limit: limits.subsets,
        });
    }
    ModelChecker::new(g, &inst.formula, &[])?;
    let dist: Vec<Vec<Option<usize>>> = inst.start.iter().map(|u| g.bfs_distances(u)).collect();
    let unreachable = (n as i64 + 1) * (k as i64 + 1);
    let cost_of = |t: &[usize]| -> Option<usize> {
        let m: Vec<Vec<i64>> = dist
            .iter()
            .map(|d| {
                t.iter()
                    .map(|&v| d[v].map_or(unreachable, |x| x as i64))
                    .collect()
            })
            .collect();
        let (c, _) = min_cost_assignment(&m);
        (c < unreachable).then_some(c as usize)
    };
    let visit = |mc: &mut ModelChecker, t: Vec<usize>| -> Option<(usize, Configuration)> {
        let c = cost_of(&t)?;
        if cap.is_some_and(|b| c > b) {
            return None;
        }
        let t = Configuration::new(t);
        mc.check(&t).then_some((c, t))
    };
    let new_checker = || ModelChecker::new(g, &inst.formula, &[]).expect("compiled above");
    if k == 0 {
        return Ok(visit(&mut new_checker(), Vec::new()));
    }
    // Split on the smallest vertex; the (cost, set) minimum is independent of scheduling.
    Ok((0..n)
        .into_par_iter()
        .map_init(new_checker, |mc, first| {
            (first + 1..n)
                .combinations(k - 1)
                .filter_map(|rest| {
                    let mut t = Vec::with_capacity(k);
                    t.push(first);
                    t.extend(rest);
                    visit(mc, t)
                })
                .min()
        })
        .flatten()
        .min())
}

/// Enumerates all `k`-subsets `T` with `phi(T)` and returns a cheapest one within budget.
pub fn solve_enumerate(inst: &DiscoveryInstance, limits: &Limits) -> Result<Verdict, SolveError> {
    Ok(match best_target(inst, Some(inst.budget), limits)? {
        None => Verdict::No,
        Some((cost, target)) => {
            let plan = relocation_plan(&inst.graph, &inst.start, &target)
                .expect("sizes match")
                .expect("cost was finite");
            let sequence = route_pairs(&inst.graph, &plan.pairs);
            debug_assert_eq!(sequence.len(), cost);
            Verdict::Yes(Solution {
                cost,
                target: Some(target),
                sequence: Some(sequence),
            })
        }
    })
}

/// Smallest budget making the instance a yes-instance; `None` when unreachable at any budget.
pub fn min_budget(inst: &DiscoveryInstance, limits: &Limits) -> Result<Option<usize>, SolveError> {
    Ok(best_target(inst, None, limits)?.map(|(c, _)| c))
}

/// Layered BFS in the strict model; returns the first layer holding a satisfying
/// configuration, its smallest such configuration and a path to it.
fn bfs(
    inst: &DiscoveryInstance,
    cap: Option<usize>,
    limits: &Limits,
) -> Result<Option<(usize, Configuration, TransformationSequence)>, SolveError> {
    let g = &inst.graph;
    let mut mc = ModelChecker::new(g, &inst.formula, &[])?;
    let mut parent: HashMap<Configuration, Option<(Configuration, usize, usize)>> = HashMap::new();
    parent.insert(inst.start.clone(), None);
    let mut layer = vec![inst.start.clone()];
    let mut depth = 0;
    loop {
        if let Some(t) = layer.iter().find(|c| mc.check(c)) {
            let mut slides = Vec::new();
            let mut cur = t.clone();
            while let Some((prev, from, to)) = parent[&cur].clone() {
                slides.push((from, to));
                cur = prev;
            }
            slides.reverse();
            return Ok(Some((
                depth,
                t.clone(),
                TransformationSequence::new(slides),
            )));
        }
        if cap.is_some_and(|b| depth >= b) {
            return Ok(None);
        }
        let mut next = Vec::new();
        for c in &layer {
            for s in successors(g, c, MoveModel::Slide) {
                if !parent.contains_key(&s) {
                    let from = c.iter().find(|&v| !s.contains(v)).expect("one token moved");
                    let to = s.iter().find(|&v| !c.contains(v)).expect("one token moved");
                    parent.insert(s.clone(), Some((c.clone(), from, to)));
                    next.push(s);
                }
            }
            if parent.len() as u64 > limits.nodes {
                return Err(SolveError::SearchSpaceTooLarge {
                    size: parent.len() as u128,
                    limit: limits.nodes,
                });
            }
        }
        if next.is_empty() {
            return Ok(None);
        }
        next.sort();
        layer = next;
        depth += 1;
    }
}

/// Strict sliding BFS up to the budget.
pub fn solve_bfs(inst: &DiscoveryInstance, limits: &Limits) -> Result<Verdict, SolveError> {
    Ok(match bfs(inst, Some(inst.budget), limits)? {
        None => Verdict::No,
        Some((cost, target, sequence)) => Verdict::Yes(Solution {
            cost,
            target: Some(target),
            sequence: Some(sequence),
        }),
    })
}

/// Strict sliding distance to the nearest satisfying configuration.
pub fn min_budget_bfs(
    inst: &DiscoveryInstance,
    limits: &Limits,
) -> Result<Option<usize>, SolveError> {
    Ok(bfs(inst, None, limits)?.map(|(c, _, _)| c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{apply_sequence, ColoredGraph};
    use crate::logic::parse;

    fn p3_instance(b: usize) -> DiscoveryInstance {
        let g = ColoredGraph::path(3).with_color("C1", vec![2]).unwrap();
        let f = parse("exists x. (X(x) & C1(x))").unwrap();
        DiscoveryInstance::new(g, Configuration::new([0]), b, f).unwrap()
    }

    #[test]
    fn p3_needs_two_slides() {
        let lim = Limits::default();
        assert_eq!(solve_enumerate(&p3_instance(1), &lim).unwrap(), Verdict::No);
        let v = solve_enumerate(&p3_instance(2), &lim).unwrap();
        let sol = v.solution().unwrap();
        assert_eq!(
            (sol.cost, sol.target.clone()),
            (2, Some(Configuration::new([2])))
        );
        let inst = p3_instance(2);
        assert_eq!(
            apply_sequence(&inst.graph, &inst.start, sol.sequence.as_ref().unwrap()).unwrap(),
            Configuration::new([2])
        );
        assert_eq!(solve_bfs(&p3_instance(2), &lim).unwrap().cost(), Some(2));
        assert_eq!(min_budget(&p3_instance(0), &lim).unwrap(), Some(2));
        assert_eq!(min_budget_bfs(&p3_instance(0), &lim).unwrap(), Some(2));
    }

    #[test]
    fn true_sentence_keeps_start() {
        let g = ColoredGraph::path(4);
        let inst = DiscoveryInstance::new(g, Configuration::new([1, 3]), 0, parse("true").unwrap())
            .unwrap();
        let v = solve_enumerate(&inst, &Limits::default()).unwrap();
        assert_eq!(
            v.solution().unwrap().target,
            Some(Configuration::new([1, 3]))
        );
    }

    #[test]
    fn unsatisfiable_is_unreachable() {
        let g = ColoredGraph::path(4);
        let inst =
            DiscoveryInstance::new(g, Configuration::new([0]), 9, parse("false").unwrap()).unwrap();
        assert_eq!(min_budget(&inst, &Limits::default()).unwrap(), None);
        assert_eq!(solve_bfs(&inst, &Limits::default()).unwrap(), Verdict::No);
    }

    #[test]
    fn limit_fails_loudly() {
        let g = ColoredGraph::path(30);
        let inst = DiscoveryInstance::new(g, Configuration::new(0..10), 0, parse("true").unwrap())
            .unwrap();
        assert!(matches!(
            solve_enumerate(&inst, &Limits::uniform(1000)),
            Err(SolveError::SearchSpaceTooLarge { .. })
        ));
    }

    #[test]
    fn empty_configuration() {
        let g = ColoredGraph::path(2);
        let f = parse("~exists x. X(x)").unwrap();
        let inst = DiscoveryInstance::new(g, Configuration::empty(), 0, f).unwrap();
        assert!(solve_enumerate(&inst, &Limits::default()).unwrap().is_yes());
        assert!(solve_bfs(&inst, &Limits::default()).unwrap().is_yes());
    }
}

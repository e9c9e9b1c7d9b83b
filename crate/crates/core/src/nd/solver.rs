//! Shape guessing, flow feasibility, representative construction and the final model check.

use crate::graph::{Configuration, TransformationSequence};
use crate::instance::DiscoveryInstance;
use crate::logic::{stats, Fragment, ModelChecker};
use crate::solution::{Solution, SolveError, Verdict};

use super::flow::{min_cost_flow, unit_paths, FlowNetwork, FlowSolution};
use super::partition::{twin_partition, VertexTypePartition};
use super::shape::{build_network, enumerate_shapes, BandPolicy, Shape};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct NdOptions {
    pub policy: BandPolicy,
}

/// A shape together with its cheapest flow.
#[derive(Debug, Clone)]
pub struct ShapeCandidate {
    pub shape: Shape,
    pub network: FlowNetwork,
    pub flow: FlowSolution,
}

/// Shape threshold `q(phi)`, capped at `n + 1` where larger values change nothing.
pub fn shape_threshold(inst: &DiscoveryInstance) -> Result<usize, SolveError> {
    let st = stats(&inst.formula);
    if st.fragment == Fragment::MSO2 {
        return Err(SolveError::FragmentUnsupported(Fragment::MSO2));
    }
    Ok(st.q_phi().min(inst.graph.n() as u64 + 1) as usize)
}

/// All admissible shapes with a feasible flow, cheapest first, ties by shape order.
pub fn feasible_shapes(
    inst: &DiscoveryInstance,
    p: &VertexTypePartition,
    q: usize,
    opts: &NdOptions,
) -> Result<Vec<ShapeCandidate>, SolveError> {
    let start = p.counts(inst.start.iter());
    let mut out = Vec::new();
    for shape in enumerate_shapes(p, q, inst.k()) {
        let network = build_network(p, &start, &shape, q, opts.policy);
        // A shape whose intervals cannot sum to zero is simply infeasible here.
        match min_cost_flow(&network) {
            Ok(Some(flow)) => out.push(ShapeCandidate {
                shape,
                network,
                flow,
            }),
            Ok(None) | Err(SolveError::UnbalancedIntervals(_)) => {}
            Err(e) => return Err(e),
        }
    }
    out.sort_by(|a, b| (a.flow.cost, &a.shape).cmp(&(b.flow.cost, &b.shape)));
    Ok(out)
}

/// Target of the candidate that keeps as many start tokens as possible, plus the
/// slides realizing the flow with one slide per unit of flow cost.
pub fn realize(
    inst: &DiscoveryInstance,
    p: &VertexTypePartition,
    cand: &ShapeCandidate,
) -> (Configuration, TransformationSequence) {
    let bal = cand.flow.balances(&cand.network);
    let mut kept = Vec::new();
    let mut leaving: Vec<Vec<usize>> = vec![Vec::new(); p.len()];
    let mut arriving: Vec<Vec<usize>> = vec![Vec::new(); p.len()];
    for (i, class) in p.classes.iter().enumerate() {
        let (occupied, free): (Vec<usize>, Vec<usize>) =
            class.iter().partition(|&&v| inst.start.contains(v));
        let target = (occupied.len() as i64 + bal[i]) as usize;
        if target <= occupied.len() {
            kept.extend(&occupied[..target]);
            leaving[i] = occupied[target..].iter().rev().copied().collect();
        } else {
            kept.extend(&occupied);
            arriving[i] = free[..target - occupied.len()]
                .iter()
                .rev()
                .copied()
                .collect();
        }
    }
    let mut seq = TransformationSequence::default();
    for path in unit_paths(&cand.network, &cand.flow) {
        let (&a, &b) = (
            path.first().expect("nonempty"),
            path.last().expect("nonempty"),
        );
        let mut walk = vec![leaving[a].pop().expect("source class has a leaving token")];
        walk.extend(path[1..path.len() - 1].iter().map(|&c| p.classes[c][0]));
        walk.push(arriving[b].pop().expect("sink class has a free vertex"));
        kept.push(*walk.last().expect("nonempty"));
        seq.push_path(&walk);
    }
    (Configuration::new(kept), seq)
}

fn search(
    inst: &DiscoveryInstance,
    cap: Option<usize>,
    opts: &NdOptions,
) -> Result<Option<Solution>, SolveError> {
    let q = shape_threshold(inst)?;
    let p = twin_partition(&inst.graph);
    let mut mc = ModelChecker::new(&inst.graph, &inst.formula, &[])?;
    for cand in feasible_shapes(inst, &p, q, opts)? {
        let cost = cand.flow.cost as usize;
        if cap.is_some_and(|b| cost > b) {
            break;
        }
        let (target, sequence) = realize(inst, &p, &cand);
        if mc.check(&target) {
            return Ok(Some(Solution {
                cost,
                target: Some(target),
                sequence: Some(sequence),
            }));
        }
    }
    Ok(None)
}

/// Decides the instance; the answer is the cheapest satisfying shape.
pub fn solve_nd(inst: &DiscoveryInstance, opts: &NdOptions) -> Result<Verdict, SolveError> {
    Ok(search(inst, Some(inst.budget), opts)?.map_or(Verdict::No, Verdict::Yes))
}

/// Smallest budget at which [`solve_nd`] answers yes.
pub fn min_budget_nd(
    inst: &DiscoveryInstance,
    opts: &NdOptions,
) -> Result<Option<usize>, SolveError> {
    Ok(search(inst, None, opts)?.map(|s| s.cost))
}

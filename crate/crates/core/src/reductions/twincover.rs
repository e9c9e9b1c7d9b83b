//! Arc supply to discovery on graphs with a small twin cover.
//!
//! Demand cliques start empty, reservoir cliques start full, and each supply
//! pair owns two supply cliques whose index node counts, in base `sigma`,
//! sum to the reservoir size only for matching pairs.

use serde::{Deserialize, Serialize};

use crate::graph::TransformationSequence;
use crate::logic::builtin::twincover_colors::{ARC, DEMAND, INDEX, RESERVOIR, SUPPLY, VERTEX};

use super::source::ArcSupplyInstance;
use super::witness::Witness;
use super::{
    finish, Builder, ConditionReport, Family, GenOptions, GeneratedInstance, Layout,
    ReductionError, Source,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SupplyClique {
    pub supply: Vec<usize>,
    pub index: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TcLayout {
    pub sigma: u64,
    pub vertex_node: Vec<usize>,
    pub demand: Vec<Vec<usize>>,
    /// `[arc]`: the arc node of the tail, then of the head.
    pub arc_nodes: Vec<[usize; 2]>,
    pub reservoir: Vec<Vec<usize>>,
    /// `[arc][pair][side]`: tail-side clique, then head-side clique.
    pub cliques: Vec<Vec<[SupplyClique; 2]>>,
}

impl TcLayout {
    pub fn cover(&self) -> Vec<usize> {
        let mut c: Vec<usize> = self
            .vertex_node
            .iter()
            .copied()
            .chain(self.arc_nodes.iter().flatten().copied())
            .collect();
        c.sort_unstable();
        c
    }
}

/// Default scale: twice the sum of all demands and supply values.
pub fn default_sigma(pas: &ArcSupplyInstance) -> u64 {
    2 * pas.total()
}

pub fn gen_twincover(
    pas: &ArcSupplyInstance,
    opts: &GenOptions,
) -> Result<GeneratedInstance, ReductionError> {
    pas.validate()?;
    pas.require_positive_supplies()?;
    let sigma = opts.sigma.unwrap_or_else(|| default_sigma(pas));
    let longest = pas.arcs.iter().map(|a| a.pairs.len()).max().unwrap_or(0) as u64;
    if sigma == 0 || sigma + 1 < longest {
        return Err(ReductionError::InvalidSource(format!(
            "scale {sigma} leaves a negative index node count"
        )));
    }
    let sq = (sigma * sigma) as usize;
    let mut b = Builder::with_colors(&[VERTEX, ARC, DEMAND, SUPPLY, INDEX, RESERVOIR]);
    let mut start = Vec::new();
    let vertex_node: Vec<usize> = pas.demands.iter().map(|_| b.node(Some(VERTEX))).collect();
    let mut demand = Vec::new();
    for (u, &d) in pas.demands.iter().enumerate() {
        let clique = b.nodes(d as usize, Some(DEMAND));
        b.clique(&clique);
        for &y in &clique {
            b.edge(vertex_node[u], y);
        }
        demand.push(clique);
    }
    let mut arc_nodes = Vec::new();
    let mut reservoir = Vec::new();
    let mut cliques = Vec::new();
    for arc in &pas.arcs {
        let an = [b.node(Some(ARC)), b.node(Some(ARC))];
        let res = b.nodes(sq, Some(RESERVOIR));
        b.clique(&res);
        for &r in &res {
            b.edge(an[0], r);
            b.edge(an[1], r);
        }
        start.extend(&res);
        let mut per_pair = Vec::new();
        for (i, &(x, y)) in arc.pairs.iter().enumerate() {
            let shift = (sigma * i as u64) as usize;
            let make =
                |b: &mut Builder, supplies: u64, index: usize, vertex: usize, arc_node: usize| {
                    let supply = b.nodes(supplies as usize, Some(SUPPLY));
                    let index = b.nodes(index, Some(INDEX));
                    let all: Vec<usize> = supply.iter().chain(&index).copied().collect();
                    b.clique(&all);
                    for &w in &all {
                        b.edge(vertex, w);
                        b.edge(arc_node, w);
                    }
                    SupplyClique { supply, index }
                };
            let tail = make(&mut b, x, sq - shift, vertex_node[arc.from], an[0]);
            let head = make(&mut b, y, shift, vertex_node[arc.to], an[1]);
            start.extend(&tail.supply);
            start.extend(&head.supply);
            per_pair.push([tail, head]);
        }
        arc_nodes.push(an);
        reservoir.push(res);
        cliques.push(per_pair);
    }
    let delta: u64 = pas.demands.iter().sum();
    let budget = (2 * delta) as usize + pas.arcs.len() * 2 * sq;
    let layout = TcLayout {
        sigma,
        vertex_node,
        demand,
        arc_nodes,
        reservoir,
        cliques,
    };
    let witness = Witness::TwinCover {
        nodes: layout.cover(),
    };
    Ok(finish(
        Family::Twincover,
        Source::ArcSupply(pas.clone()),
        Some(sigma),
        b.build(),
        start,
        budget,
        Layout::Twincover(layout),
        witness,
    ))
}

/// Supply tokens go through their vertex node into the demand clique; reservoir
/// tokens go through an arc node onto the index nodes of the chosen cliques.
pub fn certificate(
    pas: &ArcSupplyInstance,
    layout: &TcLayout,
    choice: &[usize],
) -> Result<TransformationSequence, ReductionError> {
    if !pas.is_solution(choice) {
        return Err(ReductionError::InvalidSourceSolution(format!(
            "{choice:?} does not meet the demands"
        )));
    }
    let mut seq = TransformationSequence::default();
    let mut next_free = vec![0usize; pas.demands.len()];
    for (a, arc) in pas.arcs.iter().enumerate() {
        let chosen = &layout.cliques[a][choice[a]];
        for (side, vertex) in [(0, arc.from), (1, arc.to)] {
            for &o in &chosen[side].supply {
                seq.push_path(&[
                    o,
                    layout.vertex_node[vertex],
                    layout.demand[vertex][next_free[vertex]],
                ]);
                next_free[vertex] += 1;
            }
        }
        let targets = chosen[0]
            .index
            .iter()
            .map(|&t| (0, t))
            .chain(chosen[1].index.iter().map(|&t| (1, t)));
        for (&r, (side, t)) in layout.reservoir[a].iter().zip(targets) {
            seq.push_path(&[r, layout.arc_nodes[a][side], t]);
        }
    }
    Ok(seq)
}

fn all(x: &[bool], nodes: &[usize], occupied: bool) -> bool {
    nodes.iter().all(|&v| x[v] == occupied)
}

pub fn check(layout: &TcLayout, x: &[bool]) -> ConditionReport {
    let mut report = ConditionReport::default();
    for (u, d) in layout.demand.iter().enumerate() {
        if let Some(&y) = d.iter().find(|&&y| !x[y]) {
            report.fail("T1", format!("demand node {y} of vertex {u} is empty"));
        }
    }
    for (a, r) in layout.reservoir.iter().enumerate() {
        if let Some(&v) = r.iter().find(|&&v| x[v]) {
            report.fail("T2", format!("reservoir node {v} of arc {a} holds a token"));
        }
    }
    for (a, pairs) in layout.cliques.iter().enumerate() {
        for side in 0..2 {
            let cl: Vec<&SupplyClique> = pairs
                .iter()
                .map(|p| &p[side])
                .filter(|c| !c.supply.is_empty())
                .collect();
            let active = |c: &SupplyClique| all(x, &c.supply, false) && all(x, &c.index, true);
            let dormant = |c: &SupplyClique| all(x, &c.supply, true) && all(x, &c.index, false);
            let ok = (0..cl.len()).any(|i| {
                active(cl[i]) && (0..cl.len()).filter(|&j| j != i).all(|j| dormant(cl[j]))
            });
            if !ok {
                report.fail(
                    "T3",
                    format!("arc {a} side {side} does not have exactly one switched supply clique"),
                );
            }
        }
    }
    if let Some(v) = layout.cover().into_iter().find(|&v| x[v]) {
        report.fail("T4", format!("cover node {v} holds a token"));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{apply_sequence, Configuration};
    use crate::reductions::source::SupplyArc;
    use crate::reductions::{certificate as cert, check_conditions, SourceSolution};

    fn one_arc() -> ArcSupplyInstance {
        ArcSupplyInstance {
            demands: vec![1, 1],
            arcs: vec![SupplyArc {
                from: 0,
                to: 1,
                pairs: vec![(1, 1)],
            }],
        }
    }

    #[test]
    fn one_arc_numbers() {
        let g = gen_twincover(&one_arc(), &GenOptions::default()).unwrap();
        assert_eq!(g.provenance.sigma, Some(8));
        assert_eq!(g.instance.budget, 132);
        let Layout::Twincover(l) = &g.provenance.layout else {
            panic!()
        };
        assert_eq!(
            (
                l.cliques[0][0][0].index.len(),
                l.cliques[0][0][0].supply.len()
            ),
            (64, 1)
        );
    }

    #[test]
    fn certificate_passes_and_demand_violation_is_isolated() {
        let g = gen_twincover(&one_arc(), &GenOptions::default()).unwrap();
        let seq = cert(&g, &SourceSolution::Supply(vec![0])).unwrap();
        assert_eq!(seq.len(), 132);
        let t = apply_sequence(g.graph(), &g.instance.start, &seq).unwrap();
        assert!(check_conditions(&g, &t).ok());
        assert!(check_conditions(&g, &g.instance.start)
            .failed()
            .contains(&"T1"));
        let Layout::Twincover(l) = &g.provenance.layout else {
            panic!()
        };
        let y = l.demand[0][0];
        let moved = Configuration::new(t.iter().filter(|&v| v != y));
        let failed = check_conditions(&g, &moved)
            .failed()
            .into_iter()
            .map(String::from)
            .collect::<Vec<_>>();
        assert_eq!(failed, vec!["T1".to_string()]);
    }

    #[test]
    fn rejects_zero_supplies_and_bad_solutions() {
        let mut p = one_arc();
        p.arcs[0].pairs = vec![(0, 1)];
        assert!(gen_twincover(&p, &GenOptions::default()).is_err());
        let g = gen_twincover(&one_arc(), &GenOptions::default()).unwrap();
        assert!(cert(&g, &SourceSolution::Supply(vec![1])).is_err());
    }
}

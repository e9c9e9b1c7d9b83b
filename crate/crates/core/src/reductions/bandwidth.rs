//! Arc supply to discovery on graphs of small bandwidth.
//!
//! Every vertex and arc becomes a ladder. Rails run top to bottom and are cut
//! into sub-ladders of `4 * sigma` nodes. An arc ladder holds one sub-ladder
//! per supply pair; emptying one of them feeds the vertex ladders, whose
//! reservoir tokens then cover the mirrors of the emptied nodes.

use serde::{Deserialize, Serialize};

use crate::graph::TransformationSequence;
use crate::logic::builtin::bandwidth_colors::{
    CONNECTED_RAIL, DEMAND, ISOLATED_RAIL, RESERVOIR, RUNG, SPACER, TOKEN_BEARING,
};

use super::source::ArcSupplyInstance;
use super::witness::Witness;
use super::{
    finish, Builder, ConditionReport, Family, GenOptions, GeneratedInstance, Layout,
    ReductionError, Source,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BwVertex {
    pub demand: usize,
    /// Top to bottom; the first `demand` nodes are demand nodes.
    pub connected: Vec<usize>,
    /// Top to bottom; the last `demand` nodes are reservoir nodes.
    pub isolated: Vec<usize>,
    /// Spacers of the rung at each rail position, from the connected side.
    pub rungs: Vec<[usize; 3]>,
    /// Token-bearing node attached at each connected rail position, if any.
    pub attached: Vec<Option<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BwArc {
    /// Connection type (0 to 3) at the tail and at the head vertex.
    pub types: [usize; 2],
    /// Tail-side and head-side rails, top to bottom.
    pub rails: [Vec<usize>; 2],
    /// `[sub-ladder]`: rung nodes at the bottom of both rails.
    pub blacks: Vec<[usize; 2]>,
    /// `[sub-ladder]`: the five spacers of the rung, from the tail side.
    pub rungs: Vec<[usize; 5]>,
    /// `[sub-ladder][side]`: token-bearing nodes, bottom up.
    pub oranges: Vec<[Vec<usize>; 2]>,
    /// `[sub-ladder][side]`: connected rail positions the token-bearing nodes attach to.
    pub targets: Vec<[Vec<usize>; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BwLayout {
    pub sigma: u64,
    /// Supply pairs per arc after padding.
    pub t: usize,
    /// Rail length of a vertex ladder.
    pub rail: usize,
    pub vertices: Vec<BwVertex>,
    pub arcs: Vec<BwArc>,
}

impl BwLayout {
    fn sub_len(&self) -> usize {
        4 * self.sigma as usize
    }

    /// Segment ordering: rails cut into runs of four, interleaved across all ladders.
    pub fn ordering(&self) -> Vec<usize> {
        let mut order = Vec::new();
        let arc_rail = self.sub_len() * self.t;
        for seg in 0..self.rail / 4 {
            let range = 4 * seg..4 * seg + 4;
            for v in &self.vertices {
                for p in range.clone() {
                    order.push(v.connected[p]);
                    order.extend(v.rungs[p]);
                    order.push(v.isolated[p]);
                }
            }
            if range.end <= arc_rail {
                for a in &self.arcs {
                    for p in range.clone() {
                        order.push(a.rails[0][p]);
                        order.push(a.rails[1][p]);
                    }
                    if range.end % self.sub_len() == 0 {
                        order.extend(a.rungs[range.end / self.sub_len() - 1]);
                    }
                }
            }
        }
        order
    }
}

/// Default scale: three times the sum of all demands and supply values.
pub fn default_sigma(pas: &ArcSupplyInstance) -> u64 {
    3 * pas.total()
}

/// Types by ascending neighbor id at every vertex.
fn assign_types(pas: &ArcSupplyInstance) -> Result<Vec<[usize; 2]>, ReductionError> {
    let mut types = vec![[0usize; 2]; pas.arcs.len()];
    for u in 0..pas.demands.len() {
        let mut inc: Vec<(usize, usize, usize)> = pas
            .arcs
            .iter()
            .enumerate()
            .filter_map(|(i, a)| match (a.from == u, a.to == u) {
                (true, _) => Some((a.to, i, 0)),
                (_, true) => Some((a.from, i, 1)),
                _ => None,
            })
            .collect();
        if inc.len() > 4 {
            return Err(ReductionError::InvalidSource(format!(
                "vertex {u} has degree {} above four",
                inc.len()
            )));
        }
        inc.sort_unstable();
        for (ty, &(_, i, side)) in inc.iter().enumerate() {
            types[i][side] = ty;
        }
    }
    Ok(types)
}

pub fn gen_bandwidth(
    pas: &ArcSupplyInstance,
    opts: &GenOptions,
) -> Result<GeneratedInstance, ReductionError> {
    pas.validate()?;
    pas.require_positive_supplies()?;
    let types = assign_types(pas)?;
    let t = pas.arcs.iter().map(|a| a.pairs.len()).max().unwrap_or(1);
    let padded: Vec<Vec<(u64, u64)>> = pas
        .arcs
        .iter()
        .map(|a| {
            let mut l = a.pairs.clone();
            l.resize(t, a.pairs[0]);
            l
        })
        .collect();
    let sigma = opts.sigma.unwrap_or_else(|| default_sigma(pas));
    let sub = 4 * sigma as usize;
    let rail = sub * (t + 1);
    // Attachments must stay below the demand nodes and away from the next rung node up.
    for (i, a) in pas.arcs.iter().enumerate() {
        for side in 0..2 {
            let u = if side == 0 { a.from } else { a.to };
            let top = types[i][side]
                + 4 * padded[i]
                    .iter()
                    .map(|p| if side == 0 { p.0 } else { p.1 })
                    .max()
                    .unwrap_or(0) as usize;
            if top + pas.demands[u] as usize >= sub || (t > 1 && top + 8 > sub + types[i][side]) {
                return Err(ReductionError::InvalidSource(format!(
                    "scale {sigma} is too small for arc {i}"
                )));
            }
        }
    }
    if pas.demands.iter().any(|&d| d as usize > sub) {
        return Err(ReductionError::InvalidSource(format!(
            "scale {sigma} is too small for the demands"
        )));
    }

    let mut b = Builder::with_colors(&[
        CONNECTED_RAIL,
        DEMAND,
        SPACER,
        ISOLATED_RAIL,
        RESERVOIR,
        RUNG,
        TOKEN_BEARING,
    ]);
    let mut start = Vec::new();
    let mut vertices = Vec::new();
    for &d in &pas.demands {
        let d = d as usize;
        let connected: Vec<usize> = (0..rail)
            .map(|p| b.node(Some(if p < d { DEMAND } else { CONNECTED_RAIL })))
            .collect();
        let isolated: Vec<usize> = (0..rail)
            .map(|p| {
                b.node(Some(if p >= rail - d {
                    RESERVOIR
                } else {
                    ISOLATED_RAIL
                }))
            })
            .collect();
        b.path(&connected);
        b.path(&isolated);
        let mut rungs = Vec::new();
        for p in 0..rail {
            let g = b.nodes(3, Some(SPACER));
            b.path(&[connected[p], g[0], g[1], g[2], isolated[p]]);
            rungs.push([g[0], g[1], g[2]]);
        }
        start.extend(&isolated[rail - d..]);
        vertices.push(BwVertex {
            demand: d,
            connected,
            isolated,
            rungs,
            attached: vec![None; rail],
        });
    }
    let mut arcs = Vec::new();
    for (i, a) in pas.arcs.iter().enumerate() {
        let mut rails: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
        let (mut blacks, mut rungs, mut oranges, mut targets) =
            (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        let mut rail_nodes = [Vec::new(), Vec::new()];
        for (s, &(x, y)) in padded[i].iter().enumerate() {
            let bottom = sub * (s + 1) - 1;
            let mut sub_oranges: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
            let mut sub_targets: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
            let mut sub_blacks = [0usize; 2];
            for side in 0..2 {
                let count = if side == 0 { x } else { y } as usize;
                let u = if side == 0 { a.from } else { a.to };
                let ty = types[i][side];
                // Offsets from the sub-ladder bottom: 0 is the rung node, 4k the k-th token-bearing node.
                let mut nodes = vec![0usize; sub];
                for off in (0..sub).rev() {
                    let color = if off == 0 {
                        RUNG
                    } else if off % 4 == 0 && off / 4 <= count {
                        TOKEN_BEARING
                    } else {
                        SPACER
                    };
                    nodes[sub - 1 - off] = b.node(Some(color));
                }
                for off in (0..=count).map(|k| 4 * k) {
                    let node = nodes[sub - 1 - off];
                    let pos = bottom - ty - off;
                    b.edge(node, vertices[u].connected[pos]);
                    if off == 0 {
                        sub_blacks[side] = node;
                    } else {
                        sub_oranges[side].push(node);
                        sub_targets[side].push(pos);
                        vertices[u].attached[pos] = Some(node);
                        start.push(node);
                    }
                }
                rail_nodes[side].extend(nodes);
            }
            let g = b.nodes(5, Some(SPACER));
            b.path(&[sub_blacks[0], g[0], g[1], g[2], g[3], g[4], sub_blacks[1]]);
            blacks.push(sub_blacks);
            rungs.push([g[0], g[1], g[2], g[3], g[4]]);
            oranges.push(sub_oranges);
            targets.push(sub_targets);
        }
        for side in 0..2 {
            b.path(&rail_nodes[side]);
        }
        rails[0] = std::mem::take(&mut rail_nodes[0]);
        rails[1] = std::mem::take(&mut rail_nodes[1]);
        arcs.push(BwArc {
            types: types[i],
            rails,
            blacks,
            rungs,
            oranges,
            targets,
        });
    }
    let delta: usize = pas.demands.iter().map(|&d| d as usize).sum();
    let budget = delta
        + pas
            .demands
            .iter()
            .map(|&d| d as usize * (rail - d as usize))
            .sum::<usize>();
    let layout = BwLayout {
        sigma,
        t,
        rail,
        vertices,
        arcs,
    };
    let witness = Witness::Ordering {
        order: layout.ordering(),
    };
    Ok(finish(
        Family::Bandwidth,
        Source::ArcSupply(pas.clone()),
        Some(sigma),
        b.build(),
        start,
        budget,
        Layout::Bandwidth(layout),
        witness,
    ))
}

/// Empties the chosen sub-ladders onto the connected rails, then for each
/// received token, top first, lifts it to the highest free demand node and
/// brings the highest remaining reservoir token to its mirror.
pub fn certificate(
    pas: &ArcSupplyInstance,
    layout: &BwLayout,
    choice: &[usize],
) -> Result<TransformationSequence, ReductionError> {
    if !pas.is_solution(choice) {
        return Err(ReductionError::InvalidSourceSolution(format!(
            "{choice:?} does not meet the demands"
        )));
    }
    let mut seq = TransformationSequence::default();
    let mut received: Vec<Vec<usize>> = vec![Vec::new(); layout.vertices.len()];
    for (i, a) in pas.arcs.iter().enumerate() {
        let arc = &layout.arcs[i];
        for (side, u) in [(0, a.from), (1, a.to)] {
            for (&o, &pos) in arc.oranges[choice[i]][side]
                .iter()
                .zip(&arc.targets[choice[i]][side])
            {
                seq.push(o, layout.vertices[u].connected[pos]);
                received[u].push(pos);
            }
        }
    }
    for (u, v) in layout.vertices.iter().enumerate() {
        let mut got = received[u].clone();
        got.sort_unstable();
        let first_reservoir = layout.rail - v.demand;
        for (k, &p) in got.iter().enumerate() {
            let up: Vec<usize> = (k..=p).rev().map(|q| v.connected[q]).collect();
            seq.push_path(&up);
            let lift: Vec<usize> = (p..=first_reservoir + k)
                .rev()
                .map(|q| v.isolated[q])
                .collect();
            seq.push_path(&lift);
        }
    }
    Ok(seq)
}

pub fn check(layout: &BwLayout, x: &[bool]) -> ConditionReport {
    let mut report = ConditionReport::default();
    let mut b1 = Vec::new();
    for v in &layout.vertices {
        b1.extend(v.connected[v.demand..].iter().copied());
        b1.extend(v.rungs.iter().flatten());
        b1.extend(&v.isolated[layout.rail - v.demand..]);
    }
    for a in &layout.arcs {
        let special: Vec<usize> = a
            .blacks
            .iter()
            .flatten()
            .chain(a.oranges.iter().flatten().flatten())
            .copied()
            .collect();
        b1.extend(a.rails.iter().flatten().filter(|v| !special.contains(v)));
        b1.extend(a.rungs.iter().flatten());
    }
    if let Some(&v) = b1.iter().find(|&&v| x[v]) {
        report.fail(
            "B1",
            format!("spacer, connected rail or reservoir node {v} holds a token"),
        );
    }
    for (u, v) in layout.vertices.iter().enumerate() {
        if let Some(&y) = v.connected[..v.demand].iter().find(|&&y| !x[y]) {
            report.fail("B2", format!("demand node {y} of vertex {u} is empty"));
        }
        for p in 0..layout.rail - v.demand {
            let want = v.attached[p].is_some_and(|o| !x[o]);
            if x[v.isolated[p]] != want {
                report.fail(
                    "B3",
                    format!(
                        "mirror node {} of vertex {u} breaks the rail neighbor rule",
                        v.isolated[p]
                    ),
                );
            }
        }
    }
    for (i, a) in layout.arcs.iter().enumerate() {
        for (s, sides) in a.oranges.iter().enumerate() {
            for nodes in sides {
                if nodes.iter().any(|&o| x[o] != x[nodes[0]]) {
                    report.fail(
                        "B4",
                        format!("sub-ladder {s} of arc {i} is partly emptied on one rail"),
                    );
                }
            }
        }
        let emptied: Vec<(usize, usize)> = a
            .oranges
            .iter()
            .enumerate()
            .flat_map(|(s, sides)| {
                (0..2)
                    .filter(move |&side| !sides[side].is_empty() && !x[sides[side][0]])
                    .map(move |side| (s, side))
            })
            .collect();
        let one_rung = emptied.len() == 2 && emptied[0].0 == emptied[1].0;
        if !one_rung {
            report.fail(
                "B5",
                format!(
                    "arc {i} does not empty the bottom of exactly one sub-ladder on both rails"
                ),
            );
        }
    }
    report
}

//! Structural parameter witnesses and their verification by direct scans.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::graph::ColoredGraph;

use super::{Family, GeneratedInstance};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Deleting these nodes leaves disjoint stars or disjoint paths.
    Modulator { nodes: Vec<usize> },
    /// Deleting these nodes leaves disjoint cliques of mutual twins.
    TwinCover { nodes: Vec<usize> },
    /// A linear ordering of all nodes.
    Ordering { order: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub kind: String,
    /// Modulator or cover size, or the maximum edge stretch of the ordering.
    pub value: usize,
    pub bound: usize,
    pub ok: bool,
    pub detail: String,
}

fn binom2(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

/// The bound the family's witness must meet, in the size parameter of the source.
pub fn witness_bound(family: Family, kappa: usize) -> usize {
    match family {
        Family::Stars | Family::Paths => 5 * binom2(kappa) + kappa,
        Family::Twincover => kappa + 2 * binom2(kappa),
        Family::Bandwidth => 66 * kappa,
    }
}

/// Connected components of the graph induced on `keep`, each sorted.
fn components(g: &ColoredGraph, keep: &[bool]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.n()];
    let mut out = Vec::new();
    for s in 0..g.n() {
        if !keep[s] || seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut i = 0;
        while i < comp.len() {
            let v = comp[i];
            i += 1;
            for &w in g.neighbors(v) {
                if keep[w] && !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn inner_degree(g: &ColoredGraph, keep: &[bool], v: usize) -> usize {
    g.neighbors(v).iter().filter(|&&w| keep[w]).count()
}

fn inner_edges(g: &ColoredGraph, keep: &[bool], comp: &[usize]) -> usize {
    comp.iter()
        .map(|&v| inner_degree(g, keep, v))
        .sum::<usize>()
        / 2
}

/// A tree in which every edge touches one center, or a single node.
fn is_star(g: &ColoredGraph, keep: &[bool], comp: &[usize]) -> bool {
    let m = inner_edges(g, keep, comp);
    if m + 1 != comp.len() {
        return false;
    }
    comp.len() <= 2
        || comp
            .iter()
            .any(|&v| inner_degree(g, keep, v) == comp.len() - 1)
}

fn is_path(g: &ColoredGraph, keep: &[bool], comp: &[usize]) -> bool {
    inner_edges(g, keep, comp) + 1 == comp.len()
        && comp.iter().all(|&v| inner_degree(g, keep, v) <= 2)
}

fn closed_neighborhood(g: &ColoredGraph, v: usize) -> BTreeSet<usize> {
    g.neighbors(v).iter().copied().chain([v]).collect()
}

fn is_twin_clique(g: &ColoredGraph, comp: &[usize]) -> bool {
    let first = closed_neighborhood(g, comp[0]);
    comp.iter().all(|&v| closed_neighborhood(g, v) == first)
}

fn deletion_mask(g: &ColoredGraph, nodes: &[usize]) -> Result<Vec<bool>, String> {
    let mut keep = vec![true; g.n()];
    for &v in nodes {
        if v >= g.n() {
            return Err(format!("node {v} is out of range"));
        }
        keep[v] = false;
    }
    Ok(keep)
}

/// Exact maximum of `|pos(u) - pos(v)|` over all edges, or an error if `order` is not a permutation.
pub fn ordering_stretch(g: &ColoredGraph, order: &[usize]) -> Result<usize, String> {
    let mut pos = vec![usize::MAX; g.n()];
    if order.len() != g.n() {
        return Err(format!(
            "ordering has {} nodes, graph has {}",
            order.len(),
            g.n()
        ));
    }
    for (i, &v) in order.iter().enumerate() {
        if v >= g.n() || pos[v] != usize::MAX {
            return Err(format!("node {v} is out of range or repeated"));
        }
        pos[v] = i;
    }
    Ok(g.edges()
        .iter()
        .map(|&(u, v)| pos[u].abs_diff(pos[v]))
        .max()
        .unwrap_or(0))
}

/// Verifies the stored witness of `gen` against its structure and the family bound.
pub fn verify_witness(gen: &GeneratedInstance) -> WitnessReport {
    let g = gen.graph();
    let family = gen.family();
    let bound = witness_bound(family, gen.provenance.source.kappa());
    let report = |kind: &str, value: usize, structural: Result<(), String>| {
        let (ok, detail) = match structural {
            Ok(()) if value <= bound => (true, format!("{value} <= {bound}")),
            Ok(()) => (false, format!("{value} exceeds the bound {bound}")),
            Err(e) => (false, e),
        };
        WitnessReport {
            kind: kind.to_string(),
            value,
            bound,
            ok,
            detail,
        }
    };
    match &gen.provenance.witness {
        Witness::Modulator { nodes } => {
            let stars = family == Family::Stars;
            let kind = if stars {
                "modulator_stars"
            } else {
                "modulator_paths"
            };
            let structural = deletion_mask(g, nodes).and_then(|keep| {
                match components(g, &keep).into_iter().find(|c| {
                    if stars {
                        !is_star(g, &keep, c)
                    } else {
                        !is_path(g, &keep, c)
                    }
                }) {
                    Some(c) => Err(format!(
                        "component containing node {} is not a {}",
                        c[0],
                        if stars { "star" } else { "path" }
                    )),
                    None => Ok(()),
                }
            });
            report(kind, nodes.len(), structural)
        }
        Witness::TwinCover { nodes } => {
            let structural = deletion_mask(g, nodes).and_then(|keep| {
                match components(g, &keep)
                    .into_iter()
                    .find(|c| inner_edges(g, &keep, c) != binom2(c.len()) || !is_twin_clique(g, c))
                {
                    Some(c) => Err(format!(
                        "component containing node {} is not a clique of twins",
                        c[0]
                    )),
                    None => Ok(()),
                }
            });
            report("twincover", nodes.len(), structural)
        }
        Witness::Ordering { order } => match ordering_stretch(g, order) {
            Ok(s) => report("bandwidth_order", s, Ok(())),
            Err(e) => report("bandwidth_order", 0, Err(e)),
        },
    }
}

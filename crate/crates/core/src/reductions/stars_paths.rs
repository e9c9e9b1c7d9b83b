//! Multicolored clique to discovery on graphs with a small modulator to stars or paths.
//!
//! Vertex gadgets start full of tokens, edge gadgets start empty, and tokens
//! reach edge gadgets only through four connectors per class pair whose
//! wiring encodes vertex indices.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::graph::TransformationSequence;
use crate::logic::builtin::stars_colors::{CONNECTOR, EDGE_BLOCK, EDGE_ROOT, ROOT, VERTEX_BLOCK};

use super::source::MulticoloredCliqueInstance;
use super::witness::Witness;
use super::{
    finish, Builder, ConditionReport, Family, GeneratedInstance, Layout, ReductionError, Source,
};

/// Node roles. Class pairs `(i, j)`, `i < j`, are numbered lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McLayout {
    pub kappa: usize,
    pub n: usize,
    pub vertex_block: Vec<usize>,
    /// `[class][index - 1]`; empty lists for path gadgets.
    pub vertex_root: Vec<Vec<usize>>,
    /// `[class][index - 1][other class]`: the group of `n` gadget nodes for that class (empty for its own).
    pub vertex_groups: Vec<Vec<Vec<Vec<usize>>>>,
    pub pairs: Vec<(usize, usize)>,
    pub edge_block: Vec<usize>,
    /// Source edges per pair, oriented from the smaller class.
    pub pair_edges: Vec<Vec<(usize, usize)>>,
    /// `[pair][edge]`; empty lists for path gadgets.
    pub edge_root: Vec<Vec<usize>>,
    /// `[pair][edge]`: `n` nodes for the first endpoint, then `n` for the second.
    pub edge_nodes: Vec<Vec<Vec<usize>>>,
    /// `[pair]`: index and remainder connectors from the smaller class, then from the larger.
    pub connectors: Vec<[usize; 4]>,
}

impl McLayout {
    fn pair_index(&self, i: usize, j: usize) -> usize {
        let key = (i.min(j), i.max(j));
        self.pairs
            .iter()
            .position(|&p| p == key)
            .expect("class pair exists")
    }

    /// Index and remainder connector from class `i` toward the pair with `j`.
    fn connectors_from(&self, i: usize, j: usize) -> (usize, usize) {
        let c = self.connectors[self.pair_index(i, j)];
        if i < j {
            (c[0], c[1])
        } else {
            (c[2], c[3])
        }
    }

    /// All gadget nodes of the vertex gadget, in path order.
    pub fn vertex_gadget(&self, class: usize, local: usize) -> Vec<usize> {
        self.vertex_groups[class][local].concat()
    }

    fn gadget_paths(&self) -> Vec<Vec<usize>> {
        let vertex = (0..self.kappa)
            .flat_map(|i| (0..self.n).map(move |x| (i, x)))
            .map(|(i, x)| self.vertex_gadget(i, x));
        vertex
            .chain(self.edge_nodes.iter().flatten().cloned())
            .collect()
    }

    /// Block nodes and connectors.
    pub fn modulator(&self) -> Vec<usize> {
        let mut m: Vec<usize> = self
            .vertex_block
            .iter()
            .chain(&self.edge_block)
            .copied()
            .collect();
        m.extend(self.connectors.iter().flatten());
        m.sort_unstable();
        m
    }
}

fn build(mcc: &MulticoloredCliqueInstance, stars: bool) -> (Builder, McLayout, Vec<usize>) {
    let (kappa, n) = (mcc.kappa, mcc.n);
    let mut b = Builder::with_colors(&[ROOT, VERTEX_BLOCK, EDGE_ROOT, EDGE_BLOCK, CONNECTOR]);
    let pairs = mcc.pairs();
    let mut layout = McLayout {
        kappa,
        n,
        vertex_block: Vec::new(),
        vertex_root: Vec::new(),
        vertex_groups: Vec::new(),
        pairs: pairs.clone(),
        edge_block: Vec::new(),
        pair_edges: Vec::new(),
        edge_root: Vec::new(),
        edge_nodes: Vec::new(),
        connectors: Vec::new(),
    };
    let mut start = Vec::new();
    for i in 0..kappa {
        let block = b.node(Some(VERTEX_BLOCK));
        layout.vertex_block.push(block);
        let mut roots = Vec::new();
        let mut groups_of_class = Vec::new();
        for _ in 0..n {
            let root = stars.then(|| b.node(Some(ROOT)));
            let groups: Vec<Vec<usize>> = (0..kappa)
                .map(|j| if j == i { Vec::new() } else { b.nodes(n, None) })
                .collect();
            let all: Vec<usize> = groups.concat();
            start.extend(&all);
            match root {
                Some(r) => {
                    b.edge(block, r);
                    for &leaf in &all {
                        b.edge(r, leaf);
                    }
                    roots.push(r);
                }
                None => {
                    b.path(&all);
                    for &v in &all {
                        b.edge(block, v);
                    }
                }
            }
            groups_of_class.push(groups);
        }
        layout.vertex_root.push(roots);
        layout.vertex_groups.push(groups_of_class);
    }
    for &(i, j) in &pairs {
        let block = b.node(Some(EDGE_BLOCK));
        layout.edge_block.push(block);
        let edges = mcc.edges_between(i, j);
        let mut roots = Vec::new();
        let mut gadgets = Vec::new();
        for _ in &edges {
            let root = stars.then(|| b.node(Some(EDGE_ROOT)));
            let leaves = b.nodes(2 * n, None);
            match root {
                Some(r) => {
                    b.edge(block, r);
                    for &leaf in &leaves {
                        b.edge(r, leaf);
                    }
                    roots.push(r);
                }
                None => {
                    b.path(&leaves);
                    for &v in &leaves {
                        b.edge(block, v);
                    }
                }
            }
            gadgets.push(leaves);
        }
        layout.pair_edges.push(edges);
        layout.edge_root.push(roots);
        layout.edge_nodes.push(gadgets);
    }
    for _ in &pairs {
        let c = b.nodes(4, Some(CONNECTOR));
        layout.connectors.push([c[0], c[1], c[2], c[3]]);
    }
    // Index wiring: the first iota nodes of a group meet the index connector, the rest the remainder.
    for i in 0..kappa {
        for x in 0..n {
            let iota = x + 1;
            for j in (0..kappa).filter(|&j| j != i) {
                let (idx, rem) = layout.connectors_from(i, j);
                for (k, &v) in layout.vertex_groups[i][x][j].iter().enumerate() {
                    b.edge(v, if k < iota { idx } else { rem });
                }
            }
        }
    }
    for p in 0..pairs.len() {
        let c = layout.connectors[p];
        for (e, &(u, v)) in layout.pair_edges[p].iter().enumerate() {
            let nodes = &layout.edge_nodes[p][e];
            for k in 0..n {
                b.edge(nodes[k], if k < mcc.iota(u) { c[0] } else { c[1] });
                b.edge(nodes[n + k], if k < mcc.iota(v) { c[2] } else { c[3] });
            }
        }
    }
    (b, layout, start)
}

fn generate(mcc: &MulticoloredCliqueInstance, family: Family) -> GeneratedInstance {
    let (b, layout, start) = build(mcc, family == Family::Stars);
    let budget = 2 * mcc.n * (mcc.kappa - 1) * mcc.kappa;
    let witness = Witness::Modulator {
        nodes: layout.modulator(),
    };
    finish(
        family,
        Source::MulticoloredClique(mcc.clone()),
        None,
        b.build(),
        start,
        budget,
        Layout::Modulator(layout),
        witness,
    )
}

pub fn gen_stars(mcc: &MulticoloredCliqueInstance) -> GeneratedInstance {
    generate(mcc, Family::Stars)
}

pub fn gen_paths(mcc: &MulticoloredCliqueInstance) -> GeneratedInstance {
    generate(mcc, Family::Paths)
}

/// Each pair routes `n` tokens from each chosen vertex gadget through the
/// connectors into the chosen edge gadget, two slides per token.
pub fn certificate(
    mcc: &MulticoloredCliqueInstance,
    layout: &McLayout,
    clique: &[usize],
) -> Result<TransformationSequence, ReductionError> {
    if !mcc.is_solution(clique) {
        return Err(ReductionError::InvalidSourceSolution(format!(
            "{clique:?} is not a multicolored clique"
        )));
    }
    let n = mcc.n;
    let mut seq = TransformationSequence::default();
    for (p, &(i, j)) in layout.pairs.iter().enumerate() {
        let (u, v) = (clique[i], clique[j]);
        let e = layout.pair_edges[p]
            .iter()
            .position(|&edge| edge == (u, v))
            .expect("clique edge is present");
        let dest = &layout.edge_nodes[p][e];
        let c = layout.connectors[p];
        let from_u = &layout.vertex_groups[i][mcc.iota(u) - 1][j];
        let from_v = &layout.vertex_groups[j][mcc.iota(v) - 1][i];
        for k in 0..n {
            seq.push_path(&[
                from_u[k],
                if k < mcc.iota(u) { c[0] } else { c[1] },
                dest[k],
            ]);
        }
        for k in 0..n {
            seq.push_path(&[
                from_v[k],
                if k < mcc.iota(v) { c[2] } else { c[3] },
                dest[n + k],
            ]);
        }
    }
    Ok(seq)
}

fn all(x: &[bool], nodes: &[usize], occupied: bool) -> bool {
    nodes.iter().all(|&v| x[v] == occupied)
}

fn no_tokens_on_colored(layout: &McLayout, x: &[bool], name: &str, report: &mut ConditionReport) {
    let mut colored: Vec<usize> = layout.modulator();
    colored.extend(layout.vertex_root.iter().flatten());
    colored.extend(layout.edge_root.iter().flatten());
    colored.sort_unstable();
    if let Some(v) = colored.into_iter().find(|&v| x[v]) {
        report.fail(name, format!("colored node {v} holds a token"));
    }
}

/// Exactly one gadget in state `chosen`, all others in the opposite state.
fn exactly_one(gadgets: &[Vec<usize>], x: &[bool], chosen: bool) -> bool {
    (0..gadgets.len()).any(|p| {
        all(x, &gadgets[p], chosen)
            && (0..gadgets.len())
                .filter(|&q| q != p)
                .all(|q| all(x, &gadgets[q], !chosen))
    })
}

pub fn check_stars(layout: &McLayout, x: &[bool]) -> ConditionReport {
    let mut report = ConditionReport::default();
    no_tokens_on_colored(layout, x, "S1", &mut report);
    for i in 0..layout.kappa {
        let gadgets: Vec<Vec<usize>> = (0..layout.n).map(|v| layout.vertex_gadget(i, v)).collect();
        if !exactly_one(&gadgets, x, false) {
            report.fail("S2", format!("vertex block {i} does not have exactly one emptied gadget with all others full"));
        }
    }
    for (p, gadgets) in layout.edge_nodes.iter().enumerate() {
        if !exactly_one(gadgets, x, true) {
            report.fail(
                "S3",
                format!(
                    "edge block {:?} does not have exactly one filled gadget with all others empty",
                    layout.pairs[p]
                ),
            );
        }
    }
    report
}

pub fn check_paths(layout: &McLayout, x: &[bool]) -> ConditionReport {
    let mut report = ConditionReport::default();
    no_tokens_on_colored(layout, x, "P1", &mut report);
    for i in 0..layout.kappa {
        if (0..layout.n).all(|v| layout.vertex_gadget(i, v).iter().all(|&w| x[w])) {
            report.fail(
                "P2",
                format!("vertex block {i} has no token-free gadget node"),
            );
        }
    }
    for (p, gadgets) in layout.edge_nodes.iter().enumerate() {
        if !gadgets.iter().flatten().any(|&w| x[w]) {
            report.fail(
                "P3",
                format!(
                    "edge block {:?} has no occupied gadget node",
                    layout.pairs[p]
                ),
            );
        }
    }
    for path in layout.gadget_paths() {
        for (k, &v) in path.iter().enumerate() {
            let near = &path[k.saturating_sub(2)..(k + 3).min(path.len())];
            if x[v] != near.iter().all(|&w| x[w]) {
                report.fail(
                    "P4",
                    format!("gadget node {v} disagrees with its neighborhood of radius two"),
                );
            }
        }
    }
    report
}

/// Gadget nodes of `group` adjacent to the index and the remainder connector.
fn split(
    g: &crate::graph::ColoredGraph,
    group: &[usize],
    idx: usize,
    rem: usize,
) -> (usize, usize) {
    (
        group.iter().filter(|&&v| g.has_edge(v, idx)).count(),
        group.iter().filter(|&&v| g.has_edge(v, rem)).count(),
    )
}

/// Exact decision over structured solutions: one emptied vertex gadget per
/// class and one filled edge gadget per pair whose connector wiring matches
/// both chosen vertex gadgets, every token sliding twice.
fn decide(gen: &GeneratedInstance) -> bool {
    let Layout::Modulator(layout) = &gen.provenance.layout else {
        return false;
    };
    let g = gen.graph();
    let n = layout.n;
    let cost = 4 * n * layout.pairs.len();
    if cost > gen.instance.budget {
        return false;
    }
    (0..layout.kappa)
        .map(|_| 0..n)
        .multi_cartesian_product()
        .any(|choice| {
            layout.pairs.iter().enumerate().all(|(p, &(i, j))| {
                let c = layout.connectors[p];
                let want_i = split(g, &layout.vertex_groups[i][choice[i]][j], c[0], c[1]);
                let want_j = split(g, &layout.vertex_groups[j][choice[j]][i], c[2], c[3]);
                layout.edge_nodes[p].iter().any(|nodes| {
                    let (first, second) = nodes.split_at(n);
                    split(g, first, c[0], c[1]) == want_i && split(g, second, c[2], c[3]) == want_j
                })
            })
        })
}

pub fn decide_stars(gen: &GeneratedInstance) -> Result<bool, ReductionError> {
    if gen.family() != Family::Stars {
        return Err(ReductionError::WrongFamily(
            "decide_stars needs a stars instance".into(),
        ));
    }
    Ok(decide(gen))
}

pub fn decide_paths(gen: &GeneratedInstance) -> Result<bool, ReductionError> {
    if gen.family() != Family::Paths {
        return Err(ReductionError::WrongFamily(
            "decide_paths needs a paths instance".into(),
        ));
    }
    Ok(decide(gen))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{apply_sequence, Configuration};
    use crate::reductions::check_conditions;
    use crate::reductions::source::solve_mcc_bruteforce;

    fn triangle(n: usize) -> MulticoloredCliqueInstance {
        let v = |c: usize, x: usize| c * n + x - 1;
        MulticoloredCliqueInstance::new(
            3,
            n,
            [
                (v(0, 1), v(1, n)),
                (v(1, n), v(2, 1)),
                (v(0, 1), v(2, 1)),
                (v(0, n), v(2, n)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn sizes_and_budget() {
        let m = triangle(3);
        let s = gen_stars(&m);
        assert_eq!(s.instance.budget, 36);
        assert_eq!(s.instance.k(), 54);
        let Witness::Modulator { nodes } = &s.provenance.witness else {
            panic!()
        };
        assert_eq!(nodes.len(), 18);
        let p = gen_paths(&MulticoloredCliqueInstance::new(4, 2, []).unwrap());
        let Layout::Modulator(l) = &p.provenance.layout else {
            panic!()
        };
        assert_eq!(l.vertex_gadget(0, 0).len(), 6);
    }

    #[test]
    fn certificates_pass_checkers() {
        let m = triangle(2);
        let clique = solve_mcc_bruteforce(&m).unwrap();
        for gen in [gen_stars(&m), gen_paths(&m)] {
            let seq = crate::reductions::certificate(
                &gen,
                &crate::reductions::SourceSolution::Clique(clique.clone()),
            )
            .unwrap();
            assert_eq!(seq.len(), 24);
            let t = apply_sequence(gen.graph(), &gen.instance.start, &seq).unwrap();
            assert!(
                check_conditions(&gen, &t).ok(),
                "{:?}",
                check_conditions(&gen, &t)
            );
            let initial = check_conditions(&gen, &gen.instance.start);
            let target_side = if gen.family() == Family::Stars {
                "S3"
            } else {
                "P3"
            };
            assert!(initial.failed().contains(&target_side));
        }
    }

    #[test]
    fn displaced_token_breaks_one_condition() {
        let m = triangle(2);
        let gen = gen_stars(&m);
        let clique = solve_mcc_bruteforce(&m).unwrap();
        let seq = certificate(
            &m,
            match &gen.provenance.layout {
                Layout::Modulator(l) => l,
                _ => unreachable!(),
            },
            &clique,
        )
        .unwrap();
        let t = apply_sequence(gen.graph(), &gen.instance.start, &seq).unwrap();
        let last = t.as_slice()[t.len() - 1];
        let moved = Configuration::new(t.iter().filter(|&v| v != last));
        assert_eq!(check_conditions(&gen, &moved).failed(), vec!["S3"]);
    }

    #[test]
    fn decision_follows_clique() {
        let m = triangle(2);
        assert!(decide_stars(&gen_stars(&m)).unwrap());
        assert!(decide_paths(&gen_paths(&m)).unwrap());
        let broken =
            MulticoloredCliqueInstance::new(3, 2, m.edges.iter().skip(1).map(|&[a, b]| (a, b)))
                .unwrap();
        assert_eq!(
            solve_mcc_bruteforce(&broken).is_some(),
            decide_stars(&gen_stars(&broken)).unwrap()
        );
        assert!(!decide_paths(&gen_paths(
            &MulticoloredCliqueInstance::new(3, 2, []).unwrap()
        ))
        .unwrap());
        assert!(decide_stars(&gen_paths(&m)).is_err());
        assert!(certificate(
            &m,
            match &gen_stars(&m).provenance.layout {
                Layout::Modulator(l) => l,
                _ => unreachable!(),
            },
            &[0, 1, 2]
        )
        .is_err());
    }
}

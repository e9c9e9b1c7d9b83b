//! Colored graphs, token configurations and transformation sequences.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::assignment;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("slide {step} ({from} -> {to}) does not follow an edge")]
    NonEdgeSlide { step: usize, from: usize, to: usize },
    #[error("slide {step} starts at vertex {vertex}, which holds no token")]
    EmptySourceVertex { step: usize, vertex: usize },
    #[error("final configuration has {count} tokens on vertex {vertex}")]
    FinalOverlap { vertex: usize, count: usize },
    #[error("configurations differ in size ({left} vs {right})")]
    SizeMismatch { left: usize, right: usize },
}

/// Undirected simple graph whose vertices may carry any number of named colors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    colors: BTreeMap<String, Vec<usize>>,
    color_names: Vec<String>,
    membership: Vec<Vec<bool>>,
}

impl ColoredGraph {
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        colors: impl IntoIterator<Item = (String, Vec<usize>)>,
    ) -> Result<Self, ModelError> {
        let mut seen = BTreeSet::new();
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(ModelError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(ModelError::SelfLoop(u));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(ModelError::DuplicateEdge(e.0, e.1));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let mut color_map: BTreeMap<String, BTreeSet<usize>> = BTreeMap::new();
        for (name, members) in colors {
            let entry = color_map.entry(name).or_default();
            for v in members {
                if v >= n {
                    return Err(ModelError::VertexOutOfRange { vertex: v, n });
                }
                entry.insert(v);
            }
        }
        let colors: BTreeMap<String, Vec<usize>> = color_map
            .into_iter()
            .map(|(k, v)| (k, v.into_iter().collect()))
            .collect();
        let color_names: Vec<String> = colors.keys().cloned().collect();
        let membership = colors
            .values()
            .map(|members| {
                let mut row = vec![false; n];
                for &v in members {
                    row[v] = true;
                }
                row
            })
            .collect();
        Ok(ColoredGraph {
            n,
            edges: seen.into_iter().collect(),
            adj,
            colors,
            color_names,
            membership,
        })
    }

    /// Uncolored graph from an edge list.
    pub fn plain(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, ModelError> {
        Self::new(n, edges, std::iter::empty())
    }

    pub fn path(n: usize) -> Self {
        Self::plain(n, (1..n).map(|i| (i - 1, i))).expect("path is simple")
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Self::plain(n, edges).expect("clique is simple")
    }

    /// Same graph with one color replaced (or added).
    pub fn with_color(&self, name: &str, members: Vec<usize>) -> Result<Self, ModelError> {
        let mut colors = self.colors.clone();
        colors.insert(name.to_string(), members);
        Self::new(self.n, self.edges.iter().copied(), colors)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Sorted edge list with `u < v` in every pair.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    pub fn colors(&self) -> &BTreeMap<String, Vec<usize>> {
        &self.colors
    }

    pub fn color_names(&self) -> &[String] {
        &self.color_names
    }

    pub fn color_index(&self, name: &str) -> Option<usize> {
        self.color_names
            .binary_search_by(|c| c.as_str().cmp(name))
            .ok()
    }

    pub fn has_color(&self, color: usize, v: usize) -> bool {
        self.membership[color][v]
    }

    pub fn color_members(&self, color: usize) -> &[usize] {
        &self.colors[&self.color_names[color]]
    }

    pub fn vertex_has_named_color(&self, name: &str, v: usize) -> bool {
        self.color_index(name)
            .is_some_and(|c| self.membership[c][v])
    }

    /// Color indices carried by `v`, ascending.
    pub fn colors_of(&self, v: usize) -> Vec<usize> {
        (0..self.color_names.len())
            .filter(|&c| self.membership[c][v])
            .collect()
    }

    /// Unweighted distances from `src`; `None` marks unreachable vertices.
    pub fn bfs_distances(&self, src: usize) -> Vec<Option<usize>> {
        self.bfs_within(src, |_| true)
    }

    /// Distances from `src` inside the subgraph induced by vertices accepted by `keep`.
    pub fn bfs_within(&self, src: usize, keep: impl Fn(usize) -> bool) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        if !keep(src) {
            return dist;
        }
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap();
            for &w in &self.adj[u] {
                if dist[w].is_none() && keep(w) {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// A shortest path from `from` to `to`, both endpoints included.
    pub fn shortest_path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let mut parent = vec![usize::MAX; self.n];
        parent[from] = from;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            if u == to {
                break;
            }
            for &w in &self.adj[u] {
                if parent[w] == usize::MAX {
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
        if parent[to] == usize::MAX {
            return None;
        }
        let mut path = vec![to];
        let mut cur = to;
        while cur != from {
            cur = parent[cur];
            path.push(cur);
        }
        path.reverse();
        Some(path)
    }

    /// Connected component label per vertex.
    pub fn components(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.n];
        let mut next = 0;
        for s in 0..self.n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if label[w] == usize::MAX {
                        label[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        label
    }

    /// Graphviz rendering, one fill color per first color name.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph H {\n  node [style=filled, fillcolor=white];\n");
        for v in 0..self.n {
            let names: Vec<&str> = self
                .colors_of(v)
                .into_iter()
                .map(|c| self.color_names[c].as_str())
                .collect();
            out.push_str(&format!("  {v} [label=\"{v}\\n{}\"];\n", names.join(",")));
        }
        for &(u, v) in &self.edges {
            out.push_str(&format!("  {u} -- {v};\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// A token placement with at most one token per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Configuration(Vec<usize>);

impl Configuration {
    /// Builds a configuration; duplicates collapse.
    pub fn new(tokens: impl IntoIterator<Item = usize>) -> Self {
        let set: BTreeSet<usize> = tokens.into_iter().collect();
        Configuration(set.into_iter().collect())
    }

    pub fn empty() -> Self {
        Configuration(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    /// Membership vector of length `n`.
    pub fn indicator(&self, n: usize) -> Vec<bool> {
        let mut mark = vec![false; n];
        for &v in &self.0 {
            mark[v] = true;
        }
        mark
    }

    pub fn check_range(&self, n: usize) -> Result<(), ModelError> {
        match self.0.last() {
            Some(&v) if v >= n => Err(ModelError::VertexOutOfRange { vertex: v, n }),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<usize> for Configuration {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Configuration::new(iter)
    }
}

/// One token moving along one edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "(usize, usize)", into = "(usize, usize)")]
pub struct Slide {
    pub from: usize,
    pub to: usize,
}

impl From<(usize, usize)> for Slide {
    fn from((from, to): (usize, usize)) -> Self {
        Slide { from, to }
    }
}

impl From<Slide> for (usize, usize) {
    fn from(s: Slide) -> Self {
        (s.from, s.to)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TransformationSequence {
    pub slides: Vec<Slide>,
}

impl TransformationSequence {
    pub fn new(slides: impl IntoIterator<Item = (usize, usize)>) -> Self {
        TransformationSequence {
            slides: slides.into_iter().map(Slide::from).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.slides.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slides.is_empty()
    }

    pub fn push(&mut self, from: usize, to: usize) {
        self.slides.push(Slide { from, to });
    }

    /// Appends the slides walking one token along `path`.
    pub fn push_path(&mut self, path: &[usize]) {
        for w in path.windows(2) {
            self.push(w[0], w[1]);
        }
    }

    pub fn extend(&mut self, other: TransformationSequence) {
        self.slides.extend(other.slides);
    }
}

/// Applies `seq` to `s` in the discovery model, where tokens may share a vertex in between.
pub fn apply_sequence(
    g: &ColoredGraph,
    s: &Configuration,
    seq: &TransformationSequence,
) -> Result<Configuration, ModelError> {
    s.check_range(g.n())?;
    let mut count = vec![0usize; g.n()];
    for v in s.iter() {
        count[v] += 1;
    }
    for (step, slide) in seq.slides.iter().enumerate() {
        let Slide { from, to } = *slide;
        if from >= g.n() || to >= g.n() || !g.has_edge(from, to) {
            return Err(ModelError::NonEdgeSlide { step, from, to });
        }
        if count[from] == 0 {
            return Err(ModelError::EmptySourceVertex { step, vertex: from });
        }
        count[from] -= 1;
        count[to] += 1;
    }
    if let Some((vertex, &c)) = count.iter().enumerate().find(|(_, &c)| c > 1) {
        return Err(ModelError::FinalOverlap { vertex, count: c });
    }
    Ok(Configuration::new((0..g.n()).filter(|&v| count[v] == 1)))
}

/// Optimal pairing of source tokens to target vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelocationPlan {
    pub cost: usize,
    /// `(source, target)` pairs, one per token.
    pub pairs: Vec<(usize, usize)>,
}

/// Cheapest assignment of the tokens of `s` onto `t` under shortest-path distances.
/// `Ok(None)` means no assignment keeps every token inside its component.
pub fn relocation_plan(
    g: &ColoredGraph,
    s: &Configuration,
    t: &Configuration,
) -> Result<Option<RelocationPlan>, ModelError> {
    if s.len() != t.len() {
        return Err(ModelError::SizeMismatch {
            left: s.len(),
            right: t.len(),
        });
    }
    s.check_range(g.n())?;
    t.check_range(g.n())?;
    let k = s.len();
    if k == 0 {
        return Ok(Some(RelocationPlan {
            cost: 0,
            pairs: Vec::new(),
        }));
    }
    // Unreachable pairs get a weight larger than any feasible total.
    let big = (g.n() as i64 + 1) * (k as i64 + 1);
    let matrix: Vec<Vec<i64>> = s
        .iter()
        .map(|u| {
            let dist = g.bfs_distances(u);
            t.iter()
                .map(|v| dist[v].map_or(big, |d| d as i64))
                .collect()
        })
        .collect();
    let (total, assign) = assignment::min_cost_assignment(&matrix);
    if total >= big {
        return Ok(None);
    }
    let pairs = s
        .iter()
        .zip(assign)
        .map(|(u, j)| (u, t.as_slice()[j]))
        .collect();
    Ok(Some(RelocationPlan {
        cost: total as usize,
        pairs,
    }))
}

/// Minimum number of slides turning `s` into `t`; `None` when infeasible.
pub fn min_relocation_cost(
    g: &ColoredGraph,
    s: &Configuration,
    t: &Configuration,
) -> Result<Option<usize>, ModelError> {
    Ok(relocation_plan(g, s, t)?.map(|p| p.cost))
}

/// Routes every paired token along a shortest path, one token at a time.
pub fn route_pairs(g: &ColoredGraph, pairs: &[(usize, usize)]) -> TransformationSequence {
    let mut seq = TransformationSequence::default();
    for &(u, v) in pairs {
        if u != v {
            let path = g
                .shortest_path(u, v)
                .expect("paired vertices are connected");
            seq.push_path(&path);
        }
    }
    seq
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> ColoredGraph {
        ColoredGraph::path(3)
    }

    #[test]
    fn single_slide_moves_token() {
        let g = ColoredGraph::path(2);
        let out = apply_sequence(
            &g,
            &Configuration::new([0]),
            &TransformationSequence::new([(0, 1)]),
        );
        assert_eq!(out.unwrap(), Configuration::new([1]));
    }

    #[test]
    fn empty_sequence_is_identity() {
        let s = Configuration::new([0, 2]);
        assert_eq!(
            apply_sequence(&p3(), &s, &TransformationSequence::default()).unwrap(),
            s
        );
    }

    #[test]
    fn overlap_at_the_end_is_rejected() {
        let seq = TransformationSequence::new([(0, 1), (2, 1)]);
        let err = apply_sequence(&p3(), &Configuration::new([0, 2]), &seq).unwrap_err();
        assert_eq!(
            err,
            ModelError::FinalOverlap {
                vertex: 1,
                count: 2
            }
        );
    }

    #[test]
    fn transient_overlap_is_allowed() {
        let seq = TransformationSequence::new([(0, 1), (1, 2), (1, 0)]);
        let out =
            apply_sequence(&ColoredGraph::path(3), &Configuration::new([0, 1]), &seq).unwrap();
        assert_eq!(out, Configuration::new([0, 2]));
    }

    #[test]
    fn slide_errors() {
        let g = p3();
        let s = Configuration::new([0]);
        assert!(matches!(
            apply_sequence(&g, &s, &TransformationSequence::new([(0, 2)])),
            Err(ModelError::NonEdgeSlide { step: 0, .. })
        ));
        assert!(matches!(
            apply_sequence(&g, &s, &TransformationSequence::new([(1, 2)])),
            Err(ModelError::EmptySourceVertex { step: 0, vertex: 1 })
        ));
    }

    #[test]
    fn relocation_examples() {
        let p4 = ColoredGraph::path(4);
        let s = Configuration::new([0, 1]);
        assert_eq!(min_relocation_cost(&p4, &s, &s).unwrap(), Some(0));
        assert_eq!(
            min_relocation_cost(&p4, &s, &Configuration::new([2, 3])).unwrap(),
            Some(4)
        );
        let two_edges = ColoredGraph::plain(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(
            min_relocation_cost(
                &two_edges,
                &Configuration::new([0]),
                &Configuration::new([3])
            )
            .unwrap(),
            None
        );
        assert!(matches!(
            min_relocation_cost(&p4, &s, &Configuration::new([0])),
            Err(ModelError::SizeMismatch { .. })
        ));
    }

    #[test]
    fn routed_pairs_realize_the_plan() {
        let g = ColoredGraph::path(5);
        let s = Configuration::new([0, 1]);
        let t = Configuration::new([3, 4]);
        let plan = relocation_plan(&g, &s, &t).unwrap().unwrap();
        let seq = route_pairs(&g, &plan.pairs);
        assert_eq!(seq.len(), plan.cost);
        assert_eq!(apply_sequence(&g, &s, &seq).unwrap(), t);
    }

    #[test]
    fn graph_rejects_bad_input() {
        assert_eq!(
            ColoredGraph::plain(2, [(0, 0)]),
            Err(ModelError::SelfLoop(0))
        );
        assert_eq!(
            ColoredGraph::plain(2, [(0, 1), (1, 0)]),
            Err(ModelError::DuplicateEdge(0, 1))
        );
        assert!(ColoredGraph::plain(2, [(0, 2)]).is_err());
    }

    #[test]
    fn colors_are_indexed_by_name() {
        let g = ColoredGraph::new(
            3,
            [(0, 1)],
            [("C2".to_string(), vec![2]), ("C1".to_string(), vec![0, 2])],
        )
        .unwrap();
        assert_eq!(g.color_names(), ["C1", "C2"]);
        assert_eq!(g.colors_of(2), vec![0, 1]);
        assert!(g.vertex_has_named_color("C1", 0));
        assert!(!g.vertex_has_named_color("C3", 0));
    }
}

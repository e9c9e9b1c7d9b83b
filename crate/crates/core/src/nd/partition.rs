//! Partition into color-respecting twin classes.

use serde::Serialize;

use crate::graph::ColoredGraph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexTypePartition {
    /// Classes ascending by smallest member; members ascending.
    pub classes: Vec<Vec<usize>>,
    /// Color indices shared by the members of each class.
    pub signatures: Vec<Vec<usize>>,
    /// Whether the members of each class are pairwise adjacent (false for singletons).
    pub closed: Vec<bool>,
    /// `adjacent[i][j]` for `i != j`: every vertex of class `i` sees every vertex of class `j`.
    pub adjacent: Vec<Vec<bool>>,
    /// Class index per vertex.
    pub class_of: Vec<usize>,
}

impl VertexTypePartition {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    /// Token count per class.
    pub fn counts(&self, tokens: impl IntoIterator<Item = usize>) -> Vec<usize> {
        let mut c = vec![0; self.len()];
        for v in tokens {
            c[self.class_of[v]] += 1;
        }
        c
    }
}

/// `N(u) \ {v} = N(v) \ {u}` and equal color sets.
pub fn are_twins(g: &ColoredGraph, u: usize, v: usize) -> bool {
    if g.colors_of(u) != g.colors_of(v) {
        return false;
    }
    let strip = |a: usize, b: usize| g.neighbors(a).iter().copied().filter(move |&w| w != b);
    strip(u, v).eq(strip(v, u))
}

/// Twin classes grouped greedily; the twin relation is an equivalence, so this is the maximal partition.
pub fn twin_partition(g: &ColoredGraph) -> VertexTypePartition {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut class_of = vec![0; g.n()];
    for v in 0..g.n() {
        match classes.iter().position(|c| are_twins(g, c[0], v)) {
            Some(i) => {
                classes[i].push(v);
                class_of[v] = i;
            }
            None => {
                class_of[v] = classes.len();
                classes.push(vec![v]);
            }
        }
    }
    let signatures = classes.iter().map(|c| g.colors_of(c[0])).collect();
    let closed = classes
        .iter()
        .map(|c| c.len() > 1 && g.has_edge(c[0], c[1]))
        .collect();
    let adjacent = classes
        .iter()
        .enumerate()
        .map(|(i, a)| {
            classes
                .iter()
                .enumerate()
                .map(|(j, b)| i != j && g.has_edge(a[0], b[0]))
                .collect()
        })
        .collect();
    VertexTypePartition {
        classes,
        signatures,
        closed,
        adjacent,
        class_of,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_partitions() {
        let k3 = twin_partition(&ColoredGraph::complete(3));
        assert_eq!((k3.len(), k3.closed[0]), (1, true));
        let p3 = twin_partition(&ColoredGraph::path(3));
        assert_eq!(p3.classes, vec![vec![0, 2], vec![1]]);
        assert!(!p3.closed[0] && p3.adjacent[0][1]);
        let k2 = ColoredGraph::path(2).with_color("C1", vec![0]).unwrap();
        assert_eq!(twin_partition(&k2).len(), 2);
    }

    #[test]
    fn classes_are_homogeneous() {
        let g = ColoredGraph::plain(6, [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4), (3, 5), (4, 5)])
            .unwrap();
        let p = twin_partition(&g);
        for (i, a) in p.classes.iter().enumerate() {
            for (j, b) in p.classes.iter().enumerate() {
                if i != j {
                    assert!(a
                        .iter()
                        .all(|&u| b.iter().all(|&v| g.has_edge(u, v) == p.adjacent[i][j])));
                }
            }
        }
        assert_eq!(p.classes, vec![vec![0], vec![1, 2], vec![3], vec![4, 5]]);
    }
}

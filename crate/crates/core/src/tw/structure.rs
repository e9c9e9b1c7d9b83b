//! Boundaried, token-marked colored structures and their canonical forms.

use std::collections::BTreeMap;

use crate::graph::{ColoredGraph, Configuration};

/// A small graph whose first `boundary` vertices are the ordered boundary tuple.
/// Labels pack the color bitmask (bit `c + 1`) and the token flag (bit 0).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Structure {
    pub boundary: usize,
    pub labels: Vec<u64>,
    /// Adjacency rows as bitmasks; at most 64 vertices.
    pub adj: Vec<u64>,
}

pub const MAX_STRUCTURE: usize = 64;

pub fn label(colors: &[usize], token: bool) -> u64 {
    colors
        .iter()
        .fold(token as u64, |acc, &c| acc | 1 << (c + 1))
}

impl Structure {
    pub fn empty() -> Self {
        Structure {
            boundary: 0,
            labels: Vec::new(),
            adj: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    pub fn token(&self, v: usize) -> bool {
        self.labels[v] & 1 == 1
    }

    fn add_edge(&mut self, u: usize, v: usize) {
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
    }

    /// Inserts a boundary vertex at boundary position `pos`, adjacent to the listed boundary positions.
    pub fn introduce(&self, pos: usize, lab: u64, nbrs: &[usize]) -> Structure {
        assert!(self.len() < MAX_STRUCTURE, "structure too large");
        let old_to_new = |v: usize| if v >= pos { v + 1 } else { v };
        let mut out = Structure {
            boundary: self.boundary + 1,
            labels: vec![0; self.len() + 1],
            adj: vec![0; self.len() + 1],
        };
        for v in 0..self.len() {
            out.labels[old_to_new(v)] = self.labels[v];
            for w in 0..self.len() {
                if self.has_edge(v, w) {
                    out.adj[old_to_new(v)] |= 1 << old_to_new(w);
                }
            }
        }
        out.labels[pos] = lab;
        for &b in nbrs {
            out.add_edge(pos, old_to_new(b));
        }
        out
    }

    /// Moves boundary position `pos` to the interior.
    pub fn forget(&self, pos: usize) -> Structure {
        let mut order: Vec<usize> = (0..self.boundary).filter(|&v| v != pos).collect();
        order.push(pos);
        order.extend(self.boundary..self.len());
        let mut out = self.permuted(&order);
        out.boundary -= 1;
        out
    }

    /// Glues two structures with equal boundary labels along their boundaries.
    pub fn glue(&self, other: &Structure) -> Structure {
        assert_eq!(self.boundary, other.boundary, "boundaries differ");
        let t = self.boundary;
        let extra = other.len() - t;
        assert!(self.len() + extra <= MAX_STRUCTURE, "structure too large");
        let mut out = self.clone();
        out.labels.extend_from_slice(&other.labels[t..]);
        out.adj.resize(self.len() + extra, 0);
        let map = |v: usize| if v < t { v } else { self.len() + v - t };
        for v in 0..other.len() {
            for w in v + 1..other.len() {
                if other.has_edge(v, w) {
                    out.add_edge(map(v), map(w));
                }
            }
        }
        out
    }

    /// Structure with vertex `order[i]` placed at position `i`.
    pub fn permuted(&self, order: &[usize]) -> Structure {
        let mut inv = vec![0; self.len()];
        for (i, &v) in order.iter().enumerate() {
            inv[v] = i;
        }
        let mut out = Structure {
            boundary: self.boundary,
            labels: vec![0; self.len()],
            adj: vec![0; self.len()],
        };
        for (i, &v) in order.iter().enumerate() {
            out.labels[i] = self.labels[v];
            let mut row = self.adj[v];
            while row != 0 {
                let w = row.trailing_zeros() as usize;
                row &= row - 1;
                out.adj[i] |= 1 << inv[w];
            }
        }
        out
    }

    /// Canonical representative under isomorphisms fixing the boundary pointwise.
    pub fn canonical(&self) -> Structure {
        let t = self.boundary;
        let m = self.len();
        if m - t <= 1 {
            return self.clone();
        }
        // Interior cells start from labels and adjacency to each boundary position.
        let boundary_mask = if t == 0 { 0 } else { u64::MAX >> (64 - t) };
        let mut cells: Vec<u64> = (0..m).map(|v| v as u64).collect();
        let inner: Vec<usize> = (t..m).collect();
        let seeds: BTreeMap<(u64, u64), u64> = inner
            .iter()
            .map(|&v| (self.labels[v], self.adj[v] & boundary_mask))
            .map(|k| (k, 0))
            .collect();
        let rank: BTreeMap<(u64, u64), u64> = seeds
            .keys()
            .enumerate()
            .map(|(i, &k)| (k, i as u64))
            .collect();
        for &v in &inner {
            cells[v] = t as u64 + rank[&(self.labels[v], self.adj[v] & boundary_mask)];
        }
        let mut best: Option<Structure> = None;
        self.search(cells, &mut best);
        best.expect("search visits at least one leaf")
    }

    /// Refines interior cells by neighbor cell multisets until stable.
    fn refine(&self, mut cells: Vec<u64>) -> Vec<u64> {
        let t = self.boundary;
        let m = self.len();
        loop {
            let sigs: Vec<(u64, Vec<u64>)> = (0..m)
                .map(|v| {
                    let mut nb: Vec<u64> = (0..m)
                        .filter(|&w| self.has_edge(v, w))
                        .map(|w| cells[w])
                        .collect();
                    nb.sort_unstable();
                    (cells[v], nb)
                })
                .collect();
            let mut keys: Vec<&(u64, Vec<u64>)> = sigs[t..].iter().collect();
            keys.sort();
            keys.dedup();
            let mut next = cells.clone();
            for v in t..m {
                next[v] = t as u64 + keys.binary_search(&&sigs[v]).expect("present") as u64;
            }
            let count = |c: &[u64]| {
                let mut s = c[t..].to_vec();
                s.sort_unstable();
                s.dedup();
                s.len()
            };
            if count(&next) == count(&cells) {
                return next;
            }
            cells = next;
        }
    }

    fn search(&self, cells: Vec<u64>, best: &mut Option<Structure>) {
        let t = self.boundary;
        let m = self.len();
        let cells = self.refine(cells);
        let mut by_cell: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
        for v in t..m {
            by_cell.entry(cells[v]).or_default().push(v);
        }
        match by_cell.values().find(|c| c.len() > 1) {
            None => {
                let mut order: Vec<usize> = (0..t).collect();
                let mut rest: Vec<usize> = (t..m).collect();
                rest.sort_by_key(|&v| cells[v]);
                order.extend(rest);
                let cand = self.permuted(&order);
                if best.as_ref().map_or(true, |b| cand < *b) {
                    *best = Some(cand);
                }
            }
            Some(cell) => {
                // Twins inside a cell give identical branches, so one per twin class suffices.
                let mut tried: Vec<usize> = Vec::new();
                for &v in cell {
                    if tried.iter().any(|&w| self.twins(v, w)) {
                        continue;
                    }
                    tried.push(v);
                    let mut c = cells.clone();
                    // Individualize v: it gets a fresh cell just below its old one.
                    for x in t..m {
                        c[x] *= 2;
                        if x != v && cells[x] == cells[v] {
                            c[x] += 1;
                        }
                    }
                    self.search(c, best);
                }
            }
        }
    }

    fn twins(&self, u: usize, v: usize) -> bool {
        let strip = !((1u64 << u) | (1u64 << v));
        self.labels[u] == self.labels[v] && self.adj[u] & strip == self.adj[v] & strip
    }

    /// Host-graph view for model checking: colors named as in `names`, tokens as a configuration.
    pub fn to_graph(&self, names: &[String]) -> (ColoredGraph, Configuration) {
        let m = self.len();
        let edges = (0..m)
            .flat_map(|v| {
                (v + 1..m)
                    .filter(move |&w| self.has_edge(v, w))
                    .map(move |w| (v, w))
            })
            .collect::<Vec<_>>();
        let colors = names.iter().enumerate().map(|(c, name)| {
            (
                name.clone(),
                (0..m)
                    .filter(|&v| self.labels[v] >> (c + 1) & 1 == 1)
                    .collect(),
            )
        });
        let g = ColoredGraph::new(m, edges, colors).expect("structure is a simple graph");
        (g, Configuration::new((0..m).filter(|&v| self.token(v))))
    }
}

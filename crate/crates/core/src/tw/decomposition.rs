//! Tree decompositions: exact computation for small graphs, PACE `.td` input,
//! conversion to nice form and validation.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::graph::ColoredGraph;
use crate::solution::SolveError;

/// Largest vertex count for which [`compute_td`] runs the exact subset search.
pub const EXACT_TD_LIMIT: usize = 20;

/// Bags joined by tree edges, with no further structure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<usize>>,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NodeKind {
    Leaf,
    Introduce(usize),
    Forget(usize),
    Join,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NiceNode {
    pub kind: NodeKind,
    /// Sorted ascending; the boundary tuple of the node follows this order.
    pub bag: Vec<usize>,
    pub children: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NiceTreeDecomposition {
    pub nodes: Vec<NiceNode>,
    pub root: usize,
}

fn invalid(msg: String) -> SolveError {
    SolveError::InvalidDecomposition(msg)
}

/// Checks the three decomposition axioms for a family of bags over a tree given by parent links.
fn check_axioms(
    g: &ColoredGraph,
    bags: &[Vec<usize>],
    parent: &[Option<usize>],
) -> Result<(), SolveError> {
    let mut holders = vec![Vec::new(); g.n()];
    for (i, bag) in bags.iter().enumerate() {
        for &v in bag {
            if v >= g.n() {
                return Err(invalid(format!("node {i}: vertex {v} out of range")));
            }
            holders[v].push(i);
        }
    }
    if let Some(v) = (0..g.n()).find(|&v| holders[v].is_empty()) {
        return Err(invalid(format!("axiom 1: vertex {v} is in no bag")));
    }
    let sets: Vec<BTreeSet<usize>> = bags.iter().map(|b| b.iter().copied().collect()).collect();
    for &(u, v) in g.edges() {
        if !holders[u].iter().any(|&i| sets[i].contains(&v)) {
            return Err(invalid(format!("axiom 2: edge {{{u}, {v}}} is in no bag")));
        }
    }
    for v in 0..g.n() {
        let tops = holders[v]
            .iter()
            .filter(|&&i| !parent[i].is_some_and(|p| sets[p].contains(&v)))
            .count();
        if tops != 1 {
            return Err(invalid(format!(
                "axiom 3: bags holding vertex {v} are not connected"
            )));
        }
    }
    Ok(())
}

impl TreeDecomposition {
    pub fn width(&self) -> usize {
        self.bags
            .iter()
            .map(Vec::len)
            .max()
            .unwrap_or(1)
            .saturating_sub(1)
    }

    /// Parent links when rooted at `root`, or an error if the edges do not form a tree.
    fn rooted(&self, root: usize) -> Result<(Vec<Option<usize>>, Vec<Vec<usize>>), SolveError> {
        let m = self.bags.len();
        if m == 0 || self.edges.len() != m - 1 {
            return Err(invalid("decomposition graph is not a tree".into()));
        }
        let mut adj = vec![Vec::new(); m];
        for &(a, b) in &self.edges {
            if a >= m || b >= m || a == b {
                return Err(invalid(format!("bad tree edge ({a}, {b})")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut parent = vec![None; m];
        let mut children = vec![Vec::new(); m];
        let mut seen = vec![false; m];
        seen[root] = true;
        let mut stack = vec![root];
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some(x);
                    children[x].push(y);
                    stack.push(y);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(invalid("decomposition graph is disconnected".into()));
        }
        for c in &mut children {
            c.sort_unstable();
        }
        Ok((parent, children))
    }

    pub fn validate(&self, g: &ColoredGraph) -> Result<(), SolveError> {
        let (parent, _) = self.rooted(0)?;
        check_axioms(g, &self.bags, &parent)
    }

    /// Decomposition induced by eliminating vertices in `order`.
    pub fn from_elimination_order(g: &ColoredGraph, order: &[usize]) -> Self {
        let n = g.n();
        let mut pos = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let mut nb: Vec<BTreeSet<usize>> = (0..n)
            .map(|v| g.neighbors(v).iter().copied().collect())
            .collect();
        let mut bags = Vec::with_capacity(n + 1);
        let mut later_of = Vec::with_capacity(n);
        for &v in order {
            let later: Vec<usize> = nb[v].iter().copied().filter(|&w| pos[w] > pos[v]).collect();
            for (i, &a) in later.iter().enumerate() {
                for &b in &later[i + 1..] {
                    nb[a].insert(b);
                    nb[b].insert(a);
                }
            }
            let mut bag = later.clone();
            bag.push(v);
            bag.sort_unstable();
            bags.push(bag);
            later_of.push(later);
        }
        // Bag i belongs to order[i]; its parent is the bag of its earliest later neighbor.
        // Roots of the resulting forest hang off one extra empty bag.
        let hub = bags.len();
        bags.push(Vec::new());
        let edges = later_of
            .iter()
            .enumerate()
            .map(|(i, later)| (i, later.iter().map(|&w| pos[w]).min().unwrap_or(hub)))
            .collect();
        TreeDecomposition { bags, edges }
    }

    /// Nice form rooted at bag `root`. With `extra_joins`, every bag also joins a
    /// freshly introduced copy of itself, which yields a different valid decomposition.
    pub fn to_nice(
        &self,
        root: usize,
        extra_joins: bool,
    ) -> Result<NiceTreeDecomposition, SolveError> {
        let (_, children) = self.rooted(root)?;
        let mut nodes = Vec::new();
        let top = self.build(root, &children, extra_joins, &mut nodes);
        let mut cur = top;
        for &v in &self.bags[root].iter().copied().collect::<BTreeSet<_>>() {
            cur = push_change(&mut nodes, cur, NodeKind::Forget(v));
        }
        Ok(NiceTreeDecomposition { nodes, root: cur })
    }

    fn build(
        &self,
        x: usize,
        children: &[Vec<usize>],
        extra_joins: bool,
        nodes: &mut Vec<NiceNode>,
    ) -> usize {
        let target: BTreeSet<usize> = self.bags[x].iter().copied().collect();
        let mut branches = Vec::new();
        for &c in &children[x] {
            let mut cur = self.build(c, children, extra_joins, nodes);
            let have: BTreeSet<usize> = nodes[cur].bag.iter().copied().collect();
            for &v in have.difference(&target) {
                cur = push_change(nodes, cur, NodeKind::Forget(v));
            }
            for &v in target.difference(&have) {
                cur = push_change(nodes, cur, NodeKind::Introduce(v));
            }
            branches.push(cur);
        }
        let fresh = |nodes: &mut Vec<NiceNode>| {
            nodes.push(NiceNode {
                kind: NodeKind::Leaf,
                bag: Vec::new(),
                children: Vec::new(),
            });
            let mut cur = nodes.len() - 1;
            for &v in &target {
                cur = push_change(nodes, cur, NodeKind::Introduce(v));
            }
            cur
        };
        if branches.is_empty() || extra_joins {
            branches.push(fresh(nodes));
        }
        let mut acc = branches[0];
        for &b in &branches[1..] {
            let bag = nodes[acc].bag.clone();
            nodes.push(NiceNode {
                kind: NodeKind::Join,
                bag,
                children: vec![acc, b],
            });
            acc = nodes.len() - 1;
        }
        acc
    }
}

fn push_change(nodes: &mut Vec<NiceNode>, child: usize, kind: NodeKind) -> usize {
    let mut bag = nodes[child].bag.clone();
    match kind {
        NodeKind::Introduce(v) => {
            let i = bag.binary_search(&v).expect_err("introduced vertex is new");
            bag.insert(i, v);
        }
        NodeKind::Forget(v) => {
            let i = bag.binary_search(&v).expect("forgotten vertex is present");
            bag.remove(i);
        }
        _ => unreachable!("only bag changes"),
    }
    nodes.push(NiceNode {
        kind,
        bag,
        children: vec![child],
    });
    nodes.len() - 1
}

impl NiceTreeDecomposition {
    pub fn width(&self) -> usize {
        self.nodes
            .iter()
            .map(|x| x.bag.len())
            .max()
            .unwrap_or(1)
            .saturating_sub(1)
    }

    /// Children before parents.
    pub fn postorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(self.root, false)];
        while let Some((x, done)) = stack.pop() {
            if done {
                out.push(x);
            } else {
                stack.push((x, true));
                for &c in self.nodes[x].children.iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        out
    }

    /// Node kinds and bag changes, then the decomposition axioms.
    pub fn validate(&self, g: &ColoredGraph) -> Result<(), SolveError> {
        let m = self.nodes.len();
        if self.root >= m || !self.nodes[self.root].bag.is_empty() {
            return Err(invalid("root bag must be empty".into()));
        }
        let mut parent = vec![None; m];
        for (i, x) in self.nodes.iter().enumerate() {
            for &c in &x.children {
                if c >= m || parent[c].is_some() || c == self.root {
                    return Err(invalid(format!("node {i}: child {c} is not a tree child")));
                }
                parent[c] = Some(i);
            }
            if x.bag.windows(2).any(|w| w[0] >= w[1]) {
                return Err(invalid(format!(
                    "node {i}: bag is not sorted and duplicate-free"
                )));
            }
            let child_bag = |j: usize| -> &Vec<usize> { &self.nodes[x.children[j]].bag };
            let ok = match x.kind {
                NodeKind::Leaf => x.children.is_empty() && x.bag.is_empty(),
                NodeKind::Introduce(v) => {
                    x.children.len() == 1 && !child_bag(0).contains(&v) && {
                        let mut b = child_bag(0).clone();
                        b.push(v);
                        b.sort_unstable();
                        b == x.bag
                    }
                }
                NodeKind::Forget(v) => {
                    x.children.len() == 1 && child_bag(0).contains(&v) && {
                        let b: Vec<usize> =
                            child_bag(0).iter().copied().filter(|&w| w != v).collect();
                        b == x.bag
                    }
                }
                NodeKind::Join => {
                    x.children.len() == 2 && *child_bag(0) == x.bag && *child_bag(1) == x.bag
                }
            };
            if !ok {
                return Err(invalid(format!(
                    "node {i}: {:?} does not match its bags",
                    x.kind
                )));
            }
        }
        if self.postorder().len() != m {
            return Err(invalid("nodes unreachable from the root".into()));
        }
        let bags: Vec<Vec<usize>> = self.nodes.iter().map(|x| x.bag.clone()).collect();
        check_axioms(g, &bags, &parent)
    }
}

/// Elimination order of minimum width by dynamic programming over vertex subsets.
pub fn exact_elimination_order(g: &ColoredGraph) -> Vec<usize> {
    let n = g.n();
    assert!(
        n <= EXACT_TD_LIMIT,
        "exact search is limited to {EXACT_TD_LIMIT} vertices"
    );
    let nb: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect();
    // Vertices outside `s` and `v` reachable from `v` through `s`.
    let q = |s: u32, v: usize| -> u32 {
        let mut seen = (1u32 << v) | (nb[v] & s);
        let mut frontier = nb[v] & s;
        while frontier != 0 {
            let w = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = nb[w] & s & !seen;
            seen |= fresh;
            frontier |= fresh;
        }
        let mut reach = nb[v];
        let mut inner = seen & s;
        while inner != 0 {
            let w = inner.trailing_zeros() as usize;
            inner &= inner - 1;
            reach |= nb[w];
        }
        (reach & !s & !(1u32 << v)).count_ones()
    };
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut best = vec![u8::MAX; 1usize << n];
    let mut choice = vec![0u8; 1usize << n];
    best[0] = 0;
    for s in 1..=full as usize {
        let s32 = s as u32;
        let mut bits = s32;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let rest = s32 & !(1 << v);
            let w = best[rest as usize].max(q(rest, v) as u8);
            if w < best[s] {
                best[s] = w;
                choice[s] = v as u8;
            }
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let v = choice[s as usize] as usize;
        order.push(v);
        s &= !(1 << v);
    }
    order.reverse();
    order
}

/// Greedy minimum-degree elimination order, ties by vertex id.
pub fn min_degree_order(g: &ColoredGraph) -> Vec<usize> {
    let n = g.n();
    let mut nb: Vec<BTreeSet<usize>> = (0..n)
        .map(|v| g.neighbors(v).iter().copied().collect())
        .collect();
    let mut alive: BTreeSet<usize> = (0..n).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(&v) = alive.iter().min_by_key(|&&v| (nb[v].len(), v)) {
        let later: Vec<usize> = nb[v].iter().copied().collect();
        for (i, &a) in later.iter().enumerate() {
            nb[a].remove(&v);
            for &b in &later[i + 1..] {
                nb[a].insert(b);
                nb[b].insert(a);
            }
        }
        alive.remove(&v);
        order.push(v);
    }
    order
}

/// Exact nice decomposition for graphs up to [`EXACT_TD_LIMIT`] vertices.
pub fn compute_td(g: &ColoredGraph) -> Result<NiceTreeDecomposition, SolveError> {
    if g.n() > EXACT_TD_LIMIT {
        return Err(invalid(format!(
            "{} vertices exceed the exact limit {EXACT_TD_LIMIT}; supply a decomposition",
            g.n()
        )));
    }
    let td = TreeDecomposition::from_elimination_order(g, &exact_elimination_order(g));
    td.to_nice(td.bags.len() - 1, false)
}

/// Nice decomposition from the min-degree order with extra join nodes.
pub fn alternative_td(g: &ColoredGraph) -> Result<NiceTreeDecomposition, SolveError> {
    let td = TreeDecomposition::from_elimination_order(g, &min_degree_order(g));
    td.to_nice(td.bags.len() - 1, true)
}

/// Reads a PACE `.td` file (`s td bags width n`, `b id v...`, tree edges; all 1-indexed).
pub fn parse_td(text: &str) -> Result<TreeDecomposition, SolveError> {
    let mut bags: Vec<Option<Vec<usize>>> = Vec::new();
    let mut edges = Vec::new();
    let err = |line: usize, msg: &str| invalid(format!("line {}: {msg}", line + 1));
    let num = |line: usize, w: &str| -> Result<usize, SolveError> {
        w.parse::<usize>()
            .ok()
            .filter(|&x| x > 0)
            .ok_or_else(|| err(line, &format!("expected positive integer, got `{w}`")))
    };
    for (i, line) in text.lines().enumerate() {
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            [] | ["c", ..] => {}
            ["s", "td", count, _, _] => bags = vec![None; num(i, count)?],
            ["b", id, rest @ ..] => {
                let id = num(i, id)? - 1;
                let bag = rest
                    .iter()
                    .map(|w| num(i, w).map(|v| v - 1))
                    .collect::<Result<BTreeSet<_>, _>>()?;
                *bags
                    .get_mut(id)
                    .ok_or_else(|| err(i, "bag id out of range"))? =
                    Some(bag.into_iter().collect());
            }
            [a, b] => edges.push((num(i, a)? - 1, num(i, b)? - 1)),
            _ => return Err(err(i, "unrecognized line")),
        }
    }
    let bags = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| invalid(format!("bag {} missing", i + 1))))
        .collect::<Result<_, _>>()?;
    Ok(TreeDecomposition { bags, edges })
}

pub fn read_td(path: impl AsRef<std::path::Path>) -> Result<TreeDecomposition, SolveError> {
    let text = std::fs::read_to_string(path).map_err(|e| invalid(e.to_string()))?;
    parse_td(&text)
}

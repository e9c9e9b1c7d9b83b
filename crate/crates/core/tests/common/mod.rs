//! Independent test oracles and random instance generators.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use discovery_core::logic::{parse, Atom, BinOp, Formula, Quantifier, Sort};
use discovery_core::{ColoredGraph, Configuration, DiscoveryInstance};
use itertools::Itertools;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Erdos-Renyi graph with up to two random colors `C1`, `C2`.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> ColoredGraph {
    let edges: Vec<(usize, usize)> = (0..n)
        .tuple_combinations()
        .filter(|_| rng.gen_bool(p))
        .collect();
    let c1: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.35)).collect();
    let c2: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.35)).collect();
    ColoredGraph::new(n, edges, [("C1".to_string(), c1), ("C2".to_string(), c2)]).unwrap()
}

/// First-order conditions on the token set used across solver comparisons.
pub const FO_FORMULAS: &[&str] = &[
    "true",
    "exists x. (X(x) & C1(x))",
    "forall x. (X(x) -> C1(x))",
    "forall x. forall y. ((X(x) & X(y)) -> ~E(x,y))",
    "exists x. exists y. (X(x) & X(y) & E(x,y))",
    "forall x. (C2(x) -> (X(x) | exists y. (X(y) & E(x,y))))",
    "exists x. (X(x) & C1(x)) & exists y. (X(y) & C2(y))",
    "~exists x. (X(x) & C2(x))",
];

pub fn random_instance(
    rng: &mut ChaCha8Rng,
    n: usize,
    p: f64,
    max_k: usize,
    max_budget: usize,
) -> DiscoveryInstance {
    let g = random_graph(rng, n, p);
    let k = rng.gen_range(0..=max_k.min(n));
    let mut verts: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = rng.gen_range(i..n);
        verts.swap(i, j);
    }
    let f = parse(FO_FORMULAS[rng.gen_range(0..FO_FORMULAS.len())]).unwrap();
    let b = rng.gen_range(0..=max_budget);
    DiscoveryInstance::new(g, Configuration::new(verts[..k].iter().copied()), b, f).unwrap()
}

#[derive(Clone, Default)]
struct Env {
    vertex: HashMap<String, usize>,
    sets: HashMap<String, BTreeSet<usize>>,
    edge_sets: HashMap<String, BTreeSet<(usize, usize)>>,
}

/// Direct recursive evaluation over all assignments.
pub fn naive_eval(g: &ColoredGraph, f: &Formula, x: &BTreeSet<usize>) -> bool {
    eval(g, f, x, &mut Env::default())
}

fn eval(g: &ColoredGraph, f: &Formula, x: &BTreeSet<usize>, env: &mut Env) -> bool {
    match f {
        Formula::Const(b) => *b,
        Formula::Atom(a) => atom(g, a, x, env),
        Formula::Not(a) => !eval(g, a, x, env),
        Formula::Bin(op, a, b) => {
            let (l, r) = (eval(g, a, x, env), eval(g, b, x, env));
            match op {
                BinOp::And => l && r,
                BinOp::Or => l || r,
                BinOp::Implies => !l || r,
                BinOp::Iff => l == r,
            }
        }
        Formula::Quant(q, sort, name, body) => {
            let mut results = Vec::new();
            match sort {
                Sort::Vertex => {
                    for v in 0..g.n() {
                        let mut e = env.clone();
                        e.vertex.insert(name.clone(), v);
                        results.push(eval(g, body, x, &mut e));
                    }
                }
                Sort::VertexSet => {
                    for sub in (0..g.n()).powerset() {
                        let mut e = env.clone();
                        e.sets.insert(name.clone(), sub.into_iter().collect());
                        results.push(eval(g, body, x, &mut e));
                    }
                }
                Sort::EdgeSet => {
                    for sub in g.edges().iter().copied().powerset() {
                        let mut e = env.clone();
                        e.edge_sets.insert(name.clone(), sub.into_iter().collect());
                        results.push(eval(g, body, x, &mut e));
                    }
                }
            }
            match q {
                Quantifier::Exists => results.into_iter().any(|b| b),
                Quantifier::Forall => results.into_iter().all(|b| b),
            }
        }
    }
}

fn atom(g: &ColoredGraph, a: &Atom, x: &BTreeSet<usize>, env: &Env) -> bool {
    let v = |s: &str| env.vertex[s];
    match a {
        Atom::Edge(p, q) => g.has_edge(v(p), v(q)),
        Atom::Eq(p, q) => v(p) == v(q),
        Atom::Color(c, p) => g.vertex_has_named_color(c, v(p)),
        Atom::FreeSet(p) => x.contains(&v(p)),
        Atom::SetMember(s, p) => env.sets[s].contains(&v(p)),
        Atom::EdgeSetMember(z, p, q) => {
            let (a, b) = (v(p).min(v(q)), v(p).max(v(q)));
            env.edge_sets[z].contains(&(a, b))
        }
    }
}

/// Fewest single-token slides to a configuration satisfying the formula, by
/// breadth-first search over configurations.
pub fn brute_min_cost(inst: &DiscoveryInstance) -> Option<usize> {
    let g = &inst.graph;
    let start: BTreeSet<usize> = inst.start.iter().collect();
    let mut seen: HashSet<BTreeSet<usize>> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([(start, 0usize)]);
    while let Some((c, d)) = queue.pop_front() {
        if naive_eval(g, &inst.formula, &c) {
            return Some(d);
        }
        for &u in &c {
            for &w in g.neighbors(u) {
                if c.contains(&w) {
                    continue;
                }
                let mut next = c.clone();
                next.remove(&u);
                next.insert(w);
                if seen.insert(next.clone()) {
                    queue.push_back((next, d + 1));
                }
            }
        }
    }
    None
}

/// Yes exactly when the brute-force cost fits the budget.
pub fn brute_decide(inst: &DiscoveryInstance) -> Option<usize> {
    brute_min_cost(inst).filter(|&c| c <= inst.budget)
}

/// Random partial 2-tree: a 2-tree grown edge by edge, then thinned.
pub fn partial_two_tree(rng: &mut ChaCha8Rng, n: usize, keep: f64, colors: usize) -> ColoredGraph {
    let mut edges: Vec<(usize, usize)> = Vec::new();
    if n >= 2 {
        edges.push((0, 1));
    }
    for v in 2..n {
        let (a, b) = edges[rng.gen_range(0..edges.len())];
        edges.push((a, v));
        edges.push((b, v));
    }
    let edges: Vec<(usize, usize)> = edges.into_iter().filter(|_| rng.gen_bool(keep)).collect();
    ColoredGraph::new(n, edges, random_colors(rng, n, colors)).unwrap()
}

pub fn random_colors(rng: &mut ChaCha8Rng, n: usize, colors: usize) -> Vec<(String, Vec<usize>)> {
    (1..=colors)
        .map(|c| {
            (
                format!("C{c}"),
                (0..n).filter(|_| rng.gen_bool(0.35)).collect(),
            )
        })
        .collect()
}

/// Blow-up of a random type graph: each type becomes a clique or an
/// independent set, so twin classes have more than one vertex.
pub fn twin_graph(rng: &mut ChaCha8Rng, n: usize, colors: usize) -> ColoredGraph {
    let types = rng.gen_range(1..=n.clamp(1, 4));
    let of: Vec<usize> = (0..n)
        .map(|v| {
            if v < types {
                v
            } else {
                rng.gen_range(0..types)
            }
        })
        .collect();
    let clique: Vec<bool> = (0..types).map(|_| rng.gen_bool(0.5)).collect();
    let joined: HashSet<(usize, usize)> = (0..types)
        .tuple_combinations()
        .filter(|_| rng.gen_bool(0.5))
        .collect();
    let edges: Vec<(usize, usize)> = (0..n)
        .tuple_combinations()
        .filter(|&(u, v)| {
            let (a, b) = (of[u].min(of[v]), of[u].max(of[v]));
            if a == b {
                clique[a]
            } else {
                joined.contains(&(a, b))
            }
        })
        .collect();
    let per_type: Vec<Vec<bool>> = (0..types)
        .map(|_| (0..colors).map(|_| rng.gen_bool(0.4)).collect())
        .collect();
    let named = (0..colors).map(|c| {
        (
            format!("C{}", c + 1),
            (0..n).filter(|&v| per_type[of[v]][c]).collect(),
        )
    });
    ColoredGraph::new(n, edges, named).unwrap()
}

/// Start set of `k` distinct random vertices.
pub fn random_start(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Configuration {
    let mut verts: Vec<usize> = (0..n).collect();
    for i in 0..k.min(n) {
        let j = rng.gen_range(i..n);
        verts.swap(i, j);
    }
    Configuration::new(verts[..k.min(n)].iter().copied())
}

/// Conditions of quantifier rank at most two, including monadic second-order ones.
pub const MSO_FORMULAS: &[&str] = &[
    "existsS Y. exists x. (Y(x) & X(x) & C3(x))",
    "forallS Y. (forall x. ~Y(x) | exists y. (Y(y) & X(y)))",
    "existsS Y. forall x. (Y(x) <-> (X(x) & C1(x)))",
    "forallS Y. forall x. ((Y(x) & X(x)) -> ~C2(x))",
];

/// Multicolored clique instances with three classes: hand-built ones first,
/// then random ones.
pub fn mcc_suite(
    seed: u64,
    random: usize,
) -> Vec<discovery_core::reductions::MulticoloredCliqueInstance> {
    use discovery_core::reductions::MulticoloredCliqueInstance as M;
    let mut out = vec![
        M::new(3, 1, [(0, 1), (1, 2), (0, 2)]).unwrap(),
        M::new(3, 1, [(0, 1), (1, 2)]).unwrap(),
        M::new(3, 2, [(0, 2), (2, 4), (0, 4), (1, 3)]).unwrap(),
        M::new(3, 2, [(0, 2), (2, 4), (1, 4), (1, 3), (0, 5)]).unwrap(),
        M::new(3, 3, [(2, 5), (5, 8), (2, 8), (0, 3), (1, 7)]).unwrap(),
    ];
    let mut r = rng(seed);
    while out.len() < 5 + random {
        let n = r.gen_range(1..=3);
        let p = r.gen_range(0.3..0.8);
        let edges: Vec<(usize, usize)> = (0..3 * n)
            .tuple_combinations()
            .filter(|&(a, b)| a / n != b / n && r.gen_bool(p))
            .collect();
        out.push(M::new(3, n, edges).unwrap());
    }
    out
}

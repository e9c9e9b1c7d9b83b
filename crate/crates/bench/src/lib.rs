//! Benchmark fixtures shared by the criterion harness.

use discovery_core::logic::parse;
use discovery_core::reductions::{
    generate, ArcSupplyInstance, Family, GenOptions, GeneratedInstance, MulticoloredCliqueInstance,
    Source, SupplyArc,
};
use discovery_core::{ColoredGraph, Configuration, DiscoveryInstance};

/// Path on `n` vertices with the last three colored `C1`; tokens start at the
/// front and must reach a colored vertex without becoming adjacent.
pub fn path_instance(n: usize, k: usize, budget: usize) -> DiscoveryInstance {
    let edges = (1..n).map(|i| (i - 1, i));
    let colored: Vec<usize> = (n.saturating_sub(3)..n).collect();
    let g = ColoredGraph::new(n, edges, [("C1".to_string(), colored)]).expect("path is simple");
    let f = parse("exists z. (X(z) & C1(z)) & forall x. forall y. ((X(x) & X(y)) -> ~E(x,y))")
        .expect("valid formula");
    DiscoveryInstance::new(g, Configuration::new((0..k).map(|i| 2 * i)), budget, f)
        .expect("valid instance")
}

/// Complete bipartite graph with sides `a` and `b`: two twin classes.
pub fn bipartite_instance(a: usize, b: usize, k: usize, budget: usize) -> DiscoveryInstance {
    let edges: Vec<(usize, usize)> = (0..a)
        .flat_map(|u| (a..a + b).map(move |v| (u, v)))
        .collect();
    let g = ColoredGraph::new(a + b, edges, [("C1".to_string(), (a..a + b).collect())])
        .expect("simple");
    let f = parse("forall x. (X(x) -> C1(x))").expect("valid formula");
    DiscoveryInstance::new(g, Configuration::new(0..k), budget, f).expect("valid instance")
}

pub fn stars_instance() -> GeneratedInstance {
    let m = MulticoloredCliqueInstance::new(3, 2, [(0, 2), (2, 4), (0, 4), (1, 3)])
        .expect("valid source");
    generate(
        Family::Stars,
        &Source::MulticoloredClique(m),
        &GenOptions::default(),
    )
    .expect("generates")
}

pub fn twincover_instance() -> GeneratedInstance {
    let p = ArcSupplyInstance {
        demands: vec![1, 1],
        arcs: vec![SupplyArc {
            from: 0,
            to: 1,
            pairs: vec![(1, 1)],
        }],
    };
    generate(
        Family::Twincover,
        &Source::ArcSupply(p),
        &GenOptions::default(),
    )
    .expect("generates")
}

//! Acceptance suite: one PASS/FAIL line per criterion, then a single verdict.

mod common;

use std::collections::{BTreeSet, HashMap};
use std::time::{Duration, Instant};

use common::{
    mcc_suite, naive_eval, partial_two_tree, random_colors, random_start, rng, twin_graph,
    FO_FORMULAS, MSO_FORMULAS,
};
use discovery_core::graph::apply_sequence;
use discovery_core::logic::{
    parse, stats, Atom, ClosureChecker, Formula, ModelChecker, MoveModel, Quantifier, Sort,
};
use discovery_core::nd::flow::Arc;
use discovery_core::nd::{
    min_budget_nd, min_cost_flow, shape_of, solve_minmcf, solve_nd, twin_partition, FlowNetwork,
    NdOptions,
};
use discovery_core::oracle::{min_budget, min_budget_bfs, solve_bfs, solve_enumerate, Limits};
use discovery_core::reductions::{
    certificate, check_conditions, decide_paths, decide_stars, generate, solve_source,
    verify_witness, ArcSupplyInstance, Family, GenOptions, GeneratedInstance,
    MulticoloredCliqueInstance, Source, SourceSolution, SupplyArc,
};
use discovery_core::tw::{
    alternative_td, compute_td, solve_tw, solve_tw_with, EfGameEngine, EngineKind, TwOptions,
    TypeEngine,
};
use discovery_core::{ColoredGraph, Configuration, DiscoveryInstance, SolveError};
use itertools::Itertools;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn instance(
    g: ColoredGraph,
    start: Configuration,
    budget: usize,
    formula: &str,
) -> DiscoveryInstance {
    DiscoveryInstance::new(g, start, budget, parse(formula).unwrap()).unwrap()
}

fn nd_vs_oracle() -> Outcome {
    let clock = Instant::now();
    let mut r = rng(101);
    let formulas: Vec<&str> = FO_FORMULAS.iter().chain(MSO_FORMULAS).copied().collect();
    let (mut yes, mut mismatches) = (0, Vec::new());
    for i in 0..200 {
        let n = r.gen_range(1..=10);
        let colors = r.gen_range(0..=3);
        let g = if i % 2 == 0 {
            twin_graph(&mut r, n, colors.max(1))
        } else {
            let edges: Vec<(usize, usize)> = (0..n)
                .tuple_combinations()
                .filter(|_| r.gen_bool(0.4))
                .collect();
            ColoredGraph::new(n, edges, random_colors(&mut r, n, colors)).unwrap()
        };
        let names: BTreeSet<String> = g.color_names().iter().cloned().collect();
        let usable: Vec<&str> = formulas
            .iter()
            .copied()
            .filter(|f| parse(f).unwrap().color_names().is_subset(&names))
            .collect();
        let f = usable[r.gen_range(0..usable.len())];
        let k = r.gen_range(0..=4.min(n));
        let inst = instance(g, random_start(&mut r, n, k), r.gen_range(0..=6), f);
        let oracle = solve_bfs(&inst, &Limits::default()).unwrap();
        let nd = solve_nd(&inst, &NdOptions::default()).unwrap();
        let mb = (
            min_budget_nd(&inst, &NdOptions::default()).unwrap(),
            min_budget_bfs(&inst, &Limits::default()).unwrap(),
        );
        yes += oracle.is_yes() as usize;
        if oracle.cost() != nd.cost() || mb.0 != mb.1 {
            mismatches.push(i);
        }
    }
    let t = clock.elapsed();
    outcome(
        mismatches.is_empty() && t < Duration::from_secs(300),
        format!(
            "200 instances, {yes} yes, mismatches {mismatches:?}, {:.1}s",
            t.as_secs_f64()
        ),
    )
}

fn tw_vs_oracle() -> Outcome {
    let mut r = rng(102);
    let (mut yes, mut distinct, mut mismatches) = (0, 0, Vec::new());
    for i in 0..100 {
        let n = r.gen_range(1..=9);
        let g = partial_two_tree(&mut r, n, 0.8, 3);
        let names: BTreeSet<String> = g.color_names().iter().cloned().collect();
        let usable: Vec<&str> = FO_FORMULAS
            .iter()
            .chain(MSO_FORMULAS)
            .copied()
            .filter(|f| parse(f).unwrap().color_names().is_subset(&names))
            .collect();
        let f = usable[r.gen_range(0..usable.len())];
        let k = r.gen_range(0..=4.min(n));
        let inst = instance(g, random_start(&mut r, n, k), r.gen_range(0..=6), f);
        let oracle = solve_bfs(&inst, &Limits::default()).unwrap();
        let td = compute_td(&inst.graph).unwrap();
        let alt = alternative_td(&inst.graph).unwrap();
        distinct += (td != alt) as usize;
        let a = solve_tw(&inst, &td, &TwOptions::default()).unwrap();
        let b = solve_tw(&inst, &alt, &TwOptions::default()).unwrap();
        yes += oracle.is_yes() as usize;
        if a.cost() != oracle.cost() || b.cost() != oracle.cost() {
            mismatches.push(i);
        }
    }
    outcome(
        mismatches.is_empty() && distinct > 0,
        format!("100 partial 2-trees, {yes} yes, {distinct} with distinct decompositions, mismatches {mismatches:?}"),
    )
}

fn closure_vs_oracle() -> Outcome {
    let mut r = rng(103);
    let (mut yes, mut mismatches) = (0, Vec::new());
    for i in 0..100 {
        let n = r.gen_range(1..=6);
        let edges: Vec<(usize, usize)> = (0..n)
            .tuple_combinations()
            .filter(|_| r.gen_bool(0.45))
            .collect();
        let g = ColoredGraph::new(n, edges, random_colors(&mut r, n, 2)).unwrap();
        let f = FO_FORMULAS[r.gen_range(0..FO_FORMULAS.len())];
        let k = r.gen_range(0..=2.min(n));
        let b = r.gen_range(0..=3);
        let inst = instance(g, random_start(&mut r, n, k), b, f);
        let oracle = solve_bfs(&inst, &Limits::default()).unwrap().is_yes();
        let closure =
            ClosureChecker::expanded(&inst.graph, &inst.formula, b as i64, MoveModel::Slide)
                .unwrap()
                .check(&inst.start);
        yes += oracle as usize;
        if oracle != closure {
            mismatches.push(i);
        }
    }
    outcome(
        mismatches.is_empty(),
        format!("100 instances, {yes} yes, mismatches {mismatches:?}"),
    )
}

fn same_shape_sets_agree() -> Outcome {
    let mut r = rng(104);
    let formulas: Vec<&str> = FO_FORMULAS
        .iter()
        .chain(MSO_FORMULAS)
        .copied()
        .filter(|f| stats(&parse(f).unwrap()).q_phi() <= 4)
        .collect();
    let (mut pairs, mut classes, mut splits) = (0, 0, 0);
    while pairs < 50 {
        let n = r.gen_range(2..=8);
        let g = twin_graph(&mut r, n, 3);
        let phi = parse(formulas[pairs % formulas.len()]).unwrap();
        let q = stats(&phi).q_phi() as usize;
        let p = twin_partition(&g);
        let mut seen: HashMap<_, bool> = HashMap::new();
        for x in (0..n).powerset() {
            let truth = naive_eval(&g, &phi, &x.iter().copied().collect());
            let shape = shape_of(&p, q, x);
            match seen.get(&shape) {
                Some(&t) if t != truth => splits += 1,
                Some(_) => {}
                None => {
                    seen.insert(shape, truth);
                }
            }
        }
        classes += seen.len();
        pairs += 1;
    }
    outcome(
        splits == 0,
        format!("50 pairs, {classes} shape classes, {splits} truth splits"),
    )
}

fn random_network(r: &mut ChaCha8Rng) -> FlowNetwork {
    let nodes = r.gen_range(2..=6);
    let intervals = (0..nodes)
        .map(|_| {
            let lo = r.gen_range(-2..=1);
            (lo, lo + r.gen_range(0..=2))
        })
        .collect();
    let mut net = FlowNetwork::new(intervals);
    for _ in 0..r.gen_range(1..=7) {
        let from = r.gen_range(0..nodes);
        let to = (from + r.gen_range(1..nodes)) % nodes;
        net.add_arc(from, to, Some(r.gen_range(0..=3)), r.gen_range(0..=3));
    }
    net
}

/// Cheapest integral flow by enumerating every arc value.
fn brute_flow(net: &FlowNetwork) -> Option<i64> {
    net.arcs
        .iter()
        .map(|a: &Arc| 0..=a.cap.unwrap())
        .multi_cartesian_product()
        .filter(|f| net.is_feasible(f))
        .map(|f| net.cost_of(&f))
        .min()
}

fn minmcf_vs_brute() -> Outcome {
    let mut r = rng(105);
    let (mut feasible, mut mismatches) = (0, Vec::new());
    for i in 0..100 {
        let net = random_network(&mut r);
        let expect = brute_flow(&net);
        let budget = r.gen_range(0..=8);
        // Intervals that cannot sum to zero are reported as an error, which counts as infeasible.
        let got = match solve_minmcf(&net, budget) {
            Err(SolveError::UnbalancedIntervals(_)) => None,
            other => other.unwrap(),
        };
        let full = match min_cost_flow(&net) {
            Err(SolveError::UnbalancedIntervals(_)) => None,
            other => other.unwrap(),
        };
        feasible += expect.is_some() as usize;
        let ok = full.as_ref().map(|s| s.cost) == expect
            && got.as_ref().map(|s| s.cost) == expect.filter(|&c| c <= budget)
            && got
                .iter()
                .all(|s| net.is_feasible(&s.flow) && net.cost_of(&s.flow) == s.cost);
        if !ok {
            mismatches.push(i);
        }
    }
    outcome(
        mismatches.is_empty() && feasible > 10,
        format!("100 networks, {feasible} feasible, mismatches {mismatches:?}"),
    )
}

fn enumerate_vs_bfs() -> Outcome {
    let mut r = rng(106);
    let (mut yes, mut mismatches) = (0, Vec::new());
    for i in 0..300 {
        let n = r.gen_range(1..=6);
        let edges: Vec<(usize, usize)> = (0..n)
            .tuple_combinations()
            .filter(|_| r.gen_bool(0.4))
            .collect();
        let g = ColoredGraph::new(n, edges, random_colors(&mut r, n, 2)).unwrap();
        let f = FO_FORMULAS[r.gen_range(0..FO_FORMULAS.len())];
        let k = r.gen_range(0..=3.min(n));
        let inst = instance(g, random_start(&mut r, n, k), r.gen_range(0..=6), f);
        let a = solve_enumerate(&inst, &Limits::default()).unwrap();
        let b = solve_bfs(&inst, &Limits::default()).unwrap();
        let ma = min_budget(&inst, &Limits::default()).unwrap();
        let mb = min_budget_bfs(&inst, &Limits::default()).unwrap();
        yes += a.is_yes() as usize;
        if a.cost() != b.cost() || ma != mb {
            mismatches.push(i);
        }
    }
    outcome(
        mismatches.is_empty(),
        format!("300 instances, {yes} yes, mismatches {mismatches:?}"),
    )
}

fn mcc_decisions(suite: &[MulticoloredCliqueInstance]) -> Outcome {
    let (mut no, mut mismatches) = (0, Vec::new());
    for (i, m) in suite.iter().enumerate() {
        let source = Source::MulticoloredClique(m.clone());
        let expect = solve_source(&source).is_some();
        let s = decide_stars(&generate(Family::Stars, &source, &GenOptions::default()).unwrap())
            .unwrap();
        let p = decide_paths(&generate(Family::Paths, &source, &GenOptions::default()).unwrap())
            .unwrap();
        no += (!expect) as usize;
        if s != expect || p != expect {
            mismatches.push(i);
        }
    }
    outcome(
        mismatches.is_empty() && no >= 5 && suite.len() == 25,
        format!(
            "{} sources, {no} no-instances, mismatches {mismatches:?}",
            suite.len()
        ),
    )
}

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

fn supply_suite() -> Vec<ArcSupplyInstance> {
    vec![
        one_arc(),
        ArcSupplyInstance {
            demands: vec![2, 1],
            arcs: vec![SupplyArc {
                from: 0,
                to: 1,
                pairs: vec![(1, 2), (2, 1)],
            }],
        },
        ArcSupplyInstance {
            demands: vec![1, 2, 1],
            arcs: vec![
                SupplyArc {
                    from: 0,
                    to: 1,
                    pairs: vec![(1, 1)],
                },
                SupplyArc {
                    from: 1,
                    to: 2,
                    pairs: vec![(2, 2), (1, 1)],
                },
            ],
        },
    ]
}

/// Applies the certificate of a yes source; `Some(expected length)` pins its length.
fn certificate_ok(gen: &GeneratedInstance, expected: Option<usize>) -> Result<(), String> {
    let sol = solve_source(&gen.provenance.source).ok_or("source has no solution")?;
    let seq = certificate(gen, &sol).map_err(|e| e.to_string())?;
    if seq.len() != gen.instance.budget || expected.is_some_and(|e| e != seq.len()) {
        return Err(format!(
            "length {} against budget {}",
            seq.len(),
            gen.instance.budget
        ));
    }
    let t = apply_sequence(gen.graph(), &gen.instance.start, &seq).map_err(|e| e.to_string())?;
    let report = check_conditions(gen, &t);
    if !report.ok() {
        return Err(format!("checker rejects the target: {:?}", report.failed()));
    }
    Ok(())
}

fn certificates(gens: &[GeneratedInstance]) -> Outcome {
    let clique3 = MulticoloredCliqueInstance::new(3, 3, [(1, 4), (4, 7), (1, 7), (0, 3)]).unwrap();
    let pinned = [
        (
            generate(
                Family::Stars,
                &Source::MulticoloredClique(clique3),
                &GenOptions::default(),
            )
            .unwrap(),
            36,
        ),
        (
            generate(
                Family::Twincover,
                &Source::ArcSupply(one_arc()),
                &GenOptions::default(),
            )
            .unwrap(),
            132,
        ),
        (
            generate(
                Family::Bandwidth,
                &Source::ArcSupply(one_arc()),
                &GenOptions::default(),
            )
            .unwrap(),
            192,
        ),
    ];
    let mut failures = Vec::new();
    for (g, len) in &pinned {
        if let Err(e) = certificate_ok(g, Some(*len)) {
            failures.push(format!("{} pinned: {e}", g.family()));
        }
    }
    let mut checked = pinned.len();
    for g in gens
        .iter()
        .filter(|g| solve_source(&g.provenance.source).is_some())
    {
        checked += 1;
        if let Err(e) = certificate_ok(g, None) {
            failures.push(format!("{}: {e}", g.family()));
        }
    }
    outcome(
        failures.is_empty(),
        format!("{checked} certificates (lengths 36, 132, 192 pinned), failures {failures:?}"),
    )
}

fn witnesses(gens: &[GeneratedInstance]) -> Outcome {
    let mut worst: HashMap<Family, (usize, usize)> = HashMap::new();
    let mut failures = Vec::new();
    for g in gens {
        let w = verify_witness(g);
        if !w.ok {
            failures.push(format!("{}: {}", g.family(), w.detail));
        }
        let e = worst.entry(g.family()).or_insert((0, 0));
        if w.value * e.1.max(1) >= e.0 * w.bound.max(1) {
            *e = (w.value, w.bound);
        }
    }
    let summary = worst
        .iter()
        .sorted_by_key(|(f, _)| **f)
        .map(|(f, (v, b))| format!("{f} {v}/{b}"))
        .join(", ");
    outcome(
        failures.is_empty(),
        format!(
            "{} witnesses ({summary}), failures {failures:?}",
            gens.len()
        ),
    )
}

/// Random relocations of a few tokens from `base`.
fn perturb(r: &mut ChaCha8Rng, n: usize, base: &Configuration) -> Configuration {
    let mut set: Vec<usize> = base.iter().collect();
    for _ in 0..r.gen_range(0..=2) {
        if set.is_empty() || set.len() == n {
            break;
        }
        let i = r.gen_range(0..set.len());
        let free: Vec<usize> = (0..n).filter(|v| !set.contains(v)).collect();
        set[i] = free[r.gen_range(0..free.len())];
    }
    Configuration::new(set)
}

/// Agreement of the procedural checker and generic model checking on 50 configurations.
fn checker_agreement(
    gen: &GeneratedInstance,
    r: &mut ChaCha8Rng,
) -> Result<(usize, usize), String> {
    let sol = solve_source(&gen.provenance.source).ok_or("source has no solution")?;
    let target = apply_sequence(
        gen.graph(),
        &gen.instance.start,
        &certificate(gen, &sol).map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?;
    let mut mc =
        ModelChecker::new(gen.graph(), &gen.instance.formula, &[]).map_err(|e| e.to_string())?;
    let n = gen.graph().n();
    let (mut yes, mut disagreements) = (0, 0);
    for i in 0..50 {
        let base = if i % 2 == 0 {
            &target
        } else {
            &gen.instance.start
        };
        let c = perturb(r, n, base);
        let procedural = check_conditions(gen, &c).ok();
        yes += procedural as usize;
        disagreements += (procedural != mc.check(&c)) as usize;
    }
    Ok((yes, disagreements))
}

fn checker_vs_model_check() -> (Outcome, Vec<GeneratedInstance>) {
    let mut r = rng(110);
    let triangle = Source::MulticoloredClique(
        MulticoloredCliqueInstance::new(3, 1, [(0, 1), (1, 2), (0, 2)]).unwrap(),
    );
    let gens = vec![
        generate(Family::Stars, &triangle, &GenOptions::default()).unwrap(),
        generate(Family::Paths, &triangle, &GenOptions::default()).unwrap(),
        generate(
            Family::Twincover,
            &Source::ArcSupply(one_arc()),
            &GenOptions { sigma: Some(2) },
        )
        .unwrap(),
        generate(
            Family::Bandwidth,
            &Source::ArcSupply(one_arc()),
            &GenOptions { sigma: Some(2) },
        )
        .unwrap(),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for g in &gens {
        let n = g.graph().n();
        match checker_agreement(g, &mut r) {
            Ok((yes, bad)) => {
                pass &= bad == 0 && yes > 0 && yes < 50 && n <= 40;
                let size = if n <= 40 {
                    String::new()
                } else {
                    " exceeds 40 nodes".to_string()
                };
                parts.push(format!(
                    "{} n={n}{size}: {yes}/50 satisfied, {bad} disagreements",
                    g.family()
                ));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{} n={n}: {e}", g.family()));
            }
        }
    }
    (outcome(pass, parts.join("; ")), gens)
}

/// Random first-order formula of rank at most `rank` over the given colors,
/// with the free vertex variables `b0..b{free-1}`.
fn random_formula(
    r: &mut ChaCha8Rng,
    rank: usize,
    scope: &mut Vec<String>,
    colors: &[String],
    depth: usize,
) -> Formula {
    let choice = if depth == 0 { 0 } else { r.gen_range(0..6) };
    match choice {
        3 | 4 if rank > 0 => {
            let name = format!("v{}", scope.len());
            scope.push(name.clone());
            let body = random_formula(r, rank - 1, scope, colors, depth - 1);
            scope.pop();
            let q = if choice == 3 {
                Quantifier::Exists
            } else {
                Quantifier::Forall
            };
            Formula::quant(q, Sort::Vertex, &name, body)
        }
        1 => Formula::not(random_formula(r, rank, scope, colors, depth - 1)),
        2 | 5 => {
            let a = random_formula(r, rank, scope, colors, depth - 1);
            let b = random_formula(r, rank, scope, colors, depth - 1);
            if r.gen_bool(0.5) {
                Formula::and(a, b)
            } else {
                Formula::or(a, b)
            }
        }
        _ if scope.is_empty() => Formula::Const(r.gen_bool(0.5)),
        _ => {
            let pick = |r: &mut ChaCha8Rng| scope[r.gen_range(0..scope.len())].clone();
            let a = pick(r);
            match r.gen_range(0..4) {
                0 => Formula::Atom(Atom::Edge(a, pick(r))),
                1 => Formula::Atom(Atom::Eq(a, pick(r))),
                2 if !colors.is_empty() => {
                    Formula::Atom(Atom::Color(colors[r.gen_range(0..colors.len())].clone(), a))
                }
                _ => Formula::Atom(Atom::FreeSet(a)),
            }
        }
    }
}

fn ef_vs_canonical() -> Outcome {
    let mut r = rng(111);
    let (mut mismatches, mut merges, mut checked, mut splits) = (Vec::new(), 0, 0, 0);
    for i in 0..50 {
        let n = r.gen_range(3..=9);
        let g = partial_two_tree(&mut r, n, 0.85, 2);
        let f = FO_FORMULAS[r.gen_range(0..FO_FORMULAS.len())];
        let k = r.gen_range(0..=3.min(n));
        let inst = instance(g, random_start(&mut r, n, k), r.gen_range(0..=5), f);
        let td = compute_td(&inst.graph).unwrap();
        let a = solve_tw(&inst, &td, &TwOptions::default()).unwrap();
        let rounds = stats(&inst.formula).quantifier_rank;
        let mut ef = EfGameEngine::new(inst.graph.color_names(), &inst.formula, rounds);
        let opts = TwOptions {
            engine: EngineKind::EfGame,
            ..TwOptions::default()
        };
        let b = solve_tw_with(&inst, &td, &mut ef, &opts).unwrap();
        if a.cost() != b.cost() {
            mismatches.push(i);
        }
        let names = inst.graph.color_names().to_vec();
        merges += ef.merges.len();
        for (kept, merged) in ef.merges.iter().take(25) {
            let (ga, xa) = ef.representative(*kept).to_graph(&names);
            let (gb, xb) = merged.to_graph(&names);
            let free: Vec<String> = (0..merged.boundary).map(|j| format!("b{j}")).collect();
            let refs: Vec<&str> = free.iter().map(String::as_str).collect();
            let pins: Vec<usize> = (0..merged.boundary).collect();
            checked += 1;
            for _ in 0..200 {
                let mut scope = free.clone();
                let phi = random_formula(&mut r, rounds, &mut scope, &names, 5);
                let ta = ModelChecker::new(&ga, &phi, &refs)
                    .unwrap()
                    .check_with(&xa, &pins);
                let tb = ModelChecker::new(&gb, &phi, &refs)
                    .unwrap()
                    .check_with(&xb, &pins);
                splits += (ta != tb) as usize;
            }
        }
    }
    outcome(
        mismatches.is_empty() && splits == 0 && checked > 0,
        format!("50 instances, mismatches {mismatches:?}; {merges} merges, {checked} checked on 200 formulas each, {splits} splits"),
    )
}

#[test]
fn acceptance() {
    let suite = mcc_suite(107, 20);
    let mut gens: Vec<GeneratedInstance> = Vec::new();
    for m in &suite {
        for f in [Family::Stars, Family::Paths] {
            gens.push(
                generate(
                    f,
                    &Source::MulticoloredClique(m.clone()),
                    &GenOptions::default(),
                )
                .unwrap(),
            );
        }
    }
    for p in supply_suite() {
        for f in [Family::Twincover, Family::Bandwidth] {
            gens.push(generate(f, &Source::ArcSupply(p.clone()), &GenOptions::default()).unwrap());
        }
    }
    let (c10, small) = checker_vs_model_check();
    gens.extend(small);
    let results: Vec<(usize, &str, Outcome)> = vec![
        (
            1,
            "neighborhood diversity solver agrees with the oracle",
            nd_vs_oracle(),
        ),
        (
            2,
            "treewidth solver agrees with the oracle on both decompositions",
            tw_vs_oracle(),
        ),
        (
            3,
            "budget closure agrees with the oracle",
            closure_vs_oracle(),
        ),
        (4, "same-shape sets agree on the formula", same_shape_sets_agree()),
        (
            5,
            "min-cost flow agrees with exhaustive integral flows",
            minmcf_vs_brute(),
        ),
        (
            6,
            "subset enumeration agrees with breadth-first search",
            enumerate_vs_bfs(),
        ),
        (
            7,
            "structured deciders agree with clique search",
            mcc_decisions(&suite),
        ),
        (
            8,
            "certificates have length b, apply and pass the checkers",
            certificates(&gens),
        ),
        (9, "parameter witnesses meet their bounds", witnesses(&gens)),
        (
            10,
            "condition checkers agree with generic model checking on graphs of at most 40 nodes",
            c10,
        ),
        (
            11,
            "game-based types agree with canonical types",
            ef_vs_canonical(),
        ),
    ];
    for (i, name, o) in &results {
        println!(
            "criterion {i:>2} {}: {name} [{}]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    let failed: Vec<usize> = results.iter().filter(|r| !r.2.pass).map(|r| r.0).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn stars_suite_yes_sources_survive_json() {
    for m in mcc_suite(107, 20).into_iter().take(5) {
        let source = Source::MulticoloredClique(m);
        let g = generate(Family::Stars, &source, &GenOptions::default()).unwrap();
        let back = GeneratedInstance::from_json(&g.to_json()).unwrap();
        assert_eq!(back.provenance, g.provenance);
        if let Some(SourceSolution::Clique(c)) = solve_source(&source) {
            assert_eq!(
                certificate(&back, &SourceSolution::Clique(c))
                    .unwrap()
                    .len(),
                g.instance.budget
            );
        }
    }
}

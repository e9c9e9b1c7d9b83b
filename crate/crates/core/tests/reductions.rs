mod common;

use common::mcc_suite;
use discovery_core::graph::apply_sequence;
use discovery_core::reductions::{
    certificate, check_conditions, decide_stars, generate, solve_source, verify_witness,
    ArcSupplyInstance, Family, GenOptions, GeneratedInstance, MulticoloredCliqueInstance, Source,
    SupplyArc,
};

fn one_arc() -> Source {
    Source::ArcSupply(ArcSupplyInstance {
        demands: vec![1, 1],
        arcs: vec![SupplyArc {
            from: 0,
            to: 1,
            pairs: vec![(1, 1)],
        }],
    })
}

fn triangle() -> Source {
    Source::MulticoloredClique(
        MulticoloredCliqueInstance::new(3, 1, [(0, 1), (1, 2), (0, 2)]).unwrap(),
    )
}

fn all_families() -> Vec<GeneratedInstance> {
    Family::ALL
        .into_iter()
        .map(|f| {
            let src = if f.from_clique() {
                triangle()
            } else {
                one_arc()
            };
            generate(f, &src, &GenOptions::default()).unwrap()
        })
        .collect()
}

#[test]
fn generation_is_deterministic_and_round_trips() {
    for (a, b) in all_families().iter().zip(all_families()) {
        assert_eq!(a.to_json(), b.to_json());
        let back = GeneratedInstance::from_json(&a.to_json()).unwrap();
        assert_eq!(back.provenance, a.provenance);
        assert_eq!(back.to_json(), a.to_json());
    }
}

#[test]
fn start_configuration_fails_and_certificate_target_passes() {
    for g in all_families() {
        assert!(
            !check_conditions(&g, &g.instance.start).ok(),
            "{}",
            g.family()
        );
        let sol = solve_source(&g.provenance.source).unwrap();
        let seq = certificate(&g, &sol).unwrap();
        assert_eq!(seq.len(), g.instance.budget);
        let t = apply_sequence(g.graph(), &g.instance.start, &seq).unwrap();
        assert!(check_conditions(&g, &t).ok(), "{}", g.family());
        assert!(verify_witness(&g).ok, "{}", g.family());
    }
}

#[test]
fn wrong_source_kind_is_rejected() {
    assert!(generate(Family::Stars, &one_arc(), &GenOptions::default()).is_err());
    assert!(generate(Family::Bandwidth, &triangle(), &GenOptions::default()).is_err());
}

#[test]
fn removing_a_clique_edge_flips_the_decision() {
    let yes = MulticoloredCliqueInstance::new(3, 2, [(0, 2), (2, 4), (0, 4), (1, 3)]).unwrap();
    let no = MulticoloredCliqueInstance::new(3, 2, [(0, 2), (2, 4), (1, 3)]).unwrap();
    let decide = |m: &MulticoloredCliqueInstance| {
        decide_stars(
            &generate(
                Family::Stars,
                &Source::MulticoloredClique(m.clone()),
                &GenOptions::default(),
            )
            .unwrap(),
        )
        .unwrap()
    };
    assert!(decide(&yes));
    assert!(!decide(&no));
}

#[test]
fn suite_contains_both_answers() {
    let suite = mcc_suite(107, 20);
    let yes = suite
        .iter()
        .filter(|m| solve_source(&Source::MulticoloredClique((*m).clone())).is_some())
        .count();
    assert!(yes >= 5 && suite.len() - yes >= 5);
}

use aanet_core::edmoga::{
    crossover_at, enumerate_single_hop, mutate, run, EpsilonArchive, InsertOutcome, OptimizerConfig,
};
use aanet_core::flightdata::Snapshot;
use aanet_core::oracle::{enumerate_all_paths, exact_pareto_front, naive_pareto, EnumerationLimits};
use aanet_core::par;
use aanet_core::pathobjectives::{dominates, Candidate, Network, RoutePath};
use aanet_core::scenario::{self, aircraft_at, station, BNE, SYD};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn assert_hard_constraints(front: &[Candidate]) {
    for c in front {
        assert!(c.objectives.feasible);
        assert!(c.objectives.delay <= 0.25);
        assert!(c.path.hops() <= 5);
    }
}

#[test]
fn relay_chain_recovers_both_hop_groups() {
    let net = scenario::relay_chain();
    let src = net.node(scenario::RELAY_CHAIN_SOURCE).unwrap();
    let cfg = OptimizerConfig {
        hop_budgets: vec![2, 3],
        ..Default::default()
    };
    let result = run(&net, src, &cfg).unwrap();
    assert_hard_constraints(&result.front);
    assert!(result.single_hop.is_empty());
    let two = result.front.iter().filter(|c| c.path.hops() == 2 && c.objectives.se == 0.459).count();
    let three = result.front.iter().filter(|c| c.path.hops() == 3 && c.objectives.se == 1.0).count();
    assert!(two >= 2 && three >= 2, "{two} two-hop, {three} three-hop");
    for a in &result.front {
        for b in &result.front {
            assert!(!dominates(&a.normalized(), &b.normalized()));
        }
    }
}

#[test]
fn direct_link_only_instance() {
    let snap = Snapshot::new(
        0.0,
        [
            aircraft_at("S", BNE, -100.0, 0.0, 90.0),
            aircraft_at("FAR1", BNE, 1500.0, 0.0, 90.0),
            aircraft_at("FAR2", BNE, -1500.0, 200.0, 90.0),
        ],
        [station("BNE", BNE), station("SYD", SYD)],
    )
    .unwrap();
    let net = Network::with_defaults(snap).unwrap();
    let src = net.node("S").unwrap();
    let cfg = OptimizerConfig {
        population_size: 30,
        generations: 30,
        hop_budgets: vec![2, 3],
        ..Default::default()
    };
    let result = run(&net, src, &cfg).unwrap();
    assert_eq!(result.front, enumerate_single_hop(&net, src));
    assert_eq!(result.front.len(), 1);
}

#[test]
fn single_hop_matches_brute_force() {
    for seed in 0..20 {
        let net = Network::with_defaults(scenario::random_snapshot(seed, 4, 5, 300.0)).unwrap();
        let src = net.node(scenario::RANDOM_SOURCE).unwrap();
        let exact = exact_pareto_front(&net, src, 1, EnumerationLimits::default(), 1).unwrap();
        assert_eq!(enumerate_single_hop(&net, src), exact);
    }
}

#[test]
fn crossover_never_duplicates_aircraft() {
    let net = Network::with_defaults(scenario::random_snapshot(2, 6, 1, 200.0)).unwrap();
    let src = net.node(scenario::RANDOM_SOURCE).unwrap();
    let routes: Vec<RoutePath> = enumerate_all_paths(&net, src, 4, EnumerationLimits::default())
        .unwrap()
        .into_iter()
        .filter(|p| p.hops() == 4)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut shared = 0;
    for p in &routes {
        for a in &routes {
            if !p.nodes()[1..4].iter().any(|x| a.nodes()[1..4].contains(x)) {
                continue;
            }
            shared += 1;
            for cut in 2..5 {
                for child in crossover_at(p, a, cut, &net, &mut rng).into_iter().flatten() {
                    child.validate(&net).unwrap();
                }
            }
        }
    }
    assert!(shared > 1000);
}

#[test]
fn mutation_keeps_routes_valid() {
    let net = scenario::relay_chain();
    let parent = net.path(&["TT589", "QF974", "JQ935", "QF2366", "BNE"]).unwrap();
    let other = net.path(&["TT589", "VA921", "QF2407", "QF974", "SYD"]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10_000 {
        let [a, b] = mutate(&parent, &other, &net, &mut rng).unwrap();
        a.validate(&net).unwrap();
        b.validate(&net).unwrap();
        assert_eq!(a.source(), parent.source());
    }
}

#[test]
fn archive_invariants_hold_during_a_run() {
    let net = Network::with_defaults(scenario::random_snapshot(7, 10, 2, 300.0)).unwrap();
    let src = net.node(scenario::RANDOM_SOURCE).unwrap();
    let all: Vec<Candidate> = enumerate_all_paths(&net, src, 3, EnumerationLimits::default())
        .unwrap()
        .into_iter()
        .map(|p| Candidate::evaluate(p, &net))
        .collect();
    let mut archive = EpsilonArchive::new([20; 3]);
    for c in all {
        let outcome = archive.insert(c);
        archive.check_invariants().unwrap();
        if outcome == InsertOutcome::Accepted(aanet_core::edmoga::Zone::S4) {
            assert_eq!(archive.len(), 1);
        }
    }
}

#[test]
fn random_instances_land_on_the_exact_front() {
    let seeds: Vec<u64> = (0..50).collect();
    let on_front = par::map(&seeds, 0, |&seed| {
        let net = Network::with_defaults(scenario::random_snapshot(seed, 10, 2, 400.0)).unwrap();
        let src = net.node(scenario::RANDOM_SOURCE).unwrap();
        let exact = exact_pareto_front(&net, src, 3, EnumerationLimits::default(), 1).unwrap();
        let cfg = OptimizerConfig {
            hop_budgets: vec![2, 3],
            seed,
            ..Default::default()
        };
        let result = run(&net, src, &cfg).unwrap();
        assert_hard_constraints(&result.front);
        assert_eq!(naive_pareto(&result.front), result.front);
        result
            .front
            .iter()
            .all(|c| exact.iter().any(|e| e.objectives == c.objectives))
    });
    let hits = on_front.iter().filter(|&&ok| ok).count();
    assert!(hits * 100 >= 95 * seeds.len(), "{hits} of {}", seeds.len());
}

#[test]
fn runs_are_deterministic() {
    let net = Network::with_defaults(scenario::random_snapshot(21, 10, 2, 400.0)).unwrap();
    let src = net.node(scenario::RANDOM_SOURCE).unwrap();
    let cfg = OptimizerConfig {
        hop_budgets: vec![2, 3, 4],
        seed: 5,
        ..Default::default()
    };
    let a = run(&net, src, &cfg).unwrap();
    let b = run(&net, src, &cfg).unwrap();
    assert_eq!(a.front, b.front);
    for (x, y) in a.budgets.iter().zip(&b.budgets) {
        assert_eq!(x.archive, y.archive);
        assert!(x.evaluations <= cfg.evaluation_budget());
    }
}

//! Brute-force ground truth: exhaustive route enumeration, exact Pareto
//! fronts, time-stepped link expiration and coverage of an optimizer's result.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geo::PlanarKinematicState;
use crate::par;
use crate::pathobjectives::{
    epsilon_dominates, Candidate, FrontLimits, Network, NodeId, NormalizedObjective, RoutePath,
    DIMENSIONS, MAX_HOPS,
};

/// Enumeration refuses instances above these sizes unless overridden.
pub const GUARD_MAX_AIRCRAFT: usize = 14;
pub const GUARD_MAX_HOPS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationLimits {
    pub max_aircraft: usize,
    pub max_hops: usize,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        Self {
            max_aircraft: GUARD_MAX_AIRCRAFT,
            max_hops: GUARD_MAX_HOPS,
        }
    }
}

impl EnumerationLimits {
    /// Only the structural hop limit remains.
    pub fn unlimited() -> Self {
        Self {
            max_aircraft: usize::MAX,
            max_hops: MAX_HOPS,
        }
    }
}

/// Every loop-free route from `source` through distinct aircraft to a ground
/// station with at most `max_hops` hops, in depth-first order.
pub fn enumerate_all_paths(
    network: &Network,
    source: NodeId,
    max_hops: usize,
    limits: EnumerationLimits,
) -> Result<Vec<RoutePath>> {
    if !network.is_aircraft(source) {
        return Err(Error::Instance(format!("source `{}` is not an aircraft", network.id(source))));
    }
    let n = network.aircraft().len();
    if n > limits.max_aircraft || max_hops > limits.max_hops {
        return Err(Error::Size(format!(
            "{n} aircraft / {max_hops} hops exceeds the guard of {} aircraft / {} hops",
            limits.max_aircraft, limits.max_hops
        )));
    }
    if max_hops > MAX_HOPS {
        return Err(Error::Size(format!("{max_hops} hops exceeds {MAX_HOPS}")));
    }
    let mut out = Vec::new();
    let mut prefix = vec![source];
    extend(network, &mut prefix, max_hops, &mut out);
    Ok(out)
}

fn extend(network: &Network, prefix: &mut Vec<NodeId>, max_hops: usize, out: &mut Vec<RoutePath>) {
    for &g in network.ground_stations() {
        let mut nodes = prefix.clone();
        nodes.push(g);
        out.push(RoutePath::from_nodes_unchecked(nodes));
    }
    // prefix.len() nodes so far; a relay adds one hop before the final one.
    if prefix.len() < max_hops {
        for &a in network.aircraft() {
            if !prefix.contains(&a) {
                prefix.push(a);
                extend(network, prefix, max_hops, out);
                prefix.pop();
            }
        }
    }
}

/// Number of routes [`enumerate_all_paths`] yields: `g * sum_{k<H} P(n-1, k)`.
pub fn route_count(n_aircraft: usize, n_stations: usize, max_hops: usize) -> u128 {
    let others = n_aircraft.saturating_sub(1) as u128;
    let mut total = 0u128;
    let mut perm = 1u128;
    for k in 0..max_hops as u128 {
        if k > 0 {
            if k > others {
                break;
            }
            perm *= others - k + 1;
        }
        total += perm;
    }
    n_stations as u128 * total
}

fn dominates_raw(a: &Candidate, b: &Candidate) -> bool {
    let (x, y) = (&a.objectives, &b.objectives);
    let no_worse = x.se >= y.se && x.delay <= y.delay && x.pet >= y.pet;
    let better = x.se > y.se || x.delay < y.delay || x.pet > y.pet;
    no_worse && better
}

/// Double-loop Pareto filter over the feasible candidates, comparing raw
/// `(se, delay, pet)` directly. Duplicated objective vectors keep the smallest
/// route. Sorted by route.
pub fn naive_pareto(candidates: &[Candidate]) -> Vec<Candidate> {
    let feasible: Vec<&Candidate> = candidates.iter().filter(|c| c.objectives.feasible).collect();
    let mut front: Vec<Candidate> = Vec::new();
    for (i, c) in feasible.iter().enumerate() {
        let mut keep = true;
        for (j, d) in feasible.iter().enumerate() {
            if i == j {
                continue;
            }
            let same = d.objectives.se == c.objectives.se
                && d.objectives.delay == c.objectives.delay
                && d.objectives.pet == c.objectives.pet;
            if dominates_raw(d, c) || (same && d.path < c.path) {
                keep = false;
                break;
            }
        }
        if keep {
            front.push((*c).clone());
        }
    }
    front.sort_by(|a, b| a.path.cmp(&b.path));
    front
}

/// Exact Pareto front of every feasible route with at most `max_hops` hops.
pub fn exact_pareto_front(
    network: &Network,
    source: NodeId,
    max_hops: usize,
    limits: EnumerationLimits,
    jobs: usize,
) -> Result<Vec<Candidate>> {
    let paths = enumerate_all_paths(network, source, max_hops, limits)?;
    let evaluated = par::map(&paths, jobs, |p| Candidate::evaluate(p.clone(), network));
    Ok(naive_pareto(&evaluated))
}

/// Steps both states forward by `dt` until their separation reaches
/// `threshold_km`, then bisects the bracketing step to 1e-6 s.
pub fn let_crossing_oracle(
    s1: &PlanarKinematicState,
    s2: &PlanarKinematicState,
    threshold_km: f64,
    dt: f64,
    t_max: f64,
) -> Result<Option<f64>> {
    if !(dt > 0.0) {
        return Err(Error::State(format!("step {dt} must be positive")));
    }
    let threshold = threshold_km * 1e3;
    let separation = |t: f64| s1.advanced(t).distance_to(&s2.advanced(t));
    if separation(0.0) >= threshold {
        return Err(Error::State(format!(
            "initial separation {} m already at or beyond {} m",
            separation(0.0),
            threshold
        )));
    }
    let mut t = 0.0;
    while t < t_max {
        let next = (t + dt).min(t_max);
        if separation(next) >= threshold {
            let (mut lo, mut hi) = (t, next);
            while hi - lo > 1e-6 {
                let mid = 0.5 * (lo + hi);
                if separation(mid) >= threshold {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Ok(Some(hi));
        }
        t = next;
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoverageReport {
    pub exact_front_size: usize,
    pub archive_size: usize,
    pub fraction_covered: f64,
    pub generational_distance: f64,
}

/// How well `archive` approximates `exact_front`. Box widths come from the
/// exact front's limits; a front point counts as covered when an archive
/// point has the same objectives or epsilon-dominates it. Generational
/// distance is averaged over archive points, each objective scaled by the
/// exact front's range.
pub fn coverage_metrics(
    archive: &[Candidate],
    exact_front: &[Candidate],
    n_box: [u32; DIMENSIONS],
) -> Result<CoverageReport> {
    if exact_front.is_empty() {
        return Err(Error::InputDomain("coverage against an empty exact front".into()));
    }
    let exact: Vec<NormalizedObjective> = exact_front.iter().map(Candidate::normalized).collect();
    let found: Vec<NormalizedObjective> = archive.iter().map(Candidate::normalized).collect();
    let limits = FrontLimits::from_points(&exact, n_box).expect("non-empty");

    let covered = exact
        .iter()
        .filter(|e| found.iter().any(|a| a == *e || epsilon_dominates(a, e, &limits)))
        .count();

    let scale: [f64; DIMENSIONS] = std::array::from_fn(|i| {
        let r = limits.max[i] - limits.min[i];
        if r > 0.0 {
            r
        } else {
            1.0
        }
    });
    let generational_distance = if found.is_empty() {
        0.0
    } else {
        found
            .iter()
            .map(|a| {
                exact
                    .iter()
                    .map(|e| {
                        (0..DIMENSIONS)
                            .map(|i| ((a.0[i] - e.0[i]) / scale[i]).powi(2))
                            .sum::<f64>()
                            .sqrt()
                    })
                    .fold(f64::INFINITY, f64::min)
            })
            .sum::<f64>()
            / found.len() as f64
    };
    Ok(CoverageReport {
        exact_front_size: exact.len(),
        archive_size: found.len(),
        fraction_covered: covered as f64 / exact.len() as f64,
        generational_distance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flightdata::Snapshot;
    use crate::pathobjectives::pareto_filter;
    use crate::scenario::{self, aircraft_at, station, BNE, SYD};

    fn net(n_aircraft: usize, stations: usize) -> Network {
        let a = (0..n_aircraft).map(|i| aircraft_at(&format!("A{i}"), BNE, -100.0 - 20.0 * i as f64, 0.0, 90.0));
        let g = [station("BNE", BNE), station("SYD", SYD)].into_iter().take(stations);
        Network::with_defaults(Snapshot::new(0.0, a, g).unwrap()).unwrap()
    }

    #[test]
    fn counting_examples() {
        let n = net(1, 2);
        let src = n.node("A0").unwrap();
        assert_eq!(enumerate_all_paths(&n, src, 3, EnumerationLimits::default()).unwrap().len(), 2);
        let n = net(3, 1);
        let src = n.node("A0").unwrap();
        assert_eq!(enumerate_all_paths(&n, src, 3, EnumerationLimits::default()).unwrap().len(), 5);
        assert_eq!(route_count(3, 1, 3), 5);
        assert_eq!(route_count(1, 2, 3), 2);
    }

    #[test]
    fn guard() {
        let n = net(15, 1);
        let src = n.node("A0").unwrap();
        assert!(matches!(
            enumerate_all_paths(&n, src, 3, EnumerationLimits::default()),
            Err(Error::Size(_))
        ));
        assert!(enumerate_all_paths(&n, src, 2, EnumerationLimits::unlimited()).is_ok());
        let n = net(3, 1);
        let src = n.node("A0").unwrap();
        assert!(enumerate_all_paths(&n, src, 5, EnumerationLimits::default()).is_err());
    }

    #[test]
    fn enumerated_routes_are_valid_and_distinct() {
        let n = net(6, 2);
        let src = n.node("A0").unwrap();
        let mut paths = enumerate_all_paths(&n, src, 4, EnumerationLimits::default()).unwrap();
        assert_eq!(paths.len() as u128, route_count(6, 2, 4));
        for p in &paths {
            p.validate(&n).unwrap();
        }
        paths.sort();
        paths.dedup();
        assert_eq!(paths.len() as u128, route_count(6, 2, 4));
    }

    #[test]
    fn relay_chain_front_mixes_hop_counts() {
        let n = scenario::relay_chain();
        let src = n.node(scenario::RELAY_CHAIN_SOURCE).unwrap();
        let front = exact_pareto_front(&n, src, 3, EnumerationLimits::default(), 1).unwrap();
        let two: Vec<_> = front.iter().filter(|c| c.path.hops() == 2).collect();
        let three: Vec<_> = front.iter().filter(|c| c.path.hops() == 3).collect();
        assert!(front.iter().all(|c| c.path.hops() >= 2), "no direct link");
        assert!(two.len() >= 2 && two.iter().all(|c| c.objectives.se == 0.459), "{front:#?}");
        assert!(
            three.iter().filter(|c| c.objectives.se == 1.0).count() >= 2,
            "{front:#?}"
        );
    }

    #[test]
    fn naive_and_sorted_filters_agree() {
        for seed in 0..10 {
            let n = Network::with_defaults(scenario::random_snapshot(seed, 10, 2, 400.0)).unwrap();
            let src = n.node(scenario::RANDOM_SOURCE).unwrap();
            let all: Vec<Candidate> = enumerate_all_paths(&n, src, 3, EnumerationLimits::default())
                .unwrap()
                .into_iter()
                .map(|p| Candidate::evaluate(p, &n))
                .collect();
            let naive = naive_pareto(&all);
            let fast: Vec<Candidate> = pareto_filter(all.clone())
                .into_iter()
                .filter(|c| c.objectives.feasible)
                .collect();
            assert_eq!(naive, fast);
            let mut shuffled = all;
            shuffled.reverse();
            assert_eq!(naive_pareto(&shuffled), naive);
        }
    }

    #[test]
    fn budget_monotonicity() {
        for seed in 0..10 {
            let n = Network::with_defaults(scenario::random_snapshot(seed, 9, 2, 400.0)).unwrap();
            let src = n.node(scenario::RANDOM_SOURCE).unwrap();
            for h in 1..4 {
                let small = exact_pareto_front(&n, src, h, EnumerationLimits::default(), 1).unwrap();
                let large = exact_pareto_front(&n, src, h + 1, EnumerationLimits::default(), 1).unwrap();
                for s in &small {
                    assert!(large.iter().any(|l| l.objectives == s.objectives || dominates_raw(l, s)));
                }
            }
        }
    }

    #[test]
    fn crossing_oracle_cases() {
        let s1 = PlanarKinematicState::new(0.0, 0.0, -250.0, 0.0);
        let s2 = PlanarKinematicState::new(100_000.0, 0.0, 250.0, 0.0);
        let t = let_crossing_oracle(&s1, &s2, 110.0, 1.0, 1e5).unwrap().unwrap();
        assert!((t - 20.0).abs() < 1e-3, "{t}");
        let s3 = PlanarKinematicState::new(50_000.0, 0.0, -250.0, 0.0);
        assert_eq!(let_crossing_oracle(&s1, &s3, 110.0, 1.0, 1e5).unwrap(), None);
        assert!(let_crossing_oracle(&s1, &s2, 90.0, 1.0, 1e5).is_err());
        assert!(let_crossing_oracle(&s1, &s2, 110.0, 0.0, 1e5).is_err());
    }

    #[test]
    fn coverage_cases() {
        let n = Network::with_defaults(scenario::random_snapshot(1, 10, 2, 300.0)).unwrap();
        let src = n.node(scenario::RANDOM_SOURCE).unwrap();
        let exact = exact_pareto_front(&n, src, 3, EnumerationLimits::default(), 1).unwrap();
        if exact.is_empty() {
            return;
        }
        let r = coverage_metrics(&exact, &exact, [20; 3]).unwrap();
        assert_eq!(r.fraction_covered, 1.0);
        assert_eq!(r.generational_distance, 0.0);
        let r = coverage_metrics(&[], &exact, [20; 3]).unwrap();
        assert_eq!(r.fraction_covered, 0.0);
        let half = &exact[..exact.len().div_ceil(2)];
        assert!(coverage_metrics(half, &exact, [20; 3]).unwrap().fraction_covered >= 0.5);
        assert!(coverage_metrics(&exact, &[], [20; 3]).is_err());
    }
}

//! Discrete epsilon multi-objective genetic algorithm over permutation-encoded
//! routes.
//!
//! One run per hop budget: a main population evolves through crossover and
//! mutation "variants", while an epsilon-dominance archive keeps the elite
//! feasible routes. The archives of every budget are merged with the
//! enumerated single-hop routes into the final Pareto set.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pathobjectives::{
    box_index, constrained_compare, epsilon_dominates, epsilon_front, pareto_filter, Candidate,
    FrontLimits, Network, NodeId, Preference, RoutePath, DIMENSIONS, MAX_HOPS,
};
use crate::seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerConfig {
    /// P_s.
    pub population_size: usize,
    /// N_O, offspring per generation (even).
    pub offspring: usize,
    /// g_max.
    pub generations: usize,
    /// Crossover/mutation threshold: crossover when a uniform draw exceeds it.
    pub p_cm: f64,
    /// Partitions per objective.
    pub n_box: u32,
    /// Hop counts N - 1 optimized by separate runs.
    pub hop_budgets: Vec<usize>,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            population_size: 200,
            offspring: 8,
            generations: 200,
            p_cm: 0.2,
            n_box: 20,
            hop_budgets: vec![2, 3, 4, 5],
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if self.population_size == 0 {
            return fail("population_size must be positive".into());
        }
        if self.offspring == 0 || self.offspring % 2 != 0 {
            return fail(format!("offspring must be even and positive, got {}", self.offspring));
        }
        if self.generations == 0 {
            return fail("generations must be positive".into());
        }
        if !(0.0..=1.0).contains(&self.p_cm) {
            return fail(format!("p_cm {} outside [0, 1]", self.p_cm));
        }
        if self.n_box == 0 {
            return fail("n_box must be positive".into());
        }
        if let Some(h) = self.hop_budgets.iter().find(|&&h| !(2..=MAX_HOPS).contains(&h)) {
            return fail(format!("hop budget {h} outside 2..={MAX_HOPS}"));
        }
        Ok(())
    }

    /// Parses a flat `key = value` file; missing keys keep their defaults.
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: OptimizerConfig =
            toml::from_str(text).map_err(|e| Error::Config(format!("optimizer config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn n_box_array(&self) -> [u32; DIMENSIONS] {
        [self.n_box; DIMENSIONS]
    }

    /// Upper bound on objective evaluations of one hop-budget run.
    pub fn evaluation_budget(&self) -> u64 {
        ((self.population_size + self.offspring) * self.generations) as u64
    }
}

/// Where a candidate fell relative to the archive's front limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Zone {
    /// Inside the limit box.
    S1,
    /// Worse than every upper limit.
    S2,
    /// Neither inside nor fully beyond.
    S3,
    /// Better than every lower limit.
    S4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InsertOutcome {
    /// First member of an empty archive.
    Bootstrap,
    Accepted(Zone),
    Rejected(Zone),
    /// Infeasible candidates never enter the archive.
    Infeasible,
}

/// Elite population: mutually epsilon-non-dominated feasible routes, at most
/// one per box.
#[derive(Debug, Clone)]
pub struct EpsilonArchive {
    members: Vec<Candidate>,
    limits: Option<FrontLimits>,
    n_box: [u32; DIMENSIONS],
    pub evaluations: u64,
}

impl EpsilonArchive {
    pub fn new(n_box: [u32; DIMENSIONS]) -> Self {
        Self {
            members: Vec::new(),
            limits: None,
            n_box,
            evaluations: 0,
        }
    }

    /// Archive holding the epsilon front of the feasible members of `population`.
    pub fn from_population(population: &[Candidate], n_box: [u32; DIMENSIONS]) -> Self {
        let feasible: Vec<Candidate> = population
            .iter()
            .filter(|c| c.objectives.feasible)
            .cloned()
            .collect();
        let mut archive = Self::new(n_box);
        if let Ok((members, limits)) = epsilon_front(feasible, n_box) {
            archive.members = members;
            archive.limits = Some(limits);
        }
        archive
    }

    pub fn members(&self) -> &[Candidate] {
        &self.members
    }

    pub fn into_members(self) -> Vec<Candidate> {
        self.members
    }

    pub fn limits(&self) -> Option<&FrontLimits> {
        self.limits.as_ref()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn classify(&self, candidate: &Candidate) -> Option<Zone> {
        let limits = self.limits.as_ref()?;
        let m = candidate.normalized().0;
        let zone = if (0..DIMENSIONS).all(|i| m[i] <= limits.min[i]) {
            Zone::S4
        } else if (0..DIMENSIONS).all(|i| m[i] >= limits.max[i]) {
            Zone::S2
        } else if (0..DIMENSIONS).all(|i| limits.min[i] <= m[i] && m[i] <= limits.max[i]) {
            Zone::S1
        } else {
            Zone::S3
        };
        Some(zone)
    }

    pub fn insert(&mut self, candidate: Candidate) -> InsertOutcome {
        if !candidate.objectives.feasible {
            return InsertOutcome::Infeasible;
        }
        let Some(zone) = self.classify(&candidate) else {
            let n = candidate.normalized();
            self.limits = FrontLimits::from_points([&n], self.n_box);
            self.members = vec![candidate];
            return InsertOutcome::Bootstrap;
        };
        let limits = self.limits.expect("classified archives have limits");
        match zone {
            Zone::S4 => {
                self.limits = Some(limits.with_min(candidate.normalized().0));
                self.members = vec![candidate];
                InsertOutcome::Accepted(Zone::S4)
            }
            Zone::S2 => InsertOutcome::Rejected(Zone::S2),
            Zone::S1 => {
                let n = candidate.normalized();
                if self
                    .members
                    .iter()
                    .any(|m| epsilon_dominates(&m.normalized(), &n, &limits))
                {
                    return InsertOutcome::Rejected(Zone::S1);
                }
                // Same box and neither epsilon-dominates: keep the smaller route.
                let b = box_index(&n, &limits);
                if let Some(pos) = self
                    .members
                    .iter()
                    .position(|m| box_index(&m.normalized(), &limits) == b)
                {
                    let incumbent = &self.members[pos];
                    if !epsilon_dominates(&n, &incumbent.normalized(), &limits)
                        && incumbent.path <= candidate.path
                    {
                        return InsertOutcome::Rejected(Zone::S1);
                    }
                    self.members.remove(pos);
                }
                self.members
                    .retain(|m| !epsilon_dominates(&n, &m.normalized(), &limits));
                self.members.push(candidate);
                InsertOutcome::Accepted(Zone::S1)
            }
            Zone::S3 => {
                let path = candidate.path.clone();
                let mut pool = std::mem::take(&mut self.members);
                pool.push(candidate);
                let (members, limits) =
                    epsilon_front(pool, self.n_box).expect("pool contains the candidate");
                let kept = members.iter().any(|m| m.path == path);
                self.members = members;
                self.limits = Some(limits);
                if kept {
                    InsertOutcome::Accepted(Zone::S3)
                } else {
                    InsertOutcome::Rejected(Zone::S3)
                }
            }
        }
    }

    /// Checks feasibility, one member per box and mutual epsilon-non-dominance.
    pub fn check_invariants(&self) -> Result<()> {
        let Some(limits) = self.limits.as_ref() else {
            return if self.members.is_empty() {
                Ok(())
            } else {
                Err(Error::Invariant("archive members without limits".into()))
            };
        };
        let norms: Vec<_> = self.members.iter().map(Candidate::normalized).collect();
        for (i, m) in self.members.iter().enumerate() {
            if !m.objectives.feasible {
                return Err(Error::Invariant("infeasible archive member".into()));
            }
            for j in 0..norms.len() {
                if i == j {
                    continue;
                }
                if epsilon_dominates(&norms[i], &norms[j], limits) {
                    return Err(Error::Invariant(format!(
                        "archive member {i} epsilon-dominates member {j}"
                    )));
                }
                if box_index(&norms[i], limits) == box_index(&norms[j], limits) {
                    return Err(Error::Invariant(format!("members {i} and {j} share a box")));
                }
            }
        }
        Ok(())
    }
}

fn pick<'a, T>(items: &'a [T], rng: &mut impl Rng) -> &'a T {
    &items[rng.random_range(0..items.len())]
}

/// Uniform draw from aircraft not in `used`; `None` when every aircraft is used.
fn fresh_aircraft(network: &Network, used: &[NodeId], rng: &mut impl Rng) -> Option<NodeId> {
    let pool: Vec<NodeId> = network
        .aircraft()
        .iter()
        .copied()
        .filter(|a| !used.contains(a))
        .collect();
    if pool.is_empty() {
        None
    } else {
        Some(*pick(&pool, rng))
    }
}

/// Random routes with `nodes` elements: the source, distinct random relays and
/// a random ground station.
pub fn initialize_population(
    network: &Network,
    source: NodeId,
    nodes: usize,
    population_size: usize,
    rng: &mut impl Rng,
) -> Result<Vec<RoutePath>> {
    if !network.is_aircraft(source) {
        return Err(Error::Instance(format!("source `{}` is not an aircraft", network.id(source))));
    }
    if !(2..=MAX_HOPS + 1).contains(&nodes) {
        return Err(Error::Instance(format!("route length {nodes} outside 2..={}", MAX_HOPS + 1)));
    }
    if network.aircraft().len() < nodes - 1 {
        return Err(Error::Instance(format!(
            "{} aircraft cannot fill a {}-hop route",
            network.aircraft().len(),
            nodes - 1
        )));
    }
    if network.ground_stations().is_empty() {
        return Err(Error::Instance("no ground stations".into()));
    }
    let others: Vec<NodeId> = network
        .aircraft()
        .iter()
        .copied()
        .filter(|&a| a != source)
        .collect();
    let mut population = Vec::with_capacity(population_size);
    for _ in 0..population_size {
        let mut route = Vec::with_capacity(nodes);
        route.push(source);
        route.extend(sample(rng, others.len(), nodes - 2).into_iter().map(|i| others[i]));
        route.push(*pick(network.ground_stations(), rng));
        population.push(RoutePath::from_nodes_unchecked(route));
    }
    Ok(population)
}

fn repair_tail(mut genes: Vec<NodeId>, cut: usize, network: &Network, rng: &mut impl Rng) -> Option<RoutePath> {
    let last = genes.len() - 1;
    for j in cut..last {
        if genes[..j].contains(&genes[j]) || genes[j + 1..last].contains(&genes[j]) {
            genes[j] = fresh_aircraft(network, &genes, rng)?;
        }
    }
    Some(RoutePath::from_nodes_unchecked(genes))
}

/// Single-point crossover at a uniform point `n` in `2..=N-1` (1-based):
/// the genes after `n` are swapped. A swapped-in relay that repeats an
/// aircraft already in the offspring is redrawn from unused aircraft; an
/// offspring with no unused aircraft left is discarded (`None`).
pub fn crossover(
    parent_p: &RoutePath,
    parent_a: &RoutePath,
    network: &Network,
    rng: &mut impl Rng,
) -> Result<[Option<RoutePath>; 2]> {
    let n = parent_p.nodes().len();
    if n < 3 || parent_a.nodes().len() != n {
        return Err(Error::Instance(format!(
            "crossover needs equal-length parents with an interior point (lengths {} and {})",
            n,
            parent_a.nodes().len()
        )));
    }
    let cut = rng.random_range(2..n);
    Ok(crossover_at(parent_p, parent_a, cut, network, rng))
}

/// Crossover with an explicit 1-based point `cut`.
pub fn crossover_at(
    parent_p: &RoutePath,
    parent_a: &RoutePath,
    cut: usize,
    network: &Network,
    rng: &mut impl Rng,
) -> [Option<RoutePath>; 2] {
    let (p, a) = (parent_p.nodes(), parent_a.nodes());
    let child1: Vec<NodeId> = p[..cut].iter().chain(&a[cut..]).copied().collect();
    let child2: Vec<NodeId> = a[..cut].iter().chain(&p[cut..]).copied().collect();
    [
        repair_tail(child1, cut, network, rng),
        repair_tail(child2, cut, network, rng),
    ]
}

fn mutate_at(parent: &RoutePath, positions: &[usize], network: &Network, rng: &mut impl Rng) -> RoutePath {
    let mut genes = parent.nodes().to_vec();
    let last = genes.len() - 1;
    for &l in positions {
        if l == last {
            let current = genes[last];
            let choices: Vec<NodeId> = network
                .ground_stations()
                .iter()
                .copied()
                .filter(|&g| g != current)
                .collect();
            if !choices.is_empty() {
                genes[last] = *pick(&choices, rng);
            }
        } else {
            // Prefer aircraft absent from both the current and the original genes.
            let mut used = genes.clone();
            used.extend_from_slice(parent.nodes());
            if let Some(fresh) = fresh_aircraft(network, &used, rng).or_else(|| fresh_aircraft(network, &genes, rng)) {
                genes[l] = fresh;
            }
        }
    }
    RoutePath::from_nodes_unchecked(genes)
}

/// Multi-point mutation: `N_m` uniform in `1..=N-1` distinct positions from
/// `2..=N` (1-based) are redrawn in both parents. Relays are redrawn from
/// aircraft not already in the route, the ground station from the other
/// ground stations. The source never changes.
pub fn mutate(
    parent_p: &RoutePath,
    parent_a: &RoutePath,
    network: &Network,
    rng: &mut impl Rng,
) -> Result<[RoutePath; 2]> {
    let n = parent_p.nodes().len();
    if n < 2 || parent_a.nodes().len() != n {
        return Err(Error::Instance("mutation needs equal-length parents".into()));
    }
    let count = rng.random_range(1..n);
    let positions: Vec<usize> = sample(rng, n - 1, count).into_iter().map(|i| i + 1).collect();
    Ok(mutate_positions(parent_p, parent_a, &positions, network, rng))
}

/// Mutation at explicit 0-based positions (each in `1..N`).
pub fn mutate_positions(
    parent_p: &RoutePath,
    parent_a: &RoutePath,
    positions: &[usize],
    network: &Network,
    rng: &mut impl Rng,
) -> [RoutePath; 2] {
    [
        mutate_at(parent_p, positions, network, rng),
        mutate_at(parent_a, positions, network, rng),
    ]
}

/// Each offspring challenges one uniformly chosen individual and replaces it
/// if it is preferred under the constrained comparison.
pub fn update_population(population: &mut [Candidate], offspring: &[Candidate], rng: &mut impl Rng) {
    if population.is_empty() {
        return;
    }
    for child in offspring {
        let j = rng.random_range(0..population.len());
        if constrained_compare(&child.objectives, &population[j].objectives) == Preference::First {
            population[j] = child.clone();
        }
    }
}

/// Pareto set of the feasible direct links from `source`.
pub fn enumerate_single_hop(network: &Network, source: NodeId) -> Vec<Candidate> {
    let direct: Vec<Candidate> = network
        .ground_stations()
        .iter()
        .map(|&g| Candidate::evaluate(RoutePath::from_nodes_unchecked(vec![source, g]), network))
        .filter(|c| c.objectives.feasible)
        .collect();
    pareto_filter(direct)
}

/// Final archive of one hop-budget run.
#[derive(Debug, Clone)]
pub struct BudgetOutcome {
    pub hops: usize,
    pub archive: Vec<Candidate>,
    pub evaluations: u64,
}

#[derive(Debug, Clone)]
pub struct OptimizationResult {
    pub source: NodeId,
    pub single_hop: Vec<Candidate>,
    pub budgets: Vec<BudgetOutcome>,
    /// Pareto set of the single-hop routes and all budget archives.
    pub front: Vec<Candidate>,
}

impl OptimizationResult {
    /// Pareto set over the single-hop routes and the archives of budgets up to `max_hops`.
    pub fn front_up_to(&self, max_hops: usize) -> Vec<Candidate> {
        let mut pool = self.single_hop.clone();
        for b in self.budgets.iter().filter(|b| b.hops <= max_hops) {
            pool.extend(b.archive.iter().cloned());
        }
        pareto_filter(pool)
    }

    pub fn evaluations(&self) -> u64 {
        self.budgets.iter().map(|b| b.evaluations).sum()
    }
}

/// Generation loop for one route length.
pub fn run_budget(network: &Network, source: NodeId, hops: usize, config: &OptimizerConfig) -> Result<EpsilonArchive> {
    config.validate()?;
    let nodes = hops + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(config.seed, &[hops as u64]));
    let n_box = config.n_box_array();

    let mut population: Vec<Candidate> =
        initialize_population(network, source, nodes, config.population_size, &mut rng)?
            .into_iter()
            .map(|p| Candidate::evaluate(p, network))
            .collect();
    let mut archive = EpsilonArchive::from_population(&population, n_box);
    archive.evaluations = population.len() as u64;

    for _generation in 0..config.generations {
        let mut offspring_paths: Vec<RoutePath> = Vec::with_capacity(config.offspring);
        for _ in 0..config.offspring / 2 {
            let parent_p = pick(&population, &mut rng).path.clone();
            let parent_a = if archive.is_empty() {
                pick(&population, &mut rng).path.clone()
            } else {
                pick(archive.members(), &mut rng).path.clone()
            };
            let alpha: f64 = rng.random();
            if alpha > config.p_cm && nodes >= 3 {
                let [c1, c2] = crossover(&parent_p, &parent_a, network, &mut rng)?;
                offspring_paths.extend(c1);
                offspring_paths.extend(c2);
            } else {
                offspring_paths.extend(mutate(&parent_p, &parent_a, network, &mut rng)?);
            }
        }
        let offspring: Vec<Candidate> = offspring_paths
            .into_iter()
            .map(|p| Candidate::evaluate(p, network))
            .collect();
        archive.evaluations += offspring.len() as u64;
        for child in &offspring {
            if child.objectives.feasible {
                archive.insert(child.clone());
            }
        }
        update_population(&mut population, &offspring, &mut rng);
    }
    if archive.evaluations > config.evaluation_budget() {
        return Err(Error::Invariant(format!(
            "{} evaluations exceed the budget of {}",
            archive.evaluations,
            config.evaluation_budget()
        )));
    }
    Ok(archive)
}

/// Optimizes routes from `source`: enumerates the direct links, runs one
/// generation loop per hop budget and merges everything into one Pareto set.
pub fn run(network: &Network, source: NodeId, config: &OptimizerConfig) -> Result<OptimizationResult> {
    config.validate()?;
    if !network.is_aircraft(source) {
        return Err(Error::Instance(format!("source `{}` is not an aircraft", network.id(source))));
    }
    let single_hop = enumerate_single_hop(network, source);
    let mut budgets = Vec::with_capacity(config.hop_budgets.len());
    let mut hops: Vec<usize> = config.hop_budgets.clone();
    hops.sort_unstable();
    hops.dedup();
    for h in hops {
        let archive = run_budget(network, source, h, config)?;
        budgets.push(BudgetOutcome {
            hops: h,
            evaluations: archive.evaluations,
            archive: archive.into_members(),
        });
    }
    let mut pool = single_hop.clone();
    for b in &budgets {
        pool.extend(b.archive.iter().cloned());
    }
    let front = pareto_filter(pool);
    Ok(OptimizationResult {
        source,
        single_hop,
        budgets,
        front,
    })
}

/// Hop budgets from `budgets` that the network has enough aircraft for.
pub fn supported_budgets(network: &Network, budgets: &[usize]) -> Vec<usize> {
    budgets
        .iter()
        .copied()
        .filter(|&h| network.aircraft().len() >= h)
        .collect()
}

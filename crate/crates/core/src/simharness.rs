//! 24-hour sweep: hourly snapshots, one optimization per airborne flight,
//! and network-level reachability and average-quality metrics.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::edmoga::{self, OptimizerConfig};
use crate::error::{Error, Result};
use crate::flightdata::{
    build_snapshot, FlightRecord, GroundStation, OccupancyProvider, DEFAULT_MIN_ALTITUDE_M,
    DEFAULT_WINDOW_S,
};
use crate::linkmodel::{AcmTable, LinkBudgetParams};
use crate::par;
use crate::pathobjectives::{Candidate, Network, NodeId, PathConstraints};
use crate::seed;

/// Hop limits reported by the sweep.
pub const UPTO_HOPS: [usize; 3] = [2, 3, 4];
pub const HOURS: usize = 24;

pub const RESULTS_CSV_HEADER: &str = "hour,flights_in_air,reach_1,reach_2,reach_3,reach_4,reach_upto2,reach_upto3,reach_upto4,avg_se_upto2,avg_se_upto3,avg_se_upto4,avg_delay_upto2,avg_delay_upto3,avg_delay_upto4,avg_pet_upto2,avg_pet_upto3,avg_pet_upto4";

/// Which route of a flight's front stands for the flight in the averages.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SelectionPolicy {
    /// Highest SE, then lowest delay, then highest PET.
    #[default]
    MaxSe,
    /// Lowest delay, then highest SE, then highest PET.
    MinDelay,
    /// Highest PET, then highest SE, then lowest delay.
    MaxPet,
}

impl SelectionPolicy {
    fn better(&self, a: &Candidate, b: &Candidate) -> Ordering {
        let (x, y) = (&a.objectives, &b.objectives);
        let se = y.se.total_cmp(&x.se);
        let delay = x.delay.total_cmp(&y.delay);
        let pet = y.pet.total_cmp(&x.pet);
        let order = match self {
            SelectionPolicy::MaxSe => se.then(delay).then(pet),
            SelectionPolicy::MinDelay => delay.then(se).then(pet),
            SelectionPolicy::MaxPet => pet.then(se).then(delay),
        };
        order.then_with(|| a.path.cmp(&b.path))
    }

    /// Representative feasible route of `front`.
    pub fn select<'a>(&self, front: &'a [Candidate]) -> Option<&'a Candidate> {
        front
            .iter()
            .filter(|c| c.objectives.feasible)
            .min_by(|a, b| self.better(a, b))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub optimizer: OptimizerConfig,
    pub window_s: f64,
    pub min_altitude_m: f64,
    pub policy: SelectionPolicy,
    pub params: LinkBudgetParams,
    pub constraints: PathConstraints,
    pub table: AcmTable,
    /// Worker threads for per-flight runs; 0 uses every core.
    pub jobs: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            optimizer: OptimizerConfig::default(),
            window_s: DEFAULT_WINDOW_S,
            min_altitude_m: DEFAULT_MIN_ALTITUDE_M,
            policy: SelectionPolicy::MaxSe,
            params: LinkBudgetParams::default(),
            constraints: PathConstraints::default(),
            table: AcmTable::default(),
            jobs: 0,
        }
    }
}

impl SweepConfig {
    /// Hop budgets actually run: the configured ones within the reported range.
    pub fn budgets(&self) -> Vec<usize> {
        let mut b: Vec<usize> = self
            .optimizer
            .hop_budgets
            .iter()
            .copied()
            .filter(|h| UPTO_HOPS.contains(h))
            .collect();
        b.sort_unstable();
        b.dedup();
        b
    }
}

/// Means over the flights that have a feasible route.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Averages {
    pub se: f64,
    pub delay: f64,
    pub pet: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HourlyMetrics {
    pub hour: u32,
    pub flights_in_air: usize,
    /// Flights whose best-connected route needs exactly 1, 2, 3, 4 hops.
    pub reach_exactly: [usize; 4],
    /// Flights with any feasible route of at most 2, 3, 4 hops.
    pub reach_upto: [usize; 3],
    pub avg_upto: [Option<Averages>; 3],
}

impl HourlyMetrics {
    fn empty(hour: u32) -> Self {
        Self {
            hour,
            flights_in_air: 0,
            reach_exactly: [0; 4],
            reach_upto: [0; 3],
            avg_upto: [None; 3],
        }
    }
}

/// Fronts of one flight at one hour, for each hop limit in [`UPTO_HOPS`].
#[derive(Debug, Clone)]
pub struct FlightOutcome {
    pub flight_id: String,
    pub fronts_upto: [Vec<Candidate>; 3],
}

impl FlightOutcome {
    /// Fewest hops among the feasible routes of the widest front.
    pub fn min_hops(&self) -> Option<usize> {
        self.fronts_upto[2]
            .iter()
            .filter(|c| c.objectives.feasible)
            .map(|c| c.path.hops())
            .min()
    }
}

/// Averages of the representative routes of the flights with a feasible route.
pub fn aggregate_flight_metrics(fronts: &[&[Candidate]], policy: SelectionPolicy) -> Option<Averages> {
    let chosen: Vec<&Candidate> = fronts.iter().filter_map(|f| policy.select(f)).collect();
    if chosen.is_empty() {
        return None;
    }
    let n = chosen.len() as f64;
    let mean = |f: fn(&Candidate) -> f64| chosen.iter().map(|c| f(c)).sum::<f64>() / n;
    Some(Averages {
        se: mean(|c| c.objectives.se),
        delay: mean(|c| c.objectives.delay),
        pet: mean(|c| c.objectives.pet),
    })
}

/// Start of the UTC day containing the earliest record.
pub fn day_start(records: &[FlightRecord]) -> Option<f64> {
    records
        .iter()
        .map(|r| r.timestamp)
        .min_by(f64::total_cmp)
        .map(|t| (t / 86_400.0).floor() * 86_400.0)
}

/// Seed of one flight's optimization at one hour.
pub fn flight_seed(base: u64, flight_id: &str, hour: u32) -> u64 {
    seed::derive(base, &[seed::fnv1a(flight_id), u64::from(hour)])
}

fn optimize_flight(
    network: &Network,
    source: NodeId,
    hour: u32,
    config: &SweepConfig,
) -> Result<FlightOutcome> {
    let budgets = edmoga::supported_budgets(network, &config.budgets());
    let flight_id = network.id(source).to_string();
    let opt = OptimizerConfig {
        hop_budgets: budgets,
        seed: flight_seed(config.optimizer.seed, &flight_id, hour),
        ..config.optimizer.clone()
    };
    let result = if opt.hop_budgets.is_empty() {
        edmoga::OptimizationResult {
            source,
            single_hop: edmoga::enumerate_single_hop(network, source),
            budgets: Vec::new(),
            front: Vec::new(),
        }
    } else {
        edmoga::run(network, source, &opt)?
    };
    Ok(FlightOutcome {
        flight_id,
        fronts_upto: UPTO_HOPS.map(|h| result.front_up_to(h)),
    })
}

/// Metrics of one hour from its flights' outcomes.
pub fn hour_metrics(hour: u32, outcomes: &[FlightOutcome], policy: SelectionPolicy) -> HourlyMetrics {
    let mut m = HourlyMetrics::empty(hour);
    m.flights_in_air = outcomes.len();
    for o in outcomes {
        if let Some(h) = o.min_hops() {
            m.reach_exactly[h - 1] += 1;
        }
        for (i, front) in o.fronts_upto.iter().enumerate() {
            if front.iter().any(|c| c.objectives.feasible) {
                m.reach_upto[i] += 1;
            }
        }
    }
    for i in 0..UPTO_HOPS.len() {
        let fronts: Vec<&[Candidate]> = outcomes.iter().map(|o| o.fronts_upto[i].as_slice()).collect();
        m.avg_upto[i] = aggregate_flight_metrics(&fronts, policy);
    }
    m
}

/// Runs the sweep: for each hour of the first UTC day in `records`, every
/// airborne flight is optimized as a source. Per-flight runs go through a
/// pool of `config.jobs` workers; results do not depend on the job count.
pub fn run_hourly_experiment(
    records: &[FlightRecord],
    stations: &[GroundStation],
    config: &SweepConfig,
    occupancy: &dyn OccupancyProvider,
) -> Result<Vec<HourlyMetrics>> {
    let start = day_start(records).ok_or_else(|| Error::Empty("flight dataset has no records".into()))?;
    config.optimizer.validate()?;
    let mut networks = Vec::with_capacity(HOURS);
    for hour in 0..HOURS as u32 {
        let t = start + 3600.0 * f64::from(hour);
        let snapshot = build_snapshot(records, t, config.window_s, config.min_altitude_m, occupancy, stations)?;
        networks.push(Network::new(snapshot, config.params, config.table.clone(), config.constraints)?);
    }
    let tasks: Vec<(u32, NodeId)> = networks
        .iter()
        .enumerate()
        .flat_map(|(h, n)| n.aircraft().iter().map(move |&a| (h as u32, a)))
        .collect();
    let outcomes = par::map(&tasks, config.jobs, |&(hour, source)| {
        optimize_flight(&networks[hour as usize], source, hour, config)
    });
    let mut per_hour: Vec<Vec<FlightOutcome>> = vec![Vec::new(); HOURS];
    for (&(hour, _), outcome) in tasks.iter().zip(outcomes) {
        per_hour[hour as usize].push(outcome?);
    }
    let metrics: Vec<HourlyMetrics> = per_hour
        .iter()
        .enumerate()
        .map(|(h, o)| hour_metrics(h as u32, o, config.policy))
        .collect();
    for m in &metrics {
        check_metrics(m)?;
    }
    Ok(metrics)
}

fn check_metrics(m: &HourlyMetrics) -> Result<()> {
    let exact: usize = m.reach_exactly.iter().sum();
    let monotone = m.reach_upto.windows(2).all(|w| w[0] <= w[1]);
    if exact > m.flights_in_air || !monotone || m.reach_upto[2] > m.flights_in_air {
        return Err(Error::Invariant(format!("inconsistent counts at hour {}: {m:?}", m.hour)));
    }
    Ok(())
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_default()
}

/// CSV text of `metrics`, one row per hour in ascending order, LF endings.
/// Averages of hours without any reachable flight are left empty.
pub fn results_csv(metrics: &[HourlyMetrics]) -> String {
    let mut rows: Vec<&HourlyMetrics> = metrics.iter().collect();
    rows.sort_by_key(|m| m.hour);
    let mut out = String::new();
    out.push_str(RESULTS_CSV_HEADER);
    out.push('\n');
    for m in rows {
        let _ = write!(out, "{},{}", m.hour, m.flights_in_air);
        for c in m.reach_exactly.iter().chain(&m.reach_upto) {
            let _ = write!(out, ",{c}");
        }
        for field in [
            |a: &Averages| a.se,
            |a: &Averages| a.delay,
            |a: &Averages| a.pet,
        ] {
            for a in &m.avg_upto {
                let _ = write!(out, ",{}", opt(a.as_ref().map(field)));
            }
        }
        out.push('\n');
    }
    out
}

pub fn write_results(metrics: &[HourlyMetrics], path: &Path) -> Result<()> {
    std::fs::write(path, results_csv(metrics)).map_err(|e| Error::io(path, e))
}

//! Path evaluation into (spectral efficiency, delay, path expiration time) and
//! the dominance / epsilon-dominance machinery used by the optimizer.
//!
//! Objectives are compared in a normalized, all-minimized space
//! `(-se, delay, -pet)`; see [`NormalizedObjective`].

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flightdata::Snapshot;
use crate::linkmodel::{
    link_fault, link_geometry, AcmTable, Endpoint, LinkBudgetParams, LinkFault, LinkGeometry,
    LinkMetrics,
};

/// Largest hop count N - 1 any route may have.
pub const MAX_HOPS: usize = 5;

pub const DIMENSIONS: usize = 3;

/// Hard constraints on a route and the penalty weights used to rank
/// infeasible routes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathConstraints {
    pub max_delay_s: f64,
    /// Penalty per infeasible link.
    pub broken_link_penalty: f64,
    /// Penalty per second of delay above `max_delay_s`.
    pub delay_penalty: f64,
}

impl Default for PathConstraints {
    fn default() -> Self {
        Self {
            max_delay_s: 0.250,
            broken_link_penalty: 1000.0,
            delay_penalty: 100.0,
        }
    }
}

/// Dense index of a node inside a [`Network`]. Indices follow the
/// lexicographic order of node ids, so comparing index lists compares id lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub u32);

impl NodeId {
    fn idx(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum NodeRole {
    Aircraft { occupancy: u32 },
    Ground,
}

/// A snapshot prepared for route evaluation: nodes are interned and every
/// pairwise link geometry is computed once.
#[derive(Debug, Clone)]
pub struct Network {
    snapshot: Snapshot,
    ids: Vec<String>,
    lookup: HashMap<String, NodeId>,
    roles: Vec<NodeRole>,
    aircraft: Vec<NodeId>,
    grounds: Vec<NodeId>,
    links: Vec<Option<LinkGeometry>>,
    params: LinkBudgetParams,
    constraints: PathConstraints,
    table: AcmTable,
}

impl Network {
    pub fn new(
        snapshot: Snapshot,
        params: LinkBudgetParams,
        table: AcmTable,
        constraints: PathConstraints,
    ) -> Result<Self> {
        params.validate()?;
        let mut ids: Vec<String> = snapshot
            .aircraft
            .keys()
            .chain(snapshot.ground_stations.keys())
            .cloned()
            .collect();
        ids.sort();
        for w in ids.windows(2) {
            if w[0] == w[1] {
                return Err(Error::Instance(format!("node id `{}` used twice", w[0])));
            }
        }
        let lookup: HashMap<String, NodeId> = ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), NodeId(i as u32)))
            .collect();
        let mut roles = Vec::with_capacity(ids.len());
        let (mut aircraft, mut grounds) = (Vec::new(), Vec::new());
        for (i, id) in ids.iter().enumerate() {
            if let Some(a) = snapshot.aircraft.get(id) {
                if a.queue_occupancy > params.buffer_capacity {
                    return Err(Error::InputDomain(format!(
                        "aircraft {id}: queue occupancy {} exceeds buffer capacity {}",
                        a.queue_occupancy, params.buffer_capacity
                    )));
                }
                roles.push(NodeRole::Aircraft {
                    occupancy: a.queue_occupancy,
                });
                aircraft.push(NodeId(i as u32));
            } else {
                roles.push(NodeRole::Ground);
                grounds.push(NodeId(i as u32));
            }
        }
        let n = ids.len();
        let mut links = vec![None; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                if roles[i] == NodeRole::Ground && roles[j] == NodeRole::Ground {
                    continue;
                }
                let ei = endpoint(&snapshot, &ids[i]);
                let ej = endpoint(&snapshot, &ids[j]);
                let g = link_geometry(ei, ej, &params, &table)?;
                links[i * n + j] = Some(g);
                links[j * n + i] = Some(g);
            }
        }
        Ok(Network {
            snapshot,
            ids,
            lookup,
            roles,
            aircraft,
            grounds,
            links,
            params,
            constraints,
            table,
        })
    }

    /// Network with default link parameters, ACM table and constraints.
    pub fn with_defaults(snapshot: Snapshot) -> Result<Self> {
        Self::new(
            snapshot,
            LinkBudgetParams::default(),
            AcmTable::default(),
            PathConstraints::default(),
        )
    }

    pub fn snapshot(&self) -> &Snapshot {
        &self.snapshot
    }

    pub fn params(&self) -> &LinkBudgetParams {
        &self.params
    }

    pub fn table(&self) -> &AcmTable {
        &self.table
    }

    pub fn constraints(&self) -> &PathConstraints {
        &self.constraints
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    /// Aircraft ids in ascending order.
    pub fn aircraft(&self) -> &[NodeId] {
        &self.aircraft
    }

    pub fn ground_stations(&self) -> &[NodeId] {
        &self.grounds
    }

    pub fn id(&self, node: NodeId) -> &str {
        &self.ids[node.idx()]
    }

    pub fn node(&self, id: &str) -> Result<NodeId> {
        self.lookup
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownNode(id.to_string()))
    }

    pub fn is_ground(&self, node: NodeId) -> bool {
        self.roles[node.idx()] == NodeRole::Ground
    }

    pub fn is_aircraft(&self, node: NodeId) -> bool {
        !self.is_ground(node)
    }

    fn occupancy(&self, node: NodeId) -> Option<u32> {
        match self.roles[node.idx()] {
            NodeRole::Aircraft { occupancy } => Some(occupancy),
            NodeRole::Ground => None,
        }
    }

    pub fn link(&self, a: NodeId, b: NodeId) -> Option<&LinkGeometry> {
        self.links[a.idx() * self.ids.len() + b.idx()].as_ref()
    }

    pub fn endpoint(&self, node: NodeId) -> Endpoint<'_> {
        endpoint(&self.snapshot, self.id(node))
    }

    /// Full metrics of the directed link `tx -> rx`.
    pub fn link_metrics(&self, tx: NodeId, rx: NodeId, transmitter_is_source: bool) -> Result<LinkMetrics> {
        let g = self.link(tx, rx).ok_or_else(|| {
            Error::InputDomain(format!("no link between {} and {}", self.id(tx), self.id(rx)))
        })?;
        let delay_s = crate::linkmodel::link_delay(
            g.distance_m,
            transmitter_is_source,
            self.occupancy(tx).unwrap_or(0),
            &self.params,
        )?;
        Ok(LinkMetrics {
            distance_m: g.distance_m,
            kind: g.kind,
            mode: g.mode.and_then(|k| self.table.mode(k as usize).cloned()),
            spectral_efficiency: g.spectral_efficiency,
            delay_s,
            let_s: g.let_s,
            fault: link_fault(g, self.occupancy(rx), &self.params),
        })
    }

    pub fn path(&self, ids: &[&str]) -> Result<RoutePath> {
        let nodes = ids.iter().map(|id| self.node(id)).collect::<Result<Vec<_>>>()?;
        RoutePath::new(nodes, self)
    }

    pub fn render(&self, path: &RoutePath) -> Vec<&str> {
        path.nodes().iter().map(|&n| self.id(n)).collect()
    }
}

fn endpoint<'a>(snapshot: &'a Snapshot, id: &str) -> Endpoint<'a> {
    match snapshot.aircraft.get(id) {
        Some(a) => Endpoint::Aircraft(a),
        None => Endpoint::Ground(&snapshot.ground_stations[id]),
    }
}

/// Source aircraft, distinct relay aircraft, terminal ground station.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RoutePath {
    nodes: Vec<NodeId>,
}

impl RoutePath {
    pub fn new(nodes: Vec<NodeId>, network: &Network) -> Result<Self> {
        let path = RoutePath { nodes };
        path.validate(network)?;
        Ok(path)
    }

    pub(crate) fn from_nodes_unchecked(nodes: Vec<NodeId>) -> Self {
        RoutePath { nodes }
    }

    pub fn validate(&self, network: &Network) -> Result<()> {
        let n = self.nodes.len();
        if n < 2 {
            return Err(Error::InvalidRoute("a route needs at least two nodes".into()));
        }
        if n - 1 > MAX_HOPS {
            return Err(Error::InvalidRoute(format!("{} hops exceeds {MAX_HOPS}", n - 1)));
        }
        if let Some(bad) = self.nodes.iter().find(|id| id.idx() >= network.node_count()) {
            return Err(Error::UnknownNode(format!("#{}", bad.0)));
        }
        if !network.is_ground(self.nodes[n - 1]) {
            return Err(Error::InvalidRoute(format!(
                "last node `{}` is not a ground station",
                network.id(self.nodes[n - 1])
            )));
        }
        for (i, &a) in self.nodes[..n - 1].iter().enumerate() {
            if network.is_ground(a) {
                return Err(Error::InvalidRoute(format!(
                    "ground station `{}` before the end of the route",
                    network.id(a)
                )));
            }
            if self.nodes[..i].contains(&a) {
                return Err(Error::InvalidRoute(format!("aircraft `{}` repeated", network.id(a))));
            }
        }
        Ok(())
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn hops(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn source(&self) -> NodeId {
        self.nodes[0]
    }

    pub fn ground_station(&self) -> NodeId {
        self.nodes[self.nodes.len() - 1]
    }
}

/// `(se, delay, pet)` of one route plus its constraint status.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveVector {
    /// End-to-end spectral efficiency (bps/Hz), maximized.
    pub se: f64,
    /// End-to-end latency (s), minimized.
    pub delay: f64,
    /// Path expiration time (s), maximized.
    pub pet: f64,
    pub feasible: bool,
    pub violation: f64,
}

impl ObjectiveVector {
    pub fn normalized(&self) -> NormalizedObjective {
        NormalizedObjective([-self.se, self.delay, -self.pet])
    }
}

/// Objectives mapped so every component is minimized: `[-se, delay, -pet]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizedObjective(pub [f64; DIMENSIONS]);

impl NormalizedObjective {
    fn total_cmp(&self, other: &Self) -> Ordering {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a.total_cmp(b))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }
}

pub fn evaluate_path(path: &RoutePath, network: &Network) -> ObjectiveVector {
    let params = network.params();
    let nodes = path.nodes();
    let mut se = f64::INFINITY;
    let mut pet = f64::INFINITY;
    let mut delay = 0.0;
    let mut broken = 0u32;
    for (i, w) in nodes.windows(2).enumerate() {
        let (tx, rx) = (w[0], w[1]);
        let g = network
            .link(tx, rx)
            .expect("validated routes only contain airborne transmitters");
        let is_source = i == 0;
        let queue = if is_source && !params.queue_at_source {
            0.0
        } else {
            f64::from(network.occupancy(tx).unwrap_or(0) + 1) * params.queue_unit_s
        };
        let processing = if is_source { 0.0 } else { params.relay_processing_s };
        delay += g.distance_m / params.c + processing + queue;
        se = se.min(g.spectral_efficiency);
        pet = pet.min(g.let_s);
        if link_fault(g, network.occupancy(rx), params).is_some() {
            broken += 1;
        }
    }
    let c = network.constraints();
    let over = (delay - c.max_delay_s).max(0.0);
    let feasible = broken == 0 && over == 0.0 && path.hops() <= MAX_HOPS;
    let violation = if feasible {
        0.0
    } else {
        f64::from(broken) * c.broken_link_penalty + over * c.delay_penalty
    };
    ObjectiveVector {
        se,
        delay,
        pet,
        feasible,
        violation,
    }
}

/// Per-link metrics along a route, first link transmitted by the source.
pub fn path_link_metrics(path: &RoutePath, network: &Network) -> Result<Vec<LinkMetrics>> {
    path.nodes()
        .windows(2)
        .enumerate()
        .map(|(i, w)| network.link_metrics(w[0], w[1], i == 0))
        .collect()
}

/// A route with its evaluated objectives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub path: RoutePath,
    pub objectives: ObjectiveVector,
}

impl Candidate {
    pub fn evaluate(path: RoutePath, network: &Network) -> Self {
        let objectives = evaluate_path(&path, network);
        Candidate { path, objectives }
    }

    pub fn normalized(&self) -> NormalizedObjective {
        self.objectives.normalized()
    }
}

/// Pareto dominance on normalized objectives: no worse everywhere, strictly
/// better somewhere.
pub fn dominates(o1: &NormalizedObjective, o2: &NormalizedObjective) -> bool {
    let mut strictly = false;
    for (a, b) in o1.0.iter().zip(o2.0.iter()) {
        if a > b {
            return false;
        }
        if a < b {
            strictly = true;
        }
    }
    strictly
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preference {
    First,
    Second,
    Neither,
}

/// Feasible beats infeasible, lower violation beats higher, and two feasible
/// vectors fall back to Pareto dominance.
pub fn constrained_compare(o1: &ObjectiveVector, o2: &ObjectiveVector) -> Preference {
    match (o1.feasible, o2.feasible) {
        (true, false) => Preference::First,
        (false, true) => Preference::Second,
        (false, false) => match o1.violation.partial_cmp(&o2.violation) {
            Some(Ordering::Less) => Preference::First,
            Some(Ordering::Greater) => Preference::Second,
            _ => Preference::Neither,
        },
        (true, true) => {
            let (n1, n2) = (o1.normalized(), o2.normalized());
            if dominates(&n1, &n2) {
                Preference::First
            } else if dominates(&n2, &n1) {
                Preference::Second
            } else {
                Preference::Neither
            }
        }
    }
}

/// Pareto-front limits and box grid in normalized objective space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrontLimits {
    pub min: [f64; DIMENSIONS],
    pub max: [f64; DIMENSIONS],
    pub n_box: [u32; DIMENSIONS],
    /// Box widths; zero marks a degenerate dimension.
    pub eps: [f64; DIMENSIONS],
}

impl FrontLimits {
    pub fn new(min: [f64; DIMENSIONS], max: [f64; DIMENSIONS], n_box: [u32; DIMENSIONS]) -> Self {
        let mut eps = [0.0; DIMENSIONS];
        for i in 0..DIMENSIONS {
            if max[i] > min[i] {
                eps[i] = (max[i] - min[i]) / f64::from(n_box[i].max(1));
            }
        }
        FrontLimits { min, max, n_box, eps }
    }

    /// Limits spanning `points`; `None` when empty.
    pub fn from_points<'a>(
        points: impl IntoIterator<Item = &'a NormalizedObjective>,
        n_box: [u32; DIMENSIONS],
    ) -> Option<Self> {
        let mut iter = points.into_iter();
        let first = iter.next()?;
        let (mut min, mut max) = (first.0, first.0);
        for p in iter {
            for i in 0..DIMENSIONS {
                min[i] = min[i].min(p.0[i]);
                max[i] = max[i].max(p.0[i]);
            }
        }
        Some(Self::new(min, max, n_box))
    }

    pub fn with_min(&self, min: [f64; DIMENSIONS]) -> Self {
        let mut max = self.max;
        for i in 0..DIMENSIONS {
            max[i] = max[i].max(min[i]);
        }
        Self::new(min, max, self.n_box)
    }

    pub fn is_finite(&self) -> bool {
        self.min.iter().chain(self.max.iter()).all(|v| v.is_finite())
    }

    /// Lower corner of box `b`.
    pub fn corner(&self, b: &[u32; DIMENSIONS]) -> [f64; DIMENSIONS] {
        std::array::from_fn(|i| self.min[i] + f64::from(b[i]) * self.eps[i])
    }
}

pub fn box_index(o: &NormalizedObjective, limits: &FrontLimits) -> [u32; DIMENSIONS] {
    std::array::from_fn(|i| {
        if limits.eps[i] == 0.0 {
            return 0;
        }
        let (lo, hi, n) = (limits.min[i], limits.max[i], limits.n_box[i]);
        let m = o.0[i];
        if m <= lo {
            0
        } else if m >= hi {
            n
        } else {
            let k = ((m - lo) * f64::from(n) / (hi - lo)).floor();
            (k as u32).min(n)
        }
    })
}

/// Distance to the box's lower corner, measured in box widths.
pub fn corner_distance(o: &NormalizedObjective, limits: &FrontLimits) -> f64 {
    let b = box_index(o, limits);
    let corner = limits.corner(&b);
    (0..DIMENSIONS)
        .filter(|&i| limits.eps[i] > 0.0)
        .map(|i| ((o.0[i] - corner[i]) / limits.eps[i]).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Box-based epsilon dominance: a strictly better box, or the same box with
/// plain dominance or (when mutually non-dominated) a smaller corner distance.
pub fn epsilon_dominates(o1: &NormalizedObjective, o2: &NormalizedObjective, limits: &FrontLimits) -> bool {
    let (b1, b2) = (box_index(o1, limits), box_index(o2, limits));
    if b1 != b2 {
        return b1.iter().zip(b2.iter()).all(|(x, y)| x <= y);
    }
    if dominates(o1, o2) {
        return true;
    }
    if dominates(o2, o1) {
        return false;
    }
    corner_distance(o1, limits) < corner_distance(o2, limits)
}

fn box_leq(a: &[u32; DIMENSIONS], b: &[u32; DIMENSIONS]) -> bool {
    a.iter().zip(b.iter()).all(|(x, y)| x <= y)
}

/// Non-dominated subset under [`constrained_compare`]. Identical objective
/// vectors collapse to the lexicographically smallest route. Output is sorted
/// by route.
pub fn pareto_filter(set: Vec<Candidate>) -> Vec<Candidate> {
    let (mut feasible, infeasible): (Vec<_>, Vec<_>) =
        set.into_iter().partition(|c| c.objectives.feasible);

    let mut out: Vec<Candidate> = if !feasible.is_empty() {
        // Sorted lexicographically, a vector can only be dominated by one
        // that precedes it, and it suffices to test against survivors.
        feasible.sort_by(|a, b| {
            a.normalized()
                .total_cmp(&b.normalized())
                .then_with(|| a.path.cmp(&b.path))
        });
        let mut front: Vec<Candidate> = Vec::new();
        for c in feasible {
            let n = c.normalized();
            let beaten = front.iter().any(|f| {
                let fnorm = f.normalized();
                fnorm == n || dominates(&fnorm, &n)
            });
            if !beaten {
                front.push(c);
            }
        }
        front
    } else {
        let best = infeasible
            .iter()
            .map(|c| c.objectives.violation)
            .fold(f64::INFINITY, f64::min);
        let mut keep: Vec<Candidate> = infeasible
            .into_iter()
            .filter(|c| c.objectives.violation == best)
            .collect();
        keep.sort_by(|a, b| a.path.cmp(&b.path));
        let mut out: Vec<Candidate> = Vec::new();
        for c in keep {
            if !out.iter().any(|o| o.objectives == c.objectives) {
                out.push(c);
            }
        }
        out
    };
    out.sort_by(|a, b| a.path.cmp(&b.path));
    out
}

/// Epsilon-Pareto front: limits from the Pareto-filtered set, then one
/// representative per occupied, box-non-dominated cell.
pub fn epsilon_front(set: Vec<Candidate>, n_box: [u32; DIMENSIONS]) -> Result<(Vec<Candidate>, FrontLimits)> {
    if set.is_empty() {
        return Err(Error::Empty("epsilon front of an empty set".into()));
    }
    let pareto = pareto_filter(set);
    let normalized: Vec<NormalizedObjective> = pareto.iter().map(Candidate::normalized).collect();
    let limits = FrontLimits::from_points(&normalized, n_box).expect("pareto set of a non-empty set is non-empty");

    let mut cells: BTreeMap<[u32; DIMENSIONS], (f64, Candidate)> = BTreeMap::new();
    for (c, n) in pareto.into_iter().zip(normalized) {
        let b = box_index(&n, &limits);
        let dist = corner_distance(&n, &limits);
        match cells.get(&b) {
            Some((best, incumbent))
                if (*best, &incumbent.path) <= (dist, &c.path) => {}
            _ => {
                cells.insert(b, (dist, c));
            }
        }
    }
    let boxes: Vec<[u32; DIMENSIONS]> = cells.keys().copied().collect();
    let mut members: Vec<Candidate> = cells
        .into_iter()
        .filter(|(b, _)| !boxes.iter().any(|o| o != b && box_leq(o, b)))
        .map(|(_, (_, c))| c)
        .collect();
    members.sort_by(|a, b| a.path.cmp(&b.path));
    Ok((members, limits))
}

impl fmt::Display for ObjectiveVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "se={} bps/Hz delay={} s pet={} s feasible={}",
            self.se, self.delay, self.pet, self.feasible
        )?;
        if !self.feasible {
            write!(f, " violation={}", self.violation)?;
        }
        Ok(())
    }
}

/// Reasons a route is infeasible, in link order, followed by the delay check.
pub fn infeasibility_reasons(path: &RoutePath, network: &Network) -> Result<Vec<String>> {
    let mut reasons = Vec::new();
    let links = path_link_metrics(path, network)?;
    let mut delay = 0.0;
    for (w, m) in path.nodes().windows(2).zip(&links) {
        delay += m.delay_s;
        if let Some(fault) = m.fault {
            let detail = match fault {
                LinkFault::NoAcmMode => format!(" at {:.3} km", m.distance_m / 1e3),
                LinkFault::ReceiverQueueFull => String::new(),
            };
            reasons.push(format!(
                "{} -> {}: {fault}{detail}",
                network.id(w[0]),
                network.id(w[1])
            ));
        }
    }
    if delay > network.constraints().max_delay_s {
        reasons.push(format!(
            "delay {:.6} s exceeds {} s",
            delay,
            network.constraints().max_delay_s
        ));
    }
    Ok(reasons)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(a: f64, b: f64, c: f64) -> NormalizedObjective {
        NormalizedObjective([a, b, c])
    }

    fn feasible(se: f64, delay: f64, pet: f64) -> ObjectiveVector {
        ObjectiveVector {
            se,
            delay,
            pet,
            feasible: true,
            violation: 0.0,
        }
    }

    fn cand(id: u32, o: ObjectiveVector) -> Candidate {
        Candidate {
            path: RoutePath::from_nodes_unchecked(vec![NodeId(0), NodeId(id)]),
            objectives: o,
        }
    }

    #[test]
    fn dominance_examples() {
        assert!(dominates(&n(-2.0, 0.01, -900.0), &n(-1.0, 0.02, -800.0)));
        let o = n(-1.0, 0.02, -800.0);
        assert!(!dominates(&o, &o));
        let (p, q) = (n(-2.0, 0.02, -900.0), n(-1.0, 0.01, -800.0));
        assert!(!dominates(&p, &q) && !dominates(&q, &p));
    }

    #[test]
    fn constrained_compare_examples() {
        let f = feasible(1.0, 0.01, 100.0);
        let inf = |v| ObjectiveVector {
            feasible: false,
            violation: v,
            ..f
        };
        assert_eq!(constrained_compare(&f, &inf(3.0)), Preference::First);
        assert_eq!(constrained_compare(&inf(3.0), &f), Preference::Second);
        assert_eq!(constrained_compare(&inf(3.0), &inf(5.0)), Preference::First);
        assert_eq!(constrained_compare(&inf(3.0), &inf(3.0)), Preference::Neither);
        let g = feasible(2.0, 0.02, 100.0);
        assert_eq!(constrained_compare(&f, &g), Preference::Neither);
    }

    #[test]
    fn box_index_corners() {
        let limits = FrontLimits::new([0.0; 3], [1.0; 3], [20; 3]);
        assert_eq!(box_index(&n(0.0, 0.0, 0.0), &limits), [0, 0, 0]);
        assert_eq!(box_index(&n(1.0, 1.0, 1.0), &limits), [20, 20, 20]);
        assert_eq!(box_index(&n(0.5, 0.5, 0.5), &limits), [10, 10, 10]);
        assert_eq!(box_index(&n(-3.0, 7.0, 0.5), &limits), [0, 20, 10]);
        let degenerate = FrontLimits::new([0.0; 3], [0.0, 1.0, 1.0], [20; 3]);
        assert_eq!(degenerate.eps[0], 0.0);
        assert_eq!(box_index(&n(5.0, 0.5, 0.5), &degenerate)[0], 0);
    }

    #[test]
    fn box_index_awkward_widths() {
        let limits = FrontLimits::new([-3.197, 0.0012, -86_400.0], [-0.459, 0.2437, -17.3], [20; 3]);
        let top = NormalizedObjective(limits.max);
        assert_eq!(box_index(&top, &limits), [20, 20, 20]);
        let bottom = NormalizedObjective(limits.min);
        assert_eq!(box_index(&bottom, &limits), [0, 0, 0]);
    }

    #[test]
    fn epsilon_dominance_examples() {
        let limits = FrontLimits::new([0.0; 3], [1.0; 3], [10; 3]);
        assert!(epsilon_dominates(&n(0.05, 0.05, 0.05), &n(0.55, 0.55, 0.55), &limits));
        assert!(epsilon_dominates(&n(0.51, 0.51, 0.51), &n(0.52, 0.52, 0.52), &limits));
        assert!(!epsilon_dominates(&n(0.52, 0.52, 0.52), &n(0.51, 0.51, 0.51), &limits));
        // same box, trade-off, equal corner distance
        let (a, b) = (n(0.52, 0.51, 0.55), n(0.51, 0.52, 0.55));
        assert!(!epsilon_dominates(&a, &b, &limits) && !epsilon_dominates(&b, &a, &limits));
        // same box, trade-off, b closer to the corner
        let (a, b) = (n(0.58, 0.51, 0.55), n(0.51, 0.52, 0.55));
        assert!(epsilon_dominates(&b, &a, &limits) && !epsilon_dominates(&a, &b, &limits));
        // incomparable boxes
        assert!(!epsilon_dominates(&n(0.05, 0.95, 0.5), &n(0.95, 0.05, 0.5), &limits));
    }

    #[test]
    fn pareto_filter_examples() {
        let a = cand(1, feasible(2.0, 0.01, 100.0));
        let b = cand(2, feasible(1.0, 0.02, 50.0));
        assert_eq!(pareto_filter(vec![a.clone(), b.clone()]), vec![a.clone()]);

        let c = cand(3, feasible(1.0, 0.005, 50.0));
        assert_eq!(pareto_filter(vec![c.clone(), a.clone()]).len(), 2);

        let dup = cand(0, a.objectives);
        assert_eq!(pareto_filter(vec![a.clone(), dup.clone()]), vec![dup]);

        let bad = cand(4, ObjectiveVector { feasible: false, violation: 1000.0, ..a.objectives });
        assert_eq!(pareto_filter(vec![bad.clone(), b.clone()]), vec![b]);
        let worse = cand(5, ObjectiveVector { feasible: false, violation: 2000.0, ..a.objectives });
        assert_eq!(pareto_filter(vec![worse, bad.clone()]), vec![bad]);
        assert!(pareto_filter(Vec::new()).is_empty());
    }

    #[test]
    fn epsilon_front_examples() {
        assert!(matches!(epsilon_front(Vec::new(), [20; 3]), Err(Error::Empty(_))));

        let a = cand(1, feasible(2.0, 0.01, 100.0));
        let (front, limits) = epsilon_front(vec![a.clone()], [20; 3]).unwrap();
        assert_eq!(front, vec![a.clone()]);
        assert_eq!(limits.eps, [0.0; 3]);

        // Two points sharing a box, the first dominating.
        let far = cand(9, feasible(1.0, 0.2, 10.0));
        let near = cand(8, feasible(1.99, 0.0101, 99.0));
        let (front, _) = epsilon_front(vec![a.clone(), near, far.clone()], [20; 3]).unwrap();
        assert_eq!(front, vec![a]);
    }
}

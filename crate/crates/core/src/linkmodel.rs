//! Single-link model: distance-based ACM mode selection, delay decomposition
//! and link expiration time.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flightdata::{FlightState, GroundStation};
use crate::geo::{
    geodetic_to_ecef, project_to_plane, slant_distance, GeodeticPosition, PlanarKinematicState,
};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Maximum air-to-ground range (km).
pub const DEFAULT_A2G_MAX_KM: f64 = 370.4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LinkKind {
    /// Air-to-air.
    A2A,
    /// Air-to-ground.
    A2G,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcmMode {
    pub index: u8,
    pub color: String,
    pub modulation: String,
    pub code_rate: Option<f64>,
    /// bps/Hz.
    pub spectral_efficiency: f64,
    /// Lower switching threshold d_k (km).
    pub threshold_km: f64,
}

impl AcmMode {
    fn threshold_m(&self) -> f64 {
        km_to_m(self.threshold_km)
    }
}

/// km → m, snapped to the micrometre so that table thresholds such as 5.56 km
/// compare exactly against distances given in metres.
fn km_to_m(km: f64) -> f64 {
    (km * 1e9).round() / 1e6
}

/// Ordered ACM modes `0..=K`. Mode 0 is the "no link" row; its threshold is
/// the maximum air-to-air range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcmTable {
    modes: Vec<AcmMode>,
    a2g_max_km: f64,
}

pub const ACM_CSV_HEADER: [&str; 6] = [
    "mode",
    "color",
    "modulation",
    "code_rate",
    "se_bps_hz",
    "threshold_km",
];

impl Default for AcmTable {
    fn default() -> Self {
        let m = |index, color: &str, modulation: &str, code_rate, se, threshold_km| AcmMode {
            index,
            color: color.into(),
            modulation: modulation.into(),
            code_rate,
            spectral_efficiency: se,
            threshold_km,
        };
        AcmTable {
            modes: vec![
                m(0, "None", "None", None, 0.0, 740.8),
                m(1, "Black", "BPSK", Some(0.488), 0.459, 500.0),
                m(2, "Magenta", "QPSK", Some(0.533), 1.000, 350.0),
                m(3, "Green", "QPSK", Some(0.706), 1.322, 200.0),
                m(4, "Yellow", "8-QAM", Some(0.642), 1.809, 110.0),
                m(5, "Blue", "8-QAM", Some(0.780), 2.194, 40.0),
                m(6, "Cyan", "16-QAM", Some(0.731), 2.747, 25.0),
                m(7, "Red", "16-QAM", Some(0.853), 3.197, 5.56),
            ],
            a2g_max_km: DEFAULT_A2G_MAX_KM,
        }
    }
}

impl AcmTable {
    pub fn new(modes: Vec<AcmMode>, a2g_max_km: f64) -> Result<Self> {
        if modes.len() < 2 {
            return Err(Error::Config("ACM table needs mode 0 and at least one mode".into()));
        }
        for (k, m) in modes.iter().enumerate() {
            if m.index as usize != k {
                return Err(Error::Config(format!(
                    "ACM modes must be numbered 0..K in order; row {k} has mode {}",
                    m.index
                )));
            }
            if !(m.threshold_km > 0.0) || !m.spectral_efficiency.is_finite() {
                return Err(Error::Config(format!("mode {k}: invalid threshold or SE")));
            }
        }
        for w in modes.windows(2) {
            if w[1].threshold_km >= w[0].threshold_km {
                return Err(Error::Config(format!(
                    "thresholds must strictly decrease (mode {} has {} km, mode {} has {} km)",
                    w[0].index, w[0].threshold_km, w[1].index, w[1].threshold_km
                )));
            }
        }
        for w in modes[1..].windows(2) {
            if w[1].spectral_efficiency <= w[0].spectral_efficiency {
                return Err(Error::Config(format!(
                    "spectral efficiency must strictly increase (mode {} vs {})",
                    w[0].index, w[1].index
                )));
            }
        }
        if !(a2g_max_km > 0.0) {
            return Err(Error::Config("A2G range must be positive".into()));
        }
        Ok(AcmTable { modes, a2g_max_km })
    }

    /// Loads `mode,color,modulation,code_rate,se_bps_hz,threshold_km` rows.
    /// Empty or `None` code rates are accepted (mode 0).
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().from_reader(text.as_bytes());
        let headers = reader.headers()?.clone();
        let got: Vec<&str> = headers.iter().map(str::trim).collect();
        if got != ACM_CSV_HEADER {
            return Err(Error::Config(format!(
                "expected ACM header `{}`",
                ACM_CSV_HEADER.join(",")
            )));
        }
        let mut modes = Vec::new();
        for row in reader.records() {
            let row = row?;
            let get = |i: usize| row.get(i).map(str::trim).unwrap_or("");
            let num = |i: usize| -> Result<f64> {
                get(i).parse::<f64>().map_err(|_| {
                    Error::Config(format!("ACM column {}: bad number `{}`", ACM_CSV_HEADER[i], get(i)))
                })
            };
            let code_rate = match get(3) {
                "" | "None" | "none" => None,
                _ => Some(num(3)?),
            };
            modes.push(AcmMode {
                index: get(0)
                    .parse()
                    .map_err(|_| Error::Config(format!("bad ACM mode index `{}`", get(0))))?,
                color: get(1).into(),
                modulation: get(2).into(),
                code_rate,
                spectral_efficiency: num(4)?,
                threshold_km: num(5)?,
            });
        }
        AcmTable::new(modes, DEFAULT_A2G_MAX_KM)
    }

    pub fn with_a2g_max_km(mut self, km: f64) -> Self {
        self.a2g_max_km = km;
        self
    }

    pub fn modes(&self) -> &[AcmMode] {
        &self.modes
    }

    pub fn mode(&self, k: usize) -> Option<&AcmMode> {
        self.modes.get(k)
    }

    /// D_max for air-to-air links (km); equals d_0.
    pub fn a2a_max_km(&self) -> f64 {
        self.modes[0].threshold_km
    }

    pub fn a2g_max_km(&self) -> f64 {
        self.a2g_max_km
    }

    /// D_min (km): the last mode's threshold, the minimum safety separation.
    pub fn min_km(&self) -> f64 {
        self.modes[self.modes.len() - 1].threshold_km
    }

    pub fn max_km(&self, kind: LinkKind) -> f64 {
        match kind {
            LinkKind::A2A => self.a2a_max_km(),
            LinkKind::A2G => self.a2g_max_km.min(self.a2a_max_km()),
        }
    }

    /// Upper distance d_{k-1} (km) bridged by mode `k >= 1`.
    pub fn upper_threshold_km(&self, k: usize) -> f64 {
        self.modes[k - 1].threshold_km
    }

    /// Index of the mode with `d_k <= d < d_{k-1}`, or `None` outside
    /// `[D_min, D_max(kind))`.
    pub fn select_index(&self, distance_m: f64, kind: LinkKind) -> Result<Option<usize>> {
        if !(distance_m >= 0.0) {
            return Err(Error::InputDomain(format!("negative distance {distance_m} m")));
        }
        if distance_m >= km_to_m(self.max_km(kind)) || distance_m < km_to_m(self.min_km()) {
            return Ok(None);
        }
        Ok((1..self.modes.len()).find(|&k| {
            self.modes[k].threshold_m() <= distance_m && distance_m < self.modes[k - 1].threshold_m()
        }))
    }

    pub fn to_csv(&self) -> String {
        let mut out = ACM_CSV_HEADER.join(",");
        out.push('\n');
        for m in &self.modes {
            let rate = m.code_rate.map(|r| r.to_string()).unwrap_or_else(|| "None".into());
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                m.index, m.color, m.modulation, rate, m.spectral_efficiency, m.threshold_km
            ));
        }
        out
    }
}

pub fn select_acm_mode(distance_m: f64, kind: LinkKind, table: &AcmTable) -> Result<Option<&AcmMode>> {
    Ok(table.select_index(distance_m, kind)?.map(|k| &table.modes[k]))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkBudgetParams {
    /// Speed of light (m/s).
    pub c: f64,
    /// Processing delay at a relay transmitter (s).
    pub relay_processing_s: f64,
    /// Per-packet queueing unit D_q0 (s).
    pub queue_unit_s: f64,
    /// Buffer capacity N_B.
    pub buffer_capacity: u32,
    /// Whether the source transmitter also pays queueing delay.
    pub queue_at_source: bool,
    /// Ceiling for link expiration times (s).
    pub let_cap_s: f64,
}

impl Default for LinkBudgetParams {
    fn default() -> Self {
        Self {
            c: SPEED_OF_LIGHT,
            relay_processing_s: 0.005,
            queue_unit_s: 0.010,
            buffer_capacity: crate::flightdata::DEFAULT_BUFFER_CAPACITY,
            queue_at_source: false,
            let_cap_s: 86_400.0,
        }
    }
}

impl LinkBudgetParams {
    pub fn validate(&self) -> Result<()> {
        let ok = self.c > 0.0
            && self.relay_processing_s >= 0.0
            && self.queue_unit_s >= 0.0
            && self.let_cap_s > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("invalid link parameters {self:?}")))
        }
    }
}

pub fn propagation_delay(distance_m: f64, params: &LinkBudgetParams) -> Result<f64> {
    if !(distance_m >= 0.0) {
        return Err(Error::InputDomain(format!("negative distance {distance_m} m")));
    }
    Ok(distance_m / params.c)
}

pub fn processing_delay(transmitter_is_source: bool, params: &LinkBudgetParams) -> f64 {
    if transmitter_is_source {
        0.0
    } else {
        params.relay_processing_s
    }
}

/// `(O + 1) * D_q0`, or zero for a source transmitter unless `queue_at_source`.
pub fn queueing_delay(occupancy: u32, transmitter_is_source: bool, params: &LinkBudgetParams) -> Result<f64> {
    if occupancy > params.buffer_capacity {
        return Err(Error::InputDomain(format!(
            "queue occupancy {occupancy} exceeds buffer capacity {}",
            params.buffer_capacity
        )));
    }
    if transmitter_is_source && !params.queue_at_source {
        return Ok(0.0);
    }
    Ok(f64::from(occupancy + 1) * params.queue_unit_s)
}

pub fn link_delay(
    distance_m: f64,
    transmitter_is_source: bool,
    occupancy: u32,
    params: &LinkBudgetParams,
) -> Result<f64> {
    Ok(propagation_delay(distance_m, params)?
        + processing_delay(transmitter_is_source, params)
        + queueing_delay(occupancy, transmitter_is_source, params)?)
}

/// Time until the planar distance between two constant-velocity nodes reaches
/// `threshold_km`, capped at `cap_s`.
///
/// With relative velocity (a, e) and relative position (b, f) this is the
/// positive root of |(b, f) + t (a, e)| = d.
pub fn link_expiration_time(
    s1: &PlanarKinematicState,
    s2: &PlanarKinematicState,
    threshold_km: f64,
    cap_s: f64,
) -> Result<f64> {
    let d = threshold_km * 1e3;
    let a = s1.vx - s2.vx;
    let b = s1.x - s2.x;
    let e = s1.vy - s2.vy;
    let f = s1.y - s2.y;
    let current = b.hypot(f);
    if !(current < d) {
        return Err(Error::State(format!(
            "link already beyond threshold ({:.3} km >= {threshold_km} km)",
            current / 1e3
        )));
    }
    let rel_speed2 = a * a + e * e;
    if rel_speed2 == 0.0 {
        return Ok(cap_s);
    }
    let disc = (rel_speed2 * d * d - (a * f - b * e).powi(2)).max(0.0);
    let t = (-(a * b + e * f) + disc.sqrt()) / rel_speed2;
    Ok(t.clamp(0.0, cap_s))
}

/// Either end of a link.
#[derive(Debug, Clone, Copy)]
pub enum Endpoint<'a> {
    Aircraft(&'a FlightState),
    Ground(&'a GroundStation),
}

impl Endpoint<'_> {
    pub fn position(&self) -> &GeodeticPosition {
        match self {
            Endpoint::Aircraft(a) => &a.position,
            Endpoint::Ground(g) => &g.position,
        }
    }

    pub fn ground_speed(&self) -> f64 {
        match self {
            Endpoint::Aircraft(a) => a.ground_speed,
            Endpoint::Ground(_) => GroundStation::SPEED,
        }
    }

    pub fn heading(&self) -> f64 {
        match self {
            Endpoint::Aircraft(a) => a.heading,
            Endpoint::Ground(_) => 0.0,
        }
    }

    pub fn occupancy(&self) -> u32 {
        match self {
            Endpoint::Aircraft(a) => a.queue_occupancy,
            Endpoint::Ground(_) => 0,
        }
    }

    pub fn is_ground(&self) -> bool {
        matches!(self, Endpoint::Ground(_))
    }
}

/// Delay-independent part of a link: symmetric in its endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkGeometry {
    pub distance_m: f64,
    pub kind: LinkKind,
    pub mode: Option<u8>,
    pub spectral_efficiency: f64,
    pub let_s: f64,
}

pub fn link_geometry(
    a: Endpoint<'_>,
    b: Endpoint<'_>,
    params: &LinkBudgetParams,
    table: &AcmTable,
) -> Result<LinkGeometry> {
    if a.is_ground() && b.is_ground() {
        return Err(Error::InputDomain("a link needs at least one airborne endpoint".into()));
    }
    let kind = if a.is_ground() || b.is_ground() {
        LinkKind::A2G
    } else {
        LinkKind::A2A
    };
    let distance_m = slant_distance(&geodetic_to_ecef(a.position())?, &geodetic_to_ecef(b.position())?);
    let mode = table.select_index(distance_m, kind)?;
    let (spectral_efficiency, let_s) = match mode {
        None => (0.0, 0.0),
        Some(k) => {
            let reference = a.position().midpoint(b.position());
            let pa = project_to_plane(&reference, a.position(), a.ground_speed(), a.heading())?;
            let pb = project_to_plane(&reference, b.position(), b.ground_speed(), b.heading())?;
            // The planar separation never exceeds the slant range, so the
            // precondition only fails on rounding at the threshold itself.
            let let_s = link_expiration_time(&pa, &pb, table.upper_threshold_km(k), params.let_cap_s)
                .unwrap_or(0.0);
            (table.modes[k].spectral_efficiency, let_s)
        }
    };
    Ok(LinkGeometry {
        distance_m,
        kind,
        mode: mode.map(|k| k as u8),
        spectral_efficiency,
        let_s,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LinkFault {
    /// Distance outside every ACM mode's range.
    NoAcmMode,
    ReceiverQueueFull,
}

impl std::fmt::Display for LinkFault {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LinkFault::NoAcmMode => "no ACM mode",
            LinkFault::ReceiverQueueFull => "receiver queue full",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkMetrics {
    pub distance_m: f64,
    pub kind: LinkKind,
    pub mode: Option<AcmMode>,
    pub spectral_efficiency: f64,
    pub delay_s: f64,
    pub let_s: f64,
    pub fault: Option<LinkFault>,
}

impl LinkMetrics {
    pub fn feasible(&self) -> bool {
        self.fault.is_none()
    }
}

/// Fault of a link given its geometry and receiver, if any.
pub fn link_fault(geometry: &LinkGeometry, rx_occupancy: Option<u32>, params: &LinkBudgetParams) -> Option<LinkFault> {
    if geometry.mode.is_none() {
        Some(LinkFault::NoAcmMode)
    } else if rx_occupancy.is_some_and(|o| o >= params.buffer_capacity) {
        Some(LinkFault::ReceiverQueueFull)
    } else {
        None
    }
}

pub fn evaluate_link(
    tx: Endpoint<'_>,
    rx: Endpoint<'_>,
    transmitter_is_source: bool,
    params: &LinkBudgetParams,
    table: &AcmTable,
) -> Result<LinkMetrics> {
    let geometry = link_geometry(tx, rx, params, table)?;
    let delay_s = link_delay(geometry.distance_m, transmitter_is_source, tx.occupancy(), params)?;
    let rx_occupancy = match rx {
        Endpoint::Aircraft(a) => Some(a.queue_occupancy),
        Endpoint::Ground(_) => None,
    };
    Ok(LinkMetrics {
        distance_m: geometry.distance_m,
        kind: geometry.kind,
        mode: geometry.mode.map(|k| table.modes[k as usize].clone()),
        spectral_efficiency: geometry.spectral_efficiency,
        delay_s,
        let_s: geometry.let_s,
        fault: link_fault(&geometry, rx_occupancy, params),
    })
}

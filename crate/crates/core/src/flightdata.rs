//! Flight-position records, ground-station configs and per-instant snapshots.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geo::{GeodeticPosition, MEAN_EARTH_RADIUS};

pub const FLIGHT_CSV_HEADER: [&str; 7] = [
    "timestamp_utc_s",
    "flight_id",
    "lat_deg",
    "lon_deg",
    "alt_m",
    "ground_speed_mps",
    "heading_deg",
];

pub const STATION_CSV_HEADER: [&str; 4] = ["station_id", "lat_deg", "lon_deg", "alt_m"];

/// Default altitude threshold separating airborne aircraft from ground traffic.
pub const DEFAULT_MIN_ALTITUDE_M: f64 = 1000.0;
/// Default staleness window for snapshot assembly.
pub const DEFAULT_WINDOW_S: f64 = 300.0;
/// Default per-node buffer capacity N_B.
pub const DEFAULT_BUFFER_CAPACITY: u32 = 10;
/// Parsing fails outright once more than this fraction of rows is malformed.
pub const MAX_ROW_ERROR_RATE: f64 = 0.10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlightRecord {
    pub timestamp: f64,
    pub flight_id: String,
    pub position: GeodeticPosition,
    pub ground_speed: f64,
    pub heading: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlightState {
    pub flight_id: String,
    pub position: GeodeticPosition,
    pub ground_speed: f64,
    pub heading: f64,
    pub queue_occupancy: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundStation {
    pub station_id: String,
    pub position: GeodeticPosition,
}

impl GroundStation {
    /// Ground stations never move.
    pub const SPEED: f64 = 0.0;
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Snapshot {
    pub evaluation_time: f64,
    pub aircraft: BTreeMap<String, FlightState>,
    pub ground_stations: BTreeMap<String, GroundStation>,
}

impl Snapshot {
    /// Builds a snapshot, rejecting duplicate ids within or across the two node sets.
    pub fn new(
        evaluation_time: f64,
        aircraft: impl IntoIterator<Item = FlightState>,
        ground_stations: impl IntoIterator<Item = GroundStation>,
    ) -> Result<Self> {
        let mut snap = Snapshot {
            evaluation_time,
            ..Default::default()
        };
        for a in aircraft {
            if snap.aircraft.contains_key(&a.flight_id) {
                return Err(Error::Instance(format!(
                    "duplicate aircraft id `{}` in snapshot",
                    a.flight_id
                )));
            }
            snap.aircraft.insert(a.flight_id.clone(), a);
        }
        for g in ground_stations {
            if snap.aircraft.contains_key(&g.station_id)
                || snap.ground_stations.contains_key(&g.station_id)
            {
                return Err(Error::Instance(format!(
                    "ground station id `{}` collides with another node",
                    g.station_id
                )));
            }
            snap.ground_stations.insert(g.station_id.clone(), g);
        }
        Ok(snap)
    }
}

/// Supplies the queue occupancy O of an aircraft at a given time.
pub trait OccupancyProvider: Sync {
    fn occupancy(&self, flight_id: &str, t: f64) -> u32;
}

impl<F> OccupancyProvider for F
where
    F: Fn(&str, f64) -> u32 + Sync,
{
    fn occupancy(&self, flight_id: &str, t: f64) -> u32 {
        self(flight_id, t)
    }
}

/// Every queue empty.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroOccupancy;

impl OccupancyProvider for ZeroOccupancy {
    fn occupancy(&self, _flight_id: &str, _t: f64) -> u32 {
        0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RowError {
    /// 1-based line number in the source file.
    pub line: u64,
    pub field: String,
    pub message: String,
}

impl std::fmt::Display for RowError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}: {}", self.line, self.field, self.message)
    }
}

#[derive(Debug, Clone, Default)]
pub struct ParsedFlights {
    pub records: Vec<FlightRecord>,
    pub row_errors: Vec<RowError>,
}

fn check_header(headers: &csv::StringRecord, expected: &[&str]) -> Result<()> {
    let got: Vec<&str> = headers.iter().map(str::trim).collect();
    if got != expected {
        return Err(Error::Format(format!(
            "expected header `{}`, found `{}`",
            expected.join(","),
            got.join(",")
        )));
    }
    Ok(())
}

fn field<'a>(row: &'a csv::StringRecord, idx: usize) -> &'a str {
    row.get(idx).map(str::trim).unwrap_or("")
}

fn parse_f64(row: &csv::StringRecord, idx: usize, name: &str) -> std::result::Result<f64, (String, String)> {
    let raw = field(row, idx);
    raw.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| (name.to_string(), format!("cannot parse `{raw}` as a number")))
}

fn parse_flight_row(row: &csv::StringRecord) -> std::result::Result<FlightRecord, (String, String)> {
    if row.len() != FLIGHT_CSV_HEADER.len() {
        return Err((
            "row".into(),
            format!("expected {} fields, found {}", FLIGHT_CSV_HEADER.len(), row.len()),
        ));
    }
    let timestamp = parse_f64(row, 0, "timestamp_utc_s")?;
    let flight_id = field(row, 1).to_string();
    if flight_id.is_empty() {
        return Err(("flight_id".into(), "empty flight id".into()));
    }
    let lat = parse_f64(row, 2, "lat_deg")?;
    let lon = parse_f64(row, 3, "lon_deg")?;
    let alt = parse_f64(row, 4, "alt_m")?;
    let ground_speed = parse_f64(row, 5, "ground_speed_mps")?;
    let heading = parse_f64(row, 6, "heading_deg")?;
    if !(-90.0..=90.0).contains(&lat) {
        return Err(("lat_deg".into(), format!("{lat} outside [-90, 90]")));
    }
    if !(-180.0..=180.0).contains(&lon) {
        return Err(("lon_deg".into(), format!("{lon} outside [-180, 180)")));
    }
    let position = GeodeticPosition::new(lat, lon, alt)
        .map_err(|e| ("alt_m".to_string(), e.to_string()))?;
    if ground_speed < 0.0 {
        return Err(("ground_speed_mps".into(), format!("{ground_speed} is negative")));
    }
    if !(0.0..360.0).contains(&heading) {
        return Err(("heading".into(), format!("heading {heading} outside [0, 360)")));
    }
    Ok(FlightRecord {
        timestamp,
        flight_id,
        position,
        ground_speed,
        heading,
    })
}

/// Parses a flight CSV. Malformed rows are collected rather than fatal, unless
/// they exceed [`MAX_ROW_ERROR_RATE`] of all data rows.
pub fn parse_flight_records<R: Read>(input: R) -> Result<ParsedFlights> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(input);
    let headers = reader
        .headers()
        .map_err(|e| Error::Format(format!("cannot read header: {e}")))?
        .clone();
    if headers.is_empty() {
        return Err(Error::Format("missing header".into()));
    }
    check_header(&headers, &FLIGHT_CSV_HEADER)?;

    let mut out = ParsedFlights::default();
    let mut seen: HashSet<(String, u64)> = HashSet::new();
    let mut total = 0usize;
    for row in reader.records() {
        let row = row?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        if row.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        total += 1;
        match parse_flight_row(&row) {
            Ok(rec) => {
                if !seen.insert((rec.flight_id.clone(), rec.timestamp.to_bits())) {
                    out.row_errors.push(RowError {
                        line,
                        field: "flight_id".into(),
                        message: format!(
                            "duplicate record for `{}` at t={}",
                            rec.flight_id, rec.timestamp
                        ),
                    });
                } else {
                    out.records.push(rec);
                }
            }
            Err((field, message)) => out.row_errors.push(RowError {
                line,
                field,
                message,
            }),
        }
    }
    if total > 0 && out.row_errors.len() as f64 > MAX_ROW_ERROR_RATE * total as f64 {
        return Err(Error::TooManyRowErrors {
            bad: out.row_errors.len(),
            total,
            first: out.row_errors[0].to_string(),
        });
    }
    Ok(out)
}

pub fn write_flight_records<W: Write>(records: &[FlightRecord], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(FLIGHT_CSV_HEADER)?;
    for r in records {
        w.write_record([
            format_timestamp(r.timestamp),
            r.flight_id.clone(),
            format!("{:.6}", r.position.latitude),
            format!("{:.6}", r.position.longitude),
            format!("{:.1}", r.position.altitude),
            format!("{:.3}", r.ground_speed),
            format!("{:.3}", r.heading),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<flight csv>", e))?;
    Ok(())
}

fn format_timestamp(t: f64) -> String {
    if t.fract() == 0.0 && t.abs() < 1e15 {
        format!("{}", t as i64)
    } else {
        format!("{t}")
    }
}

/// Assembles the airborne node set at time `t`: per flight, the latest record
/// in `[t - window, t]` at or above `min_altitude`.
pub fn build_snapshot(
    records: &[FlightRecord],
    t: f64,
    window: f64,
    min_altitude: f64,
    occupancy: &dyn OccupancyProvider,
    ground_stations: &[GroundStation],
) -> Result<Snapshot> {
    if !(window > 0.0) {
        return Err(Error::InputDomain(format!("window must be positive, got {window}")));
    }
    let mut latest: HashMap<&str, &FlightRecord> = HashMap::new();
    for r in records {
        if r.timestamp < t - window || r.timestamp > t || r.position.altitude < min_altitude {
            continue;
        }
        latest
            .entry(r.flight_id.as_str())
            .and_modify(|cur| {
                if r.timestamp > cur.timestamp {
                    *cur = r;
                }
            })
            .or_insert(r);
    }
    let mut chosen: Vec<&FlightRecord> = latest.into_values().collect();
    chosen.sort_by(|a, b| a.flight_id.cmp(&b.flight_id));
    let aircraft = chosen.into_iter().map(|r| FlightState {
        flight_id: r.flight_id.clone(),
        position: r.position,
        ground_speed: r.ground_speed,
        heading: r.heading,
        queue_occupancy: occupancy.occupancy(&r.flight_id, t),
    });
    Snapshot::new(t, aircraft, ground_stations.iter().cloned())
}

/// Parses a `station_id,lat_deg,lon_deg,alt_m` CSV.
pub fn load_ground_stations(config_text: &str) -> Result<Vec<GroundStation>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(config_text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::Config(format!("cannot read ground-station header: {e}")))?
        .clone();
    check_header(&headers, &STATION_CSV_HEADER).map_err(|e| Error::Config(e.to_string()))?;

    let mut stations: Vec<GroundStation> = Vec::new();
    for row in reader.records() {
        let row = row?;
        if row.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let id = field(&row, 0).to_string();
        if id.is_empty() {
            return Err(Error::Config(format!("line {line}: empty station_id")));
        }
        let coord = |idx: usize, name: &str| -> Result<f64> {
            let raw = field(&row, idx);
            if raw.is_empty() {
                return Err(Error::Config(format!(
                    "line {line}: station {id} is missing {name}"
                )));
            }
            raw.parse::<f64>().map_err(|_| {
                Error::Config(format!("line {line}: station {id}: bad {name} `{raw}`"))
            })
        };
        let position = GeodeticPosition::new(
            coord(1, "lat_deg")?,
            coord(2, "lon_deg")?,
            coord(3, "alt_m")?,
        )
        .map_err(|e| Error::Config(format!("line {line}: station {id}: {e}")))?;
        if stations.iter().any(|s| s.station_id == id) {
            return Err(Error::Config(format!("duplicate station id {id}")));
        }
        stations.push(GroundStation {
            station_id: id,
            position,
        });
    }
    if stations.is_empty() {
        return Err(Error::Config("no ground stations defined".into()));
    }
    Ok(stations)
}

/// The five airport ground stations (PER, MEL, SYD, BNE, DRW) as config text.
pub const AUSTRALIAN_STATIONS_CSV: &str = "\
station_id,lat_deg,lon_deg,alt_m
PER,-31.9403,115.9669,20
MEL,-37.6690,144.8410,132
SYD,-33.9461,151.1772,6
BNE,-27.3842,153.1175,4
DRW,-12.4147,130.8766,31
";

pub fn australian_ground_stations() -> Vec<GroundStation> {
    load_ground_stations(AUSTRALIAN_STATIONS_CSV).expect("built-in station table is valid")
}

#[derive(Debug, Clone, PartialEq)]
pub struct City {
    pub code: &'static str,
    pub latitude: f64,
    pub longitude: f64,
}

/// Airports between which synthetic flights are generated.
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub cities: Vec<City>,
}

impl Region {
    pub fn australia() -> Self {
        let c = |code, latitude, longitude| City {
            code,
            latitude,
            longitude,
        };
        Region {
            cities: vec![
                c("SYD", -33.9461, 151.1772),
                c("MEL", -37.6690, 144.8410),
                c("BNE", -27.3842, 153.1175),
                c("PER", -31.9403, 115.9669),
                c("ADL", -34.9450, 138.5306),
                c("OOL", -28.1644, 153.5047),
                c("CBR", -35.3069, 149.1950),
                c("CNS", -16.8858, 145.7553),
                c("HBA", -42.8361, 147.5103),
                c("DRW", -12.4147, 130.8766),
                c("TSV", -19.2525, 146.7653),
                c("ASP", -23.8067, 133.9022),
            ],
        }
    }
}

pub const SYNTH_SAMPLE_INTERVAL_S: i64 = 60;
const SYNTH_MIN_SPEED_KMH: f64 = 800.0;
const SYNTH_MAX_SPEED_KMH: f64 = 1000.0;
const SYNTH_CLIMB_RATE_MPS: f64 = 10.0;
const AIRLINES: [&str; 5] = ["QF", "JQ", "TT", "VA", "ZL"];

fn unit_vector(lat_deg: f64, lon_deg: f64) -> [f64; 3] {
    let (lat, lon) = (lat_deg.to_radians(), lon_deg.to_radians());
    [lat.cos() * lon.cos(), lat.cos() * lon.sin(), lat.sin()]
}

fn from_unit(u: [f64; 3]) -> (f64, f64) {
    let lat = u[2].atan2(u[0].hypot(u[1])).to_degrees();
    let mut lon = u[1].atan2(u[0]).to_degrees();
    if lon >= 180.0 {
        lon -= 360.0;
    }
    (lat, lon)
}

/// Initial great-circle bearing from (lat1, lon1) towards (lat2, lon2), degrees in [0, 360).
pub fn initial_bearing(lat1: f64, lon1: f64, lat2: f64, lon2: f64) -> f64 {
    let (p1, p2) = (lat1.to_radians(), lat2.to_radians());
    let dl = (lon2 - lon1).to_radians();
    let y = dl.sin() * p2.cos();
    let x = p1.cos() * p2.sin() - p1.sin() * p2.cos() * dl.cos();
    let b = y.atan2(x).to_degrees().rem_euclid(360.0);
    if b >= 360.0 {
        0.0
    } else {
        b
    }
}

/// Generates `n_flights` great-circle legs between random city pairs of
/// `region`, sampled every [`SYNTH_SAMPLE_INTERVAL_S`] seconds over `[0, duration_s)`.
/// Output is sorted by (timestamp, flight_id) and fully determined by `seed`.
pub fn generate_synthetic_dataset(
    seed: u64,
    n_flights: usize,
    duration_s: f64,
    region: &Region,
) -> Result<Vec<FlightRecord>> {
    if n_flights == 0 {
        return Err(Error::InputDomain("n_flights must be at least 1".into()));
    }
    if region.cities.len() < 2 {
        return Err(Error::InputDomain("region needs at least two cities".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::new();
    for i in 0..n_flights {
        let from = rng.random_range(0..region.cities.len());
        let mut to = rng.random_range(0..region.cities.len() - 1);
        if to >= from {
            to += 1;
        }
        let (a, b) = (&region.cities[from], &region.cities[to]);
        let speed = rng.random_range(SYNTH_MIN_SPEED_KMH..=SYNTH_MAX_SPEED_KMH) / 3.6;
        let cruise_alt = rng.random_range(9_000.0..12_000.0_f64).round();
        let departure = rng.random_range(0.0..duration_s.max(1.0)).floor() as i64;
        let airline = AIRLINES[rng.random_range(0..AIRLINES.len())];
        let flight_id = format!("{airline}{}", 100 + i);

        let (ua, ub) = (
            unit_vector(a.latitude, a.longitude),
            unit_vector(b.latitude, b.longitude),
        );
        let dot = (ua[0] * ub[0] + ua[1] * ub[1] + ua[2] * ub[2]).clamp(-1.0, 1.0);
        let omega = dot.acos();
        let leg_len = omega * MEAN_EARTH_RADIUS;
        let flight_time = leg_len / speed;

        let mut elapsed: i64 = 0;
        while (elapsed as f64) <= flight_time {
            let t = departure + elapsed;
            if t as f64 >= duration_s {
                break;
            }
            let frac = (elapsed as f64 * speed) / leg_len;
            let sin_omega = omega.sin();
            let (wa, wb) = (
                ((1.0 - frac) * omega).sin() / sin_omega,
                (frac * omega).sin() / sin_omega,
            );
            let u = [
                wa * ua[0] + wb * ub[0],
                wa * ua[1] + wb * ub[1],
                wa * ua[2] + wb * ub[2],
            ];
            let (lat, lon) = from_unit(u);
            let heading = initial_bearing(lat, lon, b.latitude, b.longitude);
            let since_dep = elapsed as f64;
            let to_arr = flight_time - elapsed as f64;
            let altitude = cruise_alt
                .min(since_dep * SYNTH_CLIMB_RATE_MPS)
                .min(to_arr * SYNTH_CLIMB_RATE_MPS)
                .max(0.0);
            records.push(FlightRecord {
                timestamp: t as f64,
                flight_id: flight_id.clone(),
                position: GeodeticPosition::new(lat, lon, altitude)?,
                ground_speed: speed,
                heading,
            });
            elapsed += SYNTH_SAMPLE_INTERVAL_S;
        }
    }
    records.sort_by(|x, y| {
        x.timestamp
            .total_cmp(&y.timestamp)
            .then_with(|| x.flight_id.cmp(&y.flight_id))
    });
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "timestamp_utc_s,flight_id,lat_deg,lon_deg,alt_m,ground_speed_mps,heading_deg";

    fn rec(t: f64, id: &str, alt: f64) -> FlightRecord {
        FlightRecord {
            timestamp: t,
            flight_id: id.into(),
            position: GeodeticPosition::new(-30.0, 150.0, alt).unwrap(),
            ground_speed: 250.0,
            heading: 10.0,
        }
    }

    #[test]
    fn parses_well_formed_file() {
        let text = format!(
            "{HEADER}\n0,QF1,-30,150,10000,250,90\n60,QF1,-30,150.1,10000,250,90\n0,JQ2,-31,151,9000,240,270\n"
        );
        let parsed = parse_flight_records(text.as_bytes()).unwrap();
        assert_eq!(parsed.records.len(), 3);
        assert!(parsed.row_errors.is_empty());
        assert_eq!(parsed.records[2].flight_id, "JQ2");
    }

    #[test]
    fn heading_out_of_range_is_a_row_error() {
        let mut text = format!("{HEADER}\n");
        for i in 0..10 {
            text.push_str(&format!("{i},QF1,-30,150,10000,250,90\n"));
        }
        text.push_str("99,QF1,-30,150,10000,250,361\n");
        let parsed = parse_flight_records(text.as_bytes()).unwrap();
        assert_eq!(parsed.records.len(), 10);
        assert_eq!(parsed.row_errors.len(), 1);
        assert_eq!(parsed.row_errors[0].field, "heading");
        assert_eq!(parsed.row_errors[0].line, 12);
    }

    #[test]
    fn missing_header_is_fatal() {
        let text = "0,QF1,-30,150,10000,250,90\n";
        assert!(matches!(
            parse_flight_records(text.as_bytes()),
            Err(Error::Format(_))
        ));
        assert!(matches!(parse_flight_records("".as_bytes()), Err(Error::Format(_))));
    }

    #[test]
    fn too_many_bad_rows_is_fatal() {
        let text = format!("{HEADER}\n0,QF1,-30,150,10000,250,90\n1,QF1,x,150,10000,250,90\n");
        assert!(matches!(
            parse_flight_records(text.as_bytes()),
            Err(Error::TooManyRowErrors { bad: 1, total: 2, .. })
        ));
    }

    #[test]
    fn duplicate_flight_timestamp_rejected() {
        let mut text = format!("{HEADER}\n");
        for i in 0..10 {
            text.push_str(&format!("{i},QF1,-30,150,10000,250,90\n"));
        }
        text.push_str("3,QF1,-30,150,10000,250,90\n");
        let parsed = parse_flight_records(text.as_bytes()).unwrap();
        assert_eq!(parsed.row_errors.len(), 1);
        assert!(parsed.row_errors[0].message.contains("duplicate"));
    }

    #[test]
    fn crlf_matches_lf() {
        let records = generate_synthetic_dataset(3, 4, 7200.0, &Region::australia()).unwrap();
        let mut lf = Vec::new();
        write_flight_records(&records, &mut lf).unwrap();
        // byte-level oracle: rewrite every LF as CRLF and keep the trailing newline
        let crlf: Vec<u8> = lf
            .iter()
            .flat_map(|&b| if b == b'\n' { vec![b'\r', b'\n'] } else { vec![b] })
            .collect();
        assert!(crlf.ends_with(b"\r\n"));
        let a = parse_flight_records(lf.as_slice()).unwrap();
        let b = parse_flight_records(crlf.as_slice()).unwrap();
        assert!(a.row_errors.is_empty() && b.row_errors.is_empty());
        assert_eq!(a.records, b.records);
    }

    #[test]
    fn snapshot_latest_wins_and_altitude_threshold() {
        let gs = australian_ground_stations();
        let records = vec![rec(90.0, "A", 10_000.0), rec(95.0, "A", 11_000.0), rec(95.0, "B", 300.0)];
        let snap = build_snapshot(&records, 100.0, 60.0, 1000.0, &ZeroOccupancy, &gs).unwrap();
        assert_eq!(snap.aircraft.len(), 1);
        assert_eq!(snap.aircraft["A"].position.altitude, 11_000.0);
        assert_eq!(snap.ground_stations.len(), 5);
    }

    #[test]
    fn snapshot_window_bounds_and_occupancy() {
        let records = vec![rec(39.0, "OLD", 10_000.0), rec(101.0, "FUTURE", 10_000.0), rec(40.0, "EDGE", 10_000.0)];
        let occ = |id: &str, _t: f64| if id == "EDGE" { 3 } else { 0 };
        let snap = build_snapshot(&records, 100.0, 60.0, 1000.0, &occ, &[]).unwrap();
        assert_eq!(snap.aircraft.keys().collect::<Vec<_>>(), vec!["EDGE"]);
        assert_eq!(snap.aircraft["EDGE"].queue_occupancy, 3);
        assert!(build_snapshot(&records, 100.0, 0.0, 1000.0, &ZeroOccupancy, &[]).is_err());
        let empty = build_snapshot(&[], 100.0, 60.0, 1000.0, &ZeroOccupancy, &[]).unwrap();
        assert!(empty.aircraft.is_empty());
    }

    #[test]
    fn snapshot_rejects_id_collision() {
        let gs = GroundStation {
            station_id: "A".into(),
            position: GeodeticPosition::new(-30.0, 150.0, 0.0).unwrap(),
        };
        let records = vec![rec(95.0, "A", 10_000.0)];
        assert!(matches!(
            build_snapshot(&records, 100.0, 60.0, 1000.0, &ZeroOccupancy, &[gs]),
            Err(Error::Instance(_))
        ));
    }

    #[test]
    fn ground_station_configs() {
        let gs = australian_ground_stations();
        let ids: Vec<_> = gs.iter().map(|g| g.station_id.as_str()).collect();
        assert_eq!(ids, ["PER", "MEL", "SYD", "BNE", "DRW"]);

        assert!(matches!(
            load_ground_stations("station_id,lat_deg,lon_deg,alt_m\n"),
            Err(Error::Config(_))
        ));
        assert!(load_ground_stations("").is_err());
        let dup = "station_id,lat_deg,lon_deg,alt_m\nSYD,-33.9,151.1,6\nSYD,-33.9,151.1,6\n";
        match load_ground_stations(dup) {
            Err(Error::Config(msg)) => assert!(msg.contains("SYD"), "{msg}"),
            other => panic!("expected config error, got {other:?}"),
        }
        let missing = "station_id,lat_deg,lon_deg,alt_m\nSYD,-33.9,,6\n";
        assert!(matches!(load_ground_stations(missing), Err(Error::Config(_))));
    }

    #[test]
    fn synthetic_is_deterministic() {
        let region = Region::australia();
        let a = generate_synthetic_dataset(1, 20, 86_400.0, &region).unwrap();
        let b = generate_synthetic_dataset(1, 20, 86_400.0, &region).unwrap();
        let (mut wa, mut wb) = (Vec::new(), Vec::new());
        write_flight_records(&a, &mut wa).unwrap();
        write_flight_records(&b, &mut wb).unwrap();
        assert_eq!(wa, wb);
        let c = generate_synthetic_dataset(2, 20, 86_400.0, &region).unwrap();
        assert_ne!(a, c);
        assert!(generate_synthetic_dataset(1, 0, 10.0, &region).is_err());
    }

    #[test]
    fn synthetic_speeds_within_cruise_range() {
        let records = generate_synthetic_dataset(7, 10, 86_400.0, &Region::australia()).unwrap();
        assert!(!records.is_empty());
        for r in &records {
            assert!((222.2..=277.8).contains(&r.ground_speed), "{}", r.ground_speed);
            assert!((0.0..360.0).contains(&r.heading));
        }
    }

    #[test]
    fn synthetic_timestamps_strictly_increase_per_flight() {
        let records = generate_synthetic_dataset(11, 30, 86_400.0, &Region::australia()).unwrap();
        let mut last: HashMap<&str, f64> = HashMap::new();
        for r in &records {
            if let Some(prev) = last.insert(&r.flight_id, r.timestamp) {
                assert!(r.timestamp > prev);
            }
        }
    }
}

//! Small hand-built and random instances used by tests, benches and the CLI.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::flightdata::{FlightState, GroundStation, Snapshot};
use crate::geo::{GeodeticPosition, MEAN_EARTH_RADIUS};
use crate::pathobjectives::Network;

/// Brisbane airport.
pub const BNE: (f64, f64) = (-27.3842, 153.1175);
pub const SYD: (f64, f64) = (-33.9461, 151.1772);

pub const CRUISE_ALTITUDE_M: f64 = 10_000.0;
pub const CRUISE_SPEED_MPS: f64 = 230.0;

/// Position `east_km`/`north_km` away from `origin` along the great circle
/// with the matching initial bearing.
pub fn offset_position(origin: (f64, f64), east_km: f64, north_km: f64, altitude: f64) -> GeodeticPosition {
    let distance = east_km.hypot(north_km) * 1e3 / MEAN_EARTH_RADIUS;
    let bearing = east_km.atan2(north_km);
    let (lat1, lon1) = (origin.0.to_radians(), origin.1.to_radians());
    let lat2 = (lat1.sin() * distance.cos() + lat1.cos() * distance.sin() * bearing.cos()).asin();
    let lon2 = lon1
        + (bearing.sin() * distance.sin() * lat1.cos()).atan2(distance.cos() - lat1.sin() * lat2.sin());
    let mut lon = lon2.to_degrees();
    if lon >= 180.0 {
        lon -= 360.0;
    } else if lon < -180.0 {
        lon += 360.0;
    }
    GeodeticPosition {
        latitude: lat2.to_degrees(),
        longitude: lon,
        altitude,
    }
}

pub fn aircraft_at(id: &str, origin: (f64, f64), east_km: f64, north_km: f64, heading: f64) -> FlightState {
    FlightState {
        flight_id: id.to_string(),
        position: offset_position(origin, east_km, north_km, CRUISE_ALTITUDE_M),
        ground_speed: CRUISE_SPEED_MPS,
        heading,
        queue_occupancy: 0,
    }
}

pub fn station(id: &str, at: (f64, f64)) -> GroundStation {
    GroundStation {
        station_id: id.to_string(),
        position: GeodeticPosition {
            latitude: at.0,
            longitude: at.1,
            altitude: 0.0,
        },
    }
}

pub const RELAY_CHAIN_SOURCE: &str = "TT589";

/// A westbound-approach instance with no direct link to any ground station.
///
/// Two relays (QF2407, VA921) give 2-hop routes whose first link is longer
/// than 500 km; three aircraft strung out along the approach (QF974, JQ935,
/// QF2366) give 3-hop routes with every link under 500 km. The source is
/// 1010 km west of Brisbane; a second station in Sydney is out of range.
pub fn relay_chain_snapshot() -> Snapshot {
    let aircraft = [
        aircraft_at("TT589", BNE, -1010.0, 0.0, 90.0),
        aircraft_at("QF2407", BNE, -340.0, 40.0, 60.0),
        aircraft_at("VA921", BNE, -320.0, -70.0, 90.0),
        aircraft_at("QF974", BNE, -580.0, 0.0, 75.0),
        aircraft_at("JQ935", BNE, -570.0, 90.0, 90.0),
        aircraft_at("QF2366", BNE, -250.0, 0.0, 90.0),
    ];
    let stations = [station("BNE", BNE), station("SYD", SYD)];
    Snapshot::new(0.0, aircraft, stations).expect("distinct ids")
}

pub fn relay_chain() -> Network {
    Network::with_defaults(relay_chain_snapshot()).expect("valid instance")
}

/// Random instance: `n_aircraft` aircraft (the first, "A00", is the source)
/// and `n_stations` ground stations placed uniformly within +-`half_width_km`
/// of Brisbane, with random headings and speeds of 200-260 m/s.
pub fn random_snapshot(seed: u64, n_aircraft: usize, n_stations: usize, half_width_km: f64) -> Snapshot {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let offset = |rng: &mut ChaCha8Rng| {
        (
            rng.random_range(-half_width_km..=half_width_km),
            rng.random_range(-half_width_km..=half_width_km),
        )
    };
    let aircraft: Vec<FlightState> = (0..n_aircraft)
        .map(|i| {
            let (e, n) = offset(&mut rng);
            FlightState {
                flight_id: format!("A{i:02}"),
                position: offset_position(BNE, e, n, rng.random_range(8_000.0..12_000.0)),
                ground_speed: rng.random_range(200.0..260.0),
                heading: rng.random_range(0.0..360.0),
                queue_occupancy: 0,
            }
        })
        .collect();
    let stations: Vec<GroundStation> = (0..n_stations)
        .map(|i| {
            let (e, n) = offset(&mut rng);
            GroundStation {
                station_id: format!("G{i}"),
                position: offset_position(BNE, e, n, 0.0),
            }
        })
        .collect();
    Snapshot::new(0.0, aircraft, stations).expect("generated ids are distinct")
}

pub const RANDOM_SOURCE: &str = "A00";

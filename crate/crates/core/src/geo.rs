//! Geodetic coordinates, ECEF conversion and local tangent-plane kinematics.
//!
//! Positions are converted to Earth-centred Earth-fixed coordinates on the
//! WGS-84 ellipsoid for slant distances. Link-expiration geometry is planar,
//! so endpoints are also projected onto an east-north tangent plane.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// WGS-84 semi-major axis (m).
pub const WGS84_A: f64 = 6_378_137.0;
/// WGS-84 flattening.
pub const WGS84_F: f64 = 1.0 / 298.257_223_563;
/// WGS-84 semi-minor axis (m).
pub const WGS84_B: f64 = WGS84_A * (1.0 - WGS84_F);
/// First eccentricity squared.
pub const WGS84_E2: f64 = WGS84_F * (2.0 - WGS84_F);
/// IUGG mean Earth radius (m), used for great-circle arithmetic.
pub const MEAN_EARTH_RADIUS: f64 = 6_371_008.8;

/// Lowest altitude accepted for any node.
pub const MIN_ALTITUDE_M: f64 = -500.0;
/// Tangent-plane projections are refused beyond this great-circle distance.
pub const PLANE_VALIDITY_RADIUS_M: f64 = 2_000_000.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodeticPosition {
    pub latitude: f64,
    pub longitude: f64,
    pub altitude: f64,
}

impl GeodeticPosition {
    /// Validates ranges and normalizes longitude into [-180, 180).
    pub fn new(latitude: f64, longitude: f64, altitude: f64) -> Result<Self> {
        if !latitude.is_finite() || !(-90.0..=90.0).contains(&latitude) {
            return Err(Error::InputDomain(format!(
                "latitude {latitude} outside [-90, 90]"
            )));
        }
        if !longitude.is_finite() || !(-180.0..=180.0).contains(&longitude) {
            return Err(Error::InputDomain(format!(
                "longitude {longitude} outside [-180, 180)"
            )));
        }
        if !altitude.is_finite() || altitude < MIN_ALTITUDE_M {
            return Err(Error::InputDomain(format!(
                "altitude {altitude} m below {MIN_ALTITUDE_M} m"
            )));
        }
        let longitude = if longitude == 180.0 { -180.0 } else { longitude };
        Ok(Self {
            latitude,
            longitude,
            altitude,
        })
    }

    fn check(&self) -> Result<()> {
        Self::new(self.latitude, self.longitude, self.altitude).map(|_| ())
    }

    /// Geodetic midpoint of two positions (latitude/longitude via the unit-sphere
    /// mean direction, altitude averaged).
    pub fn midpoint(&self, other: &GeodeticPosition) -> GeodeticPosition {
        let to_unit = |p: &GeodeticPosition| {
            let (lat, lon) = (p.latitude.to_radians(), p.longitude.to_radians());
            [lat.cos() * lon.cos(), lat.cos() * lon.sin(), lat.sin()]
        };
        let (u, v) = (to_unit(self), to_unit(other));
        let m = [u[0] + v[0], u[1] + v[1], u[2] + v[2]];
        let horiz = m[0].hypot(m[1]);
        let latitude = m[2].atan2(horiz).to_degrees();
        let mut longitude = m[1].atan2(m[0]).to_degrees();
        if longitude >= 180.0 {
            longitude -= 360.0;
        }
        GeodeticPosition {
            latitude,
            longitude,
            altitude: 0.5 * (self.altitude + other.altitude),
        }
    }

    /// Great-circle distance on the mean-radius sphere (haversine).
    pub fn great_circle_distance(&self, other: &GeodeticPosition) -> f64 {
        let (p1, p2) = (self.latitude.to_radians(), other.latitude.to_radians());
        let dp = p2 - p1;
        let dl = (other.longitude - self.longitude).to_radians();
        let h = (dp / 2.0).sin().powi(2) + p1.cos() * p2.cos() * (dl / 2.0).sin().powi(2);
        2.0 * MEAN_EARTH_RADIUS * h.sqrt().min(1.0).asin()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EcefPosition {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl EcefPosition {
    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

/// Position and velocity in a local east-north plane. `x`/`vx` point east,
/// `y`/`vy` point north.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanarKinematicState {
    pub x: f64,
    pub y: f64,
    pub vx: f64,
    pub vy: f64,
}

impl PlanarKinematicState {
    pub fn new(x: f64, y: f64, vx: f64, vy: f64) -> Self {
        Self { x, y, vx, vy }
    }

    /// State after `t` seconds of straight-line constant-velocity motion.
    pub fn advanced(&self, t: f64) -> Self {
        Self {
            x: self.x + self.vx * t,
            y: self.y + self.vy * t,
            ..*self
        }
    }

    pub fn distance_to(&self, other: &PlanarKinematicState) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn speed(&self) -> f64 {
        self.vx.hypot(self.vy)
    }
}

pub fn geodetic_to_ecef(p: &GeodeticPosition) -> Result<EcefPosition> {
    p.check()?;
    let (lat, lon) = (p.latitude.to_radians(), p.longitude.to_radians());
    let (sin_lat, cos_lat) = lat.sin_cos();
    let (sin_lon, cos_lon) = lon.sin_cos();
    let n = WGS84_A / (1.0 - WGS84_E2 * sin_lat * sin_lat).sqrt();
    Ok(EcefPosition {
        x: (n + p.altitude) * cos_lat * cos_lon,
        y: (n + p.altitude) * cos_lat * sin_lon,
        z: (n * (1.0 - WGS84_E2) + p.altitude) * sin_lat,
    })
}

pub fn slant_distance(p1: &EcefPosition, p2: &EcefPosition) -> f64 {
    let (dx, dy, dz) = (p1.x - p2.x, p1.y - p2.y, p1.z - p2.z);
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// Velocity components from ground speed and compass heading (degrees
/// clockwise from true north).
pub fn heading_to_velocity(ground_speed: f64, heading_deg: f64) -> (f64, f64) {
    let (s, c) = heading_deg.to_radians().sin_cos();
    (ground_speed * s, ground_speed * c)
}

/// Projects a moving point onto the east-north tangent plane at `reference`.
///
/// The offset is the east/north component of the ECEF difference rotated into
/// the reference's local frame; the vertical component is dropped.
pub fn project_to_plane(
    reference: &GeodeticPosition,
    position: &GeodeticPosition,
    ground_speed: f64,
    heading_deg: f64,
) -> Result<PlanarKinematicState> {
    let range = reference.great_circle_distance(position);
    if range > PLANE_VALIDITY_RADIUS_M {
        return Err(Error::Projection(format!(
            "{:.1} km from tangent point exceeds {:.0} km",
            range / 1e3,
            PLANE_VALIDITY_RADIUS_M / 1e3
        )));
    }
    let origin = geodetic_to_ecef(reference)?;
    let p = geodetic_to_ecef(position)?;
    let (dx, dy, dz) = (p.x - origin.x, p.y - origin.y, p.z - origin.z);
    let (sin_lat, cos_lat) = reference.latitude.to_radians().sin_cos();
    let (sin_lon, cos_lon) = reference.longitude.to_radians().sin_cos();
    let east = -sin_lon * dx + cos_lon * dy;
    let north = -sin_lat * cos_lon * dx - sin_lat * sin_lon * dy + cos_lat * dz;
    let (vx, vy) = heading_to_velocity(ground_speed, heading_deg);
    Ok(PlanarKinematicState {
        x: east,
        y: north,
        vx,
        vy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geo(lat: f64, lon: f64, alt: f64) -> GeodeticPosition {
        GeodeticPosition::new(lat, lon, alt).unwrap()
    }

    #[test]
    fn ecef_axis_cases() {
        let p = geodetic_to_ecef(&geo(0.0, 0.0, 0.0)).unwrap();
        assert!((p.x - 6_378_137.0).abs() < 1e-6 && p.y.abs() < 1e-6 && p.z.abs() < 1e-6);

        let p = geodetic_to_ecef(&geo(90.0, 0.0, 0.0)).unwrap();
        assert!(p.x.abs() < 1e-6 && p.y.abs() < 1e-6);
        assert!((p.z - 6_356_752.314_245).abs() < 1e-6, "{}", p.z);

        let p = geodetic_to_ecef(&geo(0.0, 90.0, 1000.0)).unwrap();
        assert!(p.x.abs() < 1e-6 && (p.y - 6_379_137.0).abs() < 1e-6 && p.z.abs() < 1e-6);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(matches!(
            GeodeticPosition::new(90.5, 0.0, 0.0),
            Err(Error::InputDomain(_))
        ));
        assert!(GeodeticPosition::new(0.0, -180.5, 0.0).is_err());
        assert!(GeodeticPosition::new(0.0, 0.0, -600.0).is_err());
        let bad = GeodeticPosition {
            latitude: 0.0,
            longitude: 200.0,
            altitude: 0.0,
        };
        assert!(geodetic_to_ecef(&bad).is_err());
        assert_eq!(GeodeticPosition::new(0.0, 180.0, 0.0).unwrap().longitude, -180.0);
    }

    #[test]
    fn slant_distance_cases() {
        let a = EcefPosition { x: 6_378_137.0, y: 0.0, z: 0.0 };
        let b = EcefPosition { x: 0.0, y: 6_378_137.0, z: 0.0 };
        assert_eq!(slant_distance(&a, &a), 0.0);
        let d = slant_distance(&a, &b);
        assert!((d - 6_378_137.0 * 2f64.sqrt()).abs() / d < 1e-15);
    }

    #[test]
    fn projection_axis_headings() {
        let r = geo(-27.0, 153.0, 10_000.0);
        let s = project_to_plane(&r, &r, 250.0, 90.0).unwrap();
        assert!(s.x.abs() < 1e-9 && s.y.abs() < 1e-9);
        assert!((s.vx - 250.0).abs() < 1e-12 && s.vy.abs() < 1e-12);
        let s = project_to_plane(&r, &r, 250.0, 0.0).unwrap();
        assert!(s.vx.abs() < 1e-12 && (s.vy - 250.0).abs() < 1e-12);
    }

    #[test]
    fn projection_refuses_far_points() {
        let r = geo(-27.0, 153.0, 0.0);
        let far = geo(-31.9, 115.9, 0.0);
        assert!(matches!(
            project_to_plane(&r, &far, 0.0, 0.0),
            Err(Error::Projection(_))
        ));
    }

    #[test]
    fn midpoint_across_antimeridian() {
        let m = geo(0.0, 179.0, 0.0).midpoint(&geo(0.0, -179.0, 0.0));
        assert!((m.longitude.abs() - 180.0).abs() < 1e-9, "{m:?}");
        assert!(m.latitude.abs() < 1e-9);
    }
}

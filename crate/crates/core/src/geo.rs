//! Circular-orbit geometry for Walker-Delta constellations.
//!
//! Everything here assumes a spherical Earth and zero eccentricity. Angles are
//! radians, lengths metres, times seconds measured from the scenario epoch. The
//! Greenwich sidereal angle is zero at the epoch.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mean equatorial radius of the spherical Earth model (m).
pub const EARTH_RADIUS: f64 = 6_378_140.0;
/// Earth gravitational parameter (m^3/s^2).
pub const EARTH_MU: f64 = 3.986_004_418e14;
/// Earth rotation rate (rad/s).
pub const EARTH_ROTATION_RATE: f64 = 7.292_115_9e-5;

/// Wraps an angle into `[0, 2π)`.
pub fn normalize_angle(angle: f64) -> f64 {
    let wrapped = angle.rem_euclid(TAU);
    // rem_euclid can return TAU itself for tiny negative inputs
    if wrapped >= TAU {
        0.0
    } else {
        wrapped
    }
}

/// Keplerian elements of a circular orbit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitalElements {
    pub semi_major_axis: f64,
    pub eccentricity: f64,
    pub inclination: f64,
    pub raan: f64,
    /// Always zero: perigee is undefined on a circle, so the phase lives in
    /// `true_anomaly_epoch`.
    pub arg_perigee: f64,
    pub true_anomaly_epoch: f64,
}

impl OrbitalElements {
    pub fn circular(altitude: f64, inclination: f64, raan: f64, phase: f64) -> Result<Self> {
        if !(altitude > 0.0) || !altitude.is_finite() {
            return Err(Error::param("altitude", format!("must be positive, got {altitude}")));
        }
        Ok(Self {
            semi_major_axis: EARTH_RADIUS + altitude,
            eccentricity: 0.0,
            inclination: normalize_angle(inclination),
            raan: normalize_angle(raan),
            arg_perigee: 0.0,
            true_anomaly_epoch: normalize_angle(phase),
        })
    }

    pub fn altitude(&self) -> f64 {
        self.semi_major_axis - EARTH_RADIUS
    }

    /// Mean motion `sqrt(μ/a³)` in rad/s.
    pub fn mean_motion(&self) -> f64 {
        (EARTH_MU / self.semi_major_axis.powi(3)).sqrt()
    }

    pub fn period(&self) -> f64 {
        TAU / self.mean_motion()
    }

    /// Argument of latitude `ω + υ(t)` at epoch offset `t`.
    pub fn argument_of_latitude(&self, t: f64) -> f64 {
        self.arg_perigee + self.true_anomaly_epoch + self.mean_motion() * t
    }
}

/// Walker-Delta pattern `i: NP/P/F` at a common altitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WalkerConfig {
    pub sats_per_plane: u32,
    pub planes: u32,
    pub phase_factor: u32,
    /// Altitude above the spherical Earth (m).
    pub altitude: f64,
    /// Common inclination (rad).
    pub inclination: f64,
}

impl WalkerConfig {
    pub fn total_satellites(&self) -> usize {
        self.sats_per_plane as usize * self.planes as usize
    }

    /// Inter-plane phase offset `Δu = 2π·F/(N·P)` in radians.
    pub fn phase_offset(&self) -> f64 {
        TAU * f64::from(self.phase_factor) / self.total_satellites() as f64
    }

    pub fn validate(&self) -> Result<()> {
        if self.sats_per_plane == 0 {
            return Err(Error::param("sats_per_plane", "must be at least 1"));
        }
        if self.planes == 0 {
            return Err(Error::param("planes", "must be at least 1"));
        }
        if self.phase_factor >= self.planes {
            return Err(Error::param(
                "phase_factor",
                format!("must lie in 0..={}, got {}", self.planes - 1, self.phase_factor),
            ));
        }
        if !(self.altitude > 0.0) || !self.altitude.is_finite() {
            return Err(Error::param("altitude", format!("must be positive, got {}", self.altitude)));
        }
        if !self.inclination.is_finite() {
            return Err(Error::param("inclination", "must be finite"));
        }
        Ok(())
    }

    /// Like [`validate`](Self::validate) but also checks the altitude window.
    pub fn validate_within(&self, altitude_min: f64, altitude_max: f64) -> Result<()> {
        self.validate()?;
        if self.altitude < altitude_min || self.altitude > altitude_max {
            return Err(Error::param(
                "altitude",
                format!("{} m outside [{altitude_min}, {altitude_max}]", self.altitude),
            ));
        }
        Ok(())
    }
}

/// Expands a Walker pattern into `N·P` element sets, plane-major order.
///
/// Plane `p` sits at RAAN `p·2π/P`; satellite `n` in plane `p` starts at phase
/// `n·2π/N + p·Δu`.
pub fn walker_delta_elements(config: &WalkerConfig) -> Result<Vec<OrbitalElements>> {
    config.validate()?;
    let planes = f64::from(config.planes);
    let per_plane = f64::from(config.sats_per_plane);
    let delta_u = config.phase_offset();

    let mut elements = Vec::with_capacity(config.total_satellites());
    for p in 0..config.planes {
        let raan = TAU * f64::from(p) / planes;
        for n in 0..config.sats_per_plane {
            let phase = TAU * f64::from(n) / per_plane + f64::from(p) * delta_u;
            elements.push(OrbitalElements::circular(
                config.altitude,
                config.inclination,
                raan,
                phase,
            )?);
        }
    }
    Ok(elements)
}

/// A constellation design expanded into per-satellite elements.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstellationGeometry {
    pub config: WalkerConfig,
    pub elements: Vec<OrbitalElements>,
}

impl ConstellationGeometry {
    pub fn walker(config: WalkerConfig) -> Result<Self> {
        let elements = walker_delta_elements(&config)?;
        Ok(Self { config, elements })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Inertial position with the epoch offset it was evaluated at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EciPosition {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub t: f64,
}

/// Earth-fixed position with the epoch offset it was evaluated at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EcefPosition {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub t: f64,
}

impl EciPosition {
    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

impl EcefPosition {
    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn unit(&self) -> [f64; 3] {
        let r = self.norm();
        [self.x / r, self.y / r, self.z / r]
    }

    /// Geocentric latitude of the subsatellite point (rad).
    pub fn latitude(&self) -> f64 {
        (self.z / self.norm()).asin()
    }

    /// Longitude of the subsatellite point in `(-π, π]` (rad).
    pub fn longitude(&self) -> f64 {
        self.y.atan2(self.x)
    }
}

/// Position on a circular orbit at epoch offset `t`.
pub fn propagate_eci(elements: &OrbitalElements, t: f64) -> EciPosition {
    let a = elements.semi_major_axis;
    let u = elements.argument_of_latitude(t);
    let (su, cu) = u.sin_cos();
    let (so, co) = elements.raan.sin_cos();
    let (si, ci) = elements.inclination.sin_cos();
    EciPosition {
        x: a * (cu * co - su * so * ci),
        y: a * (cu * so + su * co * ci),
        z: a * (su * si),
        t,
    }
}

/// Rotates an inertial position into the Earth-fixed frame at its own epoch offset.
pub fn eci_to_ecef(pos: &EciPosition) -> EcefPosition {
    let theta = EARTH_ROTATION_RATE * pos.t;
    let (s, c) = theta.sin_cos();
    EcefPosition {
        x: c * pos.x + s * pos.y,
        y: -s * pos.x + c * pos.y,
        z: pos.z,
        t: pos.t,
    }
}

/// Unit vector of a geocentric latitude/longitude pair.
pub fn unit_from_lat_lon(lat: f64, lon: f64) -> [f64; 3] {
    let (slat, clat) = lat.sin_cos();
    let (slon, clon) = lon.sin_cos();
    [clat * clon, clat * slon, slat]
}

//! Real-coded chromosome `[h, P, N, i]` and its search box.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const GENES: usize = 4;

/// Candidate constellation. Plane and per-plane counts are carried as reals
/// and rounded to the nearest integer when the design is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignVector {
    /// m
    pub altitude: f64,
    pub planes: f64,
    pub sats_per_plane: f64,
    /// rad
    pub inclination: f64,
}

/// A design with its integer genes rounded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoundedDesign {
    pub altitude: f64,
    pub planes: u32,
    pub sats_per_plane: u32,
    pub inclination: f64,
}

impl DesignVector {
    pub fn new(altitude: f64, planes: f64, sats_per_plane: f64, inclination: f64) -> Self {
        Self {
            altitude,
            planes,
            sats_per_plane,
            inclination,
        }
    }

    pub fn from_genes(g: [f64; GENES]) -> Self {
        Self::new(g[0], g[1], g[2], g[3])
    }

    pub fn genes(&self) -> [f64; GENES] {
        [self.altitude, self.planes, self.sats_per_plane, self.inclination]
    }

    /// Same vector with `P` and `N` snapped to the nearest integer.
    pub fn with_rounded_counts(&self) -> Self {
        Self {
            planes: self.planes.round(),
            sats_per_plane: self.sats_per_plane.round(),
            ..*self
        }
    }

    pub fn rounded(&self) -> RoundedDesign {
        RoundedDesign {
            altitude: self.altitude,
            planes: self.planes.round().max(0.0) as u32,
            sats_per_plane: self.sats_per_plane.round().max(0.0) as u32,
            inclination: self.inclination,
        }
    }
}

/// Componentwise search box `l ≤ x ≤ u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub lower: DesignVector,
    pub upper: DesignVector,
}

impl Bounds {
    pub fn new(lower: DesignVector, upper: DesignVector) -> Result<Self> {
        let b = Self { lower, upper };
        b.validate()?;
        Ok(b)
    }

    /// 500–1800 km, 4–20 planes, 4–20 satellites per plane, 20–60 deg.
    pub fn reference() -> Self {
        Self {
            lower: DesignVector::new(500e3, 4.0, 4.0, 20f64.to_radians()),
            upper: DesignVector::new(1800e3, 20.0, 20.0, 60f64.to_radians()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (l, u) in self.lower.genes().iter().zip(self.upper.genes()) {
            if !l.is_finite() || !u.is_finite() {
                return Err(Error::param("bounds", "must be finite"));
            }
            if *l > u {
                return Err(Error::param("bounds", format!("lower {l} exceeds upper {u}")));
            }
        }
        Ok(())
    }

    pub fn width(&self) -> [f64; GENES] {
        let (l, u) = (self.lower.genes(), self.upper.genes());
        std::array::from_fn(|k| u[k] - l[k])
    }

    pub fn contains(&self, x: &DesignVector) -> bool {
        let (l, u, g) = (self.lower.genes(), self.upper.genes(), x.genes());
        (0..GENES).all(|k| g[k] >= l[k] && g[k] <= u[k])
    }

    pub fn clamp(&self, x: &DesignVector) -> DesignVector {
        let (l, u, g) = (self.lower.genes(), self.upper.genes(), x.genes());
        DesignVector::from_genes(std::array::from_fn(|k| g[k].clamp(l[k], u[k])))
    }
}

//! Space-segment cost: manufacture, launch and insurance per satellite.
//!
//! Costs are in an opaque cost unit; only relative comparisons are meaningful.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficients of the per-satellite cost model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostModel {
    /// Manufacture cost per kg.
    pub manufacture_coeff: f64,
    /// Launch cost per kg before the altitude factor.
    pub launch_coeff: f64,
    pub launch_exponent: f64,
    /// The altitude factor is `(h_km / launch_altitude_divisor)^launch_exponent`.
    pub launch_altitude_divisor: f64,
    pub insurance_ratio: f64,
    /// kg
    pub satellite_mass: f64,
}

impl Default for CostModel {
    fn default() -> Self {
        Self {
            manufacture_coeff: 0.00185,
            launch_coeff: 0.000166,
            launch_exponent: 0.43,
            launch_altitude_divisor: 1.609,
            insurance_ratio: 0.2,
            satellite_mass: 227.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub manufacture: f64,
    pub launch: f64,
    pub insurance: f64,
    pub per_satellite_total: f64,
    pub constellation_total: f64,
    pub satellites: u64,
    /// Insurance ratio the breakdown was computed with.
    pub insurance_ratio: f64,
}

impl CostModel {
    /// Cost of `sats_per_plane × planes` satellites at `altitude_km`.
    pub fn breakdown_km(&self, sats_per_plane: u32, planes: u32, altitude_km: f64) -> Result<CostBreakdown> {
        if sats_per_plane == 0 || planes == 0 {
            return Err(Error::param("satellites", "N and P must be positive"));
        }
        if !(altitude_km > 0.0) || !altitude_km.is_finite() {
            return Err(Error::param("altitude", format!("must be positive, got {altitude_km} km")));
        }
        if !(self.satellite_mass > 0.0) {
            return Err(Error::param("satellite_mass", "must be positive"));
        }
        if !(self.insurance_ratio >= 0.0) {
            return Err(Error::param("insurance_ratio", "must be nonnegative"));
        }
        let manufacture = self.manufacture_coeff * self.satellite_mass;
        let launch = self.launch_coeff
            * self.satellite_mass
            * (altitude_km / self.launch_altitude_divisor).powf(self.launch_exponent);
        let insurance = self.insurance_ratio * (manufacture + launch);
        let per_satellite_total = manufacture + launch + insurance;
        let satellites = u64::from(sats_per_plane) * u64::from(planes);
        Ok(CostBreakdown {
            manufacture,
            launch,
            insurance,
            per_satellite_total,
            constellation_total: satellites as f64 * per_satellite_total,
            satellites,
            insurance_ratio: self.insurance_ratio,
        })
    }

    /// Same as [`breakdown_km`](Self::breakdown_km) with the altitude in metres.
    pub fn breakdown(&self, sats_per_plane: u32, planes: u32, altitude_m: f64) -> Result<CostBreakdown> {
        self.breakdown_km(sats_per_plane, planes, altitude_m / 1e3)
    }
}

/// Constellation cost with the default coefficients.
pub fn space_segment_cost(
    sats_per_plane: u32,
    planes: u32,
    altitude_km: f64,
    satellite_mass: f64,
    insurance_ratio: f64,
) -> Result<CostBreakdown> {
    CostModel {
        satellite_mass,
        insurance_ratio,
        ..CostModel::default()
    }
    .breakdown_km(sats_per_plane, planes, altitude_km)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn reference_breakdown() {
        let c = space_segment_cost(8, 6, 1589.0, 227.0, 0.2).unwrap();
        // hand arithmetic
        let manu = 0.00185 * 227.0;
        let launch = 0.000166 * 227.0 * (1589.0f64 / 1.609).powf(0.43);
        assert_relative_eq!(c.manufacture, manu, max_relative = 1e-15);
        assert_relative_eq!(c.launch, launch, max_relative = 1e-15);
        assert!((c.manufacture - 0.420).abs() < 5e-4);
        assert!((c.launch - 0.731).abs() < 5e-4);
        assert!((c.insurance - 0.230).abs() < 5e-4);
        assert!((c.per_satellite_total - 1.381).abs() < 5e-4);
        assert!((c.constellation_total - 66.3).abs() < 0.05);
        assert_eq!(c.satellites, 48);
        assert_eq!(c.insurance_ratio, 0.2);
    }

    #[test]
    fn zero_insurance() {
        let c = space_segment_cost(8, 6, 1589.0, 227.0, 0.0).unwrap();
        assert_eq!(c.insurance, 0.0);
        assert_relative_eq!(c.constellation_total, 48.0 * (c.manufacture + c.launch), max_relative = 1e-15);
    }

    #[test]
    fn rejects_nonpositive_inputs() {
        assert!(space_segment_cost(0, 6, 1589.0, 227.0, 0.2).is_err());
        assert!(space_segment_cost(8, 0, 1589.0, 227.0, 0.2).is_err());
        assert!(space_segment_cost(8, 6, 0.0, 227.0, 0.2).is_err());
        assert!(space_segment_cost(8, 6, 1589.0, -1.0, 0.2).is_err());
    }

    #[test]
    fn metre_and_kilometre_inputs_agree() {
        let m = CostModel::default();
        for h_km in [500.0, 1234.5, 1800.0] {
            assert_eq!(m.breakdown(7, 9, h_km * 1e3).unwrap(), m.breakdown_km(7, 9, h_km).unwrap());
        }
    }

    proptest! {
        #[test]
        fn strictly_monotone(
            n in 1u32..30, p in 1u32..30,
            h in 300.0..2000.0f64, w in 50.0..1000.0f64, b in 0.0..1.0f64,
        ) {
            let base = space_segment_cost(n, p, h, w, b).unwrap().constellation_total;
            prop_assert!(space_segment_cost(n + 1, p, h, w, b).unwrap().constellation_total > base);
            prop_assert!(space_segment_cost(n, p + 1, h, w, b).unwrap().constellation_total > base);
            prop_assert!(space_segment_cost(n, p, h * 1.01, w, b).unwrap().constellation_total > base);
            prop_assert!(space_segment_cost(n, p, h, w * 1.01, b).unwrap().constellation_total > base);
            prop_assert!(space_segment_cost(n, p, h, w, b + 0.01).unwrap().constellation_total > base);
        }

        #[test]
        fn mass_scales_linearly(h in 300.0..2000.0f64, w in 50.0..1000.0f64) {
            let a = space_segment_cost(4, 4, h, w, 0.2).unwrap();
            let b = space_segment_cost(4, 4, h, 2.0 * w, 0.2).unwrap();
            prop_assert!((b.manufacture - 2.0 * a.manufacture).abs() <= 1e-15 * b.manufacture);
            prop_assert!((b.launch - 2.0 * a.launch).abs() <= 1e-15 * b.launch);
        }
    }
}

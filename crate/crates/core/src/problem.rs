//! Design evaluation: cost objective plus coverage and capacity constraints.

use serde::{Deserialize, Serialize};

use crate::coverage::{
    coverage_ratio_timeline, theta_from_beta, CoverageReport, FootprintGeometry, GridSpec, Timeline,
};
use crate::cost::{CostBreakdown, CostModel};
use crate::design::{Bounds, DesignVector, RoundedDesign};
use crate::error::{Error, Result};
use crate::fitness::EvaluationRecord;
use crate::geo::{walker_delta_elements, WalkerConfig};
use crate::link::{capacity_analysis, CapacityResult, LinkEnvironment};

/// Anything the optimizers can score.
pub trait Evaluator: Sync {
    fn evaluate(&self, design: &DesignVector) -> Result<EvaluationRecord>;
    fn bounds(&self) -> Bounds;
}

/// The constellation design problem: minimise cost subject to a minimum
/// coverage ratio and enough simultaneously visible satellites to carry the
/// capacity target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstellationProblem {
    pub grid: GridSpec,
    pub timeline: Timeline,
    /// Radio parameters; altitude and elevation are overwritten per design.
    pub link: LinkEnvironment,
    /// Full satellite cone angle (rad).
    pub coverage_angle: f64,
    pub eta_threshold: f64,
    /// bits/s
    pub capacity_target: f64,
    pub cost: CostModel,
    pub phase_factor: u32,
    pub bounds: Bounds,
}

/// Everything computed for one design.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignReport {
    pub design: RoundedDesign,
    pub footprint: FootprintGeometry,
    pub coverage: CoverageReport,
    pub capacity: CapacityResult,
    pub cost: CostBreakdown,
    pub record: EvaluationRecord,
}

impl ConstellationProblem {
    /// Reference problem on the given grid and timeline.
    pub fn reference(grid: GridSpec, timeline: Timeline) -> Self {
        Self {
            grid,
            timeline,
            link: LinkEnvironment::reference(1000e3, 0.0),
            coverage_angle: 45f64.to_radians(),
            eta_threshold: 0.9,
            capacity_target: 80e6,
            cost: CostModel::default(),
            phase_factor: 1,
            bounds: Bounds::reference(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        self.timeline.validate()?;
        self.bounds.validate()?;
        if !(0.0..=1.0).contains(&self.eta_threshold) {
            return Err(Error::param("eta_threshold", "must lie in [0, 1]"));
        }
        if !(self.capacity_target >= 0.0) {
            return Err(Error::param("capacity_target", "must be nonnegative"));
        }
        Ok(())
    }

    pub fn report(&self, design: &DesignVector) -> Result<DesignReport> {
        let d = design.rounded();
        let walker = WalkerConfig {
            sats_per_plane: d.sats_per_plane,
            planes: d.planes,
            phase_factor: self.phase_factor,
            altitude: d.altitude,
            inclination: d.inclination,
        };
        let elements = walker_delta_elements(&walker)?;
        let footprint = FootprintGeometry::from_coverage_angle(d.altitude, self.coverage_angle)?;
        let coverage = coverage_ratio_timeline(&elements, &self.grid, &self.timeline, &footprint)?;
        let env = self.link.with_geometry(d.altitude, footprint.min_elevation);
        let capacity = capacity_analysis(&env, self.capacity_target, f64::from(coverage.min_visible_count))?;
        let cost = self.cost.breakdown(d.sats_per_plane, d.planes, d.altitude)?;
        let record = EvaluationRecord::new(
            *design,
            cost.constellation_total,
            coverage.eta_min,
            self.eta_threshold,
            coverage.min_visible_count,
            capacity.required_count,
        );
        Ok(DesignReport {
            design: d,
            footprint,
            coverage,
            capacity,
            cost,
            record,
        })
    }
}

impl Evaluator for ConstellationProblem {
    fn evaluate(&self, design: &DesignVector) -> Result<EvaluationRecord> {
        Ok(self.report(design)?.record)
    }

    fn bounds(&self) -> Bounds {
        self.bounds
    }
}

/// Cheap stand-in for [`ConstellationProblem`] with a known optimum.
///
/// Coverage is modelled from the expected number `k` of footprints over a
/// point: `k` grows with satellite count, footprint size and how close the
/// inclination is to a preferred value. Then `η_min = 1 − e^(−2k)` and the
/// guaranteed visible count is `⌊k⌋`. Capacity demand and cost come from the
/// real link and cost models, so the trade-offs keep their shape.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurrogateProblem {
    pub link: LinkEnvironment,
    pub coverage_angle: f64,
    pub eta_threshold: f64,
    pub capacity_target: f64,
    pub cost: CostModel,
    pub bounds: Bounds,
    /// Elevation that sizes the modelled footprint (rad).
    pub footprint_elevation: f64,
    /// Inclination with full efficiency (rad).
    pub best_inclination: f64,
    /// Inclination offset at which efficiency has dropped by half (rad).
    pub inclination_scale: f64,
}

/// Surrogate quantities for one design.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurrogateDetail {
    pub expected_cover: f64,
    pub eta_min: f64,
    pub min_visible: u32,
    pub required_count: f64,
    pub cost: f64,
}

impl Default for SurrogateProblem {
    fn default() -> Self {
        Self {
            link: LinkEnvironment::reference(1000e3, 0.0),
            coverage_angle: 45f64.to_radians(),
            eta_threshold: 0.9,
            capacity_target: 80e6,
            cost: CostModel::default(),
            bounds: Bounds::reference(),
            footprint_elevation: 10f64.to_radians(),
            best_inclination: 48f64.to_radians(),
            inclination_scale: 40f64.to_radians(),
        }
    }
}

impl SurrogateProblem {
    pub fn detail(&self, d: &RoundedDesign) -> Result<SurrogateDetail> {
        let fp = FootprintGeometry::new(d.altitude, self.footprint_elevation)?;
        let cap_fraction = 0.5 * (1.0 - fp.angular_radius.cos());
        let off = (d.inclination - self.best_inclination) / self.inclination_scale;
        let efficiency = 1.0 - 0.5 * off * off;
        let sats = f64::from(d.planes) * f64::from(d.sats_per_plane);
        let expected_cover = sats * cap_fraction * efficiency / 0.866;
        let theta = theta_from_beta(self.coverage_angle, d.altitude)?;
        let env = self.link.with_geometry(d.altitude, theta);
        let capacity = capacity_analysis(&env, self.capacity_target, 1.0)?;
        let cost = self.cost.breakdown(d.sats_per_plane, d.planes, d.altitude)?;
        Ok(SurrogateDetail {
            expected_cover,
            eta_min: 1.0 - (-2.0 * expected_cover).exp(),
            min_visible: expected_cover.max(0.0).floor() as u32,
            required_count: capacity.required_count,
            cost: cost.constellation_total,
        })
    }
}

impl Evaluator for SurrogateProblem {
    fn evaluate(&self, design: &DesignVector) -> Result<EvaluationRecord> {
        let s = self.detail(&design.rounded())?;
        Ok(EvaluationRecord::new(
            *design,
            s.cost,
            s.eta_min,
            self.eta_threshold,
            s.min_visible,
            s.required_count,
        ))
    }

    fn bounds(&self) -> Bounds {
        self.bounds
    }
}

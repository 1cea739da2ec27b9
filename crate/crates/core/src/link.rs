//! Uplink channel model and mean-capacity analytics.
//!
//! Devices form a homogeneous Poisson point process on the ground. The
//! analytics here give the mean aggregate interference seen by a satellite,
//! the mean spectral efficiency of a device-to-satellite link averaged over
//! the serving region, and the number of serving satellites needed to reach a
//! backhaul capacity target. A Monte Carlo simulator of the same quantities is
//! provided for cross-checking.
//!
//! All quantities are SI and linear (W, m, Hz, devices/m²); dB conversion
//! happens at the configuration boundary.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geo::EARTH_RADIUS;

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Radio and traffic parameters of the device-to-satellite uplink.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkEnvironment {
    pub carrier_frequency: f64,
    pub bandwidth: f64,
    pub sat_gain: f64,
    pub dev_gain: f64,
    /// Linear power attenuation from rain, in (0, 1].
    pub rain_loss: f64,
    pub rician_factor: f64,
    pub antennas: u32,
    pub sequence_length: u32,
    /// Per-slot device activation probability.
    pub activity: f64,
    /// Devices per m².
    pub device_density: f64,
    /// Per-device transmit power (W).
    pub tx_power: f64,
    /// Receiver noise power (W).
    pub noise_var: f64,
    pub altitude: f64,
    pub min_elevation: f64,
    /// Diameter of the satellite's circular array (m); only shapes the LoS
    /// phase pattern, never the power moments.
    pub array_diameter: f64,
}

impl LinkEnvironment {
    /// Reference radio parameters: 5 GHz, 250 MHz, 17/3 dBi, -2.6 dB rain,
    /// 10 dB Rician, 16 antennas, L = 100, 0.5 % activity, 8e-5 devices/km²,
    /// 3 dBW, -106 dBm noise.
    pub fn reference(altitude: f64, min_elevation: f64) -> Self {
        Self {
            carrier_frequency: 5e9,
            bandwidth: 250e6,
            sat_gain: db_to_linear(17.0),
            dev_gain: db_to_linear(3.0),
            rain_loss: db_to_linear(-2.6),
            rician_factor: db_to_linear(10.0),
            antennas: 16,
            sequence_length: 100,
            activity: 0.005,
            device_density: 8e-5 / 1e6,
            tx_power: db_to_linear(3.0),
            noise_var: db_to_linear(-106.0) * 1e-3,
            altitude,
            min_elevation,
            array_diameter: 0.5,
        }
    }

    pub fn with_geometry(mut self, altitude: f64, min_elevation: f64) -> Self {
        self.altitude = altitude;
        self.min_elevation = min_elevation;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("carrier_frequency", self.carrier_frequency),
            ("bandwidth", self.bandwidth),
            ("sat_gain", self.sat_gain),
            ("dev_gain", self.dev_gain),
            ("rician_factor", self.rician_factor),
            ("device_density", self.device_density),
            ("tx_power", self.tx_power),
            ("noise_var", self.noise_var),
            ("altitude", self.altitude),
            ("array_diameter", self.array_diameter),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::param(name, format!("must be positive and finite, got {v}")));
            }
        }
        if self.antennas == 0 {
            return Err(Error::param("antennas", "must be at least 1"));
        }
        if self.sequence_length == 0 {
            return Err(Error::param("sequence_length", "must be at least 1"));
        }
        if !(self.activity > 0.0 && self.activity <= 1.0) {
            return Err(Error::param("activity", format!("must lie in (0, 1], got {}", self.activity)));
        }
        if !(self.rain_loss > 0.0 && self.rain_loss <= 1.0) {
            return Err(Error::param("rain_loss", format!("must lie in (0, 1], got {}", self.rain_loss)));
        }
        if !(0.0..=PI / 2.0).contains(&self.min_elevation) {
            return Err(Error::param("min_elevation", "must lie in [0, 90] deg"));
        }
        Ok(())
    }

    /// `(c/(4π f_c))² · G_sat · G_dev · r_0`, so that `g² = gain_constant / d²`.
    pub fn gain_constant(&self) -> f64 {
        let k = SPEED_OF_LIGHT / (4.0 * PI * self.carrier_frequency);
        k * k * self.sat_gain * self.dev_gain * self.rain_loss
    }

    /// Large-scale amplitude gain `g` at slant range `distance`.
    pub fn large_scale_gain(&self, distance: f64) -> f64 {
        (self.gain_constant()).sqrt() / distance
    }

    /// Received power per unit `d⁻²` of an active device: `ξ·L·M_a·(gain constant)`.
    fn received_power_constant(&self) -> f64 {
        self.tx_power * f64::from(self.sequence_length) * f64::from(self.antennas) * self.gain_constant()
    }
}

/// Device-to-satellite distance at elevation `elevation` for altitude `altitude`.
pub fn slant_range(elevation: f64, altitude: f64) -> f64 {
    let rs = EARTH_RADIUS * elevation.sin();
    -rs + (rs * rs + altitude * altitude + 2.0 * altitude * EARTH_RADIUS).sqrt()
}

/// Uniform-circular-array response; every entry has modulus `1/sqrt(M_a)`.
pub fn array_response(env: &LinkEnvironment, off_axis: f64, azimuth: f64) -> Vec<Complex64> {
    let m = env.antennas as usize;
    let phase_scale = PI * env.array_diameter * env.carrier_frequency / SPEED_OF_LIGHT * off_axis.sin();
    let amp = 1.0 / (m as f64).sqrt();
    (0..m)
        .map(|j| {
            let eta = 2.0 * PI * j as f64 / m as f64;
            Complex64::from_polar(amp, phase_scale * (azimuth - eta).cos())
        })
        .collect()
}

/// One realization of the Rician vector channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSample {
    /// `g · h̃`, length `M_a`.
    pub entries: Vec<Complex64>,
    pub gain: f64,
}

impl ChannelSample {
    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(Complex64::norm_sqr).sum()
    }

    /// `‖h̃‖²`, the small-scale part with the large-scale gain divided out.
    pub fn small_scale_norm_sqr(&self) -> f64 {
        self.norm_sqr() / (self.gain * self.gain)
    }
}

/// Draws `g·(sqrt(λ/(λ+1))·h_LoS + sqrt(1/(λ+1))·h_NLoS)` with unit-variance
/// NLoS entries, so that `E‖h̃‖² = M_a` for every Rician factor.
pub fn sample_channel<R: Rng + ?Sized>(
    env: &LinkEnvironment,
    off_axis: f64,
    azimuth: f64,
    distance: f64,
    rng: &mut R,
) -> ChannelSample {
    let gain = env.large_scale_gain(distance);
    let k = env.rician_factor;
    let los_weight = (k / (k + 1.0)).sqrt() * f64::from(env.antennas).sqrt();
    let nlos_weight = (1.0 / (k + 1.0)).sqrt();
    // CN(0, 1): real and imaginary parts each carry variance 1/2
    let half = std::f64::consts::FRAC_1_SQRT_2;
    let entries = array_response(env, off_axis, azimuth)
        .into_iter()
        .map(|a| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            let nlos = Complex64::new(re * half, im * half);
            (a * los_weight + nlos * nlos_weight) * gain
        })
        .collect();
    ChannelSample { entries, gain }
}

/// Angular radius of the spherical cap visible from altitude `altitude`.
pub fn visible_cap_angle(altitude: f64) -> f64 {
    (EARTH_RADIUS / (EARTH_RADIUS + altitude)).acos()
}

/// Mean aggregate interference at a satellite from the active devices in its
/// visible cap:
/// `ξ·ε·L·M_a·λ·(gain constant)·(π R_e/(R_e+h))·ln(2R_e/h + 1)`.
pub fn mean_interference(env: &LinkEnvironment) -> Result<f64> {
    if !(env.altitude > 0.0) {
        return Err(Error::param("altitude", format!("must be positive, got {}", env.altitude)));
    }
    let h = env.altitude;
    // ∫ d⁻² dA over the cap = (π R_e/(R_e+h))·ln(u_max/u_min)
    let cap_integral = PI * EARTH_RADIUS / (EARTH_RADIUS + h) * (2.0 * EARTH_RADIUS / h).ln_1p();
    Ok(env.received_power_constant() * env.activity * env.device_density * cap_integral)
}

/// Settings for the Poisson-field interference simulator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterferenceMonteCarlo {
    pub realizations: usize,
    /// Target number of active devices per realization. The intensity is
    /// inflated to reach it and the estimate rescaled, which leaves the mean
    /// unchanged (it is linear in intensity) while shrinking its variance.
    pub devices_per_realization: f64,
    /// Draw Rician fading per device instead of using `E‖h̃‖² = M_a`.
    pub sample_fading: bool,
    pub seed: u64,
}

impl Default for InterferenceMonteCarlo {
    fn default() -> Self {
        Self {
            realizations: 200,
            devices_per_realization: 1e4,
            sample_fading: true,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub realizations: usize,
    pub mean_devices: f64,
}

/// Simulates the aggregate interference at a satellite from a Poisson field
/// of devices on its visible cap.
///
/// Device positions are drawn uniformly on the cap and their slant range is
/// measured directly in 3-D; nothing here uses the closed form.
pub fn simulate_interference(env: &LinkEnvironment, mc: &InterferenceMonteCarlo) -> Result<MonteCarloEstimate> {
    env.validate()?;
    if mc.realizations < 2 {
        return Err(Error::param("realizations", "need at least 2"));
    }
    if !(mc.devices_per_realization > 0.0) {
        return Err(Error::param("devices_per_realization", "must be positive"));
    }
    let h = env.altitude;
    let re = EARTH_RADIUS;
    let cos_cap = visible_cap_angle(h).cos();
    let cap_area = 2.0 * PI * re * re * (1.0 - cos_cap);
    let active_intensity = env.activity * env.device_density;
    let inflation = mc.devices_per_realization / (active_intensity * cap_area);
    let poisson = Poisson::new(mc.devices_per_realization)
        .map_err(|e| Error::param("devices_per_realization", e.to_string()))?;
    let sat = [0.0, 0.0, re + h];
    let power = env.tx_power * f64::from(env.sequence_length);

    let one = |r: usize| -> (f64, f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(mc.seed);
        rng.set_stream(r as u64);
        let count = poisson.sample(&mut rng) as usize;
        let mut total = 0.0;
        for _ in 0..count {
            let cos_phi = rng.random_range(cos_cap..=1.0);
            let sin_phi = (1.0 - cos_phi * cos_phi).max(0.0).sqrt();
            let az: f64 = rng.random_range(0.0..2.0 * PI);
            let dev = [re * sin_phi * az.cos(), re * sin_phi * az.sin(), re * cos_phi];
            let d = ((sat[0] - dev[0]).powi(2) + (sat[1] - dev[1]).powi(2) + (sat[2] - dev[2]).powi(2)).sqrt();
            let fading = if mc.sample_fading {
                let off_axis: f64 = rng.random_range(0.0..PI / 2.0);
                let azimuth: f64 = rng.random_range(0.0..2.0 * PI);
                sample_channel(env, off_axis, azimuth, d, &mut rng).norm_sqr()
            } else {
                f64::from(env.antennas) * env.gain_constant() / (d * d)
            };
            total += power * fading;
        }
        (total / inflation, count as f64)
    };

    let samples: Vec<(f64, f64)> = (0..mc.realizations).into_par_iter().map(one).collect();
    // fixed-order reduction keeps runs reproducible across thread counts
    let n = samples.len() as f64;
    let mean = samples.iter().map(|s| s.0).sum::<f64>() / n;
    let var = samples.iter().map(|s| (s.0 - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let mean_devices = samples.iter().map(|s| s.1).sum::<f64>() / n;
    Ok(MonteCarloEstimate {
        mean,
        std_error: (var / n).sqrt(),
        realizations: mc.realizations,
        mean_devices,
    })
}

/// Mean spectral efficiency `Ξ` over the serving region in bits/s/Hz:
/// the mean of `log2(1 + Ψ/u)` for `u = d²` uniform on `[h², d_max²]`.
pub fn spectral_efficiency_closed_form(psi: f64, altitude: f64, max_range: f64) -> Result<f64> {
    if !(max_range > altitude) {
        return Err(Error::DegenerateGeometry {
            max_range_m: max_range,
            altitude_m: altitude,
        });
    }
    if !(psi >= 0.0) {
        return Err(Error::param("psi", format!("must be nonnegative, got {psi}")));
    }
    if psi == 0.0 {
        return Ok(0.0);
    }
    let lo = altitude * altitude;
    let hi = max_range * max_range;
    let width = hi - lo;
    if width < 1e-4 * lo {
        // three-point Gauss-Legendre; the antiderivative difference cancels here
        let mid = 0.5 * (lo + hi);
        let off = 0.5 * width * (0.6f64).sqrt();
        let f = |u: f64| (psi / u).ln_1p();
        let mean = (5.0 * f(mid - off) + 8.0 * f(mid) + 5.0 * f(mid + off)) / 18.0;
        return Ok(mean / LN_2);
    }
    // antiderivative u·ln(1+Ψ/u) + Ψ·ln(u+Ψ), with the log difference folded
    let integral = hi * (psi / hi).ln_1p() - lo * (psi / lo).ln_1p() + psi * (width / (lo + psi)).ln_1p();
    Ok(integral / (width * LN_2))
}

/// `Ψ`, `Ξ` and the quantities they are built from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralEfficiency {
    pub mean_interference: f64,
    /// Received-power coefficient over interference plus noise (m²).
    pub psi: f64,
    pub max_range: f64,
    /// bits/s/Hz
    pub xi: f64,
}

pub fn mean_spectral_efficiency(env: &LinkEnvironment) -> Result<SpectralEfficiency> {
    env.validate()?;
    let interference = mean_interference(env)?;
    let psi = env.received_power_constant() / (interference + env.noise_var);
    let max_range = slant_range(env.min_elevation, env.altitude);
    let xi = spectral_efficiency_closed_form(psi, env.altitude, max_range)?;
    Ok(SpectralEfficiency {
        mean_interference: interference,
        psi,
        max_range,
        xi,
    })
}

/// Serving satellites needed for a capacity target: `C_th / (B_w · Ξ)`.
pub fn required_satellite_count(capacity_target: f64, bandwidth: f64, xi: f64) -> Result<f64> {
    let per_satellite = bandwidth * xi;
    if !(per_satellite > 0.0) {
        return Err(Error::InfeasibleCapacity);
    }
    if !(capacity_target >= 0.0) {
        return Err(Error::param("capacity_target", "must be nonnegative"));
    }
    Ok(capacity_target / per_satellite)
}

/// Mean backhaul capacity from `serving` satellites at `mean_rate` each.
pub fn mean_capacity(serving: f64, mean_rate: f64) -> f64 {
    serving * mean_rate
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapacityResult {
    pub mean_interference: f64,
    pub psi: f64,
    pub xi: f64,
    /// bits/s per serving satellite
    pub mean_rate: f64,
    /// bits/s with the supplied number of serving satellites
    pub mean_capacity: f64,
    pub required_count: f64,
}

/// Full link analysis for `serving` satellites against `capacity_target`.
pub fn capacity_analysis(env: &LinkEnvironment, capacity_target: f64, serving: f64) -> Result<CapacityResult> {
    let se = mean_spectral_efficiency(env)?;
    let mean_rate = env.bandwidth * se.xi;
    Ok(CapacityResult {
        mean_interference: se.mean_interference,
        psi: se.psi,
        xi: se.xi,
        mean_rate,
        mean_capacity: mean_capacity(serving, mean_rate),
        required_count: required_satellite_count(capacity_target, env.bandwidth, se.xi)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn env(h: f64) -> LinkEnvironment {
        LinkEnvironment::reference(h, 10f64.to_radians())
    }

    const GK_NODES: [f64; 8] = [
        0.991455371120812639, 0.949107912342758525, 0.864864423359769073, 0.741531185599394440,
        0.586087235467691130, 0.405845151377397167, 0.207784955007898468, 0.0,
    ];
    const GK_WEIGHTS: [f64; 8] = [
        0.022935322010529225, 0.063092092629978553, 0.104790010322250184, 0.140653259715525919,
        0.169004726639267903, 0.190350578064785410, 0.204432940075298892, 0.209482141084727828,
    ];
    const GAUSS_WEIGHTS: [f64; 4] = [
        0.129484966168869693, 0.279705391489276668, 0.381830050505118945, 0.417959183673469388,
    ];

    /// Adaptive 7/15-point Gauss-Kronrod to a relative tolerance.
    fn quad(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
        fn panel(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
            let (c, r) = (0.5 * (a + b), 0.5 * (b - a));
            let (mut k, mut g) = (0.0, 0.0);
            for (i, (&x, &w)) in GK_NODES.iter().zip(&GK_WEIGHTS).enumerate() {
                let fx = if x == 0.0 { f(c) } else { f(c - r * x) + f(c + r * x) };
                k += w * fx;
                if i % 2 == 1 {
                    g += GAUSS_WEIGHTS[i / 2] * fx;
                }
            }
            (k * r, (k - g).abs() * r)
        }
        fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
            let (v, err) = panel(f, a, b);
            if err <= tol || depth == 0 {
                return v;
            }
            let m = 0.5 * (a + b);
            rec(f, a, m, tol / 2.0, depth - 1) + rec(f, m, b, tol / 2.0, depth - 1)
        }
        let rough = panel(f, a, b).0.abs();
        rec(f, a, b, rel_tol * rough, 30)
    }

    #[test]
    fn slant_range_limits() {
        let h = 600e3;
        assert_relative_eq!(slant_range(PI / 2.0, h), h, max_relative = 1e-12);
        assert_relative_eq!(slant_range(0.0, h), (h * h + 2.0 * h * EARTH_RADIUS).sqrt(), max_relative = 1e-15);
        // law of cosines in the Earth-centre triangle
        let theta = 10f64.to_radians();
        let nadir = (EARTH_RADIUS / (EARTH_RADIUS + h) * theta.cos()).asin();
        let central = PI / 2.0 - theta - nadir;
        let d = (EARTH_RADIUS.powi(2) + (EARTH_RADIUS + h).powi(2)
            - 2.0 * EARTH_RADIUS * (EARTH_RADIUS + h) * central.cos())
        .sqrt();
        assert_relative_eq!(slant_range(theta, h), d, max_relative = 1e-9);
        assert!((d / 1e3 - 1932.0).abs() < 1.0, "{}", d / 1e3);
    }

    #[test]
    fn slant_range_decreases_with_elevation() {
        for h in [500e3, 1000e3, 1800e3] {
            let mut prev = f64::INFINITY;
            for k in 0..=90 {
                let d = slant_range(f64::from(k).to_radians(), h);
                assert!(d < prev);
                prev = d;
            }
        }
    }

    #[test]
    fn array_response_has_unit_norm() {
        let e = env(600e3);
        let a = array_response(&e, 0.4, 1.3);
        assert_eq!(a.len(), 16);
        for x in &a {
            assert_relative_eq!(x.norm(), 0.25, max_relative = 1e-14);
        }
        let n: f64 = a.iter().map(Complex64::norm_sqr).sum();
        assert_relative_eq!(n, 1.0, max_relative = 1e-14);
    }

    #[test]
    fn pure_los_channel_has_norm_m_a() {
        let mut e = env(600e3);
        e.rician_factor = 1e12;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s = sample_channel(&e, 0.3, 0.9, 1.0e6, &mut rng);
        assert_relative_eq!(s.small_scale_norm_sqr(), 16.0, max_relative = 1e-5);
        assert_relative_eq!(s.gain, e.large_scale_gain(1.0e6));
    }

    #[test]
    fn small_scale_power_has_mean_m_a() {
        for k_db in [-10.0, 0.0, 10.0, 30.0] {
            let mut e = env(600e3);
            e.rician_factor = db_to_linear(k_db);
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            let n = 100_000;
            let mean = (0..n)
                .map(|_| {
                    let off: f64 = rng.random_range(0.0..1.5);
                    let az: f64 = rng.random_range(0.0..6.28);
                    sample_channel(&e, off, az, 1e6, &mut rng).small_scale_norm_sqr()
                })
                .sum::<f64>()
                / n as f64;
            assert!((mean / 16.0 - 1.0).abs() < 0.01, "K={k_db} dB mean {mean}");
        }
    }

    #[test]
    fn interference_scaling() {
        let e = env(600e3);
        let base = mean_interference(&e).unwrap();
        let mut doubled = e;
        doubled.device_density *= 2.0;
        assert_relative_eq!(mean_interference(&doubled).unwrap(), 2.0 * base, max_relative = 1e-14);
        let far = mean_interference(&env(1e12)).unwrap();
        assert!(far < base * 1e-9);
        let mut bad = e;
        bad.altitude = 0.0;
        assert!(mean_interference(&bad).is_err());
    }

    #[test]
    fn interference_matches_cap_quadrature() {
        // ∫ over the cap of d⁻² dA, by quadrature in the central angle
        let e = env(900e3);
        let h = e.altitude;
        let a = EARTH_RADIUS + h;
        let f = |phi: f64| {
            let u = EARTH_RADIUS.powi(2) + a * a - 2.0 * EARTH_RADIUS * a * phi.cos();
            2.0 * PI * EARTH_RADIUS * EARTH_RADIUS * phi.sin() / u
        };
        let integral = quad(&f, 0.0, visible_cap_angle(h), 1e-13);
        let expected = e.tx_power * 100.0 * 16.0 * e.gain_constant() * e.activity * e.device_density * integral;
        assert_relative_eq!(mean_interference(&e).unwrap(), expected, max_relative = 1e-9);
    }

    #[test]
    fn monte_carlo_is_reproducible() {
        let e = env(1000e3);
        let mc = InterferenceMonteCarlo {
            realizations: 8,
            devices_per_realization: 500.0,
            sample_fading: true,
            seed: 3,
        };
        let a = simulate_interference(&e, &mc).unwrap();
        let b = simulate_interference(&e, &mc).unwrap();
        assert_eq!(a, b);
        assert!(a.mean > 0.0);
    }

    #[test]
    fn closed_form_xi_matches_quadrature() {
        for (psi, h, d) in [(1e4, 500e3, 2000e3), (3e11, 1000e3, 1500e3), (1e14, 1800e3, 4000e3)] {
            let f = |u: f64| (psi / u).ln_1p();
            let q = quad(&f, h * h, d * d, 1e-13);
            let expected = q / ((d * d - h * h) * LN_2);
            let got = spectral_efficiency_closed_form(psi, h, d).unwrap();
            assert_relative_eq!(got, expected, max_relative = 1e-9);
        }
    }

    #[test]
    fn xi_edge_cases() {
        assert_eq!(spectral_efficiency_closed_form(0.0, 600e3, 1900e3).unwrap(), 0.0);
        let h: f64 = 600e3;
        let psi = 4e11;
        let limit = (1.0 + psi / (h * h)).log2();
        let near = spectral_efficiency_closed_form(psi, h, h * (1.0 + 1e-9)).unwrap();
        assert_relative_eq!(near, limit, max_relative = 1e-9);
        let close = spectral_efficiency_closed_form(psi, h, h * 1.001).unwrap();
        assert!((close - limit).abs() < 1e-2 * limit);
        assert!(matches!(
            spectral_efficiency_closed_form(psi, h, h),
            Err(Error::DegenerateGeometry { .. })
        ));
    }

    #[test]
    fn xi_monotonicity() {
        let h = 800e3;
        let mut prev = 0.0;
        for k in 0..40 {
            let psi = 10f64.powf(4.0 + 10.0 * f64::from(k) / 39.0);
            let xi = spectral_efficiency_closed_form(psi, h, 2500e3).unwrap();
            assert!(xi > prev);
            prev = xi;
        }
        let mut prev = f64::INFINITY;
        for k in 1..40 {
            let d = h + f64::from(k) * 100e3;
            let xi = spectral_efficiency_closed_form(3e11, h, d).unwrap();
            assert!(xi < prev);
            prev = xi;
        }
    }

    #[test]
    fn capacity_arithmetic() {
        assert_relative_eq!(required_satellite_count(80e6, 250e6, 0.32).unwrap(), 1.0, max_relative = 1e-15);
        assert_relative_eq!(required_satellite_count(80e6, 250e6, 0.8).unwrap(), 0.4, max_relative = 1e-15);
        assert_eq!(mean_capacity(3.0, 50e6), 150e6);
        assert_eq!(required_satellite_count(80e6, 250e6, 0.0), Err(Error::InfeasibleCapacity));
    }

    #[test]
    fn capacity_analysis_is_consistent() {
        let e = LinkEnvironment::reference(1589e3, crate::coverage::theta_from_beta(45f64.to_radians(), 1589e3).unwrap());
        let r = capacity_analysis(&e, 80e6, 3.0).unwrap();
        assert_relative_eq!(r.mean_capacity, 3.0 * r.mean_rate);
        assert_relative_eq!(r.mean_rate, e.bandwidth * r.xi);
        assert_relative_eq!(r.required_count * e.bandwidth * r.xi, 80e6, max_relative = 1e-12);
        assert!(r.xi > 0.0 && r.psi > 0.0 && r.mean_interference > 0.0);
    }

    #[test]
    fn reference_environment_validates() {
        let e = env(600e3);
        e.validate().unwrap();
        assert_relative_eq!(e.rain_loss, 0.5495408738576245, max_relative = 1e-12);
        assert_relative_eq!(e.device_density, 8e-11, max_relative = 1e-12);
        let mut bad = e;
        bad.activity = 1.5;
        assert!(bad.validate().is_err());
        let mut bad = e;
        bad.rain_loss = 2.0;
        assert!(bad.validate().is_err());
    }
}

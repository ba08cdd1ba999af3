//! MEO scene generation: user drops over the visible footprint, URA steering
//! vectors and a line-of-sight link budget.
//!
//! Each user column of the channel is
//! `h_m = sqrt(G_link,m) * exp(j psi_m) * a(theta_m, phi_m)` with
//! `G_link,m = (lambda / (4 pi d_m))^2 * G_user`, a uniformly random carrier
//! phase `psi_m` and the URA response `a`. Noise power is `k_B T B`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::codebook::{DftCodebook, Window};
use crate::error::{Error, Result};
use crate::{CMatrix, C64};

pub const EARTH_RADIUS_M: f64 = 6_378_000.0;
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
pub const BOLTZMANN: f64 = 1.380649e-23;

/// Uniform rectangular array. Elements are raster ordered: element `(kx, ky)`
/// sits at index `ky * nx + kx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayConfig {
    pub nx: usize,
    pub ny: usize,
    pub spacing_over_lambda: f64,
    /// Power pattern is `cos^q(theta)`.
    pub element_pattern_exponent: f64,
}

impl Default for ArrayConfig {
    fn default() -> Self {
        Self {
            nx: 10,
            ny: 10,
            spacing_over_lambda: 1.0,
            element_pattern_exponent: 1.0,
        }
    }
}

impl ArrayConfig {
    pub fn num_elements(&self) -> usize {
        self.nx * self.ny
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx == 0 || self.ny == 0 {
            return Err(Error::Validation("URA dimensions must be positive".into()));
        }
        if !(0.1..=10.0).contains(&self.spacing_over_lambda) {
            return Err(Error::Validation(format!(
                "element spacing {} lambda outside [0.1, 10]",
                self.spacing_over_lambda
            )));
        }
        if !(self.element_pattern_exponent >= 0.0 && self.element_pattern_exponent.is_finite()) {
            return Err(Error::Validation(
                "element pattern exponent must be a non-negative number".into(),
            ));
        }
        Ok(())
    }
}

/// Direction of a ground user as seen from the satellite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UserDirection {
    /// Off-nadir angle (rad).
    pub theta: f64,
    /// Azimuth (rad).
    pub phi: f64,
    pub slant_range_m: f64,
}

/// Every parameter needed to draw a scene.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneConfig {
    pub power_w: f64,
    pub users: usize,
    pub array: ArrayConfig,
    pub fft_size: usize,
    /// `None` centres the window.
    pub window_start: Option<usize>,
    pub carrier_hz: f64,
    pub bandwidth_hz: f64,
    pub altitude_m: f64,
    pub min_elevation_deg: f64,
    pub user_gain_dbi: f64,
    pub noise_temp_k: f64,
}

impl Default for SceneConfig {
    fn default() -> Self {
        Self {
            power_w: 3000.0,
            users: 45,
            array: ArrayConfig::default(),
            fft_size: 256,
            window_start: None,
            carrier_hz: 19e9,
            bandwidth_hz: 500e6,
            altitude_m: 8_000_000.0,
            min_elevation_deg: 5.0,
            user_gain_dbi: 41.45,
            noise_temp_k: 224.5,
        }
    }
}

impl SceneConfig {
    pub fn num_elements(&self) -> usize {
        self.array.num_elements()
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_hz
    }

    pub fn noise_power(&self) -> f64 {
        noise_power(self.noise_temp_k, self.bandwidth_hz)
    }

    pub fn validate(&self) -> Result<()> {
        self.array.validate()?;
        let k = self.num_elements();
        if self.users == 0 {
            return Err(Error::Validation("number of users must be at least 1".into()));
        }
        if self.users > k {
            return Err(Error::Validation(format!(
                "{} users exceed {} antenna elements",
                self.users, k
            )));
        }
        if k > self.fft_size {
            return Err(Error::Validation(format!(
                "{} antenna elements exceed FFT size {}",
                k, self.fft_size
            )));
        }
        if let Some(start) = self.window_start {
            if start + k > self.fft_size {
                return Err(Error::WindowOutOfRange {
                    start,
                    k,
                    n: self.fft_size,
                });
            }
        }
        for (name, v) in [
            ("power_w", self.power_w),
            ("carrier_hz", self.carrier_hz),
            ("bandwidth_hz", self.bandwidth_hz),
            ("altitude_m", self.altitude_m),
            ("noise_temp_k", self.noise_temp_k),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Validation(format!("{name} must be positive, got {v}")));
            }
        }
        if !(0.0..=90.0).contains(&self.min_elevation_deg) {
            return Err(Error::Validation(format!(
                "min_elevation_deg {} outside [0, 90]",
                self.min_elevation_deg
            )));
        }
        if !self.user_gain_dbi.is_finite() {
            return Err(Error::Validation("user_gain_dbi must be finite".into()));
        }
        Ok(())
    }

    pub fn codebook(&self) -> Result<DftCodebook> {
        DftCodebook::new(self.fft_size)
    }

    pub fn window(&self) -> Result<Window> {
        let k = self.num_elements();
        match self.window_start {
            Some(start) => Window::new(start, k, self.fft_size),
            None => Window::centered(k, self.fft_size),
        }
    }
}

/// A drawn scene. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    /// `K x M` channel, linear amplitude gain.
    pub h: CMatrix,
    /// Noise power `sigma^2` (W).
    pub noise_power: f64,
    /// Transmit power budget `P` (W).
    pub power_budget: f64,
    pub users: Vec<UserDirection>,
    pub bandwidth_hz: f64,
    pub carrier_hz: f64,
    pub altitude_m: f64,
    pub min_elevation_deg: f64,
    pub seed: u64,
}

impl Scene {
    /// Scene around an arbitrary channel matrix, for synthetic experiments.
    pub fn from_channel(h: CMatrix, noise_power: f64, power_budget: f64) -> Result<Self> {
        let m = h.ncols();
        let scene = Self {
            h,
            noise_power,
            power_budget,
            users: Vec::new(),
            bandwidth_hz: 1.0,
            carrier_hz: 0.0,
            altitude_m: 0.0,
            min_elevation_deg: 0.0,
            seed: 0,
        };
        if m == 0 {
            return Err(Error::InvalidArgument("channel has no user columns".into()));
        }
        scene.validate()?;
        Ok(scene)
    }

    pub fn num_users(&self) -> usize {
        self.h.ncols()
    }

    pub fn num_elements(&self) -> usize {
        self.h.nrows()
    }

    /// Same channel, different power budget.
    pub fn with_power_budget(&self, power_budget: f64) -> Self {
        Self {
            power_budget,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.h.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Validation("channel has non-finite entries".into()));
        }
        if self.h.column_iter().any(|c| c.norm() <= 0.0) {
            return Err(Error::Validation("channel has an all-zero user column".into()));
        }
        if !(self.noise_power > 0.0) || !(self.power_budget > 0.0) {
            return Err(Error::Validation("noise power and power budget must be positive".into()));
        }
        if self.num_users() > self.num_elements() {
            return Err(Error::Validation("more users than antenna elements".into()));
        }
        Ok(())
    }
}

/// Thermal noise `k_B T B` (W).
pub fn noise_power(noise_temp_k: f64, bandwidth_hz: f64) -> f64 {
    BOLTZMANN * noise_temp_k * bandwidth_hz
}

/// Free-space path loss `20 log10(4 pi d / lambda)` (dB).
pub fn fspl_db(distance_m: f64, carrier_hz: f64) -> f64 {
    let lambda = SPEED_OF_LIGHT / carrier_hz;
    20.0 * (4.0 * PI * distance_m / lambda).log10()
}

/// Largest off-nadir angle at which a user still sees the satellite above
/// `min_elevation_deg`: `sin(theta_max) = R_e / (R_e + h) * cos(elev_min)`.
pub fn max_off_nadir(altitude_m: f64, min_elevation_deg: f64) -> f64 {
    let ratio = EARTH_RADIUS_M / (EARTH_RADIUS_M + altitude_m);
    (ratio * min_elevation_deg.to_radians().cos()).asin()
}

/// Off-nadir angle and slant range of a ground point at Earth-central angle
/// `gamma` from the sub-satellite point.
fn view_from_satellite(altitude_m: f64, gamma: f64) -> (f64, f64) {
    let orbit = EARTH_RADIUS_M + altitude_m;
    let horizontal = EARTH_RADIUS_M * gamma.sin();
    let vertical = orbit - EARTH_RADIUS_M * gamma.cos();
    (horizontal.atan2(vertical), horizontal.hypot(vertical))
}

fn check_footprint(m: usize, altitude_m: f64, min_elevation_deg: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidArgument("at least one user is required".into()));
    }
    if !(altitude_m > 0.0 && altitude_m.is_finite()) {
        return Err(Error::DegenerateGeometry(format!("altitude {altitude_m} m")));
    }
    if !(0.0..=90.0).contains(&min_elevation_deg) {
        return Err(Error::DegenerateGeometry(format!(
            "minimum elevation {min_elevation_deg} deg leaves no visible footprint"
        )));
    }
    let theta_max = max_off_nadir(altitude_m, min_elevation_deg);
    // central angle of the footprint edge
    let gamma_max = (PI / 2.0 - min_elevation_deg.to_radians() - theta_max).max(0.0);
    Ok(gamma_max)
}

fn drop_users_with<R: Rng>(
    m: usize,
    altitude_m: f64,
    min_elevation_deg: f64,
    rng: &mut R,
) -> Result<Vec<UserDirection>> {
    let gamma_max = check_footprint(m, altitude_m, min_elevation_deg)?;
    let cos_min = gamma_max.cos();
    Ok((0..m)
        .map(|_| {
            // uniform in area on the spherical cap
            let cos_gamma = 1.0 - rng.random::<f64>() * (1.0 - cos_min);
            let phi = rng.random::<f64>() * 2.0 * PI;
            let (theta, slant_range_m) =
                view_from_satellite(altitude_m, cos_gamma.clamp(-1.0, 1.0).acos());
            UserDirection {
                theta,
                phi,
                slant_range_m,
            }
        })
        .collect())
}

/// Draws `m` users uniformly over the part of the Earth that sees the
/// satellite at or above `min_elevation_deg`.
pub fn drop_users(
    m: usize,
    altitude_m: f64,
    min_elevation_deg: f64,
    seed: u64,
) -> Result<Vec<UserDirection>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    drop_users_with(m, altitude_m, min_elevation_deg, &mut rng)
}

/// URA response toward `(theta, phi)` with amplitude `cos^{q/2}(theta)`.
pub fn steering_vector(array: &ArrayConfig, theta: f64, phi: f64) -> Vec<C64> {
    let amplitude = theta.cos().max(0.0).powf(array.element_pattern_exponent / 2.0);
    let u = theta.sin() * phi.cos();
    let v = theta.sin() * phi.sin();
    let d = array.spacing_over_lambda;
    let mut out = Vec::with_capacity(array.num_elements());
    for ky in 0..array.ny {
        for kx in 0..array.nx {
            let phase = 2.0 * PI * d * (kx as f64 * u + ky as f64 * v);
            out.push(C64::from_polar(amplitude, phase));
        }
    }
    out
}

/// Linear link power gain `(lambda / (4 pi d))^2 * G_user`.
pub fn link_gain(config: &SceneConfig, slant_range_m: f64) -> f64 {
    let lambda = config.wavelength();
    let path = lambda / (4.0 * PI * slant_range_m);
    path * path * 10f64.powf(config.user_gain_dbi / 10.0)
}

pub fn build_scene(config: &SceneConfig, seed: u64) -> Result<Scene> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let users = drop_users_with(
        config.users,
        config.altitude_m,
        config.min_elevation_deg,
        &mut rng,
    )?;
    let k = config.num_elements();
    let mut h = CMatrix::zeros(k, config.users);
    for (m, user) in users.iter().enumerate() {
        let psi = rng.random::<f64>() * 2.0 * PI;
        let coeff = C64::from_polar(link_gain(config, user.slant_range_m).sqrt(), psi);
        let a = steering_vector(&config.array, user.theta, user.phi);
        for (row, v) in a.into_iter().enumerate() {
            h[(row, m)] = coeff * v;
        }
    }
    let scene = Scene {
        h,
        noise_power: config.noise_power(),
        power_budget: config.power_w,
        users,
        bandwidth_hz: config.bandwidth_hz,
        carrier_hz: config.carrier_hz,
        altitude_m: config.altitude_m,
        min_elevation_deg: config.min_elevation_deg,
        seed,
    };
    scene.validate()?;
    Ok(scene)
}

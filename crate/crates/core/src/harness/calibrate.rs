//! Operating-point calibration: the power at which DFT-only beamforming
//! reaches a target mean SINR on a fixed set of scenes.

use crate::baselines::dft_only;
use crate::error::{Error, Result};
use crate::geometry::{build_scene, SceneConfig};
use crate::metrics::Beamspace;

/// DFT-only signal and interference gains at unit total power, per user.
#[derive(Debug, Clone)]
pub struct DftOnlyProfile {
    /// `(signal, interference, noise)` for every user of every scene.
    users: Vec<(f64, f64, f64)>,
}

impl DftOnlyProfile {
    pub fn new(base: &SceneConfig, seeds: &[u64]) -> Result<Self> {
        let codebook = base.codebook()?;
        let window = base.window()?;
        let mut users = Vec::new();
        for &seed in seeds {
            let scene = build_scene(base, seed)?;
            let bs = Beamspace::new(&scene, &codebook, &window)?;
            let (a, u) = dft_only(&bs, 1.0);
            let g = bs.gains(&a, &u);
            for m in 0..g.nrows() {
                let signal = g[(m, m)].norm_sqr();
                let total: f64 = g.row(m).iter().map(|z| z.norm_sqr()).sum();
                users.push((signal, total - signal, scene.noise_power));
            }
        }
        if users.is_empty() {
            return Err(Error::InvalidArgument("calibration needs at least one scene".into()));
        }
        Ok(Self { users })
    }

    /// Mean linear SINR over all users at total power `p`.
    pub fn mean_sinr(&self, p: f64) -> f64 {
        let sum: f64 = self
            .users
            .iter()
            .map(|&(s, i, n)| p * s / (p * i + n))
            .sum();
        sum / self.users.len() as f64
    }

    /// Limit of [`Self::mean_sinr`] as `p` grows without bound.
    pub fn interference_ceiling(&self) -> f64 {
        let sum: f64 = self
            .users
            .iter()
            .map(|&(s, i, _)| if i > 0.0 { s / i } else { f64::INFINITY })
            .sum();
        sum / self.users.len() as f64
    }

    /// Power giving a mean SINR of `target_db`, by bisection on `log p`.
    pub fn power_for(&self, target_db: f64) -> Result<f64> {
        let target = 10f64.powf(target_db / 10.0);
        let ceiling = self.interference_ceiling();
        if !(target < ceiling) {
            return Err(Error::Validation(format!(
                "target {target_db} dB is not below the interference ceiling {:.3} dB",
                10.0 * ceiling.log10()
            )));
        }
        let (mut lo, mut hi) = (1.0f64, 1.0f64);
        while self.mean_sinr(lo) > target {
            lo *= 0.1;
        }
        while self.mean_sinr(hi) < target {
            hi *= 10.0;
        }
        for _ in 0..200 {
            let mid = (lo * hi).sqrt();
            if self.mean_sinr(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi / lo - 1.0 < 1e-12 {
                break;
            }
        }
        Ok(hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ArrayConfig;

    fn desk() -> SceneConfig {
        SceneConfig {
            users: 4,
            array: ArrayConfig { nx: 4, ny: 2, ..ArrayConfig::default() },
            fft_size: 16,
            ..SceneConfig::default()
        }
    }

    #[test]
    fn calibrated_power_hits_target() {
        let seeds: Vec<u64> = (0..20).collect();
        let profile = DftOnlyProfile::new(&desk(), &seeds).unwrap();
        let p = profile.power_for(5.0).unwrap();
        assert!((10.0 * profile.mean_sinr(p).log10() - 5.0).abs() < 1e-9);
        // brute-force check against the scheme itself
        let cfg = SceneConfig { power_w: p, ..desk() };
        let (cb, w) = (cfg.codebook().unwrap(), cfg.window().unwrap());
        let mut acc = 0.0;
        for &seed in &seeds {
            let scene = build_scene(&cfg, seed).unwrap();
            let bs = Beamspace::new(&scene, &cb, &w).unwrap();
            let (a, u) = dft_only(&bs, p);
            acc += bs.sinrs(&a, &u).iter().sum::<f64>();
        }
        let mean = acc / (seeds.len() * 4) as f64;
        assert!((mean / profile.mean_sinr(p) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn target_above_ceiling_is_rejected() {
        let profile = DftOnlyProfile::new(&desk(), &[1, 2, 3]).unwrap();
        let ceiling_db = 10.0 * profile.interference_ceiling().log10();
        assert!(profile.power_for(ceiling_db + 0.1).is_err());
    }
}

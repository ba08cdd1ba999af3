//! Finds the transmit power at which DFT-only beamforming reaches a target
//! mean SINR, and shows where its interference ceiling lies.

use satbeam::harness::{derive_seed, DftOnlyProfile};
use satbeam::{ArrayConfig, SceneConfig};

fn main() -> satbeam::Result<()> {
    let config = SceneConfig {
        users: 4,
        array: ArrayConfig { nx: 4, ny: 2, ..ArrayConfig::default() },
        fft_size: 16,
        ..SceneConfig::default()
    };
    let seeds: Vec<u64> = (0..50).map(|t| derive_seed(1, 0.0, t)).collect();
    let profile = DftOnlyProfile::new(&config, &seeds)?;
    let db = |x: f64| 10.0 * x.log10();
    println!("interference ceiling: {:.2} dB", db(profile.interference_ceiling()));
    for target in [0.0, 5.0, 9.0] {
        match profile.power_for(target) {
            Ok(p) => println!("{target:4.1} dB mean SINR at {p:.4e} W (check: {:.3} dB)", db(profile.mean_sinr(p))),
            Err(e) => println!("{target:4.1} dB: {e}"),
        }
    }
    Ok(())
}

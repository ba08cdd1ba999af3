//! MEO link budget for one user drop: slant ranges, path loss, noise floor.

use satbeam::geometry::{build_scene, fspl_db, max_off_nadir};
use satbeam::SceneConfig;

fn main() -> satbeam::Result<()> {
    let config = SceneConfig { users: 5, ..SceneConfig::default() };
    let scene = build_scene(&config, 42)?;
    println!(
        "altitude {:.0} km, carrier {:.1} GHz, max off-nadir {:.2} deg",
        config.altitude_m / 1e3,
        config.carrier_hz / 1e9,
        max_off_nadir(config.altitude_m, config.min_elevation_deg).to_degrees()
    );
    println!("noise power {:.3e} W over {:.0} MHz", scene.noise_power, config.bandwidth_hz / 1e6);
    for (m, u) in scene.users.iter().enumerate() {
        let gain: f64 = scene.h.column(m).iter().map(|x| x.norm_sqr()).sum();
        println!(
            "user {m}: theta {:6.3} deg, range {:8.1} km, FSPL {:6.2} dB, array SNR at full power {:6.2} dB",
            u.theta.to_degrees(),
            u.slant_range_m / 1e3,
            fspl_db(u.slant_range_m, config.carrier_hz),
            10.0 * (config.power_w * gain / scene.noise_power).log10()
        );
    }
    Ok(())
}

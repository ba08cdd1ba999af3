//! All five schemes on the same scenes, averaged over a few drops.

use satbeam::baselines::run_scheme;
use satbeam::geometry::build_scene;
use satbeam::{ArrayConfig, Beamspace, SceneConfig, SchemeId, SolverConfig};

fn main() -> satbeam::Result<()> {
    let config = SceneConfig {
        users: 4,
        array: ArrayConfig { nx: 4, ny: 2, ..ArrayConfig::default() },
        fft_size: 16,
        ..SceneConfig::default()
    };
    let (codebook, window) = (config.codebook()?, config.window()?);
    let schemes = [
        SchemeId::JointWmmse,
        SchemeId::GreedyZf,
        SchemeId::DftOnly,
        SchemeId::MfFdp,
        SchemeId::MmseFdp,
    ];
    let drops = 10;
    let mut means = [0.0; 5];
    for seed in 0..drops {
        let scene = build_scene(&config, seed)?;
        let bs = Beamspace::new(&scene, &codebook, &window)?;
        for (i, &scheme) in schemes.iter().enumerate() {
            let r = run_scheme(scheme, &scene, &bs, &SolverConfig { seed, ..SolverConfig::default() });
            means[i] += r.sum_rate / drops as f64;
        }
    }
    for (scheme, mean) in schemes.iter().zip(means) {
        println!("{:>11}: {mean:7.3} bit/s/Hz", scheme.as_str());
    }
    Ok(())
}

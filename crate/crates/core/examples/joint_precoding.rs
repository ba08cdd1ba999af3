//! One run of the alternating WMMSE / dual / assignment optimizer with its
//! per-iteration trace.

use satbeam::geometry::build_scene;
use satbeam::solver::{solve, BetaMode};
use satbeam::{ArrayConfig, SceneConfig, SolverConfig};

fn main() -> satbeam::Result<()> {
    let config = SceneConfig {
        users: 4,
        array: ArrayConfig { nx: 4, ny: 2, ..ArrayConfig::default() },
        fft_size: 16,
        ..SceneConfig::default()
    };
    let scene = build_scene(&config, 3)?;
    for mode in [BetaMode::Bisection, BetaMode::Subgradient] {
        let solver = SolverConfig { beta_mode: mode, ..SolverConfig::default() };
        let state = solve(&scene, &config.codebook()?, &config.window()?, &solver)?;
        println!("beta mode {mode:?}: {} iterations, converged {}", state.iter, state.converged);
        for r in state.records.iter().take(5) {
            println!(
                "  iter {:3} objective {:10.6} sum rate {:7.4} bit/s/Hz beta {:.3e} power {:.1} W",
                r.iteration, r.objective, r.sum_rate, r.beta, r.power
            );
        }
        println!("  final assignment {:?}, objective {:.8}", state.assignment.rows(), state.objective());
    }
    Ok(())
}

//! DFT codebook: FFT application against the dense matrix product, plus the
//! spatial window that feeds the antenna elements.

use satbeam::codebook::effective_channel;
use satbeam::geometry::build_scene;
use satbeam::{Assignment, DftCodebook, SceneConfig, Window, C64};

fn main() -> satbeam::Result<()> {
    let n = 64;
    let codebook = DftCodebook::new(n)?;
    let users = 8;
    let assignment = Assignment::new(vec![0, 5, 9, 17, 30, 41, 52, 63], n)?;
    let s: Vec<C64> = (0..users).map(|m| C64::from_polar(1.0, m as f64)).collect();

    let fast = codebook.apply(&assignment, &s)?;
    let dense = codebook.apply_dense(&assignment, &s)?;
    let err = fast.iter().zip(&dense).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    println!("N = {n}: max |FFT - dense| = {err:.2e}");

    let scene = build_scene(&SceneConfig::default(), 1)?;
    let big = DftCodebook::new(SceneConfig::default().fft_size)?;
    let window = Window::centered(scene.num_elements(), big.size())?;
    println!(
        "N = {}: window starts at output {} and feeds {} elements",
        big.size(),
        window.start(),
        window.len()
    );
    let e = effective_channel(&scene.h, &window, &big)?;
    println!("beam-space channel: {} beams x {} users", e.nrows(), e.ncols());
    Ok(())
}

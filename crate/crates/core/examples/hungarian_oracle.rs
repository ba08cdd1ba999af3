//! Rectangular Hungarian assignment checked against exhaustive search.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use satbeam::{brute_force_assignment, hungarian, CostMatrix};

fn main() -> satbeam::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (n, m) in [(3, 2), (5, 3), (8, 4), (9, 5)] {
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..m).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let cost = CostMatrix::from_rows(&rows)?;
        let h = hungarian(&cost)?;
        let b = brute_force_assignment(&cost)?;
        println!(
            "{n}x{m}: hungarian {:?} total {:.6}, exhaustive {:?} total {:.6}",
            h.rows(),
            cost.total(&h),
            b.rows(),
            cost.total(&b)
        );
    }
    Ok(())
}

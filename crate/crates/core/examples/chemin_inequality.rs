//! Check the mass interpolation inequality on random nonnegative fields.

use blowup_lab::functionals::chemin;
use blowup_lab::report::random_field;
use blowup_lab::Grid;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> blowup_lab::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 1..=3 {
        let grid = if n == 1 { Grid::line(10.0, 2048)? } else { Grid::radial(n, 10.0, 2048)? };
        let mut worst: f64 = 0.0;
        for _ in 0..200 {
            let f = random_field(&grid, &mut rng);
            let r = chemin(&f, &grid, 1.6)?;
            assert!(r.holds);
            worst = worst.max(r.ratio);
        }
        println!("n = {n}: max lhs/rhs over 200 fields = {worst:.4}");
    }
    Ok(())
}

//! The weighted maximal operator of partial sums applied to random atoms,
//! integrated off the support.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vlab::group::{BaseSequence, IntervalSpec};
use vlab::hardy::{validate_atom, AtomSpec};
use vlab::sums::{maximal_s, weighted_maximal, WeightSpec};

fn main() -> vlab::Result<()> {
    let base = BaseSequence::walsh(8)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for p in [0.5, 0.75, 1.0] {
        let w = WeightSpec::new(p)?;
        print!("p = {p:<4}");
        for level in [2, 4, 6] {
            let mut worst = 0.0f64;
            for _ in 0..20 {
                let a = AtomSpec::random(IntervalSpec::at_zero(&base, level)?, p, &mut rng)?;
                assert!(validate_atom(&a).passed());
                let star = weighted_maximal(&a.function, &w);
                worst = worst.max(star.abs_pow_integral(p, |r| !a.support.contains_rank(r)));
            }
            print!("  level {level}: {worst:.4}");
        }
        println!();
    }

    // Without the weight the same integral grows with the level.
    for level in [2, 4, 6] {
        let a = AtomSpec::random(IntervalSpec::at_zero(&base, level)?, 0.5, &mut rng)?;
        let v = maximal_s(&a.function).abs_pow_integral(0.5, |r| !a.support.contains_rank(r));
        println!("unweighted, level {level}: {v:.4}");
    }
    Ok(())
}

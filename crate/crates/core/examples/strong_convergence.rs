//! Weighted strong sums sum_k ||S_k a||_p^p / k^(2-p) for atoms at each
//! level, next to the Hardy quasi-norm of the atom.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vlab::group::{BaseSequence, IntervalSpec};
use vlab::hardy::{hardy_norm, AtomSpec, MartingaleApprox};
use vlab::sums::strong_sum;

fn main() -> vlab::Result<()> {
    let base = BaseSequence::walsh(10)?;
    let p = 0.5;
    let k = base.order();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    println!(
        "{:>5} {:>10} {:>10} {:>10} {:>8}",
        "level", "total", "half", "||a||^p", "ratio"
    );
    for level in 0..base.resolution() {
        let a = AtomSpec::random(IntervalSpec::at_zero(&base, level)?, p, &mut rng)?;
        let s = strong_sum(&a.function, p, k)?;
        let hp = hardy_norm(&MartingaleApprox::new(a.function.clone()), p)?.powf(p);
        println!(
            "{level:>5} {:>10.5} {:>10.5} {:>10.5} {:>8.4}",
            s.total,
            s.partials[k / 2 - 1],
            hp,
            s.total / hp
        );
    }
    Ok(())
}

//! Weak-type ratios of kernel blocks for every weight preset, and the L1
//! ratios at p = 1.

use vlab::counterexamples::{phi_presets, theorem1b_ratio, theorem1b_ratio_l1, PhiKind, PhiWeight};
use vlab::group::BaseSequence;

fn main() -> vlab::Result<()> {
    let base = BaseSequence::walsh(10)?;
    for p in [0.5, 0.75] {
        for phi in phi_presets(p)? {
            let ratios: Vec<String> = (1..=4)
                .map(|k| theorem1b_ratio(&base, k, p, &phi).map(|r| format!("{r:.4}")))
                .collect::<vlab::Result<_>>()?;
            println!("p = {p}, {:<8} {}", phi.name(), ratios.join("  "));
        }
    }
    let base = BaseSequence::walsh(12)?;
    for kind in [PhiKind::Const1, PhiKind::Log] {
        let phi = PhiWeight::new(kind, 1.0)?;
        let ratios: Vec<String> = (1..=5)
            .map(|k| theorem1b_ratio_l1(&base, k, &phi).map(|r| format!("{r:.4}")))
            .collect::<vlab::Result<_>>()?;
        println!("p = 1, {:<8} {}", phi.name(), ratios.join("  "));
    }
    Ok(())
}

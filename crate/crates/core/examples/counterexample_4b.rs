//! The p = 1 construction: L1 residuals at the special indices stay away
//! from zero for both coefficient choices.

use vlab::counterexamples::{theorem4b_martingale, theorem4b_max_a, CoeffVariant};
use vlab::group::BaseSequence;

fn main() -> vlab::Result<()> {
    let base = BaseSequence::walsh(12)?;
    let a = theorem4b_max_a(&base).expect("walsh:12 fits two blocks");
    for variant in [CoeffVariant::InvMi, CoeffVariant::InvM2i] {
        let t = theorem4b_martingale(&base, a, variant)?;
        println!("{variant:?}: blocks {:?}", t.blocks());
        for (q, r) in t.residuals()? {
            println!("  q = {q:4}: ||S_q f - f||_1 = {r:.6}");
        }
        let moduli = t.moduli()?;
        for n in [1, 4, 8, 12] {
            println!(
                "  L1 modulus at level {n}: {:.5} <= {:.5}",
                moduli[n - 1],
                t.modulus_bound(n)
            );
        }
    }
    Ok(())
}

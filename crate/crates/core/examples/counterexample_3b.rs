//! Sum of normalized kernel blocks: the weak residuals of the partial sums
//! at the block starts stay at 1 while the H_p modulus decays.

use vlab::counterexamples::theorem3b_martingale;
use vlab::group::BaseSequence;

fn main() -> vlab::Result<()> {
    for spec in ["walsh:10", "2,3,2,3,2,3"] {
        let base = BaseSequence::parse(spec)?;
        let a = (base.resolution() - 1) / 2;
        let t = theorem3b_martingale(&base, a, 0.5)?;
        println!("{base}, A = {a}: spectrum gap {:.1e}", t.spectrum_error());
        let residuals = t.residuals()?;
        let moduli = t.moduli()?;
        for (k, r) in residuals.iter().enumerate() {
            println!(
                "  k = {k}: residual {r:.6}, modulus {:.5} <= {:.5} (rate {:.5})",
                moduli[2 * k],
                t.modulus_bound(k),
                t.rate(k)
            );
        }
    }
    Ok(())
}

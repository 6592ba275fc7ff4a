//! Analyzes a function on a mixed-radix group, compares the fast and naive
//! transforms, and synthesizes it back.

use num_complex::Complex64;
use vlab::function::FiniteFunction;
use vlab::group::BaseSequence;
use vlab::transform::{analyze_fast, analyze_naive, synthesize, CharacterTable};

fn main() -> vlab::Result<()> {
    let base = BaseSequence::parse("2,3,2,3")?;
    println!(
        "group {base}: {} points, characters of order dividing {}",
        base.order(),
        base.phase_modulus()
    );

    // A character plus a point mass: two spikes in the spectrum plus a flat floor.
    let chars = CharacterTable::new(&base);
    let mut f = chars.row(7);
    f.values_mut()[5] += Complex64::new(base.order() as f64, 0.0);

    let fast = analyze_fast(&f);
    let naive = analyze_naive(&f);
    println!(
        "fast vs naive: {:.3e}",
        vlab::function::relative_discrepancy(fast.coeffs(), naive.coeffs())
    );
    for (n, c) in fast.coeffs().iter().enumerate().take(10) {
        println!("  f^({n:2}) = {:+.4} {:+.4}i", c.re, c.im);
    }

    let back = synthesize(&fast);
    println!("round trip: {:.3e}", back.relative_discrepancy(&f));
    println!(
        "Parseval: ||f||_2^2 = {:.6}, sum |f^(n)|^2 = {:.6}",
        f.lp_norm(2.0)?.powi(2),
        fast.energy()
    );

    let constant = FiniteFunction::constant(&base, Complex64::new(2.0, 0.0));
    println!("constant 2 has f^(0) = {}", analyze_fast(&constant).coeffs()[0]);
    Ok(())
}

//! Dirichlet kernels by definition and by the product formula, their L1
//! norms, and the Lebesgue constants at the indices with alternating digits.

use vlab::group::BaseSequence;
use vlab::kernels::{kernel_report, lebesgue_constant, q_index, QVariant};

fn main() -> vlab::Result<()> {
    let walsh = BaseSequence::walsh(6)?;
    println!("{:>4} {:>10} {:>12}", "n", "||D_n||_1", "route gap");
    for n in [1, 2, 3, 4, 5, 8, 11, 21, 32, 43, 64] {
        let r = kernel_report(&walsh, n)?;
        println!("{n:>4} {:>10.6} {:>12.2e}", r.l1_norm, r.route_agreement);
    }

    let base = BaseSequence::walsh(12)?;
    println!("\nLebesgue constants on {base}");
    for k in 1..=5 {
        let q = q_index(&base, k, QVariant::EvenSum)?;
        let l = lebesgue_constant(&base, q.value())?;
        println!(
            "  k = {k}: q = {:5}, ||D_q||_1 = {l:.6}, / k = {:.4}",
            q.value(),
            l / k as f64
        );
    }

    let mixed = BaseSequence::parse("3,2,3,2,3")?;
    let q = q_index(&mixed, 2, QVariant::EvenSum)?;
    println!("\n{mixed}: q_2 = {} with digits {:?}", q.value(), q.digits());
    Ok(())
}

//! Atoms, their diagnostics, and the atomic bound ||f||_{H_p}^p <= sum |mu|^p.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vlab::counterexamples::block_hardy_p;
use vlab::group::{BaseSequence, IntervalSpec};
use vlab::hardy::{atomic_assemble, hardy_norm, modulus, validate_atom, AtomSpec, MartingaleApprox, Space};
use vlab::kernels::dirichlet_paley;

fn main() -> vlab::Result<()> {
    let base = BaseSequence::parse("2,3,2,3,2")?;
    let p = 0.5;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut atoms = Vec::new();
    for (depth, anchor) in [(1, 0), (2, 7), (3, 40), (4, 60)] {
        let support = IntervalSpec::new(depth, base.unrank(anchor)?)?;
        let a = AtomSpec::random(support, p, &mut rng)?;
        let d = validate_atom(&a);
        println!(
            "atom on I_{depth}({anchor}): sup {:.3} <= {:.3}, mean {:.1e}, leak {:.1e}",
            d.sup, d.bound, d.mean, d.leak
        );
        atoms.push(a);
    }
    let coeffs = [1.0, -0.5, 0.25, 0.125];
    let asm = atomic_assemble(&base, p, &coeffs, &atoms)?;
    println!(
        "||f||^p = {:.5}, sum |mu|^p = {:.5}, constant {:.4}",
        asm.hardy_p,
        asm.coefficient_mass,
        asm.constant()
    );

    let walsh = BaseSequence::walsh(8)?;
    for j in 1..6 {
        let block = &dirichlet_paley(&walsh, j + 1)? - &dirichlet_paley(&walsh, j)?;
        let h = hardy_norm(&MartingaleApprox::new(block.clone()), p)?.powf(p);
        println!(
            "block [M_{j}, M_{}): ||.||^p = {h:.6} (closed form {:.6}), H_p modulus at level {j}: {:.4}",
            j + 1,
            block_hardy_p(2, walsh.power(j), p),
            modulus(&block, j, Space::Hp(p))?
        );
    }
    Ok(())
}

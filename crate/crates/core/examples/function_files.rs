//! Writes a function, its spectrum and an atomic decomposition to JSON and
//! reads them back.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vlab::group::{BaseSequence, IntervalSpec, DEFAULT_CEILING};
use vlab::hardy::AtomSpec;
use vlab::io::{read_decomposition, read_function, write_decomposition, write_function, write_spectrum, Decomposition};
use vlab::transform::analyze_fast;

fn main() -> vlab::Result<()> {
    let dir = std::env::temp_dir().join("vlab-function-files");
    std::fs::create_dir_all(&dir)?;
    let base = BaseSequence::parse("3,2,3")?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);

    let atoms = vec![
        AtomSpec::random(IntervalSpec::new(1, base.unrank(2)?)?, 0.5, &mut rng)?,
        AtomSpec::random(IntervalSpec::new(2, base.unrank(5)?)?, 0.5, &mut rng)?,
    ];
    let decomposition = Decomposition {
        p: 0.5,
        coeffs: vec![0.75, -0.25],
        atoms,
    };
    let path = dir.join("pair.json");
    write_decomposition(&path, &decomposition)?;
    let back = read_decomposition(&path, DEFAULT_CEILING)?;
    let asm = back.assemble(&base)?;
    println!("decomposition round trip equal: {}", back == decomposition);

    let f = asm.martingale.terminal();
    write_function(&dir.join("f.json"), f)?;
    write_spectrum(&dir.join("f.spectrum.json"), &analyze_fast(f))?;
    let g = read_function(&dir.join("f.json"), DEFAULT_CEILING)?;
    println!("function round trip equal: {}", &g == f);
    println!(
        "||f||_H^p = {:.5} <= {:.5}; files in {}",
        asm.hardy_p,
        asm.coefficient_mass,
        dir.display()
    );
    Ok(())
}

//! Shell integrals of |D_n| against a small coset, normalized by M_s / M_N.
//! The normalized values stay bounded as N grows.

use vlab::experiments::lemma2_table;
use vlab::group::BaseSequence;
use vlab::kernels::lemma2_profile;

fn main() -> vlab::Result<()> {
    let base = BaseSequence::walsh(6)?;
    for n in [5, 21, 43, 63] {
        let rows = lemma2_profile(&base, n, 6)?;
        let cells: Vec<String> = rows.iter().map(|r| format!("{:.3}", r.max_ratio)).collect();
        println!("D_{n:<3} shells 0..6: {}", cells.join(" "));
    }
    for n in [4, 6, 8] {
        let (_, worst) = lemma2_table(&BaseSequence::walsh(n)?, 0)?;
        println!("walsh:{n}: largest ratio over all n and shells {worst:.4}");
    }
    let (_, worst) = lemma2_table(&BaseSequence::parse("2,3,2,3")?, 0)?;
    println!("2,3,2,3: largest ratio {worst:.4}");
    Ok(())
}

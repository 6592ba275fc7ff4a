//! Generalized Rademacher functions, the Vilenkin system and the
//! Vilenkin-Chrestenson transform.
//!
//! Analysis uses conjugated characters, `f^(k) = int f conj(psi_k) dmu`;
//! synthesis uses them unconjugated. Coefficient `k` is stored at position
//! `k`, so spectra share the rank layout of functions.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Result, VilenkinError};
use crate::function::FiniteFunction;
use crate::group::{check_below, BaseSequence, GroupPoint, VilenkinIndex};

/// How many successive twiddle multiplications run before the running power
/// is pulled back onto the unit circle.
const RENORM_PERIOD: usize = 8;

/// The Vilenkin-Fourier coefficients `f^(0..M_N)` of a finite function.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    base: BaseSequence,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(base: &BaseSequence, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != base.order() {
            return Err(VilenkinError::LengthMismatch {
                expected: base.order(),
                got: coeffs.len(),
            });
        }
        Ok(Self {
            base: base.clone(),
            coeffs,
        })
    }

    pub fn zeros(base: &BaseSequence) -> Self {
        Self {
            base: base.clone(),
            coeffs: vec![Complex64::new(0.0, 0.0); base.order()],
        }
    }

    /// The spectrum of `psi_k`.
    pub fn unit(base: &BaseSequence, k: usize) -> Result<Self> {
        check_below("coefficient index", k, base.order())?;
        let mut s = Self::zeros(base);
        s.coeffs[k] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    /// Coefficient `1` on `lo..hi`, zero elsewhere.
    pub fn indicator(base: &BaseSequence, lo: usize, hi: usize) -> Result<Self> {
        if lo > hi || hi > base.order() {
            return Err(VilenkinError::Domain(format!(
                "index range {lo}..{hi} does not fit in 0..{}",
                base.order()
            )));
        }
        let mut s = Self::zeros(base);
        s.coeffs[lo..hi].fill(Complex64::new(1.0, 0.0));
        Ok(s)
    }

    pub fn base(&self) -> &BaseSequence {
        &self.base
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Keeps coefficients `0..n` and zeroes the rest.
    pub fn truncated(&self, n: usize) -> Self {
        let mut s = self.clone();
        let n = n.min(s.coeffs.len());
        s.coeffs[n..].fill(Complex64::new(0.0, 0.0));
        s
    }

    /// `sum_k |f^(k)|^2`.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// `exp(2 pi i phase / modulus)`, exact at quarter turns.
pub(crate) fn unit_root(phase: usize, modulus: usize) -> Complex64 {
    let phase = phase % modulus;
    if (4 * phase).is_multiple_of(modulus) {
        return match 4 * phase / modulus {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, TAU * phase as f64 / modulus as f64)
}

/// `r_k(x) = exp(2 pi i x_k / m_k)`.
pub fn rademacher(k: usize, x: &GroupPoint) -> Result<Complex64> {
    let base = x.base();
    check_below("coordinate", k, base.resolution())?;
    Ok(unit_root(x.digits()[k], base.base(k)))
}

/// `psi_n(x) = prod_k r_k(x)^{n_k}`.
pub fn vilenkin(n: &VilenkinIndex, x: &GroupPoint) -> Result<Complex64> {
    let base = x.base();
    check_below("character index", n.value(), base.order())?;
    let modulus = base.phase_modulus();
    let phase: usize = (0..base.resolution())
        .map(|k| n.digit(k) * x.digits()[k] * (modulus / base.base(k)))
        .sum();
    Ok(unit_root(phase, modulus))
}

/// Tabulated roots of unity for evaluating whole rows `x -> psi_n(x)`.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    base: BaseSequence,
    roots: Vec<Complex64>,
}

impl CharacterTable {
    pub fn new(base: &BaseSequence) -> Self {
        let modulus = base.phase_modulus();
        Self {
            base: base.clone(),
            roots: (0..modulus).map(|j| unit_root(j, modulus)).collect(),
        }
    }

    pub fn base(&self) -> &BaseSequence {
        &self.base
    }

    /// `psi_n(x)` for the point of rank `r`.
    pub fn value(&self, n: usize, r: usize) -> Complex64 {
        let modulus = self.roots.len();
        let phase: usize = (0..self.base.resolution())
            .map(|k| {
                let step = modulus / self.base.base(k);
                self.base.digit(n, k) * self.base.digit(r, k) % self.base.base(k) * step
            })
            .sum();
        self.roots[phase % modulus]
    }

    /// Writes `psi_n(x)` for every rank into `out`.
    ///
    /// Built coordinate by coordinate: the row on the first `M_{k+1}` ranks is
    /// the row on the first `M_k` ranks times `r_k^{n_k x_k}`.
    pub fn fill_row(&self, n: usize, out: &mut [Complex64]) {
        assert_eq!(out.len(), self.base.order());
        let modulus = self.roots.len();
        out[0] = Complex64::new(1.0, 0.0);
        for k in 0..self.base.resolution() {
            let m = self.base.base(k);
            let width = self.base.power(k);
            let step = self.base.digit(n, k) * (modulus / m);
            for d in 1..m {
                let twiddle = self.roots[(d * step) % modulus];
                let (head, tail) = out.split_at_mut(d * width);
                for (dst, src) in tail[..width].iter_mut().zip(&head[..width]) {
                    *dst = src * twiddle;
                }
            }
        }
    }

    pub fn row(&self, n: usize) -> FiniteFunction {
        let mut values = vec![Complex64::new(0.0, 0.0); self.base.order()];
        self.fill_row(n, &mut values);
        FiniteFunction::new(&self.base, values).expect("row has group order length")
    }
}

/// Direct evaluation of every coefficient, `O(M_N^2)`. Serves as the oracle
/// for [`analyze_fast`].
pub fn analyze_naive(f: &FiniteFunction) -> Spectrum {
    let base = f.base();
    let table = CharacterTable::new(base);
    let m = base.order();
    let mut row = vec![Complex64::new(0.0, 0.0); m];
    let coeffs = (0..m)
        .map(|k| {
            table.fill_row(k, &mut row);
            let sum: Complex64 = f.values().iter().zip(&row).map(|(v, c)| v * c.conj()).sum();
            sum / m as f64
        })
        .collect();
    Spectrum {
        base: base.clone(),
        coeffs,
    }
}

/// Axis-wise transform: one size-`m_k` DFT along each coordinate,
/// `O(M_N sum_k m_k)`.
pub fn analyze_fast(f: &FiniteFunction) -> Spectrum {
    let mut coeffs = f.values().to_vec();
    apply_axes(&mut coeffs, f.base(), Direction::Analysis);
    Spectrum {
        base: f.base().clone(),
        coeffs,
    }
}

/// `sum_k s_k psi_k`, the inverse of [`analyze_fast`].
pub fn synthesize(s: &Spectrum) -> FiniteFunction {
    let mut values = s.coeffs.clone();
    apply_axes(&mut values, &s.base, Direction::Synthesis);
    FiniteFunction::new(&s.base, values).expect("spectrum has group order length")
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Direction {
    Analysis,
    Synthesis,
}

/// `w^0..w^{m-1}` for `w = exp(2 pi i / m)`, by repeated multiplication.
fn twiddles(m: usize) -> Vec<Complex64> {
    let root = match m {
        2 => Complex64::new(-1.0, 0.0),
        4 => Complex64::new(0.0, 1.0),
        _ => Complex64::from_polar(1.0, TAU / m as f64),
    };
    let mut out = Vec::with_capacity(m);
    let mut acc = Complex64::new(1.0, 0.0);
    for j in 0..m {
        out.push(acc);
        acc *= root;
        if (j + 1) % RENORM_PERIOD == 0 {
            acc /= acc.norm();
        }
    }
    out
}

fn apply_axes(values: &mut [Complex64], base: &BaseSequence, dir: Direction) {
    let order = base.order();
    let mut line = vec![Complex64::new(0.0, 0.0); base.max_base()];
    for k in 0..base.resolution() {
        let m = base.base(k);
        let stride = base.power(k);
        let block = base.power(k + 1);
        let mut tw = twiddles(m);
        let scale = match dir {
            Direction::Analysis => {
                tw.iter_mut().for_each(|w| *w = w.conj());
                1.0 / m as f64
            }
            Direction::Synthesis => 1.0,
        };
        for start in (0..order).step_by(block) {
            for lo in 0..stride {
                let off = start + lo;
                for (d, slot) in line[..m].iter_mut().enumerate() {
                    *slot = values[off + d * stride];
                }
                for u in 0..m {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (d, v) in line[..m].iter().enumerate() {
                        acc += v * tw[(u * d) % m];
                    }
                    values[off + u * stride] = acc * scale;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::group_add;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn m232() -> BaseSequence {
        BaseSequence::new(vec![2, 3, 2]).unwrap()
    }

    fn random_fn(base: &BaseSequence, rng: &mut ChaCha8Rng) -> FiniteFunction {
        FiniteFunction::from_fn(base, |_| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    }

    #[test]
    fn rademacher_examples() {
        let w = BaseSequence::walsh(3).unwrap();
        let x = GroupPoint::new(&w, vec![1, 0, 0]).unwrap();
        assert_eq!(rademacher(0, &x).unwrap(), Complex64::new(-1.0, 0.0));
        assert!(rademacher(3, &x).is_err());

        let b = m232();
        let x = GroupPoint::new(&b, vec![0, 1, 0]).unwrap();
        let r = rademacher(1, &x).unwrap();
        assert!((r - Complex64::from_polar(1.0, TAU / 3.0)).norm() < 1e-15);
        assert!((r.powu(3) - 1.0).norm() < 1e-14);
    }

    #[test]
    fn rademacher_is_a_character() {
        let b = BaseSequence::new(vec![3, 2, 5, 2]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let x = b.unrank(rng.gen_range(0..b.order())).unwrap();
            let y = b.unrank(rng.gen_range(0..b.order())).unwrap();
            let xy = group_add(&x, &y).unwrap();
            for k in 0..b.resolution() {
                let lhs = rademacher(k, &xy).unwrap();
                let rhs = rademacher(k, &x).unwrap() * rademacher(k, &y).unwrap();
                assert!((lhs - rhs).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn vilenkin_examples() {
        let b = m232();
        let zero = VilenkinIndex::new(&b, 0).unwrap();
        for r in 0..b.order() {
            assert_eq!(
                vilenkin(&zero, &b.unrank(r).unwrap()).unwrap(),
                Complex64::new(1.0, 0.0)
            );
        }
        let n = VilenkinIndex::new(&b, 4).unwrap();
        let x = GroupPoint::new(&b, vec![0, 1, 0]).unwrap();
        let v = vilenkin(&n, &x).unwrap();
        assert!((v - Complex64::from_polar(1.0, 2.0 * TAU / 3.0)).norm() < 1e-15);
        let top = VilenkinIndex::new(&b, 12).unwrap();
        assert!(vilenkin(&top, &x).is_err());
    }

    #[test]
    fn table_matches_pointwise_definition() {
        let b = BaseSequence::new(vec![3, 2, 4]).unwrap();
        let table = CharacterTable::new(&b);
        for n in 0..b.order() {
            let idx = VilenkinIndex::new(&b, n).unwrap();
            let row = table.row(n);
            for r in 0..b.order() {
                let x = b.unrank(r).unwrap();
                let direct = vilenkin(&idx, &x).unwrap();
                assert!((row.value(r) - direct).norm() < 1e-14);
                assert!((table.value(n, r) - direct).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn gram_matrix_is_identity() {
        for b in [
            m232(),
            BaseSequence::walsh(6).unwrap(),
            BaseSequence::new(vec![3, 3, 2, 3]).unwrap(),
        ] {
            let table = CharacterTable::new(&b);
            let rows: Vec<_> = (0..b.order()).map(|n| table.row(n)).collect();
            for (a, ra) in rows.iter().enumerate() {
                for (c, rc) in rows.iter().enumerate() {
                    let ip: Complex64 = ra
                        .values()
                        .iter()
                        .zip(rc.values())
                        .map(|(x, y)| x * y.conj())
                        .sum::<Complex64>()
                        / b.order() as f64;
                    let expected = if a == c { 1.0 } else { 0.0 };
                    assert!((ip - expected).norm() < 1e-9, "<psi_{a}, psi_{c}> = {ip}");
                }
            }
        }
    }

    #[test]
    fn character_property_on_random_triples() {
        let b = BaseSequence::new(vec![2, 3, 5, 2, 3]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let n = VilenkinIndex::new(&b, rng.gen_range(0..b.order())).unwrap();
            let x = b.unrank(rng.gen_range(0..b.order())).unwrap();
            let y = b.unrank(rng.gen_range(0..b.order())).unwrap();
            let lhs = vilenkin(&n, &group_add(&x, &y).unwrap()).unwrap();
            let rhs = vilenkin(&n, &x).unwrap() * vilenkin(&n, &y).unwrap();
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn naive_analysis_examples() {
        let b = m232();
        let table = CharacterTable::new(&b);
        let s = analyze_naive(&table.row(5));
        for (k, c) in s.coeffs().iter().enumerate() {
            let expected = if k == 5 { 1.0 } else { 0.0 };
            assert!((c - expected).norm() < 1e-12);
        }

        let w = BaseSequence::walsh(2).unwrap();
        let delta = FiniteFunction::point_mass(&w, 0, 1.0);
        for c in analyze_naive(&delta).coeffs() {
            assert!((c - 0.25).norm() < 1e-15);
        }
    }

    #[test]
    fn fast_matches_naive_on_basis_indicators() {
        let b = m232();
        for r in 0..b.order() {
            let f = FiniteFunction::point_mass(&b, r, 1.0);
            let naive = analyze_naive(&f);
            let fast = analyze_fast(&f);
            assert!(relative(&naive, &fast) < 1e-9);
        }
    }

    #[test]
    fn fast_matches_naive_on_random_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for b in [
            BaseSequence::new(vec![2, 3, 2, 3, 2, 3]).unwrap(),
            BaseSequence::new(vec![5, 2, 7]).unwrap(),
            BaseSequence::walsh(8).unwrap(),
        ] {
            for _ in 0..5 {
                let f = random_fn(&b, &mut rng);
                let fast = analyze_fast(&f);
                assert!(relative(&analyze_naive(&f), &fast) < 1e-9);
                assert!(synthesize(&fast).relative_discrepancy(&f) < 1e-9);
                let energy = f.lp_norm(2.0).unwrap().powi(2);
                assert!((fast.energy() - energy).abs() < 1e-9 * energy);
            }
        }
    }

    #[test]
    fn synthesis_of_unit_spectrum_is_a_character() {
        let b = BaseSequence::new(vec![3, 2, 3]).unwrap();
        let table = CharacterTable::new(&b);
        for k in 0..b.order() {
            let psi = synthesize(&Spectrum::unit(&b, k).unwrap());
            assert!(psi.relative_discrepancy(&table.row(k)) < 1e-12);
        }
    }

    #[test]
    fn twiddles_stay_on_the_unit_circle() {
        for m in [2, 3, 5, 7, 16, 31] {
            let tw = twiddles(m);
            for (j, w) in tw.iter().enumerate() {
                assert!((w - Complex64::from_polar(1.0, TAU * j as f64 / m as f64)).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn spectrum_length_is_checked() {
        let b = m232();
        assert!(Spectrum::new(&b, vec![Complex64::default(); 11]).is_err());
        assert!(Spectrum::indicator(&b, 3, 13).is_err());
        assert!(Spectrum::unit(&b, 12).is_err());
    }

    fn relative(a: &Spectrum, b: &Spectrum) -> f64 {
        crate::function::relative_discrepancy(a.coeffs(), b.coeffs())
    }
}

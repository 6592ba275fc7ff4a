//! Partial sums `S_n f = sum_{k<n} f^(k) psi_k` and the operators built on
//! them.

use num_complex::Complex64;

use crate::error::{Result, VilenkinError};
use crate::function::{check_exponent, FiniteFunction};
use crate::group::{check_at_most, BaseSequence};
use crate::kernels::dirichlet;
use crate::transform::{analyze_fast, synthesize, CharacterTable};

/// `S_n f` by truncating the spectrum. `S_0 f = 0`.
pub fn partial_sum(f: &FiniteFunction, n: usize) -> Result<FiniteFunction> {
    check_at_most("partial sum index", n, f.base().order())?;
    Ok(synthesize(&analyze_fast(f).truncated(n)))
}

/// `S_n f(x) = int f(t) D_n(x - t) dmu(t)`, `O(M_N^2)`.
pub fn partial_sum_conv(f: &FiniteFunction, n: usize) -> Result<FiniteFunction> {
    let base = f.base();
    check_at_most("partial sum index", n, base.order())?;
    if n == 0 {
        return Ok(FiniteFunction::zeros(base));
    }
    let d = dirichlet(base, n)?;
    let m = base.order() as f64;
    Ok(FiniteFunction::from_fn(base, |x| {
        f.values()
            .iter()
            .enumerate()
            .map(|(t, v)| v * d.value(base.sub_ranks(x, t)))
            .sum::<Complex64>()
            / m
    }))
}

/// `E_j f`: every `I_j` coset replaced by its mean. Equals `S_{M_j} f`.
pub fn conditional_expectation(f: &FiniteFunction, j: usize) -> Result<FiniteFunction> {
    let base = f.base();
    check_at_most("level", j, base.resolution())?;
    let width = base.power(j);
    let mut sums = vec![Complex64::new(0.0, 0.0); width];
    for (r, v) in f.values().iter().enumerate() {
        sums[r % width] += v;
    }
    let count = (base.order() / width) as f64;
    Ok(FiniteFunction::from_fn(base, |r| sums[r % width] / count))
}

/// The weight `(n+1)^{1/p-1} log^{[p]}(n+1)` of the maximal operator
/// `S~_p*`. Logarithms are natural.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightSpec {
    p: f64,
}

impl WeightSpec {
    pub fn new(p: f64) -> Result<Self> {
        if p > 0.0 && p <= 1.0 {
            Ok(Self { p })
        } else {
            Err(VilenkinError::InvalidExponent(p))
        }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// `[p]`: 1 at `p = 1`, otherwise 0.
    pub fn bracket_p(&self) -> u32 {
        self.p.floor() as u32
    }

    pub fn weight(&self, n: usize) -> f64 {
        let x = (n + 1) as f64;
        x.powf(1.0 / self.p - 1.0) * x.ln().powi(self.bracket_p() as i32)
    }
}

/// Walks `S_1 f, S_2 f, ..., S_{M_N} f`, adding one term per step.
pub struct PartialSumSweep {
    table: CharacterTable,
    coeffs: Vec<Complex64>,
    acc: Vec<Complex64>,
    row: Vec<Complex64>,
    n: usize,
}

impl PartialSumSweep {
    pub fn new(f: &FiniteFunction) -> Self {
        let m = f.base().order();
        Self {
            table: CharacterTable::new(f.base()),
            coeffs: analyze_fast(f).into_coeffs(),
            acc: vec![Complex64::new(0.0, 0.0); m],
            row: vec![Complex64::new(0.0, 0.0); m],
            n: 0,
        }
    }

    pub fn base(&self) -> &BaseSequence {
        self.table.base()
    }

    /// Advances to the next `n` and returns `(n, S_n f)`.
    pub fn advance(&mut self) -> Option<(usize, &[Complex64])> {
        if self.n >= self.coeffs.len() {
            return None;
        }
        let c = self.coeffs[self.n];
        if c != Complex64::new(0.0, 0.0) {
            self.table.fill_row(self.n, &mut self.row);
            for (a, r) in self.acc.iter_mut().zip(&self.row) {
                *a += c * r;
            }
        }
        self.n += 1;
        Some((self.n, &self.acc))
    }
}

/// `S* f = sup_n |S_n f|`. The supremum runs over `1 <= n <= M_N`; beyond
/// that `S_n f = f`.
pub fn maximal_s(f: &FiniteFunction) -> FiniteFunction {
    sup_over_partial_sums(f, |_| 1.0)
}

/// `S~_p* f = sup_n |S_n f| / weight(n)`.
pub fn weighted_maximal(f: &FiniteFunction, w: &WeightSpec) -> FiniteFunction {
    sup_over_partial_sums(f, |n| w.weight(n))
}

fn sup_over_partial_sums(f: &FiniteFunction, weight: impl Fn(usize) -> f64) -> FiniteFunction {
    let mut best = vec![0.0f64; f.len()];
    let mut sweep = PartialSumSweep::new(f);
    while let Some((n, s)) = sweep.advance() {
        let w = weight(n);
        for (b, v) in best.iter_mut().zip(s) {
            *b = b.max(v.norm() / w);
        }
    }
    FiniteFunction::new(f.base(), best.into_iter().map(|v| Complex64::new(v, 0.0)).collect()).expect("order length")
}

/// `sum_{k=1}^K ||S_k f||_p^p / k^{2-p}` with its running totals.
#[derive(Clone, Debug, PartialEq)]
pub struct StrongSum {
    pub total: f64,
    /// `partials[i]` is the sum up to `k = i + 1`.
    pub partials: Vec<f64>,
}

pub fn strong_sum(f: &FiniteFunction, p: f64, k_max: usize) -> Result<StrongSum> {
    if !(p > 0.0 && p < 1.0) {
        return Err(VilenkinError::InvalidExponent(p));
    }
    check_at_most("K", k_max, f.base().order())?;
    let m = f.len() as f64;
    let mut partials = Vec::with_capacity(k_max);
    let mut total = 0.0;
    let mut sweep = PartialSumSweep::new(f);
    while let Some((k, s)) = sweep.advance() {
        if k > k_max {
            break;
        }
        let norm_p: f64 = s.iter().map(|v| v.norm().powf(p)).sum::<f64>() / m;
        total += norm_p / (k as f64).powf(2.0 - p);
        partials.push(total);
    }
    Ok(StrongSum { total, partials })
}

/// `(1 / log n) sum_{k=1}^n ||S_k f - f||_1 / k`.
pub fn gat_log_mean(f: &FiniteFunction, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(VilenkinError::Domain(format!("log mean needs n >= 2, got {n}")));
    }
    check_at_most("n", n, f.base().order())?;
    Ok(gat_log_means(f)[n - 2])
}

/// The log means for every `n = 2..=M_N`, in one sweep.
pub fn gat_log_means(f: &FiniteFunction) -> Vec<f64> {
    let m = f.len() as f64;
    let mut out = Vec::with_capacity(f.len().saturating_sub(1));
    let mut running = 0.0;
    let mut sweep = PartialSumSweep::new(f);
    while let Some((k, s)) = sweep.advance() {
        let l1: f64 = s.iter().zip(f.values()).map(|(a, b)| (a - b).norm()).sum::<f64>() / m;
        running += l1 / k as f64;
        if k >= 2 {
            out.push(running / (k as f64).ln());
        }
    }
    out
}

/// `||S_n f - f||_p` for every `n = 1..=M_N`.
pub fn approximation_errors(f: &FiniteFunction, p: f64) -> Result<Vec<f64>> {
    check_exponent(p)?;
    let m = f.len() as f64;
    let mut out = Vec::with_capacity(f.len());
    let mut sweep = PartialSumSweep::new(f);
    while let Some((_, s)) = sweep.advance() {
        let v: f64 = s
            .iter()
            .zip(f.values())
            .map(|(a, b)| (a - b).norm().powf(p))
            .sum::<f64>()
            / m;
        out.push(v.powf(1.0 / p));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::dirichlet_paley;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_fn(base: &BaseSequence, rng: &mut ChaCha8Rng) -> FiniteFunction {
        FiniteFunction::from_fn(base, |_| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    }

    #[test]
    fn partial_sums_of_characters() {
        let b = BaseSequence::new(vec![2, 3, 2]).unwrap();
        let table = CharacterTable::new(&b);
        for k in 0..b.order() {
            let psi = table.row(k);
            for n in 0..=b.order() {
                let s = partial_sum(&psi, n).unwrap();
                let expected = if k < n { psi.clone() } else { FiniteFunction::zeros(&b) };
                assert!((&s - &expected).linf_norm() < 1e-12);
            }
        }
        assert!(partial_sum(&table.row(0), 13).is_err());
    }

    #[test]
    fn full_partial_sum_is_identity() {
        let b = BaseSequence::new(vec![3, 2, 2, 3]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let f = random_fn(&b, &mut rng);
            assert!(partial_sum(&f, b.order()).unwrap().relative_discrepancy(&f) < 1e-12);
            assert_eq!(partial_sum(&f, 0).unwrap().linf_norm(), 0.0);
        }
    }

    #[test]
    fn convolution_route_agrees() {
        let b = BaseSequence::new(vec![2, 3, 2]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..5 {
            let f = random_fn(&b, &mut rng);
            for n in 0..=b.order() {
                let a = partial_sum(&f, n).unwrap();
                let c = partial_sum_conv(&f, n).unwrap();
                assert!((&a - &c).linf_norm() <= 1e-9 * f.linf_norm());
            }
        }
    }

    #[test]
    fn convolution_with_point_mass_gives_kernel() {
        let b = BaseSequence::new(vec![3, 2, 2]).unwrap();
        let delta = FiniteFunction::point_mass(&b, 0, b.order() as f64);
        for n in 1..=b.order() {
            let s = partial_sum_conv(&delta, n).unwrap();
            assert!(s.relative_discrepancy(&dirichlet(&b, n).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn conditional_expectation_examples() {
        let w = BaseSequence::walsh(3).unwrap();
        let delta = FiniteFunction::point_mass(&w, 0, 1.0);
        let e1 = conditional_expectation(&delta, 1).unwrap();
        for r in 0..8 {
            let expected = if r % 2 == 0 { 0.25 } else { 0.0 };
            assert!((e1.value(r) - expected).norm() < 1e-15);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let b = BaseSequence::new(vec![2, 3, 2, 3]).unwrap();
        let f = random_fn(&b, &mut rng);
        assert_eq!(conditional_expectation(&f, 4).unwrap(), f);
        for j in 0..=4 {
            let e = conditional_expectation(&f, j).unwrap();
            let s = partial_sum(&f, b.power(j)).unwrap();
            assert!(e.relative_discrepancy(&s) < 1e-9);
            let conv = partial_sum_conv(&f, b.power(j)).unwrap();
            assert!(e.relative_discrepancy(&conv) < 1e-9);
            for k in 0..=4 {
                let ek = conditional_expectation(&e, k).unwrap();
                let direct = conditional_expectation(&f, j.min(k)).unwrap();
                assert!(ek.relative_discrepancy(&direct) < 1e-12);
            }
        }
        assert!(conditional_expectation(&f, 5).is_err());
    }

    #[test]
    fn martingale_property() {
        let b = BaseSequence::new(vec![3, 2, 3, 2]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let f = random_fn(&b, &mut rng);
        for j in 0..4 {
            let next = partial_sum(&f, b.power(j + 1)).unwrap();
            let lhs = conditional_expectation(&next, j).unwrap();
            let rhs = partial_sum(&f, b.power(j)).unwrap();
            assert!(lhs.relative_discrepancy(&rhs) < 1e-9);
        }
    }

    #[test]
    fn weights() {
        let half = WeightSpec::new(0.5).unwrap();
        assert_eq!(half.bracket_p(), 0);
        assert_eq!(half.weight(2), 3.0);
        for n in 1..100 {
            assert!(half.weight(n) >= 1.0);
        }
        let one = WeightSpec::new(1.0).unwrap();
        assert_eq!(one.bracket_p(), 1);
        assert!((one.weight(1) - 2f64.ln()).abs() < 1e-15);
        assert!((one.weight(9) - 10f64.ln()).abs() < 1e-15);
        assert!(WeightSpec::new(0.0).is_err());
        assert!(WeightSpec::new(1.5).is_err());
    }

    #[test]
    fn maximal_operators_on_characters() {
        let b = BaseSequence::walsh(4).unwrap();
        let table = CharacterTable::new(&b);
        let s0 = maximal_s(&table.row(0));
        assert!(s0.values().iter().all(|v| (v.re - 1.0).abs() < 1e-15));
        let w = WeightSpec::new(0.5).unwrap();
        let s1 = weighted_maximal(&table.row(1), &w);
        for v in s1.values() {
            assert!((v.re - 1.0 / w.weight(2)).abs() < 1e-14);
        }
    }

    #[test]
    fn maximal_dominates_every_partial_sum() {
        let b = BaseSequence::new(vec![2, 3, 2]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let f = random_fn(&b, &mut rng);
        let sup = maximal_s(&f);
        let mut attained = vec![false; b.order()];
        for n in 1..=b.order() {
            let s = partial_sum(&f, n).unwrap();
            for (r, hit) in attained.iter_mut().enumerate() {
                assert!(s.value(r).norm() <= sup.value(r).re + 1e-12);
                *hit |= (s.value(r).norm() - sup.value(r).re).abs() < 1e-12;
            }
        }
        assert!(attained.iter().all(|&a| a));
    }

    #[test]
    fn strong_sum_examples() {
        let w = BaseSequence::walsh(3).unwrap();
        let table = CharacterTable::new(&w);
        let s = strong_sum(&table.row(1), 0.5, 4).unwrap();
        let expected = 2f64.powf(-1.5) + 3f64.powf(-1.5) + 4f64.powf(-1.5);
        assert!((s.total - expected).abs() < 1e-14);
        assert!((s.total - 0.6711).abs() < 1e-4);
        assert_eq!(s.partials.len(), 4);
        assert_eq!(s.partials[0], 0.0);

        let s = strong_sum(&table.row(0), 0.25, 8).unwrap();
        let expected: f64 = (1..=8).map(|k| (k as f64).powf(0.25 - 2.0)).sum();
        assert!((s.total - expected).abs() < 1e-14);
        assert!(strong_sum(&table.row(0), 1.0, 4).is_err());
        assert!(strong_sum(&table.row(0), 0.5, 9).is_err());
    }

    #[test]
    fn log_means() {
        let w = BaseSequence::walsh(6).unwrap();
        let table = CharacterTable::new(&w);
        let psi1 = table.row(1);
        // Only k = 1 contributes: ||S_1 psi_1 - psi_1||_1 = 1.
        let v = gat_log_mean(&psi1, 64).unwrap();
        assert!((v - 1.0 / 64f64.ln()).abs() < 1e-14);
        assert!(gat_log_mean(&psi1, 1).is_err());
        assert!(gat_log_mean(&psi1, 65).is_err());

        let d8 = dirichlet_paley(&w, 3).unwrap();
        let n = 20;
        let direct: f64 = (1..=n)
            .map(|k| (&d8 - &dirichlet(&w, k.min(8)).unwrap()).lp_norm(1.0).unwrap() / k as f64)
            .sum::<f64>()
            / (n as f64).ln();
        let got = gat_log_mean(&d8, n).unwrap();
        assert!((got - direct).abs() < 1e-12, "{got} {direct}");
    }
}

//! Divergence constructions: kernel blocks, the two truncated martingales
//! with slowly decaying moduli, and weight presets.

use std::fmt;

use crate::error::{Result, VilenkinError};
use crate::function::FiniteFunction;
use crate::group::{BaseSequence, IntervalSpec};
use crate::hardy::{atomic_assemble, hardy_norm, modulus, Assembly, AtomSpec, MartingaleApprox, Space};
use crate::kernels::{dirichlet_paley, q_index, QVariant};
use crate::sums::{partial_sum, PartialSumSweep};
use crate::transform::analyze_fast;

fn require_resolution(base: &BaseSequence, needed: usize, what: &str) -> Result<()> {
    if needed > base.resolution() {
        return Err(VilenkinError::Domain(format!(
            "{what} needs resolution {needed}, base has {}",
            base.resolution()
        )));
    }
    Ok(())
}

/// `D_{M_{j+1}} - D_{M_j}`, computed from the closed form of both kernels.
fn shell_block(base: &BaseSequence, j: usize) -> Result<FiniteFunction> {
    Ok(&dirichlet_paley(base, j + 1)? - &dirichlet_paley(base, j)?)
}

/// `f_k = D_{M_{2k+1}} - D_{M_{2k}}`, whose spectrum is the indicator of
/// `[M_{2k}, M_{2k+1})`.
pub fn kernel_block(base: &BaseSequence, k: usize) -> Result<MartingaleApprox> {
    require_resolution(base, 2 * k + 1, "kernel block")?;
    Ok(MartingaleApprox::new(shell_block(base, 2 * k)?))
}

/// Which weight `phi` divides the partial sums.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhiKind {
    /// `phi = 1`.
    Const1,
    /// `log(n+1)`.
    Log,
    /// `w_p(n) / log log(n+16)`: the quotient `w_p / phi` still diverges,
    /// as slowly as the presets allow.
    LogLog,
    /// `w_p(n)` itself, so the quotient stays bounded.
    Critical,
}

impl PhiKind {
    pub const ALL: [PhiKind; 4] = [PhiKind::Const1, PhiKind::Log, PhiKind::LogLog, PhiKind::Critical];

    pub fn name(self) -> &'static str {
        match self {
            PhiKind::Const1 => "const1",
            PhiKind::Log => "log",
            PhiKind::LogLog => "loglog",
            PhiKind::Critical => "critical",
        }
    }
}

/// A nondecreasing weight `phi: N+ -> [1, inf)`. Presets are clamped below
/// at 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhiWeight {
    kind: PhiKind,
    p: f64,
}

impl PhiWeight {
    pub fn new(kind: PhiKind, p: f64) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(VilenkinError::InvalidExponent(p));
        }
        Ok(Self { kind, p })
    }

    pub fn parse(name: &str, p: f64) -> Result<Self> {
        let kind = PhiKind::ALL
            .into_iter()
            .find(|k| k.name() == name)
            .ok_or_else(|| VilenkinError::Domain(format!("unknown phi preset '{name}'")))?;
        Self::new(kind, p)
    }

    pub fn kind(&self) -> PhiKind {
        self.kind
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// `(n+1)^{1/p-1} log^{[p]}(n+1)`.
    pub fn growth(&self, n: usize) -> f64 {
        let x = (n + 1) as f64;
        let log_part = if self.p >= 1.0 { x.ln() } else { 1.0 };
        x.powf(1.0 / self.p - 1.0) * log_part
    }

    pub fn eval(&self, n: usize) -> f64 {
        let raw = match self.kind {
            PhiKind::Const1 => 1.0,
            PhiKind::Log => ((n + 1) as f64).ln(),
            PhiKind::LogLog => self.growth(n) / ((n + 16) as f64).ln().ln(),
            PhiKind::Critical => self.growth(n),
        };
        raw.max(1.0)
    }

    /// `growth(n) / phi(n)`; unbounded along some sequence iff the weight
    /// is slow enough for divergence.
    pub fn quotient(&self, n: usize) -> f64 {
        self.growth(n) / self.eval(n)
    }
}

impl fmt::Display for PhiWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn phi_presets(p: f64) -> Result<Vec<PhiWeight>> {
    PhiKind::ALL.into_iter().map(|k| PhiWeight::new(k, p)).collect()
}

/// `||S_{M_{2k}+1} f_k / phi(M_{2k}+2)||_{p,inf} / ||f_k||_{H_p}` for
/// `0 < p < 1`.
pub fn theorem1b_ratio(base: &BaseSequence, k: usize, p: f64, phi: &PhiWeight) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(VilenkinError::Domain(format!(
            "weak-type ratio needs 0 < p < 1, got {p}; use theorem1b_ratio_l1 at p = 1"
        )));
    }
    let f = kernel_block(base, k)?;
    let n = base.power(2 * k) + 1;
    let s = partial_sum(f.terminal(), n)? * (1.0 / phi.eval(n + 1));
    Ok(s.weak_lp_norm(p)? / hardy_norm(&f, p)?)
}

/// `(M_{2k}+2)^{1/p-1} / phi(M_{2k}+2)`, the lower bound up to constants.
pub fn theorem1b_lower_bound(base: &BaseSequence, k: usize, p: f64, phi: &PhiWeight) -> f64 {
    let n = base.power(2 * k) + 2;
    (n as f64).powf(1.0 / p - 1.0) / phi.eval(n)
}

/// `||f_k||_{H_1}^{-1} int |S_{q_k} f_k| / phi(q_k)` with `q_k` the even-sum
/// index.
pub fn theorem1b_ratio_l1(base: &BaseSequence, k: usize, phi: &PhiWeight) -> Result<f64> {
    let f = kernel_block(base, k)?;
    let q = q_index(base, k, QVariant::EvenSum)?.value();
    let s = partial_sum(f.terminal(), q)?;
    Ok(s.lp_norm(1.0)? / phi.eval(q) / hardy_norm(&f, 1.0)?)
}

/// `(log q_k - 1) / phi(q_k)`, the lower bound up to constants.
pub fn theorem1b_lower_bound_l1(base: &BaseSequence, k: usize, phi: &PhiWeight) -> Result<f64> {
    let q = q_index(base, k, QVariant::EvenSum)?.value();
    Ok(((q as f64).ln() - 1.0) / phi.eval(q))
}

/// `sum_{i=0}^A D_{M_{2i+1}} - D_{M_{2i}}` for `0 < p < 1`, built from the
/// atoms `a_i = M_{2i}^{1/p-1} / lambda * block_i` on `I_{2i}`.
#[derive(Clone, Debug)]
pub struct Theorem3b {
    pub a: usize,
    pub p: f64,
    pub assembly: Assembly,
}

pub fn theorem3b_martingale(base: &BaseSequence, a: usize, p: f64) -> Result<Theorem3b> {
    if !(p > 0.0 && p < 1.0) {
        return Err(VilenkinError::InvalidExponent(p));
    }
    require_resolution(base, 2 * a + 1, "truncated martingale")?;
    let lambda = base.max_base() as f64;
    let mut coeffs = Vec::with_capacity(a + 1);
    let mut atoms = Vec::with_capacity(a + 1);
    for i in 0..=a {
        let scale = (base.power(2 * i) as f64).powf(1.0 / p - 1.0);
        let support = IntervalSpec::at_zero(base, 2 * i)?;
        atoms.push(AtomSpec::new(support, p, shell_block(base, 2 * i)? * (scale / lambda))?);
        coeffs.push(lambda / scale);
    }
    let assembly = atomic_assemble(base, p, &coeffs, &atoms)?;
    Ok(Theorem3b { a, p, assembly })
}

impl Theorem3b {
    pub fn martingale(&self) -> &MartingaleApprox {
        &self.assembly.martingale
    }

    pub fn base(&self) -> &BaseSequence {
        self.martingale().base()
    }

    /// The coefficient the construction prescribes at `j`.
    pub fn expected_coefficient(&self, j: usize) -> f64 {
        let base = self.base();
        let hit = (0..=self.a).any(|i| (base.power(2 * i)..base.power(2 * i + 1)).contains(&j));
        if hit {
            1.0
        } else {
            0.0
        }
    }

    /// `max_j |f^(j) - expected|`.
    pub fn spectrum_error(&self) -> f64 {
        analyze_fast(self.martingale().terminal())
            .coeffs()
            .iter()
            .enumerate()
            .map(|(j, c)| (c - self.expected_coefficient(j)).norm())
            .fold(0.0, f64::max)
    }

    /// `r_k = ||f - S_{M_{2k+1}-1} f||_{p,inf}` for `k = 0..=A`.
    pub fn residuals(&self) -> Result<Vec<f64>> {
        let f = self.martingale().terminal();
        (0..=self.a)
            .map(|k| (f - &partial_sum(f, self.base().power(2 * k + 1) - 1)?).weak_lp_norm(self.p))
            .collect()
    }

    /// `omega(1/M_n, f)_{H_p}` for every level `n = 0..=N`.
    pub fn moduli(&self) -> Result<Vec<f64>> {
        let f = self.martingale().terminal();
        (0..=self.base().resolution())
            .map(|n| modulus(f, n, Space::Hp(self.p)))
            .collect()
    }

    /// `M_{2n}^{1-1/p}`, the rate the modulus decays at along even levels.
    pub fn rate(&self, n: usize) -> f64 {
        let base = self.base();
        let m = if 2 * n <= base.resolution() {
            base.power(2 * n) as f64
        } else {
            base.order() as f64 * 2f64.powi((2 * n - base.resolution()) as i32)
        };
        m.powf(1.0 - 1.0 / self.p)
    }

    /// Upper bound for `omega(1/M_{2n}, f)_{H_p}` from the p-triangle
    /// inequality over the blocks `i >= n`, with the blocks past `A` that
    /// were not realized included through [`Theorem3b::tail_mass`].
    pub fn modulus_bound(&self, n: usize) -> f64 {
        let base = self.base();
        let realized: f64 = (n..=self.a)
            .map(|i| block_hardy_p(base.base(2 * i), base.power(2 * i), self.p))
            .sum();
        let skipped = n.saturating_sub(self.a + 1) as f64;
        let tail = self.tail_mass() * 4f64.powf((self.p - 1.0) * skipped);
        (realized + tail).powf(1.0 / self.p)
    }

    /// Upper bound for `sum_{i > A} ||block_i||_{H_p}^p`, from
    /// `M_{2i+2} >= 4 M_{2i}`.
    pub fn tail_mass(&self) -> f64 {
        let base = self.base();
        let r = 4f64.powf(self.p - 1.0);
        block_hardy_p(base.max_base(), base.power(2 * self.a), self.p) * r / (1.0 - r)
    }
}

/// `||D_{M_{j+1}} - D_{M_j}||_{H_p}^p` with `m = m_j`, `big_m = M_j`.
///
/// The block vanishes under `E_i` for `i <= j` and is `F_{j+1}`-measurable,
/// so its maximal function is its modulus: `M_j (m-1)` on `I_{j+1}` and
/// `M_j` on the rest of `I_j`. The value increases with `m`.
pub fn block_hardy_p(m: usize, big_m: usize, p: f64) -> f64 {
    let m = m as f64;
    (big_m as f64).powf(p - 1.0) * ((m - 1.0).powf(p) + m - 1.0) / m
}

/// Coefficient in front of the block `a_i` of [`theorem4b_martingale`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CoeffVariant {
    /// `1 / M_i`.
    #[default]
    InvMi,
    /// `1 / M_{2i}`.
    InvM2i,
}

/// `sum_{i=1}^A c_i (D_{M_{2M_i+1}} - D_{M_{2M_i}})`, a martingale in `H_1`.
#[derive(Clone, Debug)]
pub struct Theorem4b {
    pub a: usize,
    pub variant: CoeffVariant,
    pub assembly: Assembly,
}

impl CoeffVariant {
    pub fn coefficient(self, base: &BaseSequence, i: usize) -> f64 {
        match self {
            CoeffVariant::InvMi => 1.0 / base.power(i) as f64,
            CoeffVariant::InvM2i => 1.0 / base.power(2 * i) as f64,
        }
    }
}

/// Largest `A` with `2 M_A + 1 <= N`.
pub fn theorem4b_max_a(base: &BaseSequence) -> Option<usize> {
    (1..=base.resolution())
        .take_while(|&a| 2 * base.power(a) < base.resolution())
        .last()
}

pub fn theorem4b_martingale(base: &BaseSequence, a: usize, variant: CoeffVariant) -> Result<Theorem4b> {
    if a == 0 {
        return Err(VilenkinError::Domain("the construction starts at A = 1".into()));
    }
    if a > base.resolution() || 2 * base.power(a) + 1 > base.resolution() {
        return Err(VilenkinError::Domain(format!(
            "A = {a} needs resolution 2 M_A + 1, base has {}",
            base.resolution()
        )));
    }
    // The blocks exceed the 1-atom height for m_j > 2; dividing by
    // lambda = max m_j restores it.
    let lambda = base.max_base() as f64;
    let mut coeffs = Vec::with_capacity(a);
    let mut atoms = Vec::with_capacity(a);
    for i in 1..=a {
        let level = 2 * base.power(i);
        let support = IntervalSpec::at_zero(base, level)?;
        atoms.push(AtomSpec::new(support, 1.0, shell_block(base, level)? * (1.0 / lambda))?);
        coeffs.push(lambda * variant.coefficient(base, i));
    }
    let assembly = atomic_assemble(base, 1.0, &coeffs, &atoms)?;
    Ok(Theorem4b { a, variant, assembly })
}

impl Theorem4b {
    pub fn martingale(&self) -> &MartingaleApprox {
        &self.assembly.martingale
    }

    pub fn base(&self) -> &BaseSequence {
        self.martingale().base()
    }

    /// `(i, [M_{2M_i}, M_{2M_i+1}))` for each realized block.
    pub fn blocks(&self) -> Vec<(usize, std::ops::Range<usize>)> {
        let base = self.base();
        (1..=self.a)
            .map(|i| {
                let level = 2 * base.power(i);
                (i, base.power(level)..base.power(level + 1))
            })
            .collect()
    }

    pub fn expected_coefficient(&self, j: usize) -> f64 {
        self.blocks()
            .into_iter()
            .find(|(_, r)| r.contains(&j))
            .map_or(0.0, |(i, _)| self.variant.coefficient(self.base(), i))
    }

    pub fn spectrum_error(&self) -> f64 {
        analyze_fast(self.martingale().terminal())
            .coeffs()
            .iter()
            .enumerate()
            .map(|(j, c)| (c - self.expected_coefficient(j)).norm())
            .fold(0.0, f64::max)
    }

    /// `(q_{M_k}, ||f - S_{q_{M_k}} f||_1)` for `k = 1..=A`.
    pub fn residuals(&self) -> Result<Vec<(usize, f64)>> {
        let base = self.base();
        let f = self.martingale().terminal();
        (1..=self.a)
            .map(|k| {
                let q = q_index(base, base.power(k), QVariant::EvenSum)?.value();
                Ok((q, (f - &partial_sum(f, q)?).lp_norm(1.0)?))
            })
            .collect()
    }

    /// `omega(1/M_n, f)_{H_1}` for `n = 1..=N`.
    pub fn moduli(&self) -> Result<Vec<f64>> {
        let f = self.martingale().terminal();
        (1..=self.base().resolution())
            .map(|n| modulus(f, n, Space::Hp(1.0)))
            .collect()
    }

    /// `h sum_{i >= [lg n / 2]} 1/M_i` with `h` the largest `H_1` norm of a
    /// block (`h = 1` for Walsh). Indices past `N` are bounded by `h / M_N`.
    pub fn modulus_bound(&self, n: usize) -> f64 {
        let base = self.base();
        let h = block_hardy_p(base.max_base(), 1, 1.0);
        let start = ((n as f64).log2() / 2.0).floor() as usize;
        let head: f64 = (start..=base.resolution()).map(|i| 1.0 / base.power(i) as f64).sum();
        h * (head + 1.0 / base.order() as f64)
    }
}

/// `sum_j rate^j (D_{M_{2j+1}} - D_{M_{2j}})` over every block that fits:
/// a function whose `H_p` modulus decays geometrically along even levels.
pub fn decaying_blocks(base: &BaseSequence, rate: f64) -> Result<FiniteFunction> {
    let mut f = FiniteFunction::zeros(base);
    let mut c = 1.0;
    for j in 0..=(base.resolution().saturating_sub(1) / 2) {
        f = f + shell_block(base, 2 * j)? * c;
        c *= rate;
    }
    Ok(f)
}

/// Residual norm of the partial sums against `f`, for `k = 1..=M_N`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ResidualNorm {
    Weak(f64),
    L1,
}

pub fn residual_sequence(f: &FiniteFunction, norm: ResidualNorm) -> Result<Vec<f64>> {
    let m = f.len() as f64;
    let mut out = Vec::with_capacity(f.len());
    let mut sweep = PartialSumSweep::new(f);
    while let Some((_, s)) = sweep.advance() {
        let diffs = s.iter().zip(f.values()).map(|(a, b)| (a - b).norm());
        out.push(match norm {
            ResidualNorm::L1 => diffs.sum::<f64>() / m,
            ResidualNorm::Weak(p) => crate::function::weak_lp_of_magnitudes(diffs.collect(), p),
        });
    }
    Ok(out)
}

/// `max_{M_j <= k < M_{j+1}} residual(k)` for `j = 0..N`, with `residuals`
/// indexed from `k = 1`.
pub fn dyadic_envelope(base: &BaseSequence, residuals: &[f64]) -> Vec<f64> {
    (0..base.resolution())
        .map(|j| {
            (base.power(j)..base.power(j + 1))
                .map(|k| residuals[k - 1])
                .fold(0.0, f64::max)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::dirichlet;
    use crate::transform::CharacterTable;

    #[test]
    fn kernel_block_spectra_are_indicators() {
        for base in [
            BaseSequence::walsh(8).unwrap(),
            BaseSequence::new(vec![2, 3, 2, 3, 2, 3]).unwrap(),
        ] {
            for k in 0..3 {
                let f = kernel_block(&base, k).unwrap();
                let (lo, hi) = (base.power(2 * k), base.power(2 * k + 1));
                for (j, c) in analyze_fast(f.terminal()).coeffs().iter().enumerate() {
                    let expected = if (lo..hi).contains(&j) { 1.0 } else { 0.0 };
                    assert!((c - expected).norm() < 1e-12, "k={k} j={j} {c}");
                }
            }
            assert!(kernel_block(&base, base.resolution() / 2).is_err());
        }
    }

    #[test]
    fn partial_sums_of_a_block() {
        let w = BaseSequence::walsh(6).unwrap();
        let f = kernel_block(&w, 1).unwrap();
        let f = f.terminal();
        let (lo, hi) = (w.power(2), w.power(3));
        let d_lo = dirichlet(&w, lo).unwrap();
        for i in 0..=w.order() {
            let s = partial_sum(f, i).unwrap();
            if i <= lo {
                assert!(s.linf_norm() < 1e-12);
            } else if i < hi {
                let expected = &dirichlet(&w, i).unwrap() - &d_lo;
                assert!((&s - &expected).linf_norm() < 1e-12);
            } else {
                assert!((&s - f).linf_norm() < 1e-12);
            }
        }
        let first = partial_sum(f, lo + 1).unwrap();
        assert!(first.values().iter().all(|v| (v.norm() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn weak_ratios_with_constant_weight() {
        let w = BaseSequence::walsh(8).unwrap();
        let one = PhiWeight::new(PhiKind::Const1, 0.5).unwrap();
        assert!((theorem1b_ratio(&w, 1, 0.5, &one).unwrap() - 4.0).abs() < 1e-12);
        for k in 1..=3 {
            let closed = w.power(2 * k) as f64;
            assert!((theorem1b_ratio(&w, k, 0.5, &one).unwrap() / closed - 1.0).abs() < 1e-9);
        }
        assert!(theorem1b_ratio(&w, 1, 1.0, &one).is_err());
        assert!(theorem1b_ratio(&w, 4, 0.5, &one).is_err());
    }

    #[test]
    fn weak_ratios_follow_condition_six() {
        let w = BaseSequence::walsh(8).unwrap();
        let p = 0.5;
        let slow = PhiWeight::new(PhiKind::LogLog, p).unwrap();
        let ratios: Vec<f64> = (1..=3).map(|k| theorem1b_ratio(&w, k, p, &slow).unwrap()).collect();
        assert!(ratios.windows(2).all(|r| r[1] > r[0]), "{ratios:?}");

        let critical = PhiWeight::new(PhiKind::Critical, p).unwrap();
        let bounded: Vec<f64> = (1..=3).map(|k| theorem1b_ratio(&w, k, p, &critical).unwrap()).collect();
        for (k, r) in (1..=3).zip(&bounded) {
            let m = w.power(2 * k) as f64;
            assert!((r - m / (m + 3.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn l1_ratios() {
        let w = BaseSequence::walsh(12).unwrap();
        let one = PhiWeight::new(PhiKind::Const1, 1.0).unwrap();
        let values: Vec<f64> = (1..=5).map(|k| theorem1b_ratio_l1(&w, k, &one).unwrap()).collect();
        assert!(values.windows(2).all(|v| v[1] > v[0]), "{values:?}");
        let log = PhiWeight::new(PhiKind::Log, 1.0).unwrap();
        let damped: Vec<f64> = (1..=5).map(|k| theorem1b_ratio_l1(&w, k, &log).unwrap()).collect();
        assert!(damped.iter().all(|&v| v < 1.0), "{damped:?}");
    }

    #[test]
    fn presets_are_monotone_and_at_least_one() {
        for p in [0.25, 0.5, 0.75, 1.0] {
            for phi in phi_presets(p).unwrap() {
                let mut last = 0.0;
                for n in 1..=1 << 16 {
                    let v = phi.eval(n);
                    assert!(v >= 1.0 && v >= last, "{phi} p={p} n={n}");
                    last = v;
                }
            }
        }
        assert!(PhiWeight::parse("loglog", 0.5).is_ok());
        assert!(PhiWeight::parse("cubic", 0.5).is_err());
        assert!(PhiWeight::new(PhiKind::Log, 0.0).is_err());
    }

    #[test]
    fn condition_six_witnesses() {
        let w = BaseSequence::walsh(16).unwrap();
        for p in [0.5, 1.0] {
            let at = |phi: &PhiWeight| -> Vec<f64> { (1..8).map(|k| phi.quotient(w.power(2 * k) + 2)).collect() };
            let slow = at(&PhiWeight::new(PhiKind::LogLog, p).unwrap());
            assert!(slow.windows(2).all(|q| q[1] > q[0]), "{slow:?}");
            let critical = at(&PhiWeight::new(PhiKind::Critical, p).unwrap());
            assert!(critical.iter().all(|&q| (q - 1.0).abs() < 1e-12));
        }
    }

    #[test]
    fn theorem3b_structure() {
        let w = BaseSequence::walsh(6).unwrap();
        let t = theorem3b_martingale(&w, 2, 0.5).unwrap();
        let spectrum = analyze_fast(t.martingale().terminal());
        for (j, c) in spectrum.coeffs().iter().enumerate() {
            let expected = if j == 1 || (4..8).contains(&j) || (16..32).contains(&j) {
                1.0
            } else {
                0.0
            };
            assert!((c - expected).norm() < 1e-12, "j={j}");
        }
        assert!(t.spectrum_error() < 1e-12);
        assert!(t.assembly.bound_holds(1e-9));
        assert!(theorem3b_martingale(&w, 3, 0.5).is_err());
        assert!(theorem3b_martingale(&w, 1, 1.0).is_err());
    }

    #[test]
    fn theorem3b_single_block_residual() {
        // f = psi_1 and f - S_1 f = psi_1.
        let w = BaseSequence::walsh(4).unwrap();
        let t = theorem3b_martingale(&w, 0, 0.5).unwrap();
        assert!(
            t.martingale()
                .terminal()
                .relative_discrepancy(&CharacterTable::new(&w).row(1))
                < 1e-15
        );
        let r = t.residuals().unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn theorem3b_diagnostics() {
        let w = BaseSequence::walsh(8).unwrap();
        for p in [0.5, 0.75] {
            let t = theorem3b_martingale(&w, 3, p).unwrap();
            let residuals = t.residuals().unwrap();
            assert!(residuals.iter().all(|&r| r > 0.5), "{residuals:?}");
            let moduli = t.moduli().unwrap();
            for n in 0..=4 {
                assert!(
                    moduli[2 * n] <= t.modulus_bound(n),
                    "p={p} n={n} {} {}",
                    moduli[2 * n],
                    t.modulus_bound(n)
                );
                assert!(moduli[2 * n] <= 4.0 * t.rate(n));
            }
            // The plain sum of block norms is not a bound when p < 1.
            let plain: f64 = (0..=3).map(|i| (w.power(2 * i) as f64).powf(1.0 - 1.0 / p)).sum();
            assert!(moduli[0] > plain);
            assert!(moduli.windows(2).all(|m| m[1] <= m[0] * (1.0 + 1e-12)));
            assert_eq!(moduli[8], 0.0);
        }
    }

    #[test]
    fn block_norms_in_closed_form() {
        for bases in [vec![2; 6], vec![3, 2, 3, 2, 3, 2], vec![2, 3, 2, 3, 2, 3]] {
            let b = BaseSequence::new(bases).unwrap();
            for j in 0..6 {
                let f = MartingaleApprox::new(shell_block(&b, j).unwrap());
                for p in [0.5, 0.75, 1.0] {
                    let exact = hardy_norm(&f, p).unwrap().powf(p);
                    assert!((block_hardy_p(b.base(j), b.power(j), p) / exact - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn theorem4b_structure() {
        let w = BaseSequence::walsh(9).unwrap();
        assert_eq!(theorem4b_max_a(&w), Some(2));
        assert_eq!(theorem4b_max_a(&BaseSequence::walsh(8).unwrap()), Some(1));
        let t = theorem4b_martingale(&w, 1, CoeffVariant::InvMi).unwrap();
        let spectrum = analyze_fast(t.martingale().terminal());
        for (j, c) in spectrum.coeffs().iter().enumerate() {
            let expected = if (16..32).contains(&j) { 0.5 } else { 0.0 };
            assert!((c - expected).norm() < 1e-12, "j={j}");
        }
        let t = theorem4b_martingale(&w, 2, CoeffVariant::InvM2i).unwrap();
        assert!(t.spectrum_error() < 1e-12);
        assert_eq!(t.expected_coefficient(300), 1.0 / 16.0);
        assert!(theorem4b_martingale(&w, 3, CoeffVariant::InvMi).is_err());
        assert!(theorem4b_martingale(&w, 0, CoeffVariant::InvMi).is_err());
    }

    #[test]
    fn theorem4b_on_mixed_bases_is_built_from_atoms() {
        let b = BaseSequence::new(vec![2, 3, 2, 3, 2]).unwrap();
        let t = theorem4b_martingale(&b, 1, CoeffVariant::InvMi).unwrap();
        assert!(t.spectrum_error() < 1e-12);
        assert!(t.assembly.bound_holds(1e-9));
    }

    #[test]
    fn theorem4b_diagnostics() {
        let w = BaseSequence::walsh(12).unwrap();
        for variant in [CoeffVariant::InvMi, CoeffVariant::InvM2i] {
            let t = theorem4b_martingale(&w, 2, variant).unwrap();
            let residuals = t.residuals().unwrap();
            assert_eq!(residuals[0].0, 21);
            assert_eq!(residuals[1].0, 341);
            assert!(residuals.iter().all(|&(_, r)| r > 0.0));
            for (n, m) in (1..).zip(t.moduli().unwrap()) {
                assert!(m <= t.modulus_bound(n), "n={n} {m}");
            }
        }
    }

    #[test]
    fn decaying_blocks_and_envelopes() {
        let w = BaseSequence::walsh(6).unwrap();
        let f = decaying_blocks(&w, 0.5).unwrap();
        let spectrum = analyze_fast(&f);
        assert!((spectrum.coeffs()[20].re - 0.25).abs() < 1e-12);
        let r = residual_sequence(&f, ResidualNorm::L1).unwrap();
        assert_eq!(r.len(), 64);
        assert!(r[63] < 1e-12);
        let direct = (&f - &partial_sum(&f, 10).unwrap()).lp_norm(1.0).unwrap();
        assert!((r[9] - direct).abs() < 1e-12);
        let weak = residual_sequence(&f, ResidualNorm::Weak(0.5)).unwrap();
        let direct = (&f - &partial_sum(&f, 10).unwrap()).weak_lp_norm(0.5).unwrap();
        assert!((weak[9] - direct).abs() < 1e-12);
        let env = dyadic_envelope(&w, &r);
        assert_eq!(env.len(), 6);
        assert_eq!(env[0], r[0]);
        assert_eq!(env[5], r[32..64].iter().cloned().fold(0.0, f64::max));
    }
}

//! Dirichlet kernels `D_n = sum_{k<n} psi_k` by three independent routes,
//! Lebesgue constants `||D_n||_1`, the special indices `q`, and the shell
//! profile of `int_{I_N} |D_n(x - t)| dmu(t)`.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, VilenkinError};
use crate::function::FiniteFunction;
use crate::group::{check_at_most, shell_decomposition, BaseSequence, VilenkinIndex};
use crate::transform::{unit_root, CharacterTable};

fn check_kernel_index(base: &BaseSequence, n: usize) -> Result<()> {
    if n == 0 {
        return Err(VilenkinError::Domain(
            "D_0 is not defined; kernel indices start at 1".into(),
        ));
    }
    check_at_most("kernel index", n, base.order())
}

/// `D_n` as the pointwise sum of the first `n` characters.
pub fn dirichlet(base: &BaseSequence, n: usize) -> Result<FiniteFunction> {
    check_kernel_index(base, n)?;
    let sweep = DirichletSweep::new(base);
    Ok(sweep.take(n).last().expect("n >= 1").1)
}

/// Yields `(n, D_n)` for `n = 1, 2, ..., M_N`, adding one character per step.
pub struct DirichletSweep {
    table: CharacterTable,
    acc: Vec<Complex64>,
    row: Vec<Complex64>,
    next: usize,
}

impl DirichletSweep {
    pub fn new(base: &BaseSequence) -> Self {
        let m = base.order();
        Self {
            table: CharacterTable::new(base),
            acc: vec![Complex64::new(0.0, 0.0); m],
            row: vec![Complex64::new(0.0, 0.0); m],
            next: 0,
        }
    }
}

impl Iterator for DirichletSweep {
    type Item = (usize, FiniteFunction);

    fn next(&mut self) -> Option<Self::Item> {
        let base = self.table.base().clone();
        if self.next >= base.order() {
            return None;
        }
        self.table.fill_row(self.next, &mut self.row);
        for (a, r) in self.acc.iter_mut().zip(&self.row) {
            *a += r;
        }
        self.next += 1;
        let d = FiniteFunction::new(&base, self.acc.clone()).expect("order length");
        Some((self.next, d))
    }
}

/// `D_{M_j}`: `M_j` on `I_j`, zero elsewhere.
pub fn dirichlet_paley(base: &BaseSequence, j: usize) -> Result<FiniteFunction> {
    check_at_most("level", j, base.resolution())?;
    let height = base.power(j) as f64;
    Ok(FiniteFunction::from_fn(base, |r| {
        if base.in_zero_interval(r, j) {
            Complex64::new(height, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// `D_n(x) = psi_n(x) sum_j D_{M_j}(x) sum_{u = m_j - n_j}^{m_j - 1} r_j(x)^u`.
pub fn dirichlet_factored(base: &BaseSequence, n: usize) -> Result<FiniteFunction> {
    check_kernel_index(base, n)?;
    if n == base.order() {
        // The only nonzero digit sits one place above the resolution; there
        // psi_n r_N^{m_N - 1} = r_N^{m_N} = 1 and the identity collapses to
        // D_{M_N}.
        return dirichlet_paley(base, base.resolution());
    }
    let idx = VilenkinIndex::new(base, n)?;
    let table = CharacterTable::new(base);
    Ok(FiniteFunction::from_fn(base, |r| {
        let mut bracket = Complex64::new(0.0, 0.0);
        for j in 0..base.resolution() {
            if !base.in_zero_interval(r, j) {
                break;
            }
            let m = base.base(j);
            let x_j = base.digit(r, j);
            let inner: Complex64 = (m - idx.digit(j)..m).map(|u| unit_root(u * x_j, m)).sum();
            bracket += inner * base.power(j) as f64;
        }
        table.value(n, r) * bracket
    }))
}

/// `||D_n||_1`.
pub fn lebesgue_constant(base: &BaseSequence, n: usize) -> Result<f64> {
    dirichlet(base, n)?.lp_norm(1.0)
}

/// Which reading of the special index `q` to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum QVariant {
    /// `M_{2k} + M_{2k-2} + M_2 + M_0`, as a set of distinct positions.
    Literal,
    /// `sum_{l=0}^{k} M_{2l}`: digit 1 at every even position up to `2k`.
    #[default]
    EvenSum,
}

pub fn q_index(base: &BaseSequence, k: usize, variant: QVariant) -> Result<VilenkinIndex> {
    check_at_most("2k", 2 * k, base.resolution())?;
    let positions: Vec<usize> = match variant {
        QVariant::EvenSum => (0..=k).map(|l| 2 * l).collect(),
        QVariant::Literal => {
            if k == 0 {
                return Err(VilenkinError::Domain("the four-term index needs k >= 1".into()));
            }
            let mut p = vec![0, 2, 2 * k - 2, 2 * k];
            p.sort_unstable();
            p.dedup();
            p
        }
    };
    let value = positions.iter().map(|&j| base.power(j)).sum();
    VilenkinIndex::new(base, value)
}

/// Result of comparing the kernel routes at one index.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelReport {
    pub n: VilenkinIndex,
    pub l1_norm: f64,
    /// Largest relative pointwise gap between the routes that apply at `n`.
    pub route_agreement: f64,
}

pub fn kernel_report(base: &BaseSequence, n: usize) -> Result<KernelReport> {
    let d = dirichlet(base, n)?;
    kernel_report_for(base, n, &d)
}

/// Same as [`kernel_report`] for a precomputed definition-route kernel.
pub fn kernel_report_for(base: &BaseSequence, n: usize, d: &FiniteFunction) -> Result<KernelReport> {
    let mut agreement = d.relative_discrepancy(&dirichlet_factored(base, n)?);
    if let Some(j) = base.powers().iter().position(|&w| w == n) {
        agreement = agreement.max(d.relative_discrepancy(&dirichlet_paley(base, j)?));
    }
    Ok(KernelReport {
        n: VilenkinIndex::new(base, n)?,
        l1_norm: d.lp_norm(1.0)?,
        route_agreement: agreement,
    })
}

/// Normalized shell integrals for one shell `I_s \ I_{s+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShellRatio {
    pub shell: usize,
    /// `K(x) / (M_s / M_depth)` at the anchor point with a single digit 1 at
    /// position `s`.
    pub anchor_ratio: f64,
    /// Maximum of the same ratio over all representatives of the shell.
    pub max_ratio: f64,
}

/// Representative ranks per shell: the anchor `M_s` plus up to three random
/// members of `I_s \ I_{s+1}`.
pub fn lemma2_representatives(base: &BaseSequence, depth: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    let shells = shell_decomposition(base, depth)?.shells;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(shells
        .iter()
        .enumerate()
        .map(|(s, members)| {
            let anchor = base.power(s);
            let mut reps = vec![anchor];
            let others: Vec<usize> = members.iter().copied().filter(|&r| r != anchor).collect();
            reps.extend(others.choose_multiple(&mut rng, 3).copied());
            reps
        })
        .collect())
}

/// Shell ratios of `K(x) = int_{I_depth} |D(x - t)| dmu(t)` for a given kernel.
pub fn lemma2_ratios(kernel: &FiniteFunction, depth: usize, reps: &[Vec<usize>]) -> Vec<ShellRatio> {
    let base = kernel.base();
    let core: Vec<usize> = (0..base.order()).step_by(base.power(depth)).collect();
    let order = base.order() as f64;
    reps.iter()
        .enumerate()
        .map(|(s, points)| {
            let scale = base.power(s) as f64 / base.power(depth) as f64;
            let ratio = |x: usize| {
                let k: f64 = core
                    .iter()
                    .map(|&t| kernel.value(base.sub_ranks(x, t)).norm())
                    .sum::<f64>()
                    / order;
                k / scale
            };
            let anchor_ratio = ratio(points[0]);
            let max_ratio = points.iter().map(|&x| ratio(x)).fold(anchor_ratio, f64::max);
            ShellRatio {
                shell: s,
                anchor_ratio,
                max_ratio,
            }
        })
        .collect()
}

/// Shell profile of `D_n` against the coset `I_depth`. `n = 0` gives the
/// zero kernel.
pub fn lemma2_profile(base: &BaseSequence, n: usize, depth: usize) -> Result<Vec<ShellRatio>> {
    check_at_most("kernel index", n, base.order())?;
    let reps = lemma2_representatives(base, depth, 0x1e33a2 ^ ((n as u64) << 8) ^ depth as u64)?;
    let kernel = if n == 0 {
        FiniteFunction::zeros(base)
    } else {
        dirichlet(base, n)?
    };
    Ok(lemma2_ratios(&kernel, depth, &reps))
}

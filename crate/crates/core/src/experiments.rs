//! Named experiments: each one computes a set of CSV tables and a list of
//! pass/fail checks. The command-line harness and `verify` are thin layers
//! over [`run`].

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::counterexamples::{
    block_hardy_p, decaying_blocks, dyadic_envelope, residual_sequence, theorem1b_lower_bound,
    theorem1b_lower_bound_l1, theorem1b_ratio, theorem1b_ratio_l1, theorem3b_martingale, theorem4b_martingale,
    theorem4b_max_a, CoeffVariant, PhiKind, PhiWeight, ResidualNorm,
};
use crate::error::{Result, VilenkinError};
use crate::function::FiniteFunction;
use crate::group::{BaseSequence, IntervalSpec};
use crate::hardy::{hardy_norm, modulus, AtomSpec, MartingaleApprox, Space};
use crate::kernels::{
    dirichlet_paley, kernel_report_for, lemma2_ratios, lemma2_representatives, q_index, DirichletSweep, QVariant,
};
use crate::sums::{gat_log_means, strong_sum, weighted_maximal, PartialSumSweep, WeightSpec};
use crate::transform::{analyze_fast, analyze_naive, synthesize};

/// Tolerance for comparisons between independent computations.
pub const AGREEMENT: f64 = 1e-9;
/// Spectral decay of the positive-direction test functions.
pub const DECAY_RATE: f64 = 1.0 / 16.0;
/// Decay target for the positive-direction residual envelopes.
pub const DECAY_TARGET: f64 = 1e-3;
/// Floor for the weak residuals of the `0 < p < 1` construction.
pub const RESIDUAL_FLOOR_WEAK: f64 = 0.5;

/// Floor for the `L_1` residuals of the `p = 1` construction.
pub fn residual_floor_l1(variant: CoeffVariant) -> f64 {
    match variant {
        CoeffVariant::InvMi => 0.5,
        CoeffVariant::InvM2i => 0.2,
    }
}

/// `x` with 12 significant digits, trailing zeros removed.
pub fn num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let s = format!("{:.*}", (11 - exp) as usize, x);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{x:.11e}");
        let (mantissa, e) = s.split_once('e').expect("exponent form");
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{mantissa}e{e}")
    }
}

/// One CSV file.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: impl Into<String>, header: &[&str]) -> Self {
        Self {
            name: name.into(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.into_inner().map_err(|e| VilenkinError::Io(e.into_error()))
    }

    pub fn write_csv(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join(format!("{}.csv", self.name));
        std::fs::write(&path, self.to_csv()?)?;
        Ok(path)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub experiment: Experiment,
    pub tables: Vec<Table>,
    pub checks: Vec<Check>,
    pub summary: String,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        self.tables.iter().map(|t| t.write_csv(dir)).collect()
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Experiment {
    TransformSelftest,
    Kernels,
    Lemma2,
    MaximalAtoms,
    Divergence,
    StrongSum,
    Approximation,
    ModulusConvergence,
    Counterexample3b,
    Counterexample4b,
    GatLogMean,
}

impl Experiment {
    pub const ALL: [Experiment; 11] = [
        Experiment::TransformSelftest,
        Experiment::Kernels,
        Experiment::Lemma2,
        Experiment::MaximalAtoms,
        Experiment::Divergence,
        Experiment::StrongSum,
        Experiment::Approximation,
        Experiment::ModulusConvergence,
        Experiment::Counterexample3b,
        Experiment::Counterexample4b,
        Experiment::GatLogMean,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::TransformSelftest => "transform-selftest",
            Experiment::Kernels => "kernels",
            Experiment::Lemma2 => "lemma2",
            Experiment::MaximalAtoms => "maximal-atoms",
            Experiment::Divergence => "divergence",
            Experiment::StrongSum => "strong-sum",
            Experiment::Approximation => "approximation",
            Experiment::ModulusConvergence => "modulus-convergence",
            Experiment::Counterexample3b => "counterexample-3b",
            Experiment::Counterexample4b => "counterexample-4b",
            Experiment::GatLogMean => "gat-log-mean",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = VilenkinError;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| VilenkinError::Domain(format!("unknown experiment '{s}'")))
    }
}

/// Inputs shared by all experiments. Experiments ignore what they do not
/// use.
#[derive(Clone, Debug, PartialEq)]
pub struct Params {
    pub base: BaseSequence,
    pub p: f64,
    pub phi: PhiKind,
    /// Largest block index or truncation parameter; `None` means as large as
    /// the resolution allows.
    pub kmax: Option<usize>,
    pub seed: u64,
    /// Number of random samples (functions or atoms).
    pub count: usize,
}

impl Params {
    pub fn new(base: BaseSequence) -> Self {
        Self {
            base,
            p: 0.5,
            phi: PhiKind::Const1,
            kmax: None,
            seed: 0,
            count: 100,
        }
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = p;
        self
    }

    pub fn with_phi(mut self, phi: PhiKind) -> Self {
        self.phi = phi;
        self
    }

    pub fn with_kmax(mut self, kmax: usize) -> Self {
        self.kmax = Some(kmax);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_count(mut self, count: usize) -> Self {
        self.count = count;
        self
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    fn check_p(&self) -> Result<()> {
        if self.p > 0.0 && self.p <= 1.0 {
            Ok(())
        } else {
            Err(VilenkinError::InvalidExponent(self.p))
        }
    }
}

pub fn run(experiment: Experiment, params: &Params) -> Result<Report> {
    params.check_p()?;
    let (tables, checks, summary) = match experiment {
        Experiment::TransformSelftest => transform_selftest(params)?,
        Experiment::Kernels => kernels(params)?,
        Experiment::Lemma2 => lemma2(params)?,
        Experiment::MaximalAtoms => maximal_atoms(params)?,
        Experiment::Divergence => divergence(params)?,
        Experiment::StrongSum => strong_sums(params)?,
        Experiment::Approximation => approximation(params)?,
        Experiment::ModulusConvergence => modulus_convergence(params)?,
        Experiment::Counterexample3b => counterexample_3b(params)?,
        Experiment::Counterexample4b => counterexample_4b(params)?,
        Experiment::GatLogMean => gat_log_mean(params)?,
    };
    Ok(Report {
        experiment,
        tables,
        checks,
        summary,
    })
}

type Parts = (Vec<Table>, Vec<Check>, String);

fn int(n: usize) -> String {
    n.to_string()
}

pub fn random_function<R: Rng>(base: &BaseSequence, rng: &mut R) -> FiniteFunction {
    FiniteFunction::from_fn(base, |_| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

fn random_atom<R: Rng>(base: &BaseSequence, depth: usize, p: f64, rng: &mut R) -> Result<AtomSpec> {
    let anchor = base.unrank(rng.gen_range(0..base.order()))?;
    AtomSpec::random(IntervalSpec::new(depth, anchor)?, p, rng)
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

fn strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] > w[0])
}

fn nonincreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] <= w[0])
}

fn list(v: &[f64]) -> String {
    v.iter().map(|&x| num(x)).collect::<Vec<_>>().join(", ")
}

fn transform_selftest(params: &Params) -> Result<Parts> {
    let base = &params.base;
    let mut rng = params.rng(1);
    let mut table = Table::new("transform_selftest", &["id", "fast_vs_naive", "roundtrip"]);
    let (mut worst_fast, mut worst_round) = (0.0f64, 0.0f64);
    for id in 0..params.count {
        let f = random_function(base, &mut rng);
        let fast = analyze_fast(&f);
        let naive = analyze_naive(&f);
        let a = crate::function::relative_discrepancy(fast.coeffs(), naive.coeffs());
        let r = synthesize(&fast).relative_discrepancy(&f);
        worst_fast = worst_fast.max(a);
        worst_round = worst_round.max(r);
        table.push(vec![int(id), num(a), num(r)]);
    }
    let checks = vec![
        Check::new(
            "fast transform matches naive",
            worst_fast <= AGREEMENT,
            format!("max relative gap {}", num(worst_fast)),
        ),
        Check::new(
            "synthesis inverts analysis",
            worst_round <= AGREEMENT,
            format!("max relative gap {}", num(worst_round)),
        ),
    ];
    let summary = format!(
        "{} functions on {base}: fast/naive {}, round trip {}",
        params.count,
        num(worst_fast),
        num(worst_round)
    );
    Ok((vec![table], checks, summary))
}

/// Kernel reports for every `n <= M_N` with the definition route supplied
/// by `route`.
pub fn kernel_table(
    base: &BaseSequence,
    route: &mut dyn FnMut(usize) -> Result<FiniteFunction>,
) -> Result<(Table, f64, f64)> {
    let mut table = Table::new("kernels", &["n", "l1_norm", "route_agreement"]);
    let (mut worst, mut paley_norm_gap) = (0.0f64, 0.0f64);
    for n in 1..=base.order() {
        let d = route(n)?;
        let report = kernel_report_for(base, n, &d)?;
        worst = worst.max(report.route_agreement);
        if base.powers().contains(&n) {
            paley_norm_gap = paley_norm_gap.max((report.l1_norm - 1.0).abs());
        }
        table.push(vec![int(n), num(report.l1_norm), num(report.route_agreement)]);
    }
    Ok((table, worst, paley_norm_gap))
}

fn kernels(params: &Params) -> Result<Parts> {
    let base = &params.base;
    let mut sweep = DirichletSweep::new(base);
    let (table, worst, gap) = kernel_table(base, &mut |_| Ok(sweep.next().expect("n <= M_N").1))?;

    let mut lebesgue = Table::new("lebesgue", &["k", "q", "l1_norm", "l1_over_k"]);
    let mut min_over_k = f64::INFINITY;
    let l1: Vec<f64> = table.rows.iter().map(|r| r[1].parse().expect("number")).collect();
    for k in 1..=base.resolution().saturating_sub(1) / 2 {
        let q = q_index(base, k, QVariant::EvenSum)?.value();
        let v = l1[q - 1];
        min_over_k = min_over_k.min(v / k as f64);
        lebesgue.push(vec![int(k), int(q), num(v), num(v / k as f64)]);
    }
    let mut checks = vec![
        Check::new(
            "kernel routes agree",
            worst <= AGREEMENT,
            format!("max relative gap {}", num(worst)),
        ),
        Check::new(
            "Paley kernels have unit L1 norm",
            gap <= 1e-12,
            format!("max |norm - 1| {}", num(gap)),
        ),
    ];
    if min_over_k.is_finite() {
        checks.push(Check::new(
            "Lebesgue constants at q_k grow linearly",
            min_over_k >= 0.25,
            format!("min ||D_q||_1 / k = {}", num(min_over_k)),
        ));
    }
    let summary = format!("{} kernels on {base}; route gap {}", base.order(), num(worst));
    Ok((vec![table, lebesgue], checks, summary))
}

/// Largest shell ratio over all `n <= M_N` with depth `N`.
pub fn lemma2_table(base: &BaseSequence, seed: u64) -> Result<(Table, f64)> {
    let depth = base.resolution();
    let mut table = Table::new("lemma2", &["n", "shell", "anchor_ratio", "max_ratio"]);
    let mut worst = 0.0f64;
    for (n, d) in DirichletSweep::new(base) {
        let reps = lemma2_representatives(base, depth, seed ^ ((n as u64) << 8) ^ depth as u64)?;
        for row in lemma2_ratios(&d, depth, &reps) {
            worst = worst.max(row.max_ratio);
            table.push(vec![int(n), int(row.shell), num(row.anchor_ratio), num(row.max_ratio)]);
        }
    }
    Ok((table, worst))
}

fn lemma2(params: &Params) -> Result<Parts> {
    let (table, worst) = lemma2_table(&params.base, params.seed)?;
    let checks = vec![Check::new(
        "shell ratios are finite",
        worst.is_finite(),
        format!("max ratio {}", num(worst)),
    )];
    Ok((
        vec![table],
        checks,
        format!("max shell ratio on {}: {}", params.base, num(worst)),
    ))
}

/// Even levels `2, 4, ...` below `N`: supports with at least two points.
pub fn atom_levels(base: &BaseSequence) -> Vec<usize> {
    (2..base.resolution()).step_by(2).collect()
}

/// `int_{G \ I} |S~_p* a|^p` for `count` random atoms per level.
pub fn maximal_atoms_table(
    base: &BaseSequence,
    p: f64,
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(Table, Vec<(usize, f64)>)> {
    let w = WeightSpec::new(p)?;
    let mut table = Table::new(format!("maximal_atoms_p{}", num(p)), &["atom_id", "level", "ratio"]);
    let mut maxima = Vec::new();
    let mut id = 0;
    for level in atom_levels(base) {
        let mut best = 0.0f64;
        for _ in 0..count {
            let a = random_atom(base, level, p, rng)?;
            let star = weighted_maximal(&a.function, &w);
            let v = star.abs_pow_integral(p, |r| !a.support.contains_rank(r));
            best = best.max(v);
            table.push(vec![int(id), int(level), num(v)]);
            id += 1;
        }
        maxima.push((level, best));
    }
    Ok((table, maxima))
}

fn maximal_atoms(params: &Params) -> Result<Parts> {
    let mut rng = params.rng(4);
    let (table, maxima) = maximal_atoms_table(&params.base, params.p, params.count, &mut rng)?;
    let first = maxima.first().map_or(0.0, |m| m.1);
    let top = max_of(maxima.iter().map(|m| m.1));
    let detail = maxima
        .iter()
        .map(|(l, v)| format!("level {l}: {}", num(*v)))
        .collect::<Vec<_>>()
        .join(", ");
    let checks = vec![Check::new(
        "no growth across support levels",
        top <= 2.0 * first,
        detail.clone(),
    )];
    Ok((vec![table], checks, format!("p = {}: {detail}", num(params.p))))
}

/// `1 / ||f_k||_{H_p}` with `phi = 1`: the weak ratio in closed form.
pub fn divergence_closed_form(base: &BaseSequence, k: usize, p: f64) -> f64 {
    block_hardy_p(base.base(2 * k), base.power(2 * k), p).powf(-1.0 / p)
}

fn divergence(params: &Params) -> Result<Parts> {
    let base = &params.base;
    let p = params.p;
    let phi = PhiWeight::new(params.phi, p)?;
    let kmax = params.kmax.unwrap_or((base.resolution().saturating_sub(1)) / 2);
    if kmax == 0 {
        return Err(VilenkinError::Domain(format!(
            "{base} is too small for a kernel block with k >= 1"
        )));
    }
    let weak = p < 1.0;
    let mut table = Table::new(
        "divergence",
        if weak {
            &["k", "M_2k", "phi", "ratio", "lower_bound", "growth_over_phi"]
        } else {
            &["k", "q_k", "phi", "ratio", "lower_bound", "growth_over_phi"]
        },
    );
    let mut ratios = Vec::new();
    let mut closed_gap = 0.0f64;
    for k in 1..=kmax {
        let (n, ratio, bound) = if weak {
            let n = base.power(2 * k);
            let r = theorem1b_ratio(base, k, p, &phi)?;
            (n, r, theorem1b_lower_bound(base, k, p, &phi))
        } else {
            let q = q_index(base, k, QVariant::EvenSum)?.value();
            (
                q,
                theorem1b_ratio_l1(base, k, &phi)?,
                theorem1b_lower_bound_l1(base, k, &phi)?,
            )
        };
        let at = if weak { n + 2 } else { n };
        if weak && params.phi == PhiKind::Const1 {
            closed_gap = closed_gap.max((ratio / divergence_closed_form(base, k, p) - 1.0).abs());
        }
        ratios.push(ratio);
        table.push(vec![
            int(k),
            int(n),
            num(phi.eval(at)),
            num(ratio),
            num(bound),
            num(phi.quotient(at)),
        ]);
    }
    let mut checks = Vec::new();
    let spread = max_of(ratios.iter().copied()) / ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    match (weak, params.phi) {
        (true, PhiKind::Const1) => checks.push(Check::new(
            "ratios match the closed form",
            closed_gap <= AGREEMENT,
            format!("ratios {}; max relative gap {}", list(&ratios), num(closed_gap)),
        )),
        (true, PhiKind::LogLog) | (false, PhiKind::Const1) => checks.push(Check::new(
            "ratios increase strictly",
            strictly_increasing(&ratios),
            format!("ratios {}", list(&ratios)),
        )),
        (_, PhiKind::Critical) | (false, PhiKind::Log) => checks.push(Check::new(
            "ratios stay bounded",
            spread <= 2.0,
            format!("ratios {}; max/min {}", list(&ratios), num(spread)),
        )),
        _ => {}
    }
    let summary = format!("p = {}, phi = {}: ratios {}", num(p), phi, list(&ratios));
    Ok((vec![table], checks, summary))
}

fn strong_sums(params: &Params) -> Result<Parts> {
    let base = &params.base;
    let p = params.p;
    if p >= 1.0 {
        return Err(VilenkinError::InvalidExponent(p));
    }
    let mut rng = params.rng(6);
    let k = params.kmax.unwrap_or(base.order()).min(base.order());
    let mut table = Table::new(
        "strong_sum",
        &["atom_id", "level", "K", "total", "tail_fraction", "hardy_p", "ratio"],
    );
    let (mut worst_tail, mut lo, mut hi) = (0.0f64, f64::INFINITY, 0.0f64);
    let mut monotone = true;
    for id in 0..params.count {
        let level = rng.gen_range(0..base.resolution());
        let a = random_atom(base, level, p, &mut rng)?;
        let s = strong_sum(&a.function, p, k)?;
        monotone &= s.partials.windows(2).all(|w| w[1] >= w[0]);
        let tail = (s.total - s.partials[k / 2 - 1]) / s.total;
        let hp = hardy_norm(&MartingaleApprox::new(a.function.clone()), p)?.powf(p);
        let ratio = s.total / hp;
        worst_tail = worst_tail.max(tail);
        lo = lo.min(ratio);
        hi = hi.max(ratio);
        table.push(vec![
            int(id),
            int(level),
            int(k),
            num(s.total),
            num(tail),
            num(hp),
            num(ratio),
        ]);
    }
    let checks = vec![
        Check::new("partial totals are monotone", monotone, ""),
        Check::new(
            "last half of the sum is below 1e-2 of the total",
            worst_tail < 1e-2,
            format!("max tail fraction {}", num(worst_tail)),
        ),
        Check::new(
            "ratio to the Hardy norm varies by at most 10x",
            hi <= 10.0 * lo,
            format!("ratios in [{}, {}]", num(lo), num(hi)),
        ),
    ];
    let summary = format!(
        "{} atoms, K = {k}: tail fraction <= {}, ratio in [{}, {}]",
        params.count,
        num(worst_tail),
        num(lo),
        num(hi)
    );
    Ok((vec![table], checks, summary))
}

/// Bound ratio of the approximation theorem; 0 when both sides vanish.
fn approximation(params: &Params) -> Result<Parts> {
    let base = &params.base;
    let p = params.p;
    let w = WeightSpec::new(p)?;
    let mut rng = params.rng(7);
    let mut table = Table::new(
        "approximation",
        &["fn_id", "n", "k", "error_hp", "modulus", "ratio", "partial_sum_ratio"],
    );
    let (mut worst, mut worst_sn) = (0.0f64, 0.0f64);
    for id in 0..params.count {
        let f = random_function(base, &mut rng);
        let hf = hardy_norm(&MartingaleApprox::new(f.clone()), p)?;
        let moduli: Vec<f64> = (0..=base.resolution())
            .map(|j| modulus(&f, j, Space::Hp(p)))
            .collect::<Result<_>>()?;
        let mut sweep = PartialSumSweep::new(&f);
        while let Some((n, s)) = sweep.advance() {
            if n < 2 {
                continue;
            }
            let k = (0..base.resolution())
                .find(|&k| base.power(k) < n && n <= base.power(k + 1))
                .expect("n <= M_N");
            let sn = FiniteFunction::new(base, s.to_vec())?;
            let error = hardy_norm(&MartingaleApprox::new(&sn - &f), p)?;
            let scale = (n as f64).powf(1.0 / p - 1.0) * (n as f64).ln().powi(w.bracket_p() as i32);
            let denominator = scale * moduli[k];
            let ratio = if error <= 1e-12 * hf { 0.0 } else { error / denominator };
            let sn_ratio = sn.lp_norm(p)? / (w.weight(n) * hf);
            worst = worst.max(ratio);
            worst_sn = worst_sn.max(sn_ratio);
            table.push(vec![
                int(id),
                int(n),
                int(k),
                num(error),
                num(moduli[k]),
                num(ratio),
                num(sn_ratio),
            ]);
        }
    }
    let checks = vec![
        Check::new(
            "approximation ratio is bounded",
            worst.is_finite(),
            format!("max {}", num(worst)),
        ),
        Check::new(
            "partial sum ratio is bounded",
            worst_sn.is_finite(),
            format!("max {}", num(worst_sn)),
        ),
    ];
    let summary = format!(
        "p = {}: max approximation ratio {}, max partial-sum ratio {}",
        num(p),
        num(worst),
        num(worst_sn)
    );
    Ok((vec![table], checks, summary))
}

/// Residual envelopes of [`decaying_blocks`] over the windows
/// `[M_{2j}, M_{2j+2})`.
pub fn decay_envelope(base: &BaseSequence, p: f64) -> Result<(Table, Table, Vec<f64>)> {
    let f = decaying_blocks(base, DECAY_RATE)?;
    let norm = if p < 1.0 {
        ResidualNorm::Weak(p)
    } else {
        ResidualNorm::L1
    };
    let residuals = residual_sequence(&f, norm)?;
    let mut r_table = Table::new("residuals", &["k", "residual"]);
    for (k, r) in (1..).zip(&residuals) {
        r_table.push(vec![int(k), num(*r)]);
    }
    let dyadic = dyadic_envelope(base, &residuals);
    let windows = base.resolution().div_ceil(2);
    let mut e_table = Table::new(
        "envelope",
        &["j", "k_lo", "k_hi", "envelope", "modulus", "scaled_modulus"],
    );
    let mut envelope = Vec::with_capacity(windows);
    for j in 0..windows {
        let e = max_of(dyadic[2 * j..(2 * j + 2).min(dyadic.len())].iter().copied());
        let level = 2 * j;
        let w = modulus(&f, level, Space::Hp(p))?;
        let rate = if p < 1.0 {
            (base.power(level) as f64).powf(1.0 - 1.0 / p)
        } else {
            1.0 / level.max(1) as f64
        };
        let hi = base.power((level + 2).min(base.resolution()));
        e_table.push(vec![
            int(j),
            int(base.power(level)),
            int(hi),
            num(e),
            num(w),
            num(w / rate),
        ]);
        envelope.push(e);
    }
    Ok((r_table, e_table, envelope))
}

fn modulus_convergence(params: &Params) -> Result<Parts> {
    let (r, e, envelope) = decay_envelope(&params.base, params.p)?;
    let last = *envelope.last().unwrap_or(&0.0);
    let checks = vec![Check::new(
        "residual envelope decays below 1e-3",
        nonincreasing(&envelope) && last < DECAY_TARGET,
        format!("envelope {}", list(&envelope)),
    )];
    let norm = if params.p < 1.0 { "weak" } else { "L1" };
    Ok((
        vec![r, e],
        checks,
        format!("{norm} residual envelope: {}", list(&envelope)),
    ))
}

fn counterexample_3b(params: &Params) -> Result<Parts> {
    let base = &params.base;
    let a = params.kmax.unwrap_or((base.resolution().saturating_sub(1)) / 2);
    let t = theorem3b_martingale(base, a, params.p)?;
    let residuals = t.residuals()?;
    let moduli = t.moduli()?;
    let mut table = Table::new(
        "theorem3b",
        &["k", "residual_weak_norm", "modulus", "modulus_bound", "rate"],
    );
    let mut bound_ok = true;
    for (k, r) in residuals.iter().enumerate() {
        let (m, b) = (moduli[2 * k], t.modulus_bound(k));
        bound_ok &= m <= b;
        table.push(vec![int(k), num(*r), num(m), num(b), num(t.rate(k))]);
    }
    let mut odd = Table::new("theorem3b_odd_levels", &["level", "modulus"]);
    for level in (1..moduli.len()).step_by(2) {
        odd.push(vec![int(level), num(moduli[level])]);
    }
    let floor = residuals.iter().cloned().fold(f64::INFINITY, f64::min);
    let spectrum = t.spectrum_error();
    let checks = vec![
        Check::new(
            "spectrum is the block indicator",
            spectrum <= 1e-12,
            format!("max gap {}", num(spectrum)),
        ),
        Check::new(
            "atomic bound holds",
            t.assembly.bound_holds(AGREEMENT),
            format!(
                "||f||^p = {}, sum |mu|^p = {}",
                num(t.assembly.hardy_p),
                num(t.assembly.coefficient_mass)
            ),
        ),
        Check::new("modulus within its bound at even levels", bound_ok, ""),
        Check::new(
            "weak residuals stay above the floor",
            floor >= RESIDUAL_FLOOR_WEAK,
            format!("residuals {}; floor {}", list(&residuals), num(RESIDUAL_FLOOR_WEAK)),
        ),
    ];
    let summary = format!(
        "A = {a}, p = {}: residuals {}; blocks beyond A bounded by {}",
        num(params.p),
        list(&residuals),
        num(t.tail_mass())
    );
    Ok((vec![table, odd], checks, summary))
}

fn counterexample_4b(params: &Params) -> Result<Parts> {
    let base = &params.base;
    let a = match params.kmax.or_else(|| theorem4b_max_a(base)) {
        Some(a) => a,
        None => {
            return Err(VilenkinError::Domain(format!(
                "{base} is too small for the p = 1 construction"
            )))
        }
    };
    let mut table = Table::new("theorem4b", &["variant", "k", "q", "residual_l1", "modulus"]);
    let mut moduli_table = Table::new("theorem4b_moduli", &["variant", "n", "modulus", "modulus_bound"]);
    let mut checks = Vec::new();
    let mut summary = Vec::new();
    for variant in [CoeffVariant::InvMi, CoeffVariant::InvM2i] {
        let name = match variant {
            CoeffVariant::InvMi => "inv_Mi",
            CoeffVariant::InvM2i => "inv_M2i",
        };
        let t = theorem4b_martingale(base, a, variant)?;
        let moduli = t.moduli()?;
        let residuals = t.residuals()?;
        for (k, (q, r)) in (1..).zip(&residuals) {
            let level = 2 * base.power(k);
            table.push(vec![name.into(), int(k), int(*q), num(*r), num(moduli[level - 1])]);
        }
        let mut bound_ok = true;
        for (n, m) in (1..).zip(&moduli) {
            let b = t.modulus_bound(n);
            bound_ok &= *m <= b;
            moduli_table.push(vec![name.into(), int(n), num(*m), num(b)]);
        }
        let values: Vec<f64> = residuals.iter().map(|r| r.1).collect();
        let floor = residual_floor_l1(variant);
        let spectrum = t.spectrum_error();
        checks.push(Check::new(
            format!("{name}: spectrum matches"),
            spectrum <= 1e-12,
            format!("max gap {}", num(spectrum)),
        ));
        checks.push(Check::new(
            format!("{name}: atomic bound holds"),
            t.assembly.bound_holds(AGREEMENT),
            "",
        ));
        checks.push(Check::new(format!("{name}: modulus within its bound"), bound_ok, ""));
        checks.push(Check::new(
            format!("{name}: L1 residuals stay above the floor"),
            values.iter().all(|&v| v >= floor),
            format!("residuals {}; floor {}", list(&values), num(floor)),
        ));
        summary.push(format!("{name} residuals {}", list(&values)));
    }
    let blocks = (1..=a)
        .map(|i| {
            format!(
                "[{}, {})",
                base.power(2 * base.power(i)),
                base.power(2 * base.power(i) + 1)
            )
        })
        .collect::<Vec<_>>();
    Ok((
        vec![table, moduli_table],
        checks,
        format!("A = {a}, blocks {}: {}", blocks.join(" "), summary.join("; ")),
    ))
}

fn gat_log_mean(params: &Params) -> Result<Parts> {
    let base = &params.base;
    let mut rng = params.rng(11);
    let f = FiniteFunction::from_fn(base, |_| Complex64::new(rng.gen_range(-1.0..1.0), 0.0));
    let values = gat_log_means(&f);
    let mut table = Table::new("gat_log_mean", &["n", "value"]);
    for (n, v) in (2..).zip(&values) {
        table.push(vec![int(n), num(*v)]);
    }
    let checks = vec![Check::new(
        "log means decrease",
        nonincreasing(&values),
        format!(
            "first {}, last {}",
            num(values[0]),
            num(*values.last().expect("M_N >= 2"))
        ),
    )];
    Ok((
        vec![table],
        checks,
        format!(
            "log mean at n = {}: {}",
            base.order(),
            num(*values.last().expect("nonempty"))
        ),
    ))
}

/// `||D_{M_j}||_1` by the closed form, for reporting.
pub fn paley_norms(base: &BaseSequence) -> Result<Vec<f64>> {
    (0..=base.resolution())
        .map(|j| dirichlet_paley(base, j)?.lp_norm(1.0))
        .collect()
}

//! The full acceptance suite behind `vlab verify`.
//!
//! Criteria 1 to 9 are computed by [`suite`]; criterion 10 runs the suite a
//! second time and compares the rendered CSV bytes. Wall-clock times appear in
//! the printed details only, never in the tables.

use std::fmt;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::counterexamples::PhiKind;
use crate::error::Result;
use crate::experiments::{
    kernel_table, lemma2_table, maximal_atoms_table, num, paley_norms, run, Experiment, Params, Table, AGREEMENT,
};
use crate::function::FiniteFunction;
use crate::group::BaseSequence;
use crate::hardy::{hardy_norm, MartingaleApprox};
use crate::kernels::{dirichlet, dirichlet_paley, lebesgue_constant, q_index, DirichletSweep, QVariant};

/// Replacement for the definition route of the Dirichlet kernels, used to
/// check that criterion 2 can fail.
pub type KernelRoute = dyn Fn(&BaseSequence, usize) -> Result<FiniteFunction>;

#[derive(Clone, Copy, Default)]
pub struct VerifyOptions<'a> {
    pub seed: u64,
    pub kernel_route: Option<&'a KernelRoute>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Criterion {
    pub id: usize,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {:>2} {}: {}", self.id, self.title, self.detail)
    }
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub criteria: Vec<Criterion>,
    pub tables: Vec<Table>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }

    pub fn criterion(&self, id: usize) -> Option<&Criterion> {
        self.criteria.iter().find(|c| c.id == id)
    }

    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        self.tables.iter().map(|t| t.write_csv(dir)).collect()
    }
}

/// The two default groups.
pub fn default_bases() -> [BaseSequence; 2] {
    [
        BaseSequence::walsh(8).expect("256 points"),
        BaseSequence::new(vec![2, 3, 2, 3, 2, 3]).expect("216 points"),
    ]
}

/// File-name friendly tag: `walsh8`, `m232323`.
pub fn base_tag(base: &BaseSequence) -> String {
    if base.is_walsh() {
        format!("walsh{}", base.resolution())
    } else {
        let digits: String = base.bases().iter().map(|m| m.to_string()).collect();
        format!("m{digits}")
    }
}

fn seconds(d: Duration) -> String {
    format!("{:.2} s", d.as_secs_f64())
}

struct Suite {
    criteria: Vec<Criterion>,
    tables: Vec<Table>,
    seed: u64,
}

impl Suite {
    fn add(&mut self, prefix: &str, tables: impl IntoIterator<Item = Table>) {
        for mut t in tables {
            t.name = format!("{prefix}_{}", t.name);
            self.tables.push(t);
        }
    }

    fn record(&mut self, id: usize, title: &'static str, passed: bool, detail: String) {
        self.criteria.push(Criterion {
            id,
            title,
            passed,
            detail,
        });
    }

    fn params(&self, base: &BaseSequence) -> Params {
        Params::new(base.clone()).with_seed(self.seed)
    }

    /// Runs `experiment`, keeps its tables under `prefix`, returns pass and
    /// summary.
    fn experiment(&mut self, prefix: &str, experiment: Experiment, params: &Params) -> Result<(bool, String)> {
        let report = run(experiment, params)?;
        let failed: Vec<String> = report
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{} ({})", c.name, c.detail))
            .collect();
        let text = if failed.is_empty() {
            report.summary.clone()
        } else {
            format!("{}; failed: {}", report.summary, failed.join("; "))
        };
        self.add(prefix, report.tables);
        Ok((failed.is_empty(), text))
    }
}

/// Criteria 1 to 9, computed once.
pub fn suite(options: &VerifyOptions) -> Result<(Vec<Criterion>, Vec<Table>)> {
    let mut s = Suite {
        criteria: Vec::new(),
        tables: Vec::new(),
        seed: options.seed,
    };
    let [walsh8, mixed] = default_bases();
    let walsh12 = BaseSequence::walsh(12)?;

    // 1
    let start = Instant::now();
    let mut ok = true;
    let mut details = Vec::new();
    for base in [&walsh12, &mixed] {
        let params = s.params(base);
        let (pass, text) = s.experiment(
            &format!("c01_{}", base_tag(base)),
            Experiment::TransformSelftest,
            &params,
        )?;
        ok &= pass;
        details.push(text);
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(10);
    details.push(seconds(elapsed));
    s.record(1, "transform correctness", ok, details.join("; "));

    // 2
    let mut ok = true;
    let mut details = Vec::new();
    for base in [&walsh8, &mixed] {
        let (mut table, worst, gap) = match options.kernel_route {
            Some(route) => kernel_table(base, &mut |n| route(base, n))?,
            None => {
                let mut sweep = DirichletSweep::new(base);
                kernel_table(base, &mut |_| Ok(sweep.next().expect("n <= M_N").1))?
            }
        };
        let mut paley = Table::new("paley_norms", &["j", "M_j", "l1_norm"]);
        let mut paley_gap = gap;
        for (j, v) in paley_norms(base)?.into_iter().enumerate() {
            paley_gap = paley_gap.max((v - 1.0).abs());
            paley.push(vec![j.to_string(), base.power(j).to_string(), num(v)]);
        }
        ok &= worst <= AGREEMENT && paley_gap <= 1e-12;
        details.push(format!(
            "{base}: route gap {}, |Paley norm - 1| {}",
            num(worst),
            num(paley_gap)
        ));
        table.name = "kernels".into();
        s.add(&format!("c02_{}", base_tag(base)), [table, paley]);
    }
    s.record(2, "kernel identities", ok, details.join("; "));

    // 3
    let walsh3 = BaseSequence::walsh(3)?;
    let d3 = dirichlet(&walsh3, 3)?.lp_norm(1.0)?;
    let d5 = dirichlet(&walsh3, 5)?.lp_norm(1.0)?;
    let block = &dirichlet_paley(&walsh8, 3)? - &dirichlet_paley(&walsh8, 2)?;
    let h = hardy_norm(&MartingaleApprox::new(block), 0.5)?;
    let mut anchors = Table::new("anchors", &["quantity", "value", "expected"]);
    anchors.push(vec!["walsh_D3_l1".into(), num(d3), "1.5".into()]);
    anchors.push(vec!["walsh_D5_l1".into(), num(d5), "1.75".into()]);
    anchors.push(vec!["walsh_block_M3_M2_H_half".into(), num(h), "0.25".into()]);
    let ok = (d3 - 1.5).abs() <= 1e-12 && (d5 - 1.75).abs() <= 1e-12 && (h - 0.25).abs() <= 1e-12;
    s.add("c03", [anchors]);
    s.record(
        3,
        "exact anchors",
        ok,
        format!(
            "||D_3||_1 = {}, ||D_5||_1 = {}, block H_1/2 norm {}",
            num(d3),
            num(d5),
            num(h)
        ),
    );

    // 4
    let mut maxima = Vec::new();
    for n in [6, 8] {
        let base = BaseSequence::walsh(n)?;
        let (table, worst) = lemma2_table(&base, s.seed)?;
        s.add(&format!("c04_{}", base_tag(&base)), [table]);
        maxima.push(worst);
    }
    let growth = maxima[1] / maxima[0];
    s.record(
        4,
        "shell bound for Dirichlet kernels",
        growth <= 1.1,
        format!(
            "max ratio {} on walsh:6, {} on walsh:8; growth {}",
            num(maxima[0]),
            num(maxima[1]),
            num(growth)
        ),
    );

    // 5
    let start = Instant::now();
    let mut ok = true;
    let mut details = Vec::new();
    for (stream, p) in [0.5, 0.75, 1.0].into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
        rng.set_stream(50 + stream as u64);
        let (table, levels) = maximal_atoms_table(&walsh8, p, 100, &mut rng)?;
        let first = levels[0].1;
        let top = levels.iter().map(|l| l.1).fold(0.0, f64::max);
        ok &= top <= 2.0 * first;
        let list = levels
            .iter()
            .map(|(l, v)| format!("{l}: {}", num(*v)))
            .collect::<Vec<_>>()
            .join(", ");
        details.push(format!(
            "p = {}: max per level {list}; growth {}",
            num(p),
            num(top / first)
        ));
        s.add("c05_walsh8", [table]);
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(60);
    details.push(seconds(elapsed));
    s.record(5, "weighted maximal operator on atoms", ok, details.join("; "));

    // 6
    let mut ok = true;
    let mut details = Vec::new();
    for (tag, params) in [
        ("const1", s.params(&walsh8).with_kmax(3)),
        ("loglog", s.params(&walsh8).with_phi(PhiKind::LogLog)),
        ("critical", s.params(&walsh8).with_phi(PhiKind::Critical)),
    ] {
        let (pass, text) = s.experiment(&format!("c06_walsh8_{tag}"), Experiment::Divergence, &params)?;
        ok &= pass;
        details.push(text);
    }
    s.record(6, "weak-type divergence", ok, details.join("; "));

    // 7
    let mut lebesgue = Table::new("lebesgue", &["k", "q", "l1_norm", "l1_over_k"]);
    let mut worst = f64::INFINITY;
    for k in 1..=5 {
        let q = q_index(&walsh12, k, QVariant::EvenSum)?.value();
        let v = lebesgue_constant(&walsh12, q)?;
        worst = worst.min(v / k as f64);
        lebesgue.push(vec![k.to_string(), q.to_string(), num(v), num(v / k as f64)]);
    }
    s.add("c07_walsh12", [lebesgue]);
    let params = s.params(&walsh12).with_p(1.0).with_kmax(5);
    let (pass, text) = s.experiment("c07_walsh12", Experiment::Divergence, &params)?;
    s.record(
        7,
        "L1 divergence",
        pass && worst >= 0.25,
        format!("min ||D_q||_1 / k = {}; {text}", num(worst)),
    );

    // 8
    let mut ok = true;
    let mut details = Vec::new();
    for base in [&walsh8, &mixed] {
        let params = s.params(base);
        let (pass, text) = s.experiment(&format!("c08_{}", base_tag(base)), Experiment::StrongSum, &params)?;
        ok &= pass;
        details.push(format!("{base}: {text}"));
    }
    s.record(8, "strong summability of atoms", ok, details.join("; "));

    // 9
    let mut ok = true;
    let mut details = Vec::new();
    for (tag, experiment, params) in [
        ("c09_walsh8", Experiment::Counterexample3b, s.params(&walsh8)),
        ("c09_m232323", Experiment::Counterexample3b, s.params(&mixed)),
        ("c09_walsh12", Experiment::Counterexample4b, s.params(&walsh12)),
        ("c09_walsh8_p0.5", Experiment::ModulusConvergence, s.params(&walsh8)),
        (
            "c09_walsh12_p1",
            Experiment::ModulusConvergence,
            s.params(&walsh12).with_p(1.0),
        ),
    ] {
        let (pass, text) = s.experiment(tag, experiment, &params)?;
        ok &= pass;
        details.push(format!("{experiment} on {}: {text}", params.base));
    }
    s.record(
        9,
        "moduli of continuity: counterexamples and decay",
        ok,
        details.join("; "),
    );

    Ok((s.criteria, s.tables))
}

/// Runs every criterion. `Err` means the suite could not be computed at
/// all; failed criteria are reported in the result.
pub fn verify_all(options: &VerifyOptions) -> Result<VerifyReport> {
    let start = Instant::now();
    let (mut criteria, tables) = suite(options)?;
    let (_, again) = suite(options)?;
    let mut identical = tables.len() == again.len();
    for (a, b) in tables.iter().zip(&again) {
        identical &= a.name == b.name && a.to_csv()? == b.to_csv()?;
    }
    let elapsed = start.elapsed();
    criteria.push(Criterion {
        id: 10,
        title: "determinism",
        passed: identical && elapsed < Duration::from_secs(300),
        detail: format!(
            "{} tables {} across two runs; both runs took {}",
            tables.len(),
            if identical { "byte-identical" } else { "differ" },
            seconds(elapsed)
        ),
    });
    Ok(VerifyReport { criteria, tables })
}

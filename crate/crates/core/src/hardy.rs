//! Martingale Hardy spaces: the maximal function, the `H_p` quasi-norm,
//! p-atoms and moduli of continuity.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Result, VilenkinError};
use crate::function::{check_exponent, FiniteFunction};
use crate::group::{check_at_most, BaseSequence, IntervalSpec};
use crate::sums::conditional_expectation;

/// Slack used by the atom checks, relative to the height bound.
pub const ATOM_TOLERANCE: f64 = 1e-12;

/// A martingale `f^(j) = E_j f`, `j = 0..=N`, stored through its terminal
/// function.
#[derive(Clone, Debug, PartialEq)]
pub struct MartingaleApprox {
    terminal: FiniteFunction,
}

impl MartingaleApprox {
    pub fn new(terminal: FiniteFunction) -> Self {
        Self { terminal }
    }

    pub fn zero(base: &BaseSequence) -> Self {
        Self::new(FiniteFunction::zeros(base))
    }

    pub fn base(&self) -> &BaseSequence {
        self.terminal.base()
    }

    pub fn terminal(&self) -> &FiniteFunction {
        &self.terminal
    }

    pub fn into_terminal(self) -> FiniteFunction {
        self.terminal
    }

    /// `f^(j)`.
    pub fn level(&self, j: usize) -> Result<FiniteFunction> {
        conditional_expectation(&self.terminal, j)
    }

    /// `f^(0), ..., f^(N)`.
    pub fn levels(&self) -> Vec<FiniteFunction> {
        (0..=self.base().resolution())
            .map(|j| self.level(j).expect("level within resolution"))
            .collect()
    }
}

impl From<FiniteFunction> for MartingaleApprox {
    fn from(f: FiniteFunction) -> Self {
        Self::new(f)
    }
}

/// `f* = sup_j |f^(j)|`.
pub fn maximal_function(f: &MartingaleApprox) -> FiniteFunction {
    let base = f.base();
    let mut best = vec![0.0f64; base.order()];
    for j in 0..=base.resolution() {
        let width = base.power(j);
        let count = (base.order() / width) as f64;
        let mut sums = vec![Complex64::new(0.0, 0.0); width];
        for (r, v) in f.terminal().values().iter().enumerate() {
            sums[r % width] += v;
        }
        for (r, b) in best.iter_mut().enumerate() {
            *b = b.max(sums[r % width].norm() / count);
        }
    }
    FiniteFunction::new(base, best.into_iter().map(|v| Complex64::new(v, 0.0)).collect()).expect("order length")
}

/// `||f||_{H_p} = ||f*||_p`.
pub fn hardy_norm(f: &MartingaleApprox, p: f64) -> Result<f64> {
    check_exponent(p)?;
    maximal_function(f).lp_norm(p)
}

/// A candidate p-atom: `supp a ⊂ I`, `int_I a = 0`, `||a||_inf <= mu(I)^{-1/p}`.
#[derive(Clone, Debug, PartialEq)]
pub struct AtomSpec {
    pub support: IntervalSpec,
    pub p: f64,
    pub function: FiniteFunction,
}

impl AtomSpec {
    pub fn new(support: IntervalSpec, p: f64, function: FiniteFunction) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(VilenkinError::InvalidExponent(p));
        }
        if support.base() != function.base() {
            return Err(VilenkinError::BaseMismatch);
        }
        Ok(Self { support, p, function })
    }

    /// Uniform values on `I`, centred, then scaled to the full height
    /// `mu(I)^{-1/p}`.
    pub fn random<R: Rng + ?Sized>(support: IntervalSpec, p: f64, rng: &mut R) -> Result<Self> {
        let base = support.base().clone();
        let mut values = vec![Complex64::new(0.0, 0.0); base.order()];
        for r in support.ranks() {
            values[r] = Complex64::new(rng.gen_range(-1.0..=1.0), 0.0);
        }
        let mean = support.ranks().map(|r| values[r]).sum::<Complex64>() / support.len() as f64;
        for r in support.ranks() {
            values[r] -= mean;
        }
        let sup = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let height = support.measure().powf(-1.0 / p);
        if sup > 0.0 {
            for v in &mut values {
                *v *= height / sup;
            }
        }
        Self::new(support, p, FiniteFunction::new(&base, values)?)
    }

    pub fn height_bound(&self) -> f64 {
        self.support.measure().powf(-1.0 / self.p)
    }
}

/// Outcome of [`validate_atom`]. The first two fields are relative to the
/// height bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AtomDiagnostics {
    /// `max_{x not in I} |a(x)| / bound`.
    pub leak: f64,
    /// `|mean of a over I| / bound`.
    pub mean: f64,
    pub sup: f64,
    pub bound: f64,
}

impl AtomDiagnostics {
    pub fn support_ok(&self) -> bool {
        self.leak <= ATOM_TOLERANCE
    }

    pub fn mean_ok(&self) -> bool {
        self.mean <= ATOM_TOLERANCE
    }

    pub fn height_ok(&self) -> bool {
        self.sup <= self.bound * (1.0 + ATOM_TOLERANCE)
    }

    pub fn passed(&self) -> bool {
        self.support_ok() && self.mean_ok() && self.height_ok()
    }
}

pub fn validate_atom(a: &AtomSpec) -> AtomDiagnostics {
    let bound = a.height_bound();
    let values = a.function.values();
    let mut leak = 0.0f64;
    let mut inside = Complex64::new(0.0, 0.0);
    for (r, v) in values.iter().enumerate() {
        if a.support.contains_rank(r) {
            inside += v;
        } else {
            leak = leak.max(v.norm());
        }
    }
    AtomDiagnostics {
        leak: leak / bound,
        mean: (inside / a.support.len() as f64).norm() / bound,
        sup: a.function.linf_norm(),
        bound,
    }
}

/// `f = sum mu_k a_k` with the two sides of `||f||_{H_p}^p <= sum |mu_k|^p`.
#[derive(Clone, Debug, PartialEq)]
pub struct Assembly {
    pub martingale: MartingaleApprox,
    pub p: f64,
    /// `sum |mu_k|^p`.
    pub coefficient_mass: f64,
    /// `||f||_{H_p}^p`.
    pub hardy_p: f64,
}

impl Assembly {
    /// `hardy_p / coefficient_mass`, 0 for the empty decomposition.
    pub fn constant(&self) -> f64 {
        if self.coefficient_mass == 0.0 {
            0.0
        } else {
            self.hardy_p / self.coefficient_mass
        }
    }

    pub fn bound_holds(&self, slack: f64) -> bool {
        self.hardy_p <= self.coefficient_mass * (1.0 + slack)
    }
}

/// Sums an atomic decomposition left to right. Every atom must have exponent
/// `p`, live on `base` and pass [`validate_atom`].
pub fn atomic_assemble(base: &BaseSequence, p: f64, coeffs: &[f64], atoms: &[AtomSpec]) -> Result<Assembly> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(VilenkinError::InvalidExponent(p));
    }
    if coeffs.len() != atoms.len() {
        return Err(VilenkinError::LengthMismatch {
            expected: atoms.len(),
            got: coeffs.len(),
        });
    }
    let mut terminal = FiniteFunction::zeros(base);
    for (i, (mu, a)) in coeffs.iter().zip(atoms).enumerate() {
        if a.function.base() != base {
            return Err(VilenkinError::Domain(format!("atom {i} lives on a different base")));
        }
        if a.p != p {
            return Err(VilenkinError::Domain(format!(
                "atom {i} has exponent {}, expected {p}",
                a.p
            )));
        }
        let diag = validate_atom(a);
        if !diag.passed() {
            return Err(VilenkinError::Domain(format!("atom {i} is not a p-atom: {diag:?}")));
        }
        for (t, v) in terminal.values_mut().iter_mut().zip(a.function.values()) {
            *t += v * *mu;
        }
    }
    let martingale = MartingaleApprox::new(terminal);
    let hardy_p = hardy_norm(&martingale, p)?.powf(p);
    Ok(Assembly {
        martingale,
        p,
        coefficient_mass: coeffs.iter().map(|c| c.abs().powf(p)).sum(),
        hardy_p,
    })
}

/// Target space of [`modulus`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Space {
    Hp(f64),
    L1,
    C,
}

/// `omega(1/M_n, f)` in `space`.
///
/// In `H_p` this is `||f - E_n f||_{H_p}`; in `L_1` and `C` it is the
/// supremum over all translations `h in I_n`.
pub fn modulus(f: &FiniteFunction, n: usize, space: Space) -> Result<f64> {
    let base = f.base();
    check_at_most("level", n, base.resolution())?;
    match space {
        Space::Hp(p) => {
            let tail = f - &conditional_expectation(f, n)?;
            hardy_norm(&MartingaleApprox::new(tail), p)
        }
        Space::L1 | Space::C => {
            let mut worst = 0.0f64;
            for h in IntervalSpec::at_zero(base, n)?.ranks() {
                let diffs = (0..base.order()).map(|x| (f.value(base.add_ranks(x, h)) - f.value(x)).norm());
                let v = match space {
                    Space::L1 => diffs.sum::<f64>() / base.order() as f64,
                    _ => diffs.fold(0.0, f64::max),
                };
                worst = worst.max(v);
            }
            Ok(worst)
        }
    }
}

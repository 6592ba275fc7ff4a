//! Bounded Vilenkin groups at finite resolution.
//!
//! A group of resolution `N` is the product `Z_{m_0} x ... x Z_{m_{N-1}}`.
//! Points are addressed by their mixed-radix rank `r = sum x_k M_k`, with
//! `x_0` varying fastest. Under this layout the coset `I_n(x)` is the
//! residue class `r = rank(x) (mod M_n)`, a strided scan of stride `M_n`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Result, VilenkinError};

/// Largest group order accepted unless a caller asks for another ceiling.
pub const DEFAULT_CEILING: usize = 1 << 16;

/// The generating sequence `m_0..m_{N-1}` together with the place values
/// `M_0..M_N`. Cloning is cheap; the tables are shared.
#[derive(Clone)]
pub struct BaseSequence(Arc<Tables>);

struct Tables {
    bases: Vec<usize>,
    powers: Vec<usize>,
    phase_modulus: usize,
}

impl BaseSequence {
    pub fn new(bases: Vec<usize>) -> Result<Self> {
        Self::with_ceiling(bases, DEFAULT_CEILING)
    }

    pub fn with_ceiling(bases: Vec<usize>, ceiling: usize) -> Result<Self> {
        if bases.is_empty() {
            return Err(VilenkinError::InvalidBase("resolution must be at least 1".into()));
        }
        if let Some((k, &m)) = bases.iter().enumerate().find(|(_, &m)| m < 2) {
            return Err(VilenkinError::InvalidBase(format!(
                "m_{k} = {m}, every base must be at least 2"
            )));
        }
        let mut powers = Vec::with_capacity(bases.len() + 1);
        let mut order: u64 = 1;
        powers.push(1);
        for &m in &bases {
            order = order.saturating_mul(m as u64);
            if order > ceiling as u64 {
                return Err(VilenkinError::ResolutionExceeded { order, ceiling });
            }
            powers.push(order as usize);
        }
        let phase_modulus = bases.iter().fold(1, |acc, &m| lcm(acc, m));
        Ok(Self(Arc::new(Tables {
            bases,
            powers,
            phase_modulus,
        })))
    }

    /// The Walsh-Paley group `m = (2, ..., 2)` of resolution `n`.
    pub fn walsh(n: usize) -> Result<Self> {
        Self::new(vec![2; n])
    }

    /// Parses `walsh:N` or a comma separated list such as `2,3,2`.
    pub fn parse(spec: &str) -> Result<Self> {
        Self::parse_with_ceiling(spec, DEFAULT_CEILING)
    }

    pub fn parse_with_ceiling(spec: &str, ceiling: usize) -> Result<Self> {
        let spec = spec.trim();
        let bad = || VilenkinError::InvalidBase(format!("cannot parse base spec {spec:?}"));
        if let Some(n) = spec.strip_prefix("walsh:") {
            let n: usize = n.trim().parse().map_err(|_| bad())?;
            return Self::with_ceiling(vec![2; n], ceiling);
        }
        let bases = spec
            .trim_start_matches('(')
            .trim_end_matches(')')
            .split(',')
            .map(|s| s.trim().parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        Self::with_ceiling(bases, ceiling)
    }

    pub fn bases(&self) -> &[usize] {
        &self.0.bases
    }

    /// `m_k`.
    pub fn base(&self, k: usize) -> usize {
        self.0.bases[k]
    }

    /// `M_0..=M_N`.
    pub fn powers(&self) -> &[usize] {
        &self.0.powers
    }

    /// `M_k` for `k <= N`.
    pub fn power(&self, k: usize) -> usize {
        self.0.powers[k]
    }

    /// The resolution `N`.
    pub fn resolution(&self) -> usize {
        self.0.bases.len()
    }

    /// The number of points, `M_N`.
    pub fn order(&self) -> usize {
        *self.0.powers.last().unwrap()
    }

    /// `sup m_k`.
    pub fn max_base(&self) -> usize {
        self.0.bases.iter().copied().max().unwrap()
    }

    pub fn is_walsh(&self) -> bool {
        self.0.bases.iter().all(|&m| m == 2)
    }

    /// Least common multiple of the bases. Every character value is a power
    /// of `exp(2 pi i / phase_modulus)`.
    pub fn phase_modulus(&self) -> usize {
        self.0.phase_modulus
    }

    /// Digit `x_k` of the point with rank `r`.
    #[inline]
    pub fn digit(&self, r: usize, k: usize) -> usize {
        (r / self.0.powers[k]) % self.0.bases[k]
    }

    pub fn rank(&self, x: &GroupPoint) -> Result<usize> {
        if x.base != *self {
            return Err(VilenkinError::BaseMismatch);
        }
        Ok(x.rank())
    }

    pub fn unrank(&self, r: usize) -> Result<GroupPoint> {
        check_below("rank", r, self.order())?;
        let digits = (0..self.resolution()).map(|k| self.digit(r, k)).collect();
        Ok(GroupPoint {
            base: self.clone(),
            digits,
        })
    }

    /// Rank of `x + y`, computed coordinatewise on ranks.
    pub fn add_ranks(&self, a: usize, b: usize) -> usize {
        let mut out = 0;
        for (k, (&m, &w)) in self.0.bases.iter().zip(&self.0.powers).enumerate() {
            let d = (self.digit(a, k) + self.digit(b, k)) % m;
            out += d * w;
        }
        out
    }

    /// Rank of `x - y`.
    pub fn sub_ranks(&self, a: usize, b: usize) -> usize {
        let mut out = 0;
        for (k, (&m, &w)) in self.0.bases.iter().zip(&self.0.powers).enumerate() {
            let d = (self.digit(a, k) + m - self.digit(b, k)) % m;
            out += d * w;
        }
        out
    }

    /// Whether the point of rank `r` lies in `I_n = I_n(0)`.
    #[inline]
    pub fn in_zero_interval(&self, r: usize, n: usize) -> bool {
        r.is_multiple_of(self.0.powers[n])
    }

    /// The shell `s` with `r` in `I_s \ I_{s+1}`, or `None` when `r` lies in
    /// `I_depth`.
    pub fn shell_of(&self, r: usize, depth: usize) -> Option<usize> {
        (0..depth).find(|&s| !r.is_multiple_of(self.0.powers[s + 1]))
    }
}

impl PartialEq for BaseSequence {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.bases == other.0.bases
    }
}

impl Eq for BaseSequence {}

impl fmt::Debug for BaseSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("BaseSequence").field(&self.0.bases).finish()
    }
}

impl fmt::Display for BaseSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_walsh() {
            return write!(f, "walsh:{}", self.resolution());
        }
        let parts: Vec<String> = self.0.bases.iter().map(|m| m.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

pub(crate) fn check_below(what: &'static str, value: usize, limit: usize) -> Result<()> {
    if value < limit {
        Ok(())
    } else {
        Err(VilenkinError::OutOfRange { what, value, limit })
    }
}

pub(crate) fn check_at_most(what: &'static str, value: usize, limit: usize) -> Result<()> {
    if value <= limit {
        Ok(())
    } else {
        Err(VilenkinError::OutOfRange { what, value, limit })
    }
}

/// A point `x = (x_0, ..., x_{N-1})` of the group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPoint {
    base: BaseSequence,
    digits: Vec<usize>,
}

impl GroupPoint {
    pub fn new(base: &BaseSequence, digits: Vec<usize>) -> Result<Self> {
        if digits.len() != base.resolution() {
            return Err(VilenkinError::DigitCount {
                expected: base.resolution(),
                got: digits.len(),
            });
        }
        for (k, &d) in digits.iter().enumerate() {
            if d >= base.base(k) {
                return Err(VilenkinError::DigitOutOfRange {
                    coordinate: k,
                    digit: d,
                    base: base.base(k),
                });
            }
        }
        Ok(Self {
            base: base.clone(),
            digits,
        })
    }

    pub fn zero(base: &BaseSequence) -> Self {
        Self {
            base: base.clone(),
            digits: vec![0; base.resolution()],
        }
    }

    pub fn base(&self) -> &BaseSequence {
        &self.base
    }

    pub fn digits(&self) -> &[usize] {
        &self.digits
    }

    pub fn rank(&self) -> usize {
        self.digits.iter().zip(self.base.powers()).map(|(d, w)| d * w).sum()
    }
}

/// Coordinatewise `(x_k + y_k) mod m_k`.
pub fn group_add(x: &GroupPoint, y: &GroupPoint) -> Result<GroupPoint> {
    combine(x, y, |a, b, m| (a + b) % m)
}

/// Coordinatewise `(x_k - y_k) mod m_k`.
pub fn group_sub(x: &GroupPoint, y: &GroupPoint) -> Result<GroupPoint> {
    combine(x, y, |a, b, m| (a + m - b) % m)
}

fn combine(x: &GroupPoint, y: &GroupPoint, op: impl Fn(usize, usize, usize) -> usize) -> Result<GroupPoint> {
    if x.base != y.base {
        return Err(VilenkinError::BaseMismatch);
    }
    let digits = x
        .digits
        .iter()
        .zip(&y.digits)
        .zip(x.base.bases())
        .map(|((&a, &b), &m)| op(a, b, m))
        .collect();
    Ok(GroupPoint {
        base: x.base.clone(),
        digits,
    })
}

/// A character index `n = sum n_j M_j`.
///
/// Indices up to and including `M_N` are representable; `M_N` itself carries
/// a single digit 1 one place above the resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VilenkinIndex {
    value: usize,
    digits: Vec<usize>,
}

impl VilenkinIndex {
    pub fn new(base: &BaseSequence, value: usize) -> Result<Self> {
        check_at_most("index", value, base.order())?;
        let mut digits: Vec<usize> = (0..base.resolution()).map(|j| base.digit(value, j)).collect();
        digits.push(value / base.order());
        Ok(Self { value, digits })
    }

    pub fn value(&self) -> usize {
        self.value
    }

    /// `n_0..n_N`.
    pub fn digits(&self) -> &[usize] {
        &self.digits
    }

    pub fn digit(&self, j: usize) -> usize {
        self.digits.get(j).copied().unwrap_or(0)
    }

    /// `|n| = max { j : n_j != 0 }`; `None` for `n = 0`.
    pub fn order(&self) -> Option<usize> {
        self.digits.iter().rposition(|&d| d != 0)
    }
}

/// The coset `I_depth(anchor)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalSpec {
    depth: usize,
    anchor: GroupPoint,
}

impl IntervalSpec {
    pub fn new(depth: usize, anchor: GroupPoint) -> Result<Self> {
        check_at_most("interval depth", depth, anchor.base.resolution())?;
        Ok(Self { depth, anchor })
    }

    /// `I_depth = I_depth(0)`.
    pub fn at_zero(base: &BaseSequence, depth: usize) -> Result<Self> {
        Self::new(depth, GroupPoint::zero(base))
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn anchor(&self) -> &GroupPoint {
        &self.anchor
    }

    pub fn base(&self) -> &BaseSequence {
        &self.anchor.base
    }

    /// `mu(I) = 1 / M_depth`.
    pub fn measure(&self) -> f64 {
        1.0 / self.base().power(self.depth) as f64
    }

    fn residue(&self) -> usize {
        self.anchor.rank() % self.base().power(self.depth)
    }

    pub fn contains_rank(&self, r: usize) -> bool {
        r % self.base().power(self.depth) == self.residue()
    }

    /// Ranks of the member points, in increasing order.
    pub fn ranks(&self) -> impl Iterator<Item = usize> {
        let step = self.base().power(self.depth);
        (self.residue()..self.base().order()).step_by(step)
    }

    pub fn len(&self) -> usize {
        self.base().order() / self.base().power(self.depth)
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// The partition `G = I_N u (I_0 \ I_1) u ... u (I_{N-1} \ I_N)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShellDecomposition {
    /// `shells[s]` holds the ranks of `I_s \ I_{s+1}`.
    pub shells: Vec<Vec<usize>>,
    /// Ranks of `I_depth`.
    pub core: Vec<usize>,
}

impl ShellDecomposition {
    /// `mu(I_s \ I_{s+1}) = (m_s - 1) / M_{s+1}`.
    pub fn shell_measure(base: &BaseSequence, s: usize) -> f64 {
        (base.base(s) - 1) as f64 / base.power(s + 1) as f64
    }
}

pub fn shell_decomposition(base: &BaseSequence, depth: usize) -> Result<ShellDecomposition> {
    check_at_most("shell depth", depth, base.resolution())?;
    let mut shells = vec![Vec::new(); depth];
    let mut core = Vec::new();
    for r in 0..base.order() {
        match base.shell_of(r, depth) {
            Some(s) => shells[s].push(r),
            None => core.push(r),
        }
    }
    Ok(ShellDecomposition { shells, core })
}

//! Functions on `G_m` that are constant on rank-`N` cosets, and their
//! (quasi-)norms under the normalized Haar measure.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Result, VilenkinError};
use crate::group::BaseSequence;

/// Default relative tolerance for comparing two routes to the same value.
pub const ROUTE_TOLERANCE: f64 = 1e-9;

/// A complex function sampled on every point of a resolution-`N` group,
/// stored in rank order. Each point carries mass `1 / M_N`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteFunction {
    base: BaseSequence,
    values: Vec<Complex64>,
}

impl FiniteFunction {
    pub fn new(base: &BaseSequence, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != base.order() {
            return Err(VilenkinError::LengthMismatch {
                expected: base.order(),
                got: values.len(),
            });
        }
        Ok(Self {
            base: base.clone(),
            values,
        })
    }

    pub fn from_real(base: &BaseSequence, values: &[f64]) -> Result<Self> {
        Self::new(base, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn from_fn(base: &BaseSequence, f: impl FnMut(usize) -> Complex64) -> Self {
        Self {
            base: base.clone(),
            values: (0..base.order()).map(f).collect(),
        }
    }

    pub fn zeros(base: &BaseSequence) -> Self {
        Self::constant(base, Complex64::new(0.0, 0.0))
    }

    pub fn constant(base: &BaseSequence, c: Complex64) -> Self {
        Self {
            base: base.clone(),
            values: vec![c; base.order()],
        }
    }

    /// `height` at the point of rank `r`, zero elsewhere.
    pub fn point_mass(base: &BaseSequence, r: usize, height: f64) -> Self {
        let mut f = Self::zeros(base);
        f.values[r] = Complex64::new(height, 0.0);
        f
    }

    pub fn base(&self) -> &BaseSequence {
        &self.base
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn value(&self, r: usize) -> Complex64 {
        self.values[r]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            base: self.base.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn abs(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    /// `x -> f(x + h)` where `h` is given by its rank.
    pub fn translate(&self, h: usize) -> Self {
        Self::from_fn(&self.base, |r| self.values[self.base.add_ranks(r, h)])
    }

    /// `int f dmu`.
    pub fn haar_integral(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() / self.values.len() as f64
    }

    /// `(int |f|^p dmu)^{1/p}`.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        check_exponent(p)?;
        Ok(self.abs_pow_integral(p, |_| true).powf(1.0 / p))
    }

    pub fn linf_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `int_E |f|^p dmu` over the set `E = { r : keep(r) }`.
    pub fn abs_pow_integral(&self, p: f64, keep: impl Fn(usize) -> bool) -> f64 {
        let total: f64 = self
            .values
            .iter()
            .enumerate()
            .filter(|(r, _)| keep(*r))
            .map(|(_, v)| v.norm().powf(p))
            .sum();
        total / self.values.len() as f64
    }

    /// `sup_{lambda > 0} lambda mu(|f| > lambda)^{1/p}`.
    ///
    /// On a finite space with atoms of mass `1/M` the supremum is
    /// `max_k v_k (k/M)^{1/p}` over the decreasing rearrangement `v_1 >= v_2 >= ...`.
    pub fn weak_lp_norm(&self, p: f64) -> Result<f64> {
        check_exponent(p)?;
        Ok(weak_lp_of_magnitudes(self.abs(), p))
    }

    /// `max |f - g| / max(|f|, |g|)`, or 0 when both vanish.
    pub fn relative_discrepancy(&self, other: &Self) -> f64 {
        relative_discrepancy(&self.values, &other.values)
    }
}

pub(crate) fn weak_lp_of_magnitudes(mut mags: Vec<f64>, p: f64) -> f64 {
    let m = mags.len() as f64;
    mags.sort_by(|a, b| b.total_cmp(a));
    mags.iter()
        .enumerate()
        .map(|(i, &v)| v * ((i + 1) as f64 / m).powf(1.0 / p))
        .fold(0.0, f64::max)
}

pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(VilenkinError::InvalidExponent(p))
    }
}

pub fn relative_discrepancy(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len(), "length mismatch");
    let scale = a.iter().chain(b).map(|v| v.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    let diff = a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    diff / scale
}

// Arithmetic panics on operands from different groups, like shape
// mismatches in array libraries.

fn zip_with(a: &FiniteFunction, b: &FiniteFunction, op: impl Fn(Complex64, Complex64) -> Complex64) -> FiniteFunction {
    assert!(a.base == b.base, "operands live on different groups");
    FiniteFunction {
        base: a.base.clone(),
        values: a.values.iter().zip(&b.values).map(|(&x, &y)| op(x, y)).collect(),
    }
}

impl Add for &FiniteFunction {
    type Output = FiniteFunction;
    fn add(self, rhs: Self) -> FiniteFunction {
        zip_with(self, rhs, |x, y| x + y)
    }
}

impl Sub for &FiniteFunction {
    type Output = FiniteFunction;
    fn sub(self, rhs: Self) -> FiniteFunction {
        zip_with(self, rhs, |x, y| x - y)
    }
}

impl Add for FiniteFunction {
    type Output = FiniteFunction;
    fn add(self, rhs: Self) -> FiniteFunction {
        &self + &rhs
    }
}

impl Sub for FiniteFunction {
    type Output = FiniteFunction;
    fn sub(self, rhs: Self) -> FiniteFunction {
        &self - &rhs
    }
}

impl Neg for &FiniteFunction {
    type Output = FiniteFunction;
    fn neg(self) -> FiniteFunction {
        self.map(|v| -v)
    }
}

impl Mul<f64> for &FiniteFunction {
    type Output = FiniteFunction;
    fn mul(self, rhs: f64) -> FiniteFunction {
        self.map(|v| v * rhs)
    }
}

impl Mul<f64> for FiniteFunction {
    type Output = FiniteFunction;
    fn mul(mut self, rhs: f64) -> FiniteFunction {
        self.values.iter_mut().for_each(|v| *v *= rhs);
        self
    }
}

impl Mul<Complex64> for &FiniteFunction {
    type Output = FiniteFunction;
    fn mul(self, rhs: Complex64) -> FiniteFunction {
        self.map(|v| v * rhs)
    }
}

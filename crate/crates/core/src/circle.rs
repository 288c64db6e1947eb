//! The unit circle with normalized measure: uniform grids, Fourier
//! analysis and synthesis, Fejér smoothing.
//!
//! Grid functions are read as step functions, one cell of measure `1/N` per
//! sample. Trigonometric polynomials are stored sparsely by frequency.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Magnitude below which coefficients are dropped by [`FourierSeries::compact`].
pub const COMPACT_TOL: f64 = 1e-13;

/// Uniform grid `t_k = exp(2πik/N)` with weight `1/N` per point.
#[derive(Debug, Clone)]
pub struct GridContext {
    n: usize,
    // roots[j] = exp(2πij/N); every power t_k^n is a lookup.
    roots: Arc<[C64]>,
}

impl PartialEq for GridContext {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
    }
}

impl GridContext {
    pub fn new(n: usize) -> Result<Self> {
        if n < 8 || n % 2 != 0 {
            return Err(Error::InvalidGrid(n));
        }
        let roots = (0..n)
            .map(|j| C64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64))
            .collect::<Vec<_>>();
        Ok(Self { n, roots: roots.into() })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn weight(&self) -> f64 {
        1.0 / self.n as f64
    }

    pub fn point(&self, k: usize) -> C64 {
        self.roots[k % self.n]
    }

    /// Angle of the `k`-th point in `[0, 2π)`.
    pub fn angle(&self, k: usize) -> f64 {
        2.0 * PI * (k % self.n) as f64 / self.n as f64
    }

    /// `t_k^n` for any integer power.
    pub fn power(&self, k: usize, n: i64) -> C64 {
        let m = self.n as i64;
        let idx = ((k as i64 % m) * n.rem_euclid(m)).rem_euclid(m);
        self.roots[idx as usize]
    }

    /// Samples of the character `χ_n`.
    pub fn character(&self, n: i64) -> Vec<C64> {
        (0..self.n).map(|k| self.power(k, n)).collect()
    }

    fn check_band(&self, degree: usize) -> Result<()> {
        if 2 * degree >= self.n {
            return Err(Error::Aliasing { degree, points: self.n });
        }
        Ok(())
    }
}

pub fn make_grid(n: usize) -> Result<GridContext> {
    GridContext::new(n)
}

/// Complex samples on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    ctx: GridContext,
    samples: Vec<C64>,
}

impl GridFunction {
    pub fn new(ctx: &GridContext, samples: Vec<C64>) -> Result<Self> {
        if samples.len() != ctx.len() {
            return Err(Error::GridMismatch(ctx.len(), samples.len()));
        }
        Ok(Self { ctx: ctx.clone(), samples })
    }

    pub fn from_real(ctx: &GridContext, values: &[f64]) -> Result<Self> {
        Self::new(ctx, values.iter().map(|&v| C64::new(v, 0.0)).collect())
    }

    pub fn constant(ctx: &GridContext, c: C64) -> Self {
        Self { ctx: ctx.clone(), samples: vec![c; ctx.len()] }
    }

    /// Builds samples from the angle `θ_k ∈ [0, 2π)`.
    pub fn from_angle_fn(ctx: &GridContext, f: impl Fn(f64) -> C64) -> Self {
        let samples = (0..ctx.len()).map(|k| f(ctx.angle(k))).collect();
        Self { ctx: ctx.clone(), samples }
    }

    /// Indicator of the first `count` grid cells, i.e. of the arc `[0, 2π·count/N)`.
    pub fn arc_indicator(ctx: &GridContext, count: usize) -> Self {
        let samples = (0..ctx.len())
            .map(|k| if k < count { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
            .collect();
        Self { ctx: ctx.clone(), samples }
    }

    pub fn ctx(&self) -> &GridContext {
        &self.ctx
    }

    pub fn samples(&self) -> &[C64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<C64> {
        self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn moduli(&self) -> Vec<f64> {
        self.samples.iter().map(|z| z.norm()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.samples.iter().all(|z| z.norm() == 0.0)
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self { ctx: self.ctx.clone(), samples: self.samples.iter().map(|&z| f(z)).collect() }
    }

    pub fn abs(&self) -> Self {
        self.map(|z| C64::new(z.norm(), 0.0))
    }

    pub fn scale(&self, c: C64) -> Self {
        self.map(|z| z * c)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    pub fn zip(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        if self.ctx.len() != other.ctx.len() {
            return Err(Error::GridMismatch(self.ctx.len(), other.ctx.len()));
        }
        let samples = self.samples.iter().zip(&other.samples).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self { ctx: self.ctx.clone(), samples })
    }

    /// `⟨f, g⟩ = ∫ f ḡ dm` on the grid.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.ctx.len() != other.ctx.len() {
            return Err(Error::GridMismatch(self.ctx.len(), other.ctx.len()));
        }
        let s: C64 = self.samples.iter().zip(&other.samples).map(|(a, b)| a * b.conj()).sum();
        Ok(s * self.ctx.weight())
    }

    /// Applies a permutation of grid indices: `out[k] = self[perm[k]]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.len() {
            return Err(Error::GridMismatch(self.len(), perm.len()));
        }
        let samples = perm.iter().map(|&i| self.samples[i]).collect();
        Ok(Self { ctx: self.ctx.clone(), samples })
    }
}

/// Finitely supported Fourier coefficients.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FourierSeries {
    coeffs: BTreeMap<i64, C64>,
}

impl FourierSeries {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The character `χ_n(t) = t^n`.
    pub fn character(n: i64) -> Self {
        Self::from_pairs([(n, C64::new(1.0, 0.0))])
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (i64, C64)>) -> Self {
        let mut s = Self::zero();
        for (n, c) in pairs {
            s.add_to(n, c);
        }
        s
    }

    /// Coefficients `c[i]` placed at indices `start + i`.
    pub fn from_dense(start: i64, coeffs: &[C64]) -> Self {
        Self::from_pairs(coeffs.iter().enumerate().map(|(i, &c)| (start + i as i64, c)))
    }

    pub fn coeff(&self, n: i64) -> C64 {
        self.coeffs.get(&n).copied().unwrap_or_default()
    }

    pub fn set(&mut self, n: i64, c: C64) {
        self.coeffs.insert(n, c);
    }

    pub fn add_to(&mut self, n: i64, c: C64) {
        *self.coeffs.entry(n).or_default() += c;
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, C64)> + '_ {
        self.coeffs.iter().map(|(&n, &c)| (n, c))
    }

    /// Indices with a stored nonzero coefficient.
    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.coeffs.iter().filter(|(_, c)| c.norm() != 0.0).map(|(&n, _)| n)
    }

    pub fn min_index(&self) -> Option<i64> {
        self.support().next()
    }

    pub fn max_index(&self) -> Option<i64> {
        self.support().last()
    }

    /// Largest `|n|` with a nonzero coefficient.
    pub fn degree(&self) -> usize {
        self.support().map(|n| n.unsigned_abs() as usize).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.support().next().is_none()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient magnitude at negative indices.
    pub fn negative_residual(&self) -> f64 {
        self.coeffs.range(..0).map(|(_, c)| c.norm()).fold(0.0, f64::max)
    }

    pub fn compact(mut self) -> Self {
        self.coeffs.retain(|_, c| c.norm() >= COMPACT_TOL);
        self
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(&n, &c)| (n, c * s)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (n, c) in other.iter() {
            out.add_to(n, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    /// Multiplication by `χ_k`.
    pub fn shift(&self, k: i64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(&n, &c)| (n + k, c)).collect() }
    }

    /// Restriction to indices in `lo..=hi`.
    pub fn restrict(&self, lo: i64, hi: i64) -> Self {
        Self { coeffs: self.coeffs.range(lo..=hi).map(|(&n, &c)| (n, c)).collect() }
    }

    /// Dense coefficient vector over `lo..=hi`.
    pub fn dense(&self, lo: i64, hi: i64) -> Vec<C64> {
        (lo..=hi).map(|n| self.coeff(n)).collect()
    }

    /// Largest coefficient-wise distance to `other`.
    pub fn max_diff(&self, other: &Self) -> f64 {
        self.sub(other).max_abs_coeff()
    }

    pub fn l2_norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Fourier coefficients `f̂(n) = ⟨f, χ_n⟩` for `|n| ≤ degree`.
pub fn analyze(f: &GridFunction, degree: usize) -> Result<FourierSeries> {
    let ctx = f.ctx();
    ctx.check_band(degree)?;
    let w = ctx.weight();
    let d = degree as i64;
    let coeffs = (-d..=d).map(|n| {
        let s: C64 = f.samples().iter().enumerate().map(|(k, z)| z * ctx.power(k, -n)).sum();
        (n, s * w)
    });
    Ok(FourierSeries::from_pairs(coeffs).compact())
}

/// Samples `Σ_n c(n) t_k^n`.
pub fn synthesize(c: &FourierSeries, ctx: &GridContext) -> Result<GridFunction> {
    ctx.check_band(c.degree())?;
    Ok(synthesize_unchecked(c, ctx))
}

pub(crate) fn synthesize_unchecked(c: &FourierSeries, ctx: &GridContext) -> GridFunction {
    let mut samples = vec![C64::default(); ctx.len()];
    for (n, a) in c.iter() {
        if a.norm() == 0.0 {
            continue;
        }
        for (k, s) in samples.iter_mut().enumerate() {
            *s += a * ctx.power(k, n);
        }
    }
    GridFunction { ctx: ctx.clone(), samples }
}

/// Fejér weights `max(0, 1 − |k|/(n+1))`, i.e. convolution with `K_n`.
pub fn fejer_smooth(c: &FourierSeries, n: usize) -> FourierSeries {
    let width = (n + 1) as f64;
    FourierSeries::from_pairs(c.iter().filter_map(|(k, a)| {
        let w = 1.0 - k.unsigned_abs() as f64 / width;
        (w > 0.0).then(|| (k, a * w))
    }))
}

pub fn pointwise_product(f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
    f.zip(g, |a, b| a * b)
}

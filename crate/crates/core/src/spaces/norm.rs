use crate::circle::{GridFunction, C64};
use crate::error::{Error, Result};
use crate::exponent::Exponent;

use super::{NormEstimate, OrliczSpec, SpaceSpec};

/// Fraction of grid points with `|f| > λ`.
pub fn distribution(f: &GridFunction, lambda: f64) -> f64 {
    let count = f.samples().iter().filter(|z| z.norm() > lambda).count();
    count as f64 / f.len() as f64
}

/// Moduli sorted in non-increasing order: the values of `f*` on the cells
/// `[k/N, (k+1)/N)`.
pub fn rearrangement(f: &GridFunction) -> Vec<f64> {
    sorted_moduli(f.samples())
}

fn sorted_moduli(samples: &[C64]) -> Vec<f64> {
    let mut m: Vec<f64> = samples.iter().map(|z| z.norm()).collect();
    m.sort_unstable_by(|a, b| b.total_cmp(a));
    m
}

pub fn norm(f: &GridFunction, space: &SpaceSpec) -> Result<NormEstimate> {
    let value = NormEvaluator::new(space, f.len())?.eval(f.samples())?;
    Ok(NormEstimate::exact(value))
}

/// Norm evaluation for a fixed space and grid size, with the Lorentz cell
/// weights precomputed.
#[derive(Debug, Clone)]
pub struct NormEvaluator {
    kind: Kind,
}

#[derive(Debug, Clone)]
enum Kind {
    Sup,
    Lebesgue(f64),
    /// `q < ∞`: `‖f‖^q = Σ_k f*_k^q w_k` with `w_k = ∫_{k/N}^{(k+1)/N} s^{q/p−1} ds`.
    Lorentz { q: f64, weights: Vec<f64> },
    /// `q = ∞`: `sup_k f*_k ((k+1)/N)^{1/p}`.
    WeakLorentz { scale: Vec<f64> },
    Orlicz(OrliczSpec),
}

impl NormEvaluator {
    pub fn new(space: &SpaceSpec, n: usize) -> Result<Self> {
        let kind = match space.canonical() {
            SpaceSpec::Bounded => Kind::Sup,
            SpaceSpec::Lebesgue { p } => Kind::Lebesgue(p.to_f64()),
            SpaceSpec::Lorentz { p, q } => lorentz_kind(p, q, n)?,
            SpaceSpec::Orlicz(phi) => Kind::Orlicz(phi),
        };
        Ok(Self { kind })
    }

    pub fn eval(&self, samples: &[C64]) -> Result<f64> {
        self.eval_with(samples, Summation::Exact)
    }

    fn eval_with(&self, samples: &[C64], sum: Summation) -> Result<f64> {
        let n = samples.len() as f64;
        Ok(match &self.kind {
            Kind::Sup => samples.iter().map(|z| z.norm()).fold(0.0, f64::max),
            Kind::Lebesgue(p) => lebesgue(samples, *p, sum),
            Kind::Lorentz { q, weights } => {
                let sorted = sorted_moduli(samples);
                let s: f64 = sorted.iter().zip(weights).map(|(v, w)| v.powf(*q) * w).sum();
                s.powf(1.0 / q)
            }
            Kind::WeakLorentz { scale } => {
                let sorted = sorted_moduli(samples);
                sorted.iter().zip(scale).map(|(v, s)| v * s).fold(0.0, f64::max)
            }
            Kind::Orlicz(phi) => luxemburg(samples, phi, n, sum)?,
        })
    }

    /// Infallible variant for search objectives; failures count as `+∞`.
    /// Sums in sample order, which is faster but only accurate to rounding.
    pub(crate) fn eval_or_inf(&self, samples: &[C64]) -> f64 {
        self.eval_with(samples, Summation::Ordered).unwrap_or(f64::INFINITY)
    }
}

fn lorentz_kind(p: Exponent, q: Exponent, n: usize) -> Result<Kind> {
    let nf = n as f64;
    match (p, q) {
        (Exponent::Infinite, Exponent::Infinite) => Ok(Kind::Sup),
        (Exponent::Infinite, _) => {
            Err(Error::Unsupported(format!("L^{{inf,{q}}} is trivial; no finite norm for nonzero functions")))
        }
        (p, Exponent::Infinite) => {
            let ip = 1.0 / p.to_f64();
            Ok(Kind::WeakLorentz { scale: (0..n).map(|k| ((k + 1) as f64 / nf).powf(ip)).collect() })
        }
        (p, q) => {
            let r = q.to_f64() / p.to_f64();
            let c = 1.0 / r;
            let weights = (0..n)
                .map(|k| c * (((k + 1) as f64 / nf).powf(r) - (k as f64 / nf).powf(r)))
                .collect();
            Ok(Kind::Lorentz { q: q.to_f64(), weights })
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Summation {
    Exact,
    Ordered,
}

impl Summation {
    fn sum(self, terms: impl Iterator<Item = f64>) -> f64 {
        match self {
            Summation::Exact => exact_sum(terms),
            Summation::Ordered => terms.sum(),
        }
    }
}

/// Sum of nonnegative terms, exact until the final rounding, so the result
/// does not depend on the order of the samples (rearrangement invariance
/// holds bit for bit).
fn exact_sum(terms: impl Iterator<Item = f64>) -> f64 {
    // term = mantissa · 2^(e − 1075); bin b holds multiples of 2^(64b − 1075)
    const BINS: usize = 34;
    const CARRY_EVERY: usize = 1 << 11;
    let mut bins = [0u128; BINS];
    let normalize = |bins: &mut [u128; BINS]| {
        for b in 0..BINS - 1 {
            bins[b + 1] += bins[b] >> 64;
            bins[b] &= u64::MAX as u128;
        }
    };
    let mut infinite = false;
    for (i, t) in terms.enumerate() {
        if t.is_nan() {
            return f64::NAN;
        }
        if t == f64::INFINITY {
            infinite = true;
            continue;
        }
        debug_assert!(t >= 0.0, "exact_sum takes nonnegative terms");
        let bits = t.to_bits();
        let e = ((bits >> 52) & 0x7ff) as usize;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, e) = if e == 0 { (frac, 1) } else { (frac | (1u64 << 52), e) };
        bins[e / 64] += (mant as u128) << (e % 64);
        if (i + 1) % CARRY_EVERY == 0 {
            normalize(&mut bins);
        }
    }
    if infinite {
        return f64::INFINITY;
    }
    normalize(&mut bins);
    bins.iter()
        .enumerate()
        .rev()
        .filter(|(_, &v)| v != 0)
        .map(|(b, &v)| {
            let k = 64 * b as i32 - 1075;
            // keep every power of two normal
            if k < -1000 {
                v as f64 * 2f64.powi(-75) * 2f64.powi(k + 75)
            } else {
                v as f64 * 2f64.powi(k)
            }
        })
        .fold(0.0, |acc, x| acc + x)
}

fn lebesgue(samples: &[C64], p: f64, sum: Summation) -> f64 {
    let n = samples.len() as f64;
    if p == f64::INFINITY {
        return samples.iter().map(|z| z.norm()).fold(0.0, f64::max);
    }
    let s = if p == 2.0 {
        sum.sum(samples.iter().map(|z| z.norm_sqr()))
    } else if p == 4.0 {
        sum.sum(samples.iter().map(|z| z.norm_sqr() * z.norm_sqr()))
    } else if p == 1.0 {
        sum.sum(samples.iter().map(|z| z.norm()))
    } else {
        let h = 0.5 * p;
        sum.sum(samples.iter().map(|z| z.norm_sqr().powf(h)))
    };
    (s / n).powf(1.0 / p)
}

const BISECTION_ITERS: usize = 200;
const BISECTION_TOL: f64 = 1e-10;

fn modular(moduli: &[f64], phi: &OrliczSpec, lambda: f64, sum: Summation) -> f64 {
    let n = moduli.len() as f64;
    sum.sum(moduli.iter().map(|&m| phi.eval(m / lambda))) / n
}

/// Luxemburg norm: the smallest `λ` with modular `∫ φ(|f|/λ) dm ≤ 1`, by
/// bisection in `log λ` on `[max|f|/φ⁻¹(N), max|f|/φ⁻¹(1/N)]`.
fn luxemburg(samples: &[C64], phi: &OrliczSpec, n: f64, sum: Summation) -> Result<f64> {
    let moduli: Vec<f64> = samples.iter().map(|z| z.norm()).collect();
    let top = moduli.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return Ok(0.0);
    }
    let mut lo = top / phi.inverse(n)?;
    let mut hi = top / phi.inverse(1.0 / n)?;
    if !(lo > 0.0 && lo.is_finite() && hi.is_finite() && hi >= lo) {
        return Err(Error::Bisection(format!("degenerate bracket [{lo}, {hi}]")));
    }
    if modular(&moduli, phi, hi, sum) > 1.0 + 1e-12 {
        return Err(Error::Bisection(format!("modular exceeds 1 at upper end λ = {hi}")));
    }
    if modular(&moduli, phi, lo, sum) < 1.0 - 1e-12 {
        return Err(Error::Bisection(format!("modular below 1 at lower end λ = {lo}")));
    }
    for _ in 0..BISECTION_ITERS {
        let mid = (lo * hi).sqrt();
        if modular(&moduli, phi, mid, sum) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= BISECTION_TOL * hi * 1e-4 {
            break;
        }
    }
    Ok(hi)
}

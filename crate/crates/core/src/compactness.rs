//! Noncompactness of Toeplitz operators: the inclusion constant of
//! `Y ⊂ L¹`, the lower bound `m·max|â(n)|`, and separated sequences
//! `T_a χ_{k_n}` certifying it.

use crate::circle::{synthesize, FourierSeries, GridContext, GridFunction, C64};
use crate::error::{Error, Result};
use crate::operators::apply_toeplitz;
use crate::spaces::{koethe_dual, NormEvaluator, SpaceSpec};

/// Cap on the search for `k₁`.
pub const SCAN_CAP: usize = 10_000;

/// Optimal `m` with `m‖f‖₁ ≤ ‖f‖_Y`, i.e. `1/‖1‖_{Y'}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InclusionConstant {
    pub m: f64,
    /// `false` when `Y'` is only known up to equivalent norms.
    pub isometric: bool,
}

pub fn inclusion_constant(y: &SpaceSpec, ctx: &GridContext) -> Result<InclusionConstant> {
    let dual = koethe_dual(y)?;
    let one = vec![C64::new(1.0, 0.0); ctx.len()];
    let v = NormEvaluator::new(&dual.space, ctx.len())?.eval(&one)?;
    Ok(InclusionConstant { m: 1.0 / v, isometric: dual.isometric })
}

/// `m · max_n |â(n)|`, a lower bound for the measure of noncompactness.
pub fn noncompactness_bound(a: &FourierSeries, y: &SpaceSpec, ctx: &GridContext) -> Result<f64> {
    Ok(inclusion_constant(y, ctx)?.m * a.max_abs_coeff())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparationCertificate {
    /// `k_n = k₀ + n(k₁ − k₀)`, `0 ≤ n ≤ L`.
    pub indices: Vec<i64>,
    pub epsilon: f64,
    /// Index of a largest coefficient and its modulus `c`.
    pub s: i64,
    pub c: f64,
    pub m: f64,
    /// Smallest `‖T_aχ_{k_n} − T_aχ_{k_l}‖₁` over all pairs.
    pub pairwise_min: f64,
    /// Smallest `‖T_aχ_{k_n} − T_aχ_{k_l}‖_Y` over all pairs.
    pub pairwise_min_y: f64,
    /// `c(1 − ε)`.
    pub l1_bound: f64,
    /// `m·c(1 − ε)`.
    pub bound: f64,
    pub valid: bool,
}

/// Largest coefficient index, ties to the smallest `|s|`, then negative.
fn dominant_index(a: &FourierSeries) -> (i64, f64) {
    let c = a.max_abs_coeff();
    let tol = c * 1e-12;
    let s = a
        .iter()
        .filter(|(_, z)| z.norm() >= c - tol)
        .map(|(n, _)| n)
        .min_by_key(|&n| (n.unsigned_abs(), n > 0))
        .expect("nonzero series");
    (s, c)
}

/// Smallest `j ≥ 1` such that `|â(s ± i)| ≤ bound` for every `i ≥ j` in one
/// of the two directions.
fn tail_step(a: &FourierSeries, s: i64, bound: f64) -> usize {
    let step = |dir: i64| -> usize {
        a.iter()
            .filter(|(n, z)| (n - s) * dir > 0 && z.norm() > bound)
            .map(|(n, _)| ((n - s) * dir) as usize + 1)
            .max()
            .unwrap_or(1)
    };
    step(1).min(step(-1))
}

/// Builds `k₀, k₁` and the arithmetic progression `k_n`, then verifies the
/// pairwise separations by brute force on the grid.
pub fn separated_sequence(
    a: &FourierSeries,
    epsilon: f64,
    count: usize,
    y: &SpaceSpec,
    ctx: &GridContext,
) -> Result<SeparationCertificate> {
    if a.is_zero() {
        return Err(Error::ZeroInput("symbol"));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let (s, c) = dominant_index(a);
    let k0 = -s.min(0);
    let tail = epsilon * c;
    let k1 = if s < 0 {
        // smallest k > k₀ with |â(−j)| ≤ εc for all j ≥ k
        let last_big = a.iter().filter(|(n, z)| *n < 0 && z.norm() > tail).map(|(n, _)| -n).max().unwrap_or(0);
        (last_big + 1).max(k0 + 1)
    } else {
        k0 + tail_step(a, s, tail) as i64
    };
    if (k1 - k0) as usize > SCAN_CAP {
        return Err(Error::ScanCap(SCAN_CAP));
    }
    let indices: Vec<i64> = (0..=count as i64).map(|n| k0 + n * (k1 - k0)).collect();
    let top = *indices.last().expect("nonempty");
    let degree = a.degree() + top as usize;
    if 2 * degree >= ctx.len() {
        return Err(Error::Aliasing { degree, points: ctx.len() });
    }

    let images: Vec<GridFunction> = indices
        .iter()
        .map(|&k| synthesize(&apply_toeplitz(a, &FourierSeries::character(k), ctx)?, ctx))
        .collect::<Result<_>>()?;
    let l1 = NormEvaluator::new(&SpaceSpec::lebesgue(1.0)?, ctx.len())?;
    let ye = NormEvaluator::new(y, ctx.len())?;
    let (mut pairwise_min, mut pairwise_min_y) = (f64::INFINITY, f64::INFINITY);
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            let d = images[i].sub(&images[j])?;
            pairwise_min = pairwise_min.min(l1.eval(d.samples())?);
            pairwise_min_y = pairwise_min_y.min(ye.eval(d.samples())?);
        }
    }
    let m = inclusion_constant(y, ctx)?.m;
    let l1_bound = c * (1.0 - epsilon);
    let bound = m * l1_bound;
    let valid = pairwise_min >= l1_bound - 1e-10 && pairwise_min_y >= bound - 1e-10;
    Ok(SeparationCertificate { indices, epsilon, s, c, m, pairwise_min, pairwise_min_y, l1_bound, bound, valid })
}

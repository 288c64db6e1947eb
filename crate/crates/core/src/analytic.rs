//! Riesz projection, conjugate function, the flip `J`, and outer functions.

use crate::circle::{analyze, synthesize, FourierSeries, GridContext, GridFunction, C64};
use crate::error::{Error, Result};
use crate::search::{random_coeffs, restart_rng, AscentParams, LinearRatio};
use crate::spaces::{boyd_indices, Mode, NormEstimate, NormEvaluator, SpaceSpec, VariationalBudget, Witness};

/// Log-clipping floor for outer functions, relative to `max w`.
pub const OUTER_FLOOR: f64 = 1e-8;

/// Tolerance on negative-index coefficients for accepted Hardy-space members.
pub const ANALYTIC_TOL: f64 = 1e-10;

/// `P`: drops the negative frequencies.
pub fn riesz_project(c: &FourierSeries) -> FourierSeries {
    FourierSeries::from_pairs(c.iter().filter(|(n, _)| *n >= 0))
}

/// `f̃`: the coefficient multiplier `−i·sign(n)`.
pub fn conjugate_function(c: &FourierSeries) -> FourierSeries {
    let i = C64::new(0.0, 1.0);
    FourierSeries::from_pairs(c.iter().filter(|(n, _)| *n != 0).map(|(n, a)| (n, if n > 0 { -i * a } else { i * a })))
}

/// `Jf(t) = t⁻¹ f(t⁻¹)`: coefficient `n` moves to `−1−n`.
pub fn flip(c: &FourierSeries) -> FourierSeries {
    FourierSeries::from_pairs(c.iter().map(|(n, a)| (-1 - n, a)))
}

/// `J` on grid samples: a unimodular factor times a permutation, hence an
/// isometry of every rearrangement-invariant norm.
pub fn flip_grid(f: &GridFunction) -> GridFunction {
    let ctx = f.ctx();
    let n = ctx.len();
    let s = f.samples();
    let samples = (0..n).map(|k| ctx.power(k, -1) * s[(n - k) % n]).collect();
    GridFunction::new(ctx, samples).expect("grid-sized")
}

/// A series certified to lie (numerically) in the Hardy space.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticWitness {
    pub series: FourierSeries,
    /// Largest modulus over negative indices.
    pub residual: f64,
}

impl AnalyticWitness {
    /// Accepts `series` when its negative part is at most `tol`.
    pub fn certify(series: FourierSeries, tol: f64) -> Result<Self> {
        let residual = series.negative_residual();
        if residual > tol {
            return Err(Error::InvalidArgument(format!("negative-index residual {residual:.3e} exceeds {tol:.1e}")));
        }
        Ok(Self { series, residual })
    }
}

/// Lower bound for `‖P‖_{Y→Y}` over trigonometric polynomials of degree at
/// most `d`. `warm`, when given, is added as a starting point, so chaining
/// the witness of a smaller budget makes the estimate monotone.
pub fn riesz_norm_estimate(
    y: &SpaceSpec,
    ctx: &GridContext,
    budget: VariationalBudget,
    warm: Option<&FourierSeries>,
) -> Result<NormEstimate> {
    if *y == SpaceSpec::lebesgue(2.0)? {
        return Ok(NormEstimate::exact(1.0).with_note("orthogonal projection on L^2"));
    }
    let boyd = boyd_indices(y)?;
    let eval = NormEvaluator::new(y, ctx.len())?;
    let d = budget.degree as i64;
    let idx: Vec<i64> = (-d..=d).collect();
    let den_cols: Vec<Vec<C64>> = idx.iter().map(|&j| ctx.character(j)).collect();
    let num_cols: Vec<Vec<C64>> = idx
        .iter()
        .zip(&den_cols)
        .map(|(&j, col)| if j >= 0 { col.clone() } else { vec![C64::default(); ctx.len()] })
        .collect();
    let norm = |v: &[C64]| eval.eval_or_inf(v);
    let prob = LinearRatio { num_cols, den_cols, num: &norm, den: &norm };

    let mut starts: Vec<Vec<C64>> = vec![idx.iter().map(|&j| C64::new((j == 0) as u8 as f64, 0.0)).collect()];
    if let Some(w) = warm {
        starts.push(idx.iter().map(|&j| w.coeff(j)).collect());
    }
    for i in 0..budget.restarts {
        starts.push(random_coeffs(&mut restart_rng(budget.seed, i as u64), idx.len()));
    }
    let (mut best_c, mut best) = (Vec::new(), f64::NEG_INFINITY);
    for s in &starts {
        let (c, v) = prob.ascend(s, AscentParams::default());
        if v > best {
            best = v;
            best_c = c;
        }
    }
    let witness = FourierSeries::from_pairs(idx.iter().copied().zip(best_c));
    let mut est = NormEstimate::new(best, Mode::LowerBound).with_witness(Witness::Series(witness));
    if !boyd.nontrivial() {
        est = est.with_note(format!(
            "Boyd indices ({}, {}) are trivial: P is unbounded on {y}; the estimate grows with the degree",
            boyd.alpha, boyd.beta
        ));
    }
    Ok(est)
}

/// Boundary values of an outer function with prescribed modulus.
#[derive(Debug, Clone, PartialEq)]
pub struct OuterFunction {
    pub samples: GridFunction,
    /// Coefficients for `|n| < N/2`; the negative part is aliasing only.
    pub series: FourierSeries,
    /// Grid points where `w` was raised to the floor.
    pub clipped: Vec<bool>,
}

/// `F = exp(û(0) + 2 Σ_{n>0} û(n) χ_n)` with `u = log max(w, ε·max w)`.
///
/// On the grid `|F| = max(w, ε·max w)` up to rounding.
pub fn outer_function(w: &GridFunction, eps: f64) -> Result<OuterFunction> {
    let ctx = w.ctx();
    let n = ctx.len();
    let moduli = w.moduli();
    let top = moduli.iter().copied().fold(0.0, f64::max);
    if !(top > 0.0) {
        return Err(Error::ZeroInput("outer-function modulus"));
    }
    let floor = eps * top;
    let clipped: Vec<bool> = moduli.iter().map(|&m| m < floor).collect();
    let u: Vec<f64> = moduli.iter().map(|&m| m.max(floor).ln()).collect();

    // û(n) for 0 ≤ n ≤ N/2, by direct summation
    let half = n / 2;
    let weight = ctx.weight();
    let uhat: Vec<C64> = (0..=half)
        .map(|m| u.iter().enumerate().map(|(k, &v)| ctx.power(k, -(m as i64)) * v).sum::<C64>() * weight)
        .collect();
    let samples: Vec<C64> = (0..n)
        .map(|k| {
            let mut s = uhat[0];
            for (m, &c) in uhat.iter().enumerate().skip(1) {
                let factor = if m == half { 1.0 } else { 2.0 };
                s += c * factor * ctx.power(k, m as i64);
            }
            s.exp()
        })
        .collect();
    let samples = GridFunction::new(ctx, samples)?;
    let series = analyze(&samples, half - 1)?;
    Ok(OuterFunction { samples, series, clipped })
}

/// Result of the analytic factorization `h = x·y`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticFactorization {
    pub x: FourierSeries,
    pub y: FourierSeries,
    pub x_samples: GridFunction,
    pub y_samples: GridFunction,
    /// `max |x·y − h| / max |h|` on the grid.
    pub product_error: f64,
    /// `max | |x| − modF |` over unclipped points, relative to `max modF`.
    pub modulus_error: f64,
    /// Largest negative-index coefficient of `x`, relative to its largest.
    pub x_residual: f64,
}

/// Factors an analytic `h` with `|h| = modF·modG` as `x·y`, `y` the outer
/// function of `modG` and `x = h/y`, so `|x| = modF` and `x` stays analytic.
pub fn analytic_factorize(
    h: &FourierSeries,
    mod_f: &GridFunction,
    mod_g: &GridFunction,
    eps: f64,
) -> Result<AnalyticFactorization> {
    AnalyticWitness::certify(h.clone(), ANALYTIC_TOL * h.max_abs_coeff().max(1.0))?;
    let ctx = mod_f.ctx();
    if mod_g.len() != ctx.len() {
        return Err(Error::GridMismatch(ctx.len(), mod_g.len()));
    }
    let hs = synthesize(h, ctx)?;
    let hmax = hs.max_abs();
    if !(hmax > 0.0) {
        return Err(Error::ZeroInput("h"));
    }
    let mismatch = hs
        .samples()
        .iter()
        .zip(mod_f.samples().iter().zip(mod_g.samples()))
        .map(|(z, (f, g))| (z.norm() - f.norm() * g.norm()).abs())
        .fold(0.0, f64::max);
    if mismatch > 1e-6 * hmax {
        return Err(Error::ModulusMismatch(mismatch));
    }

    let outer_g = outer_function(mod_g, eps)?;
    let y_samples = outer_g.samples;
    let x_samples = hs.zip(&y_samples, |a, b| a / b)?;
    let recon = x_samples.zip(&y_samples, |a, b| a * b)?;
    let product_error = recon.sub(&hs)?.max_abs() / hmax;
    if !product_error.is_finite() {
        return Err(Error::ModulusMismatch(f64::INFINITY));
    }
    let fmax = mod_f.max_abs();
    let floor = eps * fmax;
    let modulus_error = x_samples
        .samples()
        .iter()
        .zip(mod_f.samples())
        .filter(|(_, f)| f.norm() >= floor)
        .map(|(x, f)| (x.norm() - f.norm()).abs())
        .fold(0.0, f64::max)
        / fmax;
    let half = ctx.len() / 2 - 1;
    let x = analyze(&x_samples, half)?;
    let y = outer_g.series;
    let x_residual = x.negative_residual() / x.max_abs_coeff().max(f64::MIN_POSITIVE);
    Ok(AnalyticFactorization { x, y, x_samples, y_samples, product_error, modulus_error, x_residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::make_grid;
    use crate::spaces::norm;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn projection_examples() {
        let s = FourierSeries::from_pairs([(-1, c(1.0, 0.0)), (0, c(1.0, 0.0)), (1, c(1.0, 0.0))]);
        assert_eq!(riesz_project(&s), FourierSeries::from_pairs([(0, c(1.0, 0.0)), (1, c(1.0, 0.0))]));
        assert_eq!(riesz_project(&riesz_project(&s)), riesz_project(&s));
        assert!(riesz_project(&FourierSeries::from_pairs([(-3, c(0.0, 5.0))])).is_zero());
    }

    #[test]
    fn conjugate_identity() {
        assert_eq!(conjugate_function(&FourierSeries::character(1)), FourierSeries::from_pairs([(1, c(0.0, -1.0))]));
        assert_eq!(conjugate_function(&FourierSeries::character(-1)), FourierSeries::from_pairs([(-1, c(0.0, 1.0))]));
        let s = FourierSeries::from_pairs([(-2, c(0.3, -1.0)), (0, c(2.0, 0.5)), (3, c(-1.0, 0.25))]);
        let i = c(0.0, 1.0);
        let rhs = s.add(&conjugate_function(&s).scale(i)).add(&FourierSeries::from_pairs([(0, s.coeff(0))])).scale(c(0.5, 0.0));
        assert!(riesz_project(&s).max_diff(&rhs) < 1e-15);
        // real f ↦ real f̃
        let real = FourierSeries::from_pairs([(-2, c(1.0, 2.0)), (2, c(1.0, -2.0)), (0, c(3.0, 0.0))]);
        let ct = conjugate_function(&real);
        assert!((ct.coeff(2) - ct.coeff(-2).conj()).norm() < 1e-15);
    }

    #[test]
    fn flip_is_an_involutive_isometry() {
        assert_eq!(flip(&FourierSeries::character(3)), FourierSeries::character(-4));
        let s = FourierSeries::from_pairs([(-2, c(0.3, -1.0)), (0, c(2.0, 0.5)), (3, c(-1.0, 0.25))]);
        assert_eq!(flip(&flip(&s)), s);
        let ctx = make_grid(64).unwrap();
        let f = synthesize(&s, &ctx).unwrap();
        let jf = flip_grid(&f);
        assert!(jf.sub(&synthesize(&flip(&s), &ctx).unwrap()).unwrap().max_abs() < 1e-12);
        let x = SpaceSpec::lorentz(4.0, 2.0).unwrap();
        let (a, b) = (norm(&f, &x).unwrap().value, norm(&jf, &x).unwrap().value);
        assert!((a - b).abs() < 1e-12 * a);
    }

    #[test]
    fn riesz_norm_basics() {
        let ctx = make_grid(128).unwrap();
        let l2 = riesz_norm_estimate(&SpaceSpec::lebesgue(2.0).unwrap(), &ctx, VariationalBudget::new(4, 2, 0), None).unwrap();
        assert_eq!(l2.value, 1.0);
        let b = VariationalBudget::new(4, 2, 0);
        let l4 = riesz_norm_estimate(&SpaceSpec::lebesgue(4.0).unwrap(), &ctx, b, None).unwrap();
        assert!(l4.value > 1.0 && l4.mode == Mode::LowerBound);
        let Some(Witness::Series(w)) = &l4.witness else { panic!() };
        let bigger = riesz_norm_estimate(&SpaceSpec::lebesgue(4.0).unwrap(), &ctx, VariationalBudget::new(8, 2, 0), Some(w)).unwrap();
        assert!(bigger.value >= l4.value - 1e-12);
        let linf = riesz_norm_estimate(&SpaceSpec::Bounded, &ctx, b, None).unwrap();
        assert!(linf.note.is_some());
    }

    #[test]
    fn outer_of_constant_and_polynomial() {
        let ctx = make_grid(128).unwrap();
        let two = GridFunction::constant(&ctx, c(2.0, 0.0));
        let f = outer_function(&two, OUTER_FLOOR).unwrap();
        assert!(f.samples.sub(&two).unwrap().max_abs() < 1e-12);

        let p = FourierSeries::from_pairs([(0, c(1.0, 0.0)), (1, c(0.5, 0.0))]);
        let ps = synthesize(&p, &ctx).unwrap();
        let outer = outer_function(&ps.abs(), OUTER_FLOOR).unwrap();
        let unimodular = outer.samples.samples()[0] / ps.samples()[0];
        assert!((unimodular.norm() - 1.0).abs() < 1e-10);
        assert!(outer.samples.sub(&ps.scale(unimodular)).unwrap().max_abs() < 1e-10);

        let w = GridFunction::from_angle_fn(&ctx, |t| c(2.0 + t.cos() + 0.3 * (2.0 * t).sin(), 0.0));
        let o = outer_function(&w, OUTER_FLOOR).unwrap();
        for (z, m) in o.samples.samples().iter().zip(w.samples()) {
            assert!((z.norm() / m.re - 1.0).abs() < 1e-6);
        }
        assert!(outer_function(&GridFunction::constant(&ctx, C64::default()), OUTER_FLOOR).is_err());
    }

    #[test]
    fn factorization_of_characters_and_products() {
        let ctx = make_grid(128).unwrap();
        let one = GridFunction::constant(&ctx, c(1.0, 0.0));
        let fac = analytic_factorize(&FourierSeries::character(1), &one, &one, OUTER_FLOOR).unwrap();
        assert!(fac.product_error < 1e-12 && fac.modulus_error < 1e-12);
        assert!(fac.x.max_diff(&FourierSeries::character(1)) < 1e-10);

        let p = FourierSeries::from_pairs([(0, c(1.0, 0.0)), (1, c(0.3, 0.2))]);
        let q = FourierSeries::from_pairs([(0, c(2.0, 0.0)), (2, c(-0.5, 0.4))]);
        let (ps, qs) = (synthesize(&p, &ctx).unwrap(), synthesize(&q, &ctx).unwrap());
        let h = analyze(&ps.zip(&qs, |a, b| a * b).unwrap(), 3).unwrap();
        let fac = analytic_factorize(&h, &ps.abs(), &qs.abs(), OUTER_FLOOR).unwrap();
        assert!(fac.product_error < 1e-6 && fac.modulus_error < 1e-6 && fac.x_residual < 1e-6);
        assert!(analytic_factorize(&h, &ps.abs(), &ps.abs(), OUTER_FLOOR).is_err());
        assert!(analytic_factorize(&FourierSeries::character(-1), &one, &one, OUTER_FLOOR).is_err());
    }
}

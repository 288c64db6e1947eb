//! Variational norm estimates: duality through polynomials, multiplier norms
//! and product-space factorizations.

use crate::circle::{FourierSeries, GridFunction, C64};
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::search::{golden_max, golden_min, random_coeffs, restart_rng, AscentParams, LinearRatio};

use super::{koethe_dual, multiplier_space, Mode, NormEstimate, NormEvaluator, SpaceSpec, Witness};

/// Search budget shared by the variational estimators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VariationalBudget {
    /// Largest polynomial degree in the search family.
    pub degree: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl VariationalBudget {
    pub fn new(degree: usize, restarts: usize, seed: u64) -> Self {
        Self { degree, restarts, seed }
    }
}

fn phase(z: C64) -> C64 {
    let r = z.norm();
    if r > 0.0 {
        z / r
    } else {
        C64::new(1.0, 0.0)
    }
}

/// Lower bound for `‖f‖_X` as `sup |∫ f p dm|` over trigonometric polynomials
/// `p` of degree at most `d` with `‖p‖_{X'} ≤ 1`.
///
/// Certified for Lebesgue and Lorentz spaces, where the grid pairing obeys
/// Hölder's inequality with constant one; heuristic for Orlicz spaces.
pub fn dual_norm_via_polynomials(f: &GridFunction, x: &SpaceSpec, budget: VariationalBudget) -> Result<NormEstimate> {
    if budget.degree == 0 {
        return Err(Error::InvalidArgument("polynomial degree must be at least 1".into()));
    }
    let mode = match x.canonical() {
        SpaceSpec::Orlicz(_) => Mode::Heuristic,
        _ => Mode::LowerBound,
    };
    if f.is_zero() {
        return Ok(NormEstimate::new(0.0, mode));
    }
    let ctx = f.ctx();
    let n = ctx.len();
    let dual = koethe_dual(x)?.space;
    let den_eval = NormEvaluator::new(&dual, n)?;
    let d = budget.degree as i64;
    let idx: Vec<i64> = (-d..=d).collect();
    let w = ctx.weight();
    let den_cols: Vec<Vec<C64>> = idx.iter().map(|&j| ctx.character(j)).collect();
    // ∫ f χ_j dm
    let pairing: Vec<C64> =
        den_cols.iter().map(|col| f.samples().iter().zip(col).map(|(a, b)| a * b).sum::<C64>() * w).collect();
    let num_cols: Vec<Vec<C64>> = pairing.iter().map(|&v| vec![v]).collect();
    let num = |v: &[C64]| v[0].norm();
    let den = |v: &[C64]| den_eval.eval_or_inf(v);
    let prob = LinearRatio { num_cols, den_cols, num: &num, den: &den };

    // Hölder-extremal profile conj(sgn f)|f|^{p-1}, projected onto the band.
    let p = match x.canonical() {
        SpaceSpec::Lebesgue { p } | SpaceSpec::Lorentz { p, .. } if !p.is_infinite() => p.to_f64(),
        SpaceSpec::Bounded => 1.0,
        _ => 2.0,
    };
    let extremal: Vec<C64> = f.samples().iter().map(|z| phase(*z).conj() * z.norm().powf(p - 1.0)).collect();
    let projected: Vec<C64> = idx
        .iter()
        .map(|&j| extremal.iter().enumerate().map(|(k, e)| e * ctx.power(k, -j)).sum::<C64>() * w)
        .collect();
    let mut starts = vec![projected, idx.iter().map(|&j| C64::new((j == 0) as u8 as f64, 0.0)).collect()];
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
    let witness = FourierSeries::from_pairs(idx.iter().copied().zip(best_c)).compact();
    Ok(NormEstimate::new(best.max(0.0), mode).with_witness(Witness::Series(witness)))
}

/// Lower bound for `‖a‖_{M(X,Y)} = sup ‖a g‖_Y / ‖g‖_X`.
///
/// Searches the profiles `g = |a|^γ` for `γ ∈ [0, 3]` and then polynomial
/// `g` of degree at most `d` from seeded restarts.
pub fn multiplier_norm_variational(
    a: &GridFunction,
    x: &SpaceSpec,
    y: &SpaceSpec,
    budget: VariationalBudget,
) -> Result<NormEstimate> {
    if multiplier_space(x, y).is_zero() {
        return Err(Error::ZeroMultiplier);
    }
    if a.is_zero() {
        return Ok(NormEstimate::new(0.0, Mode::LowerBound));
    }
    let ctx = a.ctx();
    let n = ctx.len();
    let xe = NormEvaluator::new(x, n)?;
    let ye = NormEvaluator::new(y, n)?;
    let moduli = a.moduli();

    let profile = |gamma: f64| -> Vec<C64> {
        moduli.iter().map(|&m| C64::new(if m > 0.0 { m.powf(gamma) } else { 0.0 }, 0.0)).collect()
    };
    let ratio = |g: &[C64]| -> f64 {
        let gx = xe.eval_or_inf(g);
        if !(gx > 0.0) || !gx.is_finite() {
            return 0.0;
        }
        let ag: Vec<C64> = g.iter().zip(a.samples()).map(|(u, v)| u * v).collect();
        let v = ye.eval_or_inf(&ag) / gx;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };

    let step = 0.25;
    let (mut g_best, mut best) = (0.0, f64::NEG_INFINITY);
    for i in 0..=12 {
        let gamma = i as f64 * step;
        let v = ratio(&profile(gamma));
        if v > best {
            best = v;
            g_best = gamma;
        }
    }
    let (gr, vr) = golden_max(|t| ratio(&profile(t)), (g_best - step).max(0.0), g_best + step, 30);
    if vr > best {
        best = vr;
        g_best = gr;
    }
    let mut witness = profile(g_best);

    if budget.degree > 0 && budget.restarts > 0 {
        let d = budget.degree as i64;
        let den_cols: Vec<Vec<C64>> = (-d..=d).map(|j| ctx.character(j)).collect();
        let num_cols: Vec<Vec<C64>> =
            den_cols.iter().map(|col| col.iter().zip(a.samples()).map(|(u, v)| u * v).collect()).collect();
        let num = |v: &[C64]| ye.eval_or_inf(v);
        let den = |v: &[C64]| xe.eval_or_inf(v);
        let prob = LinearRatio { num_cols, den_cols, num: &num, den: &den };
        let dim = prob.dim();
        for i in 0..budget.restarts {
            let start = if i == 0 {
                (0..dim).map(|j| C64::new((j == budget.degree) as u8 as f64, 0.0)).collect()
            } else {
                random_coeffs(&mut restart_rng(budget.seed, i as u64), dim)
            };
            let (c, v) = prob.ascend(&start, AscentParams::default());
            if v > best {
                best = v;
                let series = FourierSeries::from_pairs((-d..=d).zip(c));
                witness = crate::circle::synthesize_unchecked(&series, ctx).into_samples();
            }
        }
    }
    let gx = xe.eval(&witness)?;
    let g = GridFunction::new(ctx, witness.iter().map(|z| z / gx).collect())?;
    Ok(NormEstimate::new(best, Mode::LowerBound).with_witness(Witness::Function(g)))
}

/// `g = sgn(f)|f|^{1/p}`, `k = |f|^{1/p'}`: the factorization attaining
/// `‖g‖_p ‖k‖_{p'} = ‖f‖_1`.
pub fn holder_factorization(f: &GridFunction, p: Exponent) -> (GridFunction, GridFunction) {
    let ip = p.reciprocal();
    let ip = *ip.numer() as f64 / *ip.denom() as f64;
    let g = f.map(|z| phase(z) * z.norm().powf(ip));
    let k = f.map(|z| C64::new(z.norm().powf(1.0 - ip), 0.0));
    (g, k)
}

/// Upper bound for `‖h‖_{X⊙Y}` over the factorizations
/// `h = (sgn(h)|h|^γ)·|h|^{1−γ}`, `γ ∈ [0, 1]`.
pub fn product_norm_variational(
    h: &GridFunction,
    x: &SpaceSpec,
    y: &SpaceSpec,
    budget: VariationalBudget,
) -> Result<NormEstimate> {
    let n = h.len();
    let xe = NormEvaluator::new(x, n)?;
    let ye = NormEvaluator::new(y, n)?;
    let split = |gamma: f64| -> (Vec<C64>, Vec<C64>) {
        h.samples()
            .iter()
            .map(|&z| {
                let m = z.norm();
                if m > 0.0 {
                    (phase(z) * m.powf(gamma), C64::new(m.powf(1.0 - gamma), 0.0))
                } else {
                    (C64::default(), C64::default())
                }
            })
            .unzip()
    };
    let cost = |gamma: f64| -> f64 {
        let (g, k) = split(gamma);
        xe.eval_or_inf(&g) * ye.eval_or_inf(&k)
    };
    if h.is_zero() {
        return Ok(NormEstimate::new(0.0, Mode::UpperBound));
    }
    let mut centers: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
    for i in 0..budget.restarts {
        use rand::Rng;
        centers.push(restart_rng(budget.seed, i as u64).gen_range(0.0..=1.0));
    }
    let (mut g_best, mut best) = (0.0, f64::INFINITY);
    for &c in &centers {
        let v = cost(c);
        if v < best {
            best = v;
            g_best = c;
        }
    }
    let (gr, vr) = golden_min(cost, (g_best - 0.05).max(0.0), (g_best + 0.05).min(1.0), 40);
    if vr < best {
        best = vr;
        g_best = gr;
    }
    let (g, k) = split(g_best);
    let ctx = h.ctx();
    let w = Witness::Factorization { g: GridFunction::new(ctx, g)?, k: GridFunction::new(ctx, k)? };
    Ok(NormEstimate::new(best, Mode::UpperBound).with_witness(w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::{make_grid, synthesize};
    use crate::spaces::norm;

    fn random_poly(seed: u64, lo: i64, hi: i64) -> FourierSeries {
        let c = random_coeffs(&mut restart_rng(seed, 0), (hi - lo + 1) as usize);
        FourierSeries::from_dense(lo, &c)
    }

    #[test]
    fn dual_of_constant_in_l2() {
        let ctx = make_grid(64).unwrap();
        let one = GridFunction::constant(&ctx, C64::new(1.0, 0.0));
        let est = dual_norm_via_polynomials(&one, &SpaceSpec::lebesgue(2.0).unwrap(), VariationalBudget::new(2, 2, 1))
            .unwrap();
        assert!((est.value - 1.0).abs() < 1e-9);
        assert_eq!(est.mode, Mode::LowerBound);
    }

    #[test]
    fn dual_approaches_l3_norm() {
        let ctx = make_grid(256).unwrap();
        let f = synthesize(&random_poly(5, -4, 4), &ctx).unwrap();
        let x = SpaceSpec::lebesgue(3.0).unwrap();
        let exact = norm(&f, &x).unwrap().value;
        let est = dual_norm_via_polynomials(&f, &x, VariationalBudget::new(16, 4, 3)).unwrap();
        assert!(est.value <= exact * (1.0 + 1e-9));
        assert!(est.value >= 0.98 * exact, "{} vs {exact}", est.value);
    }

    #[test]
    fn multiplier_norms_match_holder() {
        let ctx = make_grid(256).unwrap();
        let a = synthesize(&random_poly(9, -3, 3), &ctx).unwrap();
        let b = VariationalBudget::new(2, 1, 0);
        for (p, q) in [(2.0, 1.0), (4.0, 2.0)] {
            let (x, y) = (SpaceSpec::lebesgue(p).unwrap(), SpaceSpec::lebesgue(q).unwrap());
            let r = 1.0 / (1.0 / q - 1.0 / p);
            let exact = norm(&a, &SpaceSpec::lebesgue(r).unwrap()).unwrap().value;
            let est = multiplier_norm_variational(&a, &x, &y, b).unwrap();
            assert!((est.value / exact - 1.0).abs() < 0.02, "{p},{q}: {} vs {exact}", est.value);
            assert!(est.value <= exact * (1.0 + 1e-9));
        }
        let unimodular = GridFunction::from_angle_fn(&ctx, |t| C64::from_polar(1.0, 3.0 * t.sin()));
        let x = SpaceSpec::lorentz(4.0, 2.0).unwrap();
        let est = multiplier_norm_variational(&unimodular, &x, &x, b).unwrap();
        assert!((est.value - 1.0).abs() < 1e-12);
        let err = multiplier_norm_variational(&a, &SpaceSpec::lebesgue(2.0).unwrap(), &SpaceSpec::lebesgue(4.0).unwrap(), b);
        assert_eq!(err.unwrap_err(), Error::ZeroMultiplier);
    }

    #[test]
    fn products_reach_l1() {
        let ctx = make_grid(256).unwrap();
        let h = synthesize(&random_poly(2, -5, 5), &ctx).unwrap();
        let l1 = norm(&h, &SpaceSpec::lebesgue(1.0).unwrap()).unwrap().value;
        for p in [1.5, 2.0, 3.0] {
            let pe = Exponent::from_f64(p).unwrap();
            let (x, y) = (SpaceSpec::lebesgue_exp(pe).unwrap(), SpaceSpec::lebesgue_exp(pe.conjugate().unwrap()).unwrap());
            let (g, k) = holder_factorization(&h, pe);
            let prod = norm(&g, &x).unwrap().value * norm(&k, &y).unwrap().value;
            assert!((prod - l1).abs() < 1e-9 * l1);
            let est = product_norm_variational(&h, &x, &y, VariationalBudget::new(0, 4, 1)).unwrap();
            assert!(est.value >= l1 * (1.0 - 1e-9) && est.value <= l1 * 1.01);
        }
        let one = GridFunction::constant(&ctx, C64::new(1.0, 0.0));
        let x = SpaceSpec::orlicz(crate::spaces::OrliczSpec::power(3.0).unwrap());
        let y = SpaceSpec::lebesgue(2.0).unwrap();
        let est = product_norm_variational(&one, &x, &y, VariationalBudget::new(0, 0, 0)).unwrap();
        assert!((est.value - 1.0).abs() < 1e-9);
    }
}

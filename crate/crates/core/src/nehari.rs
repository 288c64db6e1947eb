//! Nehari distances: the `L²` Hankel norm, best antianalytic approximation
//! in multiplier norms, and the general Nehari sandwich.

use nalgebra::{DMatrix, DVector};

use crate::analytic::riesz_norm_estimate;
use crate::circle::{synthesize, FourierSeries, GridContext, C64};
use crate::error::{Error, Result};
use crate::operators::{hankel_matrix, operator_norm_estimate, Hankel};
use crate::search::{random_coeffs, restart_rng};
use crate::spaces::{
    boyd_indices, factorizes, log_grid, multiplier_norm_variational, multiplier_space, orlicz_factorization_check,
    Mode, NormEstimate, NormEvaluator, SpaceResult, SpaceSpec, VariationalBudget,
};
use crate::verdict::Verdict;

/// Declared factor in `‖H_a‖ ≤ ‖P‖·dist·(1 + slack)`.
pub const NEHARI_SLACK: f64 = 0.05;
/// Coordinate perturbation of the final stationarity poll.
pub const POLL_STEP: f64 = 1e-3;
/// Largest objective decrease tolerated by the poll.
pub const POLL_TOL: f64 = 1e-6;

/// Default corrector degree for symbols of degree `deg`.
pub fn default_corrector_degree(deg: usize) -> usize {
    2 * deg + 8
}

/// Largest singular value of the `(M+1)×(M+1)` Hankel truncation.
pub fn hankel_norm_l2(a: &FourierSeries, m: usize) -> NormEstimate {
    NormEstimate::exact(hankel_matrix(a, m).largest_singular_value()).with_note(format!("truncation M = {m}"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceResult {
    pub value: NormEstimate,
    /// `h` supported on `[−dc, 0]` with `‖a − h‖ = value`.
    pub corrector: FourierSeries,
    pub iterations: usize,
}

/// Objective `h ↦ ‖a − h‖_{M(X,Y)}` on residual grid samples.
enum Objective<'a> {
    Closed(NormEvaluator),
    Variational { x: &'a SpaceSpec, y: &'a SpaceSpec, ctx: &'a GridContext, seed: u64 },
}

impl Objective<'_> {
    fn eval(&self, e: &[C64]) -> f64 {
        match self {
            Objective::Closed(ev) => ev.eval_or_inf(e),
            Objective::Variational { x, y, ctx, seed } => {
                let f = crate::circle::GridFunction::new(ctx, e.to_vec()).expect("grid-sized");
                multiplier_norm_variational(&f, x, y, VariationalBudget::new(0, 0, *seed))
                    .map_or(f64::INFINITY, |est| est.value)
            }
        }
    }
}

/// Best approximation of `a` by `h` supported on `[−dc, 0]` in `M(X, Y)`.
///
/// The multiplier norm is the closed form when `M(X, Y)` is known exactly;
/// otherwise it is the profile part of [`multiplier_norm_variational`]
/// during the search and the full budget for the reported value, which is
/// then heuristic.
pub fn distance_to_antianalytic(
    a: &FourierSeries,
    x: &SpaceSpec,
    y: &SpaceSpec,
    ctx: &GridContext,
    dc: usize,
    budget: VariationalBudget,
) -> Result<DistanceResult> {
    let mspace = multiplier_space(x, y);
    if mspace.is_zero() {
        return Err(Error::ZeroMultiplier);
    }
    let antianalytic = FourierSeries::from_pairs(a.iter().filter(|(n, _)| *n <= 0));
    let exact = mspace.isometric && mspace.as_space().is_some();
    let mode = if exact { Mode::UpperBound } else { Mode::Heuristic };
    if a.iter().all(|(n, _)| n <= 0) {
        return Ok(DistanceResult { value: NormEstimate::new(0.0, mode), corrector: antianalytic, iterations: 0 });
    }
    let degree = a.degree().max(dc);
    if 2 * degree >= ctx.len() {
        return Err(Error::Aliasing { degree, points: ctx.len() });
    }
    let objective = match mspace.as_space() {
        Some(m) if exact => Objective::Closed(NormEvaluator::new(m, ctx.len())?),
        _ => Objective::Variational { x, y, ctx, seed: budget.seed },
    };

    let target = synthesize(a, ctx)?.into_samples();
    let basis: Vec<Vec<C64>> = (0..=dc as i64).map(|j| ctx.character(-j)).collect();
    let residual = |c: &[C64]| -> Vec<C64> {
        let mut e = target.clone();
        for (cj, b) in c.iter().zip(&basis) {
            if cj.norm() > 0.0 {
                for (o, v) in e.iter_mut().zip(b) {
                    *o -= cj * v;
                }
            }
        }
        e
    };

    let scale = a.max_abs_coeff();
    let mut starts: Vec<Vec<C64>> = vec![
        vec![C64::default(); dc + 1],
        (0..=dc as i64).map(|j| antianalytic.coeff(-j)).collect(),
    ];
    for i in 0..3 {
        let r = random_coeffs(&mut restart_rng(budget.seed, i), dc + 1);
        starts.push(r.into_iter().map(|z| z * scale).collect());
    }
    let lebesgue_index = match mspace.as_space().filter(|_| exact).map(SpaceSpec::canonical) {
        Some(SpaceSpec::Bounded) => Some(f64::INFINITY),
        Some(SpaceSpec::Lebesgue { p }) => Some(p.to_f64()),
        _ => None,
    };
    if let Some(r) = lebesgue_index {
        starts.push(irls(&target, &basis, r, &objective));
    }

    let mut iterations = 0;
    let (mut best_c, mut best) = (Vec::new(), f64::INFINITY);
    for s in starts {
        let r0 = residual(&s);
        let (c, v, it) = pattern_search(s, &r0, &basis, &objective, scale);
        iterations += it;
        if v < best {
            best = v;
            best_c = c;
        }
    }
    let corrector = FourierSeries::from_pairs((0..=dc as i64).map(|j| (-j, best_c[j as usize]))).compact();
    let e = residual(&best_c);
    let value = match &objective {
        Objective::Closed(ev) => ev.eval(&e)?,
        Objective::Variational { .. } => {
            let f = crate::circle::GridFunction::new(ctx, e)?;
            multiplier_norm_variational(&f, x, y, budget)?.value
        }
    };
    Ok(DistanceResult { value: NormEstimate::new(value, mode), corrector, iterations })
}

/// Iteratively reweighted least squares for `min ‖target − Σ c_j b_j‖_r`;
/// Lawson's multiplicative update when `r = ∞`.
fn irls(target: &[C64], basis: &[Vec<C64>], r: f64, objective: &Objective<'_>) -> Vec<C64> {
    let n = target.len();
    let dim = basis.len();
    let mut w = vec![1.0 / n as f64; n];
    let (mut best_c, mut best) = (vec![C64::default(); dim], f64::INFINITY);
    let iters = if r == 2.0 { 1 } else { 400 };
    for _ in 0..iters {
        let g = DMatrix::from_fn(dim, dim, |i, j| {
            (0..n).map(|k| basis[i][k].conj() * basis[j][k] * w[k]).sum::<C64>()
        });
        let b = DVector::from_fn(dim, |i, _| (0..n).map(|k| basis[i][k].conj() * target[k] * w[k]).sum::<C64>());
        let Some(c) = g.lu().solve(&b) else { break };
        let e: Vec<C64> = (0..n)
            .map(|k| target[k] - (0..dim).map(|j| c[j] * basis[j][k]).sum::<C64>())
            .collect();
        let v = objective.eval(&e);
        if v < best {
            best = v;
            best_c = c.iter().copied().collect();
        }
        let moduli: Vec<f64> = e.iter().map(|z| z.norm()).collect();
        let top = moduli.iter().copied().fold(0.0, f64::max);
        if top == 0.0 {
            break;
        }
        if r.is_infinite() {
            w.iter_mut().zip(&moduli).for_each(|(wk, m)| *wk *= m);
        } else {
            w.iter_mut().zip(&moduli).for_each(|(wk, m)| *wk = m.max(1e-8 * top).powf(r - 2.0));
        }
        let total: f64 = w.iter().sum();
        if !(total > 0.0) {
            break;
        }
        w.iter_mut().for_each(|wk| *wk /= total);
    }
    best_c
}

/// Compass search over real and imaginary parts, halving the step on
/// failure, followed by a `±POLL_STEP` poll that restarts the search
/// whenever it finds a decrease above `POLL_TOL`.
fn pattern_search(
    mut c: Vec<C64>,
    start_residual: &[C64],
    basis: &[Vec<C64>],
    objective: &Objective<'_>,
    scale: f64,
) -> (Vec<C64>, f64, usize) {
    let mut e = start_residual.to_vec();
    let mut best = objective.eval(&e);
    let mut trial = e.clone();
    let dirs = [C64::new(1.0, 0.0), C64::new(0.0, 1.0)];
    let mut iterations = 0;
    let mut try_move = |c: &mut Vec<C64>, e: &mut Vec<C64>, best: &mut f64, j: usize, delta: C64, tol: f64| -> bool {
        for ((t, &ek), &bk) in trial.iter_mut().zip(e.iter()).zip(&basis[j]) {
            *t = ek - delta * bk;
        }
        let v = objective.eval(&trial);
        if v < *best - tol {
            *best = v;
            c[j] += delta;
            e.copy_from_slice(&trial);
            true
        } else {
            false
        }
    };
    let mut step = 0.1 * scale.max(1e-12);
    let min_step = 1e-7 * scale.max(1e-12);
    for _round in 0..20 {
        while step >= min_step && iterations < 5_000 {
            iterations += 1;
            let mut improved = false;
            for j in 0..c.len() {
                for dir in dirs {
                    for sign in [1.0, -1.0] {
                        if try_move(&mut c, &mut e, &mut best, j, dir * (sign * step), 0.0) {
                            improved = true;
                            break;
                        }
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        let mut polled = false;
        for j in 0..c.len() {
            for dir in dirs {
                for sign in [1.0, -1.0] {
                    polled |= try_move(&mut c, &mut e, &mut best, j, dir * (sign * POLL_STEP), POLL_TOL);
                }
            }
        }
        if !polled {
            break;
        }
        step = POLL_STEP;
    }
    (c, best, iterations)
}

/// Which hypotheses of the general Nehari theorem hold for `(X, Y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NehariHypotheses {
    pub same_space: bool,
    /// Condition (i): `X ⊙ M(X,Y) = Y` (for Orlicz pairs: the factorization
    /// condition on `φ`, `φ₁`); `None` when undecidable.
    pub factorization: Option<bool>,
    /// Condition (ii): `β_X < α_Y`.
    pub boyd_separation: bool,
    /// `Y` has nontrivial Boyd indices, so `P` is bounded on `Y`.
    pub riesz_bounded: bool,
    pub multiplier_nonzero: bool,
}

impl NehariHypotheses {
    pub fn evaluate(x: &SpaceSpec, y: &SpaceSpec) -> Result<Self> {
        let bx = boyd_indices(x)?;
        let by = boyd_indices(y)?;
        let factorization = match (x.canonical(), y.canonical()) {
            (SpaceSpec::Orlicz(phi1), SpaceSpec::Orlicz(phi)) => {
                let grid = log_grid(2.0, 1e3, 8);
                orlicz_factorization_check(&phi, &phi1, 1.0, &grid).ok().map(|c| c.holds && !c.degenerate)
            }
            _ => factorizes(x, y),
        };
        Ok(Self {
            same_space: x == y,
            factorization,
            boyd_separation: bx.beta < by.alpha,
            riesz_bounded: by.nontrivial(),
            multiplier_nonzero: !multiplier_space(x, y).is_zero(),
        })
    }

    pub fn holds(&self) -> bool {
        self.multiplier_nonzero
            && self.riesz_bounded
            && (self.same_space || self.factorization == Some(true) || self.boyd_separation)
    }

    /// Human-readable list of the failed conditions.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.multiplier_nonzero {
            out.push("M(X,Y) = {0}".to_string());
        }
        if !self.riesz_bounded {
            out.push("Y has trivial Boyd indices".to_string());
        }
        if !(self.same_space || self.factorization == Some(true) || self.boyd_separation) {
            out.push(match self.factorization {
                Some(false) => "condition (i) fails: X does not factorize Y".to_string(),
                _ => "condition (i) undecided".to_string(),
            });
            out.push("condition (ii) fails: beta_X >= alpha_Y".to_string());
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NehariParams {
    pub corrector_degree: usize,
    pub budget: VariationalBudget,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NehariReport {
    pub multiplier: SpaceResult,
    pub hypotheses: NehariHypotheses,
    pub distance: Option<DistanceResult>,
    pub hankel_norm: Option<NormEstimate>,
    pub riesz_norm: Option<NormEstimate>,
    /// `‖H_a‖ / dist`, the observed lower constant (never asserted).
    pub observed_constant: Option<f64>,
    pub slack: f64,
    /// `‖H_a‖ ≤ ‖P‖·dist·(1 + slack)`.
    pub upper: Verdict,
}

/// Computes both sides of the Nehari sandwich for `H_a : H[X] → H[Y]`.
pub fn nehari_check(
    a: &FourierSeries,
    x: &SpaceSpec,
    y: &SpaceSpec,
    ctx: &GridContext,
    params: NehariParams,
    riesz: Option<NormEstimate>,
) -> Result<NehariReport> {
    let multiplier = multiplier_space(x, y);
    let hypotheses = NehariHypotheses::evaluate(x, y)?;
    if !hypotheses.multiplier_nonzero {
        return Ok(NehariReport {
            multiplier,
            hypotheses,
            distance: None,
            hankel_norm: None,
            riesz_norm: None,
            observed_constant: None,
            slack: NEHARI_SLACK,
            upper: Verdict::Exploratory,
        });
    }
    let distance = distance_to_antianalytic(a, x, y, ctx, params.corrector_degree, params.budget)?;
    let op = Hankel { symbol: a.clone(), ctx: ctx.clone() };
    let hn = operator_norm_estimate(&op, x, y, ctx, params.budget, &[])?;
    let pn = match riesz {
        Some(p) => p,
        None => riesz_norm_estimate(y, ctx, params.budget, None)?,
    };
    let d = distance.value.value;
    let upper = if !hypotheses.holds() {
        Verdict::Exploratory
    } else {
        Verdict::from_bool(hn.value <= pn.value * d * (1.0 + NEHARI_SLACK) + 1e-12)
    };
    let observed_constant = (d > 0.0).then(|| hn.value / d);
    Ok(NehariReport {
        multiplier,
        hypotheses,
        distance: Some(distance),
        hankel_norm: Some(hn),
        riesz_norm: Some(pn),
        observed_constant,
        slack: NEHARI_SLACK,
        upper,
    })
}

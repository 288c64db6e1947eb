//! Dilations and Boyd indices.

use crate::circle::{GridContext, GridFunction, C64};
use crate::error::{Error, Result};

use super::orlicz::{log_grid, ls_slope};
use super::{NormEvaluator, OrliczSpec, SpaceSpec};

/// Residual above which a slope fit is flagged.
pub const SLOPE_RESIDUAL_TOL: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoydMethod {
    ClosedForm,
    /// Log-log slopes of `φ` on `[1, ∞)`.
    MatuszewskaOrlicz,
    /// Slopes of `log ‖D_s‖` against `log s` over dyadic `s`.
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoydIndices {
    pub alpha: f64,
    pub beta: f64,
    pub method: BoydMethod,
    pub residual: Option<f64>,
    pub flagged: bool,
}

impl BoydIndices {
    fn closed(alpha: f64, beta: f64) -> Self {
        Self { alpha, beta, method: BoydMethod::ClosedForm, residual: None, flagged: false }
    }

    /// `0 < α ≤ β < 1`, which makes the Riesz projection bounded.
    pub fn nontrivial(&self) -> bool {
        self.alpha > 0.0 && self.beta < 1.0
    }
}

/// `f(e^{iθs})` for `θs < 2π`, zero beyond; the source angle is resolved to
/// the grid cell containing it.
pub fn dilate(f: &GridFunction, s: f64) -> GridFunction {
    let n = f.len();
    let src = f.samples();
    let samples = (0..n)
        .map(|k| {
            let pos = k as f64 * s;
            if pos < n as f64 {
                src[((pos + 1e-9).floor() as usize).min(n - 1)]
            } else {
                C64::default()
            }
        })
        .collect();
    GridFunction::new(f.ctx(), samples).expect("dilation preserves grid size")
}

pub fn boyd_indices(x: &SpaceSpec) -> Result<BoydIndices> {
    Ok(match x.canonical() {
        SpaceSpec::Bounded => BoydIndices::closed(0.0, 0.0),
        SpaceSpec::Lebesgue { p } | SpaceSpec::Lorentz { p, .. } => {
            let r = p.reciprocal();
            let v = *r.numer() as f64 / *r.denom() as f64;
            BoydIndices::closed(v, v)
        }
        SpaceSpec::Orlicz(phi) => matuszewska_orlicz(&phi)?,
    })
}

fn matuszewska_orlicz(phi: &OrliczSpec) -> Result<BoydIndices> {
    let ts = log_grid(1.0, 1e6, 10);
    let pts: Vec<(f64, f64)> = ts
        .iter()
        .map(|&t| (t.ln(), phi.eval(t)))
        .filter(|(_, v)| v.is_finite() && *v > 0.0)
        .map(|(x, v)| (x, v.ln()))
        .collect();
    if pts.len() < 3 {
        return Ok(BoydIndices {
            alpha: 0.0,
            beta: 0.0,
            method: BoydMethod::MatuszewskaOrlicz,
            residual: None,
            flagged: true,
        });
    }
    let slopes: Vec<f64> = pts.windows(2).map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0)).collect();
    let smax = slopes.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let smin = slopes.iter().copied().fold(f64::INFINITY, f64::min);
    if !(smin > 0.0) {
        return Err(Error::InvalidSpace(format!("Orlicz function {phi} is not increasing on [1, ∞)")));
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let slope = ls_slope(&xs, &ys);
    let mx = xs.iter().sum::<f64>() / xs.len() as f64;
    let my = ys.iter().sum::<f64>() / ys.len() as f64;
    let rms = (xs.iter().zip(&ys).map(|(x, y)| (y - my - slope * (x - mx)).powi(2)).sum::<f64>() / xs.len() as f64).sqrt();
    Ok(BoydIndices {
        alpha: 1.0 / smax,
        beta: 1.0 / smin,
        method: BoydMethod::MatuszewskaOrlicz,
        residual: Some(rms),
        flagged: rms > SLOPE_RESIDUAL_TOL,
    })
}

/// Dilation test family: 16 arcs with lengths that are multiples of the
/// largest dyadic scale, plus 8 decreasing power profiles `θ^{-γ}`.
fn test_family(ctx: &GridContext, unit: usize) -> Vec<GridFunction> {
    let n = ctx.len();
    let mut fam: Vec<GridFunction> =
        (1..=16).map(|m| (m * unit).min(n)).map(|len| GridFunction::arc_indicator(ctx, len)).collect();
    for i in 1..=8 {
        let gamma = 0.02 * i as f64;
        let samples = (0..n).map(|k| C64::new(((k as f64 + 0.5) / n as f64).powf(-gamma), 0.0)).collect();
        fam.push(GridFunction::new(ctx, samples).expect("grid-sized"));
    }
    fam
}

/// Numeric Boyd indices: `h(s) = max_f ‖D_s f‖/‖f‖` over the test family
/// for `s = 2^{±j}`, then least-squares slopes of `log h` against `log s`
/// through the origin. A heuristic lower bound on `‖D_s‖`.
pub fn boyd_indices_numeric(x: &SpaceSpec, ctx: &GridContext) -> Result<BoydIndices> {
    let n = ctx.len();
    let jmax = ((n as f64).log2() / 2.0).floor() as i32 - 1;
    if jmax < 1 {
        return Err(Error::InvalidArgument(format!("grid of {n} points too small for dyadic dilations")));
    }
    let unit = 1usize << jmax;
    let eval = NormEvaluator::new(x, n)?;
    let fam = test_family(ctx, unit);
    let norms = fam.iter().map(|f| eval.eval(f.samples())).collect::<Result<Vec<_>>>()?;

    let h = |s: f64| -> Result<f64> {
        let mut best = 0.0f64;
        for (f, nf) in fam.iter().zip(&norms) {
            if *nf > 0.0 {
                best = best.max(eval.eval(dilate(f, 1.0 / s).samples())? / nf);
            }
        }
        Ok(best)
    };
    let fit = |sign: f64| -> Result<(f64, f64)> {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for j in 1..=jmax {
            let s = 2f64.powf(sign * j as f64);
            let hv = h(s)?;
            if hv <= 0.0 {
                return Err(Error::InvalidArgument("dilation annihilated every test function".into()));
            }
            xs.push(s.ln());
            ys.push(hv.ln());
        }
        let slope = xs.iter().zip(&ys).map(|(x, y)| x * y).sum::<f64>() / xs.iter().map(|x| x * x).sum::<f64>();
        let rms = (xs.iter().zip(&ys).map(|(x, y)| (y - slope * x).powi(2)).sum::<f64>() / xs.len() as f64).sqrt();
        Ok((slope, rms))
    };
    let (alpha, ra) = fit(-1.0)?;
    let (beta, rb) = fit(1.0)?;
    let residual = ra.max(rb);
    Ok(BoydIndices { alpha, beta, method: BoydMethod::Numeric, residual: Some(residual), flagged: residual > SLOPE_RESIDUAL_TOL })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::make_grid;
    use crate::spaces::norm;

    #[test]
    fn dilation_examples() {
        let ctx = make_grid(64).unwrap();
        let half = GridFunction::arc_indicator(&ctx, 32);
        assert_eq!(dilate(&half, 1.0), half);
        assert_eq!(dilate(&half, 2.0), GridFunction::arc_indicator(&ctx, 16));
        let one = GridFunction::constant(&ctx, C64::new(1.0, 0.0));
        assert_eq!(dilate(&one, 0.5), one);
    }

    #[test]
    fn dilation_never_increases_sup() {
        let ctx = make_grid(128).unwrap();
        let f = GridFunction::from_angle_fn(&ctx, |t| C64::new((3.0 * t).sin() + 0.2 * t, t.cos()));
        let base = norm(&f, &SpaceSpec::Bounded).unwrap().value;
        for s in [0.1, 0.5, 0.9, 1.0, 1.7, 3.0, 10.0] {
            assert!(norm(&dilate(&f, s), &SpaceSpec::Bounded).unwrap().value <= base);
        }
    }

    #[test]
    fn closed_forms() {
        let b = boyd_indices(&SpaceSpec::lebesgue(4.0).unwrap()).unwrap();
        assert_eq!((b.alpha, b.beta), (0.25, 0.25));
        let b = boyd_indices(&SpaceSpec::Bounded).unwrap();
        assert_eq!((b.alpha, b.beta), (0.0, 0.0));
        assert!(!b.nontrivial());
        let b = boyd_indices(&SpaceSpec::lorentz(1.5, 1.0).unwrap()).unwrap();
        assert!((b.alpha - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn orlicz_power_slopes() {
        for p in [1.5, 2.0, 3.0] {
            let b = boyd_indices(&SpaceSpec::orlicz(OrliczSpec::power(p).unwrap())).unwrap();
            assert!((b.alpha - 1.0 / p).abs() < 1e-9 && (b.beta - 1.0 / p).abs() < 1e-9);
            assert!(!b.flagged);
        }
        let b = boyd_indices(&SpaceSpec::orlicz(OrliczSpec::power_log(2.0, 1.0).unwrap())).unwrap();
        assert!(b.alpha < b.beta && b.beta <= 0.5);
    }

    #[test]
    fn numeric_lebesgue_four() {
        let ctx = make_grid(1024).unwrap();
        let b = boyd_indices_numeric(&SpaceSpec::lebesgue(4.0).unwrap(), &ctx).unwrap();
        assert!((b.alpha - 0.25).abs() < 0.05 && (b.beta - 0.25).abs() < 0.05, "{b:?}");
        let b = boyd_indices_numeric(&SpaceSpec::Bounded, &ctx).unwrap();
        assert!(b.alpha.abs() < 1e-12 && b.beta.abs() < 1e-12);
    }
}

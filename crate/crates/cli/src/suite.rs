//! The acceptance suite: twelve numerical checks at fixed desk-scale budgets.
//!
//! Each check compares library output against an oracle computed another
//! way (direct quadrature, closed forms, exact rational formulas, an
//! independent eigensolver). Only the seed varies between runs.

use std::time::Duration;

use hardy_core::analytic::{analytic_factorize, riesz_norm_estimate, OUTER_FLOOR};
use hardy_core::circle::{make_grid, synthesize, FourierSeries, GridContext, GridFunction, C64};
use hardy_core::compactness::separated_sequence;
use hardy_core::exponent::Exponent;
use hardy_core::nehari::{distance_to_antianalytic, hankel_norm_l2};
use hardy_core::operators::{apply_hankel, brown_halmos_check, hankel_matrix, symbol_recovery, Toeplitz};
use hardy_core::spaces::orlicz::legendre_at;
use hardy_core::spaces::{
    boyd_indices_numeric, holder_factorization, multiplier_space, norm, product_norm_variational, Mode, OrliczSpec,
    SpaceOutcome, SpaceSpec, VariationalBudget,
};
use nalgebra::DMatrix;

use crate::error::Result;
use crate::report::Quantity;
use crate::symbols::{polynomial_product, random_samples, random_symbol, rng, zero_free_polynomial};

/// What one check found.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub passed: bool,
    pub detail: String,
    pub quantities: Vec<Quantity>,
}

/// One acceptance criterion.
pub struct Criterion {
    pub id: usize,
    pub title: &'static str,
    /// The inequality or identity being checked.
    pub statement: &'static str,
    /// Wall-clock budget, where one is stated.
    pub limit: Option<Duration>,
    pub run: fn(u64) -> Result<Outcome>,
}

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion {
            id: 1,
            title: "Brown-Halmos sandwich",
            statement: "0.9 ||a||_4 <= ||T_a||_{H^4 -> H^2} <= 1.3 ||P||_2 ||a||_4",
            limit: Some(Duration::from_secs(60)),
            run: brown_halmos_sandwich,
        },
        Criterion {
            id: 2,
            title: "classical Nehari equality",
            statement: "|sigma_max(H_a, M=32) - dist_inf(a, conj H^inf)| <= 2% relative",
            limit: Some(Duration::from_secs(120)),
            run: classical_nehari,
        },
        Criterion {
            id: 3,
            title: "Hilbert matrix bound",
            statement: "sigma_max(1/(j+k+1))_{MxM} strictly increasing in M and <= pi",
            limit: Some(Duration::from_secs(10)),
            run: hilbert_matrix,
        },
        Criterion {
            id: 4,
            title: "Orlicz/Lebesgue consistency",
            statement: "||f||_{L^phi} = ||f||_p for phi(t) = t^p, within 1e-6",
            limit: None,
            run: orlicz_power_consistency,
        },
        Criterion {
            id: 5,
            title: "Legendre transform",
            statement: "(t^2 (-) t^4)(u) = u^4/4, within 1e-3 relative",
            limit: None,
            run: legendre_power_pair,
        },
        Criterion {
            id: 6,
            title: "Lorentz multiplier indices",
            statement: "M(L^{p1,q1}, L^{p,q}) = L^{p2,q2}, p2 = p p1/(p1 - p), q2 = q q1/(q1 - q)",
            limit: None,
            run: lorentz_indices,
        },
        Criterion {
            id: 7,
            title: "Lozanovskii factorization",
            statement: "||g||_p ||h||_p' = ||f||_1 (1e-9); variational product norm within 1%",
            limit: None,
            run: lozanovskii,
        },
        Criterion {
            id: 8,
            title: "Boyd indices",
            statement: "numeric alpha, beta within 0.05 of 1/p for L^p and L^{p,q}",
            limit: None,
            run: boyd_numeric,
        },
        Criterion {
            id: 9,
            title: "noncompactness certificate",
            statement: "||T_a chi_{k_n} - T_a chi_{k_l}||_1 >= c (1 - eps) pairwise",
            limit: None,
            run: noncompactness,
        },
        Criterion {
            id: 10,
            title: "outer factorization",
            statement: "h = x y with |x| = |p|, both within 1e-6",
            limit: None,
            run: outer_factorization,
        },
        Criterion {
            id: 11,
            title: "symbol recovery",
            statement: "chi_{-n} T_a chi_n = a coefficient-wise within 1e-10",
            limit: None,
            run: recovery,
        },
        Criterion {
            id: 12,
            title: "Hankel symbol ambiguity",
            statement: "H_a depends only on a(n), n > 0 (bit-identical)",
            limit: None,
            run: hankel_ambiguity,
        },
    ]
}

fn leb(p: f64) -> Result<SpaceSpec> {
    Ok(SpaceSpec::lebesgue(p)?)
}

/// `(mean |f|^p)^{1/p}` by direct quadrature.
fn lp_quadrature(samples: &[C64], p: f64) -> f64 {
    (samples.iter().map(|z| z.norm().powf(p)).sum::<f64>() / samples.len() as f64).powf(1.0 / p)
}

fn stream(id: usize) -> u64 {
    100 + id as u64
}

fn brown_halmos_sandwich(seed: u64) -> Result<Outcome> {
    let ctx = make_grid(1024)?;
    let (x, y) = (leb(4.0)?, leb(2.0)?);
    let budget = VariationalBudget::new(32, 64, seed);
    let riesz = riesz_norm_estimate(&y, &ctx, budget, None)?;
    let mut g = rng(seed, stream(1));
    let (mut passed, mut worst_lo, mut worst_hi) = (true, f64::INFINITY, 0.0f64);
    let mut quantities = vec![Quantity::from_estimate("riesz_norm_l2", &riesz)];
    for i in 0..10 {
        let a = random_symbol(&mut g, -4, 4);
        let rep = brown_halmos_check(&a, &x, &y, &ctx, budget, Some(riesz.clone()))?;
        let (Some(l), Some(t)) = (rep.multiplier_norm, rep.operator_norm) else {
            return Ok(Outcome { passed: false, detail: "multiplier space unexpectedly trivial".into(), quantities });
        };
        let oracle = lp_quadrature(synthesize(&a, &ctx)?.samples(), 4.0);
        let lo = t.value / oracle;
        let hi = t.value / (riesz.value * oracle);
        passed &= (l.value - oracle).abs() <= 1e-12 * oracle && lo >= 0.9 && hi <= 1.3;
        worst_lo = worst_lo.min(lo);
        worst_hi = worst_hi.max(hi);
        quantities.push(Quantity::exact(format!("symbol{i}.norm_l4"), l.value));
        quantities.push(Quantity::from_estimate(format!("symbol{i}.toeplitz_norm"), &t));
    }
    Ok(Outcome {
        passed,
        detail: format!("min T/||a||_4 = {worst_lo:.4}; max T/(||P|| ||a||_4) = {worst_hi:.4} over 10 symbols"),
        quantities,
    })
}

fn classical_nehari(seed: u64) -> Result<Outcome> {
    let ctx = make_grid(1024)?;
    let l2 = leb(2.0)?;
    let mut g = rng(seed, stream(2));
    let (mut worst, mut quantities) = (0.0f64, Vec::new());
    for i in 0..5 {
        let a = random_symbol(&mut g, -8, 8);
        let sigma = hankel_norm_l2(&a, 32);
        let dist = distance_to_antianalytic(&a, &l2, &l2, &ctx, 32, VariationalBudget::new(8, 3, seed))?;
        worst = worst.max((sigma.value - dist.value.value).abs() / sigma.value);
        quantities.push(Quantity::from_estimate(format!("symbol{i}.hankel_sigma_max"), &sigma));
        quantities.push(Quantity::from_estimate(format!("symbol{i}.distance"), &dist.value));
    }
    Ok(Outcome { passed: worst <= 0.02, detail: format!("largest relative gap {worst:.2e} over 5 symbols"), quantities })
}

fn hilbert_matrix(_seed: u64) -> Result<Outcome> {
    let sizes: Vec<usize> = (3..=10).map(|k| 1usize << k).collect();
    let mut sigmas = Vec::new();
    let mut entry_error = 0.0f64;
    let mut eigen_error = 0.0f64;
    for &m in &sizes {
        let a = FourierSeries::from_pairs((1..=2 * m as i64).map(|n| (n, C64::new(1.0 / n as f64, 0.0))));
        let h = hankel_matrix(&a, m - 1);
        let direct = DMatrix::from_fn(m, m, |j, k| 1.0 / (j + k + 1) as f64);
        entry_error = entry_error.max(h.entries.iter().zip(direct.iter()).map(|(z, d)| (z - d).norm()).fold(0.0, f64::max));
        let s = h.largest_singular_value();
        if m <= 256 {
            // symmetric positive definite: the top eigenvalue is the top singular value
            let lambda = direct.symmetric_eigenvalues().max();
            eigen_error = eigen_error.max((s - lambda).abs() / lambda);
        }
        sigmas.push(s);
    }
    let increasing = sigmas.windows(2).all(|w| w[1] > w[0]);
    let bounded = sigmas.iter().all(|&s| s <= std::f64::consts::PI);
    let quantities =
        sizes.iter().zip(&sigmas).map(|(m, s)| Quantity::exact(format!("sigma_max[M={m}]"), *s)).collect();
    Ok(Outcome {
        passed: increasing && bounded && entry_error == 0.0 && eigen_error <= 1e-10,
        detail: format!(
            "sigma from {:.6} (M=8) to {:.6} (M=1024); increasing: {increasing}; <= pi: {bounded}; eigensolver gap {eigen_error:.1e}",
            sigmas[0],
            sigmas[sigmas.len() - 1]
        ),
        quantities,
    })
}

fn orlicz_power_consistency(seed: u64) -> Result<Outcome> {
    let ctx = make_grid(1024)?;
    let mut g = rng(seed, stream(4));
    let mut worst = 0.0f64;
    let mut quantities = Vec::new();
    for p in [1.5, 2.0, 3.0] {
        let (orlicz, lebesgue) = (SpaceSpec::orlicz(OrliczSpec::power(p)?), leb(p)?);
        let mut local = 0.0f64;
        for _ in 0..20 {
            let f = GridFunction::new(&ctx, random_samples(&mut g, ctx.len()))?;
            let (lux, lp) = (norm(&f, &orlicz)?.value, norm(&f, &lebesgue)?.value);
            local = local.max((lux - lp).abs() / lp);
        }
        worst = worst.max(local);
        quantities.push(Quantity::exact(format!("max_relative_gap[p={p}]"), local));
    }
    Ok(Outcome { passed: worst <= 1e-6, detail: format!("largest relative gap {worst:.2e} over 60 functions"), quantities })
}

fn legendre_power_pair(_seed: u64) -> Result<Outcome> {
    let (phi, phi1) = (OrliczSpec::power(2.0)?, OrliczSpec::power(4.0)?);
    let (lo, hi) = (0.1f64.ln(), 10f64.ln());
    let mut worst = 0.0f64;
    for i in 0..50 {
        let u = (lo + (hi - lo) * i as f64 / 49.0).exp();
        let exact = u.powi(4) / 4.0;
        worst = worst.max((legendre_at(&phi, &phi1, u)? - exact).abs() / exact);
    }
    Ok(Outcome {
        passed: worst <= 1e-3,
        detail: format!("largest relative error {worst:.2e} on 50 points in [0.1, 10]"),
        quantities: vec![Quantity::exact("max_relative_error", worst)],
    })
}

/// `ab/(b − a)` with `∞` conventions, written as the product formula rather
/// than through reciprocals.
fn index_oracle(a: Exponent, b: Exponent) -> Exponent {
    match (a, b) {
        (Exponent::Infinite, _) => Exponent::Infinite,
        (Exponent::Finite(a), Exponent::Infinite) => Exponent::Finite(a),
        (Exponent::Finite(a), Exponent::Finite(b)) if a < b => Exponent::Finite(a * b / (b - a)),
        _ => Exponent::Infinite,
    }
}

fn lorentz_indices(_seed: u64) -> Result<Outcome> {
    let qs = [Exponent::int(1), Exponent::int(2), Exponent::Infinite];
    let ps = [Exponent::ratio(3, 2), Exponent::int(2), Exponent::ratio(5, 2), Exponent::int(3), Exponent::ratio(7, 2)];
    let (mut checked, mut mismatches) = (0usize, Vec::new());
    for p1 in [2, 3, 4].map(Exponent::int) {
        for q1 in qs {
            let x = SpaceSpec::lorentz_exp(p1, q1)?;
            let mut targets: Vec<(Exponent, Exponent)> = Vec::new();
            for p in ps.iter().copied().filter(|p| p.to_f64() < p1.to_f64()) {
                targets.extend(qs.iter().map(|&q| (p, q)));
            }
            targets.extend(qs.iter().filter(|q| q.to_f64() > q1.to_f64()).map(|&q| (p1, q)));
            for (p, q) in targets {
                let y = SpaceSpec::lorentz_exp(p, q)?;
                let (p2, q2) = (index_oracle(p, p1), index_oracle(q, q1));
                let got = multiplier_space(&x, &y);
                let ok = matches!(&got.outcome, SpaceOutcome::Space(SpaceSpec::Lorentz { p, q }) if *p == p2 && *q == q2);
                checked += 1;
                if !ok {
                    mismatches.push(format!("{x} -> {y}: got {got}, want ({p2}, {q2})"));
                }
            }
            // inadmissible: p > p1 leaves only zero
            let y = SpaceSpec::lorentz_exp(Exponent::int(5), Exponent::int(2))?;
            checked += 1;
            if !multiplier_space(&x, &y).is_zero() {
                mismatches.push(format!("{x} -> {y} should be {{0}}"));
            }
        }
    }
    Ok(Outcome {
        passed: mismatches.is_empty(),
        detail: if mismatches.is_empty() {
            format!("{checked} index pairs reproduced exactly")
        } else {
            format!("{} of {checked} mismatched; first: {}", mismatches.len(), mismatches[0])
        },
        quantities: vec![Quantity::exact("pairs_checked", checked as f64)],
    })
}

fn lozanovskii(seed: u64) -> Result<Outcome> {
    let ctx = make_grid(1024)?;
    let mut g = rng(seed, stream(7));
    let l1 = leb(1.0)?;
    let (mut exact_gap, mut var_gap) = (0.0f64, 0.0f64);
    let mut lower_ok = true;
    for p in [Exponent::ratio(3, 2), Exponent::int(2), Exponent::int(3)] {
        let (x, xd) = (SpaceSpec::lebesgue_exp(p)?, SpaceSpec::lebesgue_exp(p.conjugate()?)?);
        for i in 0..5 {
            let f = GridFunction::new(&ctx, random_samples(&mut g, ctx.len()))?;
            let f1 = norm(&f, &l1)?.value;
            let (gf, kf) = holder_factorization(&f, p);
            let prod = norm(&gf, &x)?.value * norm(&kf, &xd)?.value;
            exact_gap = exact_gap.max((prod - f1).abs() / f1);
            let v = product_norm_variational(&f, &x, &xd, VariationalBudget::new(8, 8, seed.wrapping_add(i)))?;
            lower_ok &= v.value >= f1 * (1.0 - 1e-9) && v.mode == Mode::UpperBound;
            var_gap = var_gap.max((v.value - f1) / f1);
        }
    }
    Ok(Outcome {
        passed: exact_gap <= 1e-9 && var_gap <= 0.01 && lower_ok,
        detail: format!("explicit factorization gap {exact_gap:.1e}; variational gap {var_gap:.1e} over 15 functions"),
        quantities: vec![Quantity::exact("explicit_gap", exact_gap), Quantity::new("variational_gap", var_gap, Mode::UpperBound)],
    })
}

fn boyd_numeric(_seed: u64) -> Result<Outcome> {
    let ctx = make_grid(1024)?;
    let mut spaces = Vec::new();
    for p in [1.5, 2.0, 4.0] {
        spaces.push((p, leb(p)?));
        for q in [1.0, 2.0] {
            spaces.push((p, SpaceSpec::lorentz(p, q)?));
        }
    }
    let (mut worst, mut quantities) = (0.0f64, Vec::new());
    for (p, x) in &spaces {
        let b = boyd_indices_numeric(x, &ctx)?;
        worst = worst.max((b.alpha - 1.0 / p).abs()).max((b.beta - 1.0 / p).abs());
        quantities.push(Quantity::new(format!("alpha[{x}]"), b.alpha, Mode::Heuristic));
        quantities.push(Quantity::new(format!("beta[{x}]"), b.beta, Mode::Heuristic));
    }
    Ok(Outcome { passed: worst <= 0.05, detail: format!("largest deviation from 1/p: {worst:.4}"), quantities })
}

/// `‖T_aχ_j − T_aχ_k‖₁` from the coefficient formula `P(aχ_k) = Σ_{n+k≥0} â(n)χ_{n+k}`
/// and direct quadrature.
fn separation_oracle(a: &FourierSeries, j: i64, k: i64, ctx: &GridContext) -> Result<f64> {
    let image = |k: i64| FourierSeries::from_pairs(a.iter().filter(|(n, _)| n + k >= 0).map(|(n, c)| (n + k, c)));
    let diff = synthesize(&image(j).sub(&image(k)), ctx)?;
    Ok(diff.samples().iter().map(|z| z.norm()).sum::<f64>() / ctx.len() as f64)
}

fn noncompactness(_seed: u64) -> Result<Outcome> {
    let ctx = make_grid(256)?;
    let l2 = leb(2.0)?;
    let c = |re: f64| C64::new(re, 0.0);
    let a = FourierSeries::from_pairs([(3, c(2.0)), (0, c(1.0))]);
    let cert = separated_sequence(&a, 0.1, 5, &l2, &ctx)?;
    let mut oracle_min = f64::INFINITY;
    for (i, &j) in cert.indices.iter().enumerate() {
        for &k in &cert.indices[i + 1..] {
            oracle_min = oracle_min.min(separation_oracle(&a, j, k, &ctx)?);
        }
    }
    let first = cert.valid
        && cert.s == 3
        && cert.indices == (0..=5).collect::<Vec<_>>()
        && oracle_min >= 1.8
        && (oracle_min - cert.pairwise_min).abs() <= 1e-10;

    let b = FourierSeries::from_pairs([(-2, c(1.0)), (-5, c(2.0))]);
    let neg = separated_sequence(&b, 0.1, 5, &l2, &ctx)?;
    let mut neg_min = f64::INFINITY;
    for (i, &j) in neg.indices.iter().enumerate() {
        for &k in &neg.indices[i + 1..] {
            neg_min = neg_min.min(separation_oracle(&b, j, k, &ctx)?);
        }
    }
    let second = neg.valid && neg.s == -5 && neg.indices[0] == 5 && neg_min >= neg.l1_bound - 1e-10;
    Ok(Outcome {
        passed: first && second,
        detail: format!(
            "2chi_3 + chi_0: min separation {oracle_min:.4} (>= 1.8); chi_-2 + 2chi_-5: k0 = {}, min {neg_min:.4} >= {:.4}",
            neg.indices[0], neg.l1_bound
        ),
        quantities: vec![
            Quantity::exact("pairwise_min_l1", oracle_min),
            Quantity::exact("negative_branch.pairwise_min_l1", neg_min),
            Quantity::new("noncompactness_bound", cert.bound, Mode::LowerBound),
        ],
    })
}

fn outer_factorization(seed: u64) -> Result<Outcome> {
    let ctx = make_grid(1024)?;
    let mut g = rng(seed, stream(10));
    let (mut prod_err, mut mod_err) = (0.0f64, 0.0f64);
    for _ in 0..5 {
        let p = zero_free_polynomial(&mut g, 3);
        let q = zero_free_polynomial(&mut g, 3);
        let h = polynomial_product(&p, &q);
        let mod_p = synthesize(&p, &ctx)?.abs();
        let mod_q = synthesize(&q, &ctx)?.abs();
        let fac = analytic_factorize(&h, &mod_p, &mod_q, OUTER_FLOOR)?;
        let hs = synthesize(&h, &ctx)?;
        let recon = fac.x_samples.zip(&fac.y_samples, |a, b| a * b)?;
        prod_err = prod_err.max(recon.sub(&hs)?.max_abs() / hs.max_abs());
        let pmax = mod_p.max_abs();
        let m = fac.x_samples.samples().iter().zip(mod_p.samples()).map(|(x, m)| (x.norm() - m.re).abs()).fold(0.0, f64::max);
        mod_err = mod_err.max(m / pmax);
    }
    Ok(Outcome {
        passed: prod_err <= 1e-6 && mod_err <= 1e-6,
        detail: format!("max |xy - h|/max|h| = {prod_err:.1e}; max ||x| - |p||/max|p| = {mod_err:.1e}"),
        quantities: vec![Quantity::exact("product_error", prod_err), Quantity::exact("modulus_error", mod_err)],
    })
}

fn recovery(seed: u64) -> Result<Outcome> {
    let ctx = make_grid(256)?;
    let mut g = rng(seed, stream(11));
    let mut worst = 0.0f64;
    for i in 0..10 {
        let lo = -(i as i64 % 6);
        let a = random_symbol(&mut g, lo, 5);
        let op = Toeplitz { symbol: a.clone(), ctx: ctx.clone() };
        for n in [-lo, -lo + 1, -lo + 7] {
            let rec = symbol_recovery(&op, n as usize, 5)?;
            worst = worst.max(rec.max_diff(&a));
        }
    }
    Ok(Outcome {
        passed: worst <= 1e-10,
        detail: format!("largest coefficient error {worst:.1e} over 10 symbols, 3 shifts each"),
        quantities: vec![Quantity::exact("max_coefficient_error", worst)],
    })
}

fn bits(s: &FourierSeries) -> Vec<(i64, u64, u64)> {
    s.iter().map(|(n, z)| (n, z.re.to_bits(), z.im.to_bits())).collect()
}

fn hankel_ambiguity(seed: u64) -> Result<Outcome> {
    let ctx = make_grid(256)?;
    let mut g = rng(seed, stream(12));
    let mut identical = true;
    for _ in 0..10 {
        let a = random_symbol(&mut g, -6, 6);
        let b = a.restrict(1, 6).add(&random_symbol(&mut g, -9, 0));
        let (ma, mb) = (hankel_matrix(&a, 32).entries, hankel_matrix(&b, 32).entries);
        identical &= ma.iter().zip(mb.iter()).all(|(x, y)| x.re.to_bits() == y.re.to_bits() && x.im.to_bits() == y.im.to_bits());
        let f = random_symbol(&mut g, 0, 16);
        identical &= bits(&apply_hankel(&a, &f, &ctx)?) == bits(&apply_hankel(&b, &f, &ctx)?);
    }
    Ok(Outcome {
        passed: identical,
        detail: format!("10 symbol pairs differing at n <= 0: outputs bit-identical = {identical}"),
        quantities: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_sequential() {
        let ids: Vec<usize> = criteria().iter().map(|c| c.id).collect();
        assert_eq!(ids, (1..=12).collect::<Vec<_>>());
    }

    #[test]
    fn index_oracle_conventions() {
        let r = |a, b| Exponent::ratio(a, b);
        assert_eq!(index_oracle(Exponent::int(2), Exponent::int(4)), Exponent::int(4));
        assert_eq!(index_oracle(r(3, 2), Exponent::int(2)), Exponent::int(6));
        assert_eq!(index_oracle(Exponent::int(2), Exponent::Infinite), Exponent::int(2));
        assert_eq!(index_oracle(Exponent::int(2), Exponent::int(2)), Exponent::Infinite);
        assert_eq!(index_oracle(Exponent::Infinite, Exponent::int(2)), Exponent::Infinite);
    }

    #[test]
    fn quick_criteria_pass() {
        for c in criteria().iter().filter(|c| [3, 5, 6, 9, 11, 12].contains(&c.id)) {
            let out = (c.run)(1).unwrap();
            assert!(out.passed, "criterion {}: {}", c.id, out.detail);
        }
    }
}

//! Randomized invariants across the grid, space, analytic and operator layers.

use hardy_core::analytic::{flip_grid, riesz_project};
use hardy_core::circle::{analyze, fejer_smooth, make_grid, pointwise_product, synthesize, FourierSeries, GridContext, GridFunction, C64};
use hardy_core::compactness::{noncompactness_bound, separated_sequence};
use hardy_core::operators::{apply_hankel, apply_toeplitz, hankel_matrix, toeplitz_matrix};
use hardy_core::spaces::{
    koethe_dual, multiplier_norm_variational, multiplier_space, norm, OrliczSpec, SpaceSpec, VariationalBudget,
};
use proptest::prelude::*;

fn spaces() -> Vec<SpaceSpec> {
    vec![
        SpaceSpec::lebesgue(1.5).unwrap(),
        SpaceSpec::lebesgue(4.0).unwrap(),
        SpaceSpec::lorentz(3.0, 2.0).unwrap(),
        SpaceSpec::orlicz(OrliczSpec::power_log(2.0, 1.0).unwrap()),
        SpaceSpec::Bounded,
    ]
}

fn coeffs(len: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), len)
}

fn series(lo: i64, c: &[(f64, f64)]) -> FourierSeries {
    FourierSeries::from_pairs(c.iter().enumerate().map(|(i, &(re, im))| (lo + i as i64, C64::new(re, im)))).compact()
}

fn grid(ctx: &GridContext, vals: &[(f64, f64)]) -> GridFunction {
    GridFunction::new(ctx, vals.iter().map(|&(re, im)| C64::new(re, im)).collect()).unwrap()
}

fn val(f: &GridFunction, x: &SpaceSpec) -> f64 {
    norm(f, x).unwrap().value
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn parseval_on_the_grid(c in coeffs(9), lo in -6i64..3) {
        let ctx = make_grid(64).unwrap();
        let a = series(lo, &c);
        let f = synthesize(&a, &ctx).unwrap();
        let energy = f.samples().iter().map(|z| z.norm_sqr()).sum::<f64>() / 64.0;
        let coef = a.l2_norm().powi(2);
        prop_assert!((energy - coef).abs() <= 1e-12 * coef.max(1e-300));
    }

    #[test]
    fn analysis_is_linear(f in coeffs(64), g in coeffs(64), alpha in -2.0..2.0f64, beta in -2.0..2.0f64) {
        let ctx = make_grid(64).unwrap();
        let (f, g) = (grid(&ctx, &f), grid(&ctx, &g));
        let combo = f.scale(C64::new(alpha, 0.0)).add(&g.scale(C64::new(0.0, beta))).unwrap();
        let lhs = analyze(&combo, 31).unwrap();
        let rhs = analyze(&f, 31).unwrap().scale(C64::new(alpha, 0.0)).add(&analyze(&g, 31).unwrap().scale(C64::new(0.0, beta)));
        prop_assert!(lhs.max_diff(&rhs) <= 1e-12);
    }

    #[test]
    fn norms_are_homogeneous_and_monotone(f in coeffs(128), shrink in prop::collection::vec(0.0..1.0f64, 128), lambda in -3.0..3.0f64) {
        let ctx = make_grid(128).unwrap();
        let f = grid(&ctx, &f);
        let smaller = GridFunction::new(&ctx, f.samples().iter().zip(&shrink).map(|(z, s)| z * *s).collect()).unwrap();
        for x in spaces() {
            let base = val(&f, &x);
            let scaled = val(&f.scale(C64::new(0.0, lambda)), &x);
            prop_assert!((scaled - lambda.abs() * base).abs() <= 1e-9 * base.max(1.0), "{x}");
            prop_assert!(val(&smaller, &x) <= base * (1.0 + 1e-12), "{x}");
        }
    }

    #[test]
    fn norms_ignore_rearrangement(f in coeffs(64), perm in Just((0..64usize).collect::<Vec<_>>()).prop_shuffle()) {
        let ctx = make_grid(64).unwrap();
        let f = grid(&ctx, &f);
        let g = f.permute(&perm).unwrap();
        for x in spaces() {
            prop_assert_eq!(val(&f, &x), val(&g, &x));
        }
    }

    #[test]
    fn holder_inequality_for_lebesgue(f in coeffs(128), g in coeffs(128), p in prop::sample::select(vec![1.0, 1.5, 2.0, 3.0, 8.0])) {
        let ctx = make_grid(128).unwrap();
        let (f, g) = (grid(&ctx, &f), grid(&ctx, &g));
        let x = SpaceSpec::lebesgue(p).unwrap();
        let pairing = f.samples().iter().zip(g.samples()).map(|(a, b)| a.norm() * b.norm()).sum::<f64>() / 128.0;
        let dual = koethe_dual(&x).unwrap();
        prop_assert!(dual.isometric);
        prop_assert!(pairing <= val(&f, &x) * val(&g, &dual.space) + 1e-9);
    }

    #[test]
    fn luxemburg_modular_is_one_at_the_norm(f in coeffs(128)) {
        let ctx = make_grid(128).unwrap();
        let f = grid(&ctx, &f);
        let phi = OrliczSpec::power_log(1.5, 2.0).unwrap();
        let lambda = val(&f, &SpaceSpec::orlicz(phi.clone()));
        let modular = f.samples().iter().map(|z| phi.eval(z.norm() / lambda)).sum::<f64>() / 128.0;
        prop_assert!((modular - 1.0).abs() <= 1e-8, "modular {modular}");
    }

    #[test]
    fn riesz_projection_identities(c in coeffs(13), n in 1usize..12) {
        let a = series(-6, &c);
        let pa = riesz_project(&a);
        prop_assert_eq!(riesz_project(&pa), pa.clone());
        let rest = a.sub(&pa);
        prop_assert_eq!(pa.add(&rest), a.clone());
        prop_assert!(rest.max_index().map_or(true, |m| m < 0));
        prop_assert!(riesz_project(&fejer_smooth(&a, n)).max_diff(&fejer_smooth(&pa, n)) == 0.0);
    }

    #[test]
    fn flip_is_an_isometry(f in coeffs(64)) {
        let ctx = make_grid(64).unwrap();
        let f = grid(&ctx, &f);
        let jf = flip_grid(&f);
        for x in spaces() {
            let (a, b) = (val(&f, &x), val(&jf, &x));
            prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0), "{x}");
        }
    }

    #[test]
    fn products_of_analytic_series_stay_analytic(p in coeffs(6), q in coeffs(7)) {
        let ctx = make_grid(32).unwrap();
        let (p, q) = (series(0, &p), series(0, &q));
        let prod = pointwise_product(&synthesize(&p, &ctx).unwrap(), &synthesize(&q, &ctx).unwrap()).unwrap();
        let h = analyze(&prod, 15).unwrap();
        prop_assert!(h.negative_residual() <= 1e-13);
    }

    #[test]
    fn matrices_agree_with_grid_actions(a in coeffs(11), f in coeffs(9)) {
        let ctx = make_grid(128).unwrap();
        let (a, f) = (series(-5, &a), series(0, &f));
        let m = 16;
        let on_grid = apply_toeplitz(&a, &f, &ctx).unwrap().restrict(0, m as i64);
        prop_assert!(toeplitz_matrix(&a, m).apply(&f).max_diff(&on_grid) <= 1e-12);
        let on_grid = apply_hankel(&a, &f, &ctx).unwrap().restrict(0, m as i64);
        prop_assert!(hankel_matrix(&a, m).apply(&f).max_diff(&on_grid) <= 1e-12);
    }

    #[test]
    fn hankel_sees_only_positive_frequencies(a in coeffs(11), b in coeffs(8), f in coeffs(9)) {
        let ctx = make_grid(128).unwrap();
        let (a, b, f) = (series(-5, &a), series(-7, &b), series(0, &f));
        prop_assert_eq!(apply_hankel(&a, &f, &ctx).unwrap(), apply_hankel(&a.add(&b), &f, &ctx).unwrap());
    }

    #[test]
    fn certificates_scale_with_the_symbol(c in coeffs(7), lambda in prop::sample::select(vec![-3.0, 0.5, 2.0, 7.5])) {
        let ctx = make_grid(256).unwrap();
        let a = series(-3, &c);
        prop_assume!(!a.is_zero());
        let y = SpaceSpec::lebesgue(2.0).unwrap();
        let base = separated_sequence(&a, 0.1, 4, &y, &ctx).unwrap();
        let scaled = separated_sequence(&a.scale(C64::new(lambda, 0.0)), 0.1, 4, &y, &ctx).unwrap();
        prop_assert!(base.valid && scaled.valid);
        prop_assert!(base.pairwise_min >= base.m * base.c * 0.9 - 1e-10);
        prop_assert_eq!(&base.indices, &scaled.indices);
        prop_assert!((scaled.bound - lambda.abs() * base.bound).abs() <= 1e-12 * scaled.bound.max(1.0));
    }

    #[test]
    fn noncompactness_never_exceeds_the_multiplier_norm(c in coeffs(9), pq in prop::sample::select(vec![(2.0, 2.0), (4.0, 2.0), (3.0, 1.5), (8.0, 4.0)])) {
        let ctx = make_grid(256).unwrap();
        let a = series(-4, &c);
        let (x, y) = (SpaceSpec::lebesgue(pq.0).unwrap(), SpaceSpec::lebesgue(pq.1).unwrap());
        let m = multiplier_space(&x, &y);
        let closed = val(&synthesize(&a, &ctx).unwrap(), m.as_space().unwrap());
        prop_assert!(noncompactness_bound(&a, &y, &ctx).unwrap() <= closed + 1e-12);
    }
}

#[test]
fn fejer_errors_decrease_strictly() {
    let ctx = make_grid(256).unwrap();
    let f = FourierSeries::from_pairs([(-2, C64::new(0.5, 0.3)), (0, C64::new(1.0, 0.0)), (1, C64::new(-0.7, 0.2)), (3, C64::new(0.4, -0.9))]);
    let fs = synthesize(&f, &ctx).unwrap();
    for x in spaces() {
        let errs: Vec<f64> = [1, 2, 4, 8, 16]
            .iter()
            .map(|&n| val(&fs.sub(&synthesize(&fejer_smooth(&f, n), &ctx).unwrap()).unwrap(), &x))
            .collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "{x}: {errs:?}");
    }
}

#[test]
fn zero_symbol_is_the_zero_operator() {
    let ctx = make_grid(64).unwrap();
    let zero = FourierSeries::zero();
    assert_eq!(noncompactness_bound(&zero, &SpaceSpec::lebesgue(2.0).unwrap(), &ctx).unwrap(), 0.0);
    for k in 0..8 {
        assert!(apply_toeplitz(&zero, &FourierSeries::character(k), &ctx).unwrap().is_zero());
    }
}

#[test]
fn variational_multiplier_norm_stays_below_the_closed_form() {
    let ctx = make_grid(256).unwrap();
    let a = synthesize(
        &FourierSeries::from_pairs([(-1, C64::new(0.4, 0.1)), (0, C64::new(1.0, 0.0)), (2, C64::new(0.0, -0.8))]),
        &ctx,
    )
    .unwrap();
    for (p, q) in [(4.0, 2.0), (3.0, 1.5), (2.0, 2.0), (6.0, 3.0)] {
        let (x, y) = (SpaceSpec::lebesgue(p).unwrap(), SpaceSpec::lebesgue(q).unwrap());
        let closed = val(&a, multiplier_space(&x, &y).as_space().unwrap());
        let v = multiplier_norm_variational(&a, &x, &y, VariationalBudget::new(4, 4, 1)).unwrap().value;
        assert!(v <= closed * 1.02, "({p}, {q}): {v} > {closed}");
        assert!(v >= closed * 0.9, "({p}, {q}): {v} far below {closed}");
    }
}

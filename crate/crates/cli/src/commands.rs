//! The eight commands. Each fills a [`Report`] from a validated [`Config`].

use std::time::Instant;

use clap::ValueEnum;
use hardy_core::analytic::{analytic_factorize, OUTER_FLOOR};
use hardy_core::circle::{make_grid, synthesize, GridContext};
use hardy_core::compactness::{noncompactness_bound, separated_sequence};
use hardy_core::nehari::{distance_to_antianalytic, hankel_norm_l2, nehari_check, NehariParams};
use hardy_core::operators::brown_halmos_check;
use hardy_core::spaces::{
    boyd_indices, boyd_indices_numeric, koethe_dual, multiplier_space, norm, product_space, space_identity_suite,
    BoydMethod, IdentityStatus, Mode, SpaceSpec, VariationalBudget,
};
use hardy_core::Verdict;

use crate::config::Config;
use crate::error::{CliError, Result};
use crate::report::{Quantity, Report, ResolvedConfig};
use crate::suite::criteria;
use crate::symbols::{polynomial_product, rng, zero_free_polynomial};

/// Stream tag for the default `factorize` factors.
const FACTOR_STREAM: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Norms of the symbol in each listed space.
    Norm,
    /// Duals, multipliers, products, Boyd indices and the identity suite.
    Spaces,
    /// Brown-Halmos sandwich for T_a : H[X] -> H[Y].
    Toeplitz,
    /// Nehari sandwich for H_a : H[X] -> H[Y].
    Hankel,
    /// Hankel truncation norms on L^2 over a sweep of sizes.
    #[value(name = "nehari-l2")]
    NehariL2,
    /// Outer-function factorization round trip.
    Factorize,
    /// Noncompactness bound and separated-sequence certificate.
    Noncompact,
    /// The full acceptance suite.
    Suite,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Norm => "norm",
            Command::Spaces => "spaces",
            Command::Toeplitz => "toeplitz",
            Command::Hankel => "hankel",
            Command::NehariL2 => "nehari-l2",
            Command::Factorize => "factorize",
            Command::Noncompact => "noncompact",
            Command::Suite => "suite",
        }
    }
}

fn resolved(cfg: &Config) -> ResolvedConfig {
    ResolvedConfig {
        seed: cfg.seed,
        symbol: cfg.symbol.as_ref().map(|a| a.iter().map(|(n, z)| (n, z.re, z.im)).collect()),
        x: cfg.x.as_ref().map(ToString::to_string),
        y: cfg.y.as_ref().map(ToString::to_string),
        spaces: cfg.spaces.iter().map(ToString::to_string).collect(),
        budgets: cfg.budgets,
        sweep: cfg.sweep.clone(),
    }
}

/// Runs `command` and returns its report; the caller prints it.
pub fn execute(command: Command, cfg: &Config) -> Result<Report> {
    let start = Instant::now();
    let mut report = Report::new(command.name(), resolved(cfg));
    let ctx = make_grid(cfg.budgets.n)?;
    match command {
        Command::Norm => norms(cfg, &ctx, &mut report)?,
        Command::Spaces => spaces(cfg, &ctx, &mut report)?,
        Command::Toeplitz => toeplitz(cfg, &ctx, &mut report)?,
        Command::Hankel => hankel(cfg, &ctx, &mut report)?,
        Command::NehariL2 => nehari_l2(cfg, &ctx, &mut report)?,
        Command::Factorize => factorize(cfg, &ctx, &mut report)?,
        Command::Noncompact => noncompact(cfg, &ctx, &mut report)?,
        Command::Suite => suite(cfg, &mut report),
    }
    report.timing.wall_time_s = start.elapsed().as_secs_f64();
    Ok(report)
}

fn budget(cfg: &Config) -> VariationalBudget {
    VariationalBudget::new(cfg.budgets.d, cfg.budgets.r, cfg.seed)
}

fn norms(cfg: &Config, ctx: &GridContext, report: &mut Report) -> Result<()> {
    let a = synthesize(cfg.symbol("norm")?, ctx)?;
    let mut spaces: Vec<&SpaceSpec> = cfg.spaces.iter().collect();
    if spaces.is_empty() {
        spaces.extend(cfg.x.iter().chain(cfg.y.iter()));
    }
    if spaces.is_empty() {
        return Err(CliError::Config("command `norm` needs `spaces` (or `x`/`y`)".into()));
    }
    for x in spaces {
        report.quantity(Quantity::from_estimate(format!("norm[{x}]"), &norm(&a, x)?));
    }
    Ok(())
}

fn boyd_quantities(report: &mut Report, label: &str, x: &SpaceSpec, ctx: &GridContext) -> Result<()> {
    let b = boyd_indices(x)?;
    let mode = if b.method == BoydMethod::ClosedForm { Mode::Exact } else { Mode::Heuristic };
    report.quantity(Quantity::new(format!("boyd_alpha[{label}]"), b.alpha, mode));
    report.quantity(Quantity::new(format!("boyd_beta[{label}]"), b.beta, mode));
    if !x.is_bounded() {
        let n = boyd_indices_numeric(x, ctx)?;
        report.quantity(Quantity::new(format!("boyd_alpha_numeric[{label}]"), n.alpha, Mode::Heuristic));
        report.quantity(Quantity::new(format!("boyd_beta_numeric[{label}]"), n.beta, Mode::Heuristic));
        if n.flagged {
            report.note(format!("numeric Boyd fit for {x} has residual {:.3}", n.residual.unwrap_or(f64::NAN)));
        }
    }
    Ok(())
}

fn dual_fact(report: &mut Report, label: &str, x: &SpaceSpec) {
    match koethe_dual(x) {
        Ok(d) if d.isometric => report.fact(format!("dual[{label}]"), d.space),
        Ok(d) => report.fact(format!("dual[{label}]"), format!("{} (up to equivalence)", d.space)),
        Err(e) => report.fact(format!("dual[{label}]"), format!("unavailable: {e}")),
    }
}

fn spaces(cfg: &Config, ctx: &GridContext, report: &mut Report) -> Result<()> {
    let (x, y) = cfg.pair("spaces")?;
    for (label, s) in [("X", x), ("Y", y)] {
        report.fact(label, s);
        dual_fact(report, label, s);
        boyd_quantities(report, label, s, ctx)?;
    }
    let m = multiplier_space(x, y);
    report.fact("multiplier_space", &m);
    report.fact("product_space", product_space(x, y));
    if let Ok(d) = koethe_dual(x) {
        report.fact("lozanovskii[X (.) X']", product_space(x, &d.space));
    }
    for (i, s) in cfg.spaces.iter().enumerate() {
        let label = format!("spaces[{i}]");
        report.fact(label.clone(), s);
        dual_fact(report, &label, s);
        boyd_quantities(report, &label, s, ctx)?;
    }

    let suite = space_identity_suite();
    let violated: Vec<String> = suite.violations().map(|c| format!("{} at {}", c.identity, c.params)).collect();
    let skipped = suite.count(|s| matches!(s, IdentityStatus::Skipped(_)));
    report.quantity(Quantity::exact("identities_checked", suite.checks.len() as f64));
    report.quantity(Quantity::exact("identities_skipped", skipped as f64));
    report.check(
        "space identities",
        "M(X,Y)' = X (.) Y', M(X,L^1) = X', X (.) X' = L^1 over the Lebesgue/Lorentz sweep",
        Verdict::from_bool(violated.is_empty()),
        violated.first().cloned().unwrap_or_default(),
    );
    Ok(())
}

fn toeplitz(cfg: &Config, ctx: &GridContext, report: &mut Report) -> Result<()> {
    let a = cfg.symbol("toeplitz")?;
    let (x, y) = cfg.pair("toeplitz")?;
    let rep = brown_halmos_check(a, x, y, ctx, budget(cfg), None)?;
    report.fact("multiplier_space", &rep.multiplier);
    if rep.unbounded {
        report.check(
            "unbounded",
            "M(X,Y) = {0}: T_a is bounded only for a = 0",
            Verdict::Pass,
            format!("T_a is unbounded for a != 0 (symbol is zero: {})", a.is_zero()),
        );
        return Ok(());
    }
    let (Some(l), Some(t), Some(p)) = (&rep.multiplier_norm, &rep.operator_norm, &rep.riesz_norm) else {
        unreachable!("bounded reports carry all three norms")
    };
    report.quantity(Quantity::from_estimate("multiplier_norm", l));
    report.quantity(Quantity::from_estimate("toeplitz_norm", t));
    report.quantity(Quantity::from_estimate("riesz_norm", p));
    report.check(
        "brown-halmos lower",
        "(1 - slack) ||a||_M(X,Y) <= ||T_a||",
        rep.lower,
        format!("{:.6} >= {:.6}", t.value, (1.0 - rep.lower_slack) * l.value),
    );
    report.check(
        "brown-halmos upper",
        "||T_a|| <= (1 + slack) ||P||_Y ||a||_M(X,Y)",
        rep.upper,
        format!("{:.6} <= {:.6}", t.value, (1.0 + rep.upper_slack) * p.value * l.value),
    );
    if rep.upper == Verdict::Exploratory {
        report.note("upper bound not asserted: Y has trivial Boyd indices or ||a||_M(X,Y) is not exact");
    }
    Ok(())
}

fn hankel(cfg: &Config, ctx: &GridContext, report: &mut Report) -> Result<()> {
    let a = cfg.symbol("hankel")?;
    let (x, y) = cfg.pair("hankel")?;
    let params = NehariParams { corrector_degree: cfg.budgets.dc, budget: budget(cfg) };
    let rep = nehari_check(a, x, y, ctx, params, None)?;
    report.fact("multiplier_space", &rep.multiplier);
    let h = &rep.hypotheses;
    report.fact("hypotheses.same_space", h.same_space);
    report.fact("hypotheses.factorization", h.factorization.map_or("undecided".to_string(), |b| b.to_string()));
    report.fact("hypotheses.boyd_separation", h.boyd_separation);
    report.fact("hypotheses.riesz_bounded", h.riesz_bounded);
    for f in h.failures() {
        report.note(f);
    }
    if *x == SpaceSpec::lebesgue(2.0)? && *y == *x {
        report.quantity(Quantity::from_estimate(
            format!("hankel_sigma_max[M={}]", cfg.budgets.m),
            &hankel_norm_l2(a, cfg.budgets.m),
        ));
    }
    if let (Some(d), Some(hn), Some(p)) = (&rep.distance, &rep.hankel_norm, &rep.riesz_norm) {
        report.quantity(Quantity::from_estimate("distance", &d.value));
        report.quantity(Quantity::from_estimate("hankel_norm", hn));
        report.quantity(Quantity::from_estimate("riesz_norm", p));
        if let Some(c) = rep.observed_constant {
            report.quantity(Quantity::new("observed_lower_constant", c, Mode::Heuristic));
        }
        report.check(
            "nehari upper",
            "||H_a|| <= (1 + slack) ||P||_Y dist_M(X,Y)(a, conj H)",
            rep.upper,
            format!("{:.6} <= {:.6}", hn.value, (1.0 + rep.slack) * p.value * d.value.value),
        );
    } else {
        report.check("nehari upper", "M(X,Y) = {0}", Verdict::Exploratory, "no multipliers".into());
    }
    Ok(())
}

fn sweep_sizes(cfg: &Config) -> Vec<usize> {
    if let Some(s) = &cfg.sweep {
        return s.clone();
    }
    let mut sizes: Vec<usize> = (3..).map(|k| 1usize << k).take_while(|&m| m < cfg.budgets.m).collect();
    sizes.push(cfg.budgets.m);
    sizes
}

fn nehari_l2(cfg: &Config, ctx: &GridContext, report: &mut Report) -> Result<()> {
    let a = cfg.symbol("nehari-l2")?;
    let sizes = sweep_sizes(cfg);
    let mut sigmas = Vec::new();
    for &m in &sizes {
        let s = hankel_norm_l2(a, m);
        sigmas.push((m, s.value));
        report.quantity(Quantity::from_estimate(format!("sigma_max[M={m}]"), &s));
    }
    let mut ordered = sigmas.clone();
    ordered.sort_by_key(|(m, _)| *m);
    let monotone = ordered.windows(2).all(|w| w[1].1 >= w[0].1 * (1.0 - 1e-12));
    report.check(
        "truncation monotone",
        "sigma_max(H_a, M) <= sigma_max(H_a, M') for M <= M'",
        Verdict::from_bool(monotone),
        String::new(),
    );
    let l2 = SpaceSpec::lebesgue(2.0)?;
    let dist = distance_to_antianalytic(a, &l2, &l2, ctx, cfg.budgets.dc, budget(cfg))?;
    report.quantity(Quantity::from_estimate("distance_linf", &dist.value));
    let top = ordered.last().map_or(0.0, |(_, s)| *s);
    report.check(
        "nehari",
        "sigma_max(H_a, M) <= ||H_a|| = dist_inf(a, conj H^inf)",
        Verdict::from_bool(top <= dist.value.value * (1.0 + 1e-9) + 1e-12),
        format!("{top:.6} <= {:.6}", dist.value.value),
    );
    Ok(())
}

fn factorize(cfg: &Config, ctx: &GridContext, report: &mut Report) -> Result<()> {
    let (p, q) = match &cfg.factors {
        Some((p, q)) => (p.clone(), q.clone()),
        None => {
            let mut g = rng(cfg.seed, FACTOR_STREAM);
            (zero_free_polynomial(&mut g, 3), zero_free_polynomial(&mut g, 3))
        }
    };
    if [&p, &q].iter().any(|s| s.is_zero() || s.min_index().is_some_and(|n| n < 0)) {
        return Err(CliError::Config("`factors` must be nonzero analytic polynomials (indices >= 0)".into()));
    }
    let h = polynomial_product(&p, &q);
    if 2 * h.degree() >= ctx.len() {
        return Err(CliError::Budget(format!("product degree {} aliases on n = {}", h.degree(), ctx.len())));
    }
    let mod_p = synthesize(&p, ctx)?.abs();
    let mod_q = synthesize(&q, ctx)?.abs();
    let fac = analytic_factorize(&h, &mod_p, &mod_q, OUTER_FLOOR)?;
    report.quantity(Quantity::exact("product_error", fac.product_error));
    report.quantity(Quantity::exact("modulus_error", fac.modulus_error));
    report.quantity(Quantity::exact("x_negative_residual", fac.x_residual));
    let tol = 1e-6;
    report.check(
        "product",
        "max |x y - h| <= 1e-6 max |h|",
        Verdict::from_bool(fac.product_error <= tol),
        String::new(),
    );
    report.check(
        "modulus",
        "max ||x| - |p|| <= 1e-6 max |p|",
        Verdict::from_bool(fac.modulus_error <= tol),
        String::new(),
    );
    Ok(())
}

fn noncompact(cfg: &Config, ctx: &GridContext, report: &mut Report) -> Result<()> {
    let a = cfg.symbol("noncompact")?;
    let y = cfg.y.as_ref().ok_or_else(|| CliError::Config("command `noncompact` needs `y`".into()))?;
    let bound = noncompactness_bound(a, y, ctx)?;
    report.quantity(Quantity::new("noncompactness_bound", bound, Mode::LowerBound));
    if a.is_zero() {
        report.check("zero symbol", "T_0 = 0 is compact; bound = 0", Verdict::from_bool(bound == 0.0), String::new());
        return Ok(());
    }
    let cert = separated_sequence(a, cfg.budgets.epsilon, cfg.budgets.l, y, ctx)?;
    report.fact("dominant_index", cert.s);
    report.fact("indices", format!("{:?}", cert.indices));
    report.quantity(Quantity::exact("pairwise_min_l1", cert.pairwise_min));
    report.quantity(Quantity::exact("pairwise_min_y", cert.pairwise_min_y));
    report.quantity(Quantity::exact("l1_bound", cert.l1_bound));
    report.quantity(Quantity::new("certified_bound", cert.bound, Mode::LowerBound));
    report.check(
        "separation",
        "||T_a chi_{k_n} - T_a chi_{k_l}||_1 >= c (1 - eps) for all n != l",
        Verdict::from_bool(cert.valid),
        format!("{:.6} >= {:.6}", cert.pairwise_min, cert.l1_bound),
    );
    Ok(())
}

fn suite(cfg: &Config, report: &mut Report) {
    for c in criteria() {
        let start = Instant::now();
        let outcome = (c.run)(cfg.seed);
        report.timing.sections.insert(format!("criterion{:02}", c.id), start.elapsed().as_secs_f64());
        let name = format!("criterion {}: {}", c.id, c.title);
        match outcome {
            Ok(o) => {
                for q in o.quantities {
                    report.quantity(Quantity { name: format!("c{}.{}", c.id, q.name), ..q });
                }
                report.check(name, c.statement, Verdict::from_bool(o.passed), o.detail);
            }
            Err(e) => report.check(name, c.statement, Verdict::Fail, format!("error: {e}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(command: Command, json: &str) -> Report {
        execute(command, &Config::parse(json, None).unwrap()).unwrap()
    }

    #[test]
    fn identity_symbol_on_l2() {
        let r = run(
            Command::Toeplitz,
            r#"{"seed": 1, "symbol": [[0, 1, 0]], "x": {"lebesgue": {"p": 2}}, "y": {"lebesgue": {"p": 2}},
                "budgets": {"n": 128, "d": 8, "r": 4}}"#,
        );
        let get = |n: &str| r.quantities.iter().find(|q| q.name == n).unwrap().value;
        assert!((get("multiplier_norm") - 1.0).abs() < 1e-12);
        assert!((get("toeplitz_norm") - 1.0).abs() < 1e-9);
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn lebesgue_multipliers() {
        let r = run(
            Command::Spaces,
            r#"{"seed": 1, "x": {"lebesgue": {"p": 4}}, "y": {"lebesgue": {"p": 2}}, "budgets": {"n": 256}}"#,
        );
        let m = r.facts.iter().find(|f| f.name == "multiplier_space").unwrap();
        assert_eq!(m.value, "L^4");
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn unbounded_pair_is_reported() {
        let r = run(
            Command::Toeplitz,
            r#"{"seed": 1, "symbol": [[1, 1, 0]], "x": {"lebesgue": {"p": 2}}, "y": {"lebesgue": {"p": 4}},
                "budgets": {"n": 64, "d": 4, "r": 2}}"#,
        );
        assert_eq!(r.verdicts[0].name, "unbounded");
        assert!(r.quantities.is_empty());
    }

    #[test]
    fn noncompact_example() {
        let r = run(
            Command::Noncompact,
            r#"{"seed": 1, "symbol": [[3, 2, 0], [0, 1, 0]], "y": {"lebesgue": {"p": 2}}, "budgets": {"n": 256}}"#,
        );
        assert_eq!(r.verdict, Verdict::Pass);
        let b = r.quantities.iter().find(|q| q.name == "noncompactness_bound").unwrap();
        assert!((b.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn hilbert_sweep_is_monotone_and_below_the_distance() {
        let r = run(
            Command::NehariL2,
            r#"{"seed": 1, "symbol": {"hilbert": {"terms": 16}}, "sweep": [4, 8, 16],
                "budgets": {"n": 256, "dc": 12, "d": 4, "r": 2}}"#,
        );
        assert_eq!(r.verdict, Verdict::Pass, "{}", r.to_json());
    }

    #[test]
    fn default_factorization_round_trip() {
        let r = run(Command::Factorize, r#"{"seed": 3, "budgets": {"n": 512}}"#);
        assert_eq!(r.verdict, Verdict::Pass, "{}", r.to_json());
    }

    #[test]
    fn missing_inputs_are_config_errors() {
        let cfg = Config::parse(r#"{"seed": 1}"#, None).unwrap();
        assert!(matches!(execute(Command::Toeplitz, &cfg), Err(CliError::Config(_))));
        assert!(matches!(execute(Command::Norm, &cfg), Err(CliError::Config(_))));
    }
}

//! Symbolic space calculus: Köthe duals, multiplier spaces `M(X,Y)`,
//! product spaces `X ⊙ Y` and `p`-convexification.

use crate::error::{Error, Result};
use crate::exponent::{Exponent, Rational};

use super::orlicz::{legendre_transform_capped, log_grid, young_conjugate, TABLE_PER_DECADE};
use super::{boyd_indices, SpaceResult, SpaceSpec};

/// Köthe dual `X'` together with whether the identification is isometric.
#[derive(Debug, Clone, PartialEq)]
pub struct Dual {
    pub space: SpaceSpec,
    pub isometric: bool,
}

pub fn koethe_dual(x: &SpaceSpec) -> Result<Dual> {
    Ok(match x.canonical() {
        SpaceSpec::Bounded => Dual { space: SpaceSpec::Lebesgue { p: Exponent::int(1) }, isometric: true },
        SpaceSpec::Lebesgue { p } => Dual { space: SpaceSpec::Lebesgue { p: p.conjugate()? }.canonical(), isometric: true },
        SpaceSpec::Lorentz { p, q } => {
            Dual { space: SpaceSpec::Lorentz { p: p.conjugate()?, q: q.conjugate()? }, isometric: false }
        }
        SpaceSpec::Orlicz(phi) if phi.is_linear() => Dual { space: SpaceSpec::Bounded, isometric: true },
        SpaceSpec::Orlicz(phi) => {
            let conj = young_conjugate(&phi, &log_grid(1e-6, 1e6, TABLE_PER_DECADE))?;
            Dual { space: SpaceSpec::Orlicz(conj), isometric: false }
        }
    })
}

/// `(p, q)` Lorentz indices, reading `L^p` as `L^{p,p}`.
pub(crate) fn lorentz_indices(x: &SpaceSpec) -> Option<(Exponent, Exponent)> {
    match x.canonical() {
        SpaceSpec::Lebesgue { p } => Some((p, p)),
        SpaceSpec::Lorentz { p, q } => Some((p, q)),
        SpaceSpec::Bounded => Some((Exponent::Infinite, Exponent::Infinite)),
        SpaceSpec::Orlicz(_) => None,
    }
}

fn zero() -> Rational {
    Rational::from_integer(0)
}

/// `M(X, Y)`, the pointwise multipliers from `X` into `Y`.
pub fn multiplier_space(x: &SpaceSpec, y: &SpaceSpec) -> SpaceResult {
    if x == y {
        return SpaceResult::space(SpaceSpec::Bounded, true);
    }
    match (x.canonical(), y.canonical()) {
        (SpaceSpec::Bounded, y) => SpaceResult::space(y, true),
        (_, SpaceSpec::Bounded) => SpaceResult::zero(),
        (SpaceSpec::Lebesgue { p }, SpaceSpec::Lebesgue { p: q }) => {
            let r = q.reciprocal() - p.reciprocal();
            if r < zero() {
                return SpaceResult::zero();
            }
            match Exponent::from_reciprocal(r) {
                Ok(e) => SpaceResult::space(SpaceSpec::Lebesgue { p: e }.canonical(), true),
                Err(e) => SpaceResult::unknown(e.to_string()),
            }
        }
        (SpaceSpec::Lorentz { p: p1, q: q1 }, SpaceSpec::Lorentz { p, q }) => lorentz_multipliers(p1, q1, p, q),
        (SpaceSpec::Orlicz(phi1), SpaceSpec::Orlicz(phi)) => {
            match legendre_transform_capped(&phi, &phi1, &log_grid(1e-4, 1e4, TABLE_PER_DECADE)) {
                Ok(t) => SpaceResult::space(SpaceSpec::Orlicz(t), false),
                Err(Error::InfiniteAt(u)) => SpaceResult::unknown(format!("φ⊖φ₁ is infinite from u = {u:.3e}")),
                Err(e) => SpaceResult::unknown(e.to_string()),
            }
        }
        (x, y) => SpaceResult::unknown(format!("no multiplier formula for the pair ({}, {})", x.family(), y.family())),
    }
}

fn lorentz_multipliers(p1: Exponent, q1: Exponent, p: Exponent, q: Exponent) -> SpaceResult {
    let pf = p.to_f64();
    if !(pf > 1.0 && pf < f64::INFINITY) {
        return SpaceResult::unknown(format!("target exponent p = {p} outside (1, ∞)"));
    }
    let (rp, rp1, rq, rq1) = (p.reciprocal(), p1.reciprocal(), q.reciprocal(), q1.reciprocal());
    // p < p1 or (p = p1 and q > q1)
    let admissible = rp > rp1 || (rp == rp1 && rq < rq1);
    if !admissible {
        return SpaceResult::zero();
    }
    let p2 = if rp > rp1 { Exponent::from_reciprocal(rp - rp1) } else { Ok(Exponent::Infinite) };
    let q2 = if rq > rq1 { Exponent::from_reciprocal(rq - rq1) } else { Ok(Exponent::Infinite) };
    match (p2, q2) {
        (Ok(p2), Ok(q2)) => SpaceResult::space(SpaceSpec::Lorentz { p: p2, q: q2 }, false),
        (Err(e), _) | (_, Err(e)) => SpaceResult::unknown(e.to_string()),
    }
}

/// `X ⊙ Y`, the space of pointwise products.
pub fn product_space(x: &SpaceSpec, y: &SpaceSpec) -> SpaceResult {
    if let Ok(d) = koethe_dual(x) {
        if &d.space == y && !matches!(x, SpaceSpec::Lebesgue { .. } | SpaceSpec::Bounded) {
            return SpaceResult::space(SpaceSpec::Lebesgue { p: Exponent::int(1) }, true);
        }
    }
    match (x.canonical(), y.canonical()) {
        (SpaceSpec::Bounded, other) | (other, SpaceSpec::Bounded) => SpaceResult::space(other, true),
        (SpaceSpec::Lebesgue { p }, SpaceSpec::Lebesgue { p: q }) => {
            match Exponent::from_reciprocal(p.reciprocal() + q.reciprocal()) {
                Ok(r) => SpaceResult::space(SpaceSpec::Lebesgue { p: r }, true),
                Err(e) => SpaceResult::unknown(e.to_string()),
            }
        }
        (SpaceSpec::Lorentz { p: p1, q: q1 }, SpaceSpec::Lorentz { p: p2, q: q2 }) => {
            let r = Exponent::from_reciprocal(p1.reciprocal() + p2.reciprocal());
            let s = Exponent::from_reciprocal(q1.reciprocal() + q2.reciprocal());
            match (r, s) {
                (Ok(r), Ok(s)) if r == s => SpaceResult::space(SpaceSpec::Lebesgue { p: r }, false),
                (Ok(r), Ok(s)) => SpaceResult::space(SpaceSpec::Lorentz { p: r, q: s }, false),
                (Err(e), _) | (_, Err(e)) => SpaceResult::unknown(e.to_string()),
            }
        }
        (x, y) => SpaceResult::unknown(format!("no product formula for the pair ({}, {})", x.family(), y.family())),
    }
}

/// `X^{(r)}` normed by `‖ |f|^r ‖_X^{1/r}`.
pub fn convexify(x: &SpaceSpec, r: Rational) -> Result<SpaceSpec> {
    if r <= zero() {
        return Err(Error::InvalidArgument(format!("convexification power {r} must be positive")));
    }
    let scale = |e: Exponent| match e {
        Exponent::Finite(v) => Exponent::Finite(v * r),
        Exponent::Infinite => Exponent::Infinite,
    };
    Ok(match x.canonical() {
        SpaceSpec::Bounded => SpaceSpec::Bounded,
        SpaceSpec::Lebesgue { p } => SpaceSpec::Lebesgue { p: scale(p) },
        SpaceSpec::Lorentz { p, q } => SpaceSpec::Lorentz { p: scale(p), q: scale(q) },
        SpaceSpec::Orlicz(phi) => SpaceSpec::Orlicz(phi.compose_power(*r.numer() as f64 / *r.denom() as f64)?),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum IdentityStatus {
    Holds,
    Violated(String),
    Skipped(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub identity: &'static str,
    pub params: String,
    pub status: IdentityStatus,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn violations(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.checks.iter().filter(|c| matches!(c.status, IdentityStatus::Violated(_)))
    }

    pub fn count(&self, pred: impl Fn(&IdentityStatus) -> bool) -> usize {
        self.checks.iter().filter(|c| pred(&c.status)).count()
    }
}

const DUAL_OF_MULTIPLIERS: &str = "M(X,Y)' = X (.) Y'";
const MULTIPLIERS_INTO_L1: &str = "M(X,L^1) = X'";
const SELF_MULTIPLIERS: &str = "M(X,X)' = L^1 = X (.) X'";
const CONVEXIFIED_INDICES: &str = "boyd(X^(1/2)) = 2 boyd(X)";

fn compare_indices(a: &SpaceSpec, b: &SpaceSpec) -> IdentityStatus {
    match (lorentz_indices(a), lorentz_indices(b)) {
        (Some(ia), Some(ib)) if ia == ib => IdentityStatus::Holds,
        (Some(_), Some(_)) => IdentityStatus::Violated(format!("{a} != {b}")),
        _ => if a == b { IdentityStatus::Holds } else { IdentityStatus::Violated(format!("{a} != {b}")) },
    }
}

fn check_dual_of_multipliers(x: &SpaceSpec, y: &SpaceSpec) -> IdentityStatus {
    let m = multiplier_space(x, y);
    let Some(m) = m.as_space() else {
        return IdentityStatus::Skipped(format!("M(X,Y) = {m}"));
    };
    let lhs = match koethe_dual(m) {
        Ok(d) => d.space,
        Err(e) => return IdentityStatus::Skipped(e.to_string()),
    };
    let y_dual = match koethe_dual(y) {
        Ok(d) => d.space,
        Err(e) => return IdentityStatus::Skipped(e.to_string()),
    };
    let rhs = product_space(x, &y_dual);
    if rhs.quasi_normed {
        return IdentityStatus::Skipped(format!("X (.) Y' = {rhs} is only quasi-normed"));
    }
    match rhs.as_space() {
        Some(rhs) => compare_indices(&lhs, rhs),
        None => IdentityStatus::Skipped(format!("X (.) Y' = {rhs}")),
    }
}

/// Symbolic identities over parameter sweeps of Lebesgue and Lorentz spaces.
pub fn space_identity_suite() -> IdentityReport {
    let mut report = IdentityReport::default();
    let lebesgue: Vec<Exponent> = vec![
        Exponent::int(1),
        Exponent::ratio(3, 2),
        Exponent::int(2),
        Exponent::int(3),
        Exponent::int(4),
        Exponent::Infinite,
    ];
    for &p1 in &lebesgue {
        for &p in &lebesgue {
            if p.to_f64() > p1.to_f64() || p.is_infinite() {
                continue;
            }
            let x = SpaceSpec::Lebesgue { p: p1 }.canonical();
            let y = SpaceSpec::Lebesgue { p }.canonical();
            report.checks.push(IdentityCheck {
                identity: DUAL_OF_MULTIPLIERS,
                params: format!("X={x}, Y={y}"),
                status: check_dual_of_multipliers(&x, &y),
            });
        }
    }

    let qs = [Exponent::int(1), Exponent::int(2), Exponent::Infinite];
    let ps = [Exponent::ratio(3, 2), Exponent::int(2), Exponent::ratio(5, 2), Exponent::int(3), Exponent::ratio(7, 2)];
    for p1 in [2, 3, 4].map(Exponent::int) {
        for q1 in qs {
            for p in ps.iter().copied().filter(|p| p.to_f64() < p1.to_f64()) {
                for q in qs {
                    let x = SpaceSpec::Lorentz { p: p1, q: q1 };
                    let y = SpaceSpec::Lorentz { p, q };
                    report.checks.push(IdentityCheck {
                        identity: DUAL_OF_MULTIPLIERS,
                        params: format!("X={x}, Y={y}"),
                        status: check_dual_of_multipliers(&x, &y),
                    });
                }
            }
        }
    }

    for &p in &lebesgue {
        let x = SpaceSpec::Lebesgue { p }.canonical();
        let l1 = SpaceSpec::Lebesgue { p: Exponent::int(1) };
        let status = match (multiplier_space(&x, &l1).as_space(), koethe_dual(&x)) {
            (Some(m), Ok(d)) => compare_indices(m, &d.space),
            (m, d) => IdentityStatus::Violated(format!("M = {m:?}, dual = {d:?}")),
        };
        report.checks.push(IdentityCheck { identity: MULTIPLIERS_INTO_L1, params: format!("X={x}"), status });
    }

    let mut selves: Vec<SpaceSpec> = lebesgue.iter().map(|&p| SpaceSpec::Lebesgue { p }.canonical()).collect();
    for p in ps {
        for q in qs {
            selves.push(SpaceSpec::Lorentz { p, q });
        }
    }
    for x in &selves {
        let status = (|| {
            let m = multiplier_space(x, x);
            let lhs = koethe_dual(m.as_space()?).ok()?.space;
            let rhs = product_space(x, &koethe_dual(x).ok()?.space);
            let l1 = SpaceSpec::Lebesgue { p: Exponent::int(1) };
            Some(match (compare_indices(&lhs, &l1), rhs.as_space().map(|r| compare_indices(r, &l1))) {
                (IdentityStatus::Holds, Some(IdentityStatus::Holds)) => IdentityStatus::Holds,
                (a, b) => IdentityStatus::Violated(format!("{a:?} / {b:?}")),
            })
        })()
        .unwrap_or_else(|| IdentityStatus::Violated("undefined side".into()));
        report.checks.push(IdentityCheck { identity: SELF_MULTIPLIERS, params: format!("X={x}"), status });
    }

    let half = Rational::new(1, 2);
    for x in selves.iter().filter(|x| !x.is_bounded()) {
        let status = match (convexify(x, half), boyd_indices(x)) {
            (Ok(xc), Ok(b)) => match boyd_indices(&xc) {
                Ok(bc) if (bc.alpha - 2.0 * b.alpha).abs() < 1e-12 && (bc.beta - 2.0 * b.beta).abs() < 1e-12 => {
                    IdentityStatus::Holds
                }
                Ok(bc) => IdentityStatus::Violated(format!("({}, {}) vs 2*({}, {})", bc.alpha, bc.beta, b.alpha, b.beta)),
                Err(e) => IdentityStatus::Skipped(e.to_string()),
            },
            (a, b) => IdentityStatus::Skipped(format!("{:?} {:?}", a.err(), b.err())),
        };
        report.checks.push(IdentityCheck { identity: CONVEXIFIED_INDICES, params: format!("X={x}"), status });
    }
    report
}

/// Whether `X ⊙ M(X,Y) = Y` holds by the index calculus.
pub(crate) fn factorizes(x: &SpaceSpec, y: &SpaceSpec) -> Option<bool> {
    let m = multiplier_space(x, y);
    let m = m.as_space()?;
    let prod = product_space(x, m);
    let prod = prod.as_space()?;
    match (lorentz_indices(prod), lorentz_indices(y)) {
        (Some(a), Some(b)) => Some(a == b),
        _ => Some(prod == y),
    }
}

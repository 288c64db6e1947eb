//! Orlicz functions, their inverses, Young conjugates and the generalized
//! Legendre transform `(φ ⊖ φ₁)(u) = sup_{v>0} { φ(uv) − φ₁(v) }`.

use std::f64::consts::E;
use std::fmt;

use crate::error::{Error, Result};
use crate::search::golden_max;

/// A convex, non-decreasing `φ: [0,∞) → [0,∞]` with `φ(0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum OrliczSpec {
    /// `t^p`
    Power { p: f64 },
    /// `t^p · log(e + t)^a`
    PowerLog { p: f64, a: f64 },
    Tabulated(Table),
}

/// Monotone sample table, linear between nodes, power-law beyond the ends.
///
/// Values past `cap` are `+∞`, which is how transforms that blow up at a
/// finite argument are represented.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    t: Vec<f64>,
    phi: Vec<f64>,
    cap: Option<f64>,
    repaired: bool,
}

impl Table {
    /// Builds a table from increasing nodes, repairing monotonicity and
    /// convexity if needed (running maximum, then greatest convex minorant
    /// through the origin).
    pub fn new(t: Vec<f64>, phi: Vec<f64>, cap: Option<f64>) -> Result<Self> {
        if t.len() != phi.len() || t.len() < 2 {
            return Err(Error::InvalidSpace("Orlicz table needs at least two matching nodes".into()));
        }
        if t.windows(2).any(|w| !(w[1] > w[0])) || t[0] <= 0.0 {
            return Err(Error::InvalidSpace("Orlicz table nodes must be positive and increasing".into()));
        }
        if phi.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidSpace("Orlicz table values must be finite and nonnegative".into()));
        }
        let repaired_phi = convex_repair(&t, &phi);
        let repaired = phi
            .iter()
            .zip(&repaired_phi)
            .any(|(a, b)| (a - b).abs() > 1e-6 * a.abs().max(b.abs()).max(f64::MIN_POSITIVE));
        Ok(Self { t, phi: repaired_phi, cap, repaired })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.t
    }

    pub fn values(&self) -> &[f64] {
        &self.phi
    }

    pub fn cap(&self) -> Option<f64> {
        self.cap
    }

    /// Whether the convex/monotone repair moved any value by more than 1e-6 relative.
    pub fn repaired(&self) -> bool {
        self.repaired
    }

    fn log_slope(t0: f64, t1: f64, p0: f64, p1: f64) -> Option<f64> {
        (p0 > 0.0 && p1 > 0.0).then(|| (p1 / p0).ln() / (t1 / t0).ln())
    }

    fn eval(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if let Some(cap) = self.cap {
            if x > cap {
                return f64::INFINITY;
            }
        }
        let n = self.t.len();
        if x < self.t[0] {
            return match Self::log_slope(self.t[0], self.t[1], self.phi[0], self.phi[1]) {
                Some(s) => self.phi[0] * (x / self.t[0]).powf(s.max(1.0)),
                None => self.phi[0] * x / self.t[0],
            };
        }
        if x >= self.t[n - 1] {
            let (t0, t1, p0, p1) = (self.t[n - 2], self.t[n - 1], self.phi[n - 2], self.phi[n - 1]);
            return match Self::log_slope(t0, t1, p0, p1) {
                Some(s) => p1 * (x / t1).powf(s.max(1.0)),
                None => p1 + (p1 - p0) / (t1 - t0) * (x - t1),
            };
        }
        let i = self.t.partition_point(|&v| v <= x) - 1;
        let w = (x - self.t[i]) / (self.t[i + 1] - self.t[i]);
        self.phi[i] + w * (self.phi[i + 1] - self.phi[i])
    }
}

fn convex_repair(t: &[f64], phi: &[f64]) -> Vec<f64> {
    let mut running = Vec::with_capacity(phi.len());
    let mut m = 0.0f64;
    for &v in phi {
        m = m.max(v);
        running.push(m);
    }
    // lower convex hull of (0,0) and the nodes
    let mut hull: Vec<(f64, f64)> = vec![(0.0, 0.0)];
    for (&x, &y) in t.iter().zip(&running) {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            // drop the middle point if it lies above the chord
            if (y2 - y1) * (x - x1) >= (y - y1) * (x2 - x1) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push((x, y));
    }
    t.iter()
        .map(|&x| {
            let i = hull.partition_point(|h| h.0 <= x).saturating_sub(1);
            if i + 1 >= hull.len() {
                hull[hull.len() - 1].1
            } else {
                let (x0, y0) = hull[i];
                let (x1, y1) = hull[i + 1];
                y0 + (y1 - y0) * (x - x0) / (x1 - x0)
            }
        })
        .collect()
}

impl OrliczSpec {
    pub fn power(p: f64) -> Result<Self> {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(Error::InvalidSpace(format!("Orlicz power p = {p} must be in [1, ∞)")));
        }
        Ok(OrliczSpec::Power { p })
    }

    pub fn power_log(p: f64, a: f64) -> Result<Self> {
        if !(p >= 1.0) || !p.is_finite() || !(a >= 0.0) || !a.is_finite() {
            return Err(Error::InvalidSpace(format!("Orlicz power-log needs p ≥ 1, a ≥ 0 (got p = {p}, a = {a})")));
        }
        Ok(OrliczSpec::PowerLog { p, a })
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match self {
            OrliczSpec::Power { p } => t.powf(*p),
            OrliczSpec::PowerLog { p, a } => t.powf(*p) * (E + t).ln().powf(*a),
            OrliczSpec::Tabulated(table) => table.eval(t),
        }
    }

    /// Right-continuous inverse `φ⁻¹(u) = sup{ t : φ(t) ≤ u }`.
    pub fn inverse(&self, u: f64) -> Result<f64> {
        if u.is_nan() || u < 0.0 {
            return Err(Error::Inverse(u));
        }
        match self {
            OrliczSpec::Power { p } => Ok(u.powf(1.0 / p)),
            _ => {
                if u == f64::INFINITY {
                    return Ok(f64::INFINITY);
                }
                // bracket then bisect on the monotone function
                let mut hi = 1.0;
                let mut guard = 0;
                while self.eval(hi) <= u {
                    hi *= 2.0;
                    guard += 1;
                    if guard > 2000 {
                        return Err(Error::Inverse(u));
                    }
                }
                let mut lo = 0.0;
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if self.eval(mid) <= u {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                Ok(lo)
            }
        }
    }

    /// Convexity/monotonicity check on a log grid: secant slopes non-decreasing.
    pub fn is_convex_on_grid(&self) -> bool {
        let ts: Vec<f64> = (0..=120).map(|i| 10f64.powf(-3.0 + 6.0 * i as f64 / 120.0)).collect();
        let vals: Vec<f64> = ts.iter().map(|&t| self.eval(t)).collect();
        let mut prev = vals[0] / ts[0];
        for i in 1..ts.len() {
            if !vals[i].is_finite() {
                break;
            }
            let s = (vals[i] - vals[i - 1]) / (ts[i] - ts[i - 1]);
            if s < 0.0 || s < prev * (1.0 - 1e-9) - 1e-12 {
                return false;
            }
            prev = s;
        }
        true
    }

    /// `φ(t) = t`, the space `L¹`.
    pub(crate) fn is_linear(&self) -> bool {
        matches!(self, OrliczSpec::Power { p } if *p == 1.0)
    }

    /// `φ(t^r)`, the function of the `1/r`-convexification.
    pub fn compose_power(&self, r: f64) -> Result<Self> {
        match self {
            OrliczSpec::Power { p } => Ok(OrliczSpec::Power { p: p * r }),
            _ => {
                let t = log_grid(1e-4, 1e4, TABLE_PER_DECADE);
                let phi = t.iter().map(|&x| self.eval(x.powf(r))).collect();
                Ok(OrliczSpec::Tabulated(Table::new(t, phi, None)?))
            }
        }
    }
}

impl fmt::Display for OrliczSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrliczSpec::Power { p } => write!(f, "t^{p}"),
            OrliczSpec::PowerLog { p, a } => write!(f, "t^{p} log(e+t)^{a}"),
            OrliczSpec::Tabulated(t) => write!(f, "tabulated[{} nodes]", t.t.len()),
        }
    }
}

/// Log-spaced grid on `[lo, hi]` with `per_decade` points per decade.
/// Node density for tabulated Orlicz functions; linear interpolation of a
/// power `t^p` between nodes is then accurate to about `p²·1.4e-5` relative.
pub(crate) const TABLE_PER_DECADE: usize = 100;

pub fn log_grid(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let decades = (hi / lo).log10();
    let n = (decades * per_decade as f64).round().max(1.0) as usize;
    (0..=n).map(|i| lo * 10f64.powf(decades * i as f64 / n as f64)).collect()
}

/// Search range for the inner supremum over `v`.
const V_LO: f64 = 1e-10;
const V_HI: f64 = 1e12;
const V_PER_DECADE: usize = 24;

/// `sup_{v>0} φ(uv) − φ₁(v)` at one `u`: log-grid scan, then golden section
/// in `log v` around the best node.
pub fn legendre_at(phi: &OrliczSpec, phi1: &OrliczSpec, u: f64) -> Result<f64> {
    if u <= 0.0 {
        return Ok(0.0);
    }
    let vs = log_grid(V_LO, V_HI, V_PER_DECADE);
    let obj = |v: f64| phi.eval(u * v) - phi1.eval(v);
    let vals: Vec<f64> = vs.iter().map(|&v| obj(v)).collect();
    let (imax, vmax) = vals
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
    if !vmax.is_finite() || imax == vs.len() - 1 {
        return Err(Error::InfiniteAt(u));
    }
    if vmax <= 0.0 && imax == 0 {
        return Ok(0.0);
    }
    let lo = vs[imax.saturating_sub(1)].ln();
    let hi = vs[(imax + 1).min(vs.len() - 1)].ln();
    let (_, best) = golden_max(|s| obj(s.exp()), lo, hi, 80);
    Ok(best.max(vmax).max(0.0))
}

/// Tabulates `φ ⊖ φ₁` on `u_grid`.
pub fn legendre_transform(phi: &OrliczSpec, phi1: &OrliczSpec, u_grid: &[f64]) -> Result<OrliczSpec> {
    check_grid(u_grid)?;
    let vals = u_grid.iter().map(|&u| legendre_at(phi, phi1, u)).collect::<Result<Vec<_>>>()?;
    Ok(OrliczSpec::Tabulated(Table::new(u_grid.to_vec(), vals, None)?))
}

/// Like [`legendre_transform`] but truncates at the first `u` where the
/// supremum is infinite and records it as the table's cap.
pub(crate) fn legendre_transform_capped(phi: &OrliczSpec, phi1: &OrliczSpec, u_grid: &[f64]) -> Result<OrliczSpec> {
    check_grid(u_grid)?;
    let mut t = Vec::new();
    let mut vals = Vec::new();
    let mut cap = None;
    for &u in u_grid {
        match legendre_at(phi, phi1, u) {
            Ok(v) => {
                t.push(u);
                vals.push(v);
            }
            Err(Error::InfiniteAt(_)) => {
                cap = t.last().copied();
                break;
            }
            Err(e) => return Err(e),
        }
    }
    if t.len() < 2 {
        return Err(Error::InfiniteAt(u_grid[0]));
    }
    Ok(OrliczSpec::Tabulated(Table::new(t, vals, cap)?))
}

fn check_grid(u_grid: &[f64]) -> Result<()> {
    if u_grid.len() < 2 || u_grid[0] <= 0.0 || u_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("u grid must be positive, increasing, at least two points".into()));
    }
    Ok(())
}

/// Young conjugate `φ*(u) = sup_v { uv − φ(v) }` via the first-order
/// condition `φ'(v) = u`, solved by bisection on a central-difference
/// derivative. Independent of the grid search in [`legendre_at`].
pub fn young_conjugate_at(phi: &OrliczSpec, u: f64) -> Result<f64> {
    if u <= 0.0 {
        return Ok(0.0);
    }
    let deriv = |v: f64| {
        let h = 1e-6 * v.max(1e-12);
        (phi.eval(v + h) - phi.eval((v - h).max(0.0))) / (v + h - (v - h).max(0.0))
    };
    let mut hi = 1.0;
    let mut guard = 0;
    while deriv(hi) < u {
        hi *= 2.0;
        guard += 1;
        if guard > 200 {
            return Err(Error::InfiniteAt(u));
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if deriv(mid) < u {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let v = 0.5 * (lo + hi);
    Ok((u * v - phi.eval(v)).max(0.0))
}

/// Tabulated Young conjugate. `φ(t) = t` has conjugate `0·[0,1] + ∞·(1,∞)`,
/// which callers map to `L^∞` before reaching this function.
pub fn young_conjugate(phi: &OrliczSpec, u_grid: &[f64]) -> Result<OrliczSpec> {
    check_grid(u_grid)?;
    if let OrliczSpec::Power { p } = phi {
        if *p == 1.0 {
            return Err(Error::InfiniteAt(1.0));
        }
    }
    let vals = u_grid.iter().map(|&u| young_conjugate_at(phi, u)).collect::<Result<Vec<_>>>()?;
    Ok(OrliczSpec::Tabulated(Table::new(u_grid.to_vec(), vals, None)?))
}

/// Outcome of the factorization test
/// `c φ₁⁻¹(u) (φ⊖φ₁)⁻¹(u) ≤ φ⁻¹(u) ≤ C φ₁⁻¹(u) (φ⊖φ₁)⁻¹(u)` for `u > u₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorizationCheck {
    pub holds: bool,
    /// `φ ⊖ φ₁` is `0` then `+∞` (the case `φ = φ₁`, multiplier space `L^∞`).
    pub degenerate: bool,
    /// Observed `[min, max]` of the ratio over the grid.
    pub interval: (f64, f64),
    /// Least-squares slope of `log ratio` against `log u`.
    pub drift: f64,
}

/// Ratios within this spread over the grid count as bounded.
pub const ORFAC_MAX_SPREAD: f64 = 10.0;
/// Maximal tolerated log-log drift of the ratio.
pub const ORFAC_MAX_DRIFT: f64 = 0.02;

pub fn orlicz_factorization_check(
    phi: &OrliczSpec,
    phi1: &OrliczSpec,
    u0: f64,
    u_grid: &[f64],
) -> Result<FactorizationCheck> {
    check_grid(u_grid)?;
    if u_grid[0] <= u0 {
        return Err(Error::InvalidArgument(format!("u grid must lie in (u0, ∞) with u0 = {u0}")));
    }
    if phi == phi1 {
        return Ok(FactorizationCheck { holds: true, degenerate: true, interval: (1.0, 1.0), drift: 0.0 });
    }
    // tabulate φ⊖φ₁ on arguments wide enough to invert at every grid value
    let args = log_grid(1e-6, 1e6, TABLE_PER_DECADE);
    let transform = legendre_transform_capped(phi, phi1, &args)?;
    let table_max = match &transform {
        OrliczSpec::Tabulated(t) => {
            if t.cap.is_some() {
                *t.phi.last().unwrap_or(&0.0)
            } else {
                f64::INFINITY
            }
        }
        _ => f64::INFINITY,
    };
    if transform.eval(1e-6 * 2.0) == 0.0 && transform.eval(1.0) == 0.0 {
        return Ok(FactorizationCheck { holds: true, degenerate: true, interval: (1.0, 1.0), drift: 0.0 });
    }
    let mut ratios = Vec::with_capacity(u_grid.len());
    for &u in u_grid {
        if u > table_max {
            return Err(Error::Inverse(u));
        }
        let num = phi.inverse(u)?;
        let den = phi1.inverse(u)? * transform.inverse(u)?;
        if !(den > 0.0) || !num.is_finite() {
            return Err(Error::Inverse(u));
        }
        ratios.push(num / den);
    }
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(0.0, f64::max);
    let xs: Vec<f64> = u_grid.iter().map(|u| u.ln()).collect();
    let ys: Vec<f64> = ratios.iter().map(|r| r.ln()).collect();
    let drift = ls_slope(&xs, &ys);
    let holds = lo > 0.0 && hi / lo <= ORFAC_MAX_SPREAD && drift.abs() <= ORFAC_MAX_DRIFT;
    Ok(FactorizationCheck { holds, degenerate: false, interval: (lo, hi), drift })
}

pub(crate) fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_inverse_roundtrip() {
        for spec in [OrliczSpec::power(2.5).unwrap(), OrliczSpec::power_log(2.0, 1.0).unwrap()] {
            for &t in &[1e-3, 0.1, 1.0, 7.0, 300.0] {
                let back = spec.inverse(spec.eval(t)).unwrap();
                assert!((back - t).abs() <= 1e-8 * t.max(1.0), "{spec}: {t} -> {back}");
            }
            assert!(spec.is_convex_on_grid());
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(OrliczSpec::power(0.5).is_err());
        assert!(OrliczSpec::power_log(2.0, -1.0).is_err());
        assert!(Table::new(vec![1.0], vec![1.0], None).is_err());
        assert!(Table::new(vec![2.0, 1.0], vec![1.0, 2.0], None).is_err());
    }

    #[test]
    fn legendre_of_square_and_quartic() {
        let phi = OrliczSpec::power(2.0).unwrap();
        let phi1 = OrliczSpec::power(4.0).unwrap();
        for &u in &[0.1, 0.5, 1.0, 3.0, 10.0] {
            let v = legendre_at(&phi, &phi1, u).unwrap();
            let exact = u.powi(4) / 4.0;
            assert!((v - exact).abs() <= 1e-9 * exact, "u={u}: {v} vs {exact}");
        }
    }

    #[test]
    fn legendre_identical_functions() {
        let phi = OrliczSpec::power_log(2.0, 1.0).unwrap();
        assert_eq!(legendre_at(&phi, &phi, 1.0).unwrap(), 0.0);
        assert!(legendre_at(&phi, &phi, 0.5).unwrap().abs() < 1e-12);
        assert!(matches!(legendre_at(&phi, &phi, 2.0), Err(Error::InfiniteAt(_))));
    }

    #[test]
    fn legendre_unbounded_growth() {
        let phi = OrliczSpec::power(4.0).unwrap();
        let phi1 = OrliczSpec::power(2.0).unwrap();
        assert!(matches!(legendre_at(&phi, &phi1, 1.0), Err(Error::InfiniteAt(_))));
    }

    #[test]
    fn identity_transform_is_young_conjugate() {
        // (t ⊖ φ₁)(u) = sup_v uv − φ₁(v) = φ₁*(u)
        let id = OrliczSpec::power(1.0).unwrap();
        for phi1 in [OrliczSpec::power(3.0).unwrap(), OrliczSpec::power_log(2.0, 0.5).unwrap()] {
            for &u in &[0.2, 1.0, 4.0, 25.0] {
                let a = legendre_at(&id, &phi1, u).unwrap();
                let b = young_conjugate_at(&phi1, u).unwrap();
                assert!((a - b).abs() <= 1e-6 * a.max(1e-12), "{phi1} u={u}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn young_conjugate_closed_form() {
        // (t^p)* = (p−1) p^{−p'} u^{p'}
        let p: f64 = 3.0;
        let pc = p / (p - 1.0);
        let phi = OrliczSpec::power(p).unwrap();
        for &u in &[0.5f64, 2.0, 9.0] {
            let exact = (p - 1.0) * p.powf(-pc) * u.powf(pc);
            let v = young_conjugate_at(&phi, u).unwrap();
            assert!((v - exact).abs() <= 1e-8 * exact);
        }
    }

    #[test]
    fn table_repair_is_flagged() {
        let t = vec![1.0, 2.0, 3.0, 4.0];
        let ok = Table::new(t.clone(), vec![1.0, 4.0, 9.0, 16.0], None).unwrap();
        assert!(!ok.repaired());
        let bad = Table::new(t, vec![1.0, 4.0, 3.0, 16.0], None).unwrap();
        assert!(bad.repaired());
        assert!(bad.values().windows(2).all(|w| w[1] >= w[0]));
        assert!(OrliczSpec::Tabulated(bad).is_convex_on_grid());
    }

    #[test]
    fn capped_table_is_infinite_past_cap() {
        let t = Table::new(vec![1.0, 2.0], vec![1.0, 4.0], Some(2.0)).unwrap();
        let spec = OrliczSpec::Tabulated(t);
        assert!(spec.eval(2.5).is_infinite());
        assert!((spec.eval(1.5) - 2.5).abs() < 1e-12);
    }

    #[test]
    fn factorization_powers() {
        let phi = OrliczSpec::power(2.0).unwrap();
        let phi1 = OrliczSpec::power(4.0).unwrap();
        let grid = log_grid(2.0, 1e3, 8);
        let chk = orlicz_factorization_check(&phi, &phi1, 1.0, &grid).unwrap();
        assert!(chk.holds);
        assert!(!chk.degenerate);
        // all inverses are powers: ratio is the constant 4^{-1/4}
        let c = 4f64.powf(-0.25);
        assert!((chk.interval.0 - c).abs() < 1e-3 && (chk.interval.1 - c).abs() < 1e-3, "{:?}", chk.interval);

        let same = orlicz_factorization_check(&phi, &phi, 1.0, &grid).unwrap();
        assert!(same.degenerate);
        assert!(orlicz_factorization_check(&phi, &phi1, 5.0, &grid).is_err());
    }
}

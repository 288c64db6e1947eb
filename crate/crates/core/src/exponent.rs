//! Exact exponents for the Lebesgue/Lorentz index calculus.
//!
//! Indices live in `(0, ∞]` and are stored as rationals so that relations
//! like `1/r = 1/q − 1/p` hold exactly.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Exponent {
    Finite(Rational),
    Infinite,
}

impl Exponent {
    pub fn int(n: i64) -> Self {
        Exponent::Finite(Rational::from_integer(n))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Exponent::Finite(Rational::new(num, den))
    }

    /// Converts a float, recovering small rationals such as `1.5 = 3/2` exactly.
    pub fn from_f64(x: f64) -> Result<Self> {
        if x == f64::INFINITY {
            return Ok(Exponent::Infinite);
        }
        if !x.is_finite() || x <= 0.0 {
            return Err(Error::InvalidSpace(format!("exponent {x} is not in (0, ∞]")));
        }
        let r = Rational::approximate_float(x)
            .ok_or_else(|| Error::InvalidSpace(format!("exponent {x} is not representable")))?;
        // prefer a short continued-fraction convergent when it is within rounding
        let short = best_short_rational(x);
        let r = match short {
            Some(s) if (*s.numer() as f64 / *s.denom() as f64 - x).abs() <= 1e-12 * x => s,
            _ => r,
        };
        Ok(Exponent::Finite(r))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Exponent::Infinite)
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Exponent::Finite(r) => *r.numer() as f64 / *r.denom() as f64,
            Exponent::Infinite => f64::INFINITY,
        }
    }

    /// `1/p`, with `1/∞ = 0`.
    pub fn reciprocal(self) -> Rational {
        match self {
            Exponent::Finite(r) => r.recip(),
            Exponent::Infinite => Rational::from_integer(0),
        }
    }

    /// The exponent whose reciprocal is `r`; `r = 0` gives `∞`.
    pub fn from_reciprocal(r: Rational) -> Result<Self> {
        if r == Rational::from_integer(0) {
            Ok(Exponent::Infinite)
        } else if r > Rational::from_integer(0) {
            Ok(Exponent::Finite(r.recip()))
        } else {
            Err(Error::InvalidSpace(format!("reciprocal exponent {r} is negative")))
        }
    }

    /// Hölder conjugate `p'` with `1/p + 1/p' = 1`; defined for `p ≥ 1`.
    pub fn conjugate(self) -> Result<Self> {
        let one = Rational::from_integer(1);
        let r = self.reciprocal();
        if r > one {
            return Err(Error::InvalidSpace(format!("no Hölder conjugate for exponent {self} < 1")));
        }
        Exponent::from_reciprocal(one - r)
    }
}

fn best_short_rational(x: f64) -> Option<Rational> {
    // continued fraction convergents with denominators up to 10^6
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut y = x;
    for _ in 0..32 {
        let a = y.floor();
        if a > 1e12 {
            break;
        }
        let a = a as i64;
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        if k2 > 1_000_000 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if ((h1 as f64 / k1 as f64) - x).abs() <= 1e-12 * x {
            return Some(Rational::new(h1, k1));
        }
        let frac = y - a as f64;
        if frac < 1e-15 {
            break;
        }
        y = 1.0 / frac;
    }
    (k1 != 0).then(|| Rational::new(h1, k1))
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(r) if *r.denom() == 1 => write!(f, "{}", r.numer()),
            Exponent::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Exponent::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    /// Accepts `inf`, integers, decimals and `a/b`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if matches!(s, "inf" | "infinity" | "∞") {
            return Ok(Exponent::Infinite);
        }
        if let Some((n, d)) = s.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| Error::InvalidSpace(format!("bad exponent {s:?}")))?;
            let d: i64 = d.trim().parse().map_err(|_| Error::InvalidSpace(format!("bad exponent {s:?}")))?;
            if n <= 0 || d <= 0 {
                return Err(Error::InvalidSpace(format!("exponent {s:?} is not positive")));
            }
            return Ok(Exponent::ratio(n, d));
        }
        let x: f64 = s.parse().map_err(|_| Error::InvalidSpace(format!("bad exponent {s:?}")))?;
        Exponent::from_f64(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_short_rationals() {
        assert_eq!(Exponent::from_f64(1.5).unwrap(), Exponent::ratio(3, 2));
        assert_eq!(Exponent::from_f64(4.0 / 3.0).unwrap(), Exponent::ratio(4, 3));
        assert_eq!(Exponent::from_f64(f64::INFINITY).unwrap(), Exponent::Infinite);
        assert!(Exponent::from_f64(0.0).is_err());
        assert!(Exponent::from_f64(f64::NAN).is_err());
    }

    #[test]
    fn conjugates() {
        assert_eq!(Exponent::int(4).conjugate().unwrap(), Exponent::ratio(4, 3));
        assert_eq!(Exponent::int(1).conjugate().unwrap(), Exponent::Infinite);
        assert_eq!(Exponent::Infinite.conjugate().unwrap(), Exponent::int(1));
        assert!(Exponent::ratio(1, 2).conjugate().is_err());
    }

    #[test]
    fn parse_and_display() {
        for s in ["3/2", "4", "inf", "2.5"] {
            let e: Exponent = s.parse().unwrap();
            let back: Exponent = e.to_string().parse().unwrap();
            assert_eq!(e, back);
        }
        assert_eq!("2.5".parse::<Exponent>().unwrap(), Exponent::ratio(5, 2));
        assert!("-1".parse::<Exponent>().is_err());
        assert!("x".parse::<Exponent>().is_err());
    }
}

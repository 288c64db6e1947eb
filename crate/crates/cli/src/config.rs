//! Experiment configuration: a single JSON file.
//!
//! ```json
//! {
//!   "seed": 7,
//!   "symbol": [[0, 1.0, 0.0], [3, 2.0, 0.0]],
//!   "x": {"lebesgue": {"p": 4}},
//!   "y": {"lorentz": {"p": 2, "q": "inf"}},
//!   "spaces": [{"orlicz": {"family": "power-log", "p": 2, "a": 1}}, "bounded"],
//!   "budgets": {"n": 1024, "m": 64, "d": 32, "r": 64, "dc": 24, "l": 5, "epsilon": 0.1},
//!   "sweep": [8, 16, 32, 64]
//! }
//! ```

use std::path::Path;

use hardy_core::circle::{FourierSeries, C64};
use hardy_core::exponent::Exponent;
use hardy_core::spaces::{OrliczSpec, SpaceSpec, Table};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::symbols::{random_symbol, rng};

/// Stream tag for the RNG that draws a `random` symbol.
const SYMBOL_STREAM: u64 = 1;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub seed: Option<u64>,
    pub symbol: Option<SymbolConfig>,
    pub x: Option<SpaceConfig>,
    pub y: Option<SpaceConfig>,
    #[serde(default)]
    pub spaces: Vec<SpaceConfig>,
    #[serde(default)]
    pub budgets: Budgets,
    pub sweep: Option<Vec<usize>>,
    pub factors: Option<FactorsConfig>,
}

/// Either explicit `[n, re, im]` triples or a named family.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum SymbolConfig {
    Coefficients(Vec<(i64, f64, f64)>),
    Named(NamedSymbol),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum NamedSymbol {
    /// `χ_n`.
    Character(i64),
    /// Seeded coefficients, uniform in `[−1, 1]²`, on `lo..=hi`.
    Random { lo: i64, hi: i64 },
    /// `Σ_{n=1}^{terms} χ_n / n`, whose Hankel matrix is the Hilbert matrix.
    Hilbert { terms: usize },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum SpaceConfig {
    Lebesgue { p: ExponentValue },
    Lorentz { p: ExponentValue, q: ExponentValue },
    Orlicz(OrliczConfig),
    Bounded,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum OrliczConfig {
    Power { p: f64 },
    PowerLog { p: f64, a: f64 },
    Tabulated { t: Vec<f64>, phi: Vec<f64> },
}

/// A number, or a string such as `"inf"` or `"3/2"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ExponentValue {
    Number(f64),
    Text(String),
}

impl ExponentValue {
    fn resolve(&self) -> Result<Exponent> {
        match self {
            ExponentValue::Number(x) => Ok(Exponent::from_f64(*x)?),
            ExponentValue::Text(s) => Ok(s.parse::<Exponent>()?),
        }
    }
}

impl SpaceConfig {
    pub fn resolve(&self) -> Result<SpaceSpec> {
        Ok(match self {
            SpaceConfig::Lebesgue { p } => SpaceSpec::lebesgue_exp(p.resolve()?)?.canonical(),
            SpaceConfig::Lorentz { p, q } => SpaceSpec::lorentz_exp(p.resolve()?, q.resolve()?)?,
            SpaceConfig::Orlicz(o) => SpaceSpec::orlicz(match o {
                OrliczConfig::Power { p } => OrliczSpec::power(*p)?,
                OrliczConfig::PowerLog { p, a } => OrliczSpec::power_log(*p, *a)?,
                OrliczConfig::Tabulated { t, phi } => OrliczSpec::Tabulated(Table::new(t.clone(), phi.clone(), None)?),
            }),
            SpaceConfig::Bounded => SpaceSpec::Bounded,
        })
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorsConfig {
    pub p: Vec<(i64, f64, f64)>,
    pub q: Vec<(i64, f64, f64)>,
}

/// Numerical budgets; every field has a documented default.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct Budgets {
    /// Grid points.
    pub n: usize,
    /// Matrix truncation size.
    pub m: usize,
    /// Polynomial degree of variational test functions.
    pub d: usize,
    /// Random restarts.
    pub r: usize,
    /// Degree of the antianalytic corrector.
    pub dc: usize,
    /// Length of the separated sequence.
    pub l: usize,
    pub epsilon: f64,
}

impl Default for Budgets {
    fn default() -> Self {
        Self { n: 1024, m: 64, d: 32, r: 64, dc: 24, l: 5, epsilon: 0.1 }
    }
}

impl Budgets {
    fn validate(&self) -> Result<()> {
        let positive = [("n", self.n), ("m", self.m), ("d", self.d), ("dc", self.dc), ("l", self.l)];
        if let Some((name, _)) = positive.iter().find(|(_, v)| *v == 0) {
            return Err(CliError::Config(format!("budget {name} must be positive")));
        }
        if self.n % 2 != 0 || self.n < 8 {
            return Err(CliError::Config(format!("grid size n = {} must be even and at least 8", self.n)));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(CliError::Config(format!("epsilon = {} must lie in (0, 1)", self.epsilon)));
        }
        for (name, degree) in [("d", self.d), ("dc", self.dc)] {
            if 2 * degree >= self.n {
                return Err(CliError::Budget(format!("{name} = {degree} aliases on a grid of n = {} points", self.n)));
            }
        }
        Ok(())
    }
}

/// A parsed and validated configuration.
#[derive(Debug, Clone)]
pub struct Config {
    pub seed: u64,
    pub symbol: Option<FourierSeries>,
    pub x: Option<SpaceSpec>,
    pub y: Option<SpaceSpec>,
    pub spaces: Vec<SpaceSpec>,
    pub budgets: Budgets,
    pub sweep: Option<Vec<usize>>,
    pub factors: Option<(FourierSeries, FourierSeries)>,
}

fn triples(t: &[(i64, f64, f64)]) -> FourierSeries {
    FourierSeries::from_pairs(t.iter().map(|&(n, re, im)| (n, C64::new(re, im)))).compact()
}

impl Config {
    pub fn load(path: &Path, seed_override: Option<u64>) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        Self::parse(&text, seed_override)
    }

    pub fn parse(text: &str, seed_override: Option<u64>) -> Result<Self> {
        let raw: RawConfig = serde_json::from_str(text)?;
        Self::resolve(raw, seed_override)
    }

    pub fn resolve(raw: RawConfig, seed_override: Option<u64>) -> Result<Self> {
        let seed = seed_override.or(raw.seed).ok_or(CliError::MissingSeed)?;
        raw.budgets.validate()?;
        let symbol = raw.symbol.as_ref().map(|s| resolve_symbol(s, seed)).transpose()?;
        if let Some(a) = &symbol {
            if 2 * a.degree() >= raw.budgets.n {
                return Err(CliError::Budget(format!(
                    "symbol degree {} aliases on a grid of n = {} points",
                    a.degree(),
                    raw.budgets.n
                )));
            }
        }
        if let Some(sweep) = &raw.sweep {
            if sweep.is_empty() || sweep.contains(&0) {
                return Err(CliError::Config("sweep sizes must be positive and nonempty".into()));
            }
        }
        let factors = raw.factors.as_ref().map(|f| (triples(&f.p), triples(&f.q)));
        Ok(Self {
            seed,
            symbol,
            x: raw.x.as_ref().map(SpaceConfig::resolve).transpose()?,
            y: raw.y.as_ref().map(SpaceConfig::resolve).transpose()?,
            spaces: raw.spaces.iter().map(SpaceConfig::resolve).collect::<Result<_>>()?,
            budgets: raw.budgets,
            sweep: raw.sweep,
            factors,
        })
    }

    pub fn symbol(&self, command: &str) -> Result<&FourierSeries> {
        self.symbol.as_ref().ok_or_else(|| CliError::Config(format!("command `{command}` needs a symbol")))
    }

    pub fn pair(&self, command: &str) -> Result<(&SpaceSpec, &SpaceSpec)> {
        match (&self.x, &self.y) {
            (Some(x), Some(y)) => Ok((x, y)),
            _ => Err(CliError::Config(format!("command `{command}` needs both `x` and `y` spaces"))),
        }
    }
}

fn resolve_symbol(s: &SymbolConfig, seed: u64) -> Result<FourierSeries> {
    match s {
        SymbolConfig::Coefficients(t) => Ok(triples(t)),
        SymbolConfig::Named(NamedSymbol::Character(n)) => Ok(FourierSeries::character(*n)),
        SymbolConfig::Named(NamedSymbol::Random { lo, hi }) => {
            if lo > hi {
                return Err(CliError::Config(format!("random symbol range {lo}..={hi} is empty")));
            }
            Ok(random_symbol(&mut rng(seed, SYMBOL_STREAM), *lo, *hi))
        }
        SymbolConfig::Named(NamedSymbol::Hilbert { terms }) => {
            if *terms == 0 {
                return Err(CliError::Config("hilbert symbol needs at least one term".into()));
            }
            Ok(FourierSeries::from_pairs((1..=*terms as i64).map(|n| (n, C64::new(1.0 / n as f64, 0.0)))))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_fill_missing_budgets() {
        let c = Config::parse(r#"{"seed": 3, "budgets": {"n": 256}}"#, None).unwrap();
        assert_eq!(c.budgets, Budgets { n: 256, ..Budgets::default() });
        assert_eq!(c.seed, 3);
    }

    #[test]
    fn seed_is_mandatory_unless_overridden() {
        assert!(matches!(Config::parse("{}", None), Err(CliError::MissingSeed)));
        assert_eq!(Config::parse("{}", Some(9)).unwrap().seed, 9);
        assert_eq!(Config::parse(r#"{"seed": 1}"#, Some(9)).unwrap().seed, 9);
    }

    #[test]
    fn space_tags() {
        let c = Config::parse(
            r#"{"seed": 0, "spaces": [
                {"lebesgue": {"p": "inf"}}, {"lebesgue": {"p": 1.5}}, {"lorentz": {"p": 4, "q": 2}},
                {"orlicz": {"family": "power-log", "p": 2, "a": 1}}, "bounded"]}"#,
            None,
        )
        .unwrap();
        assert_eq!(c.spaces[0], SpaceSpec::Bounded);
        assert_eq!(c.spaces[1], SpaceSpec::lebesgue(1.5).unwrap());
        assert_eq!(c.spaces[2], SpaceSpec::lorentz(4.0, 2.0).unwrap());
        assert_eq!(c.spaces[3], SpaceSpec::orlicz(OrliczSpec::power_log(2.0, 1.0).unwrap()));
        assert_eq!(c.spaces[4], SpaceSpec::Bounded);
    }

    #[test]
    fn malformed_tags_are_rejected() {
        assert!(matches!(Config::parse(r#"{"seed": 0, "x": {"lebesque": {"p": 2}}}"#, None), Err(CliError::Parse(_))));
        assert!(matches!(
            Config::parse(r#"{"seed": 0, "x": {"lebesgue": {"p": 0.5}}}"#, None),
            Err(CliError::Core(_))
        ));
    }

    #[test]
    fn symbol_forms() {
        let c = Config::parse(r#"{"seed": 0, "symbol": [[0, 1, 0], [3, 2, 0]]}"#, None).unwrap();
        assert_eq!(c.symbol.unwrap().coeff(3), C64::new(2.0, 0.0));
        let h = Config::parse(r#"{"seed": 0, "symbol": {"hilbert": {"terms": 4}}}"#, None).unwrap();
        assert_eq!(h.symbol.unwrap().coeff(4), C64::new(0.25, 0.0));
        let a = Config::parse(r#"{"seed": 5, "symbol": {"random": {"lo": -2, "hi": 2}}}"#, None).unwrap();
        let b = Config::parse(r#"{"seed": 5, "symbol": {"random": {"lo": -2, "hi": 2}}}"#, None).unwrap();
        assert_eq!(a.symbol, b.symbol);
        assert_eq!(a.symbol.unwrap().support().collect::<Vec<_>>(), vec![-2, -1, 0, 1, 2]);
    }

    #[test]
    fn budget_overflow_is_distinct() {
        let r = Config::parse(r#"{"seed": 0, "budgets": {"n": 64, "d": 40}}"#, None);
        assert!(matches!(r, Err(CliError::Budget(_))));
        let r = Config::parse(r#"{"seed": 0, "budgets": {"n": 16}, "symbol": {"character": 9}}"#, None);
        assert!(matches!(r, Err(CliError::Budget(_))));
    }
}

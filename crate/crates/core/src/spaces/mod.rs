//! Rearrangement-invariant spaces on the circle: norm evaluation, Köthe
//! duals, Boyd indices and the multiplier/product space calculus.

mod boyd;
mod calculus;
mod norm;
pub mod orlicz;
mod variational;

use std::fmt;

use serde::Serialize;

use crate::circle::{FourierSeries, GridFunction};
use crate::error::{Error, Result};
use crate::exponent::Exponent;

pub use boyd::{boyd_indices, boyd_indices_numeric, dilate, BoydIndices, BoydMethod};
pub(crate) use calculus::factorizes;
pub use calculus::{
    convexify, koethe_dual, multiplier_space, product_space, space_identity_suite, Dual, IdentityCheck,
    IdentityReport, IdentityStatus,
};
pub use norm::{distribution, norm, rearrangement, NormEvaluator};
pub use orlicz::{
    legendre_transform, log_grid, orlicz_factorization_check, young_conjugate, FactorizationCheck, OrliczSpec,
    Table,
};
pub use variational::{
    dual_norm_via_polynomials, holder_factorization, multiplier_norm_variational, product_norm_variational,
    VariationalBudget,
};

/// A rearrangement-invariant space.
///
/// `Lebesgue { p: ∞ }` and `Bounded` denote the same space and compare equal.
/// Exponents outside the Banach range (`p < 1`, Lorentz `q < 1`) only arise
/// from the product-space calculus and are quasi-normed.
#[derive(Debug, Clone)]
pub enum SpaceSpec {
    Lebesgue { p: Exponent },
    Lorentz { p: Exponent, q: Exponent },
    Orlicz(OrliczSpec),
    Bounded,
}

impl SpaceSpec {
    pub fn lebesgue(p: f64) -> Result<Self> {
        let p = Exponent::from_f64(p)?;
        Self::lebesgue_exp(p)
    }

    pub fn lebesgue_exp(p: Exponent) -> Result<Self> {
        if p.to_f64() < 1.0 {
            return Err(Error::InvalidSpace(format!("Lebesgue exponent {p} must be in [1, ∞]")));
        }
        Ok(SpaceSpec::Lebesgue { p })
    }

    pub fn lorentz(p: f64, q: f64) -> Result<Self> {
        Self::lorentz_exp(Exponent::from_f64(p)?, Exponent::from_f64(q)?)
    }

    pub fn lorentz_exp(p: Exponent, q: Exponent) -> Result<Self> {
        if p.is_infinite() || p.to_f64() <= 1.0 {
            return Err(Error::InvalidSpace(format!("Lorentz p = {p} must be in (1, ∞)")));
        }
        if q.to_f64() < 1.0 {
            return Err(Error::InvalidSpace(format!("Lorentz q = {q} must be in [1, ∞]")));
        }
        Ok(SpaceSpec::Lorentz { p, q })
    }

    pub fn orlicz(phi: OrliczSpec) -> Self {
        SpaceSpec::Orlicz(phi)
    }

    /// `Lebesgue(∞)` is rewritten as `Bounded`.
    pub fn canonical(&self) -> SpaceSpec {
        match self {
            SpaceSpec::Lebesgue { p: Exponent::Infinite } => SpaceSpec::Bounded,
            other => other.clone(),
        }
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self.canonical(), SpaceSpec::Bounded)
    }

    /// Whether the formula defines only a quasi-norm.
    pub fn is_quasi_normed(&self) -> bool {
        match self {
            SpaceSpec::Lebesgue { p } => p.to_f64() < 1.0,
            SpaceSpec::Lorentz { p, q } => p.to_f64() <= 1.0 || q.to_f64() < 1.0 || q.to_f64() > p.to_f64(),
            _ => false,
        }
    }

    pub fn family(&self) -> &'static str {
        match self.canonical() {
            SpaceSpec::Lebesgue { .. } => "lebesgue",
            SpaceSpec::Lorentz { .. } => "lorentz",
            SpaceSpec::Orlicz(_) => "orlicz",
            SpaceSpec::Bounded => "bounded",
        }
    }
}

impl PartialEq for SpaceSpec {
    fn eq(&self, other: &Self) -> bool {
        match (self.canonical(), other.canonical()) {
            (SpaceSpec::Bounded, SpaceSpec::Bounded) => true,
            (SpaceSpec::Lebesgue { p: a }, SpaceSpec::Lebesgue { p: b }) => a == b,
            (SpaceSpec::Lorentz { p: a, q: b }, SpaceSpec::Lorentz { p: c, q: d }) => a == c && b == d,
            (SpaceSpec::Orlicz(a), SpaceSpec::Orlicz(b)) => a == b,
            _ => false,
        }
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.canonical() {
            SpaceSpec::Lebesgue { p } => write!(f, "L^{p}"),
            SpaceSpec::Lorentz { p, q } => write!(f, "L^{{{p},{q}}}"),
            SpaceSpec::Orlicz(phi) => write!(f, "L^phi[{phi}]"),
            SpaceSpec::Bounded => write!(f, "L^inf"),
        }
    }
}

/// How a reported number relates to the quantity it estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Exact,
    LowerBound,
    UpperBound,
    Heuristic,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::LowerBound => "lower-bound",
            Mode::UpperBound => "upper-bound",
            Mode::Heuristic => "heuristic",
        })
    }
}

/// The object that attains (or nearly attains) an estimate.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    Function(GridFunction),
    Series(FourierSeries),
    Factorization { g: GridFunction, k: GridFunction },
}

/// A number with its mode and, for variational results, the witness found.
#[derive(Debug, Clone, PartialEq)]
pub struct NormEstimate {
    pub value: f64,
    pub mode: Mode,
    pub witness: Option<Witness>,
    pub note: Option<String>,
}

impl NormEstimate {
    pub fn exact(value: f64) -> Self {
        Self { value, mode: Mode::Exact, witness: None, note: None }
    }

    pub fn new(value: f64, mode: Mode) -> Self {
        Self { value, mode, witness: None, note: None }
    }

    pub fn with_witness(mut self, w: Witness) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Result of the symbolic multiplier/product calculus.
#[derive(Debug, Clone, PartialEq)]
pub enum SpaceOutcome {
    Space(SpaceSpec),
    /// The inclusion fails and only the zero function remains.
    Zero,
    Unknown(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpaceResult {
    pub outcome: SpaceOutcome,
    /// The identification holds with equal norms.
    pub isometric: bool,
    /// Equivalence constants `[c₁, c₂]` when known.
    pub constants: Option<(f64, f64)>,
    pub quasi_normed: bool,
}

impl SpaceResult {
    pub(crate) fn space(space: SpaceSpec, isometric: bool) -> Self {
        let quasi = space.is_quasi_normed();
        let constants = isometric.then_some((1.0, 1.0));
        Self { outcome: SpaceOutcome::Space(space), isometric, constants, quasi_normed: quasi }
    }

    pub(crate) fn zero() -> Self {
        Self { outcome: SpaceOutcome::Zero, isometric: false, constants: None, quasi_normed: false }
    }

    pub(crate) fn unknown(reason: impl Into<String>) -> Self {
        Self { outcome: SpaceOutcome::Unknown(reason.into()), isometric: false, constants: None, quasi_normed: false }
    }

    pub fn as_space(&self) -> Option<&SpaceSpec> {
        match &self.outcome {
            SpaceOutcome::Space(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.outcome, SpaceOutcome::Zero)
    }
}

impl fmt::Display for SpaceResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.outcome {
            SpaceOutcome::Space(s) if self.isometric => write!(f, "{s}"),
            SpaceOutcome::Space(s) => write!(f, "{s} (up to equivalence)"),
            SpaceOutcome::Zero => write!(f, "{{0}}"),
            SpaceOutcome::Unknown(r) => write!(f, "unknown: {r}"),
        }
    }
}

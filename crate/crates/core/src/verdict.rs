use std::fmt;

use serde::Serialize;

/// Outcome of one checked inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// Computed outside the hypotheses of the inequality; nothing asserted.
    Exploratory,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    /// Combines verdicts: any failure fails, then any exploratory.
    pub fn all(items: impl IntoIterator<Item = Verdict>) -> Self {
        items.into_iter().fold(Verdict::Pass, |acc, v| match (acc, v) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Exploratory, _) | (_, Verdict::Exploratory) => Verdict::Exploratory,
            _ => Verdict::Pass,
        })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Exploratory => "exploratory",
        })
    }
}

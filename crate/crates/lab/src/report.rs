//! Experiment reports, written as TOML documents.
//!
//! Top-level keys give the experiment, the verdict and the number of
//! rejected samples. `[[quantities]]` lists each estimate with its standard
//! error, `[comparison]` holds the two sides being checked against each other,
//! `[details]` carries experiment-specific data, `[config]` echoes the
//! resolved configuration and `[timing]` comes last, so that everything
//! before it is reproducible byte for byte.

use serde::Serialize;

use crate::config::Config;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

impl Verdict {
    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Quantity {
    pub name: String,
    pub estimate: f64,
    pub standard_error: f64,
}

impl Quantity {
    pub fn new(name: &str, estimate: f64, standard_error: f64) -> Self {
        Quantity { name: name.to_string(), estimate, standard_error }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub lhs_name: String,
    pub lhs: f64,
    pub rhs_name: String,
    pub rhs: f64,
    pub absolute_gap: f64,
    pub relative_gap: f64,
    /// Gap divided by the combined standard error of both sides.
    pub gap_in_sigma: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
}

fn ratio(gap: f64, scale: f64) -> f64 {
    if gap == 0.0 {
        0.0
    } else if scale > 0.0 {
        gap / scale
    } else {
        f64::INFINITY
    }
}

impl Comparison {
    /// PASS when the gap is within three combined standard errors or within
    /// the relative tolerance.
    pub fn new(lhs: (&str, f64, f64), rhs: (&str, f64, f64), tolerance: f64) -> Self {
        let absolute_gap = (lhs.1 - rhs.1).abs();
        let relative_gap = ratio(absolute_gap, rhs.1.abs());
        let gap_in_sigma = ratio(absolute_gap, lhs.2.hypot(rhs.2));
        let pass = gap_in_sigma <= 3.0 || relative_gap <= tolerance;
        Comparison {
            lhs_name: lhs.0.to_string(),
            lhs: lhs.1,
            rhs_name: rhs.0.to_string(),
            rhs: rhs.1,
            absolute_gap,
            relative_gap,
            gap_in_sigma,
            tolerance,
            verdict: Verdict::from_pass(pass),
        }
    }

    /// PASS only on exact equality.
    pub fn exact(lhs: (&str, f64), rhs: (&str, f64), equal: bool) -> Self {
        let absolute_gap = (lhs.1 - rhs.1).abs();
        Comparison {
            lhs_name: lhs.0.to_string(),
            lhs: lhs.1,
            rhs_name: rhs.0.to_string(),
            rhs: rhs.1,
            absolute_gap,
            relative_gap: ratio(absolute_gap, rhs.1.abs()),
            gap_in_sigma: ratio(absolute_gap, 0.0),
            tolerance: 0.0,
            verdict: Verdict::from_pass(equal),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timing {
    pub wall_time_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub experiment: String,
    pub verdict: Verdict,
    pub rejected_samples: u64,
    pub quantities: Vec<Quantity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comparison: Option<Comparison>,
    pub details: toml::Table,
    pub config: Config,
    pub timing: Timing,
}

impl Report {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("reports serialize")
    }
}

/// The report text without the `[timing]` table.
pub fn strip_timing(text: &str) -> &str {
    match text.find("\n[timing]") {
        Some(i) => &text[..i + 1],
        None => text,
    }
}

//! Experiment configuration documents.
//!
//! A configuration is a TOML document. Top-level keys hold the scalar
//! parameters, `[domain]` and `[quadrature]` are tables, and spaces and
//! polytopes are arrays of tables. Complex numbers are written `[re, im]`;
//! a point of `ℂⁿ` is a list of `n` such pairs.
//!
//! ```toml
//! seed = 7
//! samples = 10000
//!
//! [domain]
//! kind = "ball"
//! radius = 1.0
//!
//! [quadrature]
//! method = "qmc"
//! samples = 65536
//!
//! [[spaces]]
//! kind = "kostlan"
//! degree = 3
//! ```

use std::fmt;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use crofton_core::numerics::{ComplexPoint, Domain, QuadratureSpec};
use crofton_core::polytope::{newton_polytope, Polytope};
use crofton_core::sections::{BasisFunction, Monomial, SectionSpace, SpectrumPoint};
use crofton_core::Complex64;
use serde::{Deserialize, Serialize};

/// A configuration problem, tagged with the dotted path of the offending field.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("config field `{field}`: {message}")]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(field: impl Into<String>, message: impl fmt::Display) -> Self {
        ConfigError { field: field.into(), message: message.to_string() }
    }
}

type Result<T> = std::result::Result<T, ConfigError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    VerifyCrofton,
    IntegrateVolume,
    EstimateZeros,
    PseudoVolume,
    Bkk,
    Asymptotics,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::VerifyCrofton => "verify-crofton",
            ExperimentKind::IntegrateVolume => "integrate-volume",
            ExperimentKind::EstimateZeros => "estimate-zeros",
            ExperimentKind::PseudoVolume => "pseudo-volume",
            ExperimentKind::Bkk => "bkk",
            ExperimentKind::Asymptotics => "asymptotics",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<ExperimentKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Monte Carlo draws (zero counting) or coefficient draws (bkk).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    /// Relative tolerance for the verdict.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    /// Reference value to compare against, when the experiment has no
    /// built-in right-hand side.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<f64>,
    /// Radii of the balls `tB` for asymptotics.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_list: Option<Vec<f64>>,
    /// Smoothing parameters for pseudo-volumes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<QuadratureDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub spaces: Vec<SpaceDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub polytopes: Vec<PolytopeDoc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DomainKind {
    Ball,
    Box,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainDoc {
    pub kind: DomainKind,
    /// Ball center, one `[re, im]` pair per coordinate; the origin if absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    /// Box sides `[lo, hi]` in the order `Re z₁, Im z₁, Re z₂, …`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intervals: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureMethodDoc {
    MonteCarlo,
    Qmc,
    Gauss,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureDoc {
    pub method: QuadratureMethodDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpaceKindDoc {
    Kostlan,
    ExponentialSum,
    Monomials,
}

/// A section space, inline or as a reference to a file holding the same
/// fields (paths are relative to the referring document).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<SpaceKindDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u64>,
    /// Spectrum points, each a list of `[re, im]` pairs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<MonomialDoc>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonomialDoc {
    pub coefficient: [f64; 2],
    pub exponents: Vec<u32>,
}

/// A polytope given by points whose convex hull it is, in the spectrum
/// format.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<[f64; 2]>>>,
}

/// Deserializes a document, reporting the dotted path of the first bad key.
fn parse_doc<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    let de = toml::Deserializer::parse(text).map_err(|e| ConfigError::new("<document>", e.to_string().trim_end()))?;
    serde_path_to_error::deserialize(de).map_err(|e| {
        let mut path = e.path().to_string();
        let message = e.inner().message().to_string();
        // missing keys are reported against their parent table
        if let Some(key) = message.split('`').nth(1).filter(|_| message.starts_with("missing field `")) {
            path = if path == "." { key.to_string() } else { format!("{path}.{key}") };
        }
        ConfigError::new(if path == "." { "<document>".to_string() } else { path }, message)
    })
}

impl Config {
    pub fn parse(text: &str) -> Result<Config> {
        parse_doc(text)
    }

    /// Reads a configuration and inlines every file reference, so that the
    /// result is self-contained.
    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::new("--config", format!("{}: {e}", path.display())))?;
        let mut config = Config::parse(&text)?;
        config.resolve_files(path.parent().unwrap_or(Path::new(".")))?;
        Ok(config)
    }

    pub fn resolve_files(&mut self, base: &Path) -> Result<()> {
        for (i, space) in self.spaces.iter_mut().enumerate() {
            if let Some(file) = space.file.clone() {
                let field = format!("spaces[{i}].file");
                if space.kind.is_some() || space.n.is_some() || space.degree.is_some() || space.support.is_some() || space.basis.is_some() {
                    return Err(ConfigError::new(field, "a file reference cannot be combined with inline fields"));
                }
                let loaded: SpaceDoc = read_doc(&base.join(&file), &field)?;
                if loaded.file.is_some() {
                    return Err(ConfigError::new(field, format!("{file} refers to another file")));
                }
                *space = loaded;
            }
        }
        for (i, poly) in self.polytopes.iter_mut().enumerate() {
            if let Some(file) = poly.file.clone() {
                let field = format!("polytopes[{i}].file");
                if poly.n.is_some() || poly.vertices.is_some() {
                    return Err(ConfigError::new(field, "a file reference cannot be combined with inline fields"));
                }
                let loaded: PolytopeDoc = read_doc(&base.join(&file), &field)?;
                if loaded.file.is_some() {
                    return Err(ConfigError::new(field, format!("{file} refers to another file")));
                }
                *poly = loaded;
            }
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    pub fn seed(&self) -> Result<u64> {
        let seed = self.seed.ok_or_else(|| ConfigError::new("seed", "a seed is required (set it in the config or pass --seed)"))?;
        if seed > i64::MAX as u64 {
            return Err(ConfigError::new("seed", format!("{seed} exceeds {}", i64::MAX)));
        }
        Ok(seed)
    }

    pub fn samples(&self) -> Result<usize> {
        let s = self.samples.ok_or_else(|| ConfigError::new("samples", "missing"))?;
        if s == 0 {
            return Err(ConfigError::new("samples", "must be positive"));
        }
        Ok(s as usize)
    }

    pub fn tolerance(&self, default: f64) -> Result<f64> {
        match self.tolerance {
            None => Ok(default),
            Some(t) if t.is_finite() && t > 0.0 => Ok(t),
            Some(t) => Err(ConfigError::new("tolerance", format!("must be positive, got {t}"))),
        }
    }

    pub fn expected(&self) -> Result<Option<f64>> {
        match self.expected {
            Some(e) if !e.is_finite() => Err(ConfigError::new("expected", "must be finite")),
            e => Ok(e),
        }
    }

    pub fn t_list(&self) -> Result<Vec<f64>> {
        let list = self.t_list.clone().ok_or_else(|| ConfigError::new("t_list", "missing"))?;
        positive_list("t_list", &list)?;
        Ok(list)
    }

    pub fn t_grid(&self, default: &[f64]) -> Result<Vec<f64>> {
        let Some(grid) = self.t_grid.clone() else { return Ok(default.to_vec()) };
        positive_list("t_grid", &grid)?;
        if grid.len() < 3 || grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(ConfigError::new("t_grid", "needs at least three strictly increasing values"));
        }
        Ok(grid)
    }

    pub fn domain(&self, n: usize) -> Result<Domain> {
        let doc = self.domain.as_ref().ok_or_else(|| ConfigError::new("domain", "missing"))?;
        match doc.kind {
            DomainKind::Ball => {
                if doc.intervals.is_some() {
                    return Err(ConfigError::new("domain.intervals", "only boxes have intervals"));
                }
                let radius = doc.radius.ok_or_else(|| ConfigError::new("domain.radius", "missing"))?;
                if !(radius.is_finite() && radius > 0.0) {
                    return Err(ConfigError::new("domain.radius", format!("must be positive, got {radius}")));
                }
                let center = match &doc.center {
                    None => ComplexPoint::origin(n),
                    Some(c) => {
                        if c.len() != n {
                            return Err(ConfigError::new("domain.center", format!("expected {n} coordinates, found {}", c.len())));
                        }
                        ComplexPoint::new(complex_coords(c)).map_err(|e| ConfigError::new("domain.center", e))?
                    }
                };
                Domain::ball(center, radius).map_err(|e| ConfigError::new("domain", e))
            }
            DomainKind::Box => {
                if doc.radius.is_some() || doc.center.is_some() {
                    return Err(ConfigError::new("domain.radius", "boxes take intervals, not a center and radius"));
                }
                let intervals = doc.intervals.as_ref().ok_or_else(|| ConfigError::new("domain.intervals", "missing"))?;
                if intervals.len() != 2 * n {
                    return Err(ConfigError::new(
                        "domain.intervals",
                        format!("expected {} intervals for n = {n}, found {}", 2 * n, intervals.len()),
                    ));
                }
                Domain::boxed(intervals.iter().map(|&[a, b]| (a, b)).collect())
                    .map_err(|e| ConfigError::new("domain.intervals", e))
            }
        }
    }

    /// The configured quadrature, or `default` when the table is absent.
    /// Pseudo-random and quasi-random nodes are seeded from `seed`.
    pub fn quadrature(&self, seed: u64, default: QuadratureSpec) -> Result<QuadratureSpec> {
        let Some(doc) = &self.quadrature else { return Ok(default) };
        let count = |key: &str, value: Option<u64>| -> Result<usize> {
            match value {
                None => Err(ConfigError::new(format!("quadrature.{key}"), "missing")),
                Some(0) => Err(ConfigError::new(format!("quadrature.{key}"), "must be positive")),
                Some(v) => Ok(v as usize),
            }
        };
        let spec = match doc.method {
            QuadratureMethodDoc::MonteCarlo => QuadratureSpec::monte_carlo(count("samples", doc.samples)?, seed),
            QuadratureMethodDoc::Qmc => QuadratureSpec::quasi_monte_carlo(count("samples", doc.samples)?, seed),
            QuadratureMethodDoc::Gauss => QuadratureSpec::product_gauss(count("nodes", doc.nodes)?),
        };
        spec.validate().map_err(|e| ConfigError::new("quadrature", e))?;
        Ok(spec)
    }

    /// Builds the configured spaces and checks that there are `n` of them on
    /// `ℂⁿ`.
    pub fn spaces(&self) -> Result<Vec<SectionSpace>> {
        if self.spaces.is_empty() {
            return Err(ConfigError::new("spaces", "at least one space is required"));
        }
        let spaces = self
            .spaces
            .iter()
            .enumerate()
            .map(|(i, doc)| doc.build(&format!("spaces[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let n = spaces.len();
        for (i, s) in spaces.iter().enumerate() {
            if s.n() != n {
                return Err(ConfigError::new(
                    format!("spaces[{i}]"),
                    format!("{n} spaces need to live on ℂ^{n}, this one lives on ℂ^{}", s.n()),
                ));
            }
        }
        Ok(spaces)
    }

    pub fn polytopes(&self) -> Result<Vec<Polytope>> {
        if self.polytopes.is_empty() {
            return Err(ConfigError::new("polytopes", "at least one polytope is required"));
        }
        let polys = self
            .polytopes
            .iter()
            .enumerate()
            .map(|(i, doc)| doc.build(&format!("polytopes[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let n = polys.len();
        for (i, p) in polys.iter().enumerate() {
            if p.n() != n {
                return Err(ConfigError::new(
                    format!("polytopes[{i}]"),
                    format!("{n} polytopes need points of ℂ^{n}, this one has points of ℂ^{}", p.n()),
                ));
            }
        }
        Ok(polys)
    }
}

fn read_doc<T: for<'de> Deserialize<'de>>(path: &PathBuf, field: &str) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::new(field, format!("{}: {e}", path.display())))?;
    parse_doc(&text).map_err(|inner| ConfigError::new(field, format!("{}: field `{}`: {}", path.display(), inner.field, inner.message)))
}

fn positive_list(field: &str, list: &[f64]) -> Result<()> {
    if list.is_empty() {
        return Err(ConfigError::new(field, "must not be empty"));
    }
    if let Some(bad) = list.iter().find(|t| !(t.is_finite() && **t > 0.0)) {
        return Err(ConfigError::new(field, format!("values must be positive, got {bad}")));
    }
    Ok(())
}

fn complex_coords(pairs: &[[f64; 2]]) -> Vec<Complex64> {
    pairs.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
}

fn spectrum(field: &str, points: &[Vec<[f64; 2]>], n: Option<u64>) -> Result<Vec<SpectrumPoint>> {
    if points.is_empty() {
        return Err(ConfigError::new(field, "must not be empty"));
    }
    let dim = n.map(|v| v as usize).unwrap_or(points[0].len());
    points
        .iter()
        .enumerate()
        .map(|(k, p)| {
            if p.len() != dim {
                return Err(ConfigError::new(format!("{field}[{k}]"), format!("expected {dim} coordinates, found {}", p.len())));
            }
            SpectrumPoint::new(complex_coords(p)).map_err(|e| ConfigError::new(format!("{field}[{k}]"), e))
        })
        .collect()
}

impl SpaceDoc {
    pub fn build(&self, field: &str) -> Result<SectionSpace> {
        let kind = self.kind.ok_or_else(|| ConfigError::new(format!("{field}.kind"), "missing"))?;
        let unexpected = |key: &str, present: bool| -> Result<()> {
            if present {
                Err(ConfigError::new(format!("{field}.{key}"), "not used by this kind of space"))
            } else {
                Ok(())
            }
        };
        match kind {
            SpaceKindDoc::Kostlan => {
                unexpected("support", self.support.is_some())?;
                unexpected("basis", self.basis.is_some())?;
                if let Some(n) = self.n.filter(|&n| n != 1) {
                    return Err(ConfigError::new(format!("{field}.n"), format!("kostlan spaces live on ℂ¹, got n = {n}")));
                }
                let degree = self.degree.ok_or_else(|| ConfigError::new(format!("{field}.degree"), "missing"))?;
                let degree = u32::try_from(degree).map_err(|_| ConfigError::new(format!("{field}.degree"), "too large"))?;
                Ok(SectionSpace::kostlan(degree))
            }
            SpaceKindDoc::ExponentialSum => {
                unexpected("degree", self.degree.is_some())?;
                unexpected("basis", self.basis.is_some())?;
                let support = self.support.as_ref().ok_or_else(|| ConfigError::new(format!("{field}.support"), "missing"))?;
                let points = spectrum(&format!("{field}.support"), support, self.n)?;
                SectionSpace::exponential_sum(points).map_err(|e| ConfigError::new(format!("{field}.support"), e))
            }
            SpaceKindDoc::Monomials => {
                unexpected("degree", self.degree.is_some())?;
                unexpected("support", self.support.is_some())?;
                let basis = self.basis.as_ref().ok_or_else(|| ConfigError::new(format!("{field}.basis"), "missing"))?;
                let n = self.n.map(|v| v as usize).or_else(|| basis.first().map(|m| m.exponents.len()));
                let n = n.filter(|&n| n > 0).ok_or_else(|| ConfigError::new(format!("{field}.n"), "missing"))?;
                let elements = basis
                    .iter()
                    .enumerate()
                    .map(|(k, m)| {
                        if m.exponents.len() != n {
                            return Err(ConfigError::new(
                                format!("{field}.basis[{k}].exponents"),
                                format!("expected {n} exponents, found {}", m.exponents.len()),
                            ));
                        }
                        let [re, im] = m.coefficient;
                        if !(re.is_finite() && im.is_finite()) {
                            return Err(ConfigError::new(format!("{field}.basis[{k}].coefficient"), "must be finite"));
                        }
                        Ok(std::sync::Arc::new(Monomial::new(Complex64::new(re, im), m.exponents.clone()))
                            as std::sync::Arc<dyn BasisFunction>)
                    })
                    .collect::<Result<Vec<_>>>()?;
                SectionSpace::explicit(elements).map_err(|e| ConfigError::new(format!("{field}.basis"), e))
            }
        }
    }
}

impl PolytopeDoc {
    pub fn build(&self, field: &str) -> Result<Polytope> {
        let vertices = self.vertices.as_ref().ok_or_else(|| ConfigError::new(format!("{field}.vertices"), "missing"))?;
        let points = spectrum(&format!("{field}.vertices"), vertices, self.n)?;
        newton_polytope(&points).map_err(|e| ConfigError::new(format!("{field}.vertices"), e))
    }
}

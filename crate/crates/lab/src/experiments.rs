//! The six experiments. Each takes a resolved configuration and produces a
//! report; asymptotics also produces a CSV table.

use std::time::Instant;

use crofton_core::crofton::expected_zero_count_integral;
use crofton_core::numerics::{factorial, QuadratureSpec, RandomStream};
use crofton_core::polytope::{
    asymptotic_prediction, asymptotic_zero_density, mixed_pseudo_volume, mixed_volume, newton_polytope, Embedding,
    Polytope, PseudoVolumeOptions,
};
use crofton_core::sections::{SectionSpace, SpaceKind};
use crofton_core::zeros::{estimate_average_zeros, torus_common_roots, AverageZeroEstimate, MAX_ATTEMPTS};
use crofton_core::Error;
use toml::{Table, Value};

use crate::config::{Config, ConfigError, ExperimentKind};
use crate::report::{Comparison, Quantity, Report, Timing, Verdict};

type Result<T> = std::result::Result<T, ConfigError>;

pub const DEFAULT_TOLERANCE: f64 = 0.03;
pub const PSEUDO_VOLUME_TOLERANCE: f64 = 0.02;
pub const ASYMPTOTIC_TOLERANCE: f64 = 0.05;
/// Default nodes for Crofton integrals when `[quadrature]` is absent.
pub const DEFAULT_QMC_SAMPLES: usize = 1 << 16;

pub const CSV_HEADER: &str = "t,estimate,stderr,prediction";

#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub csv: Option<String>,
}

struct Partial {
    verdict: Verdict,
    rejected: u64,
    quantities: Vec<Quantity>,
    comparison: Option<Comparison>,
    details: Table,
    csv: Option<String>,
}

pub fn run(kind: ExperimentKind, config: &Config) -> Result<Outcome> {
    if let Some(declared) = config.experiment {
        if declared != kind {
            return Err(ConfigError::new(
                "experiment",
                format!("config declares {} but {} was requested", declared.name(), kind.name()),
            ));
        }
    }
    let start = Instant::now();
    let partial = match kind {
        ExperimentKind::VerifyCrofton => verify_crofton(config)?,
        ExperimentKind::IntegrateVolume => integrate_volume(config)?,
        ExperimentKind::EstimateZeros => estimate_zeros(config)?,
        ExperimentKind::PseudoVolume => pseudo_volume(config)?,
        ExperimentKind::Bkk => bkk(config)?,
        ExperimentKind::Asymptotics => asymptotics(config)?,
    };
    let mut echo = config.clone();
    echo.experiment = Some(kind);
    echo.out = None;
    echo.csv = None;
    let report = Report {
        experiment: kind.name().to_string(),
        verdict: partial.verdict,
        rejected_samples: partial.rejected,
        quantities: partial.quantities,
        comparison: partial.comparison,
        details: partial.details,
        config: echo,
        timing: Timing { wall_time_seconds: start.elapsed().as_secs_f64() },
    };
    Ok(Outcome { report, csv: partial.csv })
}

fn spaces_error(e: Error) -> ConfigError {
    ConfigError::new("spaces", e)
}

fn quadrature_seed(seed: u64) -> u64 {
    seed + 1
}

fn zero_spaces(config: &Config) -> Result<Vec<SectionSpace>> {
    let spaces = config.spaces()?;
    if spaces.len() > 2 {
        return Err(ConfigError::new("spaces", format!("zero counting supports n ≤ 2, got {} spaces", spaces.len())));
    }
    Ok(spaces)
}

fn zeros_quantity(z: &AverageZeroEstimate) -> Quantity {
    Quantity::new("average_zeros", z.mean, z.std_error)
}

fn zero_details(details: &mut Table, z: &AverageZeroEstimate) {
    details.insert("accepted_samples".into(), Value::Integer(z.sample_count as i64));
    details.insert("rejection_budget_exceeded".into(), Value::Boolean(!z.valid));
}

fn base_point_details(details: &mut Table, spaces: &[SectionSpace], domain: &crofton_core::numerics::Domain) -> Result<()> {
    let mut checks = Vec::new();
    for s in spaces {
        let check = s.check_base_point_free(domain, 256).map_err(spaces_error)?;
        checks.push(Value::Boolean(check.pass));
    }
    details.insert("base_point_free".into(), Value::Array(checks));
    Ok(())
}

fn verify_crofton(config: &Config) -> Result<Partial> {
    let seed = config.seed()?;
    let spaces = zero_spaces(config)?;
    let n = spaces.len();
    let domain = config.domain(n)?;
    let samples = config.samples()?;
    let spec = config.quadrature(quadrature_seed(seed), QuadratureSpec::quasi_monte_carlo(DEFAULT_QMC_SAMPLES, quadrature_seed(seed)))?;
    let tolerance = config.tolerance(DEFAULT_TOLERANCE)?;
    let refs: Vec<&SectionSpace> = spaces.iter().collect();

    let zeros = estimate_average_zeros(&refs, &domain, samples, &RandomStream::new(seed)).map_err(spaces_error)?;
    let integral = expected_zero_count_integral(&refs, &domain, &spec).map_err(spaces_error)?;
    let volume = integral.scale(1.0 / factorial(n));
    let comparison = Comparison::new(
        ("average_zeros", zeros.mean, zeros.std_error),
        ("crofton_integral", integral.value, integral.std_error),
        tolerance,
    );
    let mut details = Table::new();
    zero_details(&mut details, &zeros);
    base_point_details(&mut details, &spaces, &domain)?;
    Ok(Partial {
        verdict: Verdict::from_pass(zeros.valid && comparison.verdict.is_pass()),
        rejected: zeros.rejected_count,
        quantities: vec![
            zeros_quantity(&zeros),
            Quantity::new("crofton_integral", integral.value, integral.std_error),
            Quantity::new("hermitian_mixed_volume", volume.value, volume.std_error),
        ],
        comparison: Some(comparison),
        details,
        csv: None,
    })
}

fn expected_comparison(config: &Config, lhs: (&str, f64, f64)) -> Result<Option<Comparison>> {
    let tolerance = config.tolerance(DEFAULT_TOLERANCE)?;
    Ok(config.expected()?.map(|e| Comparison::new(lhs, ("expected", e, 0.0), tolerance)))
}

fn integrate_volume(config: &Config) -> Result<Partial> {
    let seed = config.seed()?;
    let spaces = config.spaces()?;
    let n = spaces.len();
    let domain = config.domain(n)?;
    let spec = config.quadrature(quadrature_seed(seed), QuadratureSpec::quasi_monte_carlo(DEFAULT_QMC_SAMPLES, quadrature_seed(seed)))?;
    let refs: Vec<&SectionSpace> = spaces.iter().collect();
    let integral = expected_zero_count_integral(&refs, &domain, &spec).map_err(spaces_error)?;
    let volume = integral.scale(1.0 / factorial(n));
    let comparison = expected_comparison(config, ("crofton_integral", integral.value, integral.std_error))?;
    let mut details = Table::new();
    base_point_details(&mut details, &spaces, &domain)?;
    Ok(Partial {
        verdict: Verdict::from_pass(comparison.as_ref().is_none_or(|c| c.verdict.is_pass())),
        rejected: 0,
        quantities: vec![
            Quantity::new("crofton_integral", integral.value, integral.std_error),
            Quantity::new("hermitian_mixed_volume", volume.value, volume.std_error),
        ],
        comparison,
        details,
        csv: None,
    })
}

fn estimate_zeros(config: &Config) -> Result<Partial> {
    let seed = config.seed()?;
    let spaces = zero_spaces(config)?;
    let domain = config.domain(spaces.len())?;
    let samples = config.samples()?;
    let refs: Vec<&SectionSpace> = spaces.iter().collect();
    let zeros = estimate_average_zeros(&refs, &domain, samples, &RandomStream::new(seed)).map_err(spaces_error)?;
    let comparison = expected_comparison(config, ("average_zeros", zeros.mean, zeros.std_error))?;
    let mut details = Table::new();
    zero_details(&mut details, &zeros);
    Ok(Partial {
        verdict: Verdict::from_pass(zeros.valid && comparison.as_ref().is_none_or(|c| c.verdict.is_pass())),
        rejected: zeros.rejected_count,
        quantities: vec![zeros_quantity(&zeros)],
        comparison,
        details,
        csv: None,
    })
}

fn pseudo_volume_options(config: &Config, seed: u64) -> Result<PseudoVolumeOptions> {
    let defaults = PseudoVolumeOptions::default();
    let default_spec = match defaults.quadrature.method {
        crofton_core::numerics::QuadratureMethod::QuasiMonteCarlo { samples } => {
            QuadratureSpec::quasi_monte_carlo(samples, quadrature_seed(seed))
        }
        _ => defaults.quadrature,
    };
    Ok(PseudoVolumeOptions {
        t_grid: config.t_grid(&defaults.t_grid)?,
        quadrature: config.quadrature(quadrature_seed(seed), default_spec)?,
    })
}

fn pseudo_volume(config: &Config) -> Result<Partial> {
    let seed = config.seed()?;
    let polytopes = config.polytopes()?;
    let options = pseudo_volume_options(config, seed)?;
    let tolerance = config.tolerance(PSEUDO_VOLUME_TOLERANCE)?;
    let refs: Vec<&Polytope> = polytopes.iter().collect();
    let est = mixed_pseudo_volume(&refs, &options).map_err(|e| ConfigError::new("polytopes", e))?;
    let uncertainty = est.std_error.hypot(est.extrapolation_error);

    let mut details = Table::new();
    details.insert("extrapolation_error".into(), Value::Float(est.extrapolation_error));
    details.insert("non_monotone_warning".into(), Value::Boolean(est.non_monotone));
    let per_t = est
        .per_t
        .iter()
        .map(|(t, e)| {
            let mut row = Table::new();
            row.insert("t".into(), Value::Float(*t));
            row.insert("value".into(), Value::Float(e.value));
            row.insert("standard_error".into(), Value::Float(e.std_error));
            Value::Table(row)
        })
        .collect();
    details.insert("per_t".into(), Value::Array(per_t));

    let real = polytopes.iter().all(|p| p.embedding() == Embedding::Real) && polytopes.len() <= 4;
    let mut quantities = vec![Quantity::new("mixed_pseudo_volume", est.value, uncertainty)];
    let lhs = ("mixed_pseudo_volume", est.value, uncertainty);
    let comparison = if let Some(expected) = config.expected()? {
        Some(Comparison::new(lhs, ("expected", expected, 0.0), tolerance))
    } else if real {
        let mv = mixed_volume(&refs).map_err(|e| ConfigError::new("polytopes", e))?;
        quantities.push(Quantity::new("mixed_volume", mv, 0.0));
        Some(Comparison::new(lhs, ("mixed_volume", mv, 0.0), tolerance))
    } else {
        None
    };
    Ok(Partial {
        verdict: Verdict::from_pass(comparison.as_ref().is_none_or(|c| c.verdict.is_pass())),
        rejected: 0,
        quantities,
        comparison,
        details,
        csv: None,
    })
}

fn newton_polytopes(spaces: &[SectionSpace]) -> Result<Vec<Polytope>> {
    spaces
        .iter()
        .enumerate()
        .map(|(i, s)| match s.kind() {
            SpaceKind::ExponentialSum { support } => {
                newton_polytope(support).map_err(|e| ConfigError::new(format!("spaces[{i}].support"), e))
            }
            _ => Err(ConfigError::new(format!("spaces[{i}].kind"), "needs an exponential-sum space")),
        })
        .collect()
}

fn bkk(config: &Config) -> Result<Partial> {
    let seed = config.seed()?;
    let spaces = config.spaces()?;
    if spaces.len() != 2 {
        return Err(ConfigError::new("spaces", "bkk needs two spaces on ℂ²"));
    }
    let draws = config.samples()?;
    let polytopes = newton_polytopes(&spaces)?;
    let bkk_number = 2.0 * mixed_volume(&[&polytopes[0], &polytopes[1]]).map_err(spaces_error)?;
    let root = RandomStream::new(seed);
    let mut counts: Vec<u64> = Vec::with_capacity(draws);
    let mut rejected = 0u64;
    for i in 0..draws {
        let draw = root.split(i as u64);
        let mut found = None;
        for attempt in 0..MAX_ATTEMPTS {
            let mut s = draw.split(attempt as u64);
            let (s1, s2) = (spaces[0].sample_section(&mut s), spaces[1].sample_section(&mut s));
            match torus_common_roots(&s1, &s2) {
                Ok(roots) => {
                    found = Some(roots.len() as u64);
                    break;
                }
                Err(Error::Rejected(_)) => rejected += 1,
                Err(e) => return Err(spaces_error(e)),
            }
        }
        match found {
            Some(c) => counts.push(c),
            None => rejected += 1,
        }
    }
    let k = counts.len() as f64;
    let mean = counts.iter().sum::<u64>() as f64 / k;
    let var = counts.iter().map(|&c| (c as f64 - mean).powi(2)).sum::<f64>() / (k - 1.0).max(1.0);
    let exact = counts.len() == draws && counts.iter().all(|&c| c as f64 == bkk_number);

    let mut histogram: Vec<(u64, i64)> = Vec::new();
    for &c in &counts {
        match histogram.iter_mut().find(|(v, _)| *v == c) {
            Some(e) => e.1 += 1,
            None => histogram.push((c, 1)),
        }
    }
    histogram.sort();
    let mut details = Table::new();
    details.insert("bkk_number".into(), Value::Float(bkk_number));
    details.insert(
        "root_counts".into(),
        Value::Array(
            histogram
                .into_iter()
                .map(|(roots, times)| {
                    let mut row = Table::new();
                    row.insert("roots".into(), Value::Integer(roots as i64));
                    row.insert("draws".into(), Value::Integer(times));
                    Value::Table(row)
                })
                .collect(),
        ),
    );
    let comparison = Comparison::exact(("root_count", mean), ("bkk_number", bkk_number), exact);
    Ok(Partial {
        verdict: comparison.verdict,
        rejected,
        quantities: vec![Quantity::new("root_count", mean, (var / k).sqrt()), Quantity::new("bkk_number", bkk_number, 0.0)],
        comparison: Some(comparison),
        details,
        csv: None,
    })
}

fn asymptotics(config: &Config) -> Result<Partial> {
    let seed = config.seed()?;
    let spaces = zero_spaces(config)?;
    newton_polytopes(&spaces)?;
    let t_list = config.t_list()?;
    let samples = config.samples()?;
    let options = pseudo_volume_options(config, seed)?;
    let tolerance = config.tolerance(ASYMPTOTIC_TOLERANCE)?;
    let refs: Vec<&SectionSpace> = spaces.iter().collect();
    let table =
        asymptotic_zero_density(&refs, &t_list, samples, &RandomStream::new(seed), &options).map_err(spaces_error)?;
    let n = spaces.len();
    let pv = &table.pseudo_volume;
    let prediction_error = asymptotic_prediction(n, pv.std_error.hypot(pv.extrapolation_error));

    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    let mut rows = Vec::new();
    for r in &table.rows {
        csv.push_str(&format!("{},{},{},{}\n", r.t, r.ratio, r.ratio_std_error, table.prediction));
        let mut row = Table::new();
        row.insert("t".into(), Value::Float(r.t));
        row.insert("ratio".into(), Value::Float(r.ratio));
        row.insert("standard_error".into(), Value::Float(r.ratio_std_error));
        row.insert("average_zeros".into(), Value::Float(r.zeros.mean));
        row.insert("rejected_samples".into(), Value::Integer(r.zeros.rejected_count as i64));
        rows.push(Value::Table(row));
    }
    let last = table.rows.last().expect("t list is nonempty");
    let comparison = Comparison::new(
        ("ratio_at_largest_t", last.ratio, last.ratio_std_error),
        ("prediction", table.prediction, prediction_error),
        tolerance,
    );
    let valid = table.rows.iter().all(|r| r.zeros.valid);
    let mut details = Table::new();
    details.insert("mixed_pseudo_volume".into(), Value::Float(pv.value));
    details.insert("non_monotone_warning".into(), Value::Boolean(pv.non_monotone));
    details.insert("rows".into(), Value::Array(rows));
    Ok(Partial {
        verdict: Verdict::from_pass(valid && comparison.verdict.is_pass()),
        rejected: table.rows.iter().map(|r| r.zeros.rejected_count).sum(),
        quantities: vec![
            Quantity::new("ratio_at_largest_t", last.ratio, last.ratio_std_error),
            Quantity::new("prediction", table.prediction, prediction_error),
            Quantity::new("mixed_pseudo_volume", pv.value, pv.std_error.hypot(pv.extrapolation_error)),
        ],
        comparison: Some(comparison),
        details,
        csv: Some(csv),
    })
}

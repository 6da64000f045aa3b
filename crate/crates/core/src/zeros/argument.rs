use crate::numerics::Domain;
use crate::prelude::*;
use crate::sections::{Section, SpaceKind};
use crate::{Error, Rejection, Result};
use core::f64::consts::{FRAC_PI_2, PI};
use num_complex::Complex64;

/// Smallest accepted `|s(z)| / Σ|c_a||f_a(z)|` on the boundary circle.
pub const BOUNDARY_MARGIN: f64 = 1e-8;
const MAX_DEPTH: u32 = 40;

struct BoundaryPoint {
    theta: f64,
    phasor: Complex64,
}

/// Number of zeros (with multiplicity) of a one-variable section inside a
/// disk, as the winding number of `s` along the boundary circle.
///
/// The circle is walked with adaptive phase tracking: an arc is accepted
/// once the phase change over it and over both of its halves is below
/// `π/2`; otherwise it is bisected. Samples whose boundary values come
/// within a relative margin of `1e-8` of cancelling are rejected.
pub fn count_zeros_argument_principle(s: &Section<'_>, disk: &Domain) -> Result<u64> {
    let (center, radius) = match disk {
        Domain::Ball { center, radius } if center.dim() == 1 && s.space().n() == 1 => (center[0], *radius),
        _ => return Err(Error::Unsupported("argument principle needs a one-variable section and a disk".into())),
    };
    let eval = |theta: f64| -> Result<BoundaryPoint> {
        let z = center + Complex64::from_polar(radius, theta);
        let (value, magnitude) = s.evaluate_with_magnitude(&[z]);
        let modulus = value.mantissa.norm();
        let margin = if magnitude > 0.0 { modulus / magnitude } else { 0.0 };
        if !(margin > BOUNDARY_MARGIN) {
            return Err(Rejection::BoundaryMargin { margin }.into());
        }
        Ok(BoundaryPoint { theta, phasor: value.mantissa / modulus })
    };

    let initial = initial_resolution(s, radius);
    let mut points = Vec::with_capacity(initial + 1);
    for k in 0..initial {
        points.push(eval(2.0 * PI * k as f64 / initial as f64)?);
    }
    let first = BoundaryPoint { theta: 2.0 * PI, phasor: points[0].phasor };
    points.push(first);

    let mut total = 0.0;
    for pair in points.windows(2) {
        total += track(&eval, &pair[0], &pair[1], 0)?;
    }
    let winding = total / (2.0 * PI);
    let rounded = winding.round();
    if (winding - rounded).abs() > 1e-3 || rounded < 0.0 {
        return Err(Rejection::NonIntegerWinding { winding }.into());
    }
    Ok(rounded as u64)
}

fn phase_step(a: Complex64, b: Complex64) -> f64 {
    (b * a.conj()).arg()
}

fn track<F>(eval: &F, a: &BoundaryPoint, b: &BoundaryPoint, depth: u32) -> Result<f64>
where
    F: Fn(f64) -> Result<BoundaryPoint>,
{
    let mid = eval(0.5 * (a.theta + b.theta))?;
    let d1 = phase_step(a.phasor, mid.phasor);
    let d2 = phase_step(mid.phasor, b.phasor);
    let whole = phase_step(a.phasor, b.phasor);
    if d1.abs() < FRAC_PI_2 && d2.abs() < FRAC_PI_2 && whole.abs() < FRAC_PI_2 {
        return Ok(d1 + d2);
    }
    if depth >= MAX_DEPTH {
        return Err(Rejection::PhaseResolution.into());
    }
    Ok(track(eval, a, &mid, depth + 1)? + track(eval, &mid, b, depth + 1)?)
}

// Enough boundary points that no basis term turns by more than ~π/8
// between neighbours.
fn initial_resolution(s: &Section<'_>, radius: f64) -> usize {
    let rate = match s.space().kind() {
        SpaceKind::ExponentialSum { support } => {
            support.iter().map(|l| l.coords()[0].norm()).fold(0.0, f64::max) * radius
        }
        SpaceKind::Kostlan { degree } => *degree as f64,
        SpaceKind::ExplicitBasis { .. } => 16.0,
    };
    (64.0 + 16.0 * rate.ceil()).min(1e6) as usize
}

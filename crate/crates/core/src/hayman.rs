//! Hayman index estimation.
//!
//! For `f` in S the growth profile `(1-r)² M∞(r,f)/r` is non-increasing and
//! tends to the Hayman index α as `r → 1-`; along the direction of greatest
//! growth the derivative profile `(1-r)³|f'(re^{iθ})|/(1+r)` tends to the
//! same limit. Both are sampled on a radius schedule and the last sample is
//! reported. Being monotone from above, the growth value is a certified
//! upper bound for α; no extrapolation is attempted.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::families::{circle_local_maxima, FamilyError, SchlichtFunction, DEFAULT_GRID};
use crate::series::Complex;

/// Slack for the monotonicity check on profiles.
pub const MONOTONE_TOL: f64 = 1e-6;
/// Largest radius at which a series-only function may be evaluated.
pub const SERIES_RADIUS_LIMIT: f64 = 1.0 - 1.0 / 256.0;
/// Relative modulus gap below which two circle maxima count as tied.
pub const DIRECTION_TIE_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HaymanError {
    #[error("invalid radius schedule: {0}")]
    InvalidRadii(String),
    #[error("derivative estimator needs a direction")]
    MissingTheta,
    #[error("profile increases at r = {radius}: {previous} -> {value}")]
    NonMonotoneProfile {
        radius: f64,
        previous: f64,
        value: f64,
    },
    #[error("radius {radius} exceeds {limit} and the function has no closed form")]
    ClosedFormRequired { radius: f64, limit: f64 },
    #[error("maxima at {first} and {second} are tied in modulus")]
    AmbiguousDirection { first: f64, second: f64 },
    #[error("probe radius {0} must lie in [0.9, 1)")]
    InvalidProbe(f64),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    Growth,
    Derivative,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthProfile {
    pub estimator: Estimator,
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    /// Evaluation error on each value inherited from certified evaluation.
    pub tail_bounds: Vec<f64>,
    /// Maximizing angle per radius (growth) or the fixed ray (derivative).
    pub thetas: Vec<f64>,
}

fn check_radii(f: &SchlichtFunction, radii: &[f64]) -> Result<(), HaymanError> {
    if radii.is_empty() {
        return Err(HaymanError::InvalidRadii("empty".into()));
    }
    if radii.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
        return Err(HaymanError::InvalidRadii("radii must lie in (0, 1)".into()));
    }
    if radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(HaymanError::InvalidRadii(
            "radii must be strictly increasing".into(),
        ));
    }
    if !f.has_closed_form {
        if let Some(&r) = radii.iter().find(|&&r| r > SERIES_RADIUS_LIMIT) {
            return Err(HaymanError::ClosedFormRequired {
                radius: r,
                limit: SERIES_RADIUS_LIMIT,
            });
        }
    }
    Ok(())
}

fn check_monotone(radii: &[f64], values: &[f64]) -> Result<(), HaymanError> {
    for j in 1..values.len() {
        if values[j] > values[j - 1] + MONOTONE_TOL {
            return Err(HaymanError::NonMonotoneProfile {
                radius: radii[j],
                previous: values[j - 1],
                value: values[j],
            });
        }
    }
    Ok(())
}

pub fn growth_profile(
    f: &SchlichtFunction,
    radii: &[f64],
    estimator: Estimator,
    theta: Option<f64>,
) -> Result<GrowthProfile, HaymanError> {
    growth_profile_with_grid(f, radii, estimator, theta, DEFAULT_GRID)
}

pub fn growth_profile_with_grid(
    f: &SchlichtFunction,
    radii: &[f64],
    estimator: Estimator,
    theta: Option<f64>,
    grid: usize,
) -> Result<GrowthProfile, HaymanError> {
    check_radii(f, radii)?;
    let n = radii.len();
    let mut values = Vec::with_capacity(n);
    let mut tail_bounds = Vec::with_capacity(n);
    let mut thetas = Vec::with_capacity(n);
    match estimator {
        Estimator::Growth => {
            for &r in radii {
                let m = circle_local_maxima(f, r, grid)?[0];
                let weight = (1.0 - r) * (1.0 - r) / r;
                let bound = f
                    .eval_certified(Complex::from_polar(r, m.theta))?
                    .error_bound;
                values.push(weight * m.modulus);
                tail_bounds.push(weight * bound);
                thetas.push(m.theta);
            }
        }
        Estimator::Derivative => {
            let theta = theta.ok_or(HaymanError::MissingTheta)?;
            for &r in radii {
                let d = f.eval_derivative_certified(Complex::from_polar(r, theta))?;
                let weight = (1.0 - r).powi(3) / (1.0 + r);
                values.push(weight * d.value.norm());
                tail_bounds.push(weight * d.error_bound);
                thetas.push(theta);
            }
        }
    }
    check_monotone(radii, &values)?;
    Ok(GrowthProfile {
        estimator,
        radii: radii.to_vec(),
        values,
        tail_bounds,
        thetas,
    })
}

/// Radii `1 - 2^{-j}` for `j = 1..=j_max`.
pub fn dyadic_schedule(j_max: u32) -> Vec<f64> {
    (1..=j_max).map(|j| 1.0 - 0.5f64.powi(j as i32)).collect()
}

/// Default schedule: `j ≤ 14` with a closed form, `j ≤ 8` otherwise.
pub fn default_schedule(f: &SchlichtFunction) -> Vec<f64> {
    dyadic_schedule(if f.has_closed_form { 14 } else { 8 })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HaymanEstimate {
    /// Growth profile at the largest radius.
    pub alpha: f64,
    /// Certified upper bound for α (equal to `alpha`).
    pub upper: f64,
    /// Lower end of the bracket; 0 since no rate of convergence is known.
    pub lower: f64,
    pub radius_used: f64,
    /// Direction of greatest growth in `(-π, π]`.
    pub theta: f64,
    /// Derivative profile along `theta` at the largest radius.
    pub derivative_alpha: f64,
    /// `|alpha - derivative_alpha|`.
    pub bracket_width: f64,
    pub growth: GrowthProfile,
    pub derivative: GrowthProfile,
}

pub fn hayman_index(f: &SchlichtFunction, schedule: &[f64]) -> Result<HaymanEstimate, HaymanError> {
    hayman_index_with_grid(f, schedule, DEFAULT_GRID)
}

pub fn hayman_index_with_grid(
    f: &SchlichtFunction,
    schedule: &[f64],
    grid: usize,
) -> Result<HaymanEstimate, HaymanError> {
    let growth = growth_profile_with_grid(f, schedule, Estimator::Growth, None, grid)?;
    let last = growth.values.len() - 1;
    let alpha = growth.values[last].clamp(0.0, 1.0);
    let theta = growth.thetas[last];
    let derivative =
        growth_profile_with_grid(f, schedule, Estimator::Derivative, Some(theta), grid)?;
    let derivative_alpha = derivative.values[last];
    Ok(HaymanEstimate {
        alpha,
        upper: alpha,
        lower: 0.0,
        radius_used: schedule[last],
        theta,
        derivative_alpha,
        bracket_width: (alpha - derivative_alpha).abs(),
        growth,
        derivative,
    })
}

fn angular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

pub fn growth_direction(f: &SchlichtFunction, r_probe: f64) -> Result<f64, HaymanError> {
    growth_direction_with_grid(f, r_probe, DEFAULT_GRID)
}

pub fn growth_direction_with_grid(
    f: &SchlichtFunction,
    r_probe: f64,
    grid: usize,
) -> Result<f64, HaymanError> {
    if !(0.9..1.0).contains(&r_probe) {
        return Err(HaymanError::InvalidProbe(r_probe));
    }
    check_radii(f, &[r_probe])?;
    let maxima = circle_local_maxima(f, r_probe, grid)?;
    let window = 2.0 * 2.0 * PI / grid as f64;
    let best = maxima[0];
    if let Some(rival) = maxima[1..].iter().find(|m| {
        best.modulus - m.modulus <= DIRECTION_TIE_TOL * best.modulus
            && angular_distance(m.theta, best.theta) > window
    }) {
        return Err(HaymanError::AmbiguousDirection {
            first: best.theta,
            second: rival.theta,
        });
    }
    Ok(best.theta)
}

//! Logarithmic coefficients and the scalar inequalities built on them.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::families::{max_modulus, FamilyError, SchlichtFunction, DEFAULT_GRID};
use crate::series::{Complex, ComplexSeries, SeriesError};

/// Bound on Milin's constant.
pub const MILIN_BOUND: f64 = 0.312;
const PRAWITZ_SLACK: f64 = 1e-8;
const QUADRATURE_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LogMilinError {
    #[error("Hayman index {0} must be positive")]
    InvalidAlpha(f64),
    #[error("index {index} exceeds available order {order}")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("invalid radii: {0}")]
    InvalidRadii(String),
    #[error("quadrature needs at least {minimum} points, got {points}")]
    TooFewPoints { points: usize, minimum: usize },
    #[error("quadrature at r = {radius} changed by {change} on doubling")]
    QuadratureUnconverged { radius: f64, change: f64 },
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

/// Coefficient ledger of a function `f` of series order `N`.
///
/// Every array has length `N` and is indexed by `n = 0..N`; `gamma[0]` and
/// `lambda[0]` are unused zeros.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogData {
    /// `log(f(z)/z) = 2 Σ γ_n z^n`.
    pub gamma: Vec<Complex>,
    /// Coefficients of `√(f(z)/z)`.
    pub sqrt_coeffs: Vec<Complex>,
    /// `λ_n = 2(γ_n - 1/n)`.
    pub lambda: Vec<Complex>,
    /// Coefficients of `F(r) = (1-r)² f(r)/r`.
    pub f_coeffs: Vec<Complex>,
    /// Partial sums of `f_coeffs`, `s_n = a_{n+1} - a_n`.
    pub s: Vec<Complex>,
    /// Cesàro means of `s`, `σ_n = a_{n+1}/(n+1)`.
    pub sigma: Vec<Complex>,
    /// `δ_n = s_n - σ_n`.
    pub delta: Vec<Complex>,
}

impl LogData {
    /// Largest usable index.
    pub fn order(&self) -> usize {
        self.gamma.len() - 1
    }
}

pub fn log_data(f: &SchlichtFunction) -> Result<LogData, LogMilinError> {
    let p = f.series.shift_down(1);
    let n = p.order();
    let log_p = p.log()?;
    let gamma: Vec<Complex> = log_p.coeffs().iter().map(|c| c * 0.5).collect();
    let sqrt_coeffs = p.sqrt()?.into_coeffs();
    let mut lambda = vec![Complex::new(0.0, 0.0); n + 1];
    for k in 1..=n {
        lambda[k] = (gamma[k] - 1.0 / k as f64) * 2.0;
    }
    let one_minus_z_sq = ComplexSeries::from_real(&[1.0, -2.0, 1.0])?;
    let f_coeffs = pad_mul(&one_minus_z_sq, &p);
    let mut s = Vec::with_capacity(n + 1);
    let mut acc = Complex::new(0.0, 0.0);
    for b in &f_coeffs {
        acc += b;
        s.push(acc);
    }
    let mut sigma = Vec::with_capacity(n + 1);
    let mut acc = Complex::new(0.0, 0.0);
    for (k, sk) in s.iter().enumerate() {
        acc += sk;
        sigma.push(acc / (k + 1) as f64);
    }
    let delta = s.iter().zip(&sigma).map(|(a, b)| a - b).collect();
    Ok(LogData {
        gamma,
        sqrt_coeffs,
        lambda,
        f_coeffs,
        s,
        sigma,
        delta,
    })
}

/// Product of a short polynomial with `p`, truncated at `p.order()`.
fn pad_mul(short: &ComplexSeries, p: &ComplexSeries) -> Vec<Complex> {
    let n = p.order();
    (0..=n)
        .map(|j| {
            (0..=j.min(short.order()))
                .map(|i| short.coeff(i) * p.coeff(j - i))
                .sum()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MilinCheck {
    /// `partial_sums[n-1] = Σ_{k≤n} 2(Re γ_k - 1/k)`.
    pub partial_sums: Vec<f64>,
    pub max_partial: f64,
    pub passes: bool,
}

pub fn milin_check(ld: &LogData) -> MilinCheck {
    let mut acc = 0.0;
    let partial_sums: Vec<f64> = (1..=ld.order())
        .map(|k| {
            acc += 2.0 * (ld.gamma[k].re - 1.0 / k as f64);
            acc
        })
        .collect();
    let max_partial = partial_sums
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    MilinCheck {
        passes: max_partial <= MILIN_BOUND,
        partial_sums,
        max_partial,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BazilevichGap {
    /// Partial sums of `k|γ_k - e^{-ikθ}/k|²` for `k = 1..=n_terms`.
    pub partial_sums: Vec<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
}

pub fn bazilevich_gap(
    ld: &LogData,
    alpha: f64,
    theta: f64,
    n_terms: usize,
) -> Result<BazilevichGap, LogMilinError> {
    if !(alpha > 0.0) {
        return Err(LogMilinError::InvalidAlpha(alpha));
    }
    if n_terms > ld.order() {
        return Err(LogMilinError::IndexOutOfRange {
            index: n_terms,
            order: ld.order(),
        });
    }
    let mut acc = 0.0;
    let partial_sums: Vec<f64> = (1..=n_terms)
        .map(|k| {
            let kf = k as f64;
            let d = ld.gamma[k] - Complex::from_polar(1.0 / kf, -kf * theta);
            acc += kf * d.norm_sqr();
            acc
        })
        .collect();
    let lhs = partial_sums.last().copied().unwrap_or(0.0);
    let rhs = -0.5 * alpha.ln();
    Ok(BazilevichGap {
        partial_sums,
        lhs,
        rhs,
        gap: rhs - lhs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LebedevMilin {
    pub a_abs: f64,
    pub b_sum: f64,
    pub rhs: f64,
    pub holds: bool,
}

pub fn lebedev_milin_check(
    f: &SchlichtFunction,
    ld: &LogData,
    n: usize,
) -> Result<LebedevMilin, LogMilinError> {
    if n + 1 > f.order() || n > ld.order() {
        return Err(LogMilinError::IndexOutOfRange {
            index: n + 1,
            order: f.order(),
        });
    }
    let a_abs = f.a(n + 1).norm();
    let b_sum: f64 = ld.sqrt_coeffs[..=n].iter().map(|b| b.norm_sqr()).sum();
    let n1 = (n + 1) as f64;
    let exponent: f64 = (1..=n)
        .map(|k| {
            let kf = k as f64;
            (n1 - kf) * (kf * ld.gamma[k].norm_sqr() - 1.0 / kf)
        })
        .sum::<f64>()
        / n1;
    let rhs = n1 * exponent.exp();
    let slack = 1e-9 * rhs.max(1.0);
    Ok(LebedevMilin {
        a_abs,
        b_sum,
        rhs,
        holds: a_abs <= b_sum + slack && b_sum <= rhs + slack,
    })
}

/// Trapezoid rule for `(1/2π)∫|f(re^{it})| dt`.
fn circle_mean(f: &SchlichtFunction, r: f64, points: usize) -> Result<f64, LogMilinError> {
    let step = 2.0 * PI / points as f64;
    let mut acc = 0.0;
    for j in 0..points {
        acc += f
            .eval_certified(Complex::from_polar(r, j as f64 * step))?
            .value
            .norm();
    }
    Ok(acc / points as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrawitzReport {
    pub radii: Vec<f64>,
    pub means: Vec<f64>,
    /// Growth profile `(1-r)² M∞(r)/r` at each radius.
    pub growth: Vec<f64>,
    pub pairs_checked: usize,
    pub violations: usize,
    /// Largest `lhs - rhs` over all pairs.
    pub worst_margin: f64,
}

pub const PRAWITZ_MIN_POINTS: usize = 256;

/// Checks `(1-r) mean(r) ≤ (1-r) mean(r₀) + g(r₀)` for all `r₀ < r` in `radii`.
pub fn prawitz_check(
    f: &SchlichtFunction,
    radii: &[f64],
    quad_points: usize,
) -> Result<PrawitzReport, LogMilinError> {
    if quad_points < PRAWITZ_MIN_POINTS {
        return Err(LogMilinError::TooFewPoints {
            points: quad_points,
            minimum: PRAWITZ_MIN_POINTS,
        });
    }
    if radii.iter().any(|r| !(*r > 0.0 && *r < 1.0)) || radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(LogMilinError::InvalidRadii(
            "radii must be increasing in (0, 1)".into(),
        ));
    }
    let mut means = Vec::with_capacity(radii.len());
    let mut growth = Vec::with_capacity(radii.len());
    for &r in radii {
        let coarse = circle_mean(f, r, quad_points)?;
        let fine = circle_mean(f, r, 2 * quad_points)?;
        let change = (fine - coarse).abs();
        if change > QUADRATURE_TOL * fine.max(1.0) {
            return Err(LogMilinError::QuadratureUnconverged { radius: r, change });
        }
        means.push(fine);
        let m = max_modulus(f, r, DEFAULT_GRID)?;
        growth.push((1.0 - r) * (1.0 - r) * m.modulus / r);
    }
    let mut pairs_checked = 0;
    let mut violations = 0;
    let mut worst_margin = f64::NEG_INFINITY;
    for j in 0..radii.len() {
        for i in 0..j {
            let r = radii[j];
            let lhs = (1.0 - r) * means[j];
            let rhs = (1.0 - r) * means[i] + growth[i];
            pairs_checked += 1;
            worst_margin = worst_margin.max(lhs - rhs);
            if lhs > rhs + PRAWITZ_SLACK {
                violations += 1;
            }
        }
    }
    Ok(PrawitzReport {
        radii: radii.to_vec(),
        means,
        growth,
        pairs_checked,
        violations,
        worst_margin,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientFunctionals {
    pub bieberbach_ratio: f64,
    pub zalcman: f64,
    pub zalcman_bound: f64,
}

/// `|a_n|/n` and the Zalcman functional `|a_n² - a_{2n-1}|` against `(n-1)²`.
pub fn coefficient_functionals(
    f: &SchlichtFunction,
    n: usize,
) -> Result<CoefficientFunctionals, LogMilinError> {
    if n < 1 || 2 * n - 1 > f.order() {
        return Err(LogMilinError::IndexOutOfRange {
            index: 2 * n.max(1) - 1,
            order: f.order(),
        });
    }
    let an = f.a(n);
    let nf = n as f64;
    Ok(CoefficientFunctionals {
        bieberbach_ratio: an.norm() / nf,
        zalcman: (an * an - f.a(2 * n - 1)).norm(),
        zalcman_bound: (nf - 1.0) * (nf - 1.0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnBound {
    pub max_sq: f64,
    pub bound: f64,
    pub holds: bool,
}

/// `max_n |s_n|² ≤ α⁻¹ e^{2·0.312}` after rotating the growth direction onto
/// the positive axis.
pub fn sn_bound_check(
    f: &SchlichtFunction,
    alpha: f64,
    theta: f64,
) -> Result<SnBound, LogMilinError> {
    if !(alpha > 0.0) {
        return Err(LogMilinError::InvalidAlpha(alpha));
    }
    let rotated = |n: usize| f.a(n) * Complex::from_polar(1.0, (n as f64 - 1.0) * theta);
    let max_sq = (0..f.order())
        .map(|n| (rotated(n + 1) - rotated(n)).norm_sqr())
        .fold(0.0, f64::max);
    let bound = (2.0 * MILIN_BOUND).exp() / alpha;
    Ok(SnBound {
        max_sq,
        bound,
        holds: max_sq <= bound,
    })
}

/// γ_n from the displayed relation `a_n = nγ_n + Σ_{k=1}^{n-1} kγ_k a_{n-k+1}`.
///
/// Kept as a diagnostic: on Koebe it returns `γ_2 = 0` instead of `1/2`.
pub fn literal_gamma_recurrence(a: &[Complex], n_max: usize) -> Vec<Complex> {
    let mut g = vec![Complex::new(0.0, 0.0); n_max + 1];
    for n in 1..=n_max {
        let mut acc = a[n];
        for k in 1..n {
            acc -= g[k] * a[n - k + 1] * k as f64;
        }
        g[n] = acc / n as f64;
    }
    g
}

/// γ_n from `(m-1) a_m = 2 Σ_{k=1}^{m-1} kγ_k a_{m-k}`, the derivative of
/// `f = z exp(2Σγ_k z^k)`.
pub fn corrected_gamma_recurrence(a: &[Complex], n_max: usize) -> Vec<Complex> {
    let mut g = vec![Complex::new(0.0, 0.0); n_max + 1];
    for n in 1..=n_max {
        let m = n + 1;
        let mut acc = a[m] * (m - 1) as f64;
        for k in 1..n {
            acc -= g[k] * a[m - k] * (2 * k) as f64;
        }
        g[n] = acc / (2 * n) as f64;
    }
    g
}

/// F-coefficients from the displayed `n b_n = Σ_{k=1}^n λ_k b_{n-k}`, `b_0 = 1`.
pub fn literal_f_recurrence(lambda: &[Complex], n_max: usize) -> Vec<Complex> {
    f_recurrence(lambda, n_max, false)
}

/// F-coefficients from `n b_n = Σ_{k=1}^n kλ_k b_{n-k}`, the exponential
/// recurrence for `F = exp(Σλ_k r^k)`.
pub fn corrected_f_recurrence(lambda: &[Complex], n_max: usize) -> Vec<Complex> {
    f_recurrence(lambda, n_max, true)
}

fn f_recurrence(lambda: &[Complex], n_max: usize, weighted: bool) -> Vec<Complex> {
    let mut b = vec![Complex::new(0.0, 0.0); n_max + 1];
    b[0] = Complex::new(1.0, 0.0);
    for n in 1..=n_max {
        let mut acc = Complex::new(0.0, 0.0);
        for k in 1..=n {
            let w = if weighted { k as f64 } else { 1.0 };
            acc += lambda[k] * b[n - k] * w;
        }
        b[n] = acc / n as f64;
    }
    b
}

//! Schlicht test functions, their inversions `g(z) = 1/f(1/z)` and
//! evaluation on the disk.
//!
//! Every preset [`Family`] has a closed-form evaluator next to its truncated
//! series. A [`Family::Custom`] member is known only through its
//! coefficients; evaluating it off the series is backed by the de Branges
//! tail bound `Σ_{n>N} n|z|^n`, valid for every member of the class.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::series::{Complex, ComplexSeries, SeriesError};

/// Tolerance on `a_0 = 0`, `a_1 = 1`.
pub const NORMALIZATION_TOL: f64 = 1e-12;
/// Absolute slack on the coefficient bound `|a_n| ≤ n`.
pub const DE_BRANGES_SLACK: f64 = 1e-9;
/// Below this bound the Möbius composite is considered exact.
const MOBIUS_TAIL_TARGET: f64 = 1e-17;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FamilyError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("point {0} lies outside the open unit disk")]
    OutsideDisk(Complex),
    #[error("order {requested} needs {needed} coefficients but only {available} are available")]
    InsufficientOrder {
        requested: usize,
        needed: usize,
        available: usize,
    },
    #[error("not a normalized schlicht series: {0}")]
    NotSchlicht(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Coarse tag of a family member, used in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Koebe,
    Rotation,
    Dilation,
    Halfplane,
    KoebeTransform,
    Custom,
}

fn koebe_base() -> Box<Family> {
    Box::new(Family::Koebe)
}

/// A recipe for a normalized univalent function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Family {
    /// `k(z) = z/(1-z)^2`.
    Koebe,
    /// `z/(1-z)`, a map onto the half-plane `Re > -1/2`.
    Halfplane,
    /// `e^{-iθ} f(e^{iθ} z)`.
    Rotation { theta: f64, base: Box<Family> },
    /// `r^{-1} f(r z)` with `0 < r < 1`.
    Dilation { r: f64, base: Box<Family> },
    /// `(f(φ(z)) - f(w)) / ((1-|w|²) f'(w))` with `φ(z) = (z+w)/(1+w̄z)`.
    KoebeTransform {
        w: Complex,
        #[serde(default = "koebe_base")]
        base: Box<Family>,
    },
    /// Coefficients `a_0, a_1, ...` supplied by the caller.
    Custom { coeffs: Vec<Complex> },
}

impl Family {
    pub fn rotation(theta: f64, base: Family) -> Self {
        Family::Rotation {
            theta,
            base: Box::new(base),
        }
    }

    pub fn dilation(r: f64, base: Family) -> Self {
        Family::Dilation {
            r,
            base: Box::new(base),
        }
    }

    pub fn koebe_transform(w: Complex) -> Self {
        Family::KoebeTransform {
            w,
            base: koebe_base(),
        }
    }

    pub fn kind(&self) -> FamilyKind {
        match self {
            Family::Koebe => FamilyKind::Koebe,
            Family::Halfplane => FamilyKind::Halfplane,
            Family::Rotation { .. } => FamilyKind::Rotation,
            Family::Dilation { .. } => FamilyKind::Dilation,
            Family::KoebeTransform { .. } => FamilyKind::KoebeTransform,
            Family::Custom { .. } => FamilyKind::Custom,
        }
    }

    pub fn has_closed_form(&self) -> bool {
        match self {
            Family::Koebe | Family::Halfplane => true,
            Family::Rotation { base, .. }
            | Family::Dilation { base, .. }
            | Family::KoebeTransform { base, .. } => base.has_closed_form(),
            Family::Custom { .. } => false,
        }
    }

    fn validate(&self) -> Result<(), FamilyError> {
        match self {
            Family::Koebe | Family::Halfplane | Family::Custom { .. } => Ok(()),
            Family::Rotation { theta, base } => {
                if !theta.is_finite() {
                    return Err(FamilyError::InvalidParameter(format!("theta = {theta}")));
                }
                base.validate()
            }
            Family::Dilation { r, base } => {
                if !(*r > 0.0 && *r < 1.0) {
                    return Err(FamilyError::InvalidParameter(format!(
                        "dilation radius r = {r} must lie in (0, 1)"
                    )));
                }
                base.validate()
            }
            Family::KoebeTransform { w, base } => {
                if !(w.is_finite() && w.norm() < 1.0) {
                    return Err(FamilyError::InvalidParameter(format!(
                        "automorphism point w = {w} must satisfy |w| < 1"
                    )));
                }
                base.validate()
            }
        }
    }

    /// Truncated series of order `order` (no normalization checks).
    pub fn series(&self, order: usize) -> Result<ComplexSeries, FamilyError> {
        let one = Complex::new(1.0, 0.0);
        let zero = Complex::new(0.0, 0.0);
        match self {
            Family::Koebe => Ok(ComplexSeries::from_fn(order, |n| {
                Complex::new(n as f64, 0.0)
            })?),
            Family::Halfplane => Ok(ComplexSeries::from_fn(order, |n| {
                if n == 0 {
                    zero
                } else {
                    one
                }
            })?),
            Family::Rotation { theta, base } => {
                let b = base.series(order)?;
                Ok(ComplexSeries::from_fn(order, |n| {
                    if n == 0 {
                        b.coeff(0)
                    } else {
                        b.coeff(n) * Complex::from_polar(1.0, (n as f64 - 1.0) * theta)
                    }
                })?)
            }
            Family::Dilation { r, base } => {
                let b = base.series(order)?;
                let mut coeffs = Vec::with_capacity(order + 1);
                coeffs.push(b.coeff(0) / *r);
                let mut pow = 1.0;
                for n in 1..=order {
                    coeffs.push(b.coeff(n) * pow);
                    pow *= r;
                }
                Ok(ComplexSeries::new(coeffs)?)
            }
            Family::KoebeTransform { w, base } => {
                let extended = mobius_outer_order(order, w.norm());
                let outer = match base.as_ref() {
                    Family::Custom { coeffs } if coeffs.len() < extended + 1 => {
                        return Err(FamilyError::InsufficientOrder {
                            requested: order,
                            needed: extended + 1,
                            available: coeffs.len(),
                        })
                    }
                    b => b.series(extended)?,
                };
                // composite = f(φ(z)); subtract f(w) and divide by (1-|w|²) f'(w)
                let composite = ComplexSeries::compose_mobius(&outer, *w, order);
                let scale = composite.coeff(1);
                if scale == zero {
                    return Err(FamilyError::NotSchlicht(
                        "base has vanishing derivative at w".into(),
                    ));
                }
                Ok(ComplexSeries::from_fn(order, |n| {
                    if n == 0 {
                        zero
                    } else {
                        composite.coeff(n) / scale
                    }
                })?)
            }
            Family::Custom { coeffs } => {
                if coeffs.len() < order + 1 {
                    return Err(FamilyError::InsufficientOrder {
                        requested: order,
                        needed: order + 1,
                        available: coeffs.len(),
                    });
                }
                Ok(ComplexSeries::new(coeffs[..=order].to_vec())?)
            }
        }
    }

    /// Closed-form `(f(z), f'(z))`, or `None` for custom members.
    pub fn eval_closed(&self, z: Complex) -> Option<(Complex, Complex)> {
        let one = Complex::new(1.0, 0.0);
        match self {
            Family::Koebe => {
                let d = one - z;
                Some((z / (d * d), (one + z) / (d * d * d)))
            }
            Family::Halfplane => {
                let d = one - z;
                Some((z / d, one / (d * d)))
            }
            Family::Rotation { theta, base } => {
                let e = Complex::from_polar(1.0, *theta);
                let (v, dv) = base.eval_closed(e * z)?;
                Some((v / e, dv))
            }
            Family::Dilation { r, base } => {
                let (v, dv) = base.eval_closed(z * *r)?;
                Some((v / *r, dv))
            }
            Family::KoebeTransform { w, base } => {
                let wc = w.conj();
                let den = one + wc * z;
                let phi = (z + w) / den;
                let (fw, dfw) = base.eval_closed(*w)?;
                let (fp, dfp) = base.eval_closed(phi)?;
                let c = dfw * (1.0 - w.norm_sqr());
                Some(((fp - fw) / c, dfp / (den * den * dfw)))
            }
            Family::Custom { .. } => None,
        }
    }
}

/// Outer truncation needed so that `Σ_{n>M} a_n φ^n` contributes less than
/// `MOBIUS_TAIL_TARGET` to every coefficient of order `≤ order`.
///
/// With `|a_n| ≤ n` and Cauchy's estimate on `|z| = ρ`,
/// `|[φ^n]_j| ≤ q(ρ)^n ρ^{-j}` where `q(ρ) = (ρ+|w|)/(1+|w|ρ)`.
fn mobius_outer_order(order: usize, w_abs: f64) -> usize {
    let target = MOBIUS_TAIL_TARGET.ln();
    let log_bound = |m: usize| -> f64 {
        (1..20)
            .map(|i| {
                let rho = i as f64 / 20.0;
                let q = (rho + w_abs) / (1.0 + w_abs * rho);
                let m1 = m as f64 + 1.0;
                -(order as f64) * rho.ln() + m1 * q.ln() + (m1 * (1.0 - q) + q).ln()
                    - 2.0 * (1.0 - q).ln()
            })
            .fold(f64::INFINITY, f64::min)
    };
    let mut m = order.max(8);
    while log_bound(m) > target {
        m += 8;
    }
    m
}

/// A normalized univalent function on the disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchlichtFunction {
    pub family: Family,
    pub series: ComplexSeries,
    pub has_closed_form: bool,
}

pub fn make_schlicht(family: &Family, order: usize) -> Result<SchlichtFunction, FamilyError> {
    if order < 2 {
        return Err(FamilyError::InvalidParameter(format!(
            "order {order} is below the minimum of 2"
        )));
    }
    family.validate()?;
    let series = family.series(order)?;
    let a = series.coeffs();
    if a[0].norm() > NORMALIZATION_TOL || (a[1] - Complex::new(1.0, 0.0)).norm() > NORMALIZATION_TOL
    {
        return Err(FamilyError::NotSchlicht(format!(
            "a_0 = {}, a_1 = {}",
            a[0], a[1]
        )));
    }
    if let Some((n, an)) = a
        .iter()
        .enumerate()
        .skip(2)
        .find(|(n, an)| an.norm() > *n as f64 + DE_BRANGES_SLACK)
    {
        return Err(FamilyError::NotSchlicht(format!(
            "|a_{n}| = {} exceeds {n}",
            an.norm()
        )));
    }
    Ok(SchlichtFunction {
        family: family.clone(),
        series,
        has_closed_form: family.has_closed_form(),
    })
}

/// Value with a rigorous bound on its distance to the true `f(z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Certified {
    pub value: Complex,
    pub error_bound: f64,
}

/// `Σ_{n>N} n x^n = x^{N+1}((N+1)(1-x)+x)/(1-x)²`.
pub fn de_branges_tail(order: usize, x: f64) -> f64 {
    let n1 = order as f64 + 1.0;
    x.powf(n1) * (n1 * (1.0 - x) + x) / ((1.0 - x) * (1.0 - x))
}

/// `Σ_{n>N} n² x^{n-1}`, the derivative of [`de_branges_tail`] in `x`.
pub fn de_branges_derivative_tail(order: usize, x: f64) -> f64 {
    let n = order as f64;
    let n1 = n + 1.0;
    let d = 1.0 - x;
    x.powf(n) * (n1 * (n1 - n * x) * d - n * x * d + 2.0 * x * (n1 - n * x)) / (d * d * d)
}

impl SchlichtFunction {
    pub fn kind(&self) -> FamilyKind {
        self.family.kind()
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }

    /// Coefficient `a_n`.
    pub fn a(&self, n: usize) -> Complex {
        self.series.coeff(n)
    }

    pub fn eval_certified(&self, z: Complex) -> Result<Certified, FamilyError> {
        if !(z.norm() < 1.0) {
            return Err(FamilyError::OutsideDisk(z));
        }
        if let Some((v, _)) = self.family.eval_closed(z) {
            return Ok(Certified {
                value: v,
                error_bound: 0.0,
            });
        }
        Ok(Certified {
            value: self.series.eval_partial(z),
            error_bound: de_branges_tail(self.order(), z.norm()),
        })
    }

    pub fn eval_derivative_certified(&self, z: Complex) -> Result<Certified, FamilyError> {
        if !(z.norm() < 1.0) {
            return Err(FamilyError::OutsideDisk(z));
        }
        if let Some((_, d)) = self.family.eval_closed(z) {
            return Ok(Certified {
                value: d,
                error_bound: 0.0,
            });
        }
        Ok(Certified {
            value: self.series.derivative().eval_partial(z),
            error_bound: de_branges_derivative_tail(self.order(), z.norm()),
        })
    }

    /// Maximum of `|f|` on `|z| = r`; see [`max_modulus`].
    pub fn max_modulus(&self, r: f64, grid: usize) -> Result<MaxModulus, FamilyError> {
        max_modulus(self, r, grid)
    }
}

/// Result of a maximum-modulus scan on a circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxModulus {
    pub modulus: f64,
    /// Maximizing angle in `(-π, π]`.
    pub theta: f64,
}

pub const DEFAULT_GRID: usize = 512;
const GOLDEN_TOL: f64 = 1e-10;

fn wrap_angle(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    t
}

/// Golden-section search for a maximum of `f` on `[a, b]`.
fn golden_section_maximize(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    if f1 > f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Local maxima of `|f(re^{iθ})|` found on a uniform grid and refined by
/// golden-section search, sorted by decreasing modulus.
pub fn circle_local_maxima(
    f: &SchlichtFunction,
    r: f64,
    grid: usize,
) -> Result<Vec<MaxModulus>, FamilyError> {
    if grid < 64 {
        return Err(FamilyError::InvalidParameter(format!(
            "grid {grid} is below the minimum of 64"
        )));
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(FamilyError::OutsideDisk(Complex::new(r, 0.0)));
    }
    let modulus = |theta: f64| -> f64 {
        f.eval_certified(Complex::from_polar(r, theta))
            .map(|c| c.value.norm())
            .unwrap_or(f64::NAN)
    };
    let step = 2.0 * PI / grid as f64;
    let values: Vec<f64> = (0..grid).map(|j| modulus(j as f64 * step)).collect();
    let mut maxima = Vec::new();
    for j in 0..grid {
        let prev = values[(j + grid - 1) % grid];
        let next = values[(j + 1) % grid];
        let v = values[j];
        // ties broken toward the left neighbour so plateaus yield one maximum
        if v > prev && v >= next {
            let center = j as f64 * step;
            let (theta, m) =
                golden_section_maximize(modulus, center - step, center + step, GOLDEN_TOL);
            let (theta, m) = if m >= v { (theta, m) } else { (center, v) };
            maxima.push(MaxModulus {
                modulus: m,
                theta: wrap_angle(theta),
            });
        }
    }
    if maxima.is_empty() {
        // constant modulus on the grid
        maxima.push(MaxModulus {
            modulus: values[0],
            theta: 0.0,
        });
    }
    maxima.sort_by(|a, b| b.modulus.total_cmp(&a.modulus));
    Ok(maxima)
}

/// `M∞(r, f) = max_{|z|=r} |f(z)|` together with a maximizing angle.
pub fn max_modulus(f: &SchlichtFunction, r: f64, grid: usize) -> Result<MaxModulus, FamilyError> {
    Ok(circle_local_maxima(f, r, grid)?[0])
}

/// `g(z) = z + b_0 + Σ_{n≥1} b_n z^{-n}`, univalent on `|z| > 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaFunction {
    pub b0: Complex,
    /// `b_1, ..., b_N`.
    pub tail: Vec<Complex>,
}

impl SigmaFunction {
    pub fn order(&self) -> usize {
        self.tail.len()
    }

    /// `b_n` for `n ≥ 1`.
    pub fn b(&self, n: usize) -> Complex {
        self.tail[n - 1]
    }

    /// Partial sum of `g(z)` for `|z| > 1`.
    pub fn eval_partial(&self, z: Complex) -> Complex {
        let u = z.inv();
        let tail = self
            .tail
            .iter()
            .rev()
            .fold(Complex::new(0.0, 0.0), |acc, &b| (acc + b) * u);
        z + self.b0 + tail
    }

    /// Inverts back to `f(u) = 1/g(1/u)`, a series of order `self.order() + 2`.
    pub fn to_schlicht_series(&self) -> Result<ComplexSeries, FamilyError> {
        let n = self.order() + 1;
        let mut den = vec![Complex::new(1.0, 0.0), self.b0];
        den.extend_from_slice(&self.tail);
        let den = ComplexSeries::new(den)?;
        let q = ComplexSeries::one(n).div(&den)?;
        let mut coeffs = vec![Complex::new(0.0, 0.0)];
        coeffs.extend_from_slice(q.coeffs());
        Ok(ComplexSeries::new(coeffs)?)
    }
}

/// Coefficients of `g(z) = 1/f(1/z)` through `b_order`.
pub fn invert_to_sigma(f: &SchlichtFunction, order: usize) -> Result<SigmaFunction, FamilyError> {
    let available = f.order().saturating_sub(2);
    if order > available {
        return Err(FamilyError::InsufficientOrder {
            requested: order,
            needed: order + 2,
            available: f.order(),
        });
    }
    let p = f.series.shift_down(1);
    let q = ComplexSeries::one(p.order()).div(&p)?;
    Ok(SigmaFunction {
        b0: q.coeff(1),
        tail: (1..=order).map(|n| q.coeff(n + 1)).collect(),
    })
}

/// Named member of the standard test corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusMember {
    pub name: String,
    pub family: Family,
    /// `true` when `1/f(1/z)` is a full mapping and `f` has maximal growth.
    pub full_mapping: bool,
}

/// The fixed corpus: Koebe and its rotations, Koebe transforms (full
/// mappings of maximal growth), and bounded or half-plane images (slow
/// growth, not full).
pub fn standard_corpus() -> Vec<CorpusMember> {
    let m = |name: &str, family: Family, full: bool| CorpusMember {
        name: name.to_string(),
        family,
        full_mapping: full,
    };
    vec![
        m("koebe", Family::Koebe, true),
        m(
            "koebe_rot_pi3",
            Family::rotation(PI / 3.0, Family::Koebe),
            true,
        ),
        m("koebe_rot_m2", Family::rotation(-2.0, Family::Koebe), true),
        m(
            "koebe_transform_a",
            Family::koebe_transform(Complex::from_polar(0.3, PI / 4.0)),
            true,
        ),
        m(
            "koebe_transform_real",
            Family::koebe_transform(Complex::new(0.5, 0.0)),
            true,
        ),
        m(
            "koebe_transform_b",
            Family::koebe_transform(Complex::new(-0.2, 0.35)),
            true,
        ),
        m("koebe_dilated", Family::dilation(0.9, Family::Koebe), false),
        m("halfplane", Family::Halfplane, false),
        m(
            "halfplane_rot",
            Family::rotation(0.7, Family::Halfplane),
            false,
        ),
        m(
            "halfplane_dilated",
            Family::dilation(0.8, Family::Halfplane),
            false,
        ),
    ]
}

/// Hayman index of the Koebe transform of `k` at `w`, `(1-|w|²)/|1-w²|`.
///
/// The transform is rational with a double pole at `ζ = (1-w)/(1-w̄)` on the
/// unit circle; the index is the modulus of the leading Laurent coefficient
/// there.
pub fn koebe_transform_alpha(w: Complex) -> f64 {
    (1.0 - w.norm_sqr()) / (Complex::new(1.0, 0.0) - w * w).norm()
}

/// Direction of greatest growth of the Koebe transform of `k` at `w`.
pub fn koebe_transform_direction(w: Complex) -> f64 {
    let one = Complex::new(1.0, 0.0);
    ((one - w) / (one - w.conj())).arg()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex {
        Complex::new(re, 0.0)
    }

    #[test]
    fn koebe_coefficients() {
        let k = make_schlicht(&Family::Koebe, 5).unwrap();
        let want: Vec<Complex> = (0..=5).map(|n| c(n as f64)).collect();
        assert_eq!(k.series.coeffs(), &want[..]);
        assert_eq!(k.kind(), FamilyKind::Koebe);
    }

    #[test]
    fn dilated_koebe_coefficients() {
        let f = make_schlicht(&Family::dilation(0.5, Family::Koebe), 4).unwrap();
        let want = [0.0, 1.0, 1.0, 0.75, 0.5];
        for (a, w) in f.series.coeffs().iter().zip(want) {
            assert!((a - c(w)).norm() < 1e-15);
        }
    }

    #[test]
    fn real_koebe_transform_is_koebe() {
        let f = make_schlicht(&Family::koebe_transform(c(0.5)), 32).unwrap();
        for n in 0..=32 {
            assert!((f.a(n) - c(n as f64)).norm() < 1e-10, "n = {n}: {}", f.a(n));
        }
        // affine image A(t) = (t - k(w))/((1-w²)k'(w)) fixes the slit tip -1/4
        let (kw, dkw) = Family::Koebe.eval_closed(c(0.5)).unwrap();
        let tip = (c(-0.25) - kw) / (dkw * 0.75);
        assert!((tip - c(-0.25)).norm() < 1e-15);
    }

    #[test]
    fn koebe_transform_series_matches_closed_form() {
        let w = Complex::from_polar(0.3, PI / 4.0);
        let f = make_schlicht(&Family::koebe_transform(w), 128).unwrap();
        let z = Complex::new(0.2, -0.3);
        let (v, dv) = f.family.eval_closed(z).unwrap();
        assert!((f.series.eval_partial(z) - v).norm() < 1e-12);
        assert!((f.series.derivative().eval_partial(z) - dv).norm() < 1e-12);
    }

    #[test]
    fn invalid_parameters() {
        assert!(matches!(
            make_schlicht(&Family::dilation(1.0, Family::Koebe), 8),
            Err(FamilyError::InvalidParameter(_))
        ));
        assert!(matches!(
            make_schlicht(&Family::koebe_transform(c(1.0)), 8),
            Err(FamilyError::InvalidParameter(_))
        ));
        assert!(matches!(
            make_schlicht(&Family::Koebe, 1),
            Err(FamilyError::InvalidParameter(_))
        ));
    }

    #[test]
    fn custom_series_must_be_normalized_and_bounded() {
        let bad = Family::Custom {
            coeffs: vec![c(0.0), c(1.0), c(2.5)],
        };
        assert!(matches!(
            make_schlicht(&bad, 2),
            Err(FamilyError::NotSchlicht(_))
        ));
        let unnormalized = Family::Custom {
            coeffs: vec![c(0.0), c(2.0), c(0.0)],
        };
        assert!(matches!(
            make_schlicht(&unnormalized, 2),
            Err(FamilyError::NotSchlicht(_))
        ));
    }

    #[test]
    fn corpus_is_normalized() {
        for m in standard_corpus() {
            let f = make_schlicht(&m.family, 64).unwrap();
            assert!(f.a(0).norm() < 1e-12, "{}", m.name);
            assert!((f.a(1) - c(1.0)).norm() < 1e-12, "{}", m.name);
            assert!(f.has_closed_form);
        }
    }

    #[test]
    fn invert_koebe() {
        let k = make_schlicht(&Family::Koebe, 16).unwrap();
        let g = invert_to_sigma(&k, 10).unwrap();
        assert!((g.b0 - c(-2.0)).norm() < 1e-14);
        assert!((g.b(1) - c(1.0)).norm() < 1e-14);
        assert!(g.tail[1..].iter().all(|b| b.norm() < 1e-13));
    }

    #[test]
    fn invert_halfplane() {
        let h = make_schlicht(&Family::Halfplane, 16).unwrap();
        let g = invert_to_sigma(&h, 10).unwrap();
        assert!((g.b0 - c(-1.0)).norm() < 1e-15);
        assert!(g.tail.iter().all(|b| b.norm() < 1e-15));
    }

    #[test]
    fn invert_rotated_koebe() {
        let theta = 0.8;
        let f = make_schlicht(&Family::rotation(theta, Family::Koebe), 16).unwrap();
        let g = invert_to_sigma(&f, 10).unwrap();
        // e^{iθ}/k(e^{iθ}/z) = e^{iθ}(z e^{-iθ} - 2 + e^{iθ}/z)
        assert!((g.b0 - Complex::from_polar(-2.0, theta)).norm() < 1e-13);
        assert!((g.b(1) - Complex::from_polar(1.0, 2.0 * theta)).norm() < 1e-13);
        assert!(g.tail[1..].iter().all(|b| b.norm() < 1e-12));
    }

    #[test]
    fn invert_requires_enough_coefficients() {
        let k = make_schlicht(&Family::Koebe, 10).unwrap();
        assert!(invert_to_sigma(&k, 8).is_ok());
        assert!(matches!(
            invert_to_sigma(&k, 9),
            Err(FamilyError::InsufficientOrder { .. })
        ));
    }

    #[test]
    fn eval_certified_closed_form() {
        let k = make_schlicht(&Family::Koebe, 8).unwrap();
        let v = k.eval_certified(c(0.9)).unwrap();
        assert!((v.value - c(90.0)).norm() < 1e-12);
        assert_eq!(v.error_bound, 0.0);
        assert!(matches!(
            k.eval_certified(c(1.0)),
            Err(FamilyError::OutsideDisk(_))
        ));
    }

    #[test]
    fn eval_certified_custom_tail_bound() {
        let coeffs: Vec<Complex> = (0..=128).map(|n| c(n as f64)).collect();
        let f = make_schlicht(&Family::Custom { coeffs }, 128).unwrap();
        assert!(!f.has_closed_form);
        let v = f.eval_certified(c(0.5)).unwrap();
        let expected_bound = 0.5f64.powi(129) * (129.0 * 0.5 + 0.5) / 0.25;
        assert!((v.error_bound - expected_bound).abs() <= 1e-12 * expected_bound);
        assert!(v.error_bound < 1e-36);
        assert!((v.value - c(2.0)).norm() <= 1e-14);
    }

    #[test]
    fn tail_formulas_match_brute_force() {
        for &(n, x) in &[(8usize, 0.5f64), (32, 0.9), (128, 0.7), (5, 0.2)] {
            let brute: f64 = (n + 1..20_000).map(|k| k as f64 * x.powi(k as i32)).sum();
            let brute_d: f64 = (n + 1..20_000)
                .map(|k| (k * k) as f64 * x.powi(k as i32 - 1))
                .sum();
            let t = de_branges_tail(n, x);
            let td = de_branges_derivative_tail(n, x);
            assert!((t - brute).abs() <= 1e-12 * brute.max(1e-300), "{n} {x}");
            assert!(
                (td - brute_d).abs() <= 1e-12 * brute_d.max(1e-300),
                "{n} {x}"
            );
        }
    }

    #[test]
    fn max_modulus_koebe_and_halfplane() {
        let k = make_schlicht(&Family::Koebe, 16).unwrap();
        let m = k.max_modulus(0.5, DEFAULT_GRID).unwrap();
        assert!((m.modulus - 2.0).abs() < 1e-12);
        assert!(m.theta.abs() < 1e-7);
        let h = make_schlicht(&Family::Halfplane, 16).unwrap();
        let m = h.max_modulus(0.5, DEFAULT_GRID).unwrap();
        assert!((m.modulus - 1.0).abs() < 1e-12);
        assert!(m.theta.abs() < 1e-7);
    }

    #[test]
    fn max_modulus_rotation() {
        let f = make_schlicht(&Family::rotation(PI / 3.0, Family::Koebe), 16).unwrap();
        let m = f.max_modulus(0.5, DEFAULT_GRID).unwrap();
        assert!((m.modulus - 2.0).abs() < 1e-12);
        assert!((m.theta + PI / 3.0).abs() < 1e-7, "{}", m.theta);
    }

    #[test]
    fn max_modulus_rejects_small_grid() {
        let k = make_schlicht(&Family::Koebe, 16).unwrap();
        assert!(k.max_modulus(0.5, 32).is_err());
    }

    #[test]
    fn koebe_transform_growth_constants() {
        assert!((koebe_transform_alpha(c(0.5)) - 1.0).abs() < 1e-15);
        assert_eq!(koebe_transform_direction(c(0.5)), 0.0);
        let w = Complex::from_polar(0.3, PI / 4.0);
        let f = make_schlicht(&Family::koebe_transform(w), 16).unwrap();
        let r: f64 = 1.0 - 1e-6;
        let m = f.max_modulus(r, DEFAULT_GRID).unwrap();
        let alpha = (1.0 - r).powi(2) * m.modulus / r;
        assert!((alpha - koebe_transform_alpha(w)).abs() < 1e-5);
        assert!((m.theta - koebe_transform_direction(w)).abs() < 1e-5);
    }
}

//! Summability means and the double-indexed convergence harness.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logmilin::LogData;
use crate::series::Complex;

/// Imaginary parts above this make a row complex.
pub const REAL_TOL: f64 = 1e-14;
const MONOTONE_SLACK: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TauberError {
    #[error("index {index} out of range for {len} coefficients")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("Abel radius {0} must lie in [0, 1)")]
    InvalidAbelRadius(f64),
    #[error("row m = {m} has complex coefficient at k = {k}")]
    ComplexCoefficients { m: usize, k: usize },
    #[error("malformed family: {0}")]
    Malformed(String),
    #[error("sample row {row} increases at grid index {index}")]
    NotMonotone { row: usize, index: usize },
    #[error("invalid radius {0}")]
    InvalidRadius(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeanKind {
    Cesaro,
    Weighted,
    Abel,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MeanParam {
    Index(usize),
    Radius(f64),
}

/// `(n+1)⁻¹ Σ_{k≤n} s_k` with `s_k` the partial sums.
pub fn cesaro_mean(coeffs: &[f64], n: usize) -> Result<f64, TauberError> {
    check_index(coeffs, n)?;
    let mut s = 0.0;
    let mut total = 0.0;
    for a in &coeffs[..=n] {
        s += a;
        total += s;
    }
    Ok(total / (n + 1) as f64)
}

/// `(n+1)⁻¹ Σ_{k≤n} (n+1-k) a_k`.
pub fn weighted_mean(coeffs: &[f64], n: usize) -> Result<f64, TauberError> {
    check_index(coeffs, n)?;
    let n1 = (n + 1) as f64;
    Ok(coeffs[..=n]
        .iter()
        .enumerate()
        .map(|(k, a)| (n1 - k as f64) * a)
        .sum::<f64>()
        / n1)
}

/// `Σ a_k t^k` over the stored coefficients.
pub fn abel_mean(coeffs: &[f64], t: f64) -> Result<f64, TauberError> {
    if !(0.0..1.0).contains(&t) {
        return Err(TauberError::InvalidAbelRadius(t));
    }
    Ok(coeffs.iter().rev().fold(0.0, |acc, a| acc * t + a))
}

pub fn means(kind: MeanKind, coeffs: &[f64], param: MeanParam) -> Result<f64, TauberError> {
    match (kind, param) {
        (MeanKind::Cesaro, MeanParam::Index(n)) => cesaro_mean(coeffs, n),
        (MeanKind::Weighted, MeanParam::Index(n)) => weighted_mean(coeffs, n),
        (MeanKind::Abel, MeanParam::Radius(t)) => abel_mean(coeffs, t),
        (k, p) => Err(TauberError::Malformed(format!("{k:?} mean with {p:?}"))),
    }
}

fn check_index(coeffs: &[f64], n: usize) -> Result<(), TauberError> {
    if n >= coeffs.len() {
        Err(TauberError::IndexOutOfRange {
            index: n,
            len: coeffs.len(),
        })
    } else {
        Ok(())
    }
}

/// Non-negative grid `D[m][n]` over labelled row and column indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationSurface {
    pub m_values: Vec<usize>,
    pub n_values: Vec<usize>,
    pub d: Vec<Vec<f64>>,
}

impl DeviationSurface {
    pub fn new(
        m_values: Vec<usize>,
        n_values: Vec<usize>,
        d: Vec<Vec<f64>>,
    ) -> Result<Self, TauberError> {
        if d.len() != m_values.len() || d.iter().any(|row| row.len() != n_values.len()) {
            return Err(TauberError::Malformed("surface shape mismatch".into()));
        }
        if d.iter().flatten().any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(TauberError::Malformed(
                "surface entries must be finite and non-negative".into(),
            ));
        }
        Ok(DeviationSurface {
            m_values,
            n_values,
            d,
        })
    }

    fn largest_index(&self) -> usize {
        self.m_values
            .iter()
            .chain(&self.n_values)
            .copied()
            .max()
            .unwrap_or(0)
    }

    /// `tail[N] = max{D[m][n] : m > N, n > N}`, 0 when empty.
    pub fn tail_sup(&self) -> Vec<f64> {
        self.tail_with(|m, n, big| m > big && n > big)
    }

    /// `tail[N] = max{D[m][n] : n > N}` over every row.
    pub fn tail_sup_columns(&self) -> Vec<f64> {
        self.tail_with(|_, n, big| n > big)
    }

    fn tail_with(&self, keep: impl Fn(usize, usize, usize) -> bool) -> Vec<f64> {
        let top = self.largest_index();
        let mut tail = vec![0.0; top + 1];
        for (i, &m) in self.m_values.iter().enumerate() {
            for (j, &n) in self.n_values.iter().enumerate() {
                let v = self.d[i][j];
                // keep is monotone in N, so stop at the first rejection
                for (big, t) in tail.iter_mut().enumerate() {
                    if !keep(m, n, big) {
                        break;
                    }
                    *t = f64::max(*t, v);
                }
            }
        }
        tail
    }
}

/// Smallest `N` with `tail[N] < eps`.
pub fn n_of_eps(tail: &[f64], eps: f64) -> Option<usize> {
    tail.iter().position(|&t| t < eps)
}

/// Rows `a_k^{(m)}` with their Abel limits `α_m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoubleFamily {
    pub m_values: Vec<usize>,
    pub coeff_rows: Vec<Vec<Complex>>,
    pub alpha: Vec<f64>,
    /// Declared bound `|α_m| < K`.
    pub k_bound: f64,
    /// Declared bound `s_n^{(m)} - α_m < L`.
    pub l_bound: f64,
    /// Abel grid on `[0, 1]`; `t = 1` is read as `α_m`.
    pub t_grid: Vec<f64>,
}

pub fn default_t_grid() -> Vec<f64> {
    vec![0.0, 0.5, 0.9, 0.99, 0.999, 1.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma1Report {
    pub l_observed: f64,
    pub hypothesis_i_ok: bool,
    pub hypothesis_iii_ok: bool,
    /// Max over the later half of the rows of `sup_t |f_m(t) - f_last(t)|`.
    pub uniform_gap: f64,
    /// `|f_m(t) - α_m|` at the largest `t < 1` of the grid, per row.
    pub abel_residuals: Vec<f64>,
    pub deviation: DeviationSurface,
    pub tail_sup: Vec<f64>,
}

pub fn lemma1_harness(fam: &DoubleFamily) -> Result<Lemma1Report, TauberError> {
    let rows = fam.coeff_rows.len();
    if rows == 0 || rows != fam.m_values.len() || rows != fam.alpha.len() {
        return Err(TauberError::Malformed(
            "rows, m values and alphas must align".into(),
        ));
    }
    let order = fam.coeff_rows[0].len();
    if order == 0 || fam.coeff_rows.iter().any(|r| r.len() != order) {
        return Err(TauberError::Malformed(
            "rows must share a common truncation order".into(),
        ));
    }
    if fam.t_grid.iter().any(|t| !(0.0..=1.0).contains(t)) {
        return Err(TauberError::Malformed("t grid must lie in [0, 1]".into()));
    }
    let mut real_rows = Vec::with_capacity(rows);
    for (i, row) in fam.coeff_rows.iter().enumerate() {
        if let Some(k) = row.iter().position(|c| c.im.abs() > REAL_TOL) {
            return Err(TauberError::ComplexCoefficients {
                m: fam.m_values[i],
                k,
            });
        }
        real_rows.push(row.iter().map(|c| c.re).collect::<Vec<f64>>());
    }

    let mut l_observed = f64::NEG_INFINITY;
    for (row, alpha) in real_rows.iter().zip(&fam.alpha) {
        let mut s = 0.0;
        for a in row {
            s += a;
            l_observed = l_observed.max(s - alpha);
        }
    }

    let abel_values: Vec<Vec<f64>> = real_rows
        .iter()
        .zip(&fam.alpha)
        .map(|(row, alpha)| {
            fam.t_grid
                .iter()
                .map(|&t| {
                    if t >= 1.0 {
                        Ok(*alpha)
                    } else {
                        abel_mean(row, t)
                    }
                })
                .collect::<Result<Vec<f64>, TauberError>>()
        })
        .collect::<Result<_, _>>()?;
    let t_inner = fam.t_grid.iter().rposition(|&t| t < 1.0);
    let abel_residuals: Vec<f64> = match t_inner {
        Some(j) => abel_values
            .iter()
            .zip(&fam.alpha)
            .map(|(v, a)| (v[j] - a).abs())
            .collect(),
        None => vec![0.0; rows],
    };
    let last = &abel_values[rows - 1];
    let uniform_gap = abel_values[rows / 2..]
        .iter()
        .map(|v| {
            v.iter()
                .zip(last)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);

    let n_values: Vec<usize> = (0..order).collect();
    let d = real_rows
        .iter()
        .zip(&fam.alpha)
        .map(|(row, alpha)| {
            (0..order)
                .map(|n| weighted_mean(row, n).map(|w| (alpha - w).abs()))
                .collect::<Result<Vec<f64>, TauberError>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let deviation = DeviationSurface::new(fam.m_values.clone(), n_values, d)?;
    let tail_sup = deviation.tail_sup();
    Ok(Lemma1Report {
        hypothesis_i_ok: fam.alpha.iter().all(|a| a.abs() < fam.k_bound),
        hypothesis_iii_ok: l_observed < fam.l_bound,
        l_observed,
        uniform_gap,
        abel_residuals,
        deviation,
        tail_sup,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TauberResidual {
    pub lhs: Complex,
    pub rhs: Complex,
    pub residual: f64,
}

/// Both sides of the decomposition of `F(r) - σ_n` with every sum cut at
/// the ledger order `K`:
///
/// `(1-r) Σ_{k<K} δ_k r^k + δ_K r^K + Σ_{k=n}^{K} (δ_k/k) r^k
///  + Σ_{k<n} (δ_k/k)(r^k - 1) - δ_n/n`.
///
/// The boundary term `δ_K r^K` is what the finite Abel summation of
/// `Σ_{k≤K} b_k r^k` leaves behind.
pub fn tauber_decomposition_check(
    ld: &LogData,
    n: usize,
    r: f64,
) -> Result<TauberResidual, TauberError> {
    let order = ld.order();
    if n < 2 || n > order {
        return Err(TauberError::IndexOutOfRange {
            index: n,
            len: order + 1,
        });
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(TauberError::InvalidRadius(r));
    }
    let f_r = ld
        .f_coeffs
        .iter()
        .rev()
        .fold(Complex::new(0.0, 0.0), |acc, &b| acc * r + b);
    let lhs = f_r - ld.sigma[n];
    let zero = Complex::new(0.0, 0.0);
    let mut abel = zero;
    let mut high = zero;
    let mut low = zero;
    let mut rk = 1.0;
    for k in 0..=order {
        let d = ld.delta[k];
        if k < order {
            abel += d * rk;
        }
        if k >= 1 {
            let dk = d / k as f64;
            if k >= n {
                high += dk * rk;
            } else {
                low += dk * (rk - 1.0);
            }
        }
        rk *= r;
    }
    let rk_top = r.powi(order as i32);
    let rhs = abel * (1.0 - r) + ld.delta[order] * rk_top + high + low - ld.delta[n] / n as f64;
    Ok(TauberResidual {
        lhs,
        rhs,
        residual: (lhs - rhs).norm(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniformGap {
    pub sup_gaps: Vec<f64>,
    /// Largest jump between adjacent samples of the limit.
    pub max_limit_jump: f64,
    pub dini_ok: bool,
}

/// Sup-distance of each sampled row to the limit on a shared grid.
///
/// `dini_ok` holds when the later half of `sup_gaps` is non-increasing and
/// ends below where it started (or at zero).
pub fn uniform_gap(samples: &[Vec<f64>], limit: &[f64]) -> Result<UniformGap, TauberError> {
    let len = limit.len();
    if samples.iter().any(|row| row.len() != len) {
        return Err(TauberError::Malformed(
            "samples and limit must share the grid".into(),
        ));
    }
    for (row, values) in samples.iter().enumerate() {
        if let Some(index) = (1..values.len()).find(|&j| values[j] > values[j - 1] + MONOTONE_SLACK)
        {
            return Err(TauberError::NotMonotone { row, index });
        }
    }
    let sup_gaps: Vec<f64> = samples
        .iter()
        .map(|row| {
            row.iter()
                .zip(limit)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
        .collect();
    let max_limit_jump = limit
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .fold(0.0, f64::max);
    let tail = &sup_gaps[sup_gaps.len() / 2..];
    let dini_ok = match (tail.first(), tail.last()) {
        (Some(first), Some(last)) => {
            tail.windows(2).all(|w| w[1] <= w[0] + 1e-12) && (last < first || *last == 0.0)
        }
        _ => true,
    };
    Ok(UniformGap {
        sup_gaps,
        max_limit_jump,
        dini_ok,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerBracket {
    pub lower: f64,
    pub upper: f64,
    pub ok: bool,
}

/// `(1 - 1/(n+1))^{n+1} < e⁻¹ < (1 - 1/(n+1))^n`.
pub fn euler_bracket(n: u64) -> Result<EulerBracket, TauberError> {
    if n < 1 {
        return Err(TauberError::IndexOutOfRange { index: 0, len: 1 });
    }
    let log_base = (-1.0 / (n as f64 + 1.0)).ln_1p();
    let lower = ((n + 1) as f64 * log_base).exp();
    let upper = (n as f64 * log_base).exp();
    let e_inv = (-1.0f64).exp();
    Ok(EulerBracket {
        lower,
        upper,
        ok: lower < e_inv && e_inv < upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_schlicht, Family};
    use crate::logmilin::log_data;

    #[test]
    fn means_on_constant_row() {
        let ones = vec![1.0; 10];
        assert!((cesaro_mean(&ones, 9).unwrap() - 5.5).abs() < 1e-14);
        assert!((weighted_mean(&ones, 9).unwrap() - 5.5).abs() < 1e-14);
        let mut delta = vec![0.0; 10];
        delta[0] = 1.0;
        assert_eq!(weighted_mean(&delta, 7).unwrap(), 1.0);
        assert!(matches!(
            weighted_mean(&ones, 10),
            Err(TauberError::IndexOutOfRange { .. })
        ));
        assert!(abel_mean(&ones, 1.0).is_err());
        assert!((abel_mean(&ones, 0.5).unwrap() - (1.0 - 0.5f64.powi(10)) / 0.5).abs() < 1e-14);
        assert!(means(MeanKind::Abel, &ones, MeanParam::Index(3)).is_err());
    }

    #[test]
    fn koebe_ledger_rows_vanish() {
        let ld = log_data(&make_schlicht(&Family::Koebe, 64).unwrap()).unwrap();
        let row: Vec<Complex> = (0..=ld.order())
            .map(|k| {
                if k == 0 {
                    Complex::new(0.0, 0.0)
                } else {
                    Complex::new(2.0 * (ld.gamma[k].re - 1.0 / k as f64), 0.0)
                }
            })
            .collect();
        let fam = DoubleFamily {
            m_values: vec![1, 2, 3],
            coeff_rows: vec![row.clone(), row.clone(), row],
            alpha: vec![0.0; 3],
            k_bound: 1.0,
            l_bound: 1.0,
            t_grid: default_t_grid(),
        };
        let rep = lemma1_harness(&fam).unwrap();
        assert!(rep.deviation.d.iter().flatten().all(|x| *x < 1e-13));
        assert!(rep.tail_sup.iter().all(|x| *x < 1e-13));
        assert!(rep.uniform_gap < 1e-13);
    }

    #[test]
    fn designed_violation_of_bounded_partial_sums() {
        let rows: Vec<Vec<Complex>> = (0..4).map(|_| vec![Complex::new(1.0, 0.0); 50]).collect();
        let fam = DoubleFamily {
            m_values: vec![1, 2, 3, 4],
            coeff_rows: rows,
            alpha: vec![0.0; 4],
            k_bound: 1.0,
            l_bound: 10.0,
            t_grid: default_t_grid(),
        };
        let rep = lemma1_harness(&fam).unwrap();
        assert_eq!(rep.l_observed, 50.0);
        assert!(!rep.hypothesis_iii_ok);
    }

    #[test]
    fn complex_rows_rejected() {
        let fam = DoubleFamily {
            m_values: vec![1],
            coeff_rows: vec![vec![Complex::new(1.0, 1e-10)]],
            alpha: vec![0.0],
            k_bound: 1.0,
            l_bound: 1.0,
            t_grid: default_t_grid(),
        };
        assert_eq!(
            lemma1_harness(&fam),
            Err(TauberError::ComplexCoefficients { m: 1, k: 0 })
        );
    }

    #[test]
    fn tail_sup_definitions() {
        let s = DeviationSurface::new(
            vec![1, 3],
            vec![1, 2, 4],
            vec![vec![0.9, 0.5, 0.4], vec![0.3, 0.2, 0.1]],
        )
        .unwrap();
        assert_eq!(s.tail_sup(), vec![0.9, 0.2, 0.1, 0.0, 0.0]);
        assert_eq!(s.tail_sup_columns(), vec![0.9, 0.5, 0.4, 0.4, 0.0]);
        assert_eq!(n_of_eps(&s.tail_sup(), 0.15), Some(2));
        assert_eq!(n_of_eps(&s.tail_sup(), 0.0), None);
    }

    #[test]
    fn decomposition_on_koebe_is_exact() {
        let ld = log_data(&make_schlicht(&Family::Koebe, 64).unwrap()).unwrap();
        let t = tauber_decomposition_check(&ld, 10, 0.7).unwrap();
        assert_eq!(t.residual, 0.0);
        assert!(tauber_decomposition_check(&ld, 1, 0.7).is_err());
        assert!(tauber_decomposition_check(&ld, 10, 1.0).is_err());
    }

    #[test]
    fn uniform_gap_cases() {
        let limit = vec![1.0, 0.5, 0.0];
        let same = uniform_gap(&[limit.clone(), limit.clone()], &limit).unwrap();
        assert!(same.sup_gaps.iter().all(|g| *g == 0.0) && same.dini_ok);
        assert!(matches!(
            uniform_gap(&[vec![0.0, 1.0, 0.0]], &limit),
            Err(TauberError::NotMonotone { row: 0, index: 1 })
        ));
    }

    #[test]
    fn euler_bracket_values() {
        let b = euler_bracket(1).unwrap();
        assert!((b.lower - 0.25).abs() < 1e-15 && (b.upper - 0.5).abs() < 1e-15);
        assert!(b.ok);
        let b = euler_bracket(10).unwrap();
        assert!((b.lower - 0.350494).abs() < 1e-6 && (b.upper - 0.385543).abs() < 1e-6);
        let b = euler_bracket(1000).unwrap();
        assert!(b.ok && b.upper - b.lower < 4e-4);
    }
}

//! Grunsky coefficients of `g(z) = z + b_0 + Σ b_n z^{-n}`.
//!
//! With `log((g(z)-g(w))/(z-w)) = -Σ γ_{nk} z^{-n} w^{-k}` the Faber
//! polynomials satisfy `F_n(g(z)) = z^n + n Σ_k γ_{nk} z^{-k}`, and are
//! generated by
//!
//! `F_{n+1} = (g - b_0) F_n - Σ_{k=1}^{n-1} b_k F_{n-k} - (n+1) b_n`.
//!
//! Reading `γ_{nk}` for `n, k ≤ N` off the Laurent expansions needs
//! `b_1, ..., b_{2N-1}`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::families::{SchlichtFunction, SigmaFunction};
use crate::logmilin::{bazilevich_gap, LogData, LogMilinError};
use crate::series::{Complex, SeriesError};

const POWER_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GrunskyError {
    #[error("section of order {requested} needs b_1..b_{needed}, only {available} available")]
    InsufficientOrder {
        requested: usize,
        needed: usize,
        available: usize,
    },
    #[error("power iteration did not converge in {0} iterations")]
    PowerIterationStalled(usize),
    #[error("point {0} lies outside the open unit disk")]
    OutsideDisk(Complex),
    #[error(transparent)]
    LogMilin(#[from] LogMilinError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Finite section `γ_{nk}`, `1 ≤ n, k ≤ N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrunskyTable {
    pub order: usize,
    /// Row-major, `gamma_nk[n-1][k-1] = γ_{nk}`.
    pub gamma_nk: Vec<Vec<Complex>>,
}

impl GrunskyTable {
    /// `γ_{nk}` with one-based indices.
    pub fn get(&self, n: usize, k: usize) -> Complex {
        self.gamma_nk[n - 1][k - 1]
    }

    pub fn max_asymmetry(&self) -> f64 {
        let n = self.order;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..i {
                worst = worst.max((self.gamma_nk[i][j] - self.gamma_nk[j][i]).norm());
            }
        }
        worst
    }

    /// `A_n(z) = Σ_{k≤N} γ_{nk} z^k` for `n = 1..=N`.
    pub fn a_functions(&self, z: Complex) -> Vec<Complex> {
        self.gamma_nk
            .iter()
            .map(|row| {
                row.iter()
                    .rev()
                    .fold(Complex::new(0.0, 0.0), |acc, &g| (acc + g) * z)
            })
            .collect()
    }
}

/// Laurent polynomial with powers `-depth..=top`.
struct Laurent {
    depth: usize,
    c: Vec<Complex>,
}

impl Laurent {
    fn zeros(depth: usize, top: usize) -> Self {
        Laurent {
            depth,
            c: vec![Complex::new(0.0, 0.0); depth + top + 1],
        }
    }

    fn at(&self, power: isize) -> Complex {
        let i = power + self.depth as isize;
        if i < 0 || i as usize >= self.c.len() {
            Complex::new(0.0, 0.0)
        } else {
            self.c[i as usize]
        }
    }

    fn add_at(&mut self, power: isize, v: Complex) {
        let i = power + self.depth as isize;
        if i >= 0 && (i as usize) < self.c.len() {
            self.c[i as usize] += v;
        }
    }
}

pub fn grunsky_matrix(g: &SigmaFunction, order: usize) -> Result<GrunskyTable, GrunskyError> {
    let needed = (2 * order).saturating_sub(1);
    if needed > g.order() {
        return Err(GrunskyError::InsufficientOrder {
            requested: order,
            needed,
            available: g.order(),
        });
    }
    if order == 0 {
        return Ok(GrunskyTable {
            order,
            gamma_nk: Vec::new(),
        });
    }
    let depth = needed;
    let top = order;
    let b = |j: usize| g.tail[j - 1];
    // P_1 = g - b_0
    let mut p = Vec::with_capacity(order);
    let mut p1 = Laurent::zeros(depth, top);
    p1.add_at(1, Complex::new(1.0, 0.0));
    for j in 1..=depth {
        p1.add_at(-(j as isize), b(j));
    }
    p.push(p1);
    for n in 1..order {
        let mut next = Laurent::zeros(depth, top);
        let cur = &p[n - 1];
        for e in -(depth as isize)..=(n as isize) {
            let v = cur.at(e);
            if v == Complex::new(0.0, 0.0) {
                continue;
            }
            next.add_at(e + 1, v);
            for j in 1..=depth {
                let target = e - j as isize;
                if target < -(depth as isize) {
                    break;
                }
                next.add_at(target, v * b(j));
            }
        }
        for k in 1..n {
            let prev = &p[n - k - 1];
            let bk = b(k);
            for (dst, src) in next.c.iter_mut().zip(&prev.c) {
                *dst -= bk * src;
            }
        }
        next.add_at(0, -b(n) * (n + 1) as f64);
        p.push(next);
    }
    let gamma_nk = (1..=order)
        .map(|n| {
            (1..=order)
                .map(|k| p[n - 1].at(-(k as isize)) / n as f64)
                .collect()
        })
        .collect();
    Ok(GrunskyTable { order, gamma_nk })
}

type Matrix = Vec<Vec<Complex>>;

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut c = vec![vec![Complex::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            if aik == Complex::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                c[i][j] += aik * b[k][j];
            }
        }
    }
    c
}

fn mat_vec(a: &Matrix, v: &[Complex]) -> Vec<Complex> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

fn vec_norm(v: &[Complex]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest singular value of `B[k][j] = √(kj) γ_{kj}` by power iteration on
/// `M = B*B`.
///
/// Sections of full mappings have singular values spread densely up to 1,
/// where plain iteration creeps towards the top like `1 - c/k`. Step `s`
/// therefore applies `M^{2^s}`, obtained by repeated squaring, to a fixed
/// start vector and reads off the Rayleigh quotient of `M`.
pub fn strong_grunsky_norm(t: &GrunskyTable) -> Result<f64, GrunskyError> {
    let n = t.order;
    let b: Matrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| t.gamma_nk[i][j] * (((i + 1) * (j + 1)) as f64).sqrt())
                .collect()
        })
        .collect();
    if b.iter().flatten().all(|x| *x == Complex::new(0.0, 0.0)) {
        return Ok(0.0);
    }
    let m: Matrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| b[k][i].conj() * b[k][j]).sum())
                .collect()
        })
        .collect();
    let start: Vec<Complex> = (0..n)
        .map(|j| Complex::new(1.0 + 0.5 * (j as f64).sin(), 0.25 * (0.7 * j as f64).cos()))
        .collect();
    let mut power = m.clone();
    let mut sigma: f64 = -1.0;
    let max_iter = (10 * n).max(1);
    for _ in 0..max_iter {
        let mut v = mat_vec(&power, &start);
        let vn = vec_norm(&v);
        if vn == 0.0 {
            return Ok(0.0);
        }
        v.iter_mut().for_each(|x| *x /= vn);
        let mv = mat_vec(&m, &v);
        let rayleigh: Complex = v.iter().zip(&mv).map(|(x, y)| x.conj() * y).sum();
        let next = rayleigh.re.max(0.0).sqrt();
        if (next - sigma).abs() <= POWER_TOL * next {
            return Ok(next);
        }
        sigma = next;
        power = mat_mul(&power, &power);
        let scale = power.iter().flatten().map(|x| x.norm()).fold(0.0, f64::max);
        if scale == 0.0 || !scale.is_finite() {
            return Ok(sigma);
        }
        for i in 0..n {
            for j in 0..=i {
                let h = (power[i][j] + power[j][i].conj()) * (0.5 / scale);
                power[i][j] = h;
                power[j][i] = h.conj();
            }
        }
    }
    Err(GrunskyError::PowerIterationStalled(max_iter))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FullMappingDefect {
    /// `Σ_{n≤N} n|A_n(z)|²`.
    pub area_sum: f64,
    /// `|area_sum + log(1-|z|²)|`.
    pub defect: f64,
    /// `|Σ A_n(z) z^n - (2 log(f(z)/z) - log f'(z))|`.
    pub identity_residual: f64,
    /// Same with the weight `n` inside the sum; nonzero even for Koebe.
    pub weighted_identity_residual: f64,
}

pub fn full_mapping_defect(
    t: &GrunskyTable,
    ld: &LogData,
    f: &SchlichtFunction,
    z: Complex,
) -> Result<FullMappingDefect, GrunskyError> {
    if !(z.norm() < 1.0) {
        return Err(GrunskyError::OutsideDisk(z));
    }
    let a = t.a_functions(z);
    let area_sum: f64 = a
        .iter()
        .enumerate()
        .map(|(i, an)| (i + 1) as f64 * an.norm_sqr())
        .sum();
    let defect = (area_sum + (1.0 - z.norm_sqr()).ln()).abs();

    let mut plain = Complex::new(0.0, 0.0);
    let mut weighted = Complex::new(0.0, 0.0);
    let mut zn = Complex::new(1.0, 0.0);
    for (i, an) in a.iter().enumerate() {
        zn *= z;
        plain += an * zn;
        weighted += an * zn * (i + 1) as f64;
    }
    // 2 log(f/z) = 4 Σ γ_n z^n; log f' by series logarithm
    let two_log_quotient = ld
        .gamma
        .iter()
        .rev()
        .fold(Complex::new(0.0, 0.0), |acc, &g| acc * z + g)
        * 4.0;
    let log_derivative = f.series.derivative().log()?.eval_partial(z);
    let rhs = two_log_quotient - log_derivative;
    Ok(FullMappingDefect {
        area_sum,
        defect,
        identity_residual: (plain - rhs).norm(),
        weighted_identity_residual: (weighted - rhs).norm(),
    })
}

/// `|Σ_{k≤n_terms} k|γ_k - e^{-ikθ}/k|² + (1/2) log α|`.
pub fn lemma3_check(
    ld: &LogData,
    alpha: f64,
    theta: f64,
    n_terms: usize,
) -> Result<f64, GrunskyError> {
    Ok(bazilevich_gap(ld, alpha, theta, n_terms)?.gap.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{invert_to_sigma, make_schlicht, Family};
    use crate::logmilin::log_data;

    fn sigma_of(family: Family, fo: usize, go: usize) -> (SchlichtFunction, SigmaFunction) {
        let f = make_schlicht(&family, fo).unwrap();
        let g = invert_to_sigma(&f, go).unwrap();
        (f, g)
    }

    #[test]
    fn koebe_table_is_diagonal() {
        let (_, g) = sigma_of(Family::Koebe, 130, 127);
        let t = grunsky_matrix(&g, 64).unwrap();
        for n in 1..=64 {
            for k in 1..=64 {
                let want = if n == k { 1.0 / n as f64 } else { 0.0 };
                assert!(
                    (t.get(n, k) - Complex::new(want, 0.0)).norm() < 1e-12,
                    "{n},{k}"
                );
            }
        }
        let norm = strong_grunsky_norm(&t).unwrap();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn halfplane_table_is_zero() {
        let (_, g) = sigma_of(Family::Halfplane, 40, 31);
        let t = grunsky_matrix(&g, 16).unwrap();
        assert!(t.gamma_nk.iter().flatten().all(|x| x.norm() < 1e-14));
        assert_eq!(strong_grunsky_norm(&t).unwrap(), 0.0);
    }

    #[test]
    fn order_precondition() {
        let (_, g) = sigma_of(Family::Koebe, 40, 30);
        assert!(grunsky_matrix(&g, 15).is_ok());
        assert!(matches!(
            grunsky_matrix(&g, 16),
            Err(GrunskyError::InsufficientOrder { needed: 31, .. })
        ));
    }

    #[test]
    fn koebe_defect_and_identity() {
        let (f, g) = sigma_of(Family::Koebe, 130, 127);
        let t = grunsky_matrix(&g, 64).unwrap();
        let ld = log_data(&f).unwrap();
        let d = full_mapping_defect(&t, &ld, &f, Complex::new(0.5, 0.0)).unwrap();
        assert!((d.area_sum + 0.75f64.ln()).abs() < 1e-10);
        assert!(d.defect < 1e-10);
        assert!(d.identity_residual < 1e-12);
        assert!(d.weighted_identity_residual > 1e-2);
        assert!(matches!(
            full_mapping_defect(&t, &ld, &f, Complex::new(1.0, 0.0)),
            Err(GrunskyError::OutsideDisk(_))
        ));
    }

    #[test]
    fn lemma3_koebe() {
        let f = make_schlicht(&Family::Koebe, 64).unwrap();
        let ld = log_data(&f).unwrap();
        assert_eq!(lemma3_check(&ld, 1.0, 0.0, 60).unwrap(), 0.0);
        assert!(lemma3_check(&ld, -1.0, 0.0, 60).is_err());
    }
}

//! Truncated complex power series.
//!
//! A [`ComplexSeries`] of order `N` stores `c_0, ..., c_N` and stands for
//! `c_0 + c_1 z + ... + c_N z^N + O(z^{N+1})`. Binary operations truncate at
//! the smaller of the two operand orders; nothing is ever silently extended.
//!
//! The transcendental maps use the power-series derivative recurrences
//! (`s·g' = s'` for the logarithm, `e' = g'·e` for the exponential and
//! Miller's formula `s·q' = ½·s'·q` for the square root), all `O(N²)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Scalar field of every coefficient in this crate.
pub type Complex = Complex64;

/// Allowed distance of the constant term from 1 for `log` and `sqrt`.
pub const NORMALIZATION_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("division by a series with zero constant term")]
    DivisionByZeroConstantTerm,
    #[error("constant term {0} is not 1 (log/sqrt need the normalized branch)")]
    UnnormalizedConstantTerm(Complex),
    #[error("inner series of a composition must vanish at 0, got constant term {0}")]
    InnerConstantTermNonzero(Complex),
    #[error("non-finite coefficient at index {0}")]
    NonFinite(usize),
    #[error("a series needs at least one coefficient")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transcendental {
    Log,
    Exp,
    Sqrt,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexSeries {
    coeffs: Vec<Complex>,
}

impl ComplexSeries {
    /// Builds a series from its coefficients; the order is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<Complex>) -> Result<Self, SeriesError> {
        if coeffs.is_empty() {
            return Err(SeriesError::Empty);
        }
        if let Some(i) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(SeriesError::NonFinite(i));
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self, SeriesError> {
        Self::new(coeffs.iter().map(|&x| Complex::new(x, 0.0)).collect())
    }

    /// Series whose `j`-th coefficient is `f(j)`, `j = 0..=order`.
    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Complex) -> Result<Self, SeriesError> {
        Self::new((0..=order).map(f).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![Complex::new(0.0, 0.0); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Complex::new(1.0, 0.0);
        s
    }

    /// The series `z` truncated at `order` (which must be at least 1).
    pub fn identity(order: usize) -> Self {
        let mut s = Self::zero(order.max(1));
        s.coeffs[1] = Complex::new(1.0, 0.0);
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex> {
        self.coeffs
    }

    /// Coefficient of `z^j`; zero beyond the stored order is *not* implied,
    /// so out-of-range access panics like slice indexing.
    pub fn coeff(&self, j: usize) -> Complex {
        self.coeffs[j]
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        Self {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    pub fn scale(&self, c: Complex) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self {
            coeffs: (0..=n).map(|j| self.coeffs[j] + other.coeffs[j]).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self {
            coeffs: (0..=n).map(|j| self.coeffs[j] - other.coeffs[j]).collect(),
        }
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let a = &self.coeffs;
        let b = &other.coeffs;
        let coeffs = (0..=n)
            .map(|j| (0..=j).map(|i| a[i] * b[j - i]).sum())
            .collect();
        Self { coeffs }
    }

    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        let b0 = other.coeffs[0];
        if b0 == Complex::new(0.0, 0.0) {
            return Err(SeriesError::DivisionByZeroConstantTerm);
        }
        let n = self.order().min(other.order());
        let b = &other.coeffs;
        let mut q: Vec<Complex> = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let acc: Complex = (1..=j).map(|k| b[k] * q[j - k]).sum();
            q.push((self.coeffs[j] - acc) / b0);
        }
        Self::new(q)
    }

    pub fn arith(op: ArithOp, a: &Self, b: &Self) -> Result<Self, SeriesError> {
        match op {
            ArithOp::Add => Ok(a.add(b)),
            ArithOp::Sub => Ok(a.sub(b)),
            ArithOp::Mul => Ok(a.mul(b)),
            ArithOp::Div => a.div(b),
        }
    }

    /// Formal derivative; the order drops by one (a constant stays order 0).
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        Self {
            coeffs: (1..=self.order())
                .map(|j| self.coeffs[j] * j as f64)
                .collect(),
        }
    }

    /// Coefficients shifted down by `k`: `(s - c_0 - ... - c_{k-1} z^{k-1}) / z^k`.
    pub fn shift_down(&self, k: usize) -> Self {
        assert!(k <= self.order(), "cannot shift below order 0");
        Self {
            coeffs: self.coeffs[k..].to_vec(),
        }
    }

    fn check_normalized(&self) -> Result<(), SeriesError> {
        let c0 = self.coeffs[0];
        if (c0 - Complex::new(1.0, 0.0)).norm() > NORMALIZATION_TOL {
            return Err(SeriesError::UnnormalizedConstantTerm(c0));
        }
        Ok(())
    }

    /// `log s` on the branch with `log s(0) = log c_0 ≈ 0`.
    pub fn log(&self) -> Result<Self, SeriesError> {
        self.check_normalized()?;
        let s = &self.coeffs;
        let n = self.order();
        let mut g = vec![Complex::new(0.0, 0.0); n + 1];
        g[0] = s[0].ln();
        for j in 1..=n {
            let acc: Complex = (1..j).map(|k| g[k] * (k as f64) * s[j - k]).sum();
            g[j] = (s[j] * (j as f64) - acc) / (s[0] * j as f64);
        }
        Self::new(g)
    }

    pub fn exp(&self) -> Result<Self, SeriesError> {
        let g = &self.coeffs;
        let n = self.order();
        let mut e = vec![Complex::new(0.0, 0.0); n + 1];
        e[0] = g[0].exp();
        for j in 1..=n {
            let acc: Complex = (1..=j).map(|k| g[k] * (k as f64) * e[j - k]).sum();
            e[j] = acc / j as f64;
        }
        Self::new(e)
    }

    /// Square root with constant term `+√c_0 ≈ 1`.
    pub fn sqrt(&self) -> Result<Self, SeriesError> {
        self.check_normalized()?;
        let s = &self.coeffs;
        let n = self.order();
        let mut q = vec![Complex::new(0.0, 0.0); n + 1];
        q[0] = s[0].sqrt();
        for j in 1..=n {
            let acc: Complex = (1..=j)
                .map(|k| s[k] * q[j - k] * (0.5 * k as f64 - (j - k) as f64))
                .sum();
            q[j] = acc / (s[0] * j as f64);
        }
        Self::new(q)
    }

    pub fn transcend(kind: Transcendental, s: &Self) -> Result<Self, SeriesError> {
        match kind {
            Transcendental::Log => s.log(),
            Transcendental::Exp => s.exp(),
            Transcendental::Sqrt => s.sqrt(),
        }
    }

    /// `outer(inner(z))` truncated at the common order, by Horner's scheme.
    pub fn compose(outer: &Self, inner: &Self) -> Result<Self, SeriesError> {
        let c0 = inner.coeffs[0];
        if c0 != Complex::new(0.0, 0.0) {
            return Err(SeriesError::InnerConstantTermNonzero(c0));
        }
        let n = outer.order().min(inner.order());
        let inner = inner.truncate(n);
        let mut acc = Self::zero(n);
        for j in (0..=n).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] += outer.coeffs[j];
        }
        Self::new(acc.coeffs)
    }

    /// `Σ_{j≤order} a_j φ(z)^j` for the disk automorphism `φ(z) = (z+w)/(1+w̄z)`,
    /// truncated at `order`.
    ///
    /// Multiplication by `φ` costs `O(order)` (one linear factor and one
    /// stable first-order division since `|w| < 1`), so the whole evaluation
    /// is `O(len(outer)·order)`. The outer series is usually much longer than
    /// `order`: the composite's `z^j` coefficient receives contributions from
    /// every `a_n` with `n ≥ j`.
    pub fn compose_mobius(outer: &Self, w: Complex, order: usize) -> Self {
        let wc = w.conj();
        let times_phi = |h: &[Complex]| -> Vec<Complex> {
            let mut num = vec![Complex::new(0.0, 0.0); order + 1];
            for j in 0..=order {
                num[j] = h[j] * w
                    + if j > 0 {
                        h[j - 1]
                    } else {
                        Complex::new(0.0, 0.0)
                    };
            }
            for j in 1..=order {
                let prev = num[j - 1];
                num[j] -= wc * prev;
            }
            num
        };
        let mut h = vec![Complex::new(0.0, 0.0); order + 1];
        for &a in outer.coeffs.iter().rev() {
            h = times_phi(&h);
            h[0] += a;
        }
        Self { coeffs: h }
    }

    /// Exact partial sum `Σ_{j≤N} c_j z^j`.
    pub fn eval_partial(&self, z: Complex) -> Complex {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Largest coefficientwise distance over the common order.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

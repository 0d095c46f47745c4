//! Grunsky sections against a bivariate logarithm and a dense SVD.

use nalgebra::DMatrix;
use schlicht_core::families::{
    invert_to_sigma, make_schlicht, standard_corpus, Family, SigmaFunction,
};
use schlicht_core::grunsky::{grunsky_matrix, strong_grunsky_norm};
use schlicht_core::series::Complex;

type Bivariate = Vec<Vec<Complex>>;

fn zero(d: usize) -> Bivariate {
    vec![vec![Complex::new(0.0, 0.0); d + 1]; d + 1]
}

fn mul(a: &Bivariate, b: &Bivariate, d: usize) -> Bivariate {
    let mut c = zero(d);
    for i in 0..=d {
        for j in 0..=d - i {
            if a[i][j] == Complex::new(0.0, 0.0) {
                continue;
            }
            for p in 0..=d - i - j {
                for q in 0..=d - i - j - p {
                    c[i + p][j + q] += a[i][j] * b[p][q];
                }
            }
        }
    }
    c
}

/// `γ_{nk} = -[x^n y^k] log Q` with `Q(x, y) = (g(1/x) - g(1/y))/(1/x - 1/y)`
/// `= 1 - Σ_n b_n Σ_{i+j=n-1} x^{i+1} y^{j+1}`.
fn bivariate_grunsky(g: &SigmaFunction, order: usize) -> Vec<Vec<Complex>> {
    let d = 2 * order;
    let mut u = zero(d);
    for n in 1..d {
        for i in 0..n {
            let j = n - 1 - i;
            if i + 1 + j + 1 <= d {
                u[i + 1][j + 1] += g.b(n);
            }
        }
    }
    // -log(1 - u) = Σ u^m/m; u has total degree ≥ 2
    let mut acc = zero(d);
    let mut power = u.clone();
    for m in 1..=d / 2 {
        for i in 0..=d {
            for j in 0..=d - i {
                acc[i][j] += power[i][j] / m as f64;
            }
        }
        power = mul(&power, &u, d);
    }
    (1..=order)
        .map(|n| (1..=order).map(|k| acc[n][k]).collect())
        .collect()
}

fn oracle_members() -> Vec<Family> {
    vec![
        Family::rotation(0.8, Family::Koebe),
        Family::koebe_transform(Complex::from_polar(0.3, std::f64::consts::FRAC_PI_4)),
        Family::koebe_transform(Complex::new(-0.2, 0.35)),
        Family::dilation(0.9, Family::Koebe),
        Family::rotation(0.7, Family::Halfplane),
        Family::Custom {
            coeffs: vec![
                Complex::new(0.0, 0.0),
                Complex::new(1.0, 0.0),
                Complex::new(0.3, -0.2),
                Complex::new(0.1, 0.05),
                Complex::new(-0.04, 0.0),
                Complex::new(0.0, 0.02),
                Complex::new(0.01, 0.0),
                Complex::new(0.0, 0.0),
                Complex::new(0.002, 0.0),
                Complex::new(0.0, 0.0),
                Complex::new(0.0, 0.0),
                Complex::new(0.0, 0.0),
                Complex::new(0.0, 0.0),
                Complex::new(0.0, 0.0),
                Complex::new(0.0, 0.0),
                Complex::new(0.0, 0.0),
                Complex::new(0.0, 0.0),
                Complex::new(0.0, 0.0),
            ],
        },
    ]
}

#[test]
fn faber_recurrence_matches_bivariate_logarithm() {
    let order = 8;
    for family in oracle_members() {
        let f = make_schlicht(&family, 17).unwrap();
        let g = invert_to_sigma(&f, 15).unwrap();
        let table = grunsky_matrix(&g, order).unwrap();
        let oracle = bivariate_grunsky(&g, order);
        for n in 1..=order {
            for k in 1..=order {
                let diff = (table.get(n, k) - oracle[n - 1][k - 1]).norm();
                assert!(diff < 1e-12, "{family:?} ({n},{k}): {diff}");
            }
        }
    }
}

#[test]
fn rotated_koebe_diagonal_pattern() {
    // 1/f(1/z) = z - 2e^{iθ} + e^{2iθ}/z, so γ_{nn} = e^{2inθ}/n
    let theta = 0.8;
    let f = make_schlicht(&Family::rotation(theta, Family::Koebe), 40).unwrap();
    let g = invert_to_sigma(&f, 31).unwrap();
    let table = grunsky_matrix(&g, 16).unwrap();
    for n in 1..=16 {
        for k in 1..=16 {
            let want = if n == k {
                Complex::from_polar(1.0 / n as f64, 2.0 * n as f64 * theta)
            } else {
                Complex::new(0.0, 0.0)
            };
            assert!((table.get(n, k) - want).norm() < 1e-12, "({n},{k})");
        }
    }
}

#[test]
fn power_iteration_matches_dense_svd() {
    for order in [4usize, 8, 16] {
        for m in standard_corpus() {
            let f = make_schlicht(&m.family, 2 * order + 2).unwrap();
            let g = invert_to_sigma(&f, 2 * order - 1).unwrap();
            let t = grunsky_matrix(&g, order).unwrap();
            let b = DMatrix::from_fn(order, order, |i, j| {
                t.gamma_nk[i][j] * (((i + 1) * (j + 1)) as f64).sqrt()
            });
            let dense = b.singular_values().max();
            let power = strong_grunsky_norm(&t).unwrap();
            assert!(
                (dense - power).abs() <= 1e-8,
                "{} N={order}: {dense} vs {power}",
                m.name
            );
            assert!(power <= 1.0 + 1e-9);
        }
    }
}

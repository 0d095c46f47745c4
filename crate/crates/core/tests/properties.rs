use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use schlicht_core::families::{make_schlicht, Family};
use schlicht_core::logmilin::log_data;
use schlicht_core::series::{Complex, ComplexSeries};
use schlicht_core::tauber::{abel_mean, cesaro_mean, weighted_mean, DeviationSurface};

/// `1 + Σ c_j z^j` with `|c_j| ≤ 2ρ^j`, `ρ ≤ 0.3`: coefficients bounded by 2
/// and no zeros in the closed disk.
fn random_normalized(rng: &mut ChaCha8Rng, order: usize) -> ComplexSeries {
    let rho: f64 = rng.random_range(0.2..0.3);
    ComplexSeries::from_fn(order, |j| {
        if j == 0 {
            Complex::new(1.0, 0.0)
        } else {
            let r = 2.0 * rho.powi(j as i32) * rng.random::<f64>().sqrt();
            Complex::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU))
        }
    })
    .unwrap()
}

#[test]
fn seeded_exp_log_and_sqrt_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..100 {
        let s = random_normalized(&mut rng, 64);
        let back = s.log().unwrap().exp().unwrap();
        assert!(back.max_abs_diff(&s) <= 1e-12);
        let r = s.sqrt().unwrap();
        assert!(r.mul(&r).max_abs_diff(&s) <= 1e-12);
    }
}

fn coeffs(max_len: usize) -> impl Strategy<Value = Vec<Complex>> {
    prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..max_len)
        .prop_map(|v| v.into_iter().map(|(a, b)| Complex::new(a, b)).collect())
}

fn series(v: Vec<Complex>, order: usize) -> ComplexSeries {
    let mut v = v;
    v.resize(order + 1, Complex::new(0.0, 0.0));
    ComplexSeries::new(v).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(a in coeffs(33), b in coeffs(33), c in coeffs(33)) {
        let n = 32;
        let (a, b, c) = (series(a, n), series(b, n), series(c, n));
        prop_assert!(a.mul(&b).max_abs_diff(&b.mul(&a)) <= 1e-12);
        let scale = 1e-12 * 64.0;
        prop_assert!(a.mul(&b).mul(&c).max_abs_diff(&a.mul(&b.mul(&c))) <= scale * 64.0);
        prop_assert!(a.mul(&b.add(&c)).max_abs_diff(&a.mul(&b).add(&a.mul(&c))) <= scale);
    }

    #[test]
    fn compose_scaling(a in coeffs(40), r in 0.05f64..0.95) {
        let s = series(a, 39);
        let inner = ComplexSeries::from_fn(39, |j| if j == 1 { Complex::new(r, 0.0) } else { Complex::new(0.0, 0.0) }).unwrap();
        let c = ComplexSeries::compose(&s, &inner).unwrap();
        for j in 0..=39 {
            prop_assert!((c.coeff(j) - s.coeff(j) * r.powi(j as i32)).norm() <= 1e-14);
        }
    }

    #[test]
    fn weighted_mean_is_cesaro_of_partial_sums(v in prop::collection::vec(-1.0f64..1.0, 1..257)) {
        for n in (0..v.len()).step_by(7) {
            let w = weighted_mean(&v, n).unwrap();
            let c = cesaro_mean(&v, n).unwrap();
            prop_assert!((w - c).abs() <= 1e-12);
        }
    }

    #[test]
    fn tail_sup_is_non_increasing(d in prop::collection::vec(prop::collection::vec(0.0f64..1.0, 6), 1..6)) {
        let m: Vec<usize> = (1..=d.len()).map(|i| 3 * i).collect();
        let n: Vec<usize> = (0..6).map(|j| 2 * j + 1).collect();
        let s = DeviationSurface::new(m, n, d).unwrap();
        for t in [s.tail_sup(), s.tail_sup_columns()] {
            prop_assert!(t.windows(2).all(|w| w[1] <= w[0]));
        }
    }
}

#[test]
fn seeded_weighted_cesaro_identity_up_to_256() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let v: Vec<f64> = (0..=256).map(|_| rng.random_range(-5.0..5.0)).collect();
        for n in 0..=256 {
            let w = weighted_mean(&v, n).unwrap();
            let c = cesaro_mean(&v, n).unwrap();
            assert!((w - c).abs() <= 1e-12, "n={n}");
        }
    }
}

#[test]
fn koebe_abel_mean_of_lambda_vanishes() {
    let ld = log_data(&make_schlicht(&Family::Koebe, 257).unwrap()).unwrap();
    let lambda: Vec<f64> = ld.lambda.iter().map(|l| l.re).collect();
    for r in [0.1, 0.5, 0.75, 0.9] {
        assert!(abel_mean(&lambda, r).unwrap().abs() <= 1e-10);
    }
}

#[test]
fn ledger_weighted_mean_matches_direct_sum() {
    let f = make_schlicht(
        &Family::koebe_transform(Complex::from_polar(0.3, std::f64::consts::FRAC_PI_4)),
        128,
    )
    .unwrap();
    let ld = log_data(&f).unwrap();
    let a: Vec<f64> = (0..=ld.order())
        .map(|k| {
            if k == 0 {
                0.0
            } else {
                2.0 * (ld.gamma[k].re - 1.0 / k as f64)
            }
        })
        .collect();
    for n in [1usize, 10, 64, 127] {
        let direct: f64 = (1..=n)
            .map(|k| (n + 1 - k) as f64 * (ld.gamma[k].re - 1.0 / k as f64))
            .sum::<f64>()
            * 2.0
            / (n + 1) as f64;
        assert!((weighted_mean(&a, n).unwrap() - direct).abs() <= 1e-12);
    }
}

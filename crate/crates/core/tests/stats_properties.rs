mod common;

use graphon_motifs::stats::{
    correlation, ks_test, mean, normal_cdf, se_mean, se_variance, skewness, standardize,
    variance, variance_ratio,
};
use proptest::prelude::*;
use rand::Rng;
use rand_distr::{Distribution, Exp, Normal};

use common::*;

fn normals(count: usize, sd: f64, seed: u64) -> Vec<f64> {
    let dist = Normal::new(0.0, sd).unwrap();
    let mut r = rng(seed);
    (0..count).map(|_| dist.sample(&mut r)).collect()
}

/// `sup |F̂ − Φ|` from the left and right limits of the empirical
/// distribution function at each sample point.
fn grid_ks(samples: &[f64]) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for &x in &sorted {
        let below = sorted.partition_point(|&y| y < x) as f64 / n;
        let at = sorted.partition_point(|&y| y <= x) as f64 / n;
        d = d.max((at - normal_cdf(x)).abs()).max((normal_cdf(x) - below).abs());
    }
    d
}

#[test]
fn normal_cdf_reference_values() {
    for (x, want) in [
        (0.0, 0.5),
        (1.0, 0.8413447460685429),
        (2.0, 0.9772498680518208),
        (-3.0, 0.0013498980316301),
        (-1.959963984540054, 0.025),
    ] {
        assert!((normal_cdf(x) - want).abs() <= 1e-10, "{x}: {}", normal_cdf(x));
    }
    assert!((normal_cdf(1.959964) - 0.975).abs() <= 1e-6);
    let grid: Vec<f64> = (0..10_000).map(|i| -10.0 + i as f64 / 500.0).collect();
    assert!(grid.windows(2).all(|p| normal_cdf(p[0]) <= normal_cdf(p[1])));
    assert!(grid.iter().all(|&x| (normal_cdf(x) + normal_cdf(-x) - 1.0).abs() <= 1e-12));
}

#[test]
fn ks_accepts_normals_and_rejects_uniforms() {
    let z = normals(10_000, 1.0, 1);
    let report = ks_test(&z).unwrap();
    assert!(report.ks_statistic < 0.02, "{}", report.ks_statistic);
    assert!(report.mean.abs() < 0.05 && (report.sd - 1.0).abs() < 0.05);
    let mut r = rng(2);
    let u: Vec<f64> = (0..10_000).map(|_| r.random::<f64>()).collect();
    assert!(ks_test(&u).unwrap().ks_statistic > 0.2);
}

#[test]
fn ks_detects_skew() {
    let dist = Exp::new(1.0).unwrap();
    let mut r = rng(3);
    let raw: Vec<f64> = (0..5000).map(|_| dist.sample(&mut r)).collect();
    let z = standardize(&raw, mean(&raw), variance(&raw).sqrt()).unwrap();
    let report = ks_test(&z).unwrap();
    assert!(report.skewness > 1.5);
    assert!(report.ks_statistic > 0.05);
}

#[test]
fn ks_preconditions() {
    assert!(ks_test(&normals(49, 1.0, 4)).is_err());
    assert_eq!(ks_test(&[0.0; 50]).unwrap().ks_statistic, 0.5);
    let mut z = normals(60, 1.0, 4);
    z[3] = f64::NAN;
    assert!(ks_test(&z).is_err());
}

#[test]
fn synthetic_variance_ratio() {
    let d1 = normals(100_000, 3f64.sqrt(), 5);
    let d2 = normals(100_000, 1.0, 6);
    let (r1, r2) = variance_ratio(&d1, &d2).unwrap();
    assert!((r1 - 0.75).abs() < 0.01);
    assert!((r1 + r2 - 1.0).abs() < 1e-15);
    assert!(variance_ratio(&d1[..99], &d2[..99]).is_err());
    assert!(variance_ratio(&d1[..200], &d2[..150]).is_err());
    assert!(variance_ratio(&[0.0; 200], &[0.0; 200]).is_err());
    assert_eq!(variance_ratio(&d1[..200], &[0.0; 200]).unwrap(), (1.0, 0.0));
}

#[test]
fn standard_errors_match_replication() {
    let batches: Vec<Vec<f64>> = (0..400).map(|s| normals(200, 2.0, 100 + s)).collect();
    let means: Vec<f64> = batches.iter().map(|b| mean(b)).collect();
    let vars: Vec<f64> = batches.iter().map(|b| variance(b)).collect();
    let se_m = batches.iter().map(|b| se_mean(b)).sum::<f64>() / 400.0;
    let se_v = batches.iter().map(|b| se_variance(b)).sum::<f64>() / 400.0;
    assert!((variance(&means).sqrt() / se_m - 1.0).abs() < 0.1);
    assert!((variance(&vars).sqrt() / se_v - 1.0).abs() < 0.15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ks_matches_step_function_scan(seed in any::<u64>(), count in 50usize..300, shift in -1.0f64..1.0) {
        let z: Vec<f64> = normals(count, 1.0, seed).into_iter().map(|x| (x + shift).round() / 2.0 + x * 0.5).collect();
        let got = ks_test(&z).unwrap().ks_statistic;
        prop_assert!((got - grid_ks(&z)).abs() < 1e-12);
    }

    #[test]
    fn ks_is_permutation_invariant(seed in any::<u64>(), perm_seed in any::<u64>()) {
        let z = normals(120, 1.3, seed);
        let mut shuffled = z.clone();
        let mut r = rng(perm_seed);
        for i in (1..shuffled.len()).rev() {
            shuffled.swap(i, r.random_range(0..=i));
        }
        prop_assert_eq!(ks_test(&z).unwrap().ks_statistic, ks_test(&shuffled).unwrap().ks_statistic);
    }

    #[test]
    fn ratio_is_a_split(seed in any::<u64>(), s1 in 0.1f64..5.0, s2 in 0.1f64..5.0) {
        let d1 = normals(150, s1, seed);
        let d2 = normals(150, s2, seed ^ 1);
        let (r1, r2) = variance_ratio(&d1, &d2).unwrap();
        prop_assert!((r1 + r2 - 1.0).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&r1));
        let (q1, q2) = variance_ratio(&d2, &d1).unwrap();
        prop_assert!((q1 - r2).abs() < 1e-12 && (q2 - r1).abs() < 1e-12);
    }

    #[test]
    fn standardize_gives_unit_moments(seed in any::<u64>(), loc in -50.0f64..50.0, sd in 0.1f64..20.0) {
        let raw: Vec<f64> = normals(200, sd, seed).into_iter().map(|x| x + loc).collect();
        let z = standardize(&raw, mean(&raw), variance(&raw).sqrt()).unwrap();
        prop_assert!(mean(&z).abs() < 1e-12);
        prop_assert!((variance(&z) - 1.0).abs() < 1e-12);
        prop_assert!((skewness(&z) - skewness(&raw)).abs() < 1e-9);
        prop_assert!((correlation(&raw, &z) - 1.0).abs() < 1e-10);
    }
}

#[test]
fn standardize_rejects_bad_scale() {
    assert!(standardize(&[1.0, 2.0], 0.0, 0.0).is_err());
    assert!(standardize(&[1.0, 2.0], 0.0, f64::NAN).is_err());
}

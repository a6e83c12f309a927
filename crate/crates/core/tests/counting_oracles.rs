mod common;

use graphon_motifs::counting::{
    conditional_expected_count, conditional_variance, count, count_generic, count_sampled,
    decompose, exact_variance, expected_count, ustat_t,
};
use graphon_motifs::graphon::{hom_density, StepGraphon};
use graphon_motifs::motif::Motif;
use graphon_motifs::sampler::{derive_seed, sample};
use rand::Rng;

use common::*;

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[test]
fn fast_paths_agree_with_generic_and_brute_counts() {
    let edge = Motif::complete(2);
    let triangle = Motif::complete(3);
    for i in 0..200u64 {
        let n = 5 + (i % 20) as usize;
        let g = random_graph(n, 0.1 + 0.8 * (i % 7) as f64 / 7.0, i);
        assert_eq!(count(&g, &edge), count_generic(&g, &edge));
        assert_eq!(count(&g, &triangle), count_generic(&g, &triangle));
        if n <= 9 {
            for m in [&edge, &triangle, &Motif::path(3), &Motif::cycle(4), &Motif::named("fig1b").unwrap()] {
                assert_eq!(count(&g, m), brute_count(&g, m), "{m:?}");
            }
        }
    }
}

#[test]
fn sampled_counts_match_graph_counts() {
    let w = StepGraphon::w_asym();
    for seed in 0..20 {
        let g = sample(&w, 60, 0.3, seed).unwrap();
        for m in [Motif::complete(2), Motif::complete(3), Motif::path(3)] {
            assert_eq!(count_sampled(&g, &m), count_generic(&g.graph(), &m));
        }
    }
}

#[test]
fn conditional_expectation_averages_to_expectation() {
    let (n, rho) = (40usize, 0.3);
    let mut r = rng(8);
    for w in [StepGraphon::w_sym(), StepGraphon::w_asym(), random_graphon(3, 2)] {
        for m in [Motif::complete(2), Motif::path(3), Motif::complete(3), Motif::cycle(4)] {
            let draws: Vec<f64> = (0..10_000)
                .map(|_| {
                    let latents: Vec<f64> = (0..n).map(|_| r.random::<f64>()).collect();
                    conditional_expected_count(&latents, &m, &w, rho).unwrap()
                })
                .collect();
            let (mean, se) = mean_and_se(&draws);
            let exact = expected_count(&m, &w, n as u64, rho).unwrap();
            assert!((mean - exact).abs() <= 4.0 * se, "{m:?}: {mean} vs {exact} (se {se})");
        }
    }
}

#[test]
fn constant_graphon_has_no_label_part() {
    let w = StepGraphon::constant(0.35).unwrap();
    for seed in 0..10 {
        let g = sample(&w, 80, 0.5, seed).unwrap();
        for m in [Motif::complete(2), Motif::complete(3), Motif::path(4)] {
            assert_eq!(decompose(&g, &m, &w).unwrap().delta2, 0.0);
        }
    }
}

#[test]
fn mean_count_matches_expectation() {
    let (n, rho, reps) = (120usize, 0.3, 400u64);
    for w in [StepGraphon::w_sym(), StepGraphon::w_asym()] {
        for m in [Motif::complete(2), Motif::complete(3)] {
            let xs: Vec<f64> = (0..reps)
                .map(|r| count_sampled(&sample(&w, n, rho, derive_seed(21, r)).unwrap(), &m) as f64)
                .collect();
            let (mean, se) = mean_and_se(&xs);
            let exact = expected_count(&m, &w, n as u64, rho).unwrap();
            assert!((mean - exact).abs() <= 4.0 * se, "{m:?}: {mean} vs {exact} (se {se})");
        }
    }
}

#[test]
fn label_part_is_a_scaled_u_statistic() {
    let w = StepGraphon::w_asym();
    for seed in 0..10 {
        let g = sample(&w, 30, 0.4, seed).unwrap();
        for m in [Motif::complete(2), Motif::path(3), Motif::complete(3)] {
            let d = decompose(&g, &m, &w).unwrap();
            let k = m.vertex_count() as u32;
            let binom: f64 = (0..k).map(|i| (30 - i) as f64 / (i + 1) as f64).product();
            let scaled = binom * 0.4f64.powi(m.edge_count() as i32) * ustat_t(&g.latents, &m, &w).unwrap();
            assert!(rel_close(scaled, d.delta2, 1e-9), "{scaled} vs {}", d.delta2);
        }
    }
}

/// Full ordered pair loop over copies in `K_n`, with union densities from
/// the brute-force block sum.
fn brute_variance(m: &Motif, w: &StepGraphon, n: usize, rho: f64) -> f64 {
    let copies = copies_in_kn(m, n);
    let t = brute_density(m, w);
    let e = m.edge_count() as i32;
    let mut total = 0.0;
    for (va, ea) in &copies {
        for (vb, eb) in &copies {
            let mut union: Vec<(usize, usize)> = ea.iter().chain(eb).copied().collect();
            union.sort_unstable();
            union.dedup();
            let joint = rho.powi(union.len() as i32) * brute_density(&relabel_onto(va | vb, &union), w);
            total += joint - rho.powi(2 * e) * t * t;
        }
    }
    total
}

#[test]
fn exact_variance_matches_full_pair_loop() {
    for w in [StepGraphon::w_asym(), random_graphon(3, 9)] {
        for m in [Motif::complete(2), Motif::path(3), Motif::complete(3)] {
            for n in [3usize, 5, 6] {
                let got = exact_variance(&m, &w, n, 0.6).unwrap();
                let want = brute_variance(&m, &w, n, 0.6);
                assert!(rel_close(got, want, 1e-10), "{m:?} n={n}: {got} vs {want}");
            }
        }
    }
    assert!(exact_variance(&Motif::complete(2), &StepGraphon::w_asym(), 13, 0.5).is_err());
}

#[test]
fn exact_variance_matches_simulation() {
    let w = StepGraphon::w_asym();
    let m = Motif::path(3);
    let (n, rho, reps) = (10usize, 0.7, 40_000u64);
    let xs: Vec<f64> = (0..reps)
        .map(|r| count_sampled(&sample(&w, n, rho, derive_seed(31, r)).unwrap(), &m) as f64)
        .collect();
    let (mean, _) = mean_and_se(&xs);
    let centred: Vec<f64> = xs.iter().map(|x| (x - mean).powi(2)).collect();
    let (var, se) = mean_and_se(&centred);
    let exact = exact_variance(&m, &w, n, rho).unwrap();
    assert!((var - exact).abs() <= 4.0 * se, "{var} vs {exact} (se {se})");
}

#[test]
fn conditional_variance_matches_edge_resampling() {
    let w = StepGraphon::w_asym();
    let base = sample(&w, 9, 0.6, 4).unwrap();
    for m in [Motif::complete(2), Motif::path(3), Motif::complete(3)] {
        let xs: Vec<f64> = (0..40_000u64)
            .map(|r| count_sampled(&base.resample_edges(&w, derive_seed(12, r)), &m) as f64)
            .collect();
        let (mean, mean_se) = mean_and_se(&xs);
        let cond = conditional_expected_count(&base.latents, &m, &w, 0.6).unwrap();
        assert!((mean - cond).abs() <= 4.0 * mean_se);
        let centred: Vec<f64> = xs.iter().map(|x| (x - mean).powi(2)).collect();
        let (var, se) = mean_and_se(&centred);
        let exact = conditional_variance(&base.latents, &m, &w, 0.6).unwrap();
        assert!((var - exact).abs() <= 4.0 * se, "{m:?}: {var} vs {exact} (se {se})");
    }
}

#[test]
fn edge_and_label_parts_are_uncorrelated() {
    let w = StepGraphon::w_asym();
    let m = Motif::complete(3);
    let parts: Vec<(f64, f64)> = (0..2000u64)
        .map(|r| {
            let d = decompose(&sample(&w, 60, 0.4, derive_seed(41, r)).unwrap(), &m, &w).unwrap();
            (d.delta1, d.delta2)
        })
        .collect();
    let products: Vec<f64> = parts.iter().map(|(a, b)| a * b).collect();
    let (cov, se) = mean_and_se(&products);
    assert!(cov.abs() <= 4.0 * se, "{cov} (se {se})");
    let d1: Vec<f64> = parts.iter().map(|p| p.0).collect();
    let (mean1, se1) = mean_and_se(&d1);
    assert!(mean1.abs() <= 4.0 * se1);
}

#[test]
fn expectation_formula_on_small_cases() {
    let w = StepGraphon::w_asym();
    let t = hom_density(&Motif::complete(3), &w).unwrap();
    let got = expected_count(&Motif::complete(3), &w, 10, 0.5).unwrap();
    assert!(rel_close(got, 720.0 / 6.0 * 0.125 * t, 1e-14));
    assert!(expected_count(&Motif::complete(2), &w, 10, 1.5).is_err());
    assert_eq!(expected_count(&Motif::complete(3), &w, 2, 0.5).unwrap(), 0.0);
}

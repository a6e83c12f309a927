//! Splits the centred triangle count into its edge and label parts over a
//! batch of replicates and compares the exact small-n variance with the
//! simulated one.

use graphon_motifs::counting::{count_sampled, decompose, exact_variance};
use graphon_motifs::graphon::StepGraphon;
use graphon_motifs::motif::Motif;
use graphon_motifs::sampler::{derive_seed, sample};
use graphon_motifs::stats::{correlation, mean, variance, variance_ratio};

fn main() -> graphon_motifs::Result<()> {
    let w = StepGraphon::w_asym();
    let m = Motif::complete(3);
    let (n, rho) = (300, 0.1);
    let parts = (0..500u64)
        .map(|r| decompose(&sample(&w, n, rho, derive_seed(1, r))?, &m, &w))
        .collect::<graphon_motifs::Result<Vec<_>>>()?;
    let d1: Vec<f64> = parts.iter().map(|d| d.delta1).collect();
    let d2: Vec<f64> = parts.iter().map(|d| d.delta2).collect();
    let (r1, r2) = variance_ratio(&d1, &d2)?;
    println!("n = {n}, rho = {rho}: E[X] = {:.2}", parts[0].expected);
    println!("  var(delta1) = {:.2}, var(delta2) = {:.2}", variance(&d1), variance(&d2));
    println!("  shares r1 = {r1:.3}, r2 = {r2:.3}, corr = {:.3}", correlation(&d1, &d2));

    let small = 10;
    let xs = (0..20_000u64)
        .map(|r| Ok(count_sampled(&sample(&w, small, 0.7, derive_seed(2, r))?, &m) as f64))
        .collect::<graphon_motifs::Result<Vec<f64>>>()?;
    println!(
        "n = {small}, rho = 0.7: exact Var[X] = {:.4}, simulated {:.4} (mean {:.3})",
        exact_variance(&m, &w, small, 0.7)?,
        variance(&xs),
        mean(&xs)
    );
    Ok(())
}

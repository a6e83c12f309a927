//! Standardized triangle counts on a regular graphon in the edge-dominated
//! regime, with their distance to the normal law.

use graphon_motifs::experiments::{run_experiment, ExperimentConfig, ExperimentKind};
use graphon_motifs::graphon::StepGraphon;
use graphon_motifs::motif::Motif;
use graphon_motifs::sampler::SparsitySchedule;

fn main() -> graphon_motifs::Result<()> {
    let cfg = ExperimentConfig {
        motif: Motif::complete(3),
        graphon: StepGraphon::w_sym(),
        schedule: SparsitySchedule::new(1.0, 0.7)?,
        n_values: vec![400, 1600, 6400],
        replicates: 400,
        seed: 3,
        experiment_kind: ExperimentKind::Clt,
    };
    let result = run_experiment(&cfg, None)?;
    println!("regime {}", result.regime);
    for r in &result.records {
        let ks = r.normality_x.map_or(f64::NAN, |k| k.ks_statistic);
        println!(
            "  n = {:>4}  E[X] = {:>9.2}  mean X = {:>9.2}  KS(Z) = {ks:.4}  r2 = {:.4}",
            r.n,
            r.expected_count,
            r.mean_x,
            r.r2.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}

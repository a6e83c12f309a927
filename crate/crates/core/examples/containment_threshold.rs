//! The probability that a triangle appears, below and above the containment
//! threshold `n^(-1/m)`.

use graphon_motifs::experiments::{run_experiment, ExperimentConfig, ExperimentKind};
use graphon_motifs::graphon::StepGraphon;
use graphon_motifs::motif::Motif;
use graphon_motifs::sampler::SparsitySchedule;

fn main() -> graphon_motifs::Result<()> {
    for gamma in [1.3, 1.0, 0.7] {
        let cfg = ExperimentConfig {
            motif: Motif::complete(3),
            graphon: StepGraphon::w_sym(),
            schedule: SparsitySchedule::new(1.0, gamma)?,
            n_values: vec![100, 400, 1600],
            replicates: 200,
            seed: 11,
            experiment_kind: ExperimentKind::Containment,
        };
        let result = run_experiment(&cfg, None)?;
        println!("gamma = {gamma} ({})", result.regime);
        for r in &result.records {
            println!("  n = {:>5}  E[X] = {:>9.3}  P(X > 0) = {:.3}", r.n, r.expected_count, r.containment_fraction);
        }
    }
    Ok(())
}

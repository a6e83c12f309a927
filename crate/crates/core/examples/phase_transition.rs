//! Share of the label part in the edge-count variance on a non-regular
//! graphon as the sparsity exponent crosses `1/m₁`.

use graphon_motifs::experiments::{run_experiment, ExperimentConfig, ExperimentKind};
use graphon_motifs::graphon::StepGraphon;
use graphon_motifs::motif::Motif;
use graphon_motifs::sampler::SparsitySchedule;

fn main() -> graphon_motifs::Result<()> {
    println!("{:>6} {:>16} {:>8} {:>8}", "gamma", "regime", "n", "r2");
    for gamma in [0.25, 0.5, 0.75, 1.0, 1.25, 1.5] {
        let cfg = ExperimentConfig {
            motif: Motif::complete(2),
            graphon: StepGraphon::w_asym(),
            schedule: SparsitySchedule::new(1.0, gamma)?,
            n_values: vec![1000],
            replicates: 300,
            seed: 17,
            experiment_kind: ExperimentKind::VarianceRatio,
        };
        let result = run_experiment(&cfg, None)?;
        for r in &result.records {
            println!("{gamma:>6} {:>16} {:>8} {:>8.4}", result.regime.to_string(), r.n, r.r2.unwrap_or(f64::NAN));
        }
    }
    Ok(())
}

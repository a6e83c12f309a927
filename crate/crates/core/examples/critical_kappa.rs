//! Edge counts at the critical scaling `n ρ = c`: the simulated edge-part
//! share against the limiting kappa.

use graphon_motifs::experiments::{run_experiment, ExperimentConfig, ExperimentKind};
use graphon_motifs::graphon::{kappa, StepGraphon};
use graphon_motifs::motif::Motif;
use graphon_motifs::sampler::SparsitySchedule;

fn main() -> graphon_motifs::Result<()> {
    let m = Motif::complete(2);
    let w = StepGraphon::w_asym();
    for c in [1.0, 5.0] {
        let cfg = ExperimentConfig {
            motif: m.clone(),
            graphon: w.clone(),
            schedule: SparsitySchedule::critical(&m, c)?,
            n_values: vec![500, 2000],
            replicates: 500,
            seed: 23,
            experiment_kind: ExperimentKind::CriticalKappa,
        };
        let result = run_experiment(&cfg, None)?;
        println!("c = {c}: limiting kappa = {:.4}", kappa(&m, &w, c)?);
        for r in &result.records {
            println!("  n = {:>5}  r1 = {:.4}  r2 = {:.4}", r.n, r.r1.unwrap_or(f64::NAN), r.r2.unwrap_or(f64::NAN));
        }
    }
    Ok(())
}

//! Counts with the latents held fixed and only the edges resampled. The
//! second case sits in the label-dominated regime and is exploratory.

use graphon_motifs::experiments::{run_experiment, ExperimentConfig, ExperimentKind};
use graphon_motifs::graphon::StepGraphon;
use graphon_motifs::motif::Motif;
use graphon_motifs::sampler::SparsitySchedule;

fn main() -> graphon_motifs::Result<()> {
    let cases = [
        ("triangle on W_sym, gamma = 0.6", Motif::complete(3), StepGraphon::w_sym(), 0.6),
        ("edge on W_asym, gamma = 0.5", Motif::complete(2), StepGraphon::w_asym(), 0.5),
    ];
    for (label, motif, graphon, gamma) in cases {
        let cfg = ExperimentConfig {
            motif,
            graphon,
            schedule: SparsitySchedule::new(1.0, gamma)?,
            n_values: vec![10, 500],
            replicates: 400,
            seed: 29,
            experiment_kind: ExperimentKind::ConditionalClt,
        };
        let result = run_experiment(&cfg, None)?;
        println!("{label}");
        for r in &result.records {
            let ks = r.normality_delta1.map_or(f64::NAN, |k| k.ks_statistic);
            let oracle = r
                .conditional_variance_oracle
                .map_or("-".to_string(), |v| format!("{v:.4}"));
            println!(
                "  n = {:>4}  E[X|U] = {:>10.3}  var X = {:>10.3}  oracle Var[X|U] = {oracle}  KS = {ks:.4}",
                r.n,
                r.conditional_expected.unwrap_or(f64::NAN),
                r.var_x
            );
        }
    }
    Ok(())
}

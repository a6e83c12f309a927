//! Monte Carlo campaigns over a grid of graph sizes.
//!
//! Every experiment runs one cell per `n`. Cell `n` uses the seed
//! `derive_seed(seed, n)` and replicate `r` within it uses
//! `derive_seed(cell_seed, r)`. Replicates are evaluated in parallel but
//! collected in replicate order, so every summary is a deterministic
//! function of the configuration regardless of the number of threads.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::counting::{
    conditional_expected_count, conditional_variance, count_sampled, decompose, expected_count,
    Decomposition, ORACLE_MAX_N, ORACLE_MAX_VERTICES,
};
use crate::error::{Error, Result};
use crate::graphon::{is_h_regular, kappa, StepGraphon, DEFAULT_REGULARITY_TOL};
use crate::motif::{density_exponents, Motif};
use crate::sampler::{classify_regime_f64, derive_seed, sample, Regime, SparsitySchedule};
use crate::stats::{
    correlation, covariance, ks_test, mean, se_covariance, se_mean, se_variance, standardize,
    variance, variance_ratio, NormalityReport, KS_MIN_SAMPLES, RATIO_MIN_SAMPLES,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    /// Fraction of graphs containing at least one copy.
    Containment,
    /// Normality of the standardized count and of both components.
    Clt,
    /// Variance shares of the edge and label components.
    VarianceRatio,
    /// Variance shares at `n ρ^(m₁) = c` against the limiting `κ`.
    CriticalKappa,
    /// Normality of `Δ₁` with the latents held fixed.
    ConditionalClt,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub motif: Motif,
    pub graphon: StepGraphon,
    pub schedule: SparsitySchedule,
    pub n_values: Vec<usize>,
    pub replicates: usize,
    pub seed: u64,
    pub experiment_kind: ExperimentKind,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        ExperimentConfig::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn regime(&self) -> Result<Regime> {
        classify_regime_f64(&self.motif, self.schedule.exponent)
    }

    /// Checks the structural invariants and the preconditions of the
    /// selected experiment kind.
    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::InvalidArgument("replicates must be at least 1".into()));
        }
        if self.n_values.is_empty() {
            return Err(Error::InvalidArgument("n_values must not be empty".into()));
        }
        if self.n_values[0] == 0 || self.n_values.windows(2).any(|p| p[0] >= p[1]) {
            return Err(Error::InvalidArgument(
                "n_values must be positive and strictly ascending".into(),
            ));
        }
        self.schedule.validate()?;
        let regime = self.regime()?;
        let min_replicates = match self.experiment_kind {
            ExperimentKind::Containment => 1,
            ExperimentKind::Clt | ExperimentKind::ConditionalClt => KS_MIN_SAMPLES,
            ExperimentKind::VarianceRatio | ExperimentKind::CriticalKappa => RATIO_MIN_SAMPLES,
        };
        if self.replicates < min_replicates {
            return Err(Error::InvalidArgument(format!(
                "{:?} needs at least {min_replicates} replicates",
                self.experiment_kind
            )));
        }
        match self.experiment_kind {
            ExperimentKind::Clt | ExperimentKind::VarianceRatio => {
                if matches!(regime, Regime::BelowContainment | Regime::AtContainment) {
                    return Err(Error::Precondition(format!(
                        "no fluctuation limit in the {regime} regime"
                    )));
                }
            }
            ExperimentKind::CriticalKappa => {
                let m1 = density_exponents(&self.motif)?.m1.to_f64();
                if (self.schedule.exponent * m1 - 1.0).abs() > 1e-9 {
                    return Err(Error::Precondition(format!(
                        "critical schedule needs exponent 1/m1 = {}, got {}",
                        1.0 / m1,
                        self.schedule.exponent
                    )));
                }
                if is_h_regular(&self.motif, &self.graphon, DEFAULT_REGULARITY_TOL)?.is_regular {
                    return Err(Error::RegularGraphon);
                }
            }
            ExperimentKind::Containment | ExperimentKind::ConditionalClt => {}
        }
        Ok(())
    }

    /// `c` with `n ρ_n^(m₁) = c` under this schedule.
    pub fn critical_constant(&self) -> Result<f64> {
        let m1 = density_exponents(&self.motif)?.m1.to_f64();
        Ok(self.schedule.amplitude.powf(m1))
    }
}

/// One replicate, as written to the per-replicate CSV.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplicateRow {
    pub seed: u64,
    pub n: usize,
    pub rho: f64,
    pub x: u64,
    pub expected: f64,
    pub cond_expected: f64,
    pub delta: f64,
    pub delta1: f64,
    pub delta2: f64,
}

impl ReplicateRow {
    fn new(seed: u64, n: usize, rho: f64, d: &Decomposition) -> Self {
        ReplicateRow {
            seed,
            n,
            rho,
            x: d.x,
            expected: d.expected,
            cond_expected: d.conditional_expected,
            delta: d.delta,
            delta1: d.delta1,
            delta2: d.delta2,
        }
    }
}

/// Summary of one `n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellRecord {
    pub n: usize,
    pub rho: f64,
    pub replicates: usize,
    pub expected_count: f64,
    /// `E[X | U]` at the fixed latents (conditional experiments only).
    pub conditional_expected: Option<f64>,
    pub mean_x: f64,
    pub var_x: f64,
    pub se_mean_x: f64,
    pub se_var_x: f64,
    pub mean_delta1: f64,
    pub var_delta1: f64,
    pub se_var_delta1: f64,
    pub mean_delta2: f64,
    pub var_delta2: f64,
    pub cov_delta12: f64,
    pub se_cov_delta12: f64,
    pub corr_delta12: f64,
    pub containment_fraction: f64,
    /// `X` standardized by its pooled mean and standard deviation.
    pub normality_x: Option<NormalityReport>,
    /// `Δ₁ / sd(Δ₁)`.
    pub normality_delta1: Option<NormalityReport>,
    /// `Δ₂ / sd(Δ₂)`.
    pub normality_delta2: Option<NormalityReport>,
    /// Share of `Var[Δ₁]` in `Var[Δ₁] + Var[Δ₂]`.
    pub r1: Option<f64>,
    pub r2: Option<f64>,
    /// Limiting share of `Var[Δ₁]` (critical experiments only).
    pub kappa: Option<f64>,
    /// Exact `Var[X | U]` at the fixed latents when small enough to enumerate.
    pub conditional_variance_oracle: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub regime: Regime,
    pub records: Vec<CellRecord>,
    /// Wall-clock time; not serialized, so reruns give identical files.
    #[serde(skip)]
    pub runtime_seconds: f64,
    /// Per-replicate rows, cell by cell.
    #[serde(skip)]
    pub replicate_rows: Vec<ReplicateRow>,
}

/// Runs the configured experiment on `threads` worker threads (the global
/// pool when `None`).
pub fn run_experiment(cfg: &ExperimentConfig, threads: Option<usize>) -> Result<ExperimentResult> {
    cfg.validate()?;
    match threads {
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(t).build()?;
            pool.install(|| dispatch(cfg))
        }
        None => dispatch(cfg),
    }
}

fn dispatch(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    match cfg.experiment_kind {
        ExperimentKind::Containment => run_containment(cfg),
        ExperimentKind::Clt => run_clt(cfg),
        ExperimentKind::VarianceRatio => run_variance_ratio(cfg),
        ExperimentKind::CriticalKappa => run_critical_kappa(cfg),
        ExperimentKind::ConditionalClt => run_conditional_clt(cfg),
    }
}

fn expect_kind(cfg: &ExperimentConfig, kind: ExperimentKind) -> Result<()> {
    if cfg.experiment_kind != kind {
        return Err(Error::InvalidArgument(format!(
            "configuration is for {:?}, not {kind:?}",
            cfg.experiment_kind
        )));
    }
    cfg.validate()
}

/// Containment fraction and mean count against the first-moment bound.
pub fn run_containment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    expect_kind(cfg, ExperimentKind::Containment)?;
    run_cells(cfg, |cfg, n| unconditional_cell(cfg, n, None))
}

/// Normality of the standardized count and of each component.
pub fn run_clt(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    expect_kind(cfg, ExperimentKind::Clt)?;
    run_cells(cfg, |cfg, n| {
        let (record, rows) = unconditional_cell(cfg, n, None)?;
        if record.var_x == 0.0 {
            return Err(Error::Precondition(format!("count has zero variance at n = {n}")));
        }
        Ok((record, rows))
    })
}

/// Variance shares of `Δ₁` and `Δ₂` with their empirical covariance.
pub fn run_variance_ratio(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    expect_kind(cfg, ExperimentKind::VarianceRatio)?;
    run_cells(cfg, |cfg, n| unconditional_cell(cfg, n, None))
}

/// Variance shares at criticality against the limiting `κ`.
pub fn run_critical_kappa(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    expect_kind(cfg, ExperimentKind::CriticalKappa)?;
    let k = kappa(&cfg.motif, &cfg.graphon, cfg.critical_constant()?)?;
    run_cells(cfg, |cfg, n| unconditional_cell(cfg, n, Some(k)))
}

/// Normality of `Δ₁` given one fixed latent draw per `n`, with the edges
/// resampled for every replicate.
pub fn run_conditional_clt(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    expect_kind(cfg, ExperimentKind::ConditionalClt)?;
    run_cells(cfg, conditional_cell)
}

type Cell = (CellRecord, Vec<ReplicateRow>);

fn run_cells<F>(cfg: &ExperimentConfig, cell: F) -> Result<ExperimentResult>
where
    F: Fn(&ExperimentConfig, usize) -> Result<Cell>,
{
    let start = Instant::now();
    let mut records = Vec::with_capacity(cfg.n_values.len());
    let mut replicate_rows = Vec::new();
    for &n in &cfg.n_values {
        let (record, rows) = cell(cfg, n)?;
        records.push(record);
        replicate_rows.extend(rows);
    }
    Ok(ExperimentResult {
        config: cfg.clone(),
        regime: cfg.regime()?,
        records,
        runtime_seconds: start.elapsed().as_secs_f64(),
        replicate_rows,
    })
}

fn cell_seed(cfg: &ExperimentConfig, n: usize) -> u64 {
    derive_seed(cfg.seed, n as u64)
}

fn unconditional_cell(cfg: &ExperimentConfig, n: usize, kappa: Option<f64>) -> Result<Cell> {
    let rho = cfg.schedule.rho(n);
    let base = cell_seed(cfg, n);
    let rows = (0..cfg.replicates as u64)
        .into_par_iter()
        .map(|r| {
            let seed = derive_seed(base, r);
            let g = sample(&cfg.graphon, n, rho, seed)?;
            let d = decompose(&g, &cfg.motif, &cfg.graphon)?;
            Ok(ReplicateRow::new(seed, n, rho, &d))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut record = summarize(n, rho, &rows)?;
    record.kappa = kappa;
    Ok((record, rows))
}

fn conditional_cell(cfg: &ExperimentConfig, n: usize) -> Result<Cell> {
    let rho = cfg.schedule.rho(n);
    let base_seed = cell_seed(cfg, n);
    let base = sample(&cfg.graphon, n, rho, base_seed)?;
    let (m, w) = (&cfg.motif, &cfg.graphon);
    let expected = expected_count(m, w, n as u64, rho)?;
    let conditional = conditional_expected_count(&base.latents, m, w, rho)?;
    let rows = (0..cfg.replicates as u64)
        .into_par_iter()
        .map(|r| {
            let seed = derive_seed(base_seed, r);
            let g = base.resample_edges(w, seed);
            let d = Decomposition::new(count_sampled(&g, m), expected, conditional);
            ReplicateRow::new(seed, n, rho, &d)
        })
        .collect::<Vec<_>>();
    let mut record = summarize(n, rho, &rows)?;
    record.conditional_expected = Some(conditional);
    if n <= ORACLE_MAX_N && m.vertex_count() <= ORACLE_MAX_VERTICES {
        record.conditional_variance_oracle = Some(conditional_variance(&base.latents, m, w, rho)?);
    }
    Ok((record, rows))
}

/// Normality of `samples / sd`, or `None` when the sample is degenerate or
/// too small.
fn scaled_normality(samples: &[f64], center: f64) -> Result<Option<NormalityReport>> {
    let sd = variance(samples).sqrt();
    if samples.len() < KS_MIN_SAMPLES || !(sd > 0.0) {
        return Ok(None);
    }
    Ok(Some(ks_test(&standardize(samples, center, sd)?)?))
}

fn summarize(n: usize, rho: f64, rows: &[ReplicateRow]) -> Result<CellRecord> {
    let x: Vec<f64> = rows.iter().map(|r| r.x as f64).collect();
    let d1: Vec<f64> = rows.iter().map(|r| r.delta1).collect();
    let d2: Vec<f64> = rows.iter().map(|r| r.delta2).collect();
    let mean_x = mean(&x);
    let ratio = if rows.len() >= RATIO_MIN_SAMPLES {
        variance_ratio(&d1, &d2).ok()
    } else {
        None
    };
    let pairs = rows.len() > 1;
    Ok(CellRecord {
        n,
        rho,
        replicates: rows.len(),
        expected_count: rows[0].expected,
        conditional_expected: None,
        mean_x,
        var_x: if pairs { variance(&x) } else { 0.0 },
        se_mean_x: if pairs { se_mean(&x) } else { 0.0 },
        se_var_x: if pairs { se_variance(&x) } else { 0.0 },
        mean_delta1: mean(&d1),
        var_delta1: if pairs { variance(&d1) } else { 0.0 },
        se_var_delta1: if pairs { se_variance(&d1) } else { 0.0 },
        mean_delta2: mean(&d2),
        var_delta2: if pairs { variance(&d2) } else { 0.0 },
        cov_delta12: if pairs { covariance(&d1, &d2) } else { 0.0 },
        se_cov_delta12: if pairs { se_covariance(&d1, &d2) } else { 0.0 },
        corr_delta12: if pairs { correlation(&d1, &d2) } else { 0.0 },
        containment_fraction: rows.iter().filter(|r| r.x > 0).count() as f64 / rows.len() as f64,
        normality_x: scaled_normality(&x, mean_x)?,
        normality_delta1: scaled_normality(&d1, 0.0)?,
        normality_delta2: scaled_normality(&d2, 0.0)?,
        r1: ratio.map(|r| r.0),
        r2: ratio.map(|r| r.1),
        kappa: None,
        conditional_variance_oracle: None,
    })
}

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

/// One row of the summary CSV.
#[derive(Serialize)]
struct SummaryRow {
    n: usize,
    rho: f64,
    replicates: usize,
    expected_count: f64,
    conditional_expected: Option<f64>,
    mean_x: f64,
    var_x: f64,
    se_mean_x: f64,
    se_var_x: f64,
    mean_delta1: f64,
    var_delta1: f64,
    se_var_delta1: f64,
    mean_delta2: f64,
    var_delta2: f64,
    cov_delta12: f64,
    se_cov_delta12: f64,
    corr_delta12: f64,
    containment_fraction: f64,
    ks_x: Option<f64>,
    ks_delta1: Option<f64>,
    ks_delta2: Option<f64>,
    r1: Option<f64>,
    r2: Option<f64>,
    kappa: Option<f64>,
    conditional_variance_oracle: Option<f64>,
}

impl From<&CellRecord> for SummaryRow {
    fn from(c: &CellRecord) -> Self {
        SummaryRow {
            n: c.n,
            rho: c.rho,
            replicates: c.replicates,
            expected_count: c.expected_count,
            conditional_expected: c.conditional_expected,
            mean_x: c.mean_x,
            var_x: c.var_x,
            se_mean_x: c.se_mean_x,
            se_var_x: c.se_var_x,
            mean_delta1: c.mean_delta1,
            var_delta1: c.var_delta1,
            se_var_delta1: c.se_var_delta1,
            mean_delta2: c.mean_delta2,
            var_delta2: c.var_delta2,
            cov_delta12: c.cov_delta12,
            se_cov_delta12: c.se_cov_delta12,
            corr_delta12: c.corr_delta12,
            containment_fraction: c.containment_fraction,
            ks_x: c.normality_x.map(|r| r.ks_statistic),
            ks_delta1: c.normality_delta1.map(|r| r.ks_statistic),
            ks_delta2: c.normality_delta2.map(|r| r.ks_statistic),
            r1: c.r1,
            r2: c.r2,
            kappa: c.kappa,
            conditional_variance_oracle: c.conditional_variance_oracle,
        }
    }
}

pub fn write_summary_json<W: Write>(result: &ExperimentResult, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, result)?;
    writeln!(out)?;
    Ok(())
}

pub fn write_summary_csv<W: Write>(result: &ExperimentResult, out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for record in &result.records {
        writer.serialize(SummaryRow::from(record))?;
    }
    writer.flush()?;
    Ok(())
}

pub fn write_replicates_csv<W: Write>(result: &ExperimentResult, out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for row in &result.replicate_rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

/// Writes `summary.json` and `summary.csv` into `dir`, plus
/// `replicates.csv` when requested. Returns the paths written.
pub fn write_outputs(result: &ExperimentResult, dir: &Path, replicates: bool) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let path = dir.join("summary.json");
    write_summary_json(result, BufWriter::new(File::create(&path)?))?;
    written.push(path);
    let path = dir.join("summary.csv");
    write_summary_csv(result, BufWriter::new(File::create(&path)?))?;
    written.push(path);
    if replicates {
        let path = dir.join("replicates.csv");
        write_replicates_csv(result, BufWriter::new(File::create(&path)?))?;
        written.push(path);
    }
    Ok(written)
}

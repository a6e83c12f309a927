//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on runtime failure, 2 on usage or
//! validation errors.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::counting::{count_sampled, decompose, ustat_t};
use crate::error::Error;
use crate::experiments::{run_experiment, write_outputs, ExperimentConfig, ExperimentResult};
use crate::graphon::{
    critical_terms, degree_function, hom_density, is_h_regular, xi1, StepGraphon,
    DEFAULT_REGULARITY_TOL,
};
use crate::motif::{automorphism_count, density_exponents, Motif};
use crate::sampler::{sample, SampledGraph};

/// Critical constants reported by `analyze-graphon`.
const KAPPA_GRID: [f64; 3] = [0.5, 1.0, 2.0];

#[derive(Parser, Debug)]
#[command(name = "graphon-motifs", version, about = "Subgraph counts in sparse graphon random graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Density exponents, balancedness and automorphisms of a motif.
    AnalyzeMotif {
        /// Motif JSON file or a built-in name (edge, path3, triangle, k4, c4, c5, triangle_pendant, fig1b, fig2a).
        motif: String,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Homomorphism density, regularity, first-projection variance and kappa.
    AnalyzeGraphon {
        /// Graphon JSON file or a built-in name (W_sym, W_asym, const:p).
        #[arg(long)]
        graphon: String,
        #[arg(long)]
        motif: String,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Draw one graph and write its dump.
    Sample {
        #[arg(long)]
        graphon: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        rho: f64,
        #[arg(long)]
        seed: u64,
        /// Output file (standard output when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count copies of a motif in a dumped graph.
    Count {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        motif: String,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Draw one graph and split its centred count into edge and label parts.
    Decompose {
        #[arg(long)]
        graphon: String,
        #[arg(long)]
        motif: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        rho: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Run an experiment configuration and write its summaries.
    RunExperiment {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        /// Worker threads (defaults to the available parallelism).
        #[arg(long)]
        threads: Option<usize>,
        /// Replaces the seed in the configuration.
        #[arg(long)]
        seed: Option<u64>,
        /// `csv` also writes one row per replicate.
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
}

enum Failure {
    Usage(String),
    Runtime(String),
}

type CliResult<T> = std::result::Result<T, Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn runtime(e: impl std::fmt::Display) -> Failure {
    Failure::Runtime(e.to_string())
}

/// Input and validation problems are usage errors; everything else is a
/// runtime failure.
fn classify(e: Error) -> Failure {
    match e {
        Error::Io(_) | Error::Csv(_) | Error::ThreadPool(_) | Error::Overflow(_) | Error::TooLarge(_) => {
            runtime(e)
        }
        _ => usage(e),
    }
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::AnalyzeMotif { motif, format } => analyze_motif(&load_motif(&motif)?, format, &mut out),
        Command::AnalyzeGraphon {
            graphon,
            motif,
            format,
        } => analyze_graphon(&load_graphon(&graphon)?, &load_motif(&motif)?, format, &mut out),
        Command::Sample {
            graphon,
            n,
            rho,
            seed,
            out: path,
        } => {
            let g = sample(&load_graphon(&graphon)?, n, rho, seed).map_err(classify)?;
            match path {
                Some(path) => {
                    let file = File::create(&path).map_err(runtime)?;
                    g.write_dump(BufWriter::new(file)).map_err(classify)
                }
                None => g.write_dump(&mut out).map_err(classify),
            }
        }
        Command::Count { graph, motif, format } => {
            let file = File::open(&graph).map_err(|e| usage(format!("{}: {e}", graph.display())))?;
            let g = SampledGraph::read_dump(BufReader::new(file)).map_err(classify)?;
            let m = load_motif(&motif)?;
            let x = count_sampled(&g, &m);
            match format {
                Some(Format::Json) => emit_json(&mut out, &json!({ "n": g.n, "edges": g.edge_count(), "count": x })),
                Some(Format::Csv) => writeln!(out, "n,edges,count\n{},{},{x}", g.n, g.edge_count()).map_err(runtime),
                None => writeln!(out, "copies: {x}").map_err(runtime),
            }
        }
        Command::Decompose {
            graphon,
            motif,
            n,
            rho,
            seed,
            format,
        } => {
            let w = load_graphon(&graphon)?;
            let m = load_motif(&motif)?;
            decompose_report(&w, &m, n, rho, seed, format, &mut out)
        }
        Command::RunExperiment {
            config,
            out_dir,
            threads,
            seed,
            format,
        } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| usage(format!("{}: {e}", config.display())))?;
            let mut cfg: ExperimentConfig = serde_json::from_str(&text).map_err(usage)?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            cfg.validate().map_err(usage)?;
            if threads == Some(0) {
                return Err(usage("--threads must be at least 1"));
            }
            let result = run_experiment(&cfg, threads).map_err(runtime)?;
            let written =
                write_outputs(&result, &out_dir, format == Some(Format::Csv)).map_err(classify)?;
            experiment_report(&result, &written, &mut out)?;
            eprintln!("runtime: {:.2} s", result.runtime_seconds);
            Ok(())
        }
    }
}

fn load_motif(arg: &str) -> CliResult<Motif> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{arg}: {e}")))?;
        return serde_json::from_str(&text).map_err(|e| usage(format!("{arg}: {e}")));
    }
    Motif::named(arg).map_err(|_| usage(format!("{arg:?} is neither a motif file nor a known motif name")))
}

fn load_graphon(arg: &str) -> CliResult<StepGraphon> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{arg}: {e}")))?;
        return serde_json::from_str(&text).map_err(|e| usage(format!("{arg}: {e}")));
    }
    StepGraphon::named(arg)
        .map_err(|_| usage(format!("{arg:?} is neither a graphon file nor a known graphon name")))
}

fn emit_json<W: Write>(out: &mut W, value: &impl Serialize) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(runtime)?;
    writeln!(out).map_err(runtime)
}

fn edge_list(m: &Motif) -> String {
    m.one_based_edges()
        .iter()
        .map(|[a, b]| format!("{a}-{b}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn analyze_motif<W: Write>(m: &Motif, format: Option<Format>, out: &mut W) -> CliResult<()> {
    let p = density_exponents(m).map_err(classify)?;
    let aut = automorphism_count(m);
    if format == Some(Format::Json) {
        return emit_json(
            out,
            &json!({
                "motif": m,
                "automorphisms": aut.to_string(),
                "m": p.m,
                "m_decimal": p.m.to_f64(),
                "m1": p.m1,
                "m1_decimal": p.m1.to_f64(),
                "balanced": p.balanced,
                "strictly_balanced": p.strictly_balanced,
                "strongly_balanced": p.strongly_balanced,
                "strictly_strongly_balanced": p.strictly_strongly_balanced,
                "m1_maximizers": p.m1_maximizers,
            }),
        );
    }
    let mut text = String::new();
    text += &format!("motif: {} vertices, {} edges: {}\n", m.vertex_count(), m.edge_count(), edge_list(m));
    text += &format!("automorphisms: {aut}\n");
    text += &format!("m:  {} ({:.6})\n", p.m, p.m.to_f64());
    text += &format!("m1: {} ({:.6})\n", p.m1, p.m1.to_f64());
    text += &format!("balanced: {}\n", yes_no(p.balanced));
    text += &format!("strictly balanced: {}\n", yes_no(p.strictly_balanced));
    text += &format!("strongly balanced: {}\n", yes_no(p.strongly_balanced));
    text += &format!("strictly strongly balanced: {}\n", yes_no(p.strictly_strongly_balanced));
    text += &format!("m1 maximizers: {}\n", p.m1_maximizers.len());
    for f in &p.m1_maximizers {
        text += &format!("  {} vertices: {}\n", f.vertex_count(), edge_list(f));
    }
    out.write_all(text.as_bytes()).map_err(runtime)
}

#[derive(Serialize)]
struct KappaEntry {
    c: f64,
    kappa: Option<f64>,
}

fn analyze_graphon<W: Write>(w: &StepGraphon, m: &Motif, format: Option<Format>, out: &mut W) -> CliResult<()> {
    let t = hom_density(m, w).map_err(classify)?;
    let regularity = is_h_regular(m, w, DEFAULT_REGULARITY_TOL).map_err(classify)?;
    let xi = xi1(m, w).map_err(classify)?;
    let mut kappas = Vec::new();
    for c in KAPPA_GRID {
        let kappa = match critical_terms(m, w, c) {
            Ok(terms) => Some(terms.kappa()),
            Err(Error::RegularGraphon) => None,
            Err(e) => return Err(classify(e)),
        };
        kappas.push(KappaEntry { c, kappa });
    }
    if format == Some(Format::Json) {
        return emit_json(
            out,
            &json!({
                "graphon": w,
                "motif": m,
                "hom_density": t,
                "degree_function": degree_function(w),
                "regular": regularity.is_regular,
                "rooted_density_by_block": regularity.per_block_mean_rooted,
                "max_deviation": regularity.max_deviation,
                "xi1": xi,
                "kappa": kappas,
            }),
        );
    }
    let fmt_list = |v: &[f64]| v.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>().join(" ");
    let mut text = String::new();
    text += &format!("graphon: {} blocks\n", w.block_count());
    text += &format!("motif: {} vertices, {} edges\n", m.vertex_count(), m.edge_count());
    text += &format!("t(H,W): {t:.10}\n");
    text += &format!("degree function: {}\n", fmt_list(&degree_function(w)));
    text += &format!("rooted density by block: {}\n", fmt_list(&regularity.per_block_mean_rooted));
    text += &format!(
        "H-regular: {} (max deviation {:.3e})\n",
        yes_no(regularity.is_regular),
        regularity.max_deviation
    );
    text += &format!("xi1: {xi:.10}\n");
    for entry in &kappas {
        match entry.kappa {
            Some(k) => text += &format!("kappa(c={}): {k:.6}\n", entry.c),
            None => text += &format!("kappa(c={}): undefined (regular case)\n", entry.c),
        }
    }
    out.write_all(text.as_bytes()).map_err(runtime)
}

fn decompose_report<W: Write>(
    w: &StepGraphon,
    m: &Motif,
    n: usize,
    rho: f64,
    seed: u64,
    format: Option<Format>,
    out: &mut W,
) -> CliResult<()> {
    let g = sample(w, n, rho, seed).map_err(classify)?;
    let d = decompose(&g, m, w).map_err(classify)?;
    let t = if n >= m.vertex_count() {
        Some(ustat_t(&g.latents, m, w).map_err(classify)?)
    } else {
        None
    };
    match format {
        Some(Format::Json) => emit_json(
            out,
            &json!({ "n": n, "rho": rho, "seed": seed, "decomposition": d, "ustat_t": t }),
        ),
        Some(Format::Csv) => {
            let mut writer = csv::Writer::from_writer(&mut *out);
            writer
                .write_record(["seed", "n", "rho", "x", "expected", "cond_expected", "delta", "delta1", "delta2"])
                .map_err(runtime)?;
            writer
                .write_record([
                    seed.to_string(),
                    n.to_string(),
                    rho.to_string(),
                    d.x.to_string(),
                    d.expected.to_string(),
                    d.conditional_expected.to_string(),
                    d.delta.to_string(),
                    d.delta1.to_string(),
                    d.delta2.to_string(),
                ])
                .map_err(runtime)?;
            writer.flush().map_err(runtime)
        }
        None => {
            let mut text = format!("n: {n}  rho: {rho}  seed: {seed}  edges: {}\n", g.edge_count());
            text += &format!("X:          {}\n", d.x);
            text += &format!("E[X]:       {:.6}\n", d.expected);
            text += &format!("E[X|U]:     {:.6}\n", d.conditional_expected);
            text += &format!("delta:      {:.6}\n", d.delta);
            text += &format!("delta1:     {:.6}\n", d.delta1);
            text += &format!("delta2:     {:.6}\n", d.delta2);
            if let Some(t) = t {
                text += &format!("T:          {t:.6e}\n");
            }
            out.write_all(text.as_bytes()).map_err(runtime)
        }
    }
}

fn experiment_report<W: Write>(result: &ExperimentResult, written: &[PathBuf], out: &mut W) -> CliResult<()> {
    let opt = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.4}"));
    let mut text = format!(
        "{:?} experiment, regime {}, {} replicates per n\n",
        result.config.experiment_kind, result.regime, result.config.replicates
    );
    text += &format!(
        "{:>7} {:>10} {:>12} {:>12} {:>8} {:>8} {:>8} {:>8} {:>8}\n",
        "n", "rho", "E[X]", "mean X", "P(X>0)", "KS(Z)", "r2", "corr", "kappa"
    );
    for r in &result.records {
        text += &format!(
            "{:>7} {:>10.4e} {:>12.4} {:>12.4} {:>8.4} {:>8} {:>8} {:>8.4} {:>8}\n",
            r.n,
            r.rho,
            r.expected_count,
            r.mean_x,
            r.containment_fraction,
            opt(r.normality_x.map(|k| k.ks_statistic)),
            opt(r.r2),
            r.corr_delta12,
            opt(r.kappa),
        );
    }
    for path in written {
        text += &format!("wrote {}\n", path.display());
    }
    out.write_all(text.as_bytes()).map_err(runtime)
}

//! Seeded sampling of `G(n, ρ, W)` for step graphons.
//!
//! # Random stream
//!
//! A graph with seed `s` is drawn from `ChaCha8Rng::seed_from_u64(s)`
//! (`rand_chacha` 0.9), consuming the stream in a fixed order:
//!
//! 1. `n` latent coordinates `u_i = rng.random::<f64>()` in `[0, 1)`; the block
//!    of vertex `i` is the block of the graphon containing `u_i`.
//! 2. For every block pair `(b, c)` with `b <= c`, in lexicographic order,
//!    the candidate vertex pairs (ordered by vertex index within each block)
//!    are scanned with geometric skips: each gap is
//!    `floor(ln(1 - rng.random::<f64>()) / ln(1 - p))` with `p = ρ W(b, c)`.
//!    Within a block pair the inclusion probability is constant, so this
//!    yields independent Bernoulli(`p`) edges with exact marginals.
//!
//! Replicate `r` of a batch with base seed `s` uses
//! [`derive_seed`]`(s, r)`, a SplitMix64 mix, so results never depend on the
//! order in which replicates are evaluated.

use std::fmt;
use std::io::{BufRead, Write};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::graphon::StepGraphon;
use crate::motif::{density_exponents, Exponent, Motif};

pub type SeedRng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of sub-stream `stream` under base seed `seed`.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    splitmix64(seed ^ splitmix64(stream))
}

pub fn rng_from_seed(seed: u64) -> SeedRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One realization of `G(n, ρ, W)` with its latent labels.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledGraph {
    pub n: usize,
    pub rho: f64,
    pub seed: u64,
    /// Latent coordinates `u_1, .., u_n` in `[0, 1)`.
    pub latents: Vec<f64>,
    /// Block of each latent coordinate.
    pub blocks: Vec<u32>,
    /// Edges `(i, j)` with `i < j`, sorted.
    pub edges: Vec<(u32, u32)>,
}

fn check_rho(rho: f64) -> Result<()> {
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::InvalidArgument(format!("rho = {rho} must lie in (0, 1]")));
    }
    Ok(())
}

/// Draws `G(n, ρ, W)` deterministically from `seed`.
pub fn sample(w: &StepGraphon, n: usize, rho: f64, seed: u64) -> Result<SampledGraph> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    check_rho(rho)?;
    let mut rng = rng_from_seed(seed);
    let latents: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    let blocks: Vec<u32> = latents.iter().map(|&u| w.block_of(u) as u32).collect();
    let edges = sample_edges(w, &blocks, rho, &mut rng);
    Ok(SampledGraph {
        n,
        rho,
        seed,
        latents,
        blocks,
        edges,
    })
}

impl SampledGraph {
    /// Keeps the latent labels and redraws the edge layer from `seed`.
    pub fn resample_edges(&self, w: &StepGraphon, seed: u64) -> SampledGraph {
        let mut rng = rng_from_seed(seed);
        let edges = sample_edges(w, &self.blocks, self.rho, &mut rng);
        SampledGraph {
            seed,
            edges,
            ..self.clone()
        }
    }

    pub fn graph(&self) -> Graph {
        Graph::from_edges(
            self.n,
            self.edges.iter().map(|&(a, b)| (a as usize, b as usize)),
        )
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Debug dump: a header line `n rho seed`, one `i j` line per edge
    /// (1-based, `i < j`, sorted), then a `latents` line followed by one
    /// `u block` line per vertex (block 1-based).
    pub fn write_dump<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{} {} {}", self.n, self.rho, self.seed)?;
        for &(a, b) in &self.edges {
            writeln!(out, "{} {}", a + 1, b + 1)?;
        }
        writeln!(out, "latents")?;
        for (u, b) in self.latents.iter().zip(&self.blocks) {
            writeln!(out, "{} {}", u, b + 1)?;
        }
        Ok(())
    }

    pub fn read_dump<R: BufRead>(input: R) -> Result<SampledGraph> {
        let mut lines = input.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty graph dump".into()))??;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse(format!("bad header line {header:?}")));
        }
        let n: usize = parse_field(fields[0], "n")?;
        let rho: f64 = parse_field(fields[1], "rho")?;
        let seed: u64 = parse_field(fields[2], "seed")?;
        let mut edges = Vec::new();
        let mut latents = Vec::new();
        let mut blocks = Vec::new();
        let mut in_latents = false;
        for line in lines {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if line == "latents" {
                in_latents = true;
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(Error::Parse(format!("bad line {line:?}")));
            }
            if in_latents {
                latents.push(parse_field::<f64>(parts[0], "latent")?);
                let b: u32 = parse_field(parts[1], "block")?;
                if b == 0 {
                    return Err(Error::Parse("blocks are 1-based".into()));
                }
                blocks.push(b - 1);
            } else {
                let a: usize = parse_field(parts[0], "vertex")?;
                let b: usize = parse_field(parts[1], "vertex")?;
                if a == 0 || b == 0 || a > n || b > n || a >= b {
                    return Err(Error::Parse(format!(
                        "edge {a} {b} must satisfy 1 <= i < j <= {n}"
                    )));
                }
                edges.push(((a - 1) as u32, (b - 1) as u32));
            }
        }
        if !latents.is_empty() && latents.len() != n {
            return Err(Error::Parse(format!(
                "{} latents listed for n = {n}",
                latents.len()
            )));
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(SampledGraph {
            n,
            rho,
            seed,
            latents,
            blocks,
            edges,
        })
    }
}

fn parse_field<T: std::str::FromStr>(s: &str, what: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    s.parse()
        .map_err(|e| Error::Parse(format!("{what} {s:?}: {e}")))
}

/// Independent edges given block labels, by geometric skipping within each
/// block pair.
pub fn sample_edges<R: Rng>(w: &StepGraphon, blocks: &[u32], rho: f64, rng: &mut R) -> Vec<(u32, u32)> {
    let k = w.block_count();
    let mut members: Vec<Vec<u32>> = vec![Vec::new(); k];
    for (v, &b) in blocks.iter().enumerate() {
        members[b as usize].push(v as u32);
    }
    let mut edges = Vec::new();
    for b in 0..k {
        for c in b..k {
            let p = rho * w.value(b, c);
            if b == c {
                let mem = &members[b];
                let size = mem.len() as u64;
                let total = size * size.saturating_sub(1) / 2;
                let mut row = 0u64;
                let mut row_start = 0u64;
                for_each_success(total, p, rng, |idx| {
                    while idx >= row_start + (size - 1 - row) {
                        row_start += size - 1 - row;
                        row += 1;
                    }
                    let col = row + 1 + (idx - row_start);
                    edges.push((mem[row as usize], mem[col as usize]));
                });
            } else {
                let (left, right) = (&members[b], &members[c]);
                let width = right.len() as u64;
                let total = left.len() as u64 * width;
                for_each_success(total, p, rng, |idx| {
                    let (x, y) = (left[(idx / width) as usize], right[(idx % width) as usize]);
                    edges.push((x.min(y), x.max(y)));
                });
            }
        }
    }
    edges.sort_unstable();
    edges
}

/// Calls `f` with the indices in `0..total` selected by independent
/// Bernoulli(`p`) trials, in increasing order.
fn for_each_success<R: Rng, F: FnMut(u64)>(total: u64, p: f64, rng: &mut R, mut f: F) {
    if total == 0 || p <= 0.0 {
        return;
    }
    if p >= 1.0 {
        (0..total).for_each(f);
        return;
    }
    let log_q = (-p).ln_1p();
    let mut pos = 0u64;
    loop {
        let u = 1.0 - rng.random::<f64>();
        let gap = (u.ln() / log_q).floor();
        if gap >= (total - pos) as f64 {
            return;
        }
        pos += gap as u64;
        f(pos);
        pos += 1;
        if pos >= total {
            return;
        }
    }
}

// ---------------------------------------------------------------------------
// Sparsity schedules and regimes
// ---------------------------------------------------------------------------

/// `ρ_n = min(1, a · n^(-γ))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparsitySchedule {
    pub amplitude: f64,
    pub exponent: f64,
}

impl SparsitySchedule {
    pub fn new(amplitude: f64, exponent: f64) -> Result<Self> {
        let s = SparsitySchedule { amplitude, exponent };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.amplitude.is_finite() && self.amplitude > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "schedule amplitude {} must be positive",
                self.amplitude
            )));
        }
        if !(self.exponent.is_finite() && self.exponent >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "schedule exponent {} must be non-negative",
                self.exponent
            )));
        }
        Ok(())
    }

    /// Schedule pinned to the variance-ratio threshold: `γ = 1/m₁(H)` and
    /// `a = c^(1/m₁(H))`, so that `n ρ_n^(m₁(H)) = c` for every `n` (as long
    /// as `ρ_n` stays below 1).
    pub fn critical(m: &Motif, c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidArgument(format!("c = {c} must be positive")));
        }
        let m1 = density_exponents(m)?.m1.to_f64();
        SparsitySchedule::new(c.powf(1.0 / m1), 1.0 / m1)
    }

    pub fn rho(&self, n: usize) -> f64 {
        schedule_rho(self, n)
    }
}

pub fn schedule_rho(s: &SparsitySchedule, n: usize) -> f64 {
    (s.amplitude * (n as f64).powf(-s.exponent)).min(1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `γ > 1/m(H)`: copies of `H` vanish.
    BelowContainment,
    /// `γ = 1/m(H)`.
    AtContainment,
    /// `1/m₁(H) < γ < 1/m(H)`: edge randomness dominates the variance.
    EdgeDominated,
    /// `γ = 1/m₁(H)`.
    Critical,
    /// `0 < γ < 1/m₁(H)`: label randomness dominates.
    LabelDominated,
    /// `γ = 0`.
    Dense,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Regime::BelowContainment => "below_containment",
            Regime::AtContainment => "at_containment",
            Regime::EdgeDominated => "edge_dominated",
            Regime::Critical => "critical",
            Regime::LabelDominated => "label_dominated",
            Regime::Dense => "dense",
        };
        f.write_str(s)
    }
}

/// Classifies `ρ_n = n^(-γ)` for motif `m` with exact rational comparisons.
pub fn classify_regime(m: &Motif, gamma: Exponent) -> Result<Regime> {
    if gamma.0 < Ratio::new(0, 1) {
        return Err(Error::InvalidArgument(format!("gamma = {gamma} must be non-negative")));
    }
    let profile = density_exponents(m)?;
    let containment = profile.m.recip();
    let threshold = profile.m1.recip();
    let regime = if gamma.0 == Ratio::new(0, 1) {
        Regime::Dense
    } else if gamma > containment {
        Regime::BelowContainment
    } else if gamma == containment {
        Regime::AtContainment
    } else if gamma > threshold {
        Regime::EdgeDominated
    } else if gamma == threshold {
        Regime::Critical
    } else {
        Regime::LabelDominated
    };
    Ok(regime)
}

/// [`classify_regime`] for a floating-point exponent, first recovering the
/// simplest fraction within `1e-9` (denominators up to `10^6`).
pub fn classify_regime_f64(m: &Motif, gamma: f64) -> Result<Regime> {
    if !gamma.is_finite() {
        return Err(Error::InvalidArgument(format!("gamma = {gamma} is not finite")));
    }
    if gamma < 0.0 {
        return Err(Error::InvalidArgument(format!("gamma = {gamma} must be non-negative")));
    }
    classify_regime(m, rationalize(gamma))
}

/// Best rational approximation by continued-fraction convergents.
pub fn rationalize(x: f64) -> Exponent {
    const TOL: f64 = 1e-9;
    const MAX_DENOM: i64 = 1_000_000;
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        let (p2, q2) = (a as i64 * p1 + p0, a as i64 * q1 + q0);
        if q2 > MAX_DENOM {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        if (x - p1 as f64 / q1 as f64).abs() < TOL {
            break;
        }
        let frac = rest - a;
        if frac == 0.0 {
            break;
        }
        rest = 1.0 / frac;
    }
    Exponent::new(p1, q1)
}

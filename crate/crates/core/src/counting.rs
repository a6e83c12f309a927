//! Subgraph counts, their expectations, and the split of the centred count
//! into an edge part `Δ₁ = X − E[X | U]` and a label part
//! `Δ₂ = E[X | U] − E[X]`.
//!
//! `E[X | U]` depends on the latents only through the block occupancy
//! vector, so it is evaluated by summing over block assignments of the
//! motif vertices, each weighted by falling factorials of the occupancies.
//! The variance functions enumerate copy pairs in `K_n` and serve as small-n
//! oracles only.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::graphon::{block_sum, hom_density, StepGraphon, VertexWeights};
use crate::motif::{automorphism_count, canonical_form, canonical_representative, count_embeddings, Motif};
use crate::sampler::SampledGraph;

/// Largest `n` accepted by [`exact_variance`] and [`conditional_variance`].
pub const ORACLE_MAX_N: usize = 12;
/// Largest motif accepted by the variance oracles.
pub const ORACLE_MAX_VERTICES: usize = 4;

/// Number of unlabelled copies of `m` in `g`.
pub fn count(g: &Graph, m: &Motif) -> u64 {
    if is_edge(m) {
        g.edge_count() as u64
    } else if is_triangle(m) {
        g.triangle_count()
    } else {
        count_embeddings(g, m)
    }
}

/// [`count`] without the edge and triangle fast paths.
pub fn count_generic(g: &Graph, m: &Motif) -> u64 {
    count_embeddings(g, m)
}

/// [`count`] on a sampled graph; edges are counted without building the
/// adjacency index.
pub fn count_sampled(g: &SampledGraph, m: &Motif) -> u64 {
    if is_edge(m) {
        g.edge_count() as u64
    } else {
        count(&g.graph(), m)
    }
}

fn is_edge(m: &Motif) -> bool {
    m.vertex_count() == 2 && m.edge_count() == 1
}

fn is_triangle(m: &Motif) -> bool {
    m.vertex_count() == 3 && m.is_complete()
}

/// `(n)_k` as a float, multiplied in the order `n, n-1, ..`.
fn falling(n: u64, k: usize) -> f64 {
    let mut acc = 1.0;
    for i in 0..k as u64 {
        if i >= n {
            return 0.0;
        }
        acc *= (n - i) as f64;
    }
    acc
}

fn binomial(n: u64, k: usize) -> f64 {
    let mut acc = 1.0;
    for i in 0..k as u64 {
        if i >= n {
            return 0.0;
        }
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

fn check_rho(rho: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::InvalidArgument(format!("rho = {rho} must lie in [0, 1]")));
    }
    Ok(())
}

/// `E[X(H, G(n, ρ, W))] = (n)_k / |Aut(H)| · ρ^|E(H)| · t(H, W)`.
pub fn expected_count(m: &Motif, w: &StepGraphon, n: u64, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    let t = hom_density(m, w)?;
    Ok(copy_scale(m, rho) * (t * falling(n, m.vertex_count())))
}

fn copy_scale(m: &Motif, rho: f64) -> f64 {
    rho.powi(m.edge_count() as i32) / automorphism_count(m) as f64
}

/// Number of latents in each block.
pub fn occupancy(latents: &[f64], w: &StepGraphon) -> Result<Vec<u64>> {
    let mut occ = vec![0u64; w.block_count()];
    for &u in latents {
        if !(0.0..1.0).contains(&u) {
            return Err(Error::InvalidArgument(format!("latent {u} outside [0, 1)")));
        }
        occ[w.block_of(u)] += 1;
    }
    Ok(occ)
}

/// `Σ_β Π_E W(β) · Π_b (N_b)_{k_b}`: ordered placements of `m` weighted by
/// their edge probabilities (without `ρ`).
fn placement_sum(m: &Motif, w: &StepGraphon, occ: &[u64]) -> Result<f64> {
    if occ.len() != w.block_count() {
        return Err(Error::InvalidArgument(format!(
            "{} occupancy counts for {} blocks",
            occ.len(),
            w.block_count()
        )));
    }
    block_sum(m, w, &vec![None; m.vertex_count()], VertexWeights::Placements(occ))
}

/// `E[X | U]` for the given latent coordinates.
pub fn conditional_expected_count(latents: &[f64], m: &Motif, w: &StepGraphon, rho: f64) -> Result<f64> {
    conditional_expected_from_occupancy(&occupancy(latents, w)?, m, w, rho)
}

/// `E[X | U]` from the block occupancy counts.
pub fn conditional_expected_from_occupancy(occ: &[u64], m: &Motif, w: &StepGraphon, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    Ok(copy_scale(m, rho) * placement_sum(m, w, occ)?)
}

/// Observed count and its split into edge and label fluctuations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub x: u64,
    pub expected: f64,
    pub conditional_expected: f64,
    pub delta: f64,
    pub delta1: f64,
    pub delta2: f64,
}

impl Decomposition {
    pub fn new(x: u64, expected: f64, conditional_expected: f64) -> Self {
        let xf = x as f64;
        Decomposition {
            x,
            expected,
            conditional_expected,
            delta: xf - expected,
            delta1: xf - conditional_expected,
            delta2: conditional_expected - expected,
        }
    }
}

pub fn decompose(g: &SampledGraph, m: &Motif, w: &StepGraphon) -> Result<Decomposition> {
    let x = count_sampled(g, m);
    let expected = expected_count(m, w, g.n as u64, g.rho)?;
    let conditional = conditional_expected_count(&g.latents, m, w, g.rho)?;
    Ok(Decomposition::new(x, expected, conditional))
}

/// Centred U-statistic `T` with kernel `h(S) = Σ_{copies on S} (Π W − t)`,
/// so that `Δ₂ = C(n, k) ρ^|E| T`.
pub fn ustat_t(latents: &[f64], m: &Motif, w: &StepGraphon) -> Result<f64> {
    let n = latents.len() as u64;
    let k = m.vertex_count();
    if n < k as u64 {
        return Err(Error::Precondition(format!(
            "U-statistic of order {k} needs at least {k} latents, got {n}"
        )));
    }
    let occ = occupancy(latents, w)?;
    let t = hom_density(m, w)?;
    let centred = placement_sum(m, w, &occ)? - t * falling(n, k);
    Ok(centred / automorphism_count(m) as f64 / binomial(n, k))
}

// ---------------------------------------------------------------------------
// Small-n variance oracles
// ---------------------------------------------------------------------------

struct Copy {
    vertices: u16,
    edges: u128,
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = (i.min(j), i.max(j));
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

fn check_oracle_size(m: &Motif, n: usize) -> Result<()> {
    if m.edge_count() == 0 {
        return Err(Error::EdgelessMotif);
    }
    if m.vertex_count() > ORACLE_MAX_VERTICES {
        return Err(Error::MotifTooLarge {
            operation: "variance oracle",
            vertices: m.vertex_count(),
            limit: ORACLE_MAX_VERTICES,
        });
    }
    if n > ORACLE_MAX_N {
        return Err(Error::TooLarge(format!(
            "variance oracle enumerates copy pairs only for n <= {ORACLE_MAX_N}, got {n}"
        )));
    }
    Ok(())
}

/// Every copy of `m` in `K_n`, as vertex and edge masks.
fn copies_in_kn(m: &Motif, n: usize) -> Vec<Copy> {
    let k = m.vertex_count();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut image = vec![0usize; k];
    let mut used = vec![false; n];
    fn rec(
        m: &Motif,
        n: usize,
        v: usize,
        image: &mut [usize],
        used: &mut [bool],
        seen: &mut HashSet<(u16, u128)>,
        out: &mut Vec<Copy>,
    ) {
        if v == image.len() {
            let vertices = image.iter().fold(0u16, |acc, &x| acc | 1 << x);
            let edges = m
                .edges()
                .iter()
                .fold(0u128, |acc, &(a, b)| acc | 1 << pair_index(n, image[a], image[b]));
            if seen.insert((vertices, edges)) {
                out.push(Copy { vertices, edges });
            }
            return;
        }
        for x in 0..n {
            if !used[x] {
                used[x] = true;
                image[v] = x;
                rec(m, n, v + 1, image, used, seen, out);
                used[x] = false;
            }
        }
    }
    if k <= n {
        rec(m, n, 0, &mut image, &mut used, &mut seen, &mut out);
    }
    out
}

/// The subgraph of `K_n` spanned by two copies, relabelled onto `0..`.
fn union_motif(n: usize, vertices: u16, edges: u128) -> Result<Motif> {
    let labels: Vec<usize> = (0..n).filter(|&x| vertices >> x & 1 == 1).collect();
    let mut list = Vec::new();
    for (ia, &a) in labels.iter().enumerate() {
        for (ib, &b) in labels.iter().enumerate().skip(ia + 1) {
            if edges >> pair_index(n, a, b) & 1 == 1 {
                list.push((ia, ib));
            }
        }
    }
    Motif::new(labels.len(), list)
}

/// Exact `Var[X]` by summing covariances over ordered copy pairs that share a
/// vertex:
///
/// `Cov(I_s, I_t) = ρ^{|E_s ∪ E_t|} t(H_s ∪ H_t, W) − ρ^{2|E|} t(H, W)²`.
///
/// Copies of `H` in `K_n` form a single orbit under vertex permutations, so
/// the sum is taken over partners of one fixed copy and multiplied by the
/// number of copies. Limited to `n <= 12` and motifs with at most 4
/// vertices.
pub fn exact_variance(m: &Motif, w: &StepGraphon, n: usize, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    check_oracle_size(m, n)?;
    let copies = copies_in_kn(m, n);
    let Some(base) = copies.first() else {
        return Ok(0.0);
    };
    let e = m.edge_count() as i32;
    let t = hom_density(m, w)?;
    let independent = rho.powi(2 * e) * t * t;
    let mut union_density = BTreeMap::new();
    let mut partner_sum = 0.0;
    for other in &copies {
        if base.vertices & other.vertices == 0 {
            continue;
        }
        let union_edges = base.edges | other.edges;
        let union = union_motif(n, base.vertices | other.vertices, union_edges)?;
        let density = match union_density.get(&canonical_form(&union)) {
            Some(&d) => d,
            None => {
                let d = hom_density(&union, w)?;
                union_density.insert(canonical_form(&union), d);
                d
            }
        };
        partner_sum += rho.powi(union_edges.count_ones() as i32) * density - independent;
    }
    Ok(copies.len() as f64 * partner_sum)
}

/// Exact `Var[X | U]` at the given latents: the sum over ordered copy pairs
/// sharing an edge of `Π_{E_s ∪ E_t} p − Π_{E_s} p · Π_{E_t} p` with
/// `p_{ij} = ρ W(u_i, u_j)`. Same size limits as [`exact_variance`].
pub fn conditional_variance(latents: &[f64], m: &Motif, w: &StepGraphon, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    let n = latents.len();
    check_oracle_size(m, n)?;
    occupancy(latents, w)?;
    let blocks: Vec<usize> = latents.iter().map(|&u| w.block_of(u)).collect();
    let mut p = vec![0.0; n * (n.saturating_sub(1)) / 2];
    for i in 0..n {
        for j in i + 1..n {
            p[pair_index(n, i, j)] = rho * w.value(blocks[i], blocks[j]);
        }
    }
    let product = |mask: u128| -> f64 {
        let mut acc = 1.0;
        let mut rest = mask;
        while rest != 0 {
            acc *= p[rest.trailing_zeros() as usize];
            rest &= rest - 1;
        }
        acc
    };
    let copies = copies_in_kn(m, n);
    let probs: Vec<f64> = copies.iter().map(|c| product(c.edges)).collect();
    let mut total = 0.0;
    for (s, ps) in copies.iter().zip(&probs) {
        for (t, pt) in copies.iter().zip(&probs) {
            if s.edges & t.edges != 0 {
                total += ps * (product(t.edges & !s.edges) - pt);
            }
        }
    }
    Ok(total)
}

/// Orders of magnitude of the mean and variance of `X`, and of `Φ_H`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VarianceOrders {
    /// `n^|V(H)| ρ^|E(H)|`.
    pub mean_order: f64,
    /// `max_F n^(2|V(H)|−|V(F)|) ρ^(2|E(H)|−|E(F)|)`.
    pub var_order: f64,
    pub var_argmax: Motif,
    /// `min_F n^|V(F)| ρ^|E(F)|`.
    pub phi: f64,
    pub phi_argmin: Motif,
}

/// Mean and variance orders over induced subgraphs `F` of `m` with at least
/// one vertex. Ties go to the subgraph with the smallest vertex mask.
pub fn mean_variance_orders(m: &Motif, n: u64, rho: f64) -> Result<VarianceOrders> {
    if m.edge_count() == 0 {
        return Err(Error::EdgelessMotif);
    }
    check_rho(rho)?;
    let k = m.vertex_count() as i32;
    let e = m.edge_count() as i32;
    let nf = n as f64;
    let mut var_best: Option<(f64, Motif)> = None;
    let mut phi_best: Option<(f64, Motif)> = None;
    for mask in 1u32..(1 << k) {
        let f = m.induced(mask);
        let (vf, ef) = (f.vertex_count() as i32, f.edge_count() as i32);
        let var = nf.powi(2 * k - vf) * rho.powi(2 * e - ef);
        let phi = nf.powi(vf) * rho.powi(ef);
        if var_best.as_ref().is_none_or(|(b, _)| var > *b) {
            var_best = Some((var, f.clone()));
        }
        if phi_best.as_ref().is_none_or(|(b, _)| phi < *b) {
            phi_best = Some((phi, f));
        }
    }
    let (var_order, var_argmax) = var_best.expect("motif has vertices");
    let (phi, phi_argmin) = phi_best.expect("motif has vertices");
    Ok(VarianceOrders {
        mean_order: nf.powi(k) * rho.powi(e),
        var_order,
        var_argmax: canonical_representative(&var_argmax),
        phi,
        phi_argmin: canonical_representative(&phi_argmin),
    })
}

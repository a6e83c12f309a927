//! Step graphons (block kernels) and exact motif analytics on them.
//!
//! A [`StepGraphon`] partitions `[0, 1)` into consecutive blocks of widths
//! `pi[0], .., pi[K-1]` and takes the constant value `values[b][c]` on each
//! block pair. Every density below is a finite sum over block assignments of
//! the motif's vertices, so results are exact up to floating-point roundoff.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::motif::{
    automorphism_count, canonical_form, density_exponents, join_catalog, vertex_join, Motif,
};

/// Upper bound on `K^(free vertices)` for any block-assignment sum.
pub const ASSIGNMENT_CAP: u64 = 10_000_000;
/// Absolute tolerance for the H-regularity test.
pub const DEFAULT_REGULARITY_TOL: f64 = 1e-10;

const MEASURE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct StepGraphon {
    pi: Vec<f64>,
    values: Vec<f64>,
    upper: Vec<f64>,
}

impl StepGraphon {
    pub fn new(pi: Vec<f64>, values: Vec<Vec<f64>>) -> Result<Self> {
        let k = pi.len();
        if k == 0 {
            return Err(Error::InvalidGraphon("at least one block is required".into()));
        }
        if let Some(p) = pi.iter().find(|p| !(p.is_finite() && **p > 0.0)) {
            return Err(Error::InvalidGraphon(format!("block measure {p} is not positive")));
        }
        let total: f64 = pi.iter().sum();
        if (total - 1.0).abs() > MEASURE_TOL {
            return Err(Error::InvalidGraphon(format!(
                "block measures sum to {total}, expected 1"
            )));
        }
        if values.len() != k || values.iter().any(|row| row.len() != k) {
            return Err(Error::InvalidGraphon(format!("value matrix must be {k}x{k}")));
        }
        for b in 0..k {
            for c in 0..k {
                let v = values[b][c];
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::InvalidGraphon(format!(
                        "value [{b}][{c}] = {v} is outside [0, 1]"
                    )));
                }
                if v != values[c][b] {
                    return Err(Error::InvalidGraphon(format!(
                        "value matrix is not symmetric at [{b}][{c}]"
                    )));
                }
            }
        }
        let flat: Vec<f64> = values.into_iter().flatten().collect();
        let density: f64 = (0..k)
            .flat_map(|b| (0..k).map(move |c| (b, c)))
            .map(|(b, c)| pi[b] * pi[c] * flat[b * k + c])
            .sum();
        if density <= 0.0 {
            return Err(Error::InvalidGraphon("edge density must be positive".into()));
        }
        let mut upper = Vec::with_capacity(k);
        let mut acc = 0.0;
        for p in &pi {
            acc += p;
            upper.push(acc);
        }
        Ok(StepGraphon {
            pi,
            values: flat,
            upper,
        })
    }

    pub fn constant(p: f64) -> Result<Self> {
        StepGraphon::new(vec![1.0], vec![vec![p]])
    }

    /// Two equal blocks, degree-regular: values `[[.8, .2], [.2, .8]]`.
    pub fn w_sym() -> Self {
        StepGraphon::new(vec![0.5, 0.5], vec![vec![0.8, 0.2], vec![0.2, 0.8]])
            .expect("fixture is valid")
    }

    /// Two equal blocks with unequal degrees: values `[[.9, .3], [.3, .1]]`.
    pub fn w_asym() -> Self {
        StepGraphon::new(vec![0.5, 0.5], vec![vec![0.9, 0.3], vec![0.3, 0.1]])
            .expect("fixture is valid")
    }

    /// `"W_sym"`, `"W_asym"` or `"const:p"`.
    pub fn named(name: &str) -> Result<Self> {
        match name {
            "W_sym" => Ok(StepGraphon::w_sym()),
            "W_asym" => Ok(StepGraphon::w_asym()),
            _ => {
                let p = name
                    .strip_prefix("const:")
                    .ok_or_else(|| {
                        Error::InvalidGraphon(format!(
                            "unknown graphon {name:?} (known: W_sym, W_asym, const:<p>)"
                        ))
                    })?
                    .parse::<f64>()
                    .map_err(|e| Error::InvalidGraphon(format!("{name:?}: {e}")))?;
                StepGraphon::constant(p)
            }
        }
    }

    pub fn block_count(&self) -> usize {
        self.pi.len()
    }

    pub fn block_measures(&self) -> &[f64] {
        &self.pi
    }

    pub fn value(&self, b: usize, c: usize) -> f64 {
        self.values[b * self.block_count() + c]
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn values(&self) -> Vec<Vec<f64>> {
        self.values
            .chunks(self.block_count())
            .map(|row| row.to_vec())
            .collect()
    }

    /// Block containing the latent coordinate `u`; rounding slack at the top
    /// end falls into the last block.
    pub fn block_of(&self, u: f64) -> usize {
        self.upper
            .iter()
            .position(|&hi| u < hi)
            .unwrap_or(self.block_count() - 1)
    }

    /// `d_W(x) = Σ_c π_c W(b, c)` for `x` in block `b`.
    pub fn degree_function(&self) -> Vec<f64> {
        (0..self.block_count())
            .map(|b| {
                (0..self.block_count())
                    .map(|c| self.pi[c] * self.value(b, c))
                    .sum()
            })
            .collect()
    }

    pub fn edge_density(&self) -> f64 {
        let d = self.degree_function();
        self.pi.iter().zip(&d).map(|(p, x)| p * x).sum()
    }

    fn check_block(&self, block: usize) -> Result<()> {
        if block >= self.block_count() {
            return Err(Error::BlockOutOfRange {
                index: block,
                blocks: self.block_count(),
            });
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct GraphonJson {
    pi: Vec<f64>,
    values: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GraphonSource {
    Name(String),
    Explicit(GraphonJson),
}

impl Serialize for StepGraphon {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphonJson {
            pi: self.pi.clone(),
            values: self.values(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for StepGraphon {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = match GraphonSource::deserialize(d)? {
            GraphonSource::Name(name) => StepGraphon::named(&name),
            GraphonSource::Explicit(json) => StepGraphon::new(json.pi, json.values),
        };
        w.map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Block-assignment sums
// ---------------------------------------------------------------------------

/// How free (unpinned) vertices are weighted when assigned to a block.
pub(crate) enum VertexWeights<'a> {
    /// Block measure `π_b`: integrates the latent coordinate.
    Measure,
    /// Ordered injective placement into `occupancy[b]` labelled vertices:
    /// the `j`-th vertex put into block `b` contributes `occupancy[b] - j`.
    Placements(&'a [u64]),
}

/// `Σ_β [Π_{free v} weight(v, β(v))] · [Π_{(a,b) ∈ E} W(β(a), β(b))]` over
/// assignments of free vertices to blocks, with pinned vertices held fixed.
///
/// The edge product and the vertex-weight product are accumulated
/// separately and multiplied once per leaf, so a one-block graphon yields
/// bit-identical results under both weightings.
pub(crate) fn block_sum(
    m: &Motif,
    w: &StepGraphon,
    pinned: &[Option<usize>],
    weights: VertexWeights<'_>,
) -> Result<f64> {
    let k = m.vertex_count();
    let blocks = w.block_count();
    let free = pinned.iter().filter(|p| p.is_none()).count();
    let leaves = (blocks as u64).checked_pow(free as u32);
    if leaves.is_none_or(|l| l > ASSIGNMENT_CAP) {
        return Err(Error::TooLarge(format!(
            "{blocks}^{free} block assignments exceed the cap of {ASSIGNMENT_CAP}"
        )));
    }
    let back_edges: Vec<Vec<usize>> = (0..k)
        .map(|v| (0..v).filter(|&u| m.has_edge(u, v)).collect())
        .collect();
    let mut state = SumState {
        w,
        pinned,
        weights,
        back_edges,
        assignment: vec![0; k],
        used: vec![0; blocks],
        total: 0.0,
    };
    state.descend(0, 1.0, 1.0);
    Ok(state.total)
}

struct SumState<'a> {
    w: &'a StepGraphon,
    pinned: &'a [Option<usize>],
    weights: VertexWeights<'a>,
    back_edges: Vec<Vec<usize>>,
    assignment: Vec<usize>,
    used: Vec<u64>,
    total: f64,
}

impl SumState<'_> {
    fn descend(&mut self, v: usize, edge_prod: f64, vertex_prod: f64) {
        if v == self.assignment.len() {
            self.total += edge_prod * vertex_prod;
            return;
        }
        let choices = match self.pinned[v] {
            Some(b) => b..b + 1,
            None => 0..self.w.block_count(),
        };
        for b in choices {
            let vertex_factor = match (self.pinned[v], &self.weights) {
                (Some(_), _) => 1.0,
                (None, VertexWeights::Measure) => self.w.pi[b],
                (None, VertexWeights::Placements(occ)) => {
                    occ[b].saturating_sub(self.used[b]) as f64
                }
            };
            if vertex_factor == 0.0 {
                continue;
            }
            let mut e = edge_prod;
            for &u in &self.back_edges[v] {
                e *= self.w.value(self.assignment[u], b);
            }
            if e == 0.0 {
                continue;
            }
            self.assignment[v] = b;
            self.used[b] += 1;
            self.descend(v + 1, e, vertex_prod * vertex_factor);
            self.used[b] -= 1;
        }
    }
}

// ---------------------------------------------------------------------------
// Densities
// ---------------------------------------------------------------------------

/// Homomorphism density `t(H, W)`.
pub fn hom_density(m: &Motif, w: &StepGraphon) -> Result<f64> {
    block_sum(m, w, &vec![None; m.vertex_count()], VertexWeights::Measure)
}

/// Conditional homomorphism density with the vertices in `pinned` held at
/// the given blocks; `pinned` holds `(vertex, block)` pairs.
pub fn multipoint_density(m: &Motif, pinned: &[(usize, usize)], w: &StepGraphon) -> Result<f64> {
    let k = m.vertex_count();
    let mut pins = vec![None; k];
    for &(v, b) in pinned {
        if v >= k {
            return Err(Error::VertexOutOfRange { index: v, vertices: k });
        }
        w.check_block(b)?;
        if pins[v].is_some() {
            return Err(Error::InvalidArgument(format!("vertex {v} pinned twice")));
        }
        pins[v] = Some(b);
    }
    block_sum(m, w, &pins, VertexWeights::Measure)
}

/// Rooted density `t_a(x, H, W)` for `x` in `block`.
pub fn rooted_density(m: &Motif, a: usize, block: usize, w: &StepGraphon) -> Result<f64> {
    multipoint_density(m, &[(a, block)], w)
}

/// Vertex-averaged rooted density `t̄(x, H, W)` for `x` in `block`.
pub fn mean_rooted_density(m: &Motif, block: usize, w: &StepGraphon) -> Result<f64> {
    w.check_block(block)?;
    let k = m.vertex_count();
    let mut sum = 0.0;
    for a in 0..k {
        sum += rooted_density(m, a, block, w)?;
    }
    Ok(sum / k as f64)
}

pub fn degree_function(w: &StepGraphon) -> Vec<f64> {
    w.degree_function()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegularityReport {
    pub per_block_mean_rooted: Vec<f64>,
    pub t: f64,
    pub is_regular: bool,
    pub max_deviation: f64,
}

/// Tests whether `t̄(·, H, W)` is constant, i.e. equal to `t(H, W)` on every
/// block, up to the absolute tolerance `tol`.
pub fn is_h_regular(m: &Motif, w: &StepGraphon, tol: f64) -> Result<RegularityReport> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance {tol} must be positive")));
    }
    let t = hom_density(m, w)?;
    let per_block = (0..w.block_count())
        .map(|b| mean_rooted_density(m, b, w))
        .collect::<Result<Vec<f64>>>()?;
    let max_deviation = per_block.iter().map(|x| (x - t).abs()).fold(0.0, f64::max);
    Ok(RegularityReport {
        per_block_mean_rooted: per_block,
        t,
        is_regular: max_deviation <= tol,
        max_deviation,
    })
}

/// Number of copies of `H` on `|V(H)|` labelled vertices, `|V(H)|! / |Aut(H)|`.
fn copies_on_own_vertices(m: &Motif) -> f64 {
    let k = m.vertex_count();
    let factorial: f64 = (1..=k).map(|i| i as f64).product();
    factorial / automorphism_count(m) as f64
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// First-projection variance `ξ₁` of the label U-statistic kernel, from
/// vertex joins:
///
/// `ξ₁ = (|G_H| / k)² [Σ_{a,b} t(H ⊕_{a,b} H, W) − k² t(H, W)²]`
///
/// with `k = |V(H)|` and `|G_H| = k! / |Aut(H)|`.
pub fn xi1(m: &Motif, w: &StepGraphon) -> Result<f64> {
    if m.edge_count() == 0 {
        return Err(Error::EdgelessMotif);
    }
    let k = m.vertex_count();
    // Joins in the same isomorphism class have the same density.
    let mut classes: BTreeMap<_, (Motif, usize)> = BTreeMap::new();
    for a in 0..k {
        for b in 0..k {
            let joined = vertex_join(m, a, b)?;
            classes
                .entry(canonical_form(&joined))
                .or_insert((joined, 0))
                .1 += 1;
        }
    }
    let mut join_sum = 0.0;
    for (joined, mult) in classes.values() {
        join_sum += *mult as f64 * hom_density(joined, w)?;
    }
    let t = hom_density(m, w)?;
    let scale = copies_on_own_vertices(m) / k as f64;
    Ok(scale * scale * (join_sum - (k * k) as f64 * t * t))
}

/// The two limiting variance contributions at criticality, both normalised
/// by `n^(2|V(H)|-1) ρ^(2|E(H)|)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CriticalTerms {
    /// Label part: `k² / (k!)² · ξ₁`.
    pub label: f64,
    /// Edge part: `Σ_{F ∈ S(H)} Σ_R η(H,F,R) t(R,W) / (c^(|V(F)|-1) (2k-|V(F)|)!)`.
    pub edge: f64,
}

impl CriticalTerms {
    /// Limiting share of the variance carried by the edge-randomness part.
    pub fn kappa(&self) -> f64 {
        1.0 - self.label / (self.label + self.edge)
    }
}

pub fn critical_terms(m: &Motif, w: &StepGraphon, c: f64) -> Result<CriticalTerms> {
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidArgument(format!("critical constant c = {c} must be positive")));
    }
    if is_h_regular(m, w, DEFAULT_REGULARITY_TOL)?.is_regular {
        return Err(Error::RegularGraphon);
    }
    let k = m.vertex_count();
    let profile = density_exponents(m)?;
    let xi = xi1(m, w)?;
    let label = (k * k) as f64 / factorial(k).powi(2) * xi;
    let mut edge = 0.0;
    for f in &profile.m1_maximizers {
        let kf = f.vertex_count();
        let catalog = join_catalog(m, f)?;
        let mut inner = 0.0;
        for class in &catalog.union_classes {
            inner += class.multiplicity as f64 * hom_density(&class.union, w)?;
        }
        edge += inner / (c.powi(kf as i32 - 1) * factorial(2 * k - kf));
    }
    Ok(CriticalTerms { label, edge })
}

/// Limiting share `κ` of `Var[Δ₁]` in the total variance when
/// `n ρ^(m₁(H)) → c`. Rejects H-regular graphons, where `ξ₁ = 0`.
pub fn kappa(m: &Motif, w: &StepGraphon, c: f64) -> Result<f64> {
    Ok(critical_terms(m, w, c)?.kappa())
}

/// Closed form of [`kappa`] for strictly strongly balanced motifs:
///
/// `κ = (t/|Aut|) / (t/|Aut| + c^(k-1) ξ₁ / ((k-1)!)²)`.
pub fn kappa_strictly_strongly_balanced(m: &Motif, w: &StepGraphon, c: f64) -> Result<f64> {
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidArgument(format!("critical constant c = {c} must be positive")));
    }
    let profile = density_exponents(m)?;
    if !profile.strictly_strongly_balanced {
        return Err(Error::Precondition(
            "motif is not strictly strongly balanced".into(),
        ));
    }
    if is_h_regular(m, w, DEFAULT_REGULARITY_TOL)?.is_regular {
        return Err(Error::RegularGraphon);
    }
    let k = m.vertex_count();
    let t_over_aut = hom_density(m, w)? / automorphism_count(m) as f64;
    let label = c.powi(k as i32 - 1) * xi1(m, w)? / factorial(k - 1).powi(2);
    Ok(t_over_aut / (t_over_aut + label))
}

//! Exact combinatorics of small pattern graphs ("motifs").
//!
//! A [`Motif`] is a simple undirected graph on at most 32 vertices, stored as
//! adjacency bitmasks. Vertices are 0-based in the Rust API; the JSON form
//! (`{"vertices": k, "edges": [[a, b], ...]}`) is 1-based.
//!
//! Everything here is exact: isomorphism classes are keyed by a canonical
//! form computed by partition refinement with individualization, density
//! exponents are rationals, and join multiplicities are integer counts.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Width of the adjacency bitmask; hard limit on motif size.
pub const MAX_MOTIF_VERTICES: usize = 32;
/// Largest motif accepted by the subset enumeration behind density exponents.
pub const EXPONENT_MAX_VERTICES: usize = 12;
/// Largest motif accepted by [`join_catalog`].
pub const JOIN_CATALOG_MAX_VERTICES: usize = 6;

/// Names accepted by [`Motif::named`].
pub const NAMED_MOTIFS: &[&str] = &[
    "edge",
    "path3",
    "triangle",
    "k4",
    "c4",
    "c5",
    "triangle_pendant",
    "fig1b",
    "fig2a",
];

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Motif {
    adj: Vec<u32>,
    edges: Vec<(usize, usize)>,
}

impl Motif {
    /// Builds a motif on `vertex_count` vertices from 0-based edges.
    pub fn new<I>(vertex_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if vertex_count == 0 {
            return Err(Error::InvalidMotif("vertex count must be positive".into()));
        }
        if vertex_count > MAX_MOTIF_VERTICES {
            return Err(Error::MotifTooLarge {
                operation: "motif construction",
                vertices: vertex_count,
                limit: MAX_MOTIF_VERTICES,
            });
        }
        let mut adj = vec![0u32; vertex_count];
        let mut list = Vec::new();
        for (a, b) in edges {
            if a >= vertex_count || b >= vertex_count {
                return Err(Error::InvalidMotif(format!(
                    "edge ({a}, {b}) has an endpoint outside 0..{vertex_count}"
                )));
            }
            if a == b {
                return Err(Error::InvalidMotif(format!("self-loop at vertex {a}")));
            }
            if adj[a] & (1 << b) != 0 {
                return Err(Error::InvalidMotif(format!("duplicate edge ({a}, {b})")));
            }
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
            list.push((a.min(b), a.max(b)));
        }
        list.sort_unstable();
        Ok(Motif { adj, edges: list })
    }

    /// Builds a motif from 1-based edges, as used by the JSON format.
    pub fn from_one_based(vertex_count: usize, edges: &[[usize; 2]]) -> Result<Self> {
        let mut zero = Vec::with_capacity(edges.len());
        for &[a, b] in edges {
            if a == 0 || b == 0 {
                return Err(Error::InvalidMotif(format!(
                    "edge [{a}, {b}] uses vertex 0; indices are 1-based"
                )));
            }
            zero.push((a - 1, b - 1));
        }
        Motif::new(vertex_count, zero)
    }

    pub fn named(name: &str) -> Result<Self> {
        let m = match name {
            "edge" | "k2" => Motif::complete(2),
            "path3" => Motif::path(3),
            "triangle" | "k3" => Motif::complete(3),
            "k4" => Motif::complete(4),
            "c4" => Motif::cycle(4),
            "c5" => Motif::cycle(5),
            "triangle_pendant" => Motif::new(4, [(0, 1), (0, 2), (1, 2), (2, 3)])?,
            // K4 minus an edge with a pendant vertex hanging off a degree-3 vertex.
            "fig1b" => Motif::from_one_based(5, &[[1, 2], [1, 3], [2, 3], [2, 4], [3, 4], [1, 5]])?,
            // A triangle sharing an edge with a 5-cycle.
            "fig2a" => Motif::from_one_based(
                6,
                &[[1, 2], [1, 3], [2, 4], [2, 3], [3, 5], [4, 6], [5, 6]],
            )?,
            other => {
                return Err(Error::InvalidMotif(format!(
                    "unknown motif name {other:?} (known: {})",
                    NAMED_MOTIFS.join(", ")
                )))
            }
        };
        Ok(m)
    }

    pub fn complete(k: usize) -> Self {
        let edges = (0..k).flat_map(|a| (a + 1..k).map(move |b| (a, b)));
        Motif::new(k, edges).expect("complete graph is a valid motif")
    }

    pub fn path(k: usize) -> Self {
        Motif::new(k, (1..k).map(|b| (b - 1, b))).expect("path is a valid motif")
    }

    pub fn cycle(k: usize) -> Self {
        assert!(k >= 3, "cycles need at least 3 vertices");
        Motif::new(k, (0..k).map(|a| (a, (a + 1) % k))).expect("cycle is a valid motif")
    }

    pub fn empty(k: usize) -> Self {
        Motif::new(k, []).expect("edgeless graph is a valid motif")
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as 0-based pairs `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a] & (1 << b) != 0
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    /// Neighbourhood of `v` as a bitmask over vertex indices.
    pub fn neighbor_mask(&self, v: usize) -> u32 {
        self.adj[v]
    }

    pub fn is_complete(&self) -> bool {
        let k = self.vertex_count();
        self.edge_count() == k * (k - 1) / 2
    }

    /// Edges as 1-based pairs, the JSON convention.
    pub fn one_based_edges(&self) -> Vec<[usize; 2]> {
        self.edges.iter().map(|&(a, b)| [a + 1, b + 1]).collect()
    }

    /// Subgraph induced on the vertices in `mask`, relabelled in increasing
    /// vertex order.
    pub fn induced(&self, mask: u32) -> Motif {
        let verts: Vec<usize> = (0..self.vertex_count()).filter(|&v| mask & (1 << v) != 0).collect();
        let mut pos = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in verts.iter().enumerate() {
            pos[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(a, b)| pos[a] != usize::MAX && pos[b] != usize::MAX)
            .map(|&(a, b)| (pos[a], pos[b]));
        Motif::new(verts.len().max(1), edges).expect("induced subgraph is a valid motif")
    }

    /// Relabels vertex `v` as `perm[v]`.
    ///
    /// Panics unless `perm` is a permutation of `0..vertex_count`.
    pub fn permuted(&self, perm: &[usize]) -> Motif {
        assert_eq!(perm.len(), self.vertex_count());
        Motif::new(
            self.vertex_count(),
            self.edges.iter().map(|&(a, b)| (perm[a], perm[b])),
        )
        .expect("relabelling must be a permutation")
    }

    pub fn to_graph(&self) -> Graph {
        Graph::from_edges(self.vertex_count(), self.edges.iter().copied())
    }

    fn edge_count_within(&self, mask: u32) -> usize {
        let twice: u32 = (0..self.vertex_count())
            .filter(|&v| mask & (1 << v) != 0)
            .map(|v| (self.adj[v] & mask).count_ones())
            .sum();
        (twice / 2) as usize
    }

    fn full_mask(&self) -> u32 {
        if self.vertex_count() == 32 {
            u32::MAX
        } else {
            (1u32 << self.vertex_count()) - 1
        }
    }
}

impl fmt::Display for Motif {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} vertices [", self.vertex_count())?;
        for (i, [a, b]) in self.one_based_edges().into_iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}-{b}")?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct MotifJson {
    vertices: usize,
    edges: Vec<[usize; 2]>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MotifSource {
    Name(String),
    Explicit(MotifJson),
}

impl Serialize for Motif {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MotifJson {
            vertices: self.vertex_count(),
            edges: self.one_based_edges(),
        }
        .serialize(s)
    }
}

/// Accepts either the explicit object form or a built-in name.
impl<'de> Deserialize<'de> for Motif {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = match MotifSource::deserialize(d)? {
            MotifSource::Name(name) => Motif::named(&name),
            MotifSource::Explicit(json) => Motif::from_one_based(json.vertices, &json.edges),
        };
        m.map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Canonical form
// ---------------------------------------------------------------------------

/// Isomorphism-class key: equal iff the motifs are isomorphic.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    vertices: usize,
    rows: Vec<u32>,
}

pub fn canonical_form(m: &Motif) -> CanonicalForm {
    canonical_labeling(m).0
}

/// The canonically relabelled copy of `m`; isomorphic motifs map to the same
/// representative.
pub fn canonical_representative(m: &Motif) -> Motif {
    let (_, order) = canonical_labeling(m);
    let mut perm = vec![0; m.vertex_count()];
    for (pos, &v) in order.iter().enumerate() {
        perm[v] = pos;
    }
    m.permuted(&perm)
}

pub fn is_isomorphic(a: &Motif, b: &Motif) -> bool {
    a.vertex_count() == b.vertex_count()
        && a.edge_count() == b.edge_count()
        && canonical_form(a) == canonical_form(b)
}

fn canonical_labeling(m: &Motif) -> (CanonicalForm, Vec<usize>) {
    let k = m.vertex_count();
    let mut best: Option<(Vec<u32>, Vec<usize>)> = None;
    search_leaves(&m.adj, vec![(0..k).collect()], &mut best);
    let (rows, order) = best.expect("search always reaches a leaf");
    (CanonicalForm { vertices: k, rows }, order)
}

/// Splits cells by neighbour counts into every current cell until stable.
/// Sub-cells are ordered by their count vectors, so the result depends only
/// on the isomorphism type of (graph, ordered partition).
fn refine(adj: &[u32], cells: &mut Vec<Vec<usize>>) {
    loop {
        let masks: Vec<u32> = cells
            .iter()
            .map(|c| c.iter().fold(0u32, |acc, &v| acc | (1 << v)))
            .collect();
        let mut next: Vec<Vec<usize>> = Vec::with_capacity(cells.len());
        for cell in cells.iter() {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<u32>, usize)> = cell
                .iter()
                .map(|&v| (masks.iter().map(|&mk| (adj[v] & mk).count_ones()).collect(), v))
                .collect();
            keyed.sort();
            let mut start = 0;
            for i in 1..=keyed.len() {
                if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                    next.push(keyed[start..i].iter().map(|x| x.1).collect());
                    start = i;
                }
            }
        }
        let stable = next.len() == cells.len();
        *cells = next;
        if stable {
            return;
        }
    }
}

fn are_twins(adj: &[u32], u: usize, v: usize) -> bool {
    let keep = !((1u32 << u) | (1u32 << v));
    adj[u] & keep == adj[v] & keep
}

fn permuted_rows(adj: &[u32], order: &[usize]) -> Vec<u32> {
    order
        .iter()
        .map(|&v| {
            order
                .iter()
                .enumerate()
                .filter(|&(_, &w)| adj[v] & (1 << w) != 0)
                .fold(0u32, |row, (j, _)| row | (1 << j))
        })
        .collect()
}

fn search_leaves(adj: &[u32], mut cells: Vec<Vec<usize>>, best: &mut Option<(Vec<u32>, Vec<usize>)>) {
    refine(adj, &mut cells);
    match cells.iter().position(|c| c.len() > 1) {
        None => {
            let order: Vec<usize> = cells.iter().map(|c| c[0]).collect();
            let rows = permuted_rows(adj, &order);
            if best.as_ref().is_none_or(|(b, _)| rows < *b) {
                *best = Some((rows, order));
            }
        }
        Some(idx) => {
            let cell = cells[idx].clone();
            let mut tried: Vec<usize> = Vec::new();
            for &v in &cell {
                // Swapping twins is an automorphism fixing the partition, so
                // their subtrees yield the same leaves.
                if tried.iter().any(|&u| are_twins(adj, u, v)) {
                    continue;
                }
                tried.push(v);
                let rest: Vec<usize> = cell.iter().copied().filter(|&w| w != v).collect();
                let mut next = cells.clone();
                next.splice(idx..=idx, [vec![v], rest]);
                search_leaves(adj, next, best);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Automorphisms and copy counts
// ---------------------------------------------------------------------------

/// Number of vertex permutations preserving the edge set.
///
/// Computed as a product of orbit sizes along a pointwise-stabilizer chain,
/// so it never enumerates the group itself.
pub fn automorphism_count(m: &Motif) -> u128 {
    let k = m.vertex_count();
    let mut total: u128 = 1;
    let mut fixed: Vec<usize> = Vec::new();
    for v in 0..k {
        let orbit = (0..k)
            .filter(|&w| extends_to_automorphism(m, &fixed, v, w))
            .count();
        total *= orbit as u128;
        fixed.push(v);
    }
    total
}

fn extends_to_automorphism(m: &Motif, fixed: &[usize], v: usize, w: usize) -> bool {
    let k = m.vertex_count();
    if m.degree(v) != m.degree(w) || (fixed.contains(&w) && v != w) {
        return false;
    }
    let mut order: Vec<usize> = fixed.to_vec();
    order.push(v);
    order.extend((0..k).filter(|x| !fixed.contains(x) && *x != v));
    let mut image = vec![usize::MAX; k];
    let mut used = 0u32;
    for &f in fixed {
        image[f] = f;
        used |= 1 << f;
    }
    image[v] = w;
    used |= 1 << w;
    // Pairs among the forced prefix still need checking.
    let prefix = fixed.len() + 1;
    for i in 0..prefix {
        for j in 0..i {
            let (a, b) = (order[i], order[j]);
            if m.has_edge(a, b) != m.has_edge(image[a], image[b]) {
                return false;
            }
        }
    }
    extend_map(m, &order, prefix, &mut image, used)
}

fn extend_map(m: &Motif, order: &[usize], depth: usize, image: &mut [usize], used: u32) -> bool {
    if depth == order.len() {
        return true;
    }
    let x = order[depth];
    for y in 0..m.vertex_count() {
        if used & (1 << y) != 0 || m.degree(y) != m.degree(x) {
            continue;
        }
        let consistent = order[..depth]
            .iter()
            .all(|&p| m.has_edge(x, p) == m.has_edge(y, image[p]));
        if consistent {
            image[x] = y;
            if extend_map(m, order, depth + 1, image, used | (1 << y)) {
                return true;
            }
            image[x] = usize::MAX;
        }
    }
    false
}

fn falling_factorial(n: u128, k: usize) -> Option<u128> {
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        if i > n {
            return Some(0);
        }
        acc = acc.checked_mul(n - i)?;
    }
    Some(acc)
}

/// Number of copies of `m` in the complete graph `K_n`:
/// `n (n-1) ... (n-k+1) / |Aut(m)|`.
pub fn copies_in_complete(m: &Motif, n: u64) -> Result<u128> {
    let k = m.vertex_count();
    if (n as u128) < k as u128 {
        return Ok(0);
    }
    let ordered = falling_factorial(n as u128, k).ok_or(Error::Overflow("copies in complete graph"))?;
    Ok(ordered / automorphism_count(m))
}

/// Number of unlabelled (not necessarily induced) copies of `m` in `host`.
///
/// Counts injective homomorphisms of the non-isolated part of `m` by
/// backtracking with degree pruning, places isolated motif vertices
/// combinatorially, then divides by `|Aut(m)|`.
pub fn count_embeddings(host: &Graph, m: &Motif) -> u64 {
    let n = host.vertex_count();
    let k = m.vertex_count();
    if k > n {
        return 0;
    }
    let core: Vec<usize> = (0..k).filter(|&v| m.degree(v) > 0).collect();
    let isolated = k - core.len();
    let homs = if core.is_empty() {
        1
    } else {
        injective_homomorphisms(host, m, &core) as u128
    };
    let placements = falling_factorial((n - core.len()) as u128, isolated).unwrap_or(0);
    let total = homs * placements / automorphism_count(m);
    total as u64
}

struct PlanStep {
    vertex: usize,
    anchor: Option<usize>,
    earlier_neighbors: Vec<usize>,
}

fn embedding_plan(m: &Motif, core: &[usize]) -> Vec<PlanStep> {
    let mut placed: Vec<usize> = Vec::with_capacity(core.len());
    let mut remaining: Vec<usize> = core.to_vec();
    let mut plan = Vec::with_capacity(core.len());
    while !remaining.is_empty() {
        let (idx, &v) = remaining
            .iter()
            .enumerate()
            .max_by_key(|&(_, &v)| {
                let attached = placed.iter().filter(|&&p| m.has_edge(v, p)).count();
                (attached, m.degree(v), std::cmp::Reverse(v))
            })
            .expect("remaining is non-empty");
        remaining.remove(idx);
        let earlier: Vec<usize> = placed
            .iter()
            .enumerate()
            .filter(|&(_, &p)| m.has_edge(v, p))
            .map(|(pos, _)| pos)
            .collect();
        plan.push(PlanStep {
            vertex: v,
            anchor: earlier.first().copied(),
            earlier_neighbors: earlier,
        });
        placed.push(v);
    }
    plan
}

fn injective_homomorphisms(host: &Graph, m: &Motif, core: &[usize]) -> u64 {
    let plan = embedding_plan(m, core);
    let mut image = vec![0usize; plan.len()];
    let mut used = vec![false; host.vertex_count()];
    extend_embedding(host, m, &plan, 0, &mut image, &mut used)
}

fn extend_embedding(
    host: &Graph,
    m: &Motif,
    plan: &[PlanStep],
    depth: usize,
    image: &mut [usize],
    used: &mut [bool],
) -> u64 {
    if depth == plan.len() {
        return 1;
    }
    let step = &plan[depth];
    let need = m.degree(step.vertex);
    let mut total = 0;
    let mut try_candidate = |c: usize, image: &mut [usize], used: &mut [bool]| {
        if used[c] || host.degree(c) < need {
            return;
        }
        if step.earlier_neighbors.iter().all(|&p| host.has_edge(c, image[p])) {
            image[depth] = c;
            used[c] = true;
            total += extend_embedding(host, m, plan, depth + 1, image, used);
            used[c] = false;
        }
    };
    match step.anchor {
        Some(a) => {
            let anchor_image = image[a];
            for &c in host.neighbors(anchor_image) {
                try_candidate(c as usize, image, used);
            }
        }
        None => {
            for c in 0..host.vertex_count() {
                try_candidate(c, image, used);
            }
        }
    }
    total
}

// ---------------------------------------------------------------------------
// Density exponents
// ---------------------------------------------------------------------------

/// An exact rational exponent such as `m(H)` or `m₁(H)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exponent(pub Ratio<i64>);

impl Exponent {
    pub fn new(numer: i64, denom: i64) -> Self {
        Exponent(Ratio::new(numer, denom))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    pub fn recip(&self) -> Exponent {
        Exponent(self.0.recip())
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityProfile {
    /// max |E(F)| / |V(F)| over non-empty subgraphs.
    pub m: Exponent,
    /// max |E(F)| / (|V(F)| - 1) over subgraphs with at least two vertices.
    pub m1: Exponent,
    /// Isomorphism classes attaining `m`, as canonical representatives.
    pub m_maximizers: Vec<Motif>,
    /// Isomorphism classes attaining `m1`.
    pub m1_maximizers: Vec<Motif>,
    pub balanced: bool,
    pub strictly_balanced: bool,
    pub strongly_balanced: bool,
    pub strictly_strongly_balanced: bool,
}

/// Computes `m(H)`, `m₁(H)`, their maximizer classes and the balancedness
/// flags by enumerating induced subgraphs on every vertex subset. A
/// non-induced subgraph never beats the induced one on the same vertices.
pub fn density_exponents(m: &Motif) -> Result<DensityProfile> {
    let k = m.vertex_count();
    if m.edge_count() == 0 {
        return Err(Error::EdgelessMotif);
    }
    if k > EXPONENT_MAX_VERTICES {
        return Err(Error::MotifTooLarge {
            operation: "density exponents",
            vertices: k,
            limit: EXPONENT_MAX_VERTICES,
        });
    }
    let full = m.full_mask();
    let mut best_m = Ratio::new(0i64, 1);
    let mut best_m1 = Ratio::new(0i64, 1);
    let mut m_masks: Vec<u32> = Vec::new();
    let mut m1_masks: Vec<u32> = Vec::new();
    for mask in 1..=full {
        let v = mask.count_ones() as i64;
        let e = m.edge_count_within(mask) as i64;
        let r = Ratio::new(e, v);
        if r > best_m {
            best_m = r;
            m_masks.clear();
        }
        if r == best_m {
            m_masks.push(mask);
        }
        if v >= 2 {
            let r1 = Ratio::new(e, v - 1);
            if r1 > best_m1 {
                best_m1 = r1;
                m1_masks.clear();
            }
            if r1 == best_m1 {
                m1_masks.push(mask);
            }
        }
    }
    let e_h = m.edge_count() as i64;
    let k_i = k as i64;
    Ok(DensityProfile {
        m: Exponent(best_m),
        m1: Exponent(best_m1),
        m_maximizers: classes_of(m, &m_masks),
        m1_maximizers: classes_of(m, &m1_masks),
        balanced: best_m == Ratio::new(e_h, k_i),
        strictly_balanced: m_masks == [full],
        strongly_balanced: k >= 2 && best_m1 == Ratio::new(e_h, k_i - 1),
        strictly_strongly_balanced: m1_masks == [full],
    })
}

fn classes_of(m: &Motif, masks: &[u32]) -> Vec<Motif> {
    let mut classes: BTreeMap<CanonicalForm, Motif> = BTreeMap::new();
    for &mask in masks {
        let sub = m.induced(mask);
        let (form, _) = canonical_labeling(&sub);
        classes.entry(form).or_insert_with(|| canonical_representative(&sub));
    }
    classes.into_values().collect()
}

// ---------------------------------------------------------------------------
// Vertex joins and join catalogs
// ---------------------------------------------------------------------------

/// Glues two copies of `m` by identifying vertex `a` of the first copy with
/// vertex `b` of the second. The second copy's other vertices are appended
/// after the first copy in increasing order.
pub fn vertex_join(m: &Motif, a: usize, b: usize) -> Result<Motif> {
    let k = m.vertex_count();
    for index in [a, b] {
        if index >= k {
            return Err(Error::VertexOutOfRange { index, vertices: k });
        }
    }
    let second = |x: usize| -> usize {
        match x.cmp(&b) {
            std::cmp::Ordering::Equal => a,
            std::cmp::Ordering::Less => k + x,
            std::cmp::Ordering::Greater => k + x - 1,
        }
    };
    let edges = m
        .edges()
        .iter()
        .copied()
        .chain(m.edges().iter().map(|&(x, y)| (second(x), second(y))));
    Motif::new(2 * k - 1, edges)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JoinClass {
    /// Canonical representative of the union class `R`.
    pub union: Motif,
    /// Number of ordered copy pairs with intersection `F` and union `R`.
    pub multiplicity: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JoinCatalog {
    pub intersection_class: Motif,
    pub union_classes: Vec<JoinClass>,
}

impl JoinCatalog {
    pub fn total_pairs(&self) -> u128 {
        self.union_classes.iter().map(|c| c.multiplicity).sum()
    }
}

/// Enumerates the ways two copies of `m` overlap in a copy of `f` on the
/// labelled vertex set `{0, .., 2|V(m)| - |V(f)| - 1}`, grouped by the
/// isomorphism class of the union.
///
/// The symmetric group on the union's vertex set acts transitively on the
/// first copy, so the first copy is pinned to vertices `0..k` and each tally
/// is scaled by the number of copies of `m` in the complete graph.
pub fn join_catalog(m: &Motif, f: &Motif) -> Result<JoinCatalog> {
    let k = m.vertex_count();
    if m.edge_count() == 0 {
        return Err(Error::EdgelessMotif);
    }
    if f.edge_count() == 0 {
        return Err(Error::Precondition(
            "the intersection pattern must have at least one edge".into(),
        ));
    }
    if k > JOIN_CATALOG_MAX_VERTICES {
        return Err(Error::MotifTooLarge {
            operation: "join catalog",
            vertices: k,
            limit: JOIN_CATALOG_MAX_VERTICES,
        });
    }
    let kf = f.vertex_count();
    if kf > k || count_embeddings(&m.to_graph(), f) == 0 {
        return Err(Error::NotEmbeddable);
    }
    let total = 2 * k - kf;
    let f_form = canonical_form(f);
    let pair_bit = |a: usize, b: usize| -> u128 { 1u128 << (a.min(b) * total + a.max(b)) };
    let first: u128 = m.edges().iter().fold(0, |acc, &(a, b)| acc | pair_bit(a, b));

    let mut tally: BTreeMap<CanonicalForm, (Motif, u128)> = BTreeMap::new();
    for shared in 0u32..(1 << k) {
        if shared.count_ones() as usize != kf {
            continue;
        }
        let mut slots: Vec<usize> = (0..k).filter(|&v| shared & (1 << v) != 0).collect();
        slots.extend(k..total);
        let mut seen: HashSet<u128> = HashSet::new();
        for_each_permutation(k, |perm| {
            let second: u128 = m
                .edges()
                .iter()
                .fold(0, |acc, &(a, b)| acc | pair_bit(slots[perm[a]], slots[perm[b]]));
            if !seen.insert(second) {
                return;
            }
            let common = first & second;
            let inter = Motif::new(
                kf,
                edges_in(common, total).map(|(a, b)| (slot_rank(shared, a), slot_rank(shared, b))),
            )
            .expect("intersection is a simple graph");
            if canonical_form(&inter) != f_form {
                return;
            }
            let union = Motif::new(total, edges_in(first | second, total)).expect("union is simple");
            let (form, _) = canonical_labeling(&union);
            tally
                .entry(form)
                .or_insert_with(|| (canonical_representative(&union), 0))
                .1 += 1;
        });
    }
    let first_copies = copies_in_complete(m, total as u64)?;
    let union_classes = tally
        .into_values()
        .map(|(union, count)| JoinClass {
            union,
            multiplicity: count * first_copies,
        })
        .collect();
    Ok(JoinCatalog {
        intersection_class: canonical_representative(f),
        union_classes,
    })
}

fn edges_in(mask: u128, total: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..total).flat_map(move |a| {
        (a + 1..total)
            .filter(move |&b| mask & (1u128 << (a * total + b)) != 0)
            .map(move |b| (a, b))
    })
}

/// Position of vertex `v` among the set bits of `mask` (only called for
/// vertices inside `mask`).
fn slot_rank(mask: u32, v: usize) -> usize {
    (mask & ((1u32 << v) - 1)).count_ones() as usize
}

/// Calls `f` with every permutation of `0..n` (Heap's algorithm).
pub(crate) fn for_each_permutation<F: FnMut(&[usize])>(n: usize, mut f: F) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    f(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            f(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

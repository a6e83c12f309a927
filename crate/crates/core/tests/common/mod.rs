//! Brute-force oracles shared by the integration tests. None of these call
//! into the library's own algorithms beyond plain accessors.
#![allow(dead_code)]

use std::collections::HashSet;

use graphon_motifs::graph::Graph;
use graphon_motifs::graphon::StepGraphon;
use graphon_motifs::motif::Motif;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

fn pairs(k: usize) -> Vec<(usize, usize)> {
    (0..k).flat_map(|a| (a + 1..k).map(move |b| (a, b))).collect()
}

fn pair_table(k: usize) -> Vec<Vec<usize>> {
    let mut table = vec![vec![usize::MAX; k]; k];
    for (i, (a, b)) in pairs(k).into_iter().enumerate() {
        table[a][b] = i;
        table[b][a] = i;
    }
    table
}

fn edge_mask(table: &[Vec<usize>], edges: &[(usize, usize)], perm: &[usize]) -> u32 {
    edges
        .iter()
        .fold(0, |acc, &(a, b)| acc | 1 << table[perm[a]][perm[b]])
}

/// Minimum edge mask over all relabellings.
pub fn brute_canonical(m: &Motif) -> u32 {
    let k = m.vertex_count();
    let table = pair_table(k);
    permutations(k)
        .iter()
        .map(|p| edge_mask(&table, m.edges(), p))
        .min()
        .unwrap()
}

/// One representative per isomorphism class of graphs on `k` vertices.
pub fn all_graphs(k: usize) -> Vec<Motif> {
    let all = pairs(k);
    let table = pair_table(k);
    let perms = permutations(k);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u32..1 << all.len() {
        let edges: Vec<(usize, usize)> = (0..all.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| all[i])
            .collect();
        let canon = perms.iter().map(|p| edge_mask(&table, &edges, p)).min().unwrap();
        if seen.insert(canon) {
            out.push(Motif::new(k, edges).unwrap());
        }
    }
    out
}

pub fn is_connected(m: &Motif) -> bool {
    let k = m.vertex_count();
    let mut seen = vec![false; k];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for u in 0..k {
            if !seen[u] && m.has_edge(u, v) {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    seen.iter().all(|&s| s)
}

pub fn connected_graphs(k: usize) -> Vec<Motif> {
    all_graphs(k).into_iter().filter(is_connected).collect()
}

/// Motifs with at least one edge on at most `max_k` vertices.
pub fn motifs_up_to(max_k: usize) -> Vec<Motif> {
    (2..=max_k)
        .flat_map(all_graphs)
        .filter(|m| m.edge_count() > 0)
        .collect()
}

/// Permutations of `0..k` preserving the edge set.
pub fn brute_automorphisms(m: &Motif) -> u128 {
    let k = m.vertex_count();
    let table = pair_table(k);
    let base = edge_mask(&table, m.edges(), &(0..k).collect::<Vec<_>>());
    permutations(k)
        .iter()
        .filter(|p| edge_mask(&table, m.edges(), p) == base)
        .count() as u128
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

/// Copies of `m` in `host`, by enumerating vertex subsets and the distinct
/// edge sets of all bijections onto each subset.
pub fn brute_count(host: &Graph, m: &Motif) -> u64 {
    let k = m.vertex_count();
    let perms = permutations(k);
    let mut total = 0;
    for subset in combinations(host.vertex_count(), k) {
        let mut images = HashSet::new();
        for p in &perms {
            let ok = m
                .edges()
                .iter()
                .all(|&(a, b)| host.has_edge(subset[p[a]], subset[p[b]]));
            if ok {
                let mut image: Vec<(usize, usize)> = m
                    .edges()
                    .iter()
                    .map(|&(a, b)| (p[a].min(p[b]), p[a].max(p[b])))
                    .collect();
                image.sort_unstable();
                images.insert(image);
            }
        }
        total += images.len() as u64;
    }
    total
}

/// Copies of `m` in the complete graph on `n` vertices as (vertex mask,
/// sorted edge list).
pub fn copies_in_kn(m: &Motif, n: usize) -> Vec<(u32, Vec<(usize, usize)>)> {
    let k = m.vertex_count();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut tuple = vec![0usize; k];
    for code in 0..n.pow(k as u32) {
        let mut c = code;
        for slot in tuple.iter_mut() {
            *slot = c % n;
            c /= n;
        }
        let vmask: u32 = tuple.iter().fold(0, |acc, &v| acc | 1 << v);
        if vmask.count_ones() as usize != k {
            continue;
        }
        let mut edges: Vec<(usize, usize)> = m
            .edges()
            .iter()
            .map(|&(a, b)| (tuple[a].min(tuple[b]), tuple[a].max(tuple[b])))
            .collect();
        edges.sort_unstable();
        if seen.insert((vmask, edges.clone())) {
            out.push((vmask, edges));
        }
    }
    out
}

/// The subgraph on the vertices of `mask`, relabelled to `0..|mask|`.
pub fn relabel_onto(mask: u32, edges: &[(usize, usize)]) -> Motif {
    let rank = |v: usize| (mask & ((1u32 << v) - 1)).count_ones() as usize;
    Motif::new(mask.count_ones() as usize, edges.iter().map(|&(a, b)| (rank(a), rank(b)))).unwrap()
}

pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut r = rng(seed);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if r.random::<f64>() < p {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(n, edges)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Reduced fraction.
pub fn frac(num: i64, den: i64) -> (i64, i64) {
    let g = gcd(num, den).max(1);
    (num / g, den / g)
}

fn frac_lt(a: (i64, i64), b: (i64, i64)) -> bool {
    a.0 * b.1 < b.0 * a.1
}

fn edges_within(m: &Motif, mask: u32) -> i64 {
    m.edges()
        .iter()
        .filter(|&&(a, b)| mask >> a & 1 == 1 && mask >> b & 1 == 1)
        .count() as i64
}

#[derive(Debug, PartialEq, Eq)]
pub struct BruteExponents {
    pub m: (i64, i64),
    pub m1: (i64, i64),
    pub balanced: bool,
    pub strictly_balanced: bool,
    pub strongly_balanced: bool,
    pub strictly_strongly_balanced: bool,
}

/// Exponents over every edge subset of every vertex subset, compared with
/// integer cross-multiplication.
pub fn brute_exponents(m: &Motif) -> BruteExponents {
    let k = m.vertex_count();
    let full = (1u32 << k) - 1;
    let e_h = m.edge_count() as i64;
    let whole = frac(e_h, k as i64);
    let whole1 = frac(e_h, k as i64 - 1);
    let mut best = (0, 1);
    let mut best1 = (0, 1);
    let mut proper_ties = false;
    let mut proper_ties1 = false;
    for mask in 1..=full {
        let v = mask.count_ones() as i64;
        let max_e = edges_within(m, mask);
        for e in 0..=max_e {
            let r = frac(e, v);
            if frac_lt(best, r) {
                best = r;
            }
            let proper = mask != full || e < max_e;
            if proper && !frac_lt(r, whole) {
                proper_ties = true;
            }
            if v >= 2 {
                let r1 = frac(e, v - 1);
                if frac_lt(best1, r1) {
                    best1 = r1;
                }
                if proper && !frac_lt(r1, whole1) {
                    proper_ties1 = true;
                }
            }
        }
    }
    BruteExponents {
        m: best,
        m1: best1,
        balanced: best == whole,
        strictly_balanced: best == whole && !proper_ties,
        strongly_balanced: best1 == whole1,
        strictly_strongly_balanced: best1 == whole1 && !proper_ties1,
    }
}

/// Sum over all block assignments of `k` positions with some positions
/// pinned: `Σ Π_{free} π · Π_E W`.
fn brute_block_density(m: &Motif, w: &StepGraphon, pinned: &[Option<usize>]) -> f64 {
    let k = m.vertex_count();
    let blocks = w.block_count();
    let pi = w.block_measures();
    let mut total = 0.0;
    let mut assign = vec![0usize; k];
    let count = blocks.pow(k as u32);
    'outer: for code in 0..count {
        let mut c = code;
        let mut weight = 1.0;
        for v in 0..k {
            assign[v] = c % blocks;
            c /= blocks;
            match pinned[v] {
                Some(b) if b != assign[v] => continue 'outer,
                Some(_) => {}
                None => weight *= pi[assign[v]],
            }
        }
        for &(a, b) in m.edges() {
            weight *= w.value(assign[a], assign[b]);
        }
        total += weight;
    }
    total
}

pub fn brute_density(m: &Motif, w: &StepGraphon) -> f64 {
    brute_block_density(m, w, &vec![None; m.vertex_count()])
}

/// First-projection variance of the kernel
/// `h(x_1..x_k) = Σ_{copies on [k]} (Π W − t)`:
/// `Σ_b π_b (E[h | U_1 in block b])²`.
pub fn xi1_oracle(m: &Motif, w: &StepGraphon) -> f64 {
    let k = m.vertex_count();
    let table = pair_table(k);
    let t = brute_density(m, w);
    let mut copies = HashSet::new();
    let mut labelled = Vec::new();
    for p in permutations(k) {
        let mask = edge_mask(&table, m.edges(), &p);
        if copies.insert(mask) {
            labelled.push(m.permuted(&p));
        }
    }
    let mut xi = 0.0;
    for (b, &pi_b) in w.block_measures().iter().enumerate() {
        let mut pinned = vec![None; k];
        pinned[0] = Some(b);
        let h1: f64 = labelled
            .iter()
            .map(|c| brute_block_density(c, w, &pinned) - t)
            .sum();
        xi += pi_b * h1 * h1;
    }
    xi
}

/// Symmetric matrix with independent uniform entries in `[0.05, 1]` and
/// random block measures.
pub fn random_graphon(blocks: usize, seed: u64) -> StepGraphon {
    let mut r = rng(seed);
    let raw: Vec<f64> = (0..blocks).map(|_| 0.2 + r.random::<f64>()).collect();
    let total: f64 = raw.iter().sum();
    let mut pi: Vec<f64> = raw.iter().map(|x| x / total).collect();
    let head: f64 = pi[..blocks - 1].iter().sum();
    pi[blocks - 1] = 1.0 - head;
    let mut values = vec![vec![0.0; blocks]; blocks];
    for a in 0..blocks {
        for b in a..blocks {
            let v = 0.05 + 0.95 * r.random::<f64>();
            values[a][b] = v;
            values[b][a] = v;
        }
    }
    StepGraphon::new(pi, values).unwrap()
}

/// Equal block measures and `W(a, b) = f((b − a) mod K)` with `f` symmetric:
/// vertex-transitive, hence regular for every motif.
pub fn circulant_graphon(blocks: usize, seed: u64) -> StepGraphon {
    let mut r = rng(seed);
    let f: Vec<f64> = (0..blocks).map(|_| 0.05 + 0.95 * r.random::<f64>()).collect();
    let values: Vec<Vec<f64>> = (0..blocks)
        .map(|a| {
            (0..blocks)
                .map(|b| {
                    let d = (b + blocks - a) % blocks;
                    f[d.min(blocks - d)]
                })
                .collect()
        })
        .collect();
    StepGraphon::new(vec![1.0 / blocks as f64; blocks], values).unwrap()
}

/// Equal row sums but not vertex-transitive: regular for the edge, not for
/// the triangle.
pub fn degree_regular_graphon() -> StepGraphon {
    StepGraphon::new(
        vec![1.0 / 3.0; 3],
        vec![
            vec![0.2, 0.5, 0.3],
            vec![0.5, 0.1, 0.4],
            vec![0.3, 0.4, 0.3],
        ],
    )
    .unwrap()
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

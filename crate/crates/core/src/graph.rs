//! Simple undirected host graphs with sorted adjacency lists.

use std::collections::BTreeSet;

/// An undirected simple graph on vertices `0..n`, stored as sorted
/// neighbour lists. This is the host side of every counting routine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
    edge_count: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    pub fn complete(n: usize) -> Self {
        let adj = (0..n)
            .map(|v| (0..n as u32).filter(|&w| w as usize != v).collect())
            .collect();
        Graph {
            adj,
            edge_count: n * n.saturating_sub(1) / 2,
        }
    }

    /// Builds a graph from 0-based edge pairs. Self-loops are dropped and
    /// duplicate edges collapse.
    ///
    /// Panics if an endpoint is `>= n`.
    pub fn from_edges<I>(n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            assert!(a < n && b < n, "edge ({a}, {b}) out of range for n = {n}");
            if a != b {
                set.insert((a.min(b), a.max(b)));
            }
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &set {
            adj[a].push(b as u32);
            adj[b].push(a as u32);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph {
            adj,
            edge_count: set.len(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let (small, other) = if self.adj[a].len() <= self.adj[b].len() {
            (a, b)
        } else {
            (b, a)
        };
        self.adj[small].binary_search(&(other as u32)).is_ok()
    }

    /// Edges as `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(a, list)| {
            list.iter()
                .filter(move |&&b| (b as usize) > a)
                .map(move |&b| (a, b as usize))
        })
    }

    /// Triangle count by merging forward adjacency lists.
    pub fn triangle_count(&self) -> u64 {
        let mut total = 0u64;
        for (u, list) in self.adj.iter().enumerate() {
            let fwd_u = forward(list, u);
            for &v in fwd_u {
                let fwd_v = forward(&self.adj[v as usize], v as usize);
                total += sorted_intersection_len(fwd_u, fwd_v) as u64;
            }
        }
        total
    }
}

fn forward(list: &[u32], v: usize) -> &[u32] {
    let start = list.partition_point(|&w| (w as usize) <= v);
    &list[start..]
}

fn sorted_intersection_len(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph_shape() {
        let g = Graph::complete(5);
        assert_eq!(g.edge_count(), 10);
        assert!(g.has_edge(0, 4));
        assert_eq!(g.edges().count(), 10);
        assert_eq!(g.triangle_count(), 10);
    }

    #[test]
    fn duplicates_and_loops_collapse() {
        let g = Graph::from_edges(3, [(0, 1), (1, 0), (2, 2), (1, 2)]);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        assert_eq!(g.triangle_count(), 0);
    }

    #[test]
    fn five_cycle_is_triangle_free() {
        let g = Graph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5)));
        assert_eq!(g.triangle_count(), 0);
    }
}

use nalgebra::DMatrix;
use rand::Rng;

use super::io::NodeMap;
use super::prob::ProbMatrix;

/// Simple undirected graph stored as a dense 0/1 adjacency matrix.
/// Equality compares structure only; labels are metadata.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    adj: Vec<u8>,
    labels: Option<NodeMap>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            adj: vec![0; n * n],
            labels: None,
        }
    }

    /// Build from undirected edges. Self-loops are ignored and duplicates collapse.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Adds `u -- v`; returns false for self-loops, which are never stored.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        assert!(u < self.n && v < self.n, "edge ({u},{v}) out of range");
        if u == v {
            return false;
        }
        self.adj[u * self.n + v] = 1;
        self.adj[v * self.n + u] = 1;
        true
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.n + v] != 0
    }

    #[inline]
    pub fn entry(&self, u: usize, v: usize) -> f64 {
        self.adj[u * self.n + v] as f64
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u * self.n..(u + 1) * self.n]
            .iter()
            .map(|&a| a as usize)
            .sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|u| self.degree(u)).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|&a| a as usize).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            (u + 1..self.n).filter_map(move |v| self.has_edge(u, v).then_some((u, v)))
        })
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&v| self.has_edge(u, v))
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.entry(i, j))
    }

    pub fn labels(&self) -> Option<&NodeMap> {
        self.labels.as_ref()
    }

    pub fn with_labels(mut self, labels: NodeMap) -> Self {
        assert_eq!(labels.len(), self.n, "label map size must equal n");
        self.labels = Some(labels);
        self
    }

    /// Relabel nodes so that node `i` becomes node `perm[i]`. Labels are dropped.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n);
        let mut g = Self::empty(self.n);
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        g
    }

    /// Symmetric with a zero diagonal. Always true for graphs built through this API.
    pub fn is_valid(&self) -> bool {
        (0..self.n).all(|u| {
            self.adj[u * self.n + u] == 0
                && (0..self.n).all(|v| self.adj[u * self.n + v] == self.adj[v * self.n + u])
        })
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.adj == other.adj
    }
}

impl Eq for Graph {}

/// Draw each dyad `i < j` once as Bernoulli(`p(i, j)`).
pub fn sample_graph<R: Rng + ?Sized>(p: &ProbMatrix, rng: &mut R) -> Graph {
    let n = p.n();
    let mut g = Graph::empty(n);
    let m = p.matrix();
    for j in 1..n {
        for i in 0..j {
            if rng.random::<f64>() < m[(i, j)] {
                g.adj[i * n + j] = 1;
                g.adj[j * n + i] = 1;
            }
        }
    }
    g
}

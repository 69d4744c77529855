//! Simple undirected graphs on vertices `1..=n` and the classical oracles
//! (two-coloring, components, BFS paths) the span programs are checked against.

mod generate;
mod io;

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::constructions::EdgeInputIndexer;
use crate::span_program::InputAssignment;

pub use generate::{
    generate, random_bipartite, random_connected, random_disconnected, random_permutation,
    GraphFamily,
};
pub use io::{
    parse_graph, read_graph, write_adjacency_matrix, write_edge_list, GraphFormat, ParseError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("adjacency matrix is not symmetric at ({0}, {1})")]
    Asymmetric(usize, usize),
    #[error("adjacency matrix is not square")]
    NotSquare,
    #[error("invalid cycle: {0}")]
    InvalidCycle(String),
    #[error("invalid generator parameters: {0}")]
    InvalidParameters(String),
}

/// Simple undirected graph as a symmetric boolean adjacency matrix with zero diagonal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adjacency: Vec<bool>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            adjacency: vec![false; n * n],
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Rejects asymmetric matrices and nonzero diagonals; never symmetrizes.
    #[allow(clippy::needless_range_loop)]
    pub fn from_adjacency(rows: &[Vec<bool>]) -> Result<Self, GraphError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(GraphError::NotSquare);
        }
        let mut g = Self::empty(n);
        for u in 0..n {
            if rows[u][u] {
                return Err(GraphError::SelfLoop(u + 1));
            }
            for v in 0..n {
                if rows[u][v] != rows[v][u] {
                    return Err(GraphError::Asymmetric(u + 1, v + 1));
                }
                g.adjacency[u * n + v] = rows[u][v];
            }
        }
        Ok(g)
    }

    /// Decodes an input assignment over unordered pairs.
    pub fn from_input(n: usize, x: &InputAssignment) -> Self {
        let idx = EdgeInputIndexer::new(n);
        let mut g = Self::empty(n);
        for (i, &bit) in x.bits().iter().enumerate() {
            if bit {
                let (u, v) = idx.pair(i);
                g.set(u, v, true);
            }
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if (1..=self.n).contains(&v) {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange {
                vertex: v,
                n: self.n,
            })
        }
    }

    fn set(&mut self, u: usize, v: usize, value: bool) {
        let n = self.n;
        self.adjacency[(u - 1) * n + (v - 1)] = value;
        self.adjacency[(v - 1) * n + (u - 1)] = value;
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.set(u, v, true);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u != v {
            self.set(u, v, false);
        }
        Ok(())
    }

    /// 1-based; out-of-range vertices have no edges.
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        (1..=self.n).contains(&u)
            && (1..=self.n).contains(&v)
            && self.adjacency[(u - 1) * self.n + (v - 1)]
    }

    /// Neighbors of `u` in increasing order.
    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        (1..=self.n).filter(move |&v| self.has_edge(u, v))
    }

    /// Edges `(u, v)` with `u < v`, lexicographic.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..=self.n).flat_map(move |u| {
            (u + 1..=self.n)
                .filter(move |&v| self.has_edge(u, v))
                .map(move |v| (u, v))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    pub fn degree(&self, u: usize) -> usize {
        self.neighbors(u).count()
    }

    /// Rows of the adjacency matrix.
    pub fn adjacency_rows(&self) -> Vec<Vec<bool>> {
        self.adjacency
            .chunks(self.n.max(1))
            .take(self.n)
            .map(<[bool]>::to_vec)
            .collect()
    }

    /// Graph with vertex `v` renamed to `perm[v - 1]`. `perm` must be a permutation of `1..=n`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self, GraphError> {
        let mut seen = vec![false; self.n];
        if perm.len() != self.n {
            return Err(GraphError::InvalidParameters(format!(
                "permutation has length {}, expected {}",
                perm.len(),
                self.n
            )));
        }
        for &p in perm {
            self.check_vertex(p)?;
            if std::mem::replace(&mut seen[p - 1], true) {
                return Err(GraphError::InvalidParameters(format!(
                    "{p} repeated in permutation"
                )));
            }
        }
        Self::from_edges(
            self.n,
            self.edges().map(|(u, v)| (perm[u - 1], perm[v - 1])),
        )
    }

    /// Encodes the graph as one bit per unordered pair, in [`EdgeInputIndexer`] order.
    pub fn to_input(&self) -> InputAssignment {
        let idx = EdgeInputIndexer::new(self.n);
        let mut x = InputAssignment::zeros(idx.len());
        for (u, v) in self.edges() {
            x.set(idx.index(u, v), true);
        }
        x
    }

    pub fn is_bipartite(&self) -> bool {
        find_odd_cycle(self).is_none()
    }

    pub fn is_connected(&self) -> bool {
        components(self).count() <= 1
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Graph(n={}, edges={:?})",
            self.n,
            self.edges().collect::<Vec<_>>()
        )
    }
}

/// A simple cycle of odd length, listed in traversal order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddCycle {
    vertices: Vec<usize>,
}

impl OddCycle {
    /// Validates oddness, distinctness and that every listed edge is in `g`.
    pub fn new(g: &Graph, vertices: Vec<usize>) -> Result<Self, GraphError> {
        let d = vertices.len();
        if d < 3 || d.is_multiple_of(2) {
            return Err(GraphError::InvalidCycle(format!(
                "length {d} is not an odd number >= 3"
            )));
        }
        let mut seen = vec![false; g.n() + 1];
        for &v in &vertices {
            g.check_vertex(v)?;
            if std::mem::replace(&mut seen[v], true) {
                return Err(GraphError::InvalidCycle(format!("vertex {v} repeated")));
            }
        }
        for i in 0..d {
            let (a, b) = (vertices[i], vertices[(i + 1) % d]);
            if !g.has_edge(a, b) {
                return Err(GraphError::InvalidCycle(format!("edge {a}-{b} missing")));
            }
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// BFS two-coloring. Returns a simple odd cycle from the first color conflict, or
/// `None` if the graph is bipartite.
pub fn find_odd_cycle(g: &Graph) -> Option<OddCycle> {
    let n = g.n();
    let mut color: Vec<Option<bool>> = vec![None; n + 1];
    let mut parent = vec![0usize; n + 1];
    let mut depth = vec![0usize; n + 1];
    for root in 1..=n {
        if color[root].is_some() {
            continue;
        }
        color[root] = Some(false);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for v in g.neighbors(u) {
                match color[v] {
                    None => {
                        color[v] = Some(!color[u].unwrap());
                        parent[v] = u;
                        depth[v] = depth[u] + 1;
                        queue.push_back(v);
                    }
                    Some(c) if c == color[u].unwrap() => {
                        let cycle = conflict_cycle(u, v, &parent, &depth);
                        return Some(
                            OddCycle::new(g, cycle).expect("conflict cycle is a simple odd cycle"),
                        );
                    }
                    Some(_) => {}
                }
            }
        }
    }
    None
}

/// Joins the tree paths from `u` and `v` at their lowest common ancestor; with
/// the conflict edge `u-v` this closes a simple odd cycle.
fn conflict_cycle(u: usize, v: usize, parent: &[usize], depth: &[usize]) -> Vec<usize> {
    let (mut a, mut b) = (u, v);
    let mut left = vec![a];
    let mut right = vec![b];
    while depth[a] > depth[b] {
        a = parent[a];
        left.push(a);
    }
    while depth[b] > depth[a] {
        b = parent[b];
        right.push(b);
    }
    while a != b {
        a = parent[a];
        b = parent[b];
        left.push(a);
        right.push(b);
    }
    right.pop();
    right.reverse();
    // left: u .. lca, right: (below lca) .. v; the edge v-u closes the cycle.
    left.extend(right);
    left
}

/// Connected-component partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentInfo {
    /// `id[v - 1]`; ids are numbered by smallest member, in increasing order.
    ids: Vec<usize>,
    sizes: Vec<usize>,
}

impl ComponentInfo {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn component_of(&self, v: usize) -> usize {
        self.ids[v - 1]
    }

    /// `d_v`, the size of the component containing `v`.
    pub fn size_of(&self, v: usize) -> usize {
        self.sizes[self.component_of(v)]
    }

    /// `C_v` in increasing order.
    pub fn members(&self, v: usize) -> Vec<usize> {
        let id = self.component_of(v);
        (1..=self.ids.len())
            .filter(|&u| self.ids[u - 1] == id)
            .collect()
    }

    pub fn same(&self, u: usize, v: usize) -> bool {
        self.component_of(u) == self.component_of(v)
    }

    /// One representative (smallest member) per component.
    pub fn representatives(&self) -> Vec<usize> {
        let mut reps = vec![0; self.count()];
        for v in (1..=self.ids.len()).rev() {
            reps[self.ids[v - 1]] = v;
        }
        reps
    }
}

struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }
}

/// Union-find over the edge list.
pub fn components(g: &Graph) -> ComponentInfo {
    let n = g.n();
    let mut dsu = DisjointSets::new(n);
    for (u, v) in g.edges() {
        dsu.union(u - 1, v - 1);
    }
    let mut id_of_root = vec![usize::MAX; n];
    let mut ids = vec![0; n];
    let mut sizes = Vec::new();
    for v in 0..n {
        let r = dsu.find(v);
        if id_of_root[r] == usize::MAX {
            id_of_root[r] = sizes.len();
            sizes.push(0);
        }
        ids[v] = id_of_root[r];
        sizes[ids[v]] += 1;
    }
    ComponentInfo { ids, sizes }
}

/// BFS shortest path from `s` to `t`, inclusive; `Some(vec![s])` when `s == t`.
pub fn shortest_path(g: &Graph, s: usize, t: usize) -> Result<Option<Vec<usize>>, GraphError> {
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    let n = g.n();
    let mut parent = vec![0usize; n + 1];
    let mut seen = vec![false; n + 1];
    seen[s] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        if u == t {
            let mut path = vec![t];
            let mut cur = t;
            while cur != s {
                cur = parent[cur];
                path.push(cur);
            }
            path.reverse();
            return Ok(Some(path));
        }
        for v in g.neighbors(u) {
            if !seen[v] {
                seen[v] = true;
                parent[v] = u;
                queue.push_back(v);
            }
        }
    }
    Ok(None)
}

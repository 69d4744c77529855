//! Concrete span programs over graph inputs.
//!
//! Inputs are indexed by unordered vertex pairs `{u, v}`, `u < v`
//! ([`EdgeInputIndexer`]); every edge vector sits in the bit-1 group of its
//! pair and all bit-0 groups are empty.
//!
//! - [`build_p1`]: odd-cycle detector on `2n^2 + 1` dimensions. Basis `|0>` plus
//!   `|v_{k,b}>` (vertex `v`, search origin `k`, path parity `b`).
//! - [`build_p2`]: connectivity on `n^2 - 1` dimensions. Basis `|v_k>` for
//!   `v in 0..=n`, `k in 2..=n`; subspace `k` runs an s-t test from 1 to `k`.
//! - [`build_st_connectivity`]: the s-t subroutine on its own, dimension `n`.

mod witnesses;

use thiserror::Error;

use crate::graphs::{Graph, GraphError};
use crate::numeric::SparseVector;
use crate::span_program::{SpanProgram, SpanProgramBuilder, SpanProgramError, VectorId};

pub use witnesses::{
    paper_negative_witness_p1, paper_negative_witness_p2, paper_positive_witness_p1,
    paper_positive_witness_p1_single, paper_positive_witness_p2, P2Seeding,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("{program} needs n >= {min}, got {n}")]
    TooSmall {
        program: &'static str,
        min: usize,
        n: usize,
    },
    #[error("s and t must differ (both {0})")]
    SameEndpoints(usize),
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("graph has {found} vertices, program built for {expected}")]
    GraphSize { expected: usize, found: usize },
    #[error("construction does not apply: {0}")]
    NotApplicable(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    SpanProgram(#[from] SpanProgramError),
}

/// Bijection between unordered pairs `{u, v}` (`1 <= u < v <= n`) and `0..n(n-1)/2`,
/// lexicographic in `(u, v)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeInputIndexer {
    n: usize,
}

impl EdgeInputIndexer {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn len(&self) -> usize {
        self.n * self.n.saturating_sub(1) / 2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Index of `{u, v}`; order of arguments is irrelevant. Panics on `u == v`.
    pub fn index(&self, u: usize, v: usize) -> usize {
        let (u, v) = if u < v { (u, v) } else { (v, u) };
        assert!(
            u >= 1 && u < v && v <= self.n,
            "bad pair {{{u}, {v}}} for n={}",
            self.n
        );
        (u - 1) * (2 * self.n - u) / 2 + (v - u - 1)
    }

    pub fn pair(&self, index: usize) -> (usize, usize) {
        let mut base = 0;
        for u in 1..self.n {
            let row = self.n - u;
            if index < base + row {
                return (u, u + 1 + index - base);
            }
            base += row;
        }
        panic!("pair index {index} out of range for n={}", self.n);
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..=self.n).flat_map(move |u| (u + 1..=self.n).map(move |v| (u, v)))
    }
}

/// Basis of the odd-cycle program: index 0 is `|0>`, then `|v_{k,b}>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisIndexerP1 {
    n: usize,
}

impl BasisIndexerP1 {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn dim(&self) -> usize {
        2 * self.n * self.n + 1
    }

    pub fn zero(&self) -> usize {
        0
    }

    pub fn index(&self, v: usize, k: usize, parity: bool) -> usize {
        debug_assert!((1..=self.n).contains(&v) && (1..=self.n).contains(&k));
        1 + 2 * ((k - 1) * self.n + (v - 1)) + parity as usize
    }

    /// Inverse of [`index`](Self::index); `None` for `|0>`.
    pub fn decode(&self, index: usize) -> Option<(usize, usize, bool)> {
        if index == 0 || index >= self.dim() {
            return None;
        }
        let r = index - 1;
        let parity = r % 2 == 1;
        let cell = r / 2;
        Some((cell % self.n + 1, cell / self.n + 1, parity))
    }
}

/// Basis of the connectivity program: `|v_k>` for `v in 0..=n`, `k in 2..=n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisIndexerP2 {
    n: usize,
}

impl BasisIndexerP2 {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn dim(&self) -> usize {
        self.n * self.n - 1
    }

    pub fn index(&self, v: usize, k: usize) -> usize {
        debug_assert!(v <= self.n && (2..=self.n).contains(&k));
        (k - 2) * (self.n + 1) + v
    }

    pub fn decode(&self, index: usize) -> Option<(usize, usize)> {
        if index >= self.dim() {
            return None;
        }
        Some((index % (self.n + 1), index / (self.n + 1) + 2))
    }
}

/// Common surface of the graph programs.
pub trait GraphProgram {
    fn program(&self) -> &SpanProgram;
    fn n(&self) -> usize;

    fn check_graph(&self, g: &Graph) -> Result<(), ConstructionError> {
        if g.n() == self.n() {
            Ok(())
        } else {
            Err(ConstructionError::GraphSize {
                expected: self.n(),
                found: g.n(),
            })
        }
    }

    /// Ket label of a basis index, e.g. `|3_{2,1}>`.
    fn basis_label(&self, index: usize) -> String {
        format!("|e{index}>")
    }

    fn evaluate_graph(&self, g: &Graph) -> Result<bool, ConstructionError> {
        self.check_graph(g)?;
        Ok(self.program().evaluate(&g.to_input())?)
    }
}

/// The odd-cycle program. Outputs 1 iff the graph is NOT bipartite.
#[derive(Debug, Clone)]
pub struct BipartitenessProgram {
    n: usize,
    basis: BasisIndexerP1,
    edges: EdgeInputIndexer,
    program: SpanProgram,
}

impl BipartitenessProgram {
    pub fn basis(&self) -> BasisIndexerP1 {
        self.basis
    }

    /// Free vector `|0> + |k_{k,0}> + |k_{k,1}>`.
    pub fn free_vector(&self, k: usize) -> VectorId {
        VectorId(k - 1)
    }

    /// The edge vector `|a_{k,0}> + |b_{k,1}>` for the pair `{a, b}`.
    pub fn edge_vector(&self, a: usize, b: usize, k: usize) -> VectorId {
        let (pair, orientation) = if a < b {
            (self.edges.index(a, b), 0)
        } else {
            (self.edges.index(b, a), 1)
        };
        VectorId(self.n + 2 * (pair * self.n + (k - 1)) + orientation)
    }

    pub fn into_program(self) -> SpanProgram {
        self.program
    }
}

impl GraphProgram for BipartitenessProgram {
    fn program(&self) -> &SpanProgram {
        &self.program
    }

    fn n(&self) -> usize {
        self.n
    }

    fn basis_label(&self, index: usize) -> String {
        match self.basis.decode(index) {
            Some((v, k, b)) => format!("|{v}_{{{k},{}}}>", b as u8),
            None => "|0>".to_string(),
        }
    }
}

/// The connectivity program. Outputs 1 iff the graph is connected.
#[derive(Debug, Clone)]
pub struct ConnectivityProgram {
    n: usize,
    basis: BasisIndexerP2,
    edges: EdgeInputIndexer,
    program: SpanProgram,
}

impl ConnectivityProgram {
    pub fn basis(&self) -> BasisIndexerP2 {
        self.basis
    }

    /// Free vector `|0_k> + |1_k> - |k_k>`.
    pub fn free_vector(&self, k: usize) -> VectorId {
        VectorId(k - 2)
    }

    /// Edge vector `|u_k> - |v_k>` stored with `u < v`.
    pub fn edge_vector(&self, u: usize, v: usize, k: usize) -> VectorId {
        let pair = self.edges.index(u, v);
        VectorId((self.n - 1) * (1 + pair) + (k - 2))
    }

    pub fn into_program(self) -> SpanProgram {
        self.program
    }
}

impl GraphProgram for ConnectivityProgram {
    fn program(&self) -> &SpanProgram {
        &self.program
    }

    fn n(&self) -> usize {
        self.n
    }

    fn basis_label(&self, index: usize) -> String {
        match self.basis.decode(index) {
            Some((v, k)) => format!("|{v}_{k}>"),
            None => format!("|e{index}>"),
        }
    }
}

/// The s-t connectivity subroutine: target `|s> - |t>`, vector `|u> - |v>` per edge.
#[derive(Debug, Clone)]
pub struct StConnectivityProgram {
    n: usize,
    s: usize,
    t: usize,
    program: SpanProgram,
}

impl StConnectivityProgram {
    pub fn endpoints(&self) -> (usize, usize) {
        (self.s, self.t)
    }

    pub fn edge_vector(&self, u: usize, v: usize) -> VectorId {
        VectorId(EdgeInputIndexer::new(self.n).index(u, v))
    }

    pub fn into_program(self) -> SpanProgram {
        self.program
    }
}

impl GraphProgram for StConnectivityProgram {
    fn program(&self) -> &SpanProgram {
        &self.program
    }

    fn n(&self) -> usize {
        self.n
    }

    fn basis_label(&self, index: usize) -> String {
        format!("|{}>", index + 1)
    }
}

fn vector<const N: usize>(dim: usize, entries: [(usize, i64); N]) -> SparseVector {
    SparseVector::from_int_entries(dim, entries).expect("indices come from a basis indexer")
}

pub fn build_p1(n: usize) -> Result<BipartitenessProgram, ConstructionError> {
    if n < 1 {
        return Err(ConstructionError::TooSmall {
            program: "P1",
            min: 1,
            n,
        });
    }
    let basis = BasisIndexerP1::new(n);
    let edges = EdgeInputIndexer::new(n);
    let dim = basis.dim();
    let mut b = SpanProgramBuilder::new(vector(dim, [(basis.zero(), 1)]), edges.len());
    for k in 1..=n {
        b.add_free(vector(
            dim,
            [
                (basis.zero(), 1),
                (basis.index(k, k, false), 1),
                (basis.index(k, k, true), 1),
            ],
        ))?;
    }
    for (pair, (u, v)) in edges.pairs().enumerate() {
        for k in 1..=n {
            b.add_to_group(
                pair,
                true,
                vector(
                    dim,
                    [(basis.index(u, k, false), 1), (basis.index(v, k, true), 1)],
                ),
            )?;
            b.add_to_group(
                pair,
                true,
                vector(
                    dim,
                    [(basis.index(u, k, true), 1), (basis.index(v, k, false), 1)],
                ),
            )?;
        }
    }
    Ok(BipartitenessProgram {
        n,
        basis,
        edges,
        program: b.build(),
    })
}

/// Requires `n >= 2`; a single vertex is connected without any program.
pub fn build_p2(n: usize) -> Result<ConnectivityProgram, ConstructionError> {
    if n < 2 {
        return Err(ConstructionError::TooSmall {
            program: "P2",
            min: 2,
            n,
        });
    }
    let basis = BasisIndexerP2::new(n);
    let edges = EdgeInputIndexer::new(n);
    let dim = basis.dim();
    let target = SparseVector::from_int_entries(dim, (2..=n).map(|k| (basis.index(0, k), 1)))
        .expect("indices in range");
    let mut b = SpanProgramBuilder::new(target, edges.len());
    for k in 2..=n {
        b.add_free(vector(
            dim,
            [
                (basis.index(0, k), 1),
                (basis.index(1, k), 1),
                (basis.index(k, k), -1),
            ],
        ))?;
    }
    for (pair, (u, v)) in edges.pairs().enumerate() {
        for k in 2..=n {
            b.add_to_group(
                pair,
                true,
                vector(dim, [(basis.index(u, k), 1), (basis.index(v, k), -1)]),
            )?;
        }
    }
    Ok(ConnectivityProgram {
        n,
        basis,
        edges,
        program: b.build(),
    })
}

pub fn build_st_connectivity(
    n: usize,
    s: usize,
    t: usize,
) -> Result<StConnectivityProgram, ConstructionError> {
    if n < 2 {
        return Err(ConstructionError::TooSmall {
            program: "st",
            min: 2,
            n,
        });
    }
    for vertex in [s, t] {
        if !(1..=n).contains(&vertex) {
            return Err(ConstructionError::VertexOutOfRange { vertex, n });
        }
    }
    if s == t {
        return Err(ConstructionError::SameEndpoints(s));
    }
    let edges = EdgeInputIndexer::new(n);
    let mut b = SpanProgramBuilder::new(vector(n, [(s - 1, 1), (t - 1, -1)]), edges.len());
    for (pair, (u, v)) in edges.pairs().enumerate() {
        b.add_to_group(pair, true, vector(n, [(u - 1, 1), (v - 1, -1)]))?;
    }
    Ok(StConnectivityProgram {
        n,
        s,
        t,
        program: b.build(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::int;
    use crate::span_program::InputAssignment;

    #[test]
    fn edge_indexer_is_bijective() {
        for n in 0..8 {
            let idx = EdgeInputIndexer::new(n);
            assert_eq!(idx.len(), idx.pairs().count());
            for (i, (u, v)) in idx.pairs().enumerate() {
                assert_eq!(idx.index(u, v), i);
                assert_eq!(idx.index(v, u), i);
                assert_eq!(idx.pair(i), (u, v));
            }
        }
    }

    #[test]
    fn basis_indexers_are_bijective() {
        for n in 1..6 {
            let b = BasisIndexerP1::new(n);
            let mut seen = vec![false; b.dim()];
            seen[b.zero()] = true;
            for v in 1..=n {
                for k in 1..=n {
                    for p in [false, true] {
                        let i = b.index(v, k, p);
                        assert!(!std::mem::replace(&mut seen[i], true));
                        assert_eq!(b.decode(i), Some((v, k, p)));
                    }
                }
            }
            assert!(seen.into_iter().all(|s| s));
        }
        for n in 2..6 {
            let b = BasisIndexerP2::new(n);
            let mut seen = vec![false; b.dim()];
            for v in 0..=n {
                for k in 2..=n {
                    let i = b.index(v, k);
                    assert!(!std::mem::replace(&mut seen[i], true));
                    assert_eq!(b.decode(i), Some((v, k)));
                }
            }
            assert!(seen.into_iter().all(|s| s));
        }
    }

    #[test]
    fn p1_shapes() {
        let p = build_p1(1).unwrap();
        assert_eq!(p.program().dim(), 3);
        assert_eq!(p.program().free_vectors().len(), 1);
        assert_eq!(p.program().input_arity(), 0);

        let p = build_p1(3).unwrap();
        assert_eq!(p.program().dim(), 19);
        assert_eq!(p.program().free_vectors().len(), 3);
        assert_eq!(p.program().vector_count() - 3, 18);
        assert!(build_p1(0).is_err());
    }

    #[test]
    fn p1_vector_layout_matches_lookup() {
        let p = build_p1(4).unwrap();
        let basis = p.basis();
        let prog = p.program();
        for k in 1..=4 {
            let f = prog.vector(p.free_vector(k)).unwrap();
            assert_eq!(f.get(basis.index(k, k, true)), int(1));
            for a in 1..=4 {
                for b in 1..=4 {
                    if a == b {
                        continue;
                    }
                    let v = prog.vector(p.edge_vector(a, b, k)).unwrap();
                    assert_eq!(v.nnz(), 2);
                    assert_eq!(v.get(basis.index(a, k, false)), int(1));
                    assert_eq!(v.get(basis.index(b, k, true)), int(1));
                }
            }
        }
    }

    #[test]
    fn p2_shapes_and_layout() {
        let p = build_p2(2).unwrap();
        let prog = p.program();
        assert_eq!(prog.dim(), 3);
        assert_eq!(prog.target().nnz(), 1);
        assert_eq!(prog.free_vectors().len(), 1);
        assert_eq!(prog.vector_count(), 2);
        assert!(build_p2(1).is_err());

        let p = build_p2(4).unwrap();
        let basis = p.basis();
        for k in 2..=4 {
            let f = p.program().vector(p.free_vector(k)).unwrap();
            assert_eq!(f.get(basis.index(k, k)), int(-1));
            for (u, v) in EdgeInputIndexer::new(4).pairs() {
                let e = p.program().vector(p.edge_vector(u, v, k)).unwrap();
                assert_eq!(e.get(basis.index(u, k)), int(1));
                assert_eq!(e.get(basis.index(v, k)), int(-1));
            }
        }
    }

    #[test]
    fn p2_single_edge_availability() {
        // n = 3, edge 1-2: two free vectors plus one edge vector per subspace k in {2, 3}.
        let p = build_p2(3).unwrap();
        let g = Graph::from_edges(3, [(1, 2)]).unwrap();
        let avail = p.program().available_vectors(&g.to_input()).unwrap();
        assert_eq!(
            avail,
            vec![
                p.free_vector(2),
                p.free_vector(3),
                p.edge_vector(1, 2, 2),
                p.edge_vector(1, 2, 3)
            ]
        );
    }

    #[test]
    fn p1_empty_graph_availability() {
        let p = build_p1(2).unwrap();
        let avail = p
            .program()
            .available_vectors(&InputAssignment::zeros(1))
            .unwrap();
        assert_eq!(avail, vec![p.free_vector(1), p.free_vector(2)]);
    }

    #[test]
    fn st_builder_validation() {
        assert_eq!(
            build_st_connectivity(3, 2, 2).unwrap_err(),
            ConstructionError::SameEndpoints(2)
        );
        assert!(matches!(
            build_st_connectivity(3, 1, 4),
            Err(ConstructionError::VertexOutOfRange { vertex: 4, n: 3 })
        ));
        let p = build_st_connectivity(3, 1, 3).unwrap();
        assert_eq!(p.program().dim(), 3);
        assert!(p.program().free_vectors().is_empty());
    }

    #[test]
    fn subspace_isolation() {
        let p1 = build_p1(4).unwrap();
        for (_, v) in p1.program().vectors().skip(4) {
            let ks: Vec<usize> = v
                .support()
                .map(|i| p1.basis().decode(i).unwrap().1)
                .collect();
            assert!(ks.windows(2).all(|w| w[0] == w[1]));
        }
        let p2 = build_p2(4).unwrap();
        for (_, v) in p2.program().vectors() {
            let ks: Vec<usize> = v
                .support()
                .map(|i| p2.basis().decode(i).unwrap().1)
                .collect();
            assert!(ks.windows(2).all(|w| w[0] == w[1]));
            assert!(v.nnz() <= 3);
        }
    }
}

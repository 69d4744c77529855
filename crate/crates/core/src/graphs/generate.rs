//! Deterministic graph generators.
//!
//! Labeling conventions:
//! - `Cycle { len, n }`: edges `1-2-...-len-1`; vertices `len+1..=n` isolated.
//! - `Path { n }`: edges `1-2-...-n`.
//! - `Complete { n }`: all pairs.
//! - `CompleteBipartite { a, b }`: parts `1..=a` and `a+1..=a+b`.
//! - `RandomGnp { n, p }`: each pair independently with probability `p`, pairs in lexicographic order.
//! - `RandomTree { n }`: uniform labeled tree decoded from a random Pruefer sequence.
//! - `DisjointUnion { left, right }`: `right`'s vertices shifted by `left`'s vertex count.
//!
//! Randomness comes only from the explicit seed (ChaCha8).

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Graph, GraphError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GraphFamily {
    Cycle {
        len: usize,
        n: usize,
    },
    Path {
        n: usize,
    },
    Complete {
        n: usize,
    },
    CompleteBipartite {
        a: usize,
        b: usize,
    },
    RandomGnp {
        n: usize,
        p: f64,
    },
    RandomTree {
        n: usize,
    },
    /// Random bipartition, then each cross pair with probability `p`.
    RandomBipartite {
        n: usize,
        p: f64,
    },
    /// Random spanning tree plus each remaining pair with probability `p`.
    RandomConnected {
        n: usize,
        p: f64,
    },
    /// Random split into two nonempty vertex sets, G(n, p) inside each.
    RandomDisconnected {
        n: usize,
        p: f64,
    },
    DisjointUnion {
        left: Box<GraphFamily>,
        right: Box<GraphFamily>,
    },
}

fn invalid(msg: impl Into<String>) -> GraphError {
    GraphError::InvalidParameters(msg.into())
}

fn check_p(p: f64) -> Result<(), GraphError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(invalid(format!("edge probability {p} outside [0, 1]")))
    }
}

fn check_n(n: usize, min: usize) -> Result<(), GraphError> {
    if n >= min {
        Ok(())
    } else {
        Err(invalid(format!("vertex count {n} below minimum {min}")))
    }
}

/// Builds a graph of `family`; identical `(family, seed)` give identical graphs.
pub fn generate(family: &GraphFamily, seed: u64) -> Result<Graph, GraphError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    build(family, &mut rng)
}

fn build<R: Rng>(family: &GraphFamily, rng: &mut R) -> Result<Graph, GraphError> {
    match *family {
        GraphFamily::Cycle { len, n } => {
            if len < 3 {
                return Err(invalid(format!("cycle length {len} < 3")));
            }
            if n < len {
                return Err(invalid(format!(
                    "cycle length {len} exceeds vertex count {n}"
                )));
            }
            Graph::from_edges(n, (1..=len).map(|i| (i, i % len + 1)))
        }
        GraphFamily::Path { n } => {
            check_n(n, 1)?;
            Graph::from_edges(n, (1..n).map(|i| (i, i + 1)))
        }
        GraphFamily::Complete { n } => {
            check_n(n, 1)?;
            Graph::from_edges(n, (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v))))
        }
        GraphFamily::CompleteBipartite { a, b } => {
            check_n(a, 1)?;
            check_n(b, 1)?;
            Graph::from_edges(
                a + b,
                (1..=a).flat_map(|u| (a + 1..=a + b).map(move |v| (u, v))),
            )
        }
        GraphFamily::RandomGnp { n, p } => {
            check_n(n, 1)?;
            check_p(p)?;
            Ok(gnp(n, p, rng))
        }
        GraphFamily::RandomTree { n } => {
            check_n(n, 1)?;
            Ok(random_tree(n, rng))
        }
        GraphFamily::RandomBipartite { n, p } => {
            check_n(n, 1)?;
            check_p(p)?;
            Ok(random_bipartite(n, p, rng))
        }
        GraphFamily::RandomConnected { n, p } => {
            check_n(n, 1)?;
            check_p(p)?;
            Ok(random_connected(n, p, rng))
        }
        GraphFamily::RandomDisconnected { n, p } => {
            check_n(n, 2)?;
            check_p(p)?;
            Ok(random_disconnected(n, p, rng))
        }
        GraphFamily::DisjointUnion {
            ref left,
            ref right,
        } => {
            let g = build(left, rng)?;
            let h = build(right, rng)?;
            Ok(disjoint_union(&g, &h))
        }
    }
}

fn gnp<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut g = Graph::empty(n);
    for u in 1..=n {
        for v in u + 1..=n {
            if rng.random_bool(p) {
                g.set(u, v, true);
            }
        }
    }
    g
}

fn random_tree<R: Rng>(n: usize, rng: &mut R) -> Graph {
    let mut g = Graph::empty(n);
    if n < 2 {
        return g;
    }
    let prufer: Vec<usize> = (0..n - 2).map(|_| rng.random_range(1..=n)).collect();
    let mut degree = vec![1usize; n + 1];
    for &x in &prufer {
        degree[x] += 1;
    }
    for &x in &prufer {
        let leaf = (1..=n).find(|&v| degree[v] == 1).expect("a leaf exists");
        g.set(leaf, x, true);
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let rest: Vec<usize> = (1..=n).filter(|&v| degree[v] == 1).collect();
    g.set(rest[0], rest[1], true);
    g
}

/// Random permutation of `1..=n`.
pub fn random_permutation<R: Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut perm: Vec<usize> = (1..=n).collect();
    perm.shuffle(rng);
    perm
}

pub fn random_bipartite<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let side: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
    let mut g = Graph::empty(n);
    for u in 1..=n {
        for v in u + 1..=n {
            if side[u - 1] != side[v - 1] && rng.random_bool(p) {
                g.set(u, v, true);
            }
        }
    }
    g
}

pub fn random_connected<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut g = random_tree(n, rng);
    for u in 1..=n {
        for v in u + 1..=n {
            if !g.has_edge(u, v) && rng.random_bool(p) {
                g.set(u, v, true);
            }
        }
    }
    g
}

/// Requires `n >= 2`.
pub fn random_disconnected<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let perm = random_permutation(n, rng);
    let cut = rng.random_range(1..n);
    let mut side = vec![false; n + 1];
    for &v in &perm[cut..] {
        side[v] = true;
    }
    let mut g = Graph::empty(n);
    for u in 1..=n {
        for v in u + 1..=n {
            if side[u] == side[v] && rng.random_bool(p) {
                g.set(u, v, true);
            }
        }
    }
    g
}

pub fn disjoint_union(g: &Graph, h: &Graph) -> Graph {
    let shift = g.n();
    let mut out = Graph::empty(g.n() + h.n());
    for (u, v) in g.edges() {
        out.set(u, v, true);
    }
    for (u, v) in h.edges() {
        out.set(u + shift, v + shift, true);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::components;

    #[test]
    fn cycle_family() {
        let g = generate(&GraphFamily::Cycle { len: 5, n: 5 }, 0).unwrap();
        assert_eq!(g.edge_count(), 5);
        assert!(!g.is_bipartite());
        assert!((1..=5).all(|v| g.degree(v) == 2));
        assert!(g.is_connected());
        assert!(generate(&GraphFamily::Cycle { len: 2, n: 2 }, 0).is_err());
        assert!(generate(&GraphFamily::Cycle { len: 4, n: 3 }, 0).is_err());
    }

    #[test]
    fn complete_bipartite_family() {
        let g = generate(&GraphFamily::CompleteBipartite { a: 3, b: 4 }, 0).unwrap();
        assert_eq!(g.edge_count(), 12);
        assert!(g.is_connected());
        assert!(g.is_bipartite());
    }

    #[test]
    fn gnp_is_deterministic_per_seed() {
        let fam = GraphFamily::RandomGnp { n: 10, p: 0.3 };
        assert_eq!(generate(&fam, 7).unwrap(), generate(&fam, 7).unwrap());
        assert_ne!(generate(&fam, 7).unwrap(), generate(&fam, 8).unwrap());
        assert!(generate(&GraphFamily::RandomGnp { n: 3, p: 1.5 }, 0).is_err());
    }

    #[test]
    fn random_trees_are_spanning_trees() {
        for seed in 0..50 {
            let n = 1 + (seed as usize % 9);
            let g = generate(&GraphFamily::RandomTree { n }, seed).unwrap();
            assert_eq!(g.edge_count(), n - 1);
            assert!(g.is_connected());
        }
    }

    #[test]
    fn random_classes_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 2..9 {
            assert!(random_bipartite(n, 0.7, &mut rng).is_bipartite());
            assert!(random_connected(n, 0.2, &mut rng).is_connected());
            assert!(!random_disconnected(n, 0.9, &mut rng).is_connected());
        }
    }

    #[test]
    fn disjoint_union_shifts_labels() {
        let fam = GraphFamily::DisjointUnion {
            left: Box::new(GraphFamily::Complete { n: 3 }),
            right: Box::new(GraphFamily::Complete { n: 3 }),
        };
        let g = generate(&fam, 0).unwrap();
        assert_eq!(g.n(), 6);
        assert!(g.has_edge(4, 6));
        assert_eq!(components(&g).count(), 2);
    }
}

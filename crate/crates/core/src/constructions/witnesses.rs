//! Explicitly constructed witnesses for P1 and P2.
//!
//! Every function validates its result exactly against the program before
//! returning it, so a returned witness is always a genuine witness.

use std::collections::{BTreeMap, VecDeque};

use num_traits::{One, Zero};

use super::{BipartitenessProgram, ConnectivityProgram, ConstructionError, GraphProgram};
use crate::graphs::{components, find_odd_cycle, shortest_path, Graph, OddCycle};
use crate::numeric::{int, ratio, Rational, SparseVector};
use crate::span_program::{NegativeWitness, PositiveWitness, VectorId};

fn accumulate(coefficients: &mut BTreeMap<VectorId, Rational>, id: VectorId, c: Rational) {
    let slot = coefficients.entry(id).or_insert_with(Rational::zero);
    *slot += c;
    if slot.is_zero() {
        coefficients.remove(&id);
    }
}

/// Adds `scale` times the alternating-sign expression of the target that walks
/// `cycle` once starting from `cycle[start]`, inside subspace `k = cycle[start]`.
fn add_rotation(
    p1: &BipartitenessProgram,
    cycle: &[usize],
    start: usize,
    scale: &Rational,
    coefficients: &mut BTreeMap<VectorId, Rational>,
) {
    let d = cycle.len();
    let k = cycle[start];
    accumulate(coefficients, p1.free_vector(k), scale.clone());
    // Step j uses edge (cycle[start+j-1], cycle[start+j]) from parity (j-1)%2 to j%2,
    // with sign (-1)^j.
    for j in 1..=d {
        let a = cycle[(start + j - 1) % d];
        let b = cycle[(start + j) % d];
        let from_parity_one = (j - 1) % 2 == 1;
        let id = if from_parity_one {
            p1.edge_vector(b, a, k)
        } else {
            p1.edge_vector(a, b, k)
        };
        let sign = if j % 2 == 0 {
            scale.clone()
        } else {
            -scale.clone()
        };
        accumulate(coefficients, id, sign);
    }
}

fn check_cycle(
    p1: &BipartitenessProgram,
    g: &Graph,
    cycle: &OddCycle,
) -> Result<(), ConstructionError> {
    p1.check_graph(g)?;
    OddCycle::new(g, cycle.vertices().to_vec())?;
    Ok(())
}

fn finish_positive(
    program: &impl GraphProgram,
    g: &Graph,
    coefficients: BTreeMap<VectorId, Rational>,
) -> Result<PositiveWitness, ConstructionError> {
    let w = PositiveWitness::new(coefficients);
    w.verify(program.program(), &g.to_input())?;
    Ok(w)
}

fn finish_negative(
    program: &impl GraphProgram,
    g: &Graph,
    functional: SparseVector,
) -> Result<NegativeWitness, ConstructionError> {
    let w = NegativeWitness::from_functional(program.program(), functional)?;
    w.verify(program.program(), &g.to_input())?;
    Ok(w)
}

/// Averages the `d` rotations of an odd cycle, each with weight `1/d`.
/// Size is exactly `(d + 1) / d`.
pub fn paper_positive_witness_p1(
    p1: &BipartitenessProgram,
    g: &Graph,
    cycle: &OddCycle,
) -> Result<PositiveWitness, ConstructionError> {
    check_cycle(p1, g, cycle)?;
    let d = cycle.len();
    let weight = ratio(1, d as i64);
    let mut coefficients = BTreeMap::new();
    for start in 0..d {
        add_rotation(p1, cycle.vertices(), start, &weight, &mut coefficients);
    }
    finish_positive(p1, g, coefficients)
}

/// One rotation with unit coefficients, starting at `start_vertex`. Size `d + 1`.
pub fn paper_positive_witness_p1_single(
    p1: &BipartitenessProgram,
    g: &Graph,
    cycle: &OddCycle,
    start_vertex: usize,
) -> Result<PositiveWitness, ConstructionError> {
    check_cycle(p1, g, cycle)?;
    let start = cycle
        .vertices()
        .iter()
        .position(|&v| v == start_vertex)
        .ok_or_else(|| {
            ConstructionError::NotApplicable(format!("vertex {start_vertex} is not on the cycle"))
        })?;
    let mut coefficients = BTreeMap::new();
    add_rotation(
        p1,
        cycle.vertices(),
        start,
        &Rational::one(),
        &mut coefficients,
    );
    finish_positive(p1, g, coefficients)
}

/// Sign-propagated functional for a bipartite graph.
///
/// `<w'|0> = 1`; in each subspace `k` the seeds are `<w'|k_{k,0}> = 0` and
/// `<w'|k_{k,1}> = -1`, and values spread across every edge with a sign flip
/// (breadth-first, neighbors in increasing order). Unreached coordinates are 0.
pub fn paper_negative_witness_p1(
    p1: &BipartitenessProgram,
    g: &Graph,
) -> Result<NegativeWitness, ConstructionError> {
    p1.check_graph(g)?;
    if let Some(c) = find_odd_cycle(g) {
        return Err(ConstructionError::NotApplicable(format!(
            "graph has an odd cycle {:?}",
            c.vertices()
        )));
    }
    let n = g.n();
    let basis = p1.basis();
    let mut functional = SparseVector::zeros(basis.dim());
    functional.add_at(basis.zero(), &Rational::one());
    for k in 1..=n {
        // value[(v, parity)]
        let mut value: BTreeMap<(usize, bool), i64> = BTreeMap::new();
        let mut queue = VecDeque::new();
        for (node, val) in [((k, false), 0), ((k, true), -1)] {
            value.insert(node, val);
            queue.push_back(node);
        }
        while let Some((u, parity)) = queue.pop_front() {
            let val = value[&(u, parity)];
            for v in g.neighbors(u) {
                let next = (v, !parity);
                match value.get(&next) {
                    None => {
                        value.insert(next, -val);
                        queue.push_back(next);
                    }
                    Some(&existing) if existing != -val => {
                        return Err(ConstructionError::NotApplicable(format!(
                            "propagation conflict at vertex {v} in subspace {k}"
                        )));
                    }
                    Some(_) => {}
                }
            }
        }
        for ((v, parity), val) in value {
            functional.add_at(basis.index(v, k, parity), &int(val));
        }
    }
    finish_negative(p1, g, functional)
}

/// Telescoping witness along BFS shortest paths from vertex 1.
///
/// For each `k in 2..=n`: coefficient 1 on the free vector of subspace `k`, and
/// coefficients `+-1` on the edge vectors of a shortest path `1 -> k` in that
/// subspace, cancelling `|1_k> - |k_k>`.
pub fn paper_positive_witness_p2(
    p2: &ConnectivityProgram,
    g: &Graph,
) -> Result<PositiveWitness, ConstructionError> {
    p2.check_graph(g)?;
    let mut coefficients = BTreeMap::new();
    for k in 2..=g.n() {
        let path = shortest_path(g, 1, k)?.ok_or_else(|| {
            ConstructionError::NotApplicable(format!("vertex {k} unreachable from 1"))
        })?;
        accumulate(&mut coefficients, p2.free_vector(k), Rational::one());
        for step in path.windows(2) {
            let (a, b) = (step[0], step[1]);
            // Need |b_k> - |a_k>; the stored vector is |min_k> - |max_k>.
            let sign = if b < a { 1 } else { -1 };
            accumulate(&mut coefficients, p2.edge_vector(a, b, k), int(sign));
        }
    }
    finish_positive(p2, g, coefficients)
}

/// Where the `1/d_v` mass of a P2 negative witness is placed inside each subspace `k in C_v`.
///
/// Both choices satisfy the free-vector constraint `<w'|0_k> + <w'|1_k> - <w'|k_k> = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum P2Seeding {
    /// `<w'|1_k> = -1/d_v`, `<w'|k_k> = 0`. The value spreads over the component
    /// of vertex 1, so every absent edge leaving that component is charged; the
    /// size is `|C_1| (n - |C_1|) / d_v`, which can exceed `n`.
    VertexOne,
    /// `<w'|1_k> = 0`, `<w'|k_k> = 1/d_v`. Only absent edges leaving `C_v` are
    /// charged, giving size `n - d_v`.
    #[default]
    Component,
}

/// Negative witness for a graph in which `v` is not connected to vertex 1.
///
/// `<w'|0_k> = 1/d_v` for `k in C_v` (0 otherwise), seeds per `seeding`, then
/// equal values propagate across available edge vectors within each subspace.
pub fn paper_negative_witness_p2(
    p2: &ConnectivityProgram,
    g: &Graph,
    v: usize,
    seeding: P2Seeding,
) -> Result<NegativeWitness, ConstructionError> {
    p2.check_graph(g)?;
    let n = g.n();
    if !(1..=n).contains(&v) {
        return Err(ConstructionError::VertexOutOfRange { vertex: v, n });
    }
    let info = components(g);
    if info.same(1, v) {
        return Err(ConstructionError::NotApplicable(format!(
            "vertex {v} is connected to vertex 1"
        )));
    }
    let members = info.members(v);
    let share = ratio(1, members.len() as i64);
    let basis = p2.basis();
    let mut functional = SparseVector::zeros(basis.dim());
    for &k in &members {
        functional.add_at(basis.index(0, k), &share);
        let (seed, mass) = match seeding {
            P2Seeding::VertexOne => (1, -share.clone()),
            P2Seeding::Component => (k, share.clone()),
        };
        // Breadth-first propagation from the seed; every vertex reached shares its value.
        let mut seen = vec![false; n + 1];
        seen[seed] = true;
        let mut queue = VecDeque::from([seed]);
        while let Some(u) = queue.pop_front() {
            functional.add_at(basis.index(u, k), &mass);
            for w in g.neighbors(u) {
                if !std::mem::replace(&mut seen[w], true) {
                    queue.push_back(w);
                }
            }
        }
    }
    finish_negative(p2, g, functional)
}

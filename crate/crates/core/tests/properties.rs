use num_traits::{One, Zero};
use proptest::prelude::*;

use spanprog::constructions::{build_p1, build_p2, build_st_connectivity, GraphProgram};
use spanprog::graphs::{components, find_odd_cycle, generate, Graph, GraphFamily, OddCycle};
use spanprog::numeric::float::{
    constrained_quadratic_min_f64, min_norm_solution_f64, DEFAULT_TOLERANCE,
};
use spanprog::numeric::{
    constrained_quadratic_min, min_norm_solution, ratio, span_membership, to_f64, Rational,
    SparseVector,
};
use spanprog::span_program::SpanProgram;

fn sparse(dim: usize, coords: &[i64]) -> SparseVector {
    SparseVector::from_int_entries(dim, coords.iter().enumerate().map(|(i, &c)| (i, c))).unwrap()
}

/// `count` vectors plus a target, all in dimension `dim`, entries in `-2..=2` (mostly zero).
fn system(
    max_dim: usize,
    max_count: usize,
) -> impl Strategy<Value = (Vec<SparseVector>, SparseVector)> {
    (1..=max_dim, 0..=max_count).prop_flat_map(|(dim, count)| {
        let entry = prop_oneof![3 => Just(0i64), 2 => -2i64..=2];
        let vecs = prop::collection::vec(prop::collection::vec(entry.clone(), dim), count);
        let target = prop::collection::vec(entry, dim);
        (vecs, target)
            .prop_map(move |(vs, t)| (vs.iter().map(|v| sparse(dim, v)).collect(), sparse(dim, &t)))
    })
}

fn graph(min_n: usize, max_n: usize) -> impl Strategy<Value = Graph> {
    (min_n..=max_n).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v)));
            Graph::from_edges(n, pairs.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e)).unwrap()
        })
    })
}

fn graph_with_perm(min_n: usize, max_n: usize) -> impl Strategy<Value = (Graph, Vec<usize>)> {
    graph(min_n, max_n).prop_flat_map(|g| {
        let perm: Vec<usize> = (1..=g.n()).collect();
        (Just(g), Just(perm).prop_shuffle())
    })
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= DEFAULT_TOLERANCE * a.abs().max(1.0)
}

fn combine(vectors: &[SparseVector], coeffs: &[Rational], dim: usize) -> SparseVector {
    let mut sum = SparseVector::zeros(dim);
    for (v, c) in vectors.iter().zip(coeffs) {
        sum.add_scaled(c, v).unwrap();
    }
    sum
}

/// Exact check that exactly one witness exists and that it is valid, including
/// orthogonality of a negative witness to every free vector.
fn dichotomy_holds(program: &SpanProgram, g: &Graph) -> Result<(), TestCaseError> {
    let x = g.to_input();
    let pos = program.positive_witness(&x).unwrap();
    let neg = program.negative_witness(&x).unwrap();
    prop_assert!(pos.is_some() != neg.is_some());
    prop_assert_eq!(pos.is_some(), program.evaluate(&x).unwrap());
    if let Some(w) = pos {
        prop_assert!(w.verify(program, &x).is_ok());
    }
    if let Some(w) = neg {
        prop_assert!(w.verify(program, &x).is_ok());
        for &id in program.free_vectors() {
            prop_assert!(program
                .vector(id)
                .unwrap()
                .dot(&w.functional)
                .unwrap()
                .is_zero());
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn membership_iff_min_norm_solution((vectors, target) in system(6, 6)) {
        let member = span_membership(&vectors, &target).unwrap();
        let sol = min_norm_solution(&vectors, &target).unwrap();
        prop_assert_eq!(member, sol.is_some());
        if let Some(w) = sol {
            prop_assert_eq!(combine(&vectors, &w, target.dim()), target.clone());
        }
    }

    #[test]
    fn min_norm_matches_float_route((vectors, target) in system(5, 6)) {
        let exact = min_norm_solution(&vectors, &target).unwrap();
        let float = min_norm_solution_f64(&vectors, &target, DEFAULT_TOLERANCE).unwrap();
        prop_assert_eq!(exact.is_some(), float.is_some());
        if let (Some(e), Some(f)) = (exact, float) {
            let exact_size: Rational = e.iter().map(|c| c * c).sum();
            let float_size: f64 = f.values.iter().map(|c| c * c).sum();
            prop_assert!(close(to_f64(&exact_size), float_size), "{} vs {}", exact_size, float_size);
        }
    }

    #[test]
    fn quadratic_min_is_feasible_and_matches_float(
        (objective, normalizer) in system(5, 5),
        orth_count in 0usize..4,
    ) {
        let orth: Vec<SparseVector> = objective.iter().take(orth_count).cloned().collect();
        let exact = constrained_quadratic_min(&objective, &orth, &normalizer).unwrap();
        let feasible = !normalizer.is_zero() && !span_membership(&orth, &normalizer).unwrap();
        prop_assert_eq!(exact.is_some(), feasible);
        let float = constrained_quadratic_min_f64(&objective, &orth, &normalizer, DEFAULT_TOLERANCE).unwrap();
        if let Some(m) = exact {
            prop_assert_eq!(normalizer.dot(&m.point).unwrap(), Rational::one());
            for v in &orth {
                prop_assert!(v.dot(&m.point).unwrap().is_zero());
            }
            let value: Rational = objective.iter().map(|v| { let d = v.dot(&m.point).unwrap(); &d * &d }).sum();
            prop_assert_eq!(&value, &m.value);
            let f = float.expect("float route finds a feasible point");
            prop_assert!(close(to_f64(&m.value), f.value), "{} vs {}", m.value, f.value);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn p1_dichotomy_and_free_vector_neutrality(g in graph(1, 6)) {
        dichotomy_holds(build_p1(g.n()).unwrap().program(), &g)?;
    }

    #[test]
    fn p2_dichotomy_and_free_vector_neutrality(g in graph(2, 7)) {
        dichotomy_holds(build_p2(g.n()).unwrap().program(), &g)?;
    }

    #[test]
    fn relabeling_preserves_value_and_witness_size((g, perm) in graph_with_perm(2, 6)) {
        let h = g.relabel(&perm).unwrap();
        // The odd-cycle program treats all vertices alike, so sizes are invariant too.
        let p1 = build_p1(g.n()).unwrap();
        let a = p1.program().optimal_witness(&g.to_input()).unwrap();
        let b = p1.program().optimal_witness(&h.to_input()).unwrap();
        prop_assert_eq!(a.is_positive(), b.is_positive());
        prop_assert_eq!(a.size(), b.size());
        // Connectivity singles out vertex 1, so only the value is invariant.
        let p2 = build_p2(g.n()).unwrap();
        prop_assert_eq!(p2.evaluate_graph(&g).unwrap(), p2.evaluate_graph(&h).unwrap());
    }

    #[test]
    fn optimal_witness_size_matches_float_route(g in graph(2, 5)) {
        for program in [build_p1(g.n()).unwrap().into_program(), build_p2(g.n()).unwrap().into_program()] {
            let x = g.to_input();
            let w = program.optimal_witness(&x).unwrap();
            let float = if w.is_positive() {
                program.positive_witness_float(&x, DEFAULT_TOLERANCE).unwrap().map(|(_, s)| s)
            } else {
                program.negative_witness_float(&x, DEFAULT_TOLERANCE).unwrap().map(|m| m.value)
            };
            let f = float.expect("float route agrees on the side");
            prop_assert!(close(to_f64(w.size()), f), "{} vs {}", w.size(), f);
        }
    }

    #[test]
    fn odd_cycle_search_matches_exhaustive_coloring(g in graph(1, 8)) {
        let n = g.n();
        let edges: Vec<(usize, usize)> = g.edges().collect();
        let colorable = (0u32..1 << n).any(|c| edges.iter().all(|&(u, v)| (c >> (u - 1) & 1) != (c >> (v - 1) & 1)));
        match find_odd_cycle(&g) {
            None => prop_assert!(colorable),
            Some(cycle) => {
                prop_assert!(!colorable);
                prop_assert!(cycle.len() % 2 == 1);
                prop_assert!(OddCycle::new(&g, cycle.vertices().to_vec()).is_ok());
            }
        }
    }

    #[test]
    fn components_match_matrix_powering(g in graph(1, 8)) {
        let n = g.n();
        // Boolean (I + A)^(n-1) by repeated squaring.
        let mut m: Vec<Vec<bool>> = (1..=n).map(|u| (1..=n).map(|v| u == v || g.has_edge(u, v)).collect()).collect();
        let mut steps = 1;
        while steps < n {
            m = (0..n).map(|i| (0..n).map(|j| (0..n).any(|k| m[i][k] && m[k][j])).collect()).collect();
            steps *= 2;
        }
        let info = components(&g);
        for u in 1..=n {
            for v in 1..=n {
                prop_assert_eq!(info.same(u, v), m[u - 1][v - 1]);
            }
        }
        prop_assert_eq!(g.is_connected(), m[0].iter().all(|&b| b));
    }

    #[test]
    fn generated_families_have_their_defining_properties(n in 3usize..12, seed in any::<u64>()) {
        let c = generate(&GraphFamily::Cycle { len: n, n }, seed).unwrap();
        prop_assert!((1..=n).all(|v| c.degree(v) == 2) && c.is_connected());
        let t = generate(&GraphFamily::RandomTree { n }, seed).unwrap();
        prop_assert!(t.edge_count() == n - 1 && t.is_connected());
        let b = generate(&GraphFamily::RandomBipartite { n, p: 0.6 }, seed).unwrap();
        prop_assert!(find_odd_cycle(&b).is_none());
        let k = generate(&GraphFamily::Complete { n }, seed).unwrap();
        prop_assert_eq!(k.edge_count(), n * (n - 1) / 2);
    }
}

#[test]
fn edge_vectors_stay_inside_one_subspace() {
    for n in 2..=6 {
        let p1 = build_p1(n).unwrap();
        let basis = p1.basis();
        for (id, v) in p1.program().vectors().skip(n) {
            let ks: Vec<usize> = v
                .support()
                .map(|i| basis.decode(i).expect("edge vectors avoid |0>").1)
                .collect();
            assert!(ks.windows(2).all(|w| w[0] == w[1]), "p1 vector {id}");
        }
        let p2 = build_p2(n).unwrap();
        let basis = p2.basis();
        for (id, v) in p2.program().vectors().skip(n - 1) {
            let ks: Vec<usize> = v.support().map(|i| basis.decode(i).unwrap().1).collect();
            assert_eq!(ks.len(), 2);
            assert_eq!(ks[0], ks[1], "p2 vector {id}");
        }
    }
}

#[test]
fn st_program_matches_components_on_all_five_vertex_graphs() {
    let n = 5;
    let pairs: Vec<(usize, usize)> = (1..=n)
        .flat_map(|u| (u + 1..=n).map(move |v| (u, v)))
        .collect();
    let programs: Vec<_> = (1..=n)
        .flat_map(|s| (1..=n).filter(move |&t| t != s).map(move |t| (s, t)))
        .map(|(s, t)| ((s, t), build_st_connectivity(n, s, t).unwrap()))
        .collect();
    for mask in 0u32..1 << pairs.len() {
        let g = Graph::from_edges(
            n,
            pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e),
        )
        .unwrap();
        let info = components(&g);
        for ((s, t), p) in &programs {
            assert_eq!(p.evaluate_graph(&g).unwrap(), info.same(*s, *t));
        }
    }
}

/// The positive witness of the s-t program is a unit s-t flow of minimum energy,
/// so its size is the effective resistance between s and t with unit edges.
#[test]
fn st_positive_witness_is_effective_resistance() {
    for n in 3..=9 {
        let cycle = generate(&GraphFamily::Cycle { len: n, n }, 0).unwrap();
        for d in 1..n {
            let st = build_st_connectivity(n, 1, 1 + d).unwrap();
            let x = cycle.to_input();
            let w = st.program().positive_witness(&x).unwrap().unwrap();
            // Two parallel paths of lengths d and n - d.
            assert_eq!(
                w.size,
                ratio((d * (n - d)) as i64, n as i64),
                "C{n}, distance {d}"
            );
            let (_, float) = st
                .program()
                .positive_witness_float(&x, DEFAULT_TOLERANCE)
                .unwrap()
                .unwrap();
            assert!(close(to_f64(&w.size), float));
        }
        let path = generate(&GraphFamily::Path { n }, 0).unwrap();
        let st = build_st_connectivity(n, 1, n).unwrap();
        let w = st
            .program()
            .positive_witness(&path.to_input())
            .unwrap()
            .unwrap();
        assert_eq!(w.size, Rational::from_integer((n as i64 - 1).into()));
    }
}

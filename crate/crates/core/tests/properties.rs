use proptest::prelude::*;

use rapnet::amg::{
    aggregate, collapse_to_pattern, strength_graph, tentative_prolongation, Variant,
};
use rapnet::gnn::{
    augment_hierarchy, load_weights, save_weights, AugmentOptions, GnnWeights, HIDDEN,
};
use rapnet::problems::{extract_subgraph, generate, graph_laplacian, Family, ProblemSpec};
use rapnet::solve::{v_cycle, CycleConfig};
use rapnet::sparse::{
    read_binary, read_matrix_market, spgemm, triple_product, write_binary, write_matrix_market,
};
use rapnet::{build_hierarchy, CoarseSolver, SetupConfig, SparseMatrix};

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = SparseMatrix> {
    proptest::collection::vec((0..rows, 0..cols, -4.0f64..4.0), 0..rows * cols)
        .prop_map(move |t| SparseMatrix::from_triplets(rows, cols, &t).unwrap())
}

fn sized_matrix() -> impl Strategy<Value = SparseMatrix> {
    (1usize..12, 1usize..12).prop_flat_map(|(r, c)| matrix(r, c))
}

/// Connected weighted graph Laplacian: a random spanning path plus extra edges.
fn laplacian() -> impl Strategy<Value = SparseMatrix> {
    (3usize..40).prop_flat_map(|n| {
        (
            Just(n),
            Just(()).prop_perturb(move |_, mut rng| {
                let mut order: Vec<usize> = (0..n).collect();
                for i in (1..n).rev() {
                    order.swap(i, rng.random_range(0..=i));
                }
                order
            }),
            proptest::collection::vec((0..n, 0..n), 0..2 * n),
        )
            .prop_map(|(n, order, extra)| {
                let mut edges: Vec<_> = order.windows(2).map(|w| (w[0], w[1])).collect();
                edges.extend(extra.into_iter().filter(|(a, b)| a != b));
                edges.sort_unstable();
                edges.dedup();
                graph_laplacian(n, &edges)
            })
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn close(a: &SparseMatrix, b: &SparseMatrix, tol: f64) -> bool {
    let (da, db) = (a.to_dense(), b.to_dense());
    let scale = 1.0 + da.iter().flatten().fold(0f64, |m, v| m.max(v.abs()));
    da.iter()
        .flatten()
        .zip(db.iter().flatten())
        .all(|(x, y)| (x - y).abs() <= tol * scale)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transpose_is_adjoint(a in sized_matrix(), seed in any::<u64>()) {
        let x: Vec<f64> = (0..a.n_cols()).map(|i| ((i as u64 ^ seed) % 7) as f64 - 3.0).collect();
        let y: Vec<f64> = (0..a.n_rows()).map(|i| ((i as u64 + seed) % 5) as f64 - 2.0).collect();
        let lhs = dot(&y, &a.spmv(&x).unwrap());
        let rhs = dot(&a.transpose().spmv(&y).unwrap(), &x);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs()));
        prop_assert_eq!(a.transpose().transpose(), a);
    }

    #[test]
    fn triple_product_matches_two_products(
        (r, a, p) in (1usize..10, 1usize..10).prop_flat_map(|(n, m)| (matrix(m, n), matrix(n, n), matrix(n, m)))
    ) {
        let fused = triple_product(&r, &a, &p).unwrap();
        let chained = spgemm(&spgemm(&r, &a).unwrap(), &p).unwrap();
        prop_assert!(close(&fused, &chained, 1e-5));
    }

    #[test]
    fn aggregation_partitions_every_node(a in laplacian(), seed in any::<u64>()) {
        let s = strength_graph(&a, 0.5).unwrap();
        prop_assert!(s.pattern_subset_of(&a));
        prop_assert!((0..s.n_rows()).all(|i| s.get(i, i) != 0.0));
        prop_assert!(s.same_pattern(&s.transpose()));
        let agg = aggregate(&s, seed);
        prop_assert_eq!(agg.n_nodes(), a.n_rows());
        prop_assert!(agg.members().iter().all(|m| !m.is_empty()));
        let p = tentative_prolongation(&agg);
        prop_assert!((0..p.n_rows()).all(|i| p.row(i).0.len() == 1));
        prop_assert_eq!(p.n_cols(), agg.n_aggregates());
    }

    #[test]
    fn galerkin_hierarchies_keep_laplacian_structure(a in laplacian(), seed in any::<u64>()) {
        let cfg = SetupConfig { min_coarse_size: 1, ..SetupConfig::default() }.with_max_levels(4);
        for variant in [Variant::Agg, Variant::Sa, Variant::SpSa] {
            let h = build_hierarchy(&a, variant, &cfg, seed).unwrap();
            prop_assert!(h.operator_complexity() >= 1.0);
            for l in 0..h.depth() {
                let op = h.operator(l);
                prop_assert!(op.is_symmetric(1e-5));
                let scale = op.values().iter().fold(1f64, |m, v| m.max(v.abs() as f64));
                prop_assert!(op.row_sums().iter().all(|s| s.abs() <= 1e-4 * scale));
            }
        }
    }

    #[test]
    fn collapse_keeps_row_sums_and_pattern(a in laplacian(), seed in any::<u64>()) {
        let s = strength_graph(&a, 0.5).unwrap();
        let p = tentative_prolongation(&aggregate(&s, seed));
        let pattern = triple_product(&p.transpose(), &a, &p).unwrap();
        let dense_p = spgemm(&a, &spgemm(&a, &p).unwrap()).unwrap();
        let galerkin = triple_product(&p.transpose(), &a, &dense_p).unwrap();
        let c = collapse_to_pattern(&galerkin, &pattern).unwrap();
        prop_assert!(c.pattern_subset_of(&pattern));
        for (x, y) in c.row_sums().iter().zip(galerkin.row_sums()) {
            prop_assert!((x - y).abs() <= 1e-4 * (1.0 + y.abs()));
        }
    }

    #[test]
    fn corrections_never_change_sparsity(a in laplacian(), seed in any::<u64>()) {
        let cfg = SetupConfig { min_coarse_size: 1, ..SetupConfig::default() }.with_max_levels(3);
        let h = build_hierarchy(&a, Variant::Agg, &cfg, seed).unwrap();
        let w = GnnWeights::random(HIDDEN, 0.1, seed);
        let out = augment_hierarchy(&h, &w, &AugmentOptions::default()).unwrap();
        for l in 0..h.depth() {
            prop_assert!(out.operator(l).same_pattern(h.operator(l)));
        }
        prop_assert_eq!(out.operator_complexity(), h.operator_complexity());
    }

    #[test]
    fn v_cycle_is_affine_in_the_guess(a in laplacian(), seed in any::<u64>(), sweeps in 1usize..3) {
        let mut t: Vec<_> = a.iter().map(|(i, j, v)| (i, j, v as f64)).collect();
        t.extend((0..a.n_rows()).map(|i| (i, i, 0.5)));
        let a = SparseMatrix::from_triplets(a.n_rows(), a.n_cols(), &t).unwrap();
        let h = build_hierarchy(&a, Variant::Sa, &SetupConfig { min_coarse_size: 2, ..SetupConfig::default() }, seed).unwrap();
        let n = a.n_rows();
        let cfg = CycleConfig::new(sweeps, CoarseSolver::DenseLu);
        let b: Vec<f64> = (0..n).map(|i| (i % 3) as f64 - 1.0).collect();
        let x1: Vec<f64> = (0..n).map(|i| ((i as u64 * 7 + seed) % 11) as f64).collect();
        let x2: Vec<f64> = (0..n).map(|i| (i % 4) as f64).collect();
        let diff: Vec<f64> = x1.iter().zip(&x2).map(|(p, q)| p - q).collect();
        let lhs: Vec<f64> = v_cycle(&h, &b, &x1, &cfg).unwrap().iter()
            .zip(v_cycle(&h, &b, &x2, &cfg).unwrap()).map(|(p, q)| p - q).collect();
        let rhs = v_cycle(&h, &vec![0.0; n], &diff, &cfg).unwrap();
        for (p, q) in lhs.iter().zip(&rhs) {
            prop_assert!((p - q).abs() <= 1e-8 * (1.0 + q.abs()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn generators_are_pure_and_laplacians_balanced(idx in 0usize..10, seed in 0u64..1000) {
        let family = Family::ALL[idx];
        let spec = ProblemSpec::small(family, seed);
        let a = generate(&spec).unwrap().a;
        prop_assert_eq!(&a, &generate(&spec).unwrap().a);
        if family.is_graph_laplacian() {
            prop_assert!(a.row_sums().iter().all(|&s| s == 0.0));
        }
        if family.is_symmetric() {
            prop_assert_eq!(&a, &a.transpose());
        }
    }

    #[test]
    fn subgraphs_have_requested_size(idx in 0usize..10, seed in 0u64..1000, frac in 0.05f64..1.0) {
        let a = generate(&ProblemSpec::small(Family::ALL[idx], seed)).unwrap().a;
        let k = ((a.n_rows() as f64 * frac) as usize).max(1);
        let sub = extract_subgraph(&a, k, seed, true).unwrap();
        prop_assert_eq!(sub.matrix.n_rows(), k);
        let mut nodes = sub.nodes.clone();
        nodes.sort_unstable();
        nodes.dedup();
        prop_assert_eq!(nodes.len(), k);
    }

    #[test]
    fn matrix_files_round_trip(a in sized_matrix()) {
        let dir = tempfile::tempdir().unwrap();
        let (mtx, bin) = (dir.path().join("a.mtx"), dir.path().join("a.bin"));
        write_matrix_market(&a, &mtx).unwrap();
        write_binary(&a, &bin).unwrap();
        prop_assert_eq!(&read_matrix_market(&mtx).unwrap(), &a);
        prop_assert_eq!(&read_binary(&bin).unwrap(), &a);
    }

    #[test]
    fn weights_round_trip(seed in any::<u64>(), hidden in 1usize..6) {
        let dir = tempfile::tempdir().unwrap();
        let w = GnnWeights::random(hidden, 0.5, seed);
        save_weights(&w, dir.path()).unwrap();
        prop_assert_eq!(load_weights(dir.path()).unwrap(), w);
    }
}

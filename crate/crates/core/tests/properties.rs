use graphchain::analysis::{
    ctmc_transient, dtmc_equilibrium, dtmc_transient, expm_symmetric, expm_uniformized, period,
    Horizon,
};
use graphchain::chain::{ctmc_from_graph, dtmc_from_graph, validate_stochastic};
use graphchain::graph::{
    adjacency_matrix, degree_matrix, degree_pmf, enumerate_undirected, generate, laplacian, Edge,
};
use graphchain::info::{
    channel_measures, entropy_trace, feinstein_step, kl_divergence, shannon_entropy, Axis,
};
use graphchain::sampling::{permutation_mixture, random_graph, random_pmf};
use graphchain::simulate::{simulate_walk, WalkLength};
use graphchain::structured::{classify, regular_fast_transient};
use graphchain::{Chain, Graph, GraphKind, Orientation, ProbabilityVector};
use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arb_graph(directed: bool) -> impl Strategy<Value = Graph> {
    (2usize..=7).prop_flat_map(move |m| arb_graph_on(m, directed))
}

fn arb_graph_on(m: usize, directed: bool) -> impl Strategy<Value = Graph> {
    {
        let slots: Vec<(usize, usize)> = (0..m)
            .flat_map(|u| (0..m).map(move |v| (u, v)))
            .filter(|&(u, v)| u != v && (directed || u < v))
            .collect();
        let n = slots.len();
        (
            proptest::collection::vec(any::<bool>(), n),
            proptest::collection::vec(0.1f64..5.0, n),
        )
            .prop_filter_map("need an edge", move |(mask, weights)| {
                let edges: Vec<Edge> = slots
                    .iter()
                    .zip(mask.iter().zip(&weights))
                    .filter(|(_, (keep, _))| **keep)
                    .map(|(&(u, v), (_, &w))| Edge { u, v, weight: w })
                    .collect();
                if edges.is_empty() {
                    None
                } else {
                    Some(Graph::new(m, edges, directed).unwrap())
                }
            })
    }
}

fn arb_perm(m: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..m).collect::<Vec<_>>()).prop_shuffle()
}

fn min_eigenvalue(m: &graphchain::DenseMatrix) -> f64 {
    let n = m.rows();
    let eig = SymmetricEigen::new(DMatrix::from_row_slice(n, n, m.as_slice()));
    eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

fn orientations(g: &Graph) -> Vec<Orientation> {
    if g.is_directed() {
        vec![Orientation::In, Orientation::Out]
    } else {
        vec![Orientation::Undirected]
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn undirected_adjacency_is_symmetric(g in arb_graph(false)) {
        prop_assert!(adjacency_matrix(&g, Orientation::Undirected).unwrap().is_symmetric());
    }

    #[test]
    fn degree_diagonal_is_adjacency_row_sums(g in arb_graph(true)) {
        for o in orientations(&g) {
            let a = adjacency_matrix(&g, o).unwrap();
            let d = degree_matrix(&g, o).unwrap();
            for (i, s) in a.row_sums().into_iter().enumerate() {
                prop_assert_eq!(d[(i, i)], s);
            }
        }
    }

    #[test]
    fn laplacian_is_balanced_and_psd(g in arb_graph(false)) {
        let l = laplacian(&g).unwrap();
        for s in l.row_sums().into_iter().chain(l.column_sums()) {
            prop_assert!(s.abs() < 1e-12);
        }
        prop_assert!(min_eigenvalue(&l) >= -1e-9);
    }

    #[test]
    fn degree_pmf_is_scale_invariant(g in arb_graph(false), scale in 0.01f64..100.0) {
        let p = degree_pmf(&g, Orientation::Undirected).unwrap();
        prop_assert!((p.as_slice().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let scaled = Graph::new(
            g.num_vertices(),
            g.edges().iter().map(|e| Edge { weight: e.weight * scale, ..*e }).collect(),
            false,
        ).unwrap();
        let q = degree_pmf(&scaled, Orientation::Undirected).unwrap();
        prop_assert!(p.max_abs_diff(&q).unwrap() < 1e-12);
    }

    #[test]
    fn in_adjacency_is_out_transposed(g in arb_graph(true)) {
        let a_in = adjacency_matrix(&g, Orientation::In).unwrap();
        let a_out = adjacency_matrix(&g, Orientation::Out).unwrap();
        prop_assert_eq!(a_in, a_out.transpose());
    }

    #[test]
    fn generator_rows_sum_to_zero(g in arb_graph(true)) {
        let unit = g.unit_weight_skeleton();
        for o in orientations(&g) {
            let q = ctmc_from_graph(&unit, o).unwrap();
            for s in q.matrix().row_sums() {
                prop_assert_eq!(s, 0.0);
            }
            let qw = ctmc_from_graph(&g, o).unwrap();
            for s in qw.matrix().row_sums() {
                prop_assert!(s.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn undirected_generator_is_symmetric_with_zero_column_sums(g in arb_graph(false)) {
        let q = ctmc_from_graph(&g.unit_weight_skeleton(), Orientation::Undirected).unwrap();
        prop_assert!(q.matrix().is_symmetric());
        let ones = vec![1.0; g.num_vertices()];
        prop_assert!(q.matrix().left_mul(&ones).unwrap().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn builders_are_permutation_equivariant(
        (g, perm) in (2usize..=6).prop_flat_map(|m| (arb_graph_on(m, true), arb_perm(m)))
    ) {
        let h = g.relabel(&perm).unwrap();
        for o in orientations(&g) {
            let p = dtmc_from_graph(&g, o).unwrap();
            let ph = dtmc_from_graph(&h, o).unwrap();
            prop_assert!(p.matrix().permute(&perm).unwrap().max_abs_diff(ph.matrix()) < 1e-12);
            let q = ctmc_from_graph(&g, o).unwrap();
            let qh = ctmc_from_graph(&h, o).unwrap();
            prop_assert!(q.matrix().permute(&perm).unwrap().max_abs_diff(qh.matrix()) < 1e-12);
        }
    }

    #[test]
    fn transient_distributions_stay_normalized(g in arb_graph(true), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for o in orientations(&g) {
            let pi0 = random_pmf(g.num_vertices(), &mut rng);
            let p = dtmc_from_graph(&g, o).unwrap();
            for d in dtmc_transient(&p, &pi0, 25).unwrap().distributions {
                prop_assert!((d.as_slice().iter().sum::<f64>() - 1.0).abs() < 1e-9);
                prop_assert!(d.as_slice().iter().all(|&x| x >= -1e-12));
            }
            let q = ctmc_from_graph(&g, o).unwrap();
            for d in ctmc_transient(&q, &pi0, &[0.0, 0.3, 1.0, 4.0]).unwrap().distributions {
                prop_assert!((d.as_slice().iter().sum::<f64>() - 1.0).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn uniformization_matches_eigendecomposition(g in arb_graph(false), t in 0.0f64..6.0) {
        let q = ctmc_from_graph(&g, Orientation::Undirected).unwrap();
        let a = expm_uniformized(&q, t).unwrap();
        let b = expm_symmetric(&q, t).unwrap();
        prop_assert!(a.max_abs_diff(&b) < 1e-8);
    }

    #[test]
    fn entropy_is_permutation_invariant_and_bounded(
        (p, perm) in (1usize..=16).prop_flat_map(|m| (
            proptest::collection::vec(0.0f64..1.0, m),
            arb_perm(m),
        ))
    ) {
        prop_assume!(p.iter().sum::<f64>() > 0.0);
        let pv = ProbabilityVector::from_weights(&p).unwrap();
        let mut shuffled = vec![0.0; p.len()];
        for (i, &j) in perm.iter().enumerate() {
            shuffled[j] = pv[i];
        }
        let h = shannon_entropy(&pv);
        let hs = shannon_entropy(&ProbabilityVector::new(shuffled).unwrap());
        prop_assert!((h - hs).abs() < 1e-12);
        let max = (p.len() as f64).log2();
        prop_assert!(h <= max + 1e-12);
        prop_assert!(h >= 0.0);
    }

    #[test]
    fn kl_is_nonnegative_and_zero_only_on_equality(seed in any::<u64>(), m in 1usize..=10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_pmf(m, &mut rng);
        let q = random_pmf(m, &mut rng);
        let d = kl_divergence(&p, &q).unwrap();
        prop_assert!(d >= 0.0);
        prop_assert_eq!(kl_divergence(&p, &p).unwrap(), 0.0);
        if p.max_abs_diff(&q).unwrap() > 1e-6 {
            prop_assert!(d > 0.0);
        }
    }

    #[test]
    fn doubly_stochastic_chains_never_lose_entropy(seed in any::<u64>(), m in 1usize..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = 1 + (seed % m as u64) as usize;
        let b = permutation_mixture(m, k, &mut rng).unwrap();
        let pi0 = random_pmf(m, &mut rng);
        let t = entropy_trace(Chain::Discrete(&b), &pi0, &Horizon::Steps(40)).unwrap();
        prop_assert!(t.is_non_decreasing(1e-12));
        let mapped = feinstein_step(&b, &pi0).unwrap();
        prop_assert!((mapped.as_slice().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(shannon_entropy(&mapped) >= shannon_entropy(&pi0) - 1e-12);
    }

    #[test]
    fn channel_measures_are_ordered_and_relabel_invariant(seed in any::<u64>(), m in 2usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<f64>> = (0..m).map(|_| random_pmf(m, &mut rng).into_vec()).collect();
        let b = validate_stochastic(graphchain::DenseMatrix::from_rows(&rows).unwrap()).unwrap();
        let c = channel_measures(&b, Axis::Rows).unwrap();
        prop_assert!(c.m1 <= c.m2);
        let perm = graphchain::sampling::random_permutation(m, &mut rng);
        let bp = validate_stochastic(b.matrix().permute(&perm).unwrap()).unwrap();
        let cp = channel_measures(&bp, Axis::Rows).unwrap();
        prop_assert!((c.m1 - cp.m1).abs() < 1e-12 && (c.m2 - cp.m2).abs() < 1e-12);

        let ds = permutation_mixture(m, m, &mut rng).unwrap();
        let cc = channel_measures(&ds, Axis::Columns).unwrap();
        prop_assert!(cc.m1 <= cc.m2);
    }

    #[test]
    fn classify_is_relabel_invariant(
        (g, perm) in (2usize..=7).prop_flat_map(|m| (arb_graph_on(m, false), arb_perm(m)))
    ) {
        let g = g.unit_weight_skeleton();
        let a = classify(&g).unwrap();
        let b = classify(&g.relabel(&perm).unwrap()).unwrap();
        prop_assert!((a.graph_entropy_bits - b.graph_entropy_bits).abs() < 1e-12);
        prop_assert_eq!(a.is_max_entropic, b.is_max_entropic);
        prop_assert_eq!(a.regularity_degree, b.regularity_degree);
        prop_assert_eq!(a.is_min_entropic_star, b.is_min_entropic_star);
    }
}

#[test]
fn doubly_stochastic_iff_regular_over_small_connected_graphs() {
    for m in 2..=5 {
        for g in enumerate_undirected(m).filter(Graph::is_connected) {
            let p = dtmc_from_graph(&g, Orientation::Undirected).unwrap();
            let degrees = g.degrees(Orientation::Undirected).unwrap();
            let regular = degrees.windows(2).all(|w| w[0] == w[1]);
            assert_eq!(p.is_doubly_stochastic(), regular, "{g:?}");
        }
    }
}

#[test]
fn equilibrium_is_degree_pmf_over_small_connected_graphs() {
    for m in 2..=5 {
        for g in enumerate_undirected(m).filter(Graph::is_connected) {
            let p = dtmc_from_graph(&g, Orientation::Undirected).unwrap();
            let eq = dtmc_equilibrium(&p).unwrap();
            let d = degree_pmf(&g, Orientation::Undirected).unwrap();
            assert!(eq.max_abs_diff(&d).unwrap() < 1e-9, "{g:?}");
        }
    }
}

#[test]
fn long_run_transient_reaches_equilibrium() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut checked = 0;
    while checked < 20 {
        let g = random_graph(6, 0.5, false, true, &mut rng);
        if !g.is_connected() {
            continue;
        }
        let p = dtmc_from_graph(&g, Orientation::Undirected).unwrap();
        if period(p.matrix()) != Some(1) {
            continue;
        }
        let eq = dtmc_equilibrium(&p).unwrap();
        let pi0 = random_pmf(6, &mut rng);
        let r = dtmc_transient(&p, &pi0, 10_000).unwrap();
        assert!(r.distributions.last().unwrap().max_abs_diff(&eq).unwrap() < 1e-8);
        checked += 1;
    }
}

#[test]
fn simulation_within_three_sigma_of_analytic() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for trial in 0..6u64 {
        let directed = trial % 2 == 1;
        let g = random_graph(5, 0.5, directed, true, &mut rng);
        let o = if directed { Orientation::Out } else { Orientation::Undirected };
        let pi0 = random_pmf(5, &mut rng);
        let n_paths = 100_000;
        let bound = 3.0 * (5.0 / n_paths as f64).sqrt();

        let p = dtmc_from_graph(&g, o).unwrap();
        let exact = dtmc_transient(&p, &pi0, 4).unwrap().distributions.pop().unwrap();
        let est = simulate_walk(Chain::Discrete(&p), &pi0, WalkLength::Steps(4), n_paths, trial).unwrap();
        assert!(est.total_variation(&exact).unwrap() < bound);

        let q = ctmc_from_graph(&g, o).unwrap();
        let exact = ctmc_transient(&q, &pi0, &[0.7]).unwrap().distributions.pop().unwrap();
        let est = simulate_walk(Chain::Continuous(&q), &pi0, WalkLength::Time(0.7), n_paths, trial).unwrap();
        assert!(est.total_variation(&exact).unwrap() < bound);
    }
}

#[test]
fn fast_regular_form_matches_iteration() {
    for m in 3..=8 {
        for kind in [GraphKind::Ring, GraphKind::Complete] {
            let g = generate(kind, m).unwrap();
            let p = dtmc_from_graph(&g, Orientation::Undirected).unwrap();
            let pi0 = ProbabilityVector::point(m, 0).unwrap();
            let iterated = dtmc_transient(&p, &pi0, 50).unwrap();
            for n in 0..=50 {
                let fast = regular_fast_transient(&g, &pi0, n).unwrap();
                assert!(fast.max_abs_diff(&iterated.distributions[n]).unwrap() < 1e-10);
            }
            let eq = dtmc_equilibrium(&p).unwrap();
            assert!(eq.max_abs_diff(&ProbabilityVector::uniform(m).unwrap()).unwrap() < 1e-9);
        }
    }
}

use netsub::inference::{coverage_experiment, two_sample_test, CoverageConfig, RhoMode, SchemeSpec, TwoSampleOptions};
use netsub::subsample::confidence_interval;
use netsub::{Functional, GraphonModel, Normalization, Sparsity, StatisticSpec, SubsampleScheme};

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap()
}

fn small_config() -> CoverageConfig {
    CoverageConfig {
        model: GraphonModel::three_block(Sparsity::Constant { nu: 1.0 }),
        n_list: vec![120],
        sparsities: vec![Sparsity::Exponent { gamma: 0.1 }],
        schemes: vec![SchemeSpec::VertexFraction { fraction: 0.3 }, SchemeSpec::PSample { p: 0.3 }],
        functionals: vec![Functional::Eigenvalue { r: 1 }, Functional::Eigenvalue { r: -1 }],
        rho_mode: RhoMode::Estimated,
        trials: 6,
        replicates: 50,
        level: 0.95,
        seed: 42,
    }
}

#[test]
fn graphs_do_not_depend_on_thread_count() {
    let model = GraphonModel::gaussian_latent_space(Sparsity::Exponent { gamma: 0.1 });
    let a = pool(1).install(|| model.sample_graph(700, 5).unwrap());
    let b = pool(4).install(|| model.sample_graph(700, 5).unwrap());
    assert_eq!(a, b);
    assert_ne!(a, model.sample_graph(700, 6).unwrap());
}

#[test]
fn intervals_do_not_depend_on_thread_count() {
    let g = GraphonModel::three_block(Sparsity::Exponent { gamma: 0.1 }).sample_graph(300, 1).unwrap();
    let spec = StatisticSpec::eigenvalue(-1, Normalization::EstimatedRho);
    for scheme in [SubsampleScheme::Vertex { b: 90 }, SubsampleScheme::PSample { p: 0.3 }] {
        let a = pool(1).install(|| confidence_interval(&g, &spec, scheme, 120, 0.95, 9).unwrap());
        let b = pool(4).install(|| confidence_interval(&g, &spec, scheme, 120, 0.95, 9).unwrap());
        assert_eq!(a, b);
    }
}

#[test]
fn coverage_reports_are_reproducible() {
    let cfg = small_config();
    let a = pool(1).install(|| coverage_experiment(&cfg).unwrap());
    let b = pool(4).install(|| coverage_experiment(&cfg).unwrap());
    assert_eq!(a, b);
    // a cell rerun alone matches the same cell inside the grid
    let mut single = cfg.clone();
    single.schemes = vec![SchemeSpec::PSample { p: 0.3 }];
    single.functionals = vec![Functional::Eigenvalue { r: -1 }];
    let alone = coverage_experiment(&single).unwrap();
    let inside = a
        .cells
        .iter()
        .find(|c| c.scheme == single.schemes[0] && c.statistic.functional == single.functionals[0])
        .unwrap();
    let cell = &alone.cells[0];
    assert_eq!((cell.coverage, cell.mean_width), (inside.coverage, inside.mean_width));
}

#[test]
fn two_sample_is_reproducible() {
    let m = GraphonModel::three_block(Sparsity::Constant { nu: 1.0 });
    let (g1, g2) = (m.sample_graph(300, 1).unwrap(), m.sample_graph(300, 2).unwrap());
    let opts = TwoSampleOptions { replicates: 60, k_max: 3, ..Default::default() };
    let a = pool(1).install(|| two_sample_test(&g1, &g2, &opts, 4).unwrap());
    let b = pool(4).install(|| two_sample_test(&g1, &g2, &opts, 4).unwrap());
    assert_eq!(a, b);
}

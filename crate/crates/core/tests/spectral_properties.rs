use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

use ultraspec::field::{make_field, FieldSpec};
use ultraspec::model::{build_grid, ModelParams, RadialPotential, Shell, ZeroCellConvention};
use ultraspec::spectral::{
    analyze, classify_eigenvector, cluster_eigenvalues, convergence_report, eigensolve_matrix, span_projector,
    ClassifyTolerances, ClusterKind, ConvergenceOptions, SpectralConfig,
};

fn hermitian(dim: usize) -> impl Strategy<Value = DMatrix<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim * dim).prop_map(move |v| {
        let m = DMatrix::from_iterator(dim, dim, v.into_iter().map(|(a, b)| Complex64::new(a, b)));
        (&m + m.adjoint()) * Complex64::new(0.5, 0.0)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigenpairs_are_orthonormal_and_sorted(m in (2usize..12).prop_flat_map(hermitian)) {
        let e = eigensolve_matrix(&m, 1e-9).unwrap();
        let n = m.nrows();
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        let gram = e.vectors.adjoint() * &e.vectors;
        prop_assert!((gram - DMatrix::identity(n, n)).camax() < 1e-12);
        let scale = m.camax();
        prop_assert!(e.residuals.iter().all(|&r| r <= 1e-9 * scale * n as f64));
        // phase fixing: the largest entry of every column is real and positive
        for c in e.vectors.column_iter() {
            let max = c.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let pivot = c.iter().find(|z| z.norm() >= max * (1.0 - 1e-9)).unwrap();
            prop_assert!(pivot.im == 0.0 && pivot.re > 0.0);
        }
    }

    #[test]
    fn clusters_partition_the_spectrum(mut v in prop::collection::vec(-50.0f64..50.0, 1..40), tol in 1e-8f64..1e-2) {
        v.sort_by(f64::total_cmp);
        let c = cluster_eigenvalues(&v, tol);
        let members: Vec<usize> = c.iter().flat_map(|c| c.members.clone()).collect();
        prop_assert_eq!(members, (0..v.len()).collect::<Vec<_>>());
        for cl in &c {
            for &i in &cl.members {
                prop_assert!((v[i] - cl.representative).abs() <= tol * cl.representative.abs().max(1.0));
            }
        }
        for w in c.windows(2) {
            let next = v[w[1].members[0]];
            prop_assert!((next - w[0].representative).abs() > tol * w[0].representative.abs().max(1.0));
        }
    }

    #[test]
    fn classification_ignores_global_phase(seed in prop::collection::vec(-1.0f64..1.0, 162), theta in 0.0f64..6.3) {
        let g = build_grid(&make_field(FieldSpec::eisenstein(3, 2)).unwrap(), 2).unwrap();
        let v = nalgebra::DVector::from_fn(g.len(), |i, _| Complex64::new(seed[2 * i], seed[2 * i + 1]));
        let rotated = &v * Complex64::from_polar(1.0, theta);
        let t = ClassifyTolerances::default();
        prop_assert_eq!(classify_eigenvector(&g, &v, t).label(), classify_eigenvector(&g, &rotated, t).label());
    }
}

fn canonical(conv: ZeroCellConvention) -> ModelParams {
    let k = make_field(FieldSpec::eisenstein(3, 2)).unwrap();
    ModelParams::new(k, 2.0, 0.5, RadialPotential::harmonic(0.5)).with_convention(conv)
}

#[test]
fn shell_clusters_do_not_depend_on_zero_cell() {
    let cfg = SpectralConfig::default();
    let base = analyze(&canonical(ZeroCellConvention::AverageOfPower).assemble(2).unwrap(), &cfg).unwrap();
    for conv in [ZeroCellConvention::PowerOfAverage, ZeroCellConvention::PointValue] {
        let other = analyze(&canonical(conv).assemble(2).unwrap(), &cfg).unwrap();
        for value in [5.0, 9.0, 40.0 + 5.0 / 9.0, 41.0, 45.0] {
            let a = base.find_cluster(value, 1e-8).unwrap();
            let b = other.find_cluster(value, 1e-8).unwrap();
            assert_eq!(a.multiplicity(), b.multiplicity(), "{conv} at {value}");
            assert_eq!(base.cluster_kind(a), ClusterKind::Shell);
            assert_eq!(other.cluster_kind(b), ClusterKind::Shell);
            let (pa, pb) = (
                span_projector(&base.eigenvectors.columns(a.members[0], a.multiplicity()).into_owned()),
                span_projector(&other.eigenvectors.columns(b.members[0], b.multiplicity()).into_owned()),
            );
            assert!((pa - pb).camax() < 1e-9, "{conv} at {value}");
        }
    }
}

#[test]
fn shell_functions_vanish_at_zero_cell() {
    let r = analyze(&canonical(ZeroCellConvention::AverageOfPower).assemble(2).unwrap(), &SpectralConfig::default()).unwrap();
    for (i, c) in r.classifications.iter().enumerate() {
        if c.is_shell() {
            assert!(r.eigenvectors[(0, i)].norm() < 1e-9, "rank {i}");
        }
    }
    // λ = 5 splits into one vector on each of shells 0 and 1
    let five = r.find_cluster(5.0, 1e-8).unwrap();
    let labels: Vec<String> = five.members.iter().map(|&i| r.classifications[i].label()).collect();
    assert_eq!(labels, vec!["shell(0)", "shell(1)"]);
}

#[test]
fn diagonal_model_spectrum() {
    let k = make_field(FieldSpec::eisenstein(3, 1)).unwrap();
    let params = ModelParams::new(k, 2.0, 0.0, RadialPotential::Monomial { c: 1.0, s: 1.0 });
    let model = params.assemble(1).unwrap();
    let r = analyze(&model, &SpectralConfig::default()).unwrap();
    // zero cell 1/3 · (2/3) / (1 - 1/9) = 1/4; shell 0: 2 points at 1; shell 1: 6 points at 3
    let want = [0.25, 1.0, 1.0, 3.0, 3.0, 3.0, 3.0, 3.0, 3.0];
    for (a, b) in r.eigenvalues.iter().zip(want) {
        assert!((a - b).abs() < 1e-14);
    }
    for i in 0..r.len() {
        let col = r.vector(i);
        let hot: Vec<usize> = (0..col.len()).filter(|&j| col[j].norm() > 1e-12).collect();
        assert_eq!(hot.len(), 1, "rank {i} is a standard basis vector");
    }
    assert!(r.classifications.iter().all(|c| c.is_shell()));
    assert!(matches!(r.classifications[0], ultraspec::spectral::Classification::Shell { shell: Shell::Zero, .. }));
}

#[test]
fn free_model_has_zero_drift() {
    let k = make_field(FieldSpec::laurent(3, 1)).unwrap();
    let params = ModelParams::new(k, 1.0, 1.0, RadialPotential::Monomial { c: 0.0, s: 2.0 });
    let trace = convergence_report(&params, &[1, 2], &ConvergenceOptions::default()).unwrap();
    // |ξ| = 1 and 3 exist at both levels
    for value in [1.0, 3.0] {
        let t = trace.trajectory_through(1, value, 1e-9).expect("present at level 1");
        let p = t.point_at(2).expect("matched at level 2");
        assert!(p.drift.unwrap().abs() < 1e-12);
        assert!(p.multiplicity_change.unwrap() >= 0);
    }
}

use proptest::prelude::*;

use tricontract::criteria::{beta_disk_3x3, check_contraction_3x3, check_contraction_4x4, gamma_disk};
use tricontract::json::{parse_matrix, to_json, Record};
use tricontract::mobius::{mobius_scalar, mobius_transform_dense, mobius_transform_triangular};
use tricontract::oracle::{defect_gram, unitary_from_rotations};
use tricontract::parrott::{
    cholesky_upper, defect_operator, gamma_disk_via_parrott, matrix_power_2x2, minimal_row_solution,
};
use tricontract::scalar::{defect_identity_rhs, ComplexScalar};
use tricontract::{
    defect_product, hermitian_eigen, is_contraction_oracle, operator_norm, DenseMatrix, Tolerances,
    TriMatrix3, TriMatrix4,
};

fn tol() -> Tolerances {
    Tolerances::default()
}

prop_compose! {
    fn disk_point(r: f64)(rho in 0.0..=1.0f64, theta in -3.2..3.2f64) -> ComplexScalar {
        ComplexScalar::from_polar(r * rho.sqrt(), theta)
    }
}

prop_compose! {
    fn tri4(r: f64)(
        omega in prop::array::uniform4(disk_point(r)),
        alpha in prop::array::uniform3(disk_point(r)),
        beta in prop::array::uniform2(disk_point(r)),
        gamma in disk_point(r),
    ) -> TriMatrix4 {
        TriMatrix4 { omega, alpha, beta, gamma }
    }
}

prop_compose! {
    fn tri3(r: f64)(
        omega in prop::array::uniform3(disk_point(r)),
        alpha in prop::array::uniform2(disk_point(r)),
        beta in disk_point(r),
    ) -> TriMatrix3 {
        TriMatrix3 { omega, alpha, beta }
    }
}

prop_compose! {
    fn dense(n: usize, r: f64)(entries in prop::collection::vec(disk_point(r), n * n)) -> DenseMatrix {
        DenseMatrix::from_row_major(n, n, entries).unwrap()
    }
}

fn norm(m: &DenseMatrix) -> f64 {
    operator_norm(m).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn defect_identity(u in disk_point(2.0), v in disk_point(2.0)) {
        let lhs = defect_product(u, v);
        prop_assert!((lhs - defect_identity_rhs(u, v)).abs() <= 1e-12 * (1.0 + lhs.abs()));
    }

    #[test]
    fn norm_bounds(m in dense(4, 0.8)) {
        let n = norm(&m);
        prop_assert!(m.max_column_norm() <= n + 1e-12);
        prop_assert!(n <= m.frobenius_norm() + 1e-12);
    }

    #[test]
    fn unitary_invariance(
        m in dense(4, 0.8),
        angles in prop::collection::vec((-3.2..3.2f64, -3.2..3.2f64), 6),
    ) {
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let params: Vec<_> = pairs.iter().zip(&angles).map(|(&(p, q), &(t, f))| (p, q, t, f)).collect();
        let u = unitary_from_rotations(4, &params);
        prop_assert!((norm(&m) - norm(&(&u * &m))).abs() <= 1e-11);
        prop_assert!((norm(&m) - norm(&(&m * &u))).abs() <= 1e-11);
    }

    #[test]
    fn eigen_reconstruction(m in dense(4, 1.0)) {
        let h = m.hermitian_part();
        let eig = hermitian_eigen(&h).unwrap();
        prop_assert!(eig.reconstruct().max_abs_diff(&h) <= 1e-12);
        let v = &eig.eigenvectors;
        prop_assert!((&v.adjoint() * v).max_abs_diff(&DenseMatrix::identity(4)) <= 1e-12);
    }

    #[test]
    fn psd_test_matches_norm(m in dense(4, 0.5)) {
        let n = norm(&m);
        prop_assume!((n - 1.0).abs() > 1e-10);
        prop_assert_eq!(is_contraction_oracle(&m, &tol()).unwrap().is_contraction, n <= 1.0);
    }

    #[test]
    fn criterion_4x4_matches_oracle(t in tri4(0.555)) {
        let n = norm(&t.to_dense());
        prop_assume!((n - 1.0).abs() >= 1e-8);
        prop_assert_eq!(check_contraction_4x4(&t, &tol()).unwrap().is_contraction, n <= 1.0);
    }

    #[test]
    fn criterion_3x3_matches_oracle(t in tri3(0.67)) {
        let n = norm(&t.to_dense());
        prop_assume!((n - 1.0).abs() >= 1e-8);
        prop_assert_eq!(check_contraction_3x3(&t, &tol()).unwrap().is_contraction, n <= 1.0);
    }

    /// Shrinking a contraction keeps it a contraction.
    #[test]
    fn scaling_is_monotone(t in tri4(0.555), s in 0.0..1.0f64) {
        prop_assume!(check_contraction_4x4(&t, &tol()).unwrap().is_contraction);
        prop_assert!(check_contraction_4x4(&t.scaled(s), &tol()).unwrap().is_contraction);
    }

    #[test]
    fn scaling_is_monotone_3x3(t in tri3(0.67), s in 0.0..1.0f64) {
        prop_assume!(check_contraction_3x3(&t, &tol()).unwrap().is_contraction);
        prop_assert!(check_contraction_3x3(&t.scaled(s), &tol()).unwrap().is_contraction);
    }

    #[test]
    fn beta_disk_matches_criterion(t in tri3(0.6), theta in -3.2..3.2f64) {
        let d = beta_disk_3x3(&t, &tol()).unwrap();
        prop_assume!(!d.empty && d.radius > 1e-6);
        let inner = t.with_beta(d.center + ComplexScalar::from_polar(0.99 * d.radius, theta));
        let outer = t.with_beta(d.center + ComplexScalar::from_polar(1.01 * d.radius, theta));
        prop_assert!(check_contraction_3x3(&inner, &tol()).unwrap().is_contraction);
        prop_assert!(!check_contraction_3x3(&outer, &tol()).unwrap().is_contraction);
    }

    #[test]
    fn parrott_pullback_matches_gamma_disk(t in tri4(0.5)) {
        let a = gamma_disk(&t, &tol()).unwrap();
        let b = gamma_disk_via_parrott(&t, &tol()).unwrap();
        prop_assert_eq!(a.empty, b.empty);
        if !a.empty {
            prop_assert!((a.center - b.center).norm() <= 1e-9);
            prop_assert!((a.radius - b.radius).abs() <= 1e-9);
        }
    }

    #[test]
    fn json_round_trip_4(t in tri4(3.0)) {
        let r = Record::Tri4(t);
        prop_assert_eq!(parse_matrix(&to_json(&r)).unwrap(), r);
    }

    #[test]
    fn json_round_trip_3(t in tri3(3.0)) {
        let r = Record::Tri3(t);
        prop_assert_eq!(parse_matrix(&to_json(&r)).unwrap(), r);
    }

    #[test]
    fn mobius_scalar_is_involutive(w in disk_point(0.99), z in disk_point(1.0)) {
        let back = mobius_scalar(w, mobius_scalar(w, z).unwrap()).unwrap();
        prop_assert!((back - z).norm() <= 1e-12);
        prop_assert!(mobius_scalar(w, z).unwrap().norm() <= 1.0 + 1e-14);
    }

    #[test]
    fn unit_circle_is_preserved(w in disk_point(0.99), theta in -3.2..3.2f64) {
        let z = ComplexScalar::from_polar(1.0, theta);
        prop_assert!((mobius_scalar(w, z).unwrap().norm() - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn mobius_preserves_non_contractions(t in tri4(0.555), w in disk_point(0.9)) {
        let m = t.to_dense();
        let n = norm(&m);
        prop_assume!(n > 1.0 + 1e-6);
        // a pole only arises for |omega_i| >= 1 / |w|
        prop_assume!(t.omega.iter().all(|z| (ComplexScalar::new(1.0, 0.0) - w.conj() * z).norm() > 1e-3));
        let image = mobius_transform_dense(w, &m).unwrap();
        prop_assert!(norm(&image) > 1.0);
    }

    #[test]
    fn triangular_transform_matches_dense(t in tri4(0.5), w in disk_point(0.9)) {
        let tri = mobius_transform_triangular(w, &t).unwrap().to_dense();
        let dense = mobius_transform_dense(w, &t.to_dense()).unwrap();
        prop_assert!(tri.max_abs_diff(&dense) <= 1e-12);
    }

    #[test]
    fn defect_operator_squares_back(m in dense(3, 0.5)) {
        prop_assume!(norm(&m) <= 1.0);
        let d = defect_operator(&m, &tol()).unwrap();
        prop_assert!((&d * &d).max_abs_diff(&defect_gram(&m)) <= 1e-13);
        let eig = hermitian_eigen(&d.hermitian_part()).unwrap();
        prop_assert!(eig.min_eigenvalue() >= -1e-12 && eig.max_eigenvalue() <= 1.0 + 1e-12);
    }

    #[test]
    fn cholesky_factor(m in dense(3, 0.5)) {
        prop_assume!(norm(&m) <= 1.0);
        let h = defect_gram(&m);
        let s = cholesky_upper(&h, &tol()).unwrap().factor;
        prop_assert!(s.is_upper_triangular());
        prop_assert!(s.diagonal().iter().all(|z| z.re >= 0.0 && z.im == 0.0));
        prop_assert!((&s.adjoint() * &s).max_abs_diff(&h) <= 1e-13);
    }

    /// Adding a kernel direction to the minimal solution never shrinks it.
    #[test]
    fn minimal_row_solution_is_minimal(
        a in prop::collection::vec(disk_point(0.3), 2),
        w in disk_point(1.0),
        k in disk_point(2.0),
    ) {
        // rank-one g = v v* with v = (1, w) / |(1, w)|
        let s = (1.0 + w.norm_sqr()).sqrt();
        let v = [ComplexScalar::new(1.0 / s, 0.0), w / s];
        let g = DenseMatrix::from_rows(&[
            [v[0] * v[0].conj(), v[0] * v[1].conj()],
            [v[1] * v[0].conj(), v[1] * v[1].conj()],
        ]);
        // a consistent right-hand side is a multiple of v*
        let a = DenseMatrix::from_rows(&[[a[0] * v[0].conj(), a[0] * v[1].conj()]]);
        let z = minimal_row_solution(&a, &g, &tol()).unwrap();
        let root = g.clone(); // g is a projector, so g^{1/2} = g
        prop_assert!((&z * &root).max_abs_diff(&a) <= 1e-12);
        // kernel of g is spanned by (-conj(w), 1) / s, as a row: its adjoint
        let kernel = DenseMatrix::from_rows(&[[-w / s, ComplexScalar::new(1.0 / s, 0.0)]]);
        let other = &z + &kernel.scale(k);
        prop_assert!((&other * &root).max_abs_diff(&a) <= 1e-12);
        prop_assert!(other.frobenius_norm() >= z.frobenius_norm() - 1e-12);
    }

    #[test]
    fn power_composition(
        w in disk_point(0.7),
        a in disk_point(0.7),
        s in prop::sample::select(vec![0.5, 1.0, 2.0]),
        u in prop::sample::select(vec![0.5, 1.0, 2.0]),
    ) {
        prop_assume!(a.norm_sqr() + w.norm_sqr() < 1.0);
        let lhs = &matrix_power_2x2(w, a, s).unwrap() * &matrix_power_2x2(w, a, u).unwrap();
        prop_assert!(lhs.max_abs_diff(&matrix_power_2x2(w, a, s + u).unwrap()) <= 1e-12);
    }
}

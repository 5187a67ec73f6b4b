use betafreeze::fluctuations::{first_order_eig, sym_eigen_desc};
use betafreeze::trieig::{eig_residual, eigh_tridiagonal};
use betafreeze::TridiagonalSym;
use nalgebra::DMatrix;
use proptest::prelude::*;

fn tridiag() -> impl Strategy<Value = TridiagonalSym> {
    (1usize..200).prop_flat_map(|k| {
        (
            prop::collection::vec(-10.0f64..10.0, k),
            prop::collection::vec(-10.0f64..10.0, k - 1),
        )
            .prop_map(|(d, e)| TridiagonalSym::new(d, e).unwrap())
    })
}

fn symmetric(k: usize) -> impl Strategy<Value = DMatrix<f64>> {
    prop::collection::vec(-1.0f64..1.0, k * k).prop_map(move |v| {
        let m = DMatrix::from_vec(k, k, v);
        (&m + m.transpose()) * 0.5
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigen_trace_and_frobenius(t in tridiag()) {
        let e = eigh_tridiagonal(&t, false).unwrap();
        let scale = 1.0 + t.norm();
        let k = t.len() as f64;
        prop_assert!((e.values.iter().sum::<f64>() - t.trace()).abs() < 1e-11 * scale * k);
        let sq: f64 = e.values.iter().map(|x| x * x).sum();
        prop_assert!((sq - t.frobenius_sq()).abs() < 1e-11 * scale * scale * k);
        prop_assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn eigen_matches_dense_solver(t in tridiag()) {
        let e = eigh_tridiagonal(&t, true).unwrap();
        let d = t.to_dense();
        let k = t.len();
        let (dense, _) = sym_eigen_desc(&DMatrix::from_fn(k, k, |i, j| d[i][j]));
        let scale = 1.0 + t.norm();
        for (a, b) in e.values.iter().zip(&dense) {
            prop_assert!((a - b).abs() < 1e-11 * scale);
        }
        for (l, v) in e.values.iter().zip(e.vectors.as_ref().unwrap()) {
            prop_assert!(eig_residual(&t, *l, v).unwrap() < 1e-12 * scale * (k as f64).sqrt());
        }
    }

    #[test]
    fn eigenvalues_are_roots_of_char_poly(d in prop::collection::vec(-3.0f64..3.0, 1..=3), e in prop::collection::vec(-3.0f64..3.0, 2)) {
        let k = d.len();
        let t = TridiagonalSym::new(d.clone(), e[..k - 1].to_vec()).unwrap();
        for l in eigh_tridiagonal(&t, false).unwrap().values {
            // continuant recurrence for det(T − λI)
            let (mut f0, mut f1) = (1.0, d[0] - l);
            for j in 1..k {
                let f2 = (d[j] - l) * f1 - e[j - 1] * e[j - 1] * f0;
                f0 = f1;
                f1 = f2;
            }
            prop_assert!(f1.abs() < 1e-10 * 10f64.powi(k as i32));
        }
    }

    #[test]
    fn first_order_error_is_quadratic(a in symmetric(5), b in symmetric(5)) {
        let (vals, _) = sym_eigen_desc(&a);
        let gap = vals.windows(2).map(|w| w[0] - w[1]).fold(f64::INFINITY, f64::min);
        prop_assume!(gap > 0.1);
        let err = |eps: f64| {
            let p = first_order_eig(&a, &b, eps).unwrap();
            let (t, _) = sym_eigen_desc(&(&a + &b * eps));
            p.iter().zip(&t).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
        };
        prop_assert_eq!(first_order_eig(&a, &b, 0.0).unwrap(), vals);
        let (e1, e2) = (err(1e-3), err(5e-4));
        prop_assume!(e2 > 1e-12);
        let r = e1 / e2;
        prop_assert!((3.5..4.5).contains(&r), "ratio {}", r);
    }
}

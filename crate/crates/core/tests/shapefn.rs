use proptest::prelude::*;
use symspace::{ShapeFunctions, ShapeSet64};

fn point(d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..=1.0f64, d)
}

fn check_partition(s: &ShapeSet64, x: &[f64]) -> Result<(), TestCaseError> {
    let e = s.eval(x);
    let sum: f64 = e.values.iter().sum();
    prop_assert!((sum - 1.0).abs() < 1e-11);
    for j in 0..s.dim() {
        let g: f64 = e.gradients.iter().map(|g| g[j]).sum();
        prop_assert!(g.abs() < 1e-11);
        for k in 0..s.dim() {
            let h: f64 = e.hessians.iter().map(|h| h[(j, k)]).sum();
            prop_assert!(h.abs() < 1e-11);
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn partition_of_unity_1d(x in point(1), k in 1usize..=3) {
        check_partition(&ShapeSet64::tensor_lagrange(1, k).unwrap(), &x)?;
    }

    #[test]
    fn partition_of_unity_2d(x in point(2), k in 1usize..=3) {
        check_partition(&ShapeSet64::tensor_lagrange(2, k).unwrap(), &x)?;
    }

    #[test]
    fn partition_of_unity_3d(x in point(3), k in 1usize..=3) {
        check_partition(&ShapeSet64::tensor_lagrange(3, k).unwrap(), &x)?;
    }

    #[test]
    fn partition_of_unity_4d(x in point(4), k in 1usize..=2) {
        check_partition(&ShapeSet64::tensor_lagrange(4, k).unwrap(), &x)?;
    }

    /// Monomials of total degree ≤ k are reproduced exactly.
    #[test]
    fn polynomial_reproduction(x in point(3), k in 1usize..=3, a in prop::collection::vec(0usize..=3, 3)) {
        prop_assume!(a.iter().sum::<usize>() <= k);
        let s = ShapeSet64::tensor_lagrange(3, k).unwrap();
        let f = |p: &[f64]| p.iter().zip(&a).map(|(t, &e)| t.powi(e as i32)).product::<f64>();
        let e = s.eval(&x);
        let approx: f64 = (0..s.count()).map(|i| e.values[i] * f(s.node(i))).sum();
        prop_assert!((approx - f(&x)).abs() < 1e-11);
    }

    #[test]
    fn gradients_match_finite_differences(x in prop::collection::vec(0.05..0.95f64, 2)) {
        let s = ShapeSet64::tensor_lagrange(2, 2).unwrap();
        let h = 1e-6;
        let e = s.eval(&x);
        for j in 0..2 {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += h;
            xm[j] -= h;
            let (vp, vm) = (s.eval(&xp).values, s.eval(&xm).values);
            for i in 0..s.count() {
                let fd = (vp[i] - vm[i]) / (2.0 * h);
                prop_assert!((fd - e.gradients[i][j]).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn hessians_match_finite_differences(x in prop::collection::vec(0.05..0.95f64, 2)) {
        let s = ShapeSet64::tensor_lagrange(2, 3).unwrap();
        let h = 1e-5;
        let e = s.eval(&x);
        for j in 0..2 {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += h;
            xm[j] -= h;
            let (gp, gm) = (s.eval(&xp).gradients, s.eval(&xm).gradients);
            for i in 0..s.count() {
                for k in 0..2 {
                    let fd = (gp[i][k] - gm[i][k]) / (2.0 * h);
                    prop_assert!((fd - e.hessians[i][(j, k)]).abs() < 1e-6);
                }
            }
        }
    }
}

#[test]
fn f32_basis_is_usable() {
    let s = symspace::ShapeSet::<f32>::tensor_lagrange(2, 2).unwrap();
    let e = s.eval(&[0.3, 0.6]);
    let sum: f32 = e.values.iter().sum();
    assert!((sum - 1.0).abs() < 1e-5);
}

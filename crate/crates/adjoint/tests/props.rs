use std::f64::consts::PI;

use polykin_adjoint::{boundary_value_reduced, chi_kappa, make_zeta, JumpStencil};
use proptest::prelude::*;

proptest! {
    #[test]
    fn chi_is_monotone_on_the_lower_half(kappa in 0.01f64..0.7, a in -PI..0.0, b in -PI..0.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (x, y) = (chi_kappa(lo, kappa), chi_kappa(hi, kappa));
        prop_assert!((0.0..=1.0).contains(&x) && (0.0..=1.0).contains(&y));
        prop_assert!(x <= y);
    }

    #[test]
    fn reduced_wall_value_stays_within_wall_data(
        kappa in 0.01f64..0.7, t in 0.0f64..5.0, th in -PI..0.0,
        c in proptest::array::uniform3(-2.0f64..2.0),
    ) {
        let g = |t: f64| c[0] + c[1] * t.sin() + c[2] * (2.0 * t).cos();
        let v = boundary_value_reduced(t, th, kappa, g);
        let vals = [g(th), g(0.0), g(-PI)];
        let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(v >= lo - 1e-12 && v <= hi + 1e-12);
    }

    #[test]
    fn stencil_annihilates_constants(eps in 0.02f64..1.0, n in 8usize..200, c in -10.0f64..10.0) {
        let st = JumpStencil::new(&make_zeta(), eps, n).unwrap();
        let u = vec![c; n];
        let mut out = vec![1.0; n];
        st.apply_column(&u, &mut out);
        prop_assert!(out.iter().all(|v| *v == 0.0));
    }
}

use std::f64::consts::PI;

use polykin_chain::{boundary_rule, chain_step_with, ChainState};
use proptest::prelude::*;

proptest! {
    #[test]
    fn steps_never_leave_the_half_plane(
        x2 in 0.0f64..0.05, theta in -PI..PI, d in -PI..PI, eps in 1e-4f64..0.1,
    ) {
        let s = ChainState { x1: 0.0, x2, theta, trapped: None };
        let n = chain_step_with(&s, eps, d);
        prop_assert!(n.x2 >= 0.0);
    }

    #[test]
    fn clamp_is_the_best_admissible_direction(x2 in 0.0f64..0.01, theta in -PI..0.0, eps in 0.01f64..0.1) {
        if let Some((t, _)) = boundary_rule(x2, theta, eps) {
            prop_assert!(x2 + eps * t.sin() >= -1e-15);
            let best = (t - theta).cos();
            for i in 0..2000 {
                let c = -PI + 2.0 * PI * i as f64 / 2000.0;
                if x2 + eps * c.sin() >= 0.0 {
                    prop_assert!((c - theta).cos() <= best + 1e-12);
                }
            }
        }
    }
}

//! Random geodesics and cut-locus targets built with the library's own
//! curves; these drive the solver tests rather than check values.

use std::f64::consts::PI;

/// Random covector away from the separatrix and a time strictly inside the
/// optimality range.
pub fn random_geodesic(rng: &mut impl rand::Rng) -> (se2sr_core::Covector, f64) {
    use se2sr_core::{cut_time, Covector};
    loop {
        let l = Covector::new(rng.gen_range(0.0..4.0 * PI), rng.gen_range(-3.0..3.0));
        let e = se2sr_core::pendulum::energy(l);
        if (e - 1.0).abs() < 1e-3 {
            continue;
        }
        let tc = cut_time(l).min(12.0);
        let t = rng.gen_range(0.05..0.98) * tc;
        return (l, t);
    }
}

/// Target on the `theta = pi` component of the cut locus.
pub fn glob_target(rng: &mut impl rand::Rng) -> se2sr_core::Pose {
    let r = rng.gen_range(0.2..3.0);
    let a: f64 = rng.gen_range(0.0..2.0 * PI);
    se2sr_core::Pose::new(r * a.cos(), r * a.sin(), PI)
}

/// Target on the `R2 = 0, |R1| > R11(|theta|)` components of the cut locus.
pub fn loc_target(rng: &mut impl rand::Rng) -> se2sr_core::Pose {
    use se2sr_core::exponential::{unrectify, RectifiedPose};
    let th: f64 = rng.gen_range(0.05..PI - 0.2) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let a = se2sr_core::cut::r11_curve(th.abs()).unwrap();
    let r1 = (a + rng.gen_range(0.1..2.0)) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    unrectify(RectifiedPose { r1, r2: 0.0, theta: th })
}

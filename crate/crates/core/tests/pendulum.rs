mod common;

use std::f64::consts::PI;

use common::{angle_gap, pendulum_oracle};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use se2sr_core::pendulum::{
    energy, from_elliptic, pendulum_flow, stratify, to_elliptic, Covector, Stratum, STRATUM_TOL,
};

fn gap(a: Covector, b: [f64; 2]) -> f64 {
    angle_gap(a.gamma(), b[0], 4.0 * PI).max((a.c() - b[1]).abs())
}

/// Covectors spread over all strata, including points close to the
/// separatrix and to both kinds of equilibria.
fn covector_zoo(n: usize, seed: u64) -> Vec<Covector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| match i % 5 {
            0 => Covector::new(rng.gen_range(0.0..4.0 * PI), rng.gen_range(-1.5..1.5)),
            1 => Covector::new(rng.gen_range(0.0..4.0 * PI), rng.gen_range(2.1..6.0) * if rng.gen() { 1.0 } else { -1.0 }),
            2 => {
                // separatrix; u + t stays in [-10.5, 10.5] on [0, 20], so
                // the orbit never returns close to the saddle
                let u: f64 = rng.gen_range(-10.5..-9.5);
                let sigma = if rng.gen() { 1.0 } else { -1.0 };
                let s1 = if rng.gen() { 1.0 } else { -1.0 };
                let g = 2.0 * (s1 * sigma * u.tanh()).atan2(s1 / u.cosh());
                Covector::new(g, 2.0 * sigma / u.cosh())
            }
            3 => Covector::new([0.0, 2.0 * PI][rng.gen_range(0..2)], 0.0),
            _ => Covector::new([PI, 3.0 * PI][rng.gen_range(0..2)], 0.0),
        })
        .collect()
}

#[test]
fn flow_matches_rk_oracle() {
    let mut worst = 0.0f64;
    for l in covector_zoo(200, 7) {
        for &t in &[0.7, 3.1, 7.3, 13.0, 20.0] {
            let a = pendulum_flow(l, t);
            let b = pendulum_oracle(l.gamma(), l.c(), t, 2e-3);
            let e = gap(a, b);
            assert!(e < 1e-9, "{l:?} t={t}: {a:?} vs {b:?}");
            worst = worst.max(e);
        }
    }
    assert!(worst < 1e-9);
}

#[test]
fn documented_flow_example() {
    let l = Covector::new(0.5, 0.1);
    let a = pendulum_flow(l, 7.3);
    assert!(gap(a, pendulum_oracle(0.5, 0.1, 7.3, 1e-3)) < 1e-9);
}

#[test]
fn zero_energy_example() {
    assert_eq!(energy(Covector::new(0.0, 3.0)), 3.5);
    let b = pendulum_oracle(0.0, 3.0, 5.0, 1e-3);
    assert!((0.5 * b[1] * b[1] - b[0].cos() - 3.5).abs() < 1e-10);
}

#[test]
fn component_labels() {
    use se2sr_core::pendulum::StratumTag::*;
    assert_eq!(stratify(Covector::new(0.0, 0.0), STRATUM_TOL), C4 { branch: 0 });
    assert_eq!(stratify(Covector::new(PI, 0.0), STRATUM_TOL), C5 { branch: 0 });
    assert_eq!(stratify(Covector::new(0.3, 0.0), STRATUM_TOL).stratum(), Stratum::C1);
    assert_eq!(stratify(Covector::new(PI + 0.3, 0.0), STRATUM_TOL), C1 { branch: 1 });
}

fn arb_covector() -> impl Strategy<Value = Covector> {
    (0.0f64..4.0 * PI, -5.0f64..5.0).prop_map(|(g, c)| Covector::new(g, c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn energy_is_conserved(l in arb_covector(), t in 0.0f64..50.0) {
        prop_assert!((energy(pendulum_flow(l, t)) - energy(l)).abs() < 1e-10);
    }

    #[test]
    fn flow_is_a_semigroup(l in arb_covector(), s in 0.0f64..10.0, t in 0.0f64..10.0) {
        let a = pendulum_flow(pendulum_flow(l, s), t);
        let b = pendulum_flow(l, s + t);
        let tol = if (energy(l) - 1.0).abs() < 1e-4 { 1e-6 } else { 1e-9 };
        prop_assert!(gap(a, [b.gamma(), b.c()]) < tol);
    }

    #[test]
    fn elliptic_round_trip(l in arb_covector()) {
        if let Ok((tag, ec)) = to_elliptic(l) {
            let back = from_elliptic(tag, ec).unwrap();
            prop_assert!(gap(back, [l.gamma(), l.c()]) < 1e-10);
            let (tag2, ec2) = to_elliptic(back).unwrap();
            prop_assert_eq!(tag, tag2);
            prop_assert!((ec.k() - ec2.k()).abs() < 1e-10);
        }
    }

    #[test]
    fn modulus_matches_energy(l in arb_covector()) {
        if let Ok((tag, ec)) = to_elliptic(l) {
            let e = energy(l);
            let expected = match tag.stratum() {
                Stratum::C1 => ((e + 1.0) / 2.0).sqrt(),
                Stratum::C2 => (2.0 / (e + 1.0)).sqrt(),
                _ => 1.0,
            };
            prop_assert!((ec.k() - expected).abs() < 1e-12);
        }
    }
}

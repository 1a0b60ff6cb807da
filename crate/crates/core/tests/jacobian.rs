mod common;

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use se2sr_core::elliptic::{Elliptic, Modulus};
use se2sr_core::exponential::Geodesic;
use se2sr_core::jacobian::{
    alpha1, beta1, conj_bracket, conj_time, f1, j1, j2, j_full, k0, p11, p1alpha1, phi_aux, v1_v2,
    RootFunctions,
};
use se2sr_core::pendulum::{from_elliptic, midpoint_params, to_elliptic, EllipticCoords, Sign, Stratum, StratumTag};

const P11_05: f64 = 2.954_261_854_070_208_8;
const K0: f64 = 0.908_908_557_548_541_5;
const P1A1_095: f64 = 5.057_152_755_458_032_6;

fn ell(k: f64) -> Elliptic {
    Elliptic::new(Modulus::new(k).unwrap())
}

fn endpoint(tag: StratumTag, k: f64, phi: f64, t: f64) -> [f64; 3] {
    let ec = EllipticCoords { modulus: Modulus::new(k).unwrap(), phi };
    let l = from_elliptic(tag, ec).unwrap();
    Geodesic::new(l).integrate(t, 1e-13, &[]).unwrap().0
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Central-difference determinant of `(x, y, theta)` in `(t, phi, k)`.
fn fd_jacobian(tag: StratumTag, k: f64, phi: f64, t: f64) -> f64 {
    let h = 1e-5;
    let col = |a: [f64; 3], b: [f64; 3]| [(a[0] - b[0]) / (2.0 * h), (a[1] - b[1]) / (2.0 * h), (a[2] - b[2]) / (2.0 * h)];
    let dt = col(endpoint(tag, k, phi, t + h), endpoint(tag, k, phi, t - h));
    let dphi = col(endpoint(tag, k, phi + h, t), endpoint(tag, k, phi - h, t));
    let dk = col(endpoint(tag, k + h, phi, t), endpoint(tag, k - h, phi, t));
    det3([
        [dt[0], dphi[0], dk[0]],
        [dt[1], dphi[1], dk[1]],
        [dt[2], dphi[2], dk[2]],
    ])
}

#[test]
fn closed_form_matches_finite_differences() {
    let c1 = StratumTag::C1 { branch: 0 };
    let c2 = StratumTag::C2 { sign: Sign::Plus };
    let mut ratios = Vec::new();
    for &k in &[0.3, 0.6, 0.85] {
        for &phi in &[-0.7, 0.4, 1.3] {
            for &frac in &[0.3, 0.7, 1.4] {
                for (tag, stratum) in [(c1, Stratum::C1), (c2, Stratum::C2)] {
                    let ec = EllipticCoords { modulus: Modulus::new(k).unwrap(), phi };
                    let big_k = ell(k).big_k();
                    let t = match stratum {
                        Stratum::C1 => frac * 2.0 * big_k,
                        _ => frac * k * big_k,
                    };
                    let (tau, p) = midpoint_params(ec, tag, t).unwrap();
                    let closed = j_full(stratum, tau, p, k).unwrap().full;
                    if closed.abs() < 1e-3 {
                        continue;
                    }
                    let fd = fd_jacobian(tag, k, phi, t);
                    assert_eq!(fd.signum(), closed.signum(), "k={k} phi={phi} t={t}");
                    ratios.push(fd / closed);
                }
            }
        }
    }
    assert!(ratios.len() > 40);
    for r in ratios {
        assert!((r - 1.0).abs() < 1e-3, "ratio {r}");
    }
}

#[test]
fn p11_regression_and_bracket() {
    let p = p11(0.5).unwrap();
    assert!((p - P11_05).abs() < 1e-12);
    let e = ell(0.5);
    assert!(p > e.big_k() && p < 2.0 * e.big_k());
    assert!(f1(p, &e).abs() < 1e-13);
    for i in 1..200 {
        let q = p * i as f64 / 200.0;
        assert!(f1(q, &e) < 0.0);
    }
    // independent bisection
    let (mut a, mut b) = (e.big_k(), 2.0 * e.big_k());
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if f1(m, &e) < 0.0 { a = m } else { b = m }
    }
    assert!((a - p).abs() < 1e-12);
}

#[test]
fn p11_is_smooth_in_k() {
    let mut prev = p11(0.0).unwrap();
    for i in 1..=99 {
        let k = i as f64 / 100.0;
        let p = p11(k).unwrap();
        let big_k = ell(k).big_k();
        assert!(p > big_k && p < 2.0 * big_k);
        assert!(((p - prev) / 0.01).abs() < 100.0);
        prev = p;
    }
}

#[test]
fn k0_and_bracket_switch() {
    let k = k0();
    assert!((k - K0).abs() < 1e-12);
    let e = ell(k);
    assert!((2.0 * e.big_e() - e.big_k()).abs() < 1e-10);
    for &kk in &[0.5, 0.8, 0.9] {
        let two_k = 2.0 * ell(kk).big_k();
        assert!(p1alpha1(kk).unwrap() >= two_k);
    }
    for &kk in &[0.92, 0.95, 0.99] {
        let two_k = 2.0 * ell(kk).big_k();
        assert!(p1alpha1(kk).unwrap() < two_k);
    }
    assert!((p1alpha1(0.95).unwrap() - P1A1_095).abs() < 1e-10);
    assert!(alpha1(p1alpha1(0.95).unwrap(), &ell(0.95)).abs() < 1e-11);
}

#[test]
fn auxiliary_function_signs() {
    for i in 1..40 {
        let k = i as f64 / 40.0;
        let e = ell(k);
        let p1 = p11(k).unwrap();
        for j in 1..=100 {
            let p = 2.0 * e.big_k() * j as f64 / 100.0;
            assert!(beta1(p, &e) < 0.0, "beta1({p}, {k})");
            assert!(v1_v2(p, &e).0 > 0.0);
            let q = p1 * j as f64 / 100.0;
            assert!(phi_aux(q, &e) > 0.0, "phi({q}, {k})");
        }
        // J1 is positive at p = 2K n
        for &tau in &[0.0, 0.3, 1.1, 2.9] {
            assert!(j1(tau, 2.0 * e.big_k(), k).unwrap() > 0.0);
            assert!(j1(tau, 4.0 * e.big_k(), k).unwrap() > 0.0);
        }
        // J2 at p = p11
        assert!(j2(0.0, p1, k).unwrap().abs() < 1e-12);
        for &tau in &[0.3, 1.0, -0.6] {
            assert!(j2(tau, p1, k).unwrap() > 0.0);
            assert!(j_full(Stratum::C2, tau, p1, k).unwrap().full < 0.0);
        }
        // J at p = 2K equals (4k/(1-k^2)) cn^2 tau E(p) (p - E(p))
        let p = 2.0 * e.big_k();
        for &tau in &[0.2, 0.9] {
            let ct = e.jacobi(tau).cn;
            let expected = 4.0 * k / (1.0 - k * k) * ct * ct * e.epsilon(p) * (p - e.epsilon(p));
            let got = j_full(Stratum::C2, tau, p, k).unwrap().full;
            assert!((got - expected).abs() < 1e-9 * (1.0 + expected.abs()));
        }
    }
}

#[test]
fn small_k_asymptotics() {
    let k: f64 = 1e-3;
    for &p in &[0.5f64, 1.3, 2.7] {
        for &tau in &[0.0, 0.7] {
            let lead = k.powi(4) / 16.0 * (4.0 * p * p - (2.0 * p).sin().powi(2));
            let r = j1(tau, p, k).unwrap() / lead;
            assert!((r - 1.0).abs() < 1e-3, "ratio {r}");
        }
    }
}

#[test]
fn root_functions_bundle() {
    let r = RootFunctions::at(1.1, 0.4).unwrap();
    let e = ell(0.4);
    assert_eq!(r.f1, f1(1.1, &e));
    assert_eq!(r.alpha1, alpha1(1.1, &e));
}

#[test]
fn conjugate_time_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let k: f64 = rng.gen_range(0.05..0.99);
        let psi: f64 = rng.gen_range(-4.0..4.0);
        let ec = EllipticCoords { modulus: Modulus::new(k).unwrap(), phi: k * psi };
        let sign = if rng.gen() { Sign::Plus } else { Sign::Minus };
        let l = from_elliptic(StratumTag::C2 { sign }, ec).unwrap();
        let (lo, hi) = conj_bracket(to_elliptic(l).unwrap().1.k()).unwrap();
        let t = conj_time(l).unwrap();
        assert!(t >= lo - 1e-9 && t <= hi + 1e-9, "{t} not in [{lo}, {hi}]");
        assert!(t >= se2sr_core::cut_time(l) - 1e-9);
    }
}

#[test]
fn conjugate_time_at_tangential_zero() {
    // sn tau = 0 at p = p11: phi = -k p11
    let k = 0.6;
    let p1 = p11(k).unwrap();
    let ec = EllipticCoords { modulus: Modulus::new(k).unwrap(), phi: -k * p1 };
    let l = from_elliptic(StratumTag::C2 { sign: Sign::Plus }, ec).unwrap();
    assert!((conj_time(l).unwrap() - 2.0 * k * p1).abs() < 1e-9);
    assert_eq!(conj_time(se2sr_core::Covector::new(PI, 0.0)).unwrap(), f64::INFINITY);
}

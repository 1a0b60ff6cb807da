//! Independent numerical oracles: Gauss-Legendre quadrature and classical
//! fixed-step Runge-Kutta. The oracles never call into the library kernels;
//! `targets` only builds solver inputs.
#![allow(dead_code)]

pub mod targets;

use std::f64::consts::PI;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * z * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    (x, w)
}

/// Composite Gauss-Legendre quadrature with `panels` panels of 20 points.
pub fn quad(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let (x, w) = gauss_legendre(20);
    let h = (b - a) / panels as f64;
    let mut sum = 0.0;
    for p in 0..panels {
        let lo = a + h * p as f64;
        let mid = lo + 0.5 * h;
        for (xi, wi) in x.iter().zip(&w) {
            sum += wi * f(mid + 0.5 * h * xi);
        }
    }
    0.5 * h * sum
}

pub fn k_oracle(k: f64) -> f64 {
    quad(|v| 1.0 / (1.0 - k * k * v.sin().powi(2)).sqrt(), 0.0, PI / 2.0, 64)
}

pub fn e_oracle(k: f64) -> f64 {
    quad(|v| (1.0 - k * k * v.sin().powi(2)).sqrt(), 0.0, PI / 2.0, 64)
}

pub fn f_oracle(v: f64, k: f64) -> f64 {
    quad(|u| 1.0 / (1.0 - k * k * u.sin().powi(2)).sqrt(), 0.0, v, 64)
}

pub fn e_inc_oracle(v: f64, k: f64) -> f64 {
    quad(|u| (1.0 - k * k * u.sin().powi(2)).sqrt(), 0.0, v, 64)
}

/// Classical RK4 with `steps` equal steps.
pub fn rk4<const N: usize>(
    f: impl Fn(f64, &[f64; N]) -> [f64; N],
    y0: [f64; N],
    t: f64,
    steps: usize,
) -> [f64; N] {
    let h = t / steps as f64;
    let mut y = y0;
    let axpy = |y: &[f64; N], a: f64, k: &[f64; N]| {
        let mut z = *y;
        for i in 0..N {
            z[i] += a * k[i];
        }
        z
    };
    for i in 0..steps {
        let s = h * i as f64;
        let k1 = f(s, &y);
        let k2 = f(s + 0.5 * h, &axpy(&y, 0.5 * h, &k1));
        let k3 = f(s + 0.5 * h, &axpy(&y, 0.5 * h, &k2));
        let k4 = f(s + h, &axpy(&y, h, &k3));
        for j in 0..N {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
    }
    y
}

/// `(am, sn, cn, dn, E(p))` by integrating `am' = dn`, `sn' = cn dn`,
/// `cn' = -sn dn`, `dn' = -k^2 sn cn`, `E' = dn^2`.
pub fn jacobi_oracle(p: f64, k: f64) -> [f64; 5] {
    let m = k * k;
    let steps = (p.abs() * 2000.0).ceil().max(10.0) as usize;
    rk4(
        |_, y: &[f64; 5]| [y[3], y[2] * y[3], -y[1] * y[3], -m * y[1] * y[2], y[3] * y[3]],
        [0.0, 0.0, 1.0, 1.0, 0.0],
        p,
        steps,
    )
}

/// Pendulum `gamma' = c`, `c' = -sin gamma`.
pub fn pendulum_oracle(gamma: f64, c: f64, t: f64, h: f64) -> [f64; 2] {
    let steps = (t / h).ceil().max(1.0) as usize;
    rk4(|_, y: &[f64; 2]| [y[1], -y[0].sin()], [gamma, c], t, steps)
}

/// Full Hamiltonian system `(gamma, c, x, y, theta)` from the identity.
pub fn geodesic_oracle(gamma: f64, c: f64, t: f64, h: f64) -> [f64; 5] {
    let steps = (t / h).ceil().max(1.0) as usize;
    rk4(
        |_, z: &[f64; 5]| {
            let (s, co) = (0.5 * z[0]).sin_cos();
            [z[1], -z[0].sin(), s * z[4].cos(), s * z[4].sin(), -co]
        },
        [gamma, c, 0.0, 0.0, 0.0],
        t,
        steps,
    )
}

/// Smallest angular distance modulo `period`.
pub fn angle_gap(a: f64, b: f64, period: f64) -> f64 {
    let d = (a - b).rem_euclid(period);
    d.min(period - d)
}

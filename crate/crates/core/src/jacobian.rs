//! Jacobian of the exponential mapping in the chart `(t, phi, k)` and the
//! first conjugate time.

use crate::elliptic::{Elliptic, Modulus};
use crate::error::{domain, Error, Result};
use crate::pendulum::{to_elliptic, Covector, Stratum, StratumTag};

/// Bisection tolerance on `p` and `k`.
pub const ROOT_TOL: f64 = 1e-12;

const CONJ_SCAN: usize = 64;

fn jacobi3(p: f64, ell: &Elliptic) -> (f64, f64, f64, f64) {
    let j = ell.jacobi(p);
    (j.sn, j.cn, j.dn, ell.epsilon(p))
}

pub fn f1(p: f64, ell: &Elliptic) -> f64 {
    let (sn, cn, dn, e) = jacobi3(p, ell);
    cn * (e - p) - dn * sn
}

/// `d f1 / dp = dn (sn (p - E) - dn cn)`.
fn f1_prime(p: f64, ell: &Elliptic) -> f64 {
    let (sn, cn, dn, e) = jacobi3(p, ell);
    dn * (sn * (p - e) - dn * cn)
}

pub fn f2(p: f64, ell: &Elliptic) -> f64 {
    let (sn, cn, dn, e) = jacobi3(p, ell);
    let m = ell.modulus().m();
    m * cn * sn + dn * (p - e)
}

pub fn phi_aux(p: f64, ell: &Elliptic) -> f64 {
    let (sn, cn, dn, e) = jacobi3(p, ell);
    sn * dn - (2.0 * e - p) * cn
}

pub fn alpha1(p: f64, ell: &Elliptic) -> f64 {
    let (sn, cn, dn, e) = jacobi3(p, ell);
    cn * dn * (p - 2.0 * e) + sn * (dn * dn + e * (p - e))
}

pub fn beta1(p: f64, ell: &Elliptic) -> f64 {
    let (sn, cn, dn, e) = jacobi3(p, ell);
    cn * e - dn * sn
}

/// The auxiliary functions of `(p, k)` evaluated together.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootFunctions {
    pub f1: f64,
    pub f2: f64,
    pub phi_aux: f64,
    pub alpha1: f64,
    pub beta1: f64,
}

impl RootFunctions {
    pub fn at(p: f64, k: f64) -> Result<Self> {
        let ell = Elliptic::new(Modulus::new(k)?);
        Ok(Self {
            f1: f1(p, &ell),
            f2: f2(p, &ell),
            phi_aux: phi_aux(p, &ell),
            alpha1: alpha1(p, &ell),
            beta1: beta1(p, &ell),
        })
    }
}

/// `(v1, v2)` of the `C1` Jacobian.
pub fn v1_v2(p: f64, ell: &Elliptic) -> (f64, f64) {
    let (sn, cn, dn, e) = jacobi3(p, ell);
    let m = ell.modulus().m();
    let kc2 = ell.modulus().kc().powi(2);
    let a = (p - e) * (e - kc2 * p);
    let v1 = kc2 * a;
    let sn2 = sn * sn;
    let v2 = a
        + m * cn * dn * (2.0 * e + (m - 2.0) * p) * sn
        + m * ((e - p) * (e - kc2 * p) - m) * sn2
        + m * m * sn2 * sn2;
    (v1, v2)
}

fn modulus_open(k: f64) -> Result<Modulus> {
    if !(k > 0.0 && k < 1.0) {
        return Err(domain(format!("modulus k = {k} outside (0, 1)")));
    }
    Modulus::new(k)
}

pub fn j1(tau: f64, p: f64, k: f64) -> Result<f64> {
    let ell = Elliptic::new(modulus_open(k)?);
    Ok(j1_with(tau, p, &ell))
}

fn j1_with(tau: f64, p: f64, ell: &Elliptic) -> f64 {
    let (v1, v2) = v1_v2(p, ell);
    let jt = ell.jacobi(tau);
    v1 * jt.sn * jt.sn + v2 * jt.cn * jt.cn
}

pub fn j2(tau: f64, p: f64, k: f64) -> Result<f64> {
    let ell = Elliptic::new(modulus_open(k)?);
    Ok(j2_with(tau, p, &ell))
}

fn j2_with(tau: f64, p: f64, ell: &Elliptic) -> f64 {
    let (sn, cn, dn, e) = jacobi3(p, ell);
    let kc2 = ell.modulus().kc().powi(2);
    let a1 = cn * dn * (p - 2.0 * e) + sn * (dn * dn + e * (p - e));
    let alpha = kc2 * sn * a1;
    let beta = (cn * (e - p) - dn * sn) * (cn * e - dn * sn);
    let jt = ell.jacobi(tau);
    alpha * jt.sn * jt.sn + beta * jt.cn * jt.cn
}

/// Full determinant `d(x, y, theta) / d(t, phi, k)` split as
/// `full = prefactor * core`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JacobianEval {
    pub full: f64,
    pub core: f64,
    pub prefactor: f64,
}

pub fn j_full(stratum: Stratum, tau: f64, p: f64, k: f64) -> Result<JacobianEval> {
    let m = modulus_open(k)?;
    let ell = Elliptic::new(m);
    let sp = ell.jacobi(p).sn;
    let st = ell.jacobi(tau).sn;
    let delta = 1.0 - m.m() * sp * sp * st * st;
    let kc2 = m.kc() * m.kc();
    let (prefactor, core) = match stratum {
        Stratum::C1 => (4.0 / (k * k * k * kc2 * delta), j1_with(tau, p, &ell)),
        Stratum::C2 => (-4.0 * k / (kc2 * delta), j2_with(tau, p, &ell)),
        _ => return Err(domain("closed-form Jacobian exists only on C1 and C2")),
    };
    Ok(JacobianEval {
        full: prefactor * core,
        core,
        prefactor,
    })
}

/// Bisection of a sign change of `f` on `[a, b]` down to `tol`.
pub(crate) fn bisect(mut f: impl FnMut(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut fa = f(a);
    while b - a > tol {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// First positive root of `f1(., k)`, located in `(K, 2K]`.
pub fn p11(k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(domain(format!("p11 needs k in [0, 1), got {k}")));
    }
    if k == 0.0 {
        return Ok(std::f64::consts::PI);
    }
    Ok(p11_with(&Elliptic::new(Modulus::new(k)?)))
}

pub(crate) fn p11_with(ell: &Elliptic) -> f64 {
    let big_k = ell.big_k();
    let (lo, hi) = (big_k, 2.0 * big_k);
    if f1(hi, ell) <= 0.0 {
        // circular limit: f1(2K) = 2K - 2E underflows to zero
        return hi;
    }
    let mut p = bisect(|p| f1(p, ell), lo, hi, ROOT_TOL);
    for _ in 0..3 {
        let d = f1_prime(p, ell);
        if d == 0.0 {
            break;
        }
        let next = p - f1(p, ell) / d;
        if next > lo && next <= hi {
            p = next;
        }
    }
    p
}

/// First positive root of `alpha1(., k)`.
pub fn p1alpha1(k: f64) -> Result<f64> {
    let ell = Elliptic::new(modulus_open(k)?);
    let hi = 3.0 * ell.big_k();
    let n = 256;
    let h = hi / n as f64;
    let mut a = h;
    let mut fa = alpha1(a, &ell);
    for i in 2..=n {
        let b = h * i as f64;
        let fb = alpha1(b, &ell);
        if fa > 0.0 && fb <= 0.0 {
            return Ok(bisect(|p| alpha1(p, &ell), a, b, ROOT_TOL));
        }
        a = b;
        fa = fb;
    }
    Err(Error::NoRoot(format!("alpha1(., {k}) has no root on (0, 3K]")))
}

/// Root of `2E(k) - K(k)`, about 0.9089.
pub fn k0() -> f64 {
    let g = |k: f64| {
        let ell = Elliptic::new(Modulus::new(k).expect("k in range"));
        2.0 * ell.big_e() - ell.big_k()
    };
    bisect(g, 0.9, 0.92, 1e-15)
}

/// Search bracket `[2k p11, min(4kK, 2k p1alpha1)]` of the first conjugate
/// time on `C2` at modulus `k`.
pub fn conj_bracket(k: f64) -> Result<(f64, f64)> {
    let ell = Elliptic::new(modulus_open(k)?);
    let lo = 2.0 * k * p11_with(&ell);
    let hi = (4.0 * k * ell.big_k()).min(2.0 * k * p1alpha1(k)?);
    Ok((lo, hi))
}

/// First conjugate time; `+inf` off `C2`.
pub fn conj_time(lambda: Covector) -> Result<f64> {
    let (tag, ec) = match to_elliptic(lambda) {
        Ok(v) => v,
        Err(_) => return Ok(f64::INFINITY),
    };
    if !matches!(tag, StratumTag::C2 { .. }) {
        return Ok(f64::INFINITY);
    }
    let k = ec.k();
    let ell = Elliptic::new(ec.modulus);
    let (lo, hi) = conj_bracket(k)?;
    let tau_at = |t: f64| (2.0 * ec.phi + t) / (2.0 * k);
    if ell.jacobi(tau_at(lo)).sn.abs() < 1e-9 {
        return Ok(lo);
    }
    let j = |t: f64| j2_with(tau_at(t), t / (2.0 * k), &ell);
    let h = (hi - lo) / CONJ_SCAN as f64;
    let mut a = lo;
    for i in 1..=CONJ_SCAN {
        let b = if i == CONJ_SCAN { hi } else { lo + h * i as f64 };
        if j(b) <= 0.0 {
            return Ok(bisect(j, a, b, ROOT_TOL));
        }
        a = b;
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn p11_at_zero_is_pi() {
        assert_eq!(p11(0.0).unwrap(), PI);
        assert!(p11(1.0).is_err());
    }

    #[test]
    fn k0_value() {
        assert!((k0() - 0.909).abs() < 1e-3);
    }

    #[test]
    fn j_full_rejects_other_strata() {
        assert!(j_full(Stratum::C3, 0.1, 0.2, 0.5).is_err());
    }

    #[test]
    fn off_c2_never_conjugate() {
        assert_eq!(conj_time(Covector::new(0.3, 0.1)).unwrap(), f64::INFINITY);
        assert_eq!(conj_time(Covector::new(0.0, 0.0)).unwrap(), f64::INFINITY);
        assert_eq!(conj_time(Covector::new(PI, 0.0)).unwrap(), f64::INFINITY);
    }
}

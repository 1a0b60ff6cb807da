//! The vertical subsystem: the mathematical pendulum `gamma' = c`,
//! `c' = -sin gamma` on the double-covered cylinder `(R mod 4 pi) x R`.
//!
//! Covectors are stratified by energy into `C1` (oscillation), `C2`
//! (rotation), `C3` (separatrix), `C4` (stable equilibria) and `C5`
//! (unstable equilibria). On `C1..C3` the flow is rectified by elliptic
//! coordinates `(k, phi)`:
//!
//! * `C1`, `s1 = +-1` for branch 0/1:
//!   `sin(g/2) = s1 k sn(phi + t)`, `cos(g/2) = s1 dn(phi + t)`,
//!   `c = 2k cn(phi + t)`.
//! * `C2`, `sigma = sgn c`, `psi = phi / k`:
//!   `sin(g/2) = sigma sn(psi + t/k)`, `cos(g/2) = cn(psi + t/k)`,
//!   `c = sigma (2/k) dn(psi + t/k)`.
//! * `C3`: `sin(g/2) = s1 sigma tanh(phi + t)`,
//!   `cos(g/2) = s1 sech(phi + t)`, `c = 2 sigma sech(phi + t)`.

use std::f64::consts::PI;

use crate::elliptic::{Elliptic, Modulus};
use crate::error::{domain, Error, Result};

const FOUR_PI: f64 = 4.0 * PI;

/// Default tolerance on `|E - 1|` for the separatrix and on the distance to
/// an equilibrium.
pub const STRATUM_TOL: f64 = 1e-9;

/// Initial covector `(gamma, c)` of a geodesic. `gamma` is kept in
/// `[0, 4 pi)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Covector {
    gamma: f64,
    c: f64,
}

impl Covector {
    pub fn new(gamma: f64, c: f64) -> Self {
        let mut g = gamma.rem_euclid(FOUR_PI);
        if g >= FOUR_PI {
            g = 0.0;
        }
        Self { gamma: g, c }
    }

    pub fn gamma(self) -> f64 {
        self.gamma
    }

    pub fn c(self) -> f64 {
        self.c
    }

    /// `(sin(gamma/2), cos(gamma/2))`; these are the controls up to sign.
    pub fn half_angle(self) -> (f64, f64) {
        (0.5 * self.gamma).sin_cos()
    }
}

/// Pendulum energy `c^2/2 - cos gamma`.
pub fn energy(lambda: Covector) -> f64 {
    let c = lambda.c;
    0.5 * c * c - lambda.gamma.cos()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stratum {
    C1,
    C2,
    C3,
    C4,
    C5,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn of(x: f64) -> Self {
        if x < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Stratum together with its connected component.
///
/// `branch` is 0 when `gamma` lies in `(-pi, pi) mod 4 pi` (resp. `gamma = 0`
/// for `C4`, `gamma = pi` for `C5`) and 1 on the translated copy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StratumTag {
    C1 { branch: u8 },
    C2 { sign: Sign },
    C3 { branch: u8, sign: Sign },
    C4 { branch: u8 },
    C5 { branch: u8 },
}

impl StratumTag {
    pub fn stratum(self) -> Stratum {
        match self {
            StratumTag::C1 { .. } => Stratum::C1,
            StratumTag::C2 { .. } => Stratum::C2,
            StratumTag::C3 { .. } => Stratum::C3,
            StratumTag::C4 { .. } => Stratum::C4,
            StratumTag::C5 { .. } => Stratum::C5,
        }
    }

    /// `s1 = +1` on branch 0 and `-1` on branch 1.
    pub(crate) fn branch_sign(self) -> f64 {
        match self {
            StratumTag::C1 { branch }
            | StratumTag::C3 { branch, .. }
            | StratumTag::C4 { branch }
            | StratumTag::C5 { branch } => {
                if branch == 0 {
                    1.0
                } else {
                    -1.0
                }
            }
            StratumTag::C2 { .. } => 1.0,
        }
    }
}

/// Elliptic coordinates of a covector off the equilibria.
///
/// `phi` is in units of the Jacobi argument on `C1`/`C3`; on `C2` the
/// rectified phase is `psi = phi / k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EllipticCoords {
    pub modulus: Modulus,
    pub phi: f64,
}

impl EllipticCoords {
    pub fn k(&self) -> f64 {
        self.modulus.k()
    }

    /// Rescaled phase `psi = phi / k` used on `C2`.
    pub fn psi(&self) -> f64 {
        self.phi / self.modulus.k()
    }
}

fn angular_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(FOUR_PI);
    d.min(FOUR_PI - d)
}

/// Classifies a covector into `C1..C5`. Equilibria are matched within `tol`
/// in the `(gamma, c)` metric, the separatrix within `tol` in energy.
pub fn stratify(lambda: Covector, tol: f64) -> StratumTag {
    let near = |g0: f64| angular_gap(lambda.gamma, g0).hypot(lambda.c) <= tol;
    if near(0.0) {
        return StratumTag::C4 { branch: 0 };
    }
    if near(2.0 * PI) {
        return StratumTag::C4 { branch: 1 };
    }
    if near(PI) {
        return StratumTag::C5 { branch: 0 };
    }
    if near(3.0 * PI) {
        return StratumTag::C5 { branch: 1 };
    }
    let (_, cos_half) = lambda.half_angle();
    let branch = if cos_half > 0.0 { 0 } else { 1 };
    let e = energy(lambda);
    if (e - 1.0).abs() <= tol {
        StratumTag::C3 {
            branch,
            sign: Sign::of(lambda.c),
        }
    } else if e < 1.0 {
        StratumTag::C1 { branch }
    } else {
        StratumTag::C2 {
            sign: Sign::of(lambda.c),
        }
    }
}

/// Elliptic coordinates with the default stratum tolerance.
pub fn to_elliptic(lambda: Covector) -> Result<(StratumTag, EllipticCoords)> {
    to_elliptic_with(lambda, STRATUM_TOL)
}

pub fn to_elliptic_with(lambda: Covector, tol: f64) -> Result<(StratumTag, EllipticCoords)> {
    let tag = stratify(lambda, tol);
    let (sin_half, cos_half) = lambda.half_angle();
    let c = lambda.c;
    let ec = match tag {
        StratumTag::C4 { .. } | StratumTag::C5 { .. } => {
            return Err(Error::NoEllipticCoords {
                gamma: lambda.gamma,
                c,
            })
        }
        StratumTag::C1 { .. } => {
            let s1 = tag.branch_sign();
            let k = (0.5 * c).hypot(sin_half);
            // k'^2 = cos^2(g/2) - c^2/4
            let kc2 = (cos_half - 0.5 * c) * (cos_half + 0.5 * c);
            let modulus = Modulus::from_parts(k.min(1.0), kc2.max(0.0).sqrt().min(1.0));
            let am = (s1 * sin_half).atan2(0.5 * c);
            let phi = Elliptic::new(modulus).f(am)?;
            EllipticCoords { modulus, phi }
        }
        StratumTag::C2 { sign } => {
            let sigma = sign.value();
            let r = (0.5 * c).hypot(sin_half);
            let k = 1.0 / r;
            let kc2 = (r - 1.0) * (r + 1.0) / (r * r);
            let modulus = Modulus::from_parts(k.min(1.0), kc2.max(0.0).sqrt().min(1.0));
            let am = (sigma * sin_half).atan2(cos_half);
            let psi = Elliptic::new(modulus).f(am)?;
            EllipticCoords {
                modulus,
                phi: k * psi,
            }
        }
        StratumTag::C3 { sign, .. } => {
            let sigma = sign.value();
            EllipticCoords {
                modulus: Modulus::from_parts(1.0, 0.0),
                phi: (sigma * sin_half / cos_half).asinh(),
            }
        }
    };
    Ok((tag, ec))
}

/// Inverse of [`to_elliptic`].
pub fn from_elliptic(tag: StratumTag, ec: EllipticCoords) -> Result<Covector> {
    Ok(state_at(tag, &Elliptic::new(ec.modulus), ec.phi))
}

/// Covector reached at elliptic phase `phi` (the flow acts as a shift
/// `phi -> phi + t`).
pub(crate) fn state_at(tag: StratumTag, ell: &Elliptic, phi: f64) -> Covector {
    let (s, cos_half, c) = vertical_at(tag, ell, phi);
    Covector::new(2.0 * s.atan2(cos_half), c)
}

/// `(sin(gamma/2), cos(gamma/2), c)` at elliptic phase `phi`.
pub(crate) fn vertical_at(tag: StratumTag, ell: &Elliptic, phi: f64) -> (f64, f64, f64) {
    let s1 = tag.branch_sign();
    match tag {
        StratumTag::C1 { .. } => {
            let k = ell.modulus().k();
            let j = ell.jacobi(phi);
            (s1 * k * j.sn, s1 * j.dn, 2.0 * k * j.cn)
        }
        StratumTag::C2 { sign } => {
            let sigma = sign.value();
            let k = ell.modulus().k();
            let j = ell.jacobi(phi / k);
            (sigma * j.sn, j.cn, sigma * 2.0 / k * j.dn)
        }
        StratumTag::C3 { sign, .. } => {
            let sigma = sign.value();
            let sech = 1.0 / phi.cosh();
            (s1 * sigma * phi.tanh(), s1 * sech, 2.0 * sigma * sech)
        }
        StratumTag::C4 { .. } => (0.0, s1, 0.0),
        StratumTag::C5 { .. } => (s1, 0.0, 0.0),
    }
}

/// Closed-form pendulum flow.
pub fn pendulum_flow(lambda: Covector, t: f64) -> Covector {
    match to_elliptic(lambda) {
        Err(_) => lambda,
        Ok((tag, ec)) => state_at(tag, &Elliptic::new(ec.modulus), ec.phi + t),
    }
}

/// Jacobian parameters `(tau, p)` of the geodesic segment `[0, t]`:
/// `p = t/2, tau = phi + t/2` on `C1`/`C3` and
/// `p = t/(2k), tau = (2 phi + t)/(2k)` on `C2`.
pub fn midpoint_params(ec: EllipticCoords, tag: StratumTag, t: f64) -> Result<(f64, f64)> {
    match tag.stratum() {
        Stratum::C1 | Stratum::C3 => Ok((ec.phi + 0.5 * t, 0.5 * t)),
        Stratum::C2 => {
            let k = ec.k();
            Ok(((2.0 * ec.phi + t) / (2.0 * k), t / (2.0 * k)))
        }
        Stratum::C4 | Stratum::C5 => Err(domain("midpoint parameters undefined at equilibria")),
    }
}

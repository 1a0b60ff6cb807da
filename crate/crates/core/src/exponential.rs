//! The exponential mapping `Exp(lambda, t) = (x_t, y_t, theta_t)`.
//!
//! `theta_t` and the controls come from the closed-form pendulum flow; the
//! planar part `x' = sin(g/2) cos theta`, `y' = sin(g/2) sin theta` is
//! integrated with [`Dopri5`].

use std::f64::consts::{PI, TAU};

use crate::elliptic::{Elliptic, Modulus};
use crate::error::{domain, Result};
use crate::jacobian::{f1, f2, p11};
use crate::ode::Dopri5;
use crate::pendulum::{to_elliptic, vertical_at, Covector, Sign, StratumTag};

/// Default local tolerance of the planar integration.
pub const EXP_TOL: f64 = 1e-12;

/// A configuration `(x, y, theta)` with `theta` reduced to `[0, 2 pi)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl Pose {
    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        Self {
            x,
            y,
            theta: wrap_tau(theta),
        }
    }

    pub const ORIGIN: Pose = Pose {
        x: 0.0,
        y: 0.0,
        theta: 0.0,
    };

    /// `theta` on the branch `(-pi, pi]`.
    pub fn theta_signed(&self) -> f64 {
        if self.theta > PI {
            self.theta - TAU
        } else {
            self.theta
        }
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y).hypot(self.theta_signed())
    }
}

pub(crate) fn wrap_tau(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Rectified coordinates `R1 = y cos(theta/2) - x sin(theta/2)`,
/// `R2 = x cos(theta/2) + y sin(theta/2)` on an explicit `theta` branch.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RectifiedPose {
    pub r1: f64,
    pub r2: f64,
    pub theta: f64,
}

/// Rectified coordinates on the branch `theta in [0, 2 pi)`.
pub fn rectify(q: Pose) -> RectifiedPose {
    rectify_on_branch(q, q.theta)
}

/// Rectified coordinates for a chosen representative `theta` of `q.theta`
/// mod `2 pi`. Shifting the branch by `2 pi` flips the signs of `R1, R2`.
pub fn rectify_on_branch(q: Pose, theta: f64) -> RectifiedPose {
    let (s, c) = (0.5 * theta).sin_cos();
    RectifiedPose {
        r1: q.y * c - q.x * s,
        r2: q.x * c + q.y * s,
        theta,
    }
}

pub fn unrectify(r: RectifiedPose) -> Pose {
    let (s, c) = (0.5 * r.theta).sin_cos();
    Pose::new(r.r2 * c - r.r1 * s, r.r1 * c + r.r2 * s, r.theta)
}

/// Controls `u1 = sin(g/2)`, `u2 = -cos(g/2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Controls {
    pub u1: f64,
    pub u2: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectorySample {
    pub s: f64,
    pub pose: Pose,
    pub controls: Controls,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
}

impl Trajectory {
    pub fn length(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.s)
    }

    pub fn endpoint(&self) -> Pose {
        self.samples.last().map_or(Pose::ORIGIN, |s| s.pose)
    }
}

/// A geodesic issued from the identity with initial covector `lambda`.
#[derive(Clone, Copy, Debug)]
pub struct Geodesic {
    tag: StratumTag,
    ell: Elliptic,
    phi: f64,
    theta0: f64,
}

impl Geodesic {
    pub fn new(lambda: Covector) -> Self {
        match to_elliptic(lambda) {
            Ok((tag, ec)) => {
                let mut g = Self {
                    tag,
                    ell: Elliptic::new(ec.modulus),
                    phi: ec.phi,
                    theta0: 0.0,
                };
                g.theta0 = g.theta_raw(0.0);
                g
            }
            Err(_) => {
                let tag = crate::pendulum::stratify(lambda, crate::pendulum::STRATUM_TOL);
                Self {
                    tag,
                    ell: Elliptic::new(Modulus::from_parts(0.0, 1.0)),
                    phi: 0.0,
                    theta0: 0.0,
                }
            }
        }
    }

    pub fn tag(&self) -> StratumTag {
        self.tag
    }

    fn theta_raw(&self, s: f64) -> f64 {
        let s1 = self.tag.branch_sign();
        match self.tag {
            StratumTag::C1 { .. } => -s1 * self.ell.jacobi(self.phi + s).am,
            StratumTag::C2 { .. } => {
                let k = self.ell.modulus().k();
                let sn = self.ell.jacobi((self.phi + s) / k).sn;
                -(k * sn).asin()
            }
            StratumTag::C3 { .. } => {
                let u = self.phi + s;
                -s1 * 2.0 * (0.5 * u).tanh().atan()
            }
            StratumTag::C4 { .. } => -s1 * s,
            StratumTag::C5 { .. } => 0.0,
        }
    }

    /// Unwrapped orientation `theta_s`.
    pub fn theta(&self, s: f64) -> f64 {
        self.theta_raw(s) - self.theta0
    }

    /// `(sin(g_s/2), cos(g_s/2))`.
    pub fn half_angle(&self, s: f64) -> (f64, f64) {
        let (sh, ch, _) = vertical_at(self.tag, &self.ell, self.phi + s);
        (sh, ch)
    }

    pub fn controls(&self, s: f64) -> Controls {
        let (sh, ch) = self.half_angle(s);
        Controls { u1: sh, u2: -ch }
    }

    fn planar_rhs(&self, s: f64) -> [f64; 2] {
        let s1 = self.tag.branch_sign();
        let (sin_half, theta) = match self.tag {
            StratumTag::C1 { .. } => {
                let j = self.ell.jacobi(self.phi + s);
                (s1 * self.ell.modulus().k() * j.sn, -s1 * j.am - self.theta0)
            }
            StratumTag::C2 { sign } => {
                let k = self.ell.modulus().k();
                let sn = self.ell.jacobi((self.phi + s) / k).sn;
                (sign.value() * sn, -(k * sn).asin() - self.theta0)
            }
            _ => (self.half_angle(s).0, self.theta(s)),
        };
        let (st, ct) = theta.sin_cos();
        [sin_half * ct, sin_half * st]
    }

    /// Endpoint and samples at the (sorted) times in `samples`, returned as
    /// `(x, y, theta_unwrapped)`.
    pub fn integrate(&self, t: f64, tol: f64, samples: &[f64]) -> Result<([f64; 3], Vec<[f64; 3]>)> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(domain(format!("time t = {t} must be finite and >= 0")));
        }
        let mut planar = Vec::with_capacity(samples.len());
        let end = match self.tag {
            StratumTag::C4 { .. } => {
                planar.extend(samples.iter().map(|_| [0.0, 0.0]));
                [0.0, 0.0]
            }
            StratumTag::C5 { .. } => {
                let s1 = self.tag.branch_sign();
                planar.extend(samples.iter().map(|&s| [s1 * s, 0.0]));
                [s1 * t, 0.0]
            }
            _ => Dopri5::new(tol).integrate(
                |s, _: &[f64; 2]| self.planar_rhs(s),
                0.0,
                [0.0, 0.0],
                t,
                samples,
                &mut planar,
            )?,
        };
        let out = samples
            .iter()
            .zip(&planar)
            .map(|(&s, xy)| [xy[0], xy[1], self.theta(s)])
            .collect();
        Ok(([end[0], end[1], self.theta(t)], out))
    }
}

/// `Exp(lambda, t)` with the default tolerance.
pub fn exp(lambda: Covector, t: f64) -> Result<Pose> {
    exp_with_tol(lambda, t, EXP_TOL)
}

pub fn exp_with_tol(lambda: Covector, t: f64, tol: f64) -> Result<Pose> {
    let (q, _) = Geodesic::new(lambda).integrate(t, tol, &[])?;
    Ok(Pose::new(q[0], q[1], q[2]))
}

/// `n` equally spaced samples of the geodesic on `[0, t]` with controls.
pub fn exp_trajectory(lambda: Covector, t: f64, n: usize) -> Result<Trajectory> {
    exp_trajectory_with_tol(lambda, t, n, EXP_TOL)
}

pub fn exp_trajectory_with_tol(lambda: Covector, t: f64, n: usize, tol: f64) -> Result<Trajectory> {
    if n < 2 {
        return Err(domain(format!("trajectory needs at least 2 samples, got {n}")));
    }
    let times: Vec<f64> = (0..n)
        .map(|i| if i + 1 == n { t } else { t * i as f64 / (n - 1) as f64 })
        .collect();
    let geo = Geodesic::new(lambda);
    let (_, states) = geo.integrate(t, tol, &times)?;
    let samples = times
        .iter()
        .zip(states)
        .map(|(&s, q)| TrajectorySample {
            s,
            pose: Pose::new(q[0], q[1], q[2]),
            controls: geo.controls(s),
        })
        .collect();
    Ok(Trajectory { samples })
}

/// Boundary families of the preimage strata on which `Exp` has a closed
/// form. Each is parametrized by `(p, k, tau)`; fixed parameters are
/// checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundaryCase {
    /// `C1` branch 0, `tau = 0`, `p in (0, K)`.
    C1Tau0,
    /// `C1` branch 0, `tau = K`, `p in (0, K)`.
    C1TauK,
    /// `C3` branch `0+`, `tau = 0`, `p > 0` (`k = 1`).
    C3Tau0,
    /// `C2` with `c > 0`, `tau = 0`, `p in (0, p11)`.
    C2Tau0,
    /// `C2` with `c > 0`, `tau = K`, `p in (0, p11)`.
    C2TauK,
    /// `C2` with `c > 0`, `tau = K`, `p = p11`.
    C2TauKP11,
    /// `C1` branch 0, `p = K`, `tau in (0, K)`.
    C1PK,
    /// `C2` with `c > 0`, `p = p11`, `tau in (0, K)`.
    C2P11,
    /// `C2` with `c > 0`, `tau = 0`, `p = p11`.
    C2P11Tau0,
    /// `C1` branch 0, `p = K`, `tau = 0`.
    C1PKTau0,
    /// `C1` branch 0, `p = K`, `tau = K`.
    C1PKTauK,
}

impl BoundaryCase {
    pub const ALL: [BoundaryCase; 11] = [
        BoundaryCase::C1Tau0,
        BoundaryCase::C1TauK,
        BoundaryCase::C3Tau0,
        BoundaryCase::C2Tau0,
        BoundaryCase::C2TauK,
        BoundaryCase::C2TauKP11,
        BoundaryCase::C1PK,
        BoundaryCase::C2P11,
        BoundaryCase::C2P11Tau0,
        BoundaryCase::C1PKTau0,
        BoundaryCase::C1PKTauK,
    ];

    fn tag(self) -> StratumTag {
        use BoundaryCase::*;
        match self {
            C1Tau0 | C1TauK | C1PK | C1PKTau0 | C1PKTauK => StratumTag::C1 { branch: 0 },
            C3Tau0 => StratumTag::C3 {
                branch: 0,
                sign: Sign::Plus,
            },
            _ => StratumTag::C2 { sign: Sign::Plus },
        }
    }

    /// Initial covector and time whose endpoint lies on this family.
    pub fn covector_and_time(self, p: f64, k: f64, tau: f64) -> Result<(Covector, f64)> {
        let tag = self.tag();
        let modulus = if let StratumTag::C3 { .. } = tag {
            Modulus::new(1.0)?
        } else {
            Modulus::new(k)?
        };
        let ell = Elliptic::new(modulus);
        let (phi, t) = match tag {
            StratumTag::C2 { .. } => (k * (tau - p), 2.0 * k * p),
            _ => (tau - p, 2.0 * p),
        };
        let (sh, ch, c) = vertical_at(tag, &ell, phi);
        Ok((Covector::new(2.0 * sh.atan2(ch), c), t))
    }
}

fn check(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(domain(format!("boundary case parameter mismatch: {what}")))
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + b.abs())
}

fn theta_from_half(s: f64, c: f64) -> f64 {
    wrap_tau(2.0 * s.atan2(c))
}

/// Closed-form rectified endpoint on a boundary family.
pub fn boundary_closed_form(case: BoundaryCase, p: f64, k: f64, tau: f64) -> Result<RectifiedPose> {
    use BoundaryCase::*;
    check(p > 0.0 && p.is_finite(), "p must be positive")?;
    if case == C3Tau0 {
        check(tau == 0.0, "tau = 0")?;
        let th = p.tanh();
        return Ok(RectifiedPose {
            r1: 2.0 * (p - th),
            r2: 0.0,
            theta: theta_from_half(th, -1.0 / p.cosh()),
        });
    }
    check(k > 0.0 && k < 1.0, "k in (0, 1)")?;
    let m = Modulus::new(k)?;
    let ell = Elliptic::new(m);
    let big_k = ell.big_k();
    let kc = m.kc();
    let j = ell.jacobi(p);
    let (sn, cn, dn) = (j.sn, j.cn, j.dn);
    let ep = ell.epsilon(p);
    let is_c2 = matches!(case, C2Tau0 | C2TauK | C2TauKP11 | C2P11 | C2P11Tau0);
    let p11v = if is_c2 { p11(k)? } else { f64::NAN };
    match case {
        C1Tau0 | C1TauK => check(p < big_k, "p < K")?,
        C1PK | C1PKTau0 | C1PKTauK => check(close(p, big_k), "p = K")?,
        C2Tau0 | C2TauK => check(p < p11v, "p < p11")?,
        _ => check(close(p, p11v), "p = p11")?,
    }
    match case {
        C1Tau0 | C2Tau0 | C2P11Tau0 | C1PKTau0 => check(tau == 0.0, "tau = 0")?,
        C1TauK | C2TauK | C2TauKP11 | C1PKTauK => check(close(tau, big_k), "tau = K")?,
        C1PK | C2P11 => check(tau > 0.0 && tau < big_k, "tau in (0, K)")?,
        C3Tau0 => unreachable!(),
    }
    let r = match case {
        C1Tau0 => RectifiedPose {
            r1: 2.0 * (p - ep) / k,
            r2: 0.0,
            theta: theta_from_half(sn, -cn),
        },
        C1TauK => RectifiedPose {
            r1: 0.0,
            r2: -2.0 * f2(p, &ell) / (k * dn),
            theta: theta_from_half(kc * sn / dn, -cn / dn),
        },
        C2Tau0 | C2P11Tau0 => RectifiedPose {
            r1: 2.0 * (p - ep),
            r2: 0.0,
            theta: theta_from_half(k * sn, -dn),
        },
        C2TauK => RectifiedPose {
            r1: -2.0 * kc * (p - ep) / dn,
            r2: -2.0 * k * f1(p, &ell) / dn,
            theta: 0.0,
        },
        C2TauKP11 => RectifiedPose {
            r1: -2.0 * kc * (p - ep) / dn,
            r2: 0.0,
            theta: 0.0,
        },
        C1PK => {
            let jt = ell.jacobi(tau);
            let a = 2.0 * (big_k - ell.big_e()) / (k * jt.dn);
            RectifiedPose {
                r1: a * jt.cn,
                r2: -kc * a * jt.sn,
                theta: PI,
            }
        }
        C2P11 => {
            let jt = ell.jacobi(tau);
            let sqrt_delta = (1.0 - k * k * sn * sn * jt.sn * jt.sn).sqrt();
            RectifiedPose {
                r1: 2.0 * (p - ep) * jt.dn / sqrt_delta,
                r2: 0.0,
                theta: theta_from_half(k * sn * jt.cn / sqrt_delta, -dn / sqrt_delta),
            }
        }
        C1PKTau0 => RectifiedPose {
            r1: 2.0 * (big_k - ell.big_e()) / k,
            r2: 0.0,
            theta: PI,
        },
        C1PKTauK => RectifiedPose {
            r1: 0.0,
            r2: -2.0 * (big_k - ell.big_e()) / k,
            theta: PI,
        },
        C3Tau0 => unreachable!(),
    };
    Ok(r)
}

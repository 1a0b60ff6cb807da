//! Cut time, the boundary curves `R1^1(theta)` and `R1^2(theta)`, the
//! stratification of the state space and the reflection group.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;

use crate::elliptic::{Elliptic, Modulus, CIRCULAR_LIMIT};
use crate::error::{domain, Result};
use crate::exponential::{rectify, rectify_on_branch, unrectify, Pose, RectifiedPose};
use crate::jacobian::{bisect, p11_with};
use crate::pendulum::{to_elliptic, Covector, Stratum, StratumTag};

/// Cut time `t(lambda)`: `2K` on `C1`, `2k p11(k)` on `C2`, `pi` on `C4`
/// and `+inf` on `C3`, `C5`.
pub fn cut_time(lambda: Covector) -> f64 {
    match to_elliptic(lambda) {
        Ok((tag, ec)) => {
            let ell = Elliptic::new(ec.modulus);
            match tag.stratum() {
                Stratum::C1 => 2.0 * ell.big_k(),
                Stratum::C2 => 2.0 * ec.k() * p11_with(&ell),
                _ => f64::INFINITY,
            }
        }
        Err(_) => match crate::pendulum::stratify(lambda, crate::pendulum::STRATUM_TOL) {
            StratumTag::C4 { .. } => PI,
            _ => f64::INFINITY,
        },
    }
}

/// `R1^2(theta) = 2 (artanh(sin(theta/2)) - sin(theta/2))` on `[0, pi)`.
pub fn r12_curve(theta: f64) -> Result<f64> {
    if !(0.0..PI).contains(&theta) {
        return Err(domain(format!("R1^2 needs theta in [0, pi), got {theta}")));
    }
    let s = (0.5 * theta).sin();
    Ok(2.0 * (s.atanh() - s))
}

fn h1(v: f64, ell: &Elliptic) -> f64 {
    let m = ell.modulus().m();
    let s = v.sin();
    let f = ell.f(v).unwrap_or(f64::INFINITY);
    ell.e(v) - f - (1.0 - m * s * s).sqrt() * v.tan()
}

/// First root `v > pi/2` of `E(v) - F(v) - sqrt(1 - k^2 sin^2 v) tan v`.
pub fn v11(k: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&k) {
        return Err(domain(format!("v11 needs k in [0, 1], got {k}")));
    }
    if k == 1.0 {
        return Ok(FRAC_PI_2);
    }
    if k < CIRCULAR_LIMIT {
        return Ok(PI);
    }
    let ell = Elliptic::new(Modulus::new(k)?);
    Ok(v11_with(&ell))
}

fn v11_with(ell: &Elliptic) -> f64 {
    let mut lo = FRAC_PI_2 + 1e-9;
    while h1(lo, ell) <= 0.0 && lo - FRAC_PI_2 > 1e-300 {
        lo = FRAC_PI_2 + 0.5 * (lo - FRAC_PI_2);
    }
    bisect(|v| h1(v, ell), lo, PI, 1e-15)
}

fn theta_of_k(k: f64) -> f64 {
    if k >= 1.0 {
        return PI;
    }
    let v = v11(k).expect("k in range");
    2.0 * (k * v.sin()).min(1.0).asin()
}

/// Inverse of `k -> 2 arcsin(k sin v11(k))` on `[0, pi]`.
pub fn k11(theta: f64) -> Result<f64> {
    if !(0.0..=PI).contains(&theta) {
        return Err(domain(format!("k11 needs theta in [0, pi], got {theta}")));
    }
    if theta == 0.0 {
        return Ok(0.0);
    }
    if theta == PI {
        return Ok(1.0);
    }
    Ok(bisect(|k| theta_of_k(k) - theta, 0.0, 1.0, 1e-14))
}

/// Below this angle `R1^1` uses its leading asymptotic term.
const R11_ASYMPTOTIC: f64 = 1e-6;

/// `R1^1(theta) = 2 (F(v11(k), k) - E(v11(k), k))` with `k = k11(theta)`.
pub fn r11_curve(theta: f64) -> Result<f64> {
    if !(0.0..=PI).contains(&theta) {
        return Err(domain(format!("R1^1 needs theta in [0, pi], got {theta}")));
    }
    if theta == PI {
        return Ok(f64::INFINITY);
    }
    if theta < R11_ASYMPTOTIC {
        return Ok(PI.cbrt() * theta.powf(2.0 / 3.0));
    }
    let k = k11(theta)?;
    if k >= 1.0 {
        return Ok(f64::INFINITY);
    }
    let ell = Elliptic::new(Modulus::new(k)?);
    let v = v11_with(&ell);
    Ok(2.0 * (ell.f(v)? - ell.e(v)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CutKind {
    CutGlob,
    CutLocPlus,
    CutLocMinus,
    CutConjPoint,
    NotCut,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CutClassification {
    pub kind: CutKind,
    pub distance_to_locus: f64,
}

/// Default equality tolerance of [`classify_cut`].
pub const CUT_TOL: f64 = 1e-9;

/// Membership of `q` in the three components of the cut locus.
pub fn classify_cut(q: Pose, tol: f64) -> CutClassification {
    let scale = 1.0 + q.norm();
    let eps = tol * scale;
    let theta = q.theta_signed();
    let d_glob = (theta.abs() - PI).abs();
    if d_glob < eps {
        return CutClassification {
            kind: CutKind::CutGlob,
            distance_to_locus: d_glob,
        };
    }
    let r = rectify_on_branch(q, theta);
    let a = r11_curve(theta.abs()).unwrap_or(f64::INFINITY);
    let gap = r.r1.abs() - a;
    let d_loc = if gap >= 0.0 {
        r.r2.abs()
    } else {
        r.r2.abs().hypot(gap)
    };
    let distance_to_locus = d_glob.min(d_loc);
    let kind = if r.r2.abs() >= eps {
        CutKind::NotCut
    } else if gap.abs() < eps.max(1e-7 * a) {
        CutKind::CutConjPoint
    } else if gap < 0.0 {
        CutKind::NotCut
    } else if r.r1 > 0.0 {
        CutKind::CutLocPlus
    } else {
        CutKind::CutLocMinus
    };
    CutClassification {
        kind,
        distance_to_locus,
    }
}

/// Label of an open stratum `M1..M8` or a boundary set `M1'..M58'`.
/// Sets that coincide are reported by their smallest index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StateLabel {
    Open(u8),
    Primed(u8),
}

impl fmt::Display for StateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateLabel::Open(i) => write!(f, "M{i}"),
            StateLabel::Primed(i) => write!(f, "M{i}'"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateStratum {
    pub label: StateLabel,
    /// `(sgn sin theta, sgn R1, sgn R2)` with `R` on the branch
    /// `theta in [0, 2 pi)`.
    pub signs: (i8, i8, i8),
}

fn sgn(x: f64, eps: f64) -> i8 {
    if x > eps {
        1
    } else if x < -eps {
        -1
    } else {
        0
    }
}

fn open_label(s: (i8, i8, i8)) -> u8 {
    match s {
        (-1, 1, 1) => 1,
        (-1, 1, -1) => 2,
        (-1, -1, -1) => 3,
        (-1, -1, 1) => 4,
        (1, -1, 1) => 5,
        (1, -1, -1) => 6,
        (1, 1, -1) => 7,
        _ => 8,
    }
}

/// Stratum of the state space containing `q != q0`.
pub fn classify_state(q: Pose) -> Result<StateStratum> {
    classify_state_with(q, 1e-12)
}

pub fn classify_state_with(q: Pose, tol: f64) -> Result<StateStratum> {
    let eps = tol * (1.0 + q.norm());
    let r = rectify(q);
    let theta = q.theta;
    let on_zero = theta < eps || TAU - theta < eps;
    let on_pi = (theta - PI).abs() < eps;
    let sin_sign = if on_zero || on_pi { 0 } else { sgn(theta.sin(), 0.0) };
    let (s1, s2) = (sgn(r.r1, eps), sgn(r.r2, eps));
    let signs = (sin_sign, s1, s2);
    if sin_sign != 0 && s1 != 0 && s2 != 0 {
        return Ok(StateStratum {
            label: StateLabel::Open(open_label(signs)),
            signs,
        });
    }
    let primed = if on_zero {
        // on the branch theta = 0 the rectified coordinates are (y, x)
        let r = rectify_on_branch(q, 0.0);
        match (sgn(r.r1, eps), sgn(r.r2, eps)) {
            (0, 0) => return Err(domain("the identity q0 has no stratum")),
            (0, 1) => 45,
            (0, _) => 46,
            (-1, 0) => 25,
            (1, 0) => 29,
            (-1, -1) => 51,
            (-1, 1) => 53,
            (1, -1) => 55,
            _ => 57,
        }
    } else if on_pi {
        match (s1, s2) {
            (0, 0) => 33,
            (0, -1) => 18,
            (0, _) => 20,
            (1, 0) => 17,
            (-1, 0) => 19,
            (1, -1) => 1,
            (-1, -1) => 2,
            (-1, 1) => 3,
            _ => 4,
        }
    } else {
        let upper = theta < PI;
        let th = if upper { theta } else { TAU - theta };
        if s2 != 0 {
            match (upper, s2) {
                (true, -1) => 40,
                (true, _) => 42,
                (false, -1) => 36,
                (false, _) => 38,
            }
        } else if s1 == 0 {
            if upper {
                44
            } else {
                43
            }
        } else {
            let a = r11_curve(th)?;
            let b = r12_curve(th)?;
            let x = r.r1;
            let e = eps.max(1e-9 * a);
            // index order: > a, = a, (b, a), = b, (0, b), (-b, 0), = -b,
            // (-a, -b), = -a, < -a
            let slot = if (x - a).abs() < e {
                1
            } else if x > a {
                0
            } else if (x - b).abs() < e {
                3
            } else if x > b {
                2
            } else if x > 0.0 {
                4
            } else if (x + b).abs() < e {
                6
            } else if x > -b {
                5
            } else if (x + a).abs() < e {
                8
            } else if x > -a {
                7
            } else {
                9
            };
            let upper_row = [13, 30, 56, 50, 41, 39, 49, 54, 28, 11];
            let lower_row = [9, 26, 52, 47, 35, 37, 48, 58, 32, 15];
            if upper {
                upper_row[slot]
            } else {
                lower_row[slot]
            }
        }
    };
    Ok(StateStratum {
        label: StateLabel::Primed(primed),
        signs,
    })
}

/// Applies the reflection `eps^i`, `i in 1..=7`, acting on `(R1, R2, theta)`.
pub fn reflect_rectified(r: RectifiedPose, i: u8) -> Result<RectifiedPose> {
    let RectifiedPose { r1, r2, theta } = r;
    let mirrored = TAU - theta;
    let out = match i {
        1 => (-r1, r2, theta),
        2 => (r1, -r2, theta),
        3 => (-r1, -r2, theta),
        4 => (-r1, r2, mirrored),
        5 => (r1, r2, mirrored),
        6 => (-r1, -r2, mirrored),
        7 => (r1, -r2, mirrored),
        _ => return Err(domain(format!("reflection index {i} outside 1..=7"))),
    };
    Ok(RectifiedPose {
        r1: out.0,
        r2: out.1,
        theta: out.2,
    })
}

pub fn reflect_pose(q: Pose, i: u8) -> Result<Pose> {
    Ok(unrectify(reflect_rectified(rectify(q), i)?))
}

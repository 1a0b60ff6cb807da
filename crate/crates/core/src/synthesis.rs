//! Inverse exponential mapping: all optimal geodesics from the identity to
//! a target pose, the sub-Riemannian distance, spheres and wavefronts.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};
use std::sync::OnceLock;

use crate::cut::{classify_cut, cut_time, CutKind, CUT_TOL};
use crate::elliptic::{Elliptic, Modulus};
use crate::error::{domain, Error, Result};
use crate::exponential::{exp_trajectory_with_tol, rectify, Geodesic, Pose, Trajectory, EXP_TOL};
use crate::jacobian::{bisect, conj_time, f1, p11_with};
use crate::pendulum::{from_elliptic, to_elliptic, Covector, EllipticCoords, Sign, StratumTag};

/// Solver settings.
#[derive(Clone, Copy, Debug)]
pub struct SolverConfig {
    /// Target residual of the endpoint (max-norm).
    pub tol: f64,
    /// Local tolerance of the forward integration.
    pub exp_tol: f64,
    /// Samples per returned trajectory.
    pub samples: usize,
    /// Maximum number of Newton starts.
    pub max_starts: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            exp_tol: EXP_TOL,
            samples: 65,
            max_starts: 48,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicSolution {
    pub lambda: Covector,
    pub t: f64,
    pub trajectory: Trajectory,
    pub endpoint_residual: f64,
    /// `t <= cut_time(lambda) + 1e-9`.
    pub certified: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Multiplicity {
    Unique,
    MaxwellPair,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SynthesisResult {
    pub solutions: Vec<GeodesicSolution>,
    pub distance: f64,
    pub multiplicity: Multiplicity,
    pub warning: Option<String>,
}

const CERT_TOL: f64 = 1e-9;
const ORIGIN_TOL: f64 = 1e-9;
const DEDUP: f64 = 1e-4;

fn residual(q: Pose, target: Pose) -> [f64; 3] {
    let mut dth = (q.theta - target.theta).rem_euclid(TAU);
    if dth > PI {
        dth -= TAU;
    }
    [q.x - target.x, q.y - target.y, dth]
}

fn max_norm<const N: usize>(r: &[f64; N]) -> f64 {
    r.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

fn finalize(lambda: Covector, t: f64, target: Pose, cfg: &SolverConfig) -> Result<GeodesicSolution> {
    let trajectory = exp_trajectory_with_tol(lambda, t, cfg.samples.max(2), cfg.exp_tol)?;
    let endpoint_residual = max_norm(&residual(trajectory.endpoint(), target));
    Ok(GeodesicSolution {
        lambda,
        t,
        trajectory,
        endpoint_residual,
        certified: t <= cut_time(lambda) + CERT_TOL,
    })
}

fn assemble(mut solutions: Vec<GeodesicSolution>, target: Pose) -> SynthesisResult {
    solutions.sort_by(|a, b| a.t.total_cmp(&b.t));
    let distance = solutions.first().map_or(0.0, |s| s.t);
    let multiplicity = if solutions.len() >= 2 {
        Multiplicity::MaxwellPair
    } else {
        Multiplicity::Unique
    };
    let warning = (classify_cut(target, CUT_TOL).kind == CutKind::CutConjPoint).then(|| {
        "target lies on the conjugate part of the cut locus; the solution is unique but \
         the exponential mapping is degenerate there"
            .to_string()
    });
    SynthesisResult {
        solutions,
        distance,
        multiplicity,
        warning,
    }
}

/// Optimal synthesis with default settings.
pub fn solve(q: Pose) -> Result<SynthesisResult> {
    solve_with(q, &SolverConfig::default())
}

pub fn solve_with(q: Pose, cfg: &SolverConfig) -> Result<SynthesisResult> {
    check_pose(q)?;
    if q.norm() < ORIGIN_TOL {
        let s = finalize(Covector::new(PI, 0.0), 0.0, q, cfg)?;
        return Ok(assemble(vec![s], q));
    }
    match solve_special_with(q, cfg) {
        Err(Error::NotApplicable | Error::NoRoot(_)) => solve_generic_with(q, cfg),
        other => other,
    }
}

/// Sub-Riemannian distance from the identity.
pub fn distance(q: Pose) -> Result<f64> {
    Ok(solve(q)?.distance)
}

fn check_pose(q: Pose) -> Result<()> {
    if q.x.is_finite() && q.y.is_finite() && q.theta.is_finite() {
        Ok(())
    } else {
        Err(domain("target pose must be finite"))
    }
}

/// Modulus from an unbounded parameter: `k = e^w / sqrt 2` for `w <= 0`
/// and `k' = e^-w / sqrt 2` for `w > 0`, so that `k -> 1` keeps `k'`
/// accurate.
fn modulus_of(w: f64) -> Modulus {
    if w <= 0.0 {
        Modulus::new(FRAC_1_SQRT_2 * w.exp()).expect("k < 1")
    } else {
        Modulus::from_complement(FRAC_1_SQRT_2 * (-w).exp()).expect("k' < 1")
    }
}

/// Upper end keeps `k' > 1e-12`; closer to the separatrix `f1(K) = -k'`
/// drowns in rounding and `p11` is no longer resolvable.
const W_RANGE: (f64, f64) = (-40.0, 27.0);

/// Solves `g(modulus) = target` for increasing `g` with `g -> 0` as
/// `k -> 0` and `g -> inf` as `k -> 1`.
fn solve_modulus(g: impl Fn(&Elliptic) -> f64, target: f64) -> Result<Modulus> {
    let h = |w: f64| g(&Elliptic::new(modulus_of(w))) - target;
    let (lo, hi) = W_RANGE;
    if h(lo) > 0.0 || !(h(hi) > 0.0) {
        return Err(Error::NoRoot(format!("modulus equation has no root for value {target}")));
    }
    Ok(modulus_of(bisect(h, lo, hi, 1e-13)))
}

fn c1_covector(branch: u8, m: Modulus, phi: f64) -> Result<Covector> {
    from_elliptic(StratumTag::C1 { branch }, EllipticCoords { modulus: m, phi })
}

fn c2_covector(sign: Sign, m: Modulus, phi: f64) -> Result<Covector> {
    from_elliptic(StratumTag::C2 { sign }, EllipticCoords { modulus: m, phi })
}

/// Closed-form solutions on the special families of targets.
pub fn solve_special(q: Pose) -> Result<SynthesisResult> {
    solve_special_with(q, &SolverConfig::default())
}

pub fn solve_special_with(q: Pose, cfg: &SolverConfig) -> Result<SynthesisResult> {
    check_pose(q)?;
    let eps = 1e-12 * (1.0 + q.norm());
    let zero = |v: f64| v.abs() <= eps;
    let th = q.theta_signed();
    let on_pi = zero(th.abs() - PI);
    let on_zero = zero(th);
    let mut cands: Vec<(Covector, f64)> = Vec::new();

    if zero(q.x) && zero(q.y) {
        if on_zero {
            return Err(Error::NotApplicable);
        }
        if on_pi {
            cands.push((Covector::new(0.0, 0.0), PI));
            cands.push((Covector::new(TAU, 0.0), PI));
        } else if th > 0.0 {
            cands.push((Covector::new(TAU, 0.0), th));
        } else {
            cands.push((Covector::new(0.0, 0.0), -th));
        }
    } else if on_zero && zero(q.y) {
        let g = if q.x > 0.0 { PI } else { 3.0 * PI };
        cands.push((Covector::new(g, 0.0), q.x.abs()));
    } else if on_pi {
        let rho = q.x.hypot(q.y);
        let m = solve_modulus(|e| 2.0 * (e.big_k() - e.big_e()) / e.modulus().k(), rho)?;
        let ell = Elliptic::new(m);
        let big_k = ell.big_k();
        // on theta = pi: R1 = -x, R2 = y
        let (r1, r2) = (-q.x, q.y);
        for (branch, r1b) in [(0u8, r1), (1u8, -r1)] {
            let v = (-r2 / m.kc()).atan2(r1b);
            let tau = ell.f(v)?;
            cands.push((c1_covector(branch, m, tau - big_k)?, 2.0 * big_k));
        }
    } else if on_zero && zero(q.x) {
        let m = solve_modulus(
            |e| {
                let p = p11_with(e);
                let dn = e.jacobi(p).dn;
                2.0 * e.modulus().kc() * (p - e.epsilon(p)) / dn
            },
            q.y.abs(),
        )?;
        let ell = Elliptic::new(m);
        let (k, big_k, p) = (m.k(), ell.big_k(), p11_with(&ell));
        let sign = if q.y > 0.0 { Sign::Minus } else { Sign::Plus };
        for tau in [big_k, -big_k] {
            cands.push((c2_covector(sign, m, k * (tau - p))?, 2.0 * k * p));
        }
    } else if on_zero {
        let (m, p) = solve_theta_zero(q.x.abs(), q.y.abs())?;
        let ell = Elliptic::new(m);
        let k = m.k();
        let sign = if q.y > 0.0 { Sign::Minus } else { Sign::Plus };
        let tau = sign.value() * q.x.signum() * ell.big_k();
        cands.push((c2_covector(sign, m, k * (tau - p))?, 2.0 * k * p));
    } else {
        return Err(Error::NotApplicable);
    }

    let mut sols = Vec::with_capacity(cands.len());
    for (l, t) in cands {
        sols.push(finalize(l, t, q, cfg)?);
    }
    Ok(assemble(sols, q))
}

/// `(k, p)` with `p in (0, p11)` on the branch `c > 0, tau = K`, whose
/// endpoint is `(ax, -ay, 0)`.
fn solve_theta_zero(ax: f64, ay: f64) -> Result<(Modulus, f64)> {
    let eval = |w: f64, u: f64| -> Option<[f64; 2]> {
        if !(u > 0.0 && u < 1.0) {
            return None;
        }
        let m = modulus_of(w);
        let ell = Elliptic::new(m);
        let p = u * p11_with(&ell);
        let dn = ell.jacobi(p).dn;
        let r1 = -2.0 * m.kc() * (p - ell.epsilon(p)) / dn;
        let r2 = -2.0 * m.k() * f1(p, &ell) / dn;
        Some([r1 + ay, r2 - ax])
    };
    let mut best = (f64::INFINITY, [0.0, 0.5]);
    for i in 0..=60 {
        let w = -6.0 + 0.5 * i as f64;
        for j in 1..20 {
            let u = j as f64 / 20.0;
            if let Some(r) = eval(w, u) {
                let n = max_norm(&r);
                if n < best.0 {
                    best = (n, [w, u]);
                }
            }
        }
    }
    let scale = 1.0 + ax.max(ay);
    let (x, r) = levenberg_marquardt(|z: &[f64; 2]| eval(z[0], z[1]), best.1, |_| {}, 1e-13 * scale, 200)
        .ok_or_else(|| Error::NoRoot("theta = 0 system did not converge".into()))?;
    if r > 1e-9 * scale {
        return Err(Error::NoRoot(format!("theta = 0 system stalled at residual {r:e}")));
    }
    let m = modulus_of(x[0]);
    Ok((m, x[1] * p11_with(&Elliptic::new(m))))
}

/// Solves the linear system `a x = b` by Gaussian elimination with partial
/// pivoting.
fn linear_solve<const N: usize>(mut a: [[f64; N]; N], mut b: [f64; N]) -> Option<[f64; N]> {
    for col in 0..N {
        let piv = (col..N).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..N {
            let f = a[row][col] / a[col][col];
            for c in col..N {
                a[row][c] -= f * a[col][c];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; N];
    for row in (0..N).rev() {
        let mut s = b[row];
        for c in row + 1..N {
            s -= a[row][c] * x[c];
        }
        x[row] = s / a[row][row];
    }
    Some(x)
}

/// Levenberg-Marquardt with a central-difference Jacobian. `project` maps
/// iterates back into the admissible set. Returns the final point and its
/// residual max-norm once it drops below `tol`.
fn levenberg_marquardt<const N: usize>(
    f: impl Fn(&[f64; N]) -> Option<[f64; N]>,
    x0: [f64; N],
    project: impl Fn(&mut [f64; N]),
    tol: f64,
    max_iter: usize,
) -> Option<([f64; N], f64)> {
    let mut x = x0;
    project(&mut x);
    let mut r = f(&x)?;
    let mut norm = max_norm(&r);
    let mut mu = 1e-6;
    for _ in 0..max_iter {
        if norm < tol {
            return Some((x, norm));
        }
        let mut jac = [[0.0; N]; N];
        for j in 0..N {
            let h = 1e-7 * (1.0 + x[j].abs());
            let (mut xp, mut xm) = (x, x);
            xp[j] += h;
            xm[j] -= h;
            let (rp, rm) = (f(&xp)?, f(&xm)?);
            for i in 0..N {
                jac[i][j] = (rp[i] - rm[i]) / (2.0 * h);
            }
        }
        let mut jtj = [[0.0; N]; N];
        let mut jtr = [0.0; N];
        for a in 0..N {
            for b in 0..N {
                jtj[a][b] = (0..N).map(|i| jac[i][a] * jac[i][b]).sum();
            }
            jtr[a] = -(0..N).map(|i| jac[i][a] * r[i]).sum::<f64>();
        }
        let mut improved = false;
        for _ in 0..30 {
            let mut damped = jtj;
            for d in 0..N {
                damped[d][d] += mu * (jtj[d][d] + 1e-12);
            }
            let Some(mut dx) = linear_solve(damped, jtr) else {
                mu *= 10.0;
                continue;
            };
            let big = max_norm(&dx);
            if big > 1.0 {
                dx.iter_mut().for_each(|v| *v /= big);
            }
            let mut xn = x;
            for i in 0..N {
                xn[i] += dx[i];
            }
            project(&mut xn);
            if let Some(rn) = f(&xn) {
                let nn = max_norm(&rn);
                if nn < norm {
                    x = xn;
                    r = rn;
                    norm = nn;
                    mu = (mu / 5.0).max(1e-12);
                    improved = true;
                    break;
                }
            }
            mu *= 8.0;
        }
        if !improved {
            break;
        }
    }
    (norm < tol).then_some((x, norm))
}

#[derive(Clone, Copy, Debug)]
struct Seed {
    lambda: Covector,
    t: f64,
    pose: Pose,
    family: u8,
}

/// Quarter of the circle containing the amplitude of `tau`.
fn quadrant(ell: &Elliptic, tau: f64) -> u8 {
    let am = ell.jacobi(tau).am.rem_euclid(TAU);
    ((am / (0.5 * PI)) as u8).min(3)
}

const SEED_PHASES: usize = 24;
const SEED_TIMES: usize = 12;

fn seed_moduli() -> Vec<Modulus> {
    let mut ms: Vec<Modulus> = [0.02, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.87, 0.93, 0.97]
        .iter()
        .map(|&k| Modulus::new(k).unwrap())
        .collect();
    for e in [1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0, 10.0, 12.0] {
        ms.push(Modulus::from_complement(10f64.powf(-e)).unwrap());
    }
    ms
}

fn build_seeds() -> Vec<Seed> {
    let mut seeds = Vec::new();
    let times_for = |t_max: f64| -> Vec<f64> {
        (1..=SEED_TIMES)
            .map(|i| t_max * i as f64 / SEED_TIMES as f64)
            .collect()
    };
    for m in seed_moduli() {
        let ell = Elliptic::new(m);
        let (k, big_k) = (m.k(), ell.big_k());
        // C1, branch 0 integrated; branch 1 by (x, y, theta) -> (-x, y, -theta)
        let times = times_for(2.0 * big_k);
        for j in 0..SEED_PHASES {
            let phi = 4.0 * big_k * j as f64 / SEED_PHASES as f64;
            let l0 = c1_covector(0, m, phi).unwrap();
            let l1 = c1_covector(1, m, phi).unwrap();
            let Ok((_, states)) = Geodesic::new(l0).integrate(times[SEED_TIMES - 1], 1e-8, &times) else {
                continue;
            };
            for (&t, s) in times.iter().zip(&states) {
                let qd = quadrant(&ell, phi + 0.5 * t);
                seeds.push(Seed {
                    lambda: l0,
                    t,
                    pose: Pose::new(s[0], s[1], s[2]),
                    family: qd,
                });
                seeds.push(Seed {
                    lambda: l1,
                    t,
                    pose: Pose::new(-s[0], s[1], -s[2]),
                    family: 4 + qd,
                });
            }
        }
        // C2, c > 0 integrated; c < 0 by (x, y, theta) -> (-x, -y, theta)
        let p1 = p11_with(&ell);
        let times = times_for(2.0 * k * p1);
        for j in 0..SEED_PHASES {
            let psi = 4.0 * big_k * j as f64 / SEED_PHASES as f64;
            let lp = c2_covector(Sign::Plus, m, k * psi).unwrap();
            let lm = c2_covector(Sign::Minus, m, k * psi).unwrap();
            let Ok((_, states)) = Geodesic::new(lp).integrate(times[SEED_TIMES - 1], 1e-8, &times) else {
                continue;
            };
            for (&t, s) in times.iter().zip(&states) {
                let qd = quadrant(&ell, psi + 0.5 * t / k);
                seeds.push(Seed {
                    lambda: lp,
                    t,
                    pose: Pose::new(s[0], s[1], s[2]),
                    family: 8 + qd,
                });
                seeds.push(Seed {
                    lambda: lm,
                    t,
                    pose: Pose::new(-s[0], -s[1], s[2]),
                    family: 12 + qd,
                });
            }
        }
    }
    seeds
}

fn seeds() -> &'static [Seed] {
    static SEEDS: OnceLock<Vec<Seed>> = OnceLock::new();
    SEEDS.get_or_init(build_seeds)
}

fn pose_distance(a: Pose, b: Pose) -> f64 {
    let r = residual(a, b);
    r[0].hypot(r[1]).hypot(r[2])
}

fn same_geodesic(a: &GeodesicSolution, b: &GeodesicSolution) -> bool {
    let dg = (a.lambda.gamma() - b.lambda.gamma()).rem_euclid(4.0 * PI);
    let dg = dg.min(4.0 * PI - dg);
    dg.max((a.lambda.c() - b.lambda.c()).abs()).max((a.t - b.t).abs()) < DEDUP
}

/// Multi-start Levenberg-Marquardt on `Exp(gamma, c, t) = q` restricted to
/// `t <= cut_time(gamma, c)`.
pub fn solve_generic(q: Pose, tol: f64) -> Result<SynthesisResult> {
    solve_generic_with(
        q,
        &SolverConfig {
            tol,
            ..SolverConfig::default()
        },
    )
}

pub fn solve_generic_with(q: Pose, cfg: &SolverConfig) -> Result<SynthesisResult> {
    check_pose(q)?;
    if q.norm() < ORIGIN_TOL {
        return solve_with(q, cfg);
    }
    let want_pair = matches!(
        classify_cut(q, CUT_TOL).kind,
        CutKind::CutGlob | CutKind::CutLocPlus | CutKind::CutLocMinus
    );
    let mut ranked: Vec<(f64, &Seed)> = seeds().iter().map(|s| (pose_distance(s.pose, q), s)).collect();
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0));

    let exp_tol = cfg.exp_tol;
    let f = |z: &[f64; 3]| -> Option<[f64; 3]> {
        let (out, _) = Geodesic::new(Covector::new(z[0], z[1])).integrate(z[2], exp_tol, &[]).ok()?;
        Some(residual(Pose::new(out[0], out[1], out[2]), q))
    };
    let project = |z: &mut [f64; 3]| {
        z[0] = z[0].rem_euclid(4.0 * PI);
        let tc = cut_time(Covector::new(z[0], z[1]));
        z[2] = z[2].clamp(0.0, tc);
    };

    let mut attempts = [0u8; 16];
    let mut solved = [false; 16];
    let mut found: Vec<GeodesicSolution> = Vec::new();
    let mut starts = 0;
    for (_, seed) in &ranked {
        let fam = seed.family as usize;
        if solved[fam] || attempts[fam] >= 2 {
            continue;
        }
        if starts >= cfg.max_starts {
            break;
        }
        attempts[fam] += 1;
        starts += 1;
        let z0 = [seed.lambda.gamma(), seed.lambda.c(), seed.t];
        let Some((z, _)) = levenberg_marquardt(f, z0, project, cfg.tol, 60) else {
            continue;
        };
        let sol = finalize(Covector::new(z[0], z[1]), z[2], q, cfg)?;
        if !sol.certified || sol.endpoint_residual > 10.0 * cfg.tol {
            continue;
        }
        solved[fam] = true;
        if found.iter().any(|s| same_geodesic(s, &sol)) {
            continue;
        }
        found.push(sol);
        if found.len() >= 2 || (!want_pair && !found.is_empty()) {
            break;
        }
    }
    if found.is_empty() {
        return Err(Error::Convergence(format!(
            "no start converged for target ({}, {}, {}) after {starts} attempts",
            q.x, q.y, q.theta
        )));
    }
    // two certified preimages of one point have equal length; keep the
    // shortest if numerical noise produced more
    let best = found.iter().map(|s| s.t).fold(f64::INFINITY, f64::min);
    found.retain(|s| s.t <= best + 1e-6 * (1.0 + best));
    Ok(assemble(found, q))
}

/// Covector grid used by the sphere and wavefront samplers: `n` values of
/// `gamma` times `n` values of `c` (odd count so that `c = 0` is included).
fn covector_grid(n: usize) -> Vec<Covector> {
    let nc = n | 1;
    let mut out = Vec::with_capacity(n * nc);
    for i in 0..n {
        let g = 4.0 * PI * i as f64 / n as f64;
        for j in 0..nc {
            let u = -1.0 + 2.0 * (j as f64 + 0.5) / nc as f64;
            let u = if j == nc / 2 { 0.0 } else { u };
            out.push(Covector::new(g, 3.0 * u / (1.0 - u * u).max(1e-3)));
        }
    }
    out
}

fn sample(r: f64, n: usize, restrict: bool) -> Result<Vec<Pose>> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(domain(format!("radius {r} must be positive")));
    }
    if n == 0 {
        return Err(domain("grid size must be >= 1"));
    }
    let mut out = Vec::new();
    for l in covector_grid(n) {
        if restrict && cut_time(l) < r {
            continue;
        }
        let (q, _) = Geodesic::new(l).integrate(r, 1e-10, &[])?;
        out.push(Pose::new(q[0], q[1], q[2]));
    }
    Ok(out)
}

/// Points of the sphere `S_R`: images `Exp(lambda, R)` with
/// `cut_time(lambda) >= R`.
pub fn sample_sphere(r: f64, n: usize) -> Result<Vec<Pose>> {
    sample(r, n, true)
}

/// Points of the wavefront `W_R = {Exp(lambda, R)}`.
pub fn sample_wavefront(r: f64, n: usize) -> Result<Vec<Pose>> {
    sample(r, n, false)
}

/// First conjugate points `Exp(lambda, t1conj(lambda))` over the covector
/// grid; only rotating covectors contribute.
pub fn sample_caustic(n: usize) -> Result<Vec<Pose>> {
    if n == 0 {
        return Err(domain("grid size must be >= 1"));
    }
    let mut out = Vec::new();
    for l in covector_grid(n) {
        let t = conj_time(l)?;
        if !t.is_finite() {
            continue;
        }
        let (q, _) = Geodesic::new(l).integrate(t, 1e-10, &[])?;
        out.push(Pose::new(q[0], q[1], q[2]));
    }
    Ok(out)
}

/// Rectified row `(x, y, theta, R1, R2)` for point-cloud export.
pub fn point_row(q: Pose) -> [f64; 5] {
    let r = rectify(q);
    [q.x, q.y, q.theta, r.r1, r.r2]
}

/// Modulus and midpoint phase of a covector, for diagnostics.
pub fn elliptic_summary(l: Covector) -> Option<(StratumTag, f64, f64)> {
    to_elliptic(l).ok().map(|(tag, ec)| (tag, ec.k(), ec.phi))
}

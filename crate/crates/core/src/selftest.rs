//! Randomized self-checks over all modules, for the command-line runner.
//!
//! Sample counts scale with [`SelftestConfig::scale`].

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cut::{classify_cut, cut_time, r11_curve, r12_curve, reflect_pose, CutKind, CUT_TOL};
use crate::elliptic::{Elliptic, Modulus};
use crate::exponential::{exp, unrectify, Pose, RectifiedPose};
use crate::jacobian::{conj_bracket, conj_time};
use crate::ode::Dopri5;
use crate::pendulum::{energy, pendulum_flow, to_elliptic, Covector, StratumTag};
use crate::synthesis::{distance, sample_sphere, solve, Multiplicity};

#[derive(Clone, Copy, Debug)]
pub struct SelftestConfig {
    pub seed: u64,
    /// Multiplier on the default sample counts.
    pub scale: f64,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        Self { seed: 1, scale: 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub name: &'static str,
    pub passed: bool,
    pub samples: usize,
    /// Worst observed value of the checked quantity.
    pub worst: f64,
    pub bound: f64,
}

struct Check {
    name: &'static str,
    samples: usize,
    worst: f64,
    bound: f64,
    failed: bool,
}

impl Check {
    fn new(name: &'static str, bound: f64) -> Self {
        Self { name, samples: 0, worst: f64::NEG_INFINITY, bound, failed: false }
    }

    fn record(&mut self, err: f64) {
        self.samples += 1;
        if !(err <= self.bound) {
            self.failed = true;
        }
        if err.is_nan() || err > self.worst {
            self.worst = err;
        }
    }

    fn fail(&mut self) {
        self.samples += 1;
        self.failed = true;
    }

    fn done(self) -> CheckReport {
        CheckReport {
            name: self.name,
            passed: !self.failed && self.samples > 0,
            samples: self.samples,
            worst: self.worst,
            bound: self.bound,
        }
    }
}

fn count(base: usize, scale: f64) -> usize {
    ((base as f64 * scale).round() as usize).max(1)
}

fn angle_gap(a: f64, b: f64, period: f64) -> f64 {
    let d = (a - b).rem_euclid(period);
    d.min(period - d)
}

fn pose_gap(a: Pose, b: Pose) -> f64 {
    (a.x - b.x).abs().max((a.y - b.y).abs()).max(angle_gap(a.theta, b.theta, 2.0 * PI))
}

fn random_covector(rng: &mut ChaCha8Rng) -> Covector {
    loop {
        let l = Covector::new(rng.gen_range(0.0..4.0 * PI), rng.gen_range(-3.0..3.0));
        if (energy(l) - 1.0).abs() > 1e-3 {
            return l;
        }
    }
}

fn elliptic_identities(rng: &mut ChaCha8Rng, n: usize) -> CheckReport {
    let mut c = Check::new("elliptic identities", 1e-11);
    for _ in 0..n {
        let k: f64 = rng.gen_range(0.0..0.999);
        let p: f64 = rng.gen_range(-10.0..10.0);
        let m = Modulus::new(k).expect("k < 1");
        let e = Elliptic::new(m);
        let j = e.jacobi(p);
        let kc = Elliptic::new(m.complement());
        let legendre = e.big_e() * kc.big_k() + kc.big_e() * e.big_k() - e.big_k() * kc.big_k();
        let v = j.am.rem_euclid(PI) - PI / 2.0;
        let back = e.f(v).map_or(f64::INFINITY, |f| (e.jacobi(f).am - v).abs());
        let err = (j.sn * j.sn + j.cn * j.cn - 1.0)
            .abs()
            .max((j.dn * j.dn - 1.0 + k * k * j.sn * j.sn).abs())
            .max((legendre - PI / 2.0).abs())
            .max(back);
        c.record(err);
    }
    c.done()
}

fn pendulum_flow_vs_ode(rng: &mut ChaCha8Rng, n: usize) -> CheckReport {
    let mut c = Check::new("pendulum flow vs integrator", 1e-8);
    let samples: Vec<f64> = (1..=20).map(f64::from).collect();
    for _ in 0..n {
        let l = random_covector(rng);
        let mut out = Vec::new();
        let ode = Dopri5 { rtol: 1e-13, atol: 1e-13, max_step: 0.1 };
        let run = ode.integrate(
            |_, y: &[f64; 2]| [y[1], -y[0].sin()],
            0.0,
            [l.gamma(), l.c()],
            20.0,
            &samples,
            &mut out,
        );
        if run.is_err() {
            c.fail();
            continue;
        }
        let mut worst = 0.0f64;
        for (s, y) in samples.iter().zip(&out) {
            let f = pendulum_flow(l, *s);
            worst = worst.max(angle_gap(f.gamma(), y[0], 4.0 * PI)).max((f.c() - y[1]).abs());
        }
        c.record(worst);
    }
    c.done()
}

fn conjugate_bounds(rng: &mut ChaCha8Rng, n: usize) -> CheckReport {
    let mut c = Check::new("conjugate time bounds", 1e-9);
    while c.samples < n {
        let l = random_covector(rng);
        let Ok((StratumTag::C2 { .. }, ec)) = to_elliptic(l) else { continue };
        let (Ok(t), Ok((lo, hi))) = (conj_time(l), conj_bracket(ec.k())) else {
            c.fail();
            continue;
        };
        c.record((lo - t).max(t - hi).max(0.0));
    }
    c.done()
}

fn round_trips(rng: &mut ChaCha8Rng, n: usize) -> CheckReport {
    let mut c = Check::new("synthesis round trip", 1e-6);
    for _ in 0..n {
        let l = random_covector(rng);
        let t = rng.gen_range(0.05..0.98) * cut_time(l).min(12.0);
        let Ok(q) = exp(l, t) else {
            c.fail();
            continue;
        };
        match solve(q) {
            Ok(r) if r.multiplicity == Multiplicity::Unique => {
                let s = &r.solutions[0];
                c.record((s.t - t).abs().max(angle_gap(s.lambda.gamma(), l.gamma(), 4.0 * PI)));
            }
            _ => c.fail(),
        }
    }
    c.done()
}

fn maxwell_pairs(rng: &mut ChaCha8Rng, n: usize) -> CheckReport {
    let mut c = Check::new("Maxwell pairs on the cut locus", 1e-8);
    for i in 0..n {
        let q = if i % 2 == 0 {
            let a: f64 = rng.gen_range(0.0..2.0 * PI);
            let r = rng.gen_range(0.2..3.0);
            Pose::new(r * a.cos(), r * a.sin(), PI)
        } else {
            let th = rng.gen_range(0.05..PI - 0.2) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let a = r11_curve(f64::abs(th)).unwrap_or(f64::INFINITY);
            let r1 = (a + rng.gen_range(0.1..2.0)) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            unrectify(RectifiedPose { r1, r2: 0.0, theta: th })
        };
        match solve(q) {
            Ok(r) if r.solutions.len() == 2 && r.solutions.iter().all(|s| s.certified) => {
                c.record((r.solutions[0].t - r.solutions[1].t).abs());
            }
            _ => c.fail(),
        }
    }
    c.done()
}

fn curve_order(n: usize) -> CheckReport {
    // worst is the largest R12 - R11, which must stay negative
    let mut c = Check::new("R12 < R11", -1e-12);
    for i in 0..n {
        let th = 0.01 + (PI - 0.02) * i as f64 / (n.max(2) - 1) as f64;
        match (r12_curve(th), r11_curve(th)) {
            (Ok(a), Ok(b)) => c.record(a - b),
            _ => c.fail(),
        }
    }
    c.done()
}

fn reflections(rng: &mut ChaCha8Rng, n: usize) -> CheckReport {
    let mut c = Check::new("distance under reflections", 1e-6);
    for _ in 0..n {
        let l = random_covector(rng);
        let t = rng.gen_range(0.05..0.98) * cut_time(l).min(12.0);
        let Ok(q) = exp(l, t) else {
            c.fail();
            continue;
        };
        let Ok(d) = distance(q) else {
            c.fail();
            continue;
        };
        let mut worst = 0.0f64;
        for i in 1..=7 {
            match reflect_pose(q, i).and_then(distance) {
                Ok(di) => worst = worst.max((di - d).abs()),
                Err(_) => worst = f64::INFINITY,
            }
        }
        c.record(worst);
    }
    c.done()
}

fn spheres(rng: &mut ChaCha8Rng, n: usize) -> CheckReport {
    let mut c = Check::new("sphere samples at distance R", 1e-5);
    for r in [PI / 2.0, PI, 1.5 * PI] {
        let Ok(points) = sample_sphere(r, 16) else {
            c.fail();
            continue;
        };
        for _ in 0..n {
            let q = points[rng.gen_range(0..points.len())];
            match distance(q) {
                Ok(d) => c.record((d - r).abs()),
                Err(_) => c.fail(),
            }
        }
    }
    c.done()
}

fn special_distances() -> CheckReport {
    let mut c = Check::new("special distances", 1e-9);
    for (q, d) in [
        (Pose::new(0.0, 0.0, PI), PI),
        (Pose::new(3.0, 0.0, 0.0), 3.0),
        (Pose::new(0.0, 0.0, PI / 2.0), PI / 2.0),
    ] {
        match distance(q) {
            Ok(v) => c.record((v - d).abs()),
            Err(_) => c.fail(),
        }
    }
    c.done()
}

fn special_pairs() -> CheckReport {
    let mut c = Check::new("special pairs round trip", 1e-6);
    for q in [Pose::new(1.0, 0.0, PI), Pose::new(0.0, 0.8, 0.0)] {
        if classify_cut(q, CUT_TOL).kind == CutKind::NotCut {
            c.fail();
        }
        match solve(q) {
            Ok(r) if r.solutions.len() == 2 => {
                for s in &r.solutions {
                    match exp(s.lambda, s.t) {
                        Ok(e) => c.record(pose_gap(e, q)),
                        Err(_) => c.fail(),
                    }
                }
            }
            _ => c.fail(),
        }
    }
    c.done()
}

/// Runs every check and returns one report per check.
pub fn run(cfg: &SelftestConfig) -> Vec<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let s = cfg.scale;
    vec![
        elliptic_identities(&mut rng, count(2000, s)),
        pendulum_flow_vs_ode(&mut rng, count(40, s)),
        conjugate_bounds(&mut rng, count(60, s)),
        round_trips(&mut rng, count(60, s)),
        maxwell_pairs(&mut rng, count(20, s)),
        special_distances(),
        special_pairs(),
        curve_order(count(200, s)),
        reflections(&mut rng, count(10, s)),
        spheres(&mut rng, count(5, s)),
    ]
}

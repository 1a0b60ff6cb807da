//! Dormand-Prince 5(4) integrator with step-size control and the standard
//! fourth-order continuous extension.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const MAX_STEPS: usize = 1_000_000;

/// Tolerances and limits of one integration.
#[derive(Clone, Copy, Debug)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    pub max_step: f64,
}

impl Dopri5 {
    pub fn new(tol: f64) -> Self {
        Self {
            rtol: tol,
            atol: tol,
            max_step: 0.5,
        }
    }

    /// Integrates `y' = f(t, y)` from `t0` to `t1 > t0` and returns `y(t1)`.
    /// `samples` must be sorted inside `[t0, t1]`; the states there are
    /// interpolated from the accepted steps and written to `out`.
    pub fn integrate<const N: usize, F>(
        &self,
        mut f: F,
        t0: f64,
        y0: [f64; N],
        t1: f64,
        samples: &[f64],
        out: &mut Vec<[f64; N]>,
    ) -> Result<[f64; N]>
    where
        F: FnMut(f64, &[f64; N]) -> [f64; N],
    {
        let mut t = t0;
        let mut y = y0;
        let mut next_sample = 0;
        while next_sample < samples.len() && samples[next_sample] <= t0 {
            out.push(y0);
            next_sample += 1;
        }
        if t1 <= t0 {
            return Ok(y0);
        }
        let span = t1 - t0;
        let mut h = (0.01 * span).min(self.max_step).max(1e-6 * span);
        let mut k1 = f(t, &y);
        let mut steps = 0;

        while t < t1 {
            steps += 1;
            if steps > MAX_STEPS {
                return Err(Error::Convergence(format!(
                    "integrator exceeded {MAX_STEPS} steps at t = {t}"
                )));
            }
            let last = t + h >= t1;
            if last {
                h = t1 - t;
            }
            let stage = |ks: &[(f64, &[f64; N])]| {
                let mut z = y;
                for (a, k) in ks {
                    for i in 0..N {
                        z[i] += h * a * k[i];
                    }
                }
                z
            };
            let k2 = f(t + C2 * h, &stage(&[(A21, &k1)]));
            let k3 = f(t + C3 * h, &stage(&[(A31, &k1), (A32, &k2)]));
            let k4 = f(t + C4 * h, &stage(&[(A41, &k1), (A42, &k2), (A43, &k3)]));
            let k5 = f(
                t + C5 * h,
                &stage(&[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            );
            let k6 = f(
                t + h,
                &stage(&[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
            );
            let y_new = stage(&[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
            let t_new = if last { t1 } else { t + h };
            let k7 = f(t_new, &y_new);

            let mut err = 0.0;
            for i in 0..N {
                let e = h
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let sc = self.atol + self.rtol * y[i].abs().max(y_new[i].abs());
                err += (e / sc) * (e / sc);
            }
            let err = (err / N as f64).sqrt();

            if err <= 1.0 {
                while next_sample < samples.len() && samples[next_sample] <= t_new {
                    let theta = if last && samples[next_sample] >= t1 {
                        1.0
                    } else {
                        (samples[next_sample] - t) / h
                    };
                    let mut z = [0.0; N];
                    for i in 0..N {
                        let r1 = y[i];
                        let r2 = y_new[i] - y[i];
                        let r3 = h * k1[i] - r2;
                        let r4 = r2 - h * k7[i] - r3;
                        let r5 = h
                            * (D1 * k1[i]
                                + D3 * k3[i]
                                + D4 * k4[i]
                                + D5 * k5[i]
                                + D6 * k6[i]
                                + D7 * k7[i]);
                        let th1 = 1.0 - theta;
                        z[i] = r1 + theta * (r2 + th1 * (r3 + theta * (r4 + th1 * r5)));
                    }
                    if theta == 1.0 {
                        z = y_new;
                    }
                    out.push(z);
                    next_sample += 1;
                }
                t = t_new;
                y = y_new;
                k1 = k7;
                let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                h = (h * fac).min(self.max_step);
            } else {
                let fac = if err.is_finite() { (0.9 * err.powf(-0.2)).max(0.1) } else { 0.1 };
                h *= fac;
            }
        }
        while next_sample < samples.len() {
            out.push(y);
            next_sample += 1;
        }
        Ok(y)
    }
}

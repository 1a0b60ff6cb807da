//! Jacobi elliptic functions and Legendre elliptic integrals in double
//! precision.
//!
//! Complete integrals come from the arithmetic-geometric mean; incomplete
//! integrals and the Jacobi functions use the descending Landen sequence
//! built on the same AGM ladder. The modulus `k` is always carried together
//! with its complement `k' = sqrt(1 - k^2)` so that callers close to the
//! separatrix (`k -> 1`) can supply `k'` directly without cancellation.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{domain, Result};

/// Below this modulus the circular limits `sn = sin`, `cn = cos`, `dn = 1`
/// are exact to double precision.
pub const CIRCULAR_LIMIT: f64 = 1e-8;

const MAX_AGM: usize = 24;

/// Elliptic modulus `k` in `[0, 1]` together with its complement.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Modulus {
    k: f64,
    kc: f64,
}

impl Modulus {
    pub fn new(k: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&k) {
            return Err(domain(format!("modulus k = {k} outside [0, 1]")));
        }
        let kc = ((1.0 - k) * (1.0 + k)).sqrt();
        Ok(Self { k, kc })
    }

    /// Builds the modulus from `k' = sqrt(1 - k^2)`, which is the accurate
    /// input when `k` is within rounding of 1.
    pub fn from_complement(kc: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&kc) {
            return Err(domain(format!("complementary modulus k' = {kc} outside [0, 1]")));
        }
        let k = ((1.0 - kc) * (1.0 + kc)).sqrt();
        Ok(Self { k, kc })
    }

    /// Both parts supplied by a caller that already computed them
    /// accurately (e.g. from a pendulum energy).
    pub(crate) fn from_parts(k: f64, kc: f64) -> Self {
        debug_assert!((0.0..=1.0).contains(&k) && (0.0..=1.0).contains(&kc));
        Self { k, kc }
    }

    pub fn k(self) -> f64 {
        self.k
    }

    /// Complementary modulus `k'`.
    pub fn kc(self) -> f64 {
        self.kc
    }

    /// Parameter `m = k^2`.
    pub fn m(self) -> f64 {
        self.k * self.k
    }

    /// Complementary modulus `sqrt(1 - k^2)`.
    pub fn complement(self) -> Modulus {
        Modulus { k: self.kc, kc: self.k }
    }

    pub fn is_one(self) -> bool {
        self.kc == 0.0
    }

    fn is_circular(self) -> bool {
        self.k < CIRCULAR_LIMIT
    }
}

/// Values of the amplitude and the three Jacobi functions at one argument.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jacobi {
    /// Continuous, increasing branch of the amplitude (not reduced mod pi).
    pub am: f64,
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

/// AGM ladder `a_n, b_n, c_n` started from `(1, k', k)`.
#[derive(Clone, Copy, Debug)]
struct Agm {
    a: [f64; MAX_AGM],
    b: [f64; MAX_AGM],
    c: [f64; MAX_AGM],
    /// Index of the last (converged) rung.
    last: usize,
}

impl Agm {
    fn new(m: Modulus) -> Self {
        let mut a = [0.0; MAX_AGM];
        let mut b = [0.0; MAX_AGM];
        let mut c = [0.0; MAX_AGM];
        a[0] = 1.0;
        b[0] = m.kc;
        c[0] = m.k;
        let mut n = 0;
        while n + 1 < MAX_AGM && c[n].abs() > f64::EPSILON * a[n] {
            a[n + 1] = 0.5 * (a[n] + b[n]);
            b[n + 1] = (a[n] * b[n]).sqrt();
            c[n + 1] = 0.5 * (a[n] - b[n]);
            n += 1;
        }
        Self { a, b, c, last: n }
    }
}

/// Precomputed kernel for one modulus: the AGM ladder plus `K(k)` and
/// `E(k)`. Cheap to build, then every evaluation reuses the ladder.
#[derive(Clone, Copy, Debug)]
pub struct Elliptic {
    modulus: Modulus,
    agm: Agm,
    big_k: f64,
    big_e: f64,
}

impl Elliptic {
    pub fn new(modulus: Modulus) -> Self {
        let agm = Agm::new(modulus);
        let (big_k, big_e) = if modulus.is_one() {
            (f64::INFINITY, 1.0)
        } else if modulus.is_circular() {
            (FRAC_PI_2, FRAC_PI_2)
        } else {
            let big_k = FRAC_PI_2 / agm.a[agm.last];
            let mut sum = 0.5 * agm.c[0] * agm.c[0];
            let mut pow = 0.5;
            for n in 1..=agm.last {
                pow *= 2.0;
                sum += pow * agm.c[n] * agm.c[n];
            }
            (big_k, big_k * (1.0 - sum))
        };
        Self {
            modulus,
            agm,
            big_k,
            big_e,
        }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    /// Quarter period `K(k)`; infinite for `k = 1`.
    pub fn big_k(&self) -> f64 {
        self.big_k
    }

    /// Complete integral of the second kind `E(k)`.
    pub fn big_e(&self) -> f64 {
        self.big_e
    }

    /// Amplitude and Jacobi functions at argument `u`.
    pub fn jacobi(&self, u: f64) -> Jacobi {
        let m = self.modulus;
        if m.is_one() {
            let sech = 1.0 / u.cosh();
            return Jacobi {
                am: 2.0 * (0.5 * u).tanh().atan(),
                sn: u.tanh(),
                cn: sech,
                dn: sech,
            };
        }
        if m.is_circular() {
            let (s, c) = u.sin_cos();
            return Jacobi {
                am: u,
                sn: s,
                cn: c,
                dn: 1.0,
            };
        }
        // am(u + 2nK) = am(u) + n pi
        let half_period = 2.0 * self.big_k;
        let n = (u / half_period).round();
        let r = u - n * half_period;
        let phi0 = self.reduced_am(r);
        let (s, c) = phi0.sin_cos();
        let sign = if (n as i64) % 2 == 0 { 1.0 } else { -1.0 };
        Jacobi {
            am: phi0 + n * PI,
            sn: sign * s,
            cn: sign * c,
            dn: (m.kc * m.kc + m.k * m.k * c * c).sqrt(),
        }
    }

    /// Descending Landen recursion for the amplitude, valid for any `u`
    /// but only used on `|u| <= K`.
    fn reduced_am(&self, u: f64) -> f64 {
        let agm = &self.agm;
        let n = agm.last;
        let mut phi = (1u64 << n) as f64 * agm.a[n] * u;
        for i in (1..=n).rev() {
            phi = 0.5 * (phi + (agm.c[i] / agm.a[i] * phi.sin()).asin());
        }
        phi
    }

    /// Incomplete integral of the first kind `F(v, k)`, quasi-periodically
    /// extended: `F(v + pi) = F(v) + 2K`.
    pub fn f(&self, v: f64) -> Result<f64> {
        let m = self.modulus;
        if m.is_one() {
            if v.abs() >= FRAC_PI_2 {
                return Err(domain(format!("F(v, 1) diverges for |v| = {} >= pi/2", v.abs())));
            }
            return Ok(v.sin().atanh());
        }
        if m.is_circular() {
            return Ok(v);
        }
        let n = (v / PI).round();
        let r = v - n * PI;
        let (f, _) = self.landen_fe(r);
        Ok(f + 2.0 * n * self.big_k)
    }

    /// Incomplete integral of the second kind `E(v, k)`, extended by
    /// `E(v + pi) = E(v) + 2E(k)`. Defined for every real `v` and `k <= 1`.
    pub fn e(&self, v: f64) -> f64 {
        let m = self.modulus;
        let n = (v / PI).round();
        let r = v - n * PI;
        let reduced = if m.is_one() {
            r.sin()
        } else if m.is_circular() {
            r
        } else {
            self.landen_fe(r).1
        };
        reduced + 2.0 * n * self.big_e
    }

    /// Both incomplete integrals for `|v| <= pi/2`.
    fn landen_fe(&self, v: f64) -> (f64, f64) {
        let agm = &self.agm;
        let mut phi = v;
        let mut e_sum = 0.0;
        for i in 0..agm.last {
            let (s, c) = phi.sin_cos();
            let (a, b) = (agm.a[i], agm.b[i]);
            phi = 2.0 * phi + ((b - a) * s * c / (a * c * c + b * s * s)).atan();
            e_sum += agm.c[i + 1] * phi.sin();
        }
        let n = agm.last;
        let f = phi / ((1u64 << n) as f64 * agm.a[n]);
        (f, self.big_e / self.big_k * f + e_sum)
    }

    /// Jacobi epsilon function `E(p) = E(am(p, k), k) = int_0^p dn^2`.
    pub fn epsilon(&self, p: f64) -> f64 {
        let m = self.modulus;
        if m.is_one() {
            return p.tanh();
        }
        if m.is_circular() {
            return p;
        }
        let half_period = 2.0 * self.big_k;
        let n = (p / half_period).round();
        let r = p - n * half_period;
        let am = self.reduced_am(r);
        self.landen_fe(am).1 + 2.0 * n * self.big_e
    }
}

/// Complete elliptic integral of the first kind.
pub fn complete_k(m: Modulus) -> Result<f64> {
    if m.is_one() {
        return Err(domain("K(k) diverges at k = 1"));
    }
    Ok(Elliptic::new(m).big_k())
}

/// Complete elliptic integral of the second kind.
pub fn complete_e(m: Modulus) -> f64 {
    Elliptic::new(m).big_e()
}

/// Incomplete integral of the first kind.
pub fn incomplete_f(v: f64, m: Modulus) -> Result<f64> {
    Elliptic::new(m).f(v)
}

/// Incomplete integral of the second kind.
pub fn incomplete_e(v: f64, m: Modulus) -> f64 {
    Elliptic::new(m).e(v)
}

/// `am`, `sn`, `cn`, `dn` at `p`.
pub fn jacobi_am_sn_cn_dn(p: f64, m: Modulus) -> Jacobi {
    Elliptic::new(m).jacobi(p)
}

/// Jacobi epsilon `E(p) = E(am(p, k), k)`.
pub fn jacobi_epsilon(p: f64, m: Modulus) -> f64 {
    Elliptic::new(m).epsilon(p)
}

//! Strict log-concavity of finite sequences and the q-certificate that turns
//! a strictly log-concave sequence into a member of a q-separated class.

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::intersperse::simplest_between;
use crate::polycore::{rat, rat_pow, CPoly, RPoly, Rat};
use crate::qcalc::{class_membership, membership_route_a, q_binomial_row, QClass, QParam};
use crate::realroots::{isolate_real_roots, RootIsolation};

pub type Sequence = Vec<Rat>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LcVerdict {
    pub holds: bool,
    /// First index where the required inequality fails.
    pub failing_index: Option<usize>,
    /// Set by the `+` variant when the entries change sign.
    pub mixed_signs: bool,
}

fn support(a: &[Rat]) -> Option<(usize, usize)> {
    let l = a.iter().position(|x| !x.is_zero())?;
    let m = a.iter().rposition(|x| !x.is_zero())?;
    Some((l, m))
}

/// `a_k^2 > a_{k-1} a_{k+1}` for every `k` between the first and last nonzero
/// entry, with zeros outside the sequence.
pub fn is_strictly_log_concave(a: &[Rat]) -> LcVerdict {
    let at = |i: isize| -> Rat {
        if i < 0 || i as usize >= a.len() {
            Rat::zero()
        } else {
            a[i as usize].clone()
        }
    };
    if let Some((l, m)) = support(a) {
        for k in l..=m {
            let ki = k as isize;
            if &a[k] * &a[k] <= at(ki - 1) * at(ki + 1) {
                return LcVerdict { holds: false, failing_index: Some(k), mixed_signs: false };
            }
        }
    }
    LcVerdict { holds: true, failing_index: None, mixed_signs: false }
}

pub fn uniform_sign(a: &[Rat]) -> bool {
    a.iter().all(|x| !x.is_negative()) || a.iter().all(|x| !x.is_positive())
}

/// Strict log-concavity together with a common sign for all entries.
pub fn is_log_concave_plus(a: &[Rat]) -> LcVerdict {
    let mut v = is_strictly_log_concave(a);
    if !uniform_sign(a) {
        v.holds = false;
        v.mixed_signs = true;
    }
    v
}

/// `sum_k C_k^n(q) a_k z^k` with `n = len - 1`.
pub fn q_poly(a: &[Rat], q: &QParam) -> RPoly {
    let n = a.len().saturating_sub(1);
    let row = q_binomial_row(n, q);
    RPoly::new(a.iter().zip(&row).map(|(x, c)| x * c).collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct QCertificate {
    pub q: QParam,
    pub poly: RPoly,
    pub iso: Option<RootIsolation>,
    pub cls: QClass,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchDiagnostics {
    /// Grid values tried, in order, with their outcomes.
    pub probes: Vec<(String, bool)>,
    pub floor: String,
}

#[derive(Debug, Clone, Serialize)]
pub enum CertificateOutcome {
    Certified(QCertificate),
    NotLogConcave { index: usize },
    FloorReached(SearchDiagnostics),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("certificate at q = {0} failed re-verification")]
    Reverification(String),
    #[error("q_floor must lie in (0, 1)")]
    BadFloor,
}

pub const DEFAULT_DEPTH: usize = 30;

pub fn default_floor() -> Rat {
    rat(1, 1 << 20)
}

fn probe(a: &[Rat], q: &QParam, cls: QClass) -> bool {
    let n = a.len() - 1;
    membership_route_a(&q_poly(a, q), n, q, cls).is_ok()
}

/// Search for the largest verified `q` at which the q-polynomial of `a` lies
/// in `R_n(q)` (or `N_n(q)` for sequences of one sign).
pub fn find_q_certificate(a: &[Rat], q_floor: &Rat, depth: usize) -> Result<CertificateOutcome, CertificateError> {
    if !q_floor.is_positive() || *q_floor >= Rat::one() {
        return Err(CertificateError::BadFloor);
    }
    let lc = is_strictly_log_concave(a);
    if let Some(index) = lc.failing_index {
        return Ok(CertificateOutcome::NotLogConcave { index });
    }
    let cls = if uniform_sign(a) { QClass::N } else { QClass::R };
    if a.iter().all(|x| x.is_zero()) || a.len() <= 1 {
        let q = QParam::one();
        let poly = q_poly(a, &q);
        let iso = if poly.is_zero() { None } else { Some(isolate_real_roots(&poly, Some(a.len().saturating_sub(1))).expect("nonzero")) };
        return Ok(CertificateOutcome::Certified(QCertificate { q, poly, iso, cls }));
    }
    let mut probes = Vec::new();
    let one = QParam::one();
    let ok_one = probe(a, &one, cls);
    probes.push(("1".to_string(), ok_one));
    let (mut lo, mut hi) = if ok_one {
        (Rat::one(), Rat::one())
    } else {
        let mut hi = Rat::one();
        let mut found = None;
        let half = rat(1, 2);
        let mut q = half.clone();
        while q >= *q_floor {
            let ok = probe(a, &QParam::new(q.clone()).expect("in range"), cls);
            probes.push((q.to_string(), ok));
            if ok {
                found = Some(q.clone());
                break;
            }
            hi = q.clone();
            q *= &half;
        }
        match found {
            None => return Ok(CertificateOutcome::FloorReached(SearchDiagnostics { probes, floor: q_floor.to_string() })),
            Some(q) => (q, hi),
        }
    };
    for _ in 0..depth {
        if lo == hi {
            break;
        }
        let quarter = (&hi - &lo) / Rat::from_integer(4.into());
        let mid = simplest_between(&(&lo + &quarter), &(&hi - &quarter));
        if probe(a, &QParam::new(mid.clone()).expect("in range"), cls) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let q = QParam::new(lo).expect("in range");
    let poly = q_poly(a, &q);
    let n = a.len() - 1;
    let v = class_membership(&poly, n, &q, cls);
    if !v.member || !v.route_agreement {
        return Err(CertificateError::Reverification(q.to_string()));
    }
    let iso = Some(isolate_real_roots(&poly, Some(n)).expect("nonzero"));
    Ok(CertificateOutcome::Certified(QCertificate { q, poly, iso, cls }))
}

/// Leading-order positions of the zeros of the q-polynomial as `q -> 0`:
/// `z_m ~ -q^{-m} a_m / a_{m+1}`, and a symmetric pair
/// `±q^{-m-1/2} sqrt(-a_m / a_{m+2})` where `a_{m+1}` vanishes.
pub fn small_q_prediction(a: &[Rat], q: &Rat) -> Vec<f64> {
    let mut out = Vec::new();
    let Some((l, last)) = support(a) else { return out };
    let qf = q.to_f64().unwrap_or(0.0);
    let mut m = l;
    while m < last {
        if !a[m + 1].is_zero() {
            let v = -(rat_pow(q, -(m as i64)) * &a[m] / &a[m + 1]);
            out.push(v.to_f64().unwrap_or(f64::NAN));
            m += 1;
        } else {
            let ratio = (-(&a[m] / &a[m + 2])).to_f64().unwrap_or(f64::NAN);
            let mag = qf.powf(-(m as f64) - 0.5) * ratio.sqrt();
            out.push(-mag);
            out.push(mag);
            m += 2;
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HalfPlaneVerdict {
    OneHalfPlane { upper: bool },
    NotOneHalfPlane,
    Indeterminate,
    NumericFailure,
}

/// Relative tolerance on imaginary parts.
pub const HB_TOLERANCE: f64 = 1e-9;

/// The complex companion `F(z) + i z F(qz)` of the q-polynomial `F` of `a`.
pub fn hermite_biehler_poly(a: &[Rat], q: &QParam) -> CPoly {
    let f = q_poly(a, q);
    let g = f.compose_scale(q.get()).shift_up(1);
    CPoly::from_parts(&f, &g)
}

/// Numeric check that every nonzero root of `F(z) + i z F(qz)` lies in one
/// open half-plane. Advisory only.
pub fn hermite_biehler_check(a: &[Rat], q: &QParam) -> HalfPlaneVerdict {
    let f = q_poly(a, q);
    if f.is_zero() {
        return HalfPlaneVerdict::Indeterminate;
    }
    let g = f.compose_scale(q.get());
    // A real nonzero root of the companion is a common root of F and F(qz).
    let common = f.gcd(&g).strip_origin();
    if common.degree() >= 1 && crate::realroots::real_root_count(&common) > 0 {
        return HalfPlaneVerdict::NotOneHalfPlane;
    }
    let p = hermite_biehler_poly(a, q);
    let skip = p.coeffs().iter().position(|c| !c.is_zero()).unwrap_or(0);
    let coeffs: Vec<ExtC> = p.coeffs()[skip..].iter().map(|c| ExtC::from_gauss(&c.re, &c.im)).collect();
    if coeffs.len() <= 1 {
        return HalfPlaneVerdict::Indeterminate;
    }
    let Some(roots) = aberth(&coeffs) else { return HalfPlaneVerdict::NumericFailure };
    let mut sign = 0;
    for z in roots {
        if z.im.abs() <= HB_TOLERANCE * z.norm() {
            return HalfPlaneVerdict::Indeterminate;
        }
        let s = if z.im > 0.0 { 1 } else { -1 };
        if sign == 0 {
            sign = s;
        } else if sign != s {
            return HalfPlaneVerdict::NotOneHalfPlane;
        }
    }
    HalfPlaneVerdict::OneHalfPlane { upper: sign > 0 }
}

/// Complex number `m * 2^e` with `|m|` kept near 1, so that coefficients and
/// values spanning hundreds of binary orders of magnitude stay representable.
#[derive(Debug, Clone, Copy)]
struct ExtC {
    m: Complex64,
    e: i64,
}

impl ExtC {
    const ZERO: ExtC = ExtC { m: Complex64::new(0.0, 0.0), e: 0 };

    fn norm(mut self) -> Self {
        let a = self.m.re.abs().max(self.m.im.abs());
        if a == 0.0 || !a.is_finite() {
            return ExtC { m: self.m, e: 0 };
        }
        let shift = a.log2().floor() as i64;
        self.m = self.m * 2f64.powi(-shift as i32);
        self.e += shift;
        self
    }

    fn from_rat(r: &Rat) -> (f64, i64) {
        if r.is_zero() {
            return (0.0, 0);
        }
        let nb = r.numer().bits() as i64;
        let db = r.denom().bits() as i64;
        let shift = nb - db;
        // r * 2^-shift has magnitude in (1/2, 2); evaluate it exactly scaled.
        let scaled = if shift >= 0 {
            r / Rat::from_integer(num_bigint::BigInt::one() << shift as usize)
        } else {
            r * Rat::from_integer(num_bigint::BigInt::one() << (-shift) as usize)
        };
        (scaled.to_f64().unwrap_or(0.0), shift)
    }

    fn from_gauss(re: &Rat, im: &Rat) -> Self {
        let (a, ea) = Self::from_rat(re);
        let (b, eb) = Self::from_rat(im);
        let e = if a == 0.0 { eb } else if b == 0.0 { ea } else { ea.max(eb) };
        let m = Complex64::new(a * 2f64.powi((ea - e).clamp(-1000, 0) as i32), b * 2f64.powi((eb - e).clamp(-1000, 0) as i32));
        ExtC { m, e }.norm()
    }

    fn from_c64(z: Complex64) -> Self {
        ExtC { m: z, e: 0 }.norm()
    }

    fn is_zero(&self) -> bool {
        self.m.re == 0.0 && self.m.im == 0.0
    }

    fn mul(self, o: ExtC) -> ExtC {
        ExtC { m: self.m * o.m, e: self.e + o.e }.norm()
    }

    fn add(self, o: ExtC) -> ExtC {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let e = self.e.max(o.e);
        let scale = |x: ExtC| x.m * 2f64.powi((x.e - e).max(-1100) as i32);
        ExtC { m: scale(self) + scale(o), e }.norm()
    }

    /// `self / o` as an ordinary complex number (caller guarantees range).
    fn div_c64(self, o: ExtC) -> Complex64 {
        let r = self.m / o.m;
        r * 2f64.powi((self.e - o.e).clamp(-1100, 1100) as i32)
    }
}

/// Aberth iteration on a polynomial with extended-range coefficients; the
/// constant term must be nonzero.
fn aberth(coeffs: &[ExtC]) -> Option<Vec<Complex64>> {
    let deg = coeffs.len() - 1;
    let mut z = newton_polygon_start(coeffs);
    let deriv: Vec<ExtC> = (1..=deg)
        .map(|k| coeffs[k].mul(ExtC::from_c64(Complex64::new(k as f64, 0.0))))
        .collect();
    let eval = |c: &[ExtC], x: Complex64| -> ExtC {
        let xe = ExtC::from_c64(x);
        let mut acc = ExtC::ZERO;
        for ck in c.iter().rev() {
            acc = acc.mul(xe).add(*ck);
        }
        acc
    };
    for _ in 0..800 {
        let mut max_rel = 0.0f64;
        for i in 0..deg {
            let p = eval(coeffs, z[i]);
            if p.is_zero() {
                continue;
            }
            let dp = eval(&deriv, z[i]);
            let ratio = if dp.is_zero() { Complex64::new(1e-3, 0.0) * z[i].norm().max(1.0) } else { p.div_c64(dp) };
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..deg {
                if j != i {
                    s += (z[i] - z[j]).inv();
                }
            }
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if !w.re.is_finite() || !w.im.is_finite() {
                return None;
            }
            z[i] -= w;
            max_rel = max_rel.max(w.norm() / z[i].norm().max(f64::MIN_POSITIVE));
        }
        if max_rel < 1e-13 {
            break;
        }
    }
    validate(coeffs, &deriv, &z, eval).then_some(z)
}

/// Each root's Newton correction must be tiny relative to the root.
fn validate(coeffs: &[ExtC], deriv: &[ExtC], z: &[Complex64], eval: impl Fn(&[ExtC], Complex64) -> ExtC) -> bool {
    z.iter().all(|&x| {
        let p = eval(coeffs, x);
        if p.is_zero() {
            return true;
        }
        let dp = eval(deriv, x);
        !dp.is_zero() && p.div_c64(dp).norm() <= 1e-10 * x.norm()
    })
}

/// Initial guesses on circles whose radii come from the upper convex hull of
/// `(k, log2 |c_k|)`.
fn newton_polygon_start(coeffs: &[ExtC]) -> Vec<Complex64> {
    let pts: Vec<(usize, f64)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k, c.m.norm().log2() + c.e as f64))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 as f64 - a.0 as f64) * (p.1 - a.1) - (b.1 - a.1) * (p.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut out = Vec::new();
    let mut offset = 0.4;
    for w in hull.windows(2) {
        let (i, li) = w[0];
        let (j, lj) = w[1];
        let cnt = j - i;
        let radius = 2f64.powf((li - lj) / cnt as f64);
        for t in 0..cnt {
            let ang = offset + std::f64::consts::TAU * t as f64 / cnt as f64;
            out.push(Complex64::from_polar(radius, ang));
        }
        offset += 0.7;
    }
    out
}

/// Rational `p/q` helper for sequences given as integer pairs.
pub fn sequence(v: &[(i64, i64)]) -> Sequence {
    v.iter().map(|&(n, d)| rat(n, d)).collect()
}

//! Moments of the xi-function density
//!
//! `Φ(t) = Σ_{n≥1} (2n⁴π²e^{9t} − 3n²πe^{5t}) e^{−n²πe^{4t}}` and
//! `b̂_n = ∫₀^∞ t^{2n} Φ(t) dt`, evaluated in binary fixed point on `BigInt`
//! with 64 guard bits. Every value carries an absolute error bound made of
//! the quadrature resolution gap, the truncated tail of the integral, the
//! truncated tail of the series and a rounding allowance.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exec::{run_indexed, Execution};
use crate::polycore::{RPoly, Rat};
use crate::qcalc::{class_membership, q_binomial_row, QClass, QParam};

const GUARD_BITS: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RiemannError {
    #[error("quadrature resolutions disagree for n = {n} (relative gap {rel:e}); raise precision_bits")]
    ResolutionDisagreement { n: usize, rel: f64 },
    #[error("invalid argument: {0}")]
    BadArgument(String),
}

/// Binary fixed point: a `BigInt` `v` stands for `v / 2^p`.
#[derive(Debug, Clone, Copy)]
struct Fixed {
    p: usize,
}

impl Fixed {
    fn one(&self) -> BigInt {
        BigInt::one() << self.p
    }

    fn int(&self, k: i64) -> BigInt {
        BigInt::from(k) << self.p
    }

    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a * b) >> self.p
    }

    fn div(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a << self.p) / b
    }

    fn from_f64(&self, x: f64) -> BigInt {
        let (m, e) = frexp(x);
        let mant = BigInt::from((m * (1u64 << 53) as f64) as i64);
        let shift = self.p as i64 + e as i64 - 53;
        if shift >= 0 {
            mant << shift as usize
        } else {
            mant >> (-shift) as usize
        }
    }

    fn from_rat(&self, r: &Rat) -> BigInt {
        (r.numer() << self.p) / r.denom()
    }

    fn to_rat(&self, v: &BigInt) -> Rat {
        Rat::new(v.clone(), BigInt::one() << self.p)
    }

    fn to_f64(&self, v: &BigInt) -> f64 {
        let bits = v.bits() as usize;
        if bits <= 60 {
            return v.to_f64().unwrap_or(0.0) / 2f64.powi(self.p as i32);
        }
        let drop = bits - 60;
        let top = (v >> drop).to_f64().unwrap_or(0.0);
        top * 2f64.powi(drop as i32 - self.p as i32)
    }

    /// `Σ_j (±1)^j / ((2j+1) k^{2j+1})`: arctan (alternating) or artanh of `1/k`.
    fn atan_like(&self, k: i64, alternating: bool) -> BigInt {
        let k2 = BigInt::from(k * k);
        let mut power = self.one() / BigInt::from(k);
        let mut sum = BigInt::zero();
        let mut j = 0i64;
        while !power.is_zero() {
            let term = &power / BigInt::from(2 * j + 1);
            if alternating && j % 2 == 1 {
                sum -= term;
            } else {
                sum += term;
            }
            power /= &k2;
            j += 1;
        }
        sum
    }

    /// Machin's formula.
    fn pi(&self) -> BigInt {
        self.atan_like(5, true) * 16 - self.atan_like(239, true) * 4
    }

    fn ln2(&self) -> BigInt {
        self.atan_like(3, false) * 2
    }

    /// `e^x` by reduction modulo `ln 2`, scaling by `1/256`, Taylor series
    /// and eight squarings.
    fn exp(&self, x: &BigInt, ln2: &BigInt) -> BigInt {
        let k = num_integer::Integer::div_floor(x, ln2);
        let r = x - &k * ln2;
        let k = k.to_i64().expect("exponent in range");
        if k < -(self.p as i64) - 2 {
            return BigInt::zero();
        }
        let s = r >> 8;
        let mut term = self.one();
        let mut sum = self.one();
        let mut j = 1i64;
        while !term.is_zero() {
            term = self.mul(&term, &s) / BigInt::from(j);
            sum += &term;
            j += 1;
        }
        for _ in 0..8 {
            sum = self.mul(&sum, &sum);
        }
        if k >= 0 {
            sum << k as usize
        } else {
            sum >> (-k) as usize
        }
    }
}

fn frexp(x: f64) -> (f64, i32) {
    if x == 0.0 {
        return (0.0, 0);
    }
    let e = x.abs().log2().floor() as i32 + 1;
    (x / 2f64.powi(e), e)
}

/// A value with an absolute error bound, both in fixed point.
#[derive(Debug, Clone, PartialEq)]
pub struct HpValue {
    mid: BigInt,
    err: BigInt,
    p: usize,
}

impl HpValue {
    fn fx(&self) -> Fixed {
        Fixed { p: self.p }
    }

    pub fn lower(&self) -> Rat {
        self.fx().to_rat(&(&self.mid - &self.err))
    }

    pub fn upper(&self) -> Rat {
        self.fx().to_rat(&(&self.mid + &self.err))
    }

    pub fn midpoint(&self) -> Rat {
        self.fx().to_rat(&self.mid)
    }

    pub fn to_f64(&self) -> f64 {
        self.fx().to_f64(&self.mid)
    }

    pub fn error_f64(&self) -> f64 {
        self.fx().to_f64(&self.err)
    }

    pub fn decimal(&self, digits: usize) -> String {
        rat_to_scientific(&self.midpoint(), digits)
    }
}

impl Serialize for HpValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("HpValue", 2)?;
        st.serialize_field("value", &self.decimal(40))?;
        st.serialize_field("error", &rat_to_scientific(&self.fx().to_rat(&self.err), 3))?;
        st.end()
    }
}

/// Decimal scientific notation with `digits` significant digits, rounded
/// half up.
pub fn rat_to_scientific(x: &Rat, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let sign = if x.is_negative() { "-" } else { "" };
    let a = x.abs();
    let ten = BigInt::from(10);
    let approx = a.numer().bits() as f64 - a.denom().bits() as f64;
    let mut e10 = (approx * std::f64::consts::LOG10_2).floor() as i64 - 1;
    let digits = digits.max(1);
    loop {
        let shift = digits as i64 - 1 - e10;
        let scaled = if shift >= 0 {
            &a * Rat::from_integer(num_traits::pow(ten.clone(), shift as usize))
        } else {
            &a / Rat::from_integer(num_traits::pow(ten.clone(), (-shift) as usize))
        };
        let r = (scaled + Rat::new(BigInt::one(), BigInt::from(2))).floor().to_integer();
        let s = r.to_string();
        if s.len() > digits {
            e10 += 1;
            continue;
        }
        if s.len() < digits {
            e10 -= 1;
            continue;
        }
        let (head, tail) = s.split_at(1);
        return if tail.is_empty() { format!("{sign}{head}e{e10}") } else { format!("{sign}{head}.{tail}e{e10}") };
    }
}

/// Result of [`phi`].
#[derive(Debug, Clone, Serialize)]
pub struct PhiValue {
    pub value: HpValue,
    pub terms_used: usize,
    /// Majorant of the omitted series terms.
    pub tail_bound: f64,
}

/// `ln` of the majorant `2k⁴π²e^{9t}e^{−k²πe^{4t}}` of the `k`-th term.
fn log_term_majorant(k: usize, t: f64) -> f64 {
    let k = k as f64;
    std::f64::consts::LN_2 + 4.0 * k.ln() + 2.0 * std::f64::consts::PI.ln() + 9.0 * t
        - k * k * std::f64::consts::PI * (4.0 * t).exp()
}

/// `ln` of a bound on `Σ_{k > terms}`; consecutive majorants shrink by at
/// least a factor `16 e^{-3π} < 1/700` for `t ≥ 0`, so twice the first
/// omitted majorant dominates.
fn log_series_tail(terms: usize, t: f64) -> f64 {
    std::f64::consts::LN_2 + log_term_majorant(terms + 1, t)
}

struct Consts {
    fx: Fixed,
    pi: BigInt,
    ln2: BigInt,
}

impl Consts {
    fn new(p: usize) -> Self {
        let fx = Fixed { p };
        Consts { pi: fx.pi(), ln2: fx.ln2(), fx }
    }

    /// Partial sum of the series with `terms` terms at fixed-point `t`.
    fn phi_sum(&self, t: &BigInt, terms: usize) -> BigInt {
        let fx = &self.fx;
        let e4 = fx.exp(&(t * 4), &self.ln2);
        let e5 = fx.exp(&(t * 5), &self.ln2);
        let a = fx.mul(&self.pi, &e4);
        let mut sum = BigInt::zero();
        for k in 1..=terms as i64 {
            let k2 = k * k;
            let decay = fx.exp(&-(&a * k2), &self.ln2);
            if decay.is_zero() {
                break;
            }
            let bracket = fx.mul(&self.pi, &(&a * (2 * k2 * k2) - fx.int(3 * k2)));
            sum += fx.mul(&fx.mul(&e5, &bracket), &decay);
        }
        sum
    }
}

/// Terms needed at `t` so that the series tail stays below `2^-target_bits`
/// relative to `scale`.
fn terms_for(t: f64, target_bits: usize, log_scale: f64) -> usize {
    let goal = -(target_bits as f64) * std::f64::consts::LN_2 + log_scale;
    (1..).find(|&m| log_series_tail(m, t) < goal).expect("tail decays")
}

/// `Φ(t)` with at least `terms` terms; more are added until the tail bound
/// drops below `2^{-precision_bits}·|sum|`.
pub fn phi(t: &Rat, terms: usize, precision_bits: usize) -> Result<PhiValue, RiemannError> {
    if t.is_negative() {
        return Err(RiemannError::BadArgument("t must be nonnegative".into()));
    }
    let c = Consts::new(precision_bits + GUARD_BITS);
    let tv = c.fx.from_rat(t);
    let tf = c.fx.to_f64(&tv);
    let mut m = terms.max(1);
    loop {
        let sum = c.phi_sum(&tv, m);
        let mag = c.fx.to_f64(&sum).abs();
        let tail = log_series_tail(m, tf).exp();
        if mag > 0.0 && tail < 2f64.powi(-(precision_bits as i32)) * mag {
            let err = c.fx.from_f64(tail) + BigInt::from(16 * m as u64);
            return Ok(PhiValue { value: HpValue { mid: sum, err, p: c.fx.p }, terms_used: m, tail_bound: tail });
        }
        if mag == 0.0 && log_series_tail(m, tf) < -((c.fx.p) as f64) * std::f64::consts::LN_2 {
            return Ok(PhiValue { value: HpValue { mid: sum, err: BigInt::one(), p: c.fx.p }, terms_used: m, tail_bound: tail });
        }
        m += 1;
    }
}

fn phi_f64(t: f64) -> f64 {
    let pi = std::f64::consts::PI;
    (1..=8)
        .map(|k| {
            let k = k as f64;
            (2.0 * k.powi(4) * pi * pi * (9.0 * t).exp() - 3.0 * k * k * pi * (5.0 * t).exp())
                * (-(k * k) * pi * (4.0 * t).exp()).exp()
        })
        .sum()
}

/// `ln` of a bound on `∫_T^∞ t^{2n} Φ(t) dt`. The integrand is below
/// `g(t) = 4π² t^{2n} e^{9t} e^{−πe^{4t}}` (series majorant, doubled), and
/// `g` decays at rate at least `4πe^{4T} − 9 − 2n/T` past `T`.
fn log_integral_tail(n: usize, t: f64) -> f64 {
    let pi = std::f64::consts::PI;
    let rate = 4.0 * pi * (4.0 * t).exp() - 9.0 - 2.0 * n as f64 / t;
    assert!(rate > 1.0, "cutoff too small for the tail bound");
    (4.0 * pi * pi).ln() + 2.0 * n as f64 * t.ln() + 9.0 * t - pi * (4.0 * t).exp() - rate.ln()
}

/// Crude `f64` moments on `[0, 3]`, used only to scale tolerances.
fn rough_moments(n_max: usize) -> Vec<f64> {
    let steps = 6000;
    let h = 3.0 / steps as f64;
    let mut out = vec![0.0; n_max + 1];
    for i in 0..=steps {
        let t = i as f64 * h;
        let w = if i == 0 || i == steps { 0.5 } else { 1.0 } * h;
        let f = phi_f64(t);
        for (n, o) in out.iter_mut().enumerate() {
            *o += w * t.powi(2 * n as i32) * f;
        }
    }
    out
}

/// Cutoff on a `1/64` grid with the integral tail below `2^{-bits-16}` of
/// every rough moment.
fn choose_cutoff(n_max: usize, bits: usize, rough: &[f64]) -> f64 {
    let goal = -((bits + 16) as f64) * std::f64::consts::LN_2;
    let mut t: f64 = 0.5;
    loop {
        let ok = (0..=n_max).all(|n| {
            let rate = 4.0 * std::f64::consts::PI * (4.0 * t).exp() - 9.0 - 2.0 * n as f64 / t;
            rate > 1.0 && log_integral_tail(n, t) - rough[n].ln() < goal
        });
        if ok {
            return t;
        }
        t += 1.0 / 64.0;
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration from
/// the classical cosine guesses.
fn gauss_legendre(fx: &Fixed, m: usize) -> Vec<(BigInt, BigInt)> {
    let eval = |x: &BigInt| -> (BigInt, BigInt) {
        let mut p0 = fx.one();
        let mut p1 = x.clone();
        for j in 2..=m as i64 {
            let p2 = (fx.mul(x, &p1) * (2 * j - 1) - &p0 * (j - 1)) / BigInt::from(j);
            p0 = p1;
            p1 = p2;
        }
        // P_m and P_{m-1}
        (p1, p0)
    };
    let deriv = |x: &BigInt, pm: &BigInt, pm1: &BigInt| -> BigInt {
        let num = (fx.mul(x, pm) - pm1) * m as i64;
        let den = fx.mul(x, x) - fx.one();
        fx.div(&num, &den)
    };
    let tol = BigInt::one() << (GUARD_BITS / 2);
    (1..=m)
        .map(|i| {
            let guess = (std::f64::consts::PI * (i as f64 - 0.25) / (m as f64 + 0.5)).cos();
            let mut x = fx.from_f64(guess);
            for _ in 0..100 {
                let (pm, pm1) = eval(&x);
                let d = deriv(&x, &pm, &pm1);
                let step = fx.div(&pm, &d);
                x -= &step;
                if step.abs() < tol {
                    break;
                }
            }
            let (pm, pm1) = eval(&x);
            let d = deriv(&x, &pm, &pm1);
            let den = fx.mul(&(fx.one() - fx.mul(&x, &x)), &fx.mul(&d, &d));
            (x.clone(), fx.div(&fx.int(2), &den))
        })
        .collect()
}

/// Fixed-point values of `b̂_0..b̂_N` with error bounds.
#[derive(Debug, Clone, Serialize)]
pub struct XiCoeffs {
    pub values: Vec<HpValue>,
    pub precision_bits: usize,
    /// Largest number of series terms used at any node.
    pub series_terms: usize,
    pub t_cutoff: f64,
    pub panels: (usize, usize),
    pub nodes_per_panel: usize,
    /// `|Q_h − Q_{h/2}| / |Q_{h/2}|` per moment.
    pub resolution_gap: Vec<f64>,
}

struct PanelSums {
    sums: Vec<BigInt>,
    terms: usize,
}

fn integrate(c: &Consts, n_max: usize, cutoff: &BigInt, panels: usize, rule: &[(BigInt, BigInt)], exec: Execution) -> PanelSums {
    let fx = &c.fx;
    let width = cutoff / BigInt::from(panels);
    let half = &width >> 1;
    let target = fx.p;
    let parts = run_indexed(panels, exec, |j| {
        let a = &width * BigInt::from(j);
        let centre = &a + &half;
        let mut sums = vec![BigInt::zero(); n_max + 1];
        let mut terms = 0;
        for (x, w) in rule {
            let t = &centre + fx.mul(&half, x);
            let tf = fx.to_f64(&t);
            let m = terms_for(tf, target, 0.0);
            terms = terms.max(m);
            let f = fx.mul(&c.phi_sum(&t, m), &fx.mul(&half, w));
            let t2 = fx.mul(&t, &t);
            let mut acc = f;
            for s in sums.iter_mut() {
                *s += &acc;
                acc = fx.mul(&acc, &t2);
            }
        }
        PanelSums { sums, terms }
    });
    let mut total = PanelSums { sums: vec![BigInt::zero(); n_max + 1], terms: 0 };
    for p in parts {
        for (s, v) in total.sums.iter_mut().zip(p.sums) {
            *s += v;
        }
        total.terms = total.terms.max(p.terms);
    }
    total
}

/// `b̂_0..b̂_N` at two resolutions (`h` and `h/2`); the finer one is reported.
pub fn xi_coeffs(n_max: usize, precision_bits: usize, exec: Execution) -> Result<XiCoeffs, RiemannError> {
    if precision_bits < 16 {
        return Err(RiemannError::BadArgument("precision_bits must be at least 16".into()));
    }
    let c = Consts::new(precision_bits + GUARD_BITS);
    let fx = c.fx;
    let rough = rough_moments(n_max);
    let cutoff_f = choose_cutoff(n_max, precision_bits, &rough);
    let cutoff = fx.from_rat(&Rat::new(BigInt::from((cutoff_f * 64.0).round() as i64), BigInt::from(64)));
    let nodes = precision_bits / 4 + 12;
    let rule = gauss_legendre(&fx, nodes);
    let coarse_panels = 8;
    let coarse = integrate(&c, n_max, &cutoff, coarse_panels, &rule, exec);
    let fine = integrate(&c, n_max, &cutoff, 2 * coarse_panels, &rule, exec);
    let evaluations = (3 * coarse_panels * nodes) as u64;
    let mut values = Vec::with_capacity(n_max + 1);
    let mut gaps = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let (qh, qh2) = (&coarse.sums[n], &fine.sums[n]);
        let gap = (qh - qh2).abs();
        let rel = fx.to_f64(&gap) / fx.to_f64(qh2).abs();
        if !(rel <= 2f64.powi(-(precision_bits as i32) / 2)) {
            return Err(RiemannError::ResolutionDisagreement { n, rel });
        }
        let tail = fx.from_f64(log_integral_tail(n, cutoff_f).exp());
        let rounding = BigInt::from(64 * evaluations * (n as u64 + 8));
        let err = gap + tail + rounding + BigInt::one();
        values.push(HpValue { mid: qh2.clone(), err, p: fx.p });
        gaps.push(rel);
    }
    Ok(XiCoeffs {
        values,
        precision_bits,
        series_terms: coarse.terms.max(fine.terms),
        t_cutoff: cutoff_f,
        panels: (coarse_panels, 2 * coarse_panels),
        nodes_per_panel: nodes,
        resolution_gap: gaps,
    })
}

/// A single moment `b̂_n`.
pub fn xi_moment(n: usize, precision_bits: usize) -> Result<HpValue, RiemannError> {
    Ok(xi_coeffs(n, precision_bits, Execution::default())?.values.swap_remove(n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InequalityVerdict {
    Holds,
    Fails,
    InsufficientPrecision,
}

#[derive(Debug, Clone, Serialize)]
pub struct LcEntry {
    pub index: usize,
    pub verdict: InequalityVerdict,
    /// `f_k² / (f_{k−1} f_{k+1})` at the midpoints.
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExploratoryEntry {
    pub q: QParam,
    /// "member", "non-member" or "undecided" across the enclosure corners.
    pub verdict: String,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct NecessaryConditionReport {
    pub n_max: usize,
    pub precision_bits: usize,
    pub moments: XiCoeffs,
    /// `f_n = n!·b̂_n/(2n)!`.
    pub normalized: Vec<HpValue>,
    pub all_positive: bool,
    pub log_concavity: Vec<LcEntry>,
    /// Strict log-concavity certified at every index and every `f_n > 0`.
    pub pass: bool,
    pub exploratory: Vec<ExploratoryEntry>,
}

pub fn default_q_list() -> Vec<QParam> {
    vec![QParam::ratio(1, 2), QParam::ratio(1, 4), QParam::ratio(1, 8)]
}

fn factorial(n: usize) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn necessary_condition_report(
    n_max: usize,
    q_list: &[QParam],
    precision_bits: usize,
    exec: Execution,
) -> Result<NecessaryConditionReport, RiemannError> {
    if n_max < 2 {
        return Err(RiemannError::BadArgument("N must be at least 2".into()));
    }
    let moments = xi_coeffs(n_max, precision_bits, exec)?;
    let normalized: Vec<HpValue> = moments
        .values
        .iter()
        .enumerate()
        .map(|(n, b)| {
            let (num, den) = (factorial(n), factorial(2 * n));
            // Round outward: the error grows by one unit for the division.
            HpValue { mid: &b.mid * &num / &den, err: &b.err * &num / &den + BigInt::one(), p: b.p }
        })
        .collect();
    let all_positive = normalized.iter().all(|f| f.lower().is_positive());
    let log_concavity: Vec<LcEntry> = (1..n_max)
        .map(|k| {
            let (a, b, c) = (&normalized[k - 1], &normalized[k], &normalized[k + 1]);
            let verdict = if !all_positive {
                InequalityVerdict::InsufficientPrecision
            } else if b.lower() * b.lower() > a.upper() * c.upper() {
                InequalityVerdict::Holds
            } else if b.upper() * b.upper() <= a.lower() * c.lower() {
                InequalityVerdict::Fails
            } else {
                InequalityVerdict::InsufficientPrecision
            };
            let ratio = b.to_f64() * b.to_f64() / (a.to_f64() * c.to_f64());
            LcEntry { index: k, verdict, ratio }
        })
        .collect();
    let pass = all_positive && log_concavity.iter().all(|e| e.verdict == InequalityVerdict::Holds);
    let exploratory = q_list.iter().map(|q| explore(&normalized, n_max, q)).collect();
    Ok(NecessaryConditionReport { n_max, precision_bits, moments, normalized, all_positive, log_concavity, pass, exploratory })
}

/// Membership of `Σ C_k^N(q) f_k z^k` in `N_N(q)` at the midpoints and at
/// the all-lower and all-upper corners of the enclosures.
fn explore(f: &[HpValue], n: usize, q: &QParam) -> ExploratoryEntry {
    if q.is_zero() {
        return ExploratoryEntry { q: q.clone(), verdict: "undecided".into(), detail: "q = 0 is outside (0, 1]".into() };
    }
    let row = q_binomial_row(n, q);
    let build = |pick: &dyn Fn(&HpValue) -> Rat| RPoly::new(row.iter().zip(f).map(|(c, v)| c * pick(v)).collect());
    let corners = [build(&|v| v.midpoint()), build(&|v| v.lower()), build(&|v| v.upper())];
    let results: Vec<_> = corners.iter().map(|p| class_membership(p, n, q, QClass::N)).collect();
    let verdicts: Vec<bool> = results.iter().map(|v| v.member).collect();
    let mid = &results[0];
    let verdict = if verdicts.iter().all(|&v| v) {
        "member"
    } else if verdicts.iter().all(|&v| !v) {
        "non-member"
    } else {
        "undecided"
    };
    let detail = match &mid.witness {
        Some(w) => format!("midpoint witness: {w:?}"),
        None => "all zeros nonpositive and q-separated at the midpoints".to_string(),
    };
    ExploratoryEntry { q: q.clone(), verdict: verdict.into(), detail }
}

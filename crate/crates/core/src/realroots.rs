//! Certified isolation of real roots for rational polynomials.
//!
//! Everything here runs on primitive integer coefficient vectors: a rational
//! polynomial is rescaled by a positive factor, which leaves every sign
//! condition intact. Descartes' rule of signs on Taylor-shifted halves counts
//! and isolates the distinct roots (Sturm chains remain available for counts
//! on arbitrary intervals), and Yun's decomposition supplies multiplicities.
//! A root that is rational always comes back as an exact point.


use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::polycore::{simplest_between, Rat, RPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("the zero polynomial has no isolated roots")]
    ZeroPolynomial,
    #[error("endpoint {0} is a root; shift it by a small rational and retry")]
    EndpointIsRoot(String),
    #[error("empty interval: left endpoint must be below right endpoint")]
    EmptyInterval,
}

/// Endpoint of a counting interval.
#[derive(Debug, Clone, PartialEq)]
pub enum Bound {
    NegInf,
    Finite(Rat),
    PosInf,
}

/// Primitive integer polynomial, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly(pub Vec<BigInt>);

impl IntPoly {
    pub fn from_rpoly(p: &RPoly) -> Self {
        IntPoly(p.primitive_int())
    }

    pub fn degree(&self) -> isize {
        self.0.len() as isize - 1
    }

    /// Sign of `P(x)` for rational `x`, computed as the sign of the homogenised
    /// value `sum c_k p^k d^(deg-k)` with `x = p/d`, `d > 0`.
    pub fn sign_at(&self, x: &Rat) -> i32 {
        if self.0.is_empty() {
            return 0;
        }
        let p = x.numer();
        let d = x.denom();
        let mut acc = self.0.last().unwrap().clone();
        let mut dp = BigInt::one();
        for c in self.0.iter().rev().skip(1) {
            dp *= d;
            acc = acc * p + c * &dp;
        }
        sgn(&acc)
    }

    fn sign_at_pos_inf(&self) -> i32 {
        self.0.last().map(sgn).unwrap_or(0)
    }

    fn sign_at_neg_inf(&self) -> i32 {
        let s = self.sign_at_pos_inf();
        if self.degree() % 2 == 1 {
            -s
        } else {
            s
        }
    }

    fn sign_at_bound(&self, b: &Bound) -> i32 {
        match b {
            Bound::NegInf => self.sign_at_neg_inf(),
            Bound::PosInf => self.sign_at_pos_inf(),
            Bound::Finite(x) => self.sign_at(x),
        }
    }

    fn derivative(&self) -> Self {
        IntPoly(self.0.iter().enumerate().skip(1).map(|(k, c)| c * BigInt::from(k)).collect())
    }

    fn make_primitive(mut v: Vec<BigInt>) -> Self {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        let mut g = BigInt::zero();
        for c in &v {
            g = g.gcd(c);
        }
        if !g.is_zero() && !g.is_one() {
            for c in v.iter_mut() {
                *c = &*c / &g;
            }
        }
        IntPoly(v)
    }

    /// Remainder of `self` by `d`, scaled by a positive integer and made
    /// primitive. Positive scaling keeps the Sturm sign pattern intact.
    fn pos_prem(&self, d: &IntPoly) -> IntPoly {
        let dl = d.0.last().expect("nonzero divisor").clone();
        let dl_sgn = BigInt::from(sgn(&dl));
        let e = d.0.len() - 1;
        let mut r = self.0.clone();
        while r.len() > e && !r.is_empty() {
            let m = r.len() - 1;
            let lead = r[m].clone();
            if lead.is_zero() {
                r.pop();
                continue;
            }
            let g = lead.gcd(&dl);
            let fa = dl.abs() / &g;
            let fb = &lead * &dl_sgn / &g;
            if !fa.is_one() {
                for c in r.iter_mut() {
                    *c *= &fa;
                }
            }
            for (j, dc) in d.0.iter().enumerate() {
                r[m - e + j] -= &fb * dc;
            }
            r.pop();
        }
        IntPoly::make_primitive(r)
    }
}

fn sgn(x: &BigInt) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Sturm chain of a nonzero polynomial.
#[derive(Debug, Clone)]
pub struct SturmChain {
    seq: Vec<IntPoly>,
}

impl SturmChain {
    pub fn new(p: &IntPoly) -> Self {
        let mut seq = vec![p.clone()];
        if p.degree() >= 1 {
            seq.push(IntPoly::make_primitive(p.derivative().0));
            loop {
                let n = seq.len();
                let r = seq[n - 2].pos_prem(&seq[n - 1]);
                if r.0.is_empty() {
                    break;
                }
                seq.push(IntPoly(r.0.into_iter().map(|c| -c).collect()));
            }
        }
        SturmChain { seq }
    }

    fn variations(&self, b: &Bound) -> usize {
        let mut last = 0;
        let mut count = 0;
        for s in &self.seq {
            let v = s.sign_at_bound(b);
            if v != 0 {
                if last != 0 && v != last {
                    count += 1;
                }
                last = v;
            }
        }
        count
    }

    /// Distinct roots in the open interval `(a, b)`; endpoints must not be
    /// roots of the first chain member.
    pub fn count(&self, a: &Bound, b: &Bound) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }
}

/// `sturm_count` from the public surface: distinct real roots of `p` in `(a, b)`.
pub fn sturm_count(p: &RPoly, a: &Bound, b: &Bound) -> Result<usize, RootError> {
    if p.is_zero() {
        return Err(RootError::ZeroPolynomial);
    }
    match (a, b) {
        (Bound::Finite(x), Bound::Finite(y)) if x >= y => return Err(RootError::EmptyInterval),
        (Bound::PosInf, _) | (_, Bound::NegInf) => return Err(RootError::EmptyInterval),
        _ => {}
    }
    let ip = IntPoly::from_rpoly(p);
    for e in [a, b] {
        if let Bound::Finite(x) = e {
            if ip.sign_at(x) == 0 {
                return Err(RootError::EndpointIsRoot(x.to_string()));
            }
        }
    }
    let sf = IntPoly::from_rpoly(&p.squarefree());
    Ok(SturmChain::new(&sf).count(a, b))
}

/// Location of one distinct real root.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum RootLoc {
    /// The root is this rational number.
    Exact(#[serde(serialize_with = "ser_rat")] Rat),
    /// The root is the unique root of the square-free part in the open interval.
    Open(#[serde(serialize_with = "ser_rat")] Rat, #[serde(serialize_with = "ser_rat")] Rat),
}

pub(crate) fn ser_rat<S: serde::Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl RootLoc {
    pub fn lower(&self) -> &Rat {
        match self {
            RootLoc::Exact(x) => x,
            RootLoc::Open(a, _) => a,
        }
    }

    pub fn upper(&self) -> &Rat {
        match self {
            RootLoc::Exact(x) => x,
            RootLoc::Open(_, b) => b,
        }
    }

    pub fn width(&self) -> Rat {
        self.upper() - self.lower()
    }

    pub fn midpoint(&self) -> Rat {
        (self.lower() + self.upper()) / Rat::from_integer(BigInt::from(2))
    }

    /// Sign of the root itself (isolating intervals never straddle the origin).
    pub fn sign(&self) -> i32 {
        crate::polycore::sign_of(&self.midpoint())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsolatedRoot {
    pub loc: RootLoc,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RootIsolation {
    /// Distinct real roots in ascending order.
    pub roots: Vec<IsolatedRoot>,
    pub origin_order: usize,
    /// `n - deg P` when an ambient degree `n` was supplied.
    pub infinity_order: Option<usize>,
    pub degree: usize,
    /// Square-free part with the origin factor removed; drives refinement.
    #[serde(skip)]
    core: IntPoly,
}

impl RootIsolation {
    pub fn real_root_count(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    pub fn is_real_rooted(&self) -> bool {
        self.real_root_count() == self.degree
    }

    /// Square-free part without the origin factor, in primitive integer form.
    pub fn core(&self) -> &IntPoly {
        &self.core
    }

    /// Halve the isolating interval of root `i` once. An exact hit turns the
    /// location into an exact point.
    pub fn bisect_root(&mut self, i: usize) {
        let (a, b) = match &self.roots[i].loc {
            RootLoc::Exact(_) => return,
            RootLoc::Open(a, b) => (a.clone(), b.clone()),
        };
        let m = (&a + &b) / Rat::from_integer(BigInt::from(2));
        let sm = self.core.sign_at(&m);
        if sm == 0 {
            self.roots[i].loc = RootLoc::Exact(m);
            return;
        }
        let sa = self.core.sign_at(&a);
        self.roots[i].loc = if sa == sm { RootLoc::Open(m, b) } else { RootLoc::Open(a, m) };
    }

    pub fn refine_root(&mut self, i: usize, eps: &Rat) {
        while self.roots[i].loc.width() >= *eps {
            self.bisect_root(i);
        }
    }

    /// A rational strictly between roots `i` and `i + 1` that is not a root.
    pub fn separator(&mut self, i: usize) -> Rat {
        loop {
            let l = self.roots[i].loc.upper().clone();
            let r = self.roots[i + 1].loc.lower().clone();
            if l < r {
                return (l + r) / two();
            }
            let left_exact = matches!(self.roots[i].loc, RootLoc::Exact(_));
            let right_exact = matches!(self.roots[i + 1].loc, RootLoc::Exact(_));
            if !left_exact && !right_exact {
                return l;
            }
            if right_exact {
                self.bisect_root(i);
            } else {
                self.bisect_root(i + 1);
            }
        }
    }

    /// A rational below every real root.
    pub fn below_all(&self) -> Rat {
        match self.roots.first() {
            None => Rat::zero(),
            Some(r) => r.loc.lower() - Rat::one(),
        }
    }

    /// A rational above every real root.
    pub fn above_all(&self) -> Rat {
        match self.roots.last() {
            None => Rat::zero(),
            Some(r) => r.loc.upper() + Rat::one(),
        }
    }
}

fn two() -> Rat {
    Rat::from_integer(BigInt::from(2))
}

/// Power of two strictly above the Cauchy bound `1 + max |c_k / c_d|`.
fn cauchy_bound(p: &IntPoly) -> Rat {
    let lead = p.0.last().unwrap().abs();
    let mut m = Rat::zero();
    for c in &p.0[..p.0.len() - 1] {
        let r = Rat::new(c.abs(), lead.clone());
        if r > m {
            m = r;
        }
    }
    let bound = m + Rat::one();
    let mut b = Rat::one();
    while b <= bound {
        b *= two();
    }
    b
}

/// Isolating intervals for the positive roots of a square-free integer
/// polynomial with nonzero constant term, ascending. Descartes' rule on
/// dyadic subintervals of `(0, 2^k)`; endpoints are never roots.
fn descartes_isolate_positive(p: &[BigInt]) -> Vec<RootLoc> {
    let mut out = Vec::new();
    if p.len() <= 1 {
        return out;
    }
    let bound = cauchy_bound(&IntPoly(p.to_vec()));
    let k = bound.numer().bits() as usize - 1;
    let scaled: Vec<BigInt> = p.iter().enumerate().map(|(i, c)| c << (k * i)).collect();
    // Node: polynomial on (0, 1) standing for (c / 2^j, (c + 1) / 2^j) * 2^k.
    let to_rat = |c: BigInt, j: usize| Rat::new(c, BigInt::one() << j) * &bound;
    let mut stack = vec![(strip_twos(scaled), BigInt::zero(), 0usize)];
    while let Some((q, c, j)) = stack.pop() {
        if q.len() <= 1 {
            continue;
        }
        let mut t: Vec<BigInt> = q.iter().rev().cloned().collect();
        taylor_shift_one(&mut t);
        match sign_variations(&t) {
            0 => continue,
            1 => {
                out.push(RootLoc::Open(to_rat(c.clone(), j), to_rat(c + 1, j)));
                continue;
            }
            _ => {}
        }
        let d = q.len() - 1;
        let left: Vec<BigInt> = q.iter().enumerate().map(|(i, x)| x << (d - i)).collect();
        let mut right = left.clone();
        taylor_shift_one(&mut right);
        let c2 = &c << 1;
        if right[0].is_zero() {
            out.push(RootLoc::Exact(to_rat(&c2 + 1, j + 1)));
            right.remove(0);
        }
        stack.push((strip_twos(right), &c2 + 1, j + 1));
        stack.push((strip_twos(left), c2, j + 1));
    }
    let ip = IntPoly(p.to_vec());
    let dp = ip.derivative();
    let mut out: Vec<RootLoc> = out.into_iter().map(|loc| clear_endpoints(&ip, &dp, loc)).collect();
    out.sort_by(|x, y| x.lower().cmp(y.lower()));
    out
}

/// Shrink an interval holding exactly one simple root until neither
/// endpoint is a root. A vanishing endpoint takes the sign just inside it.
fn clear_endpoints(p: &IntPoly, dp: &IntPoly, loc: RootLoc) -> RootLoc {
    let RootLoc::Open(mut a, mut b) = loc else { return loc };
    loop {
        let (pa, pb) = (p.sign_at(&a), p.sign_at(&b));
        if pa != 0 && pb != 0 {
            return RootLoc::Open(a, b);
        }
        let inside_a = if pa == 0 { dp.sign_at(&a) } else { pa };
        let m = (&a + &b) / two();
        let pm = p.sign_at(&m);
        if pm == 0 {
            return RootLoc::Exact(m);
        }
        if pm != inside_a {
            b = m;
        } else {
            a = m;
        }
    }
}

/// Isolate all distinct real roots of `p` with multiplicities.
/// The rational root of integer polynomial `p` inside `(a, b)`, if the unique
/// root there is rational. A rational root `u/v` has `v | lead`, so after
/// narrowing the bracket the simplest fraction in it is the only candidate.
pub(crate) fn rational_in(p: &IntPoly, a: &Rat, b: &Rat) -> Option<Rat> {
    let lead = p.0.last()?.abs();
    let mut lo = a.clone();
    let mut hi = b.clone();
    let two = Rat::from_integer(BigInt::from(2));
    // A rational root u/v has v | lead; once the interval is narrower than
    // 1/(2 lead^2) it contains at most one fraction with such a denominator.
    let target = Rat::new(BigInt::one(), &lead * &lead * BigInt::from(2));
    let sa = p.sign_at(&lo);
    while &hi - &lo >= target {
        let m = (&lo + &hi) / &two;
        let sm = p.sign_at(&m);
        if sm == 0 {
            return Some(m);
        }
        if sm == sa {
            lo = m;
        } else {
            hi = m;
        }
    }
    let cand = simplest_between(&lo, &hi);
    (p.sign_at(&cand) == 0).then_some(cand)
}

const SIEVE_PRIMES: [u64; 16] = [101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179];

/// True when some prime `l` not dividing the leading coefficient leaves `p`
/// without roots mod `l`. A rational root `u/v` has `v | lead`, so it would
/// reduce to a root mod every such `l`.
pub(crate) fn provably_no_rational_root(p: &IntPoly) -> bool {
    let Some(lead) = p.0.last() else { return false };
    SIEVE_PRIMES.iter().any(|&l| {
        let m = BigInt::from(l);
        if lead.mod_floor(&m).is_zero() {
            return false;
        }
        let c: Vec<u64> = p.0.iter().map(|x| u64::try_from(x.mod_floor(&m)).expect("reduced")).collect();
        (0..l).all(|x| c.iter().rev().fold(0, |acc, &k| (acc * x + k) % l) != 0)
    })
}

/// Replace each open interval holding a rational root by that root. Found
/// roots are divided out so the modular filter keeps working on the rest.
fn snap_rational_roots(core: &IntPoly, locs: Vec<RootLoc>) -> Vec<RootLoc> {
    let mut rest = core.clone();
    let mut out = Vec::with_capacity(locs.len());
    for loc in locs {
        let RootLoc::Open(a, b) = &loc else {
            out.push(loc);
            continue;
        };
        if rest.degree() < 1 || provably_no_rational_root(&rest) {
            out.push(loc);
            continue;
        }
        match rational_in(&rest, a, b) {
            Some(r) => {
                let q = RPoly::new(rest.0.iter().cloned().map(Rat::from_integer).collect())
                    .div_rem(&RPoly::new(vec![-r.clone(), Rat::one()]))
                    .expect("nonzero divisor")
                    .0;
                rest = IntPoly::from_rpoly(&q);
                out.push(RootLoc::Exact(r));
            }
            None => out.push(loc),
        }
    }
    out
}

pub fn isolate_real_roots(p: &RPoly, ambient_n: Option<usize>) -> Result<RootIsolation, RootError> {
    if p.is_zero() {
        return Err(RootError::ZeroPolynomial);
    }
    let degree = p.degree() as usize;
    let origin_order = p.origin_order();
    let core = IntPoly::from_rpoly(&p.squarefree().strip_origin());
    let mut locs = Vec::new();
    if core.degree() >= 1 {
        let mirrored: Vec<BigInt> =
            core.0.iter().enumerate().map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() }).collect();
        for loc in descartes_isolate_positive(&mirrored) {
            locs.push(match loc {
                RootLoc::Exact(x) => RootLoc::Exact(-x),
                RootLoc::Open(a, b) => RootLoc::Open(-b, -a),
            });
        }
        locs.extend(descartes_isolate_positive(&core.0));
    }
    let mut locs = snap_rational_roots(&core, locs);
    if origin_order > 0 {
        locs.push(RootLoc::Exact(Rat::zero()));
    }
    locs.sort_by(|x, y| x.lower().cmp(y.lower()).then_with(|| x.upper().cmp(y.upper())));
    let factors = p.yun();
    let ifactors: Vec<IntPoly> = factors.iter().map(|f| IntPoly::from_rpoly(&f.strip_origin())).collect();
    let roots = locs
        .into_iter()
        .map(|loc| {
            let multiplicity = match &loc {
                RootLoc::Exact(x) if x.is_zero() => Some(origin_order - 1),
                RootLoc::Exact(x) => ifactors.iter().position(|f| f.sign_at(x) == 0),
                RootLoc::Open(a, b) => ifactors.iter().position(|f| f.sign_at(a) != f.sign_at(b)),
            }
            .map(|i| i + 1)
            .expect("every root of the square-free part lies on one Yun factor");
            IsolatedRoot { loc, multiplicity }
        })
        .collect();
    Ok(RootIsolation {
        roots,
        origin_order,
        infinity_order: ambient_n.map(|n| n.saturating_sub(degree)),
        degree,
        core,
    })
}

fn sign_variations(v: &[BigInt]) -> usize {
    let mut last = 0;
    let mut count = 0;
    for c in v {
        let s = sgn(c);
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// In place `p(x) -> p(x + 1)`.
fn taylor_shift_one(v: &mut [BigInt]) {
    let d = v.len();
    for i in 0..d {
        for j in (i..d.saturating_sub(1)).rev() {
            let next = v[j + 1].clone();
            v[j] += next;
        }
    }
}

fn strip_twos(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let tz = v.iter().filter_map(|c| c.trailing_zeros()).min().unwrap_or(0);
    if tz > 0 {
        for c in v.iter_mut() {
            *c >>= tz as usize;
        }
    }
    v
}

/// Distinct roots in `(0, 1)` of a square-free integer polynomial, by
/// Descartes' rule with bisection.
fn descartes_unit(q: Vec<BigInt>) -> usize {
    let mut total = 0;
    let mut stack = vec![q];
    while let Some(q) = stack.pop() {
        if q.len() <= 1 {
            continue;
        }
        let mut t: Vec<BigInt> = q.iter().rev().cloned().collect();
        taylor_shift_one(&mut t);
        match sign_variations(&t) {
            0 => continue,
            1 => {
                total += 1;
                continue;
            }
            _ => {}
        }
        let d = q.len() - 1;
        let left: Vec<BigInt> = q.iter().enumerate().map(|(i, c)| c << (d - i)).collect();
        let mut right = left.clone();
        taylor_shift_one(&mut right);
        if right[0].is_zero() {
            total += 1;
            right.remove(0);
        }
        stack.push(strip_twos(left));
        stack.push(strip_twos(right));
    }
    total
}

/// Distinct positive roots of a square-free integer polynomial.
fn positive_root_count(p: &[BigInt]) -> usize {
    let start = p.iter().position(|c| !c.is_zero()).unwrap_or(0);
    let p = &p[start..];
    if p.len() <= 1 {
        return 0;
    }
    let bound = cauchy_bound(&IntPoly(p.to_vec()));
    let k = bound.numer().bits() as usize - 1;
    let scaled: Vec<BigInt> = p.iter().enumerate().map(|(i, c)| c << (k * i)).collect();
    descartes_unit(strip_twos(scaled))
}

/// Distinct real roots of a square-free integer polynomial.
pub fn distinct_real_root_count(p: &IntPoly) -> usize {
    if p.degree() < 1 {
        return 0;
    }
    let at_origin = usize::from(p.0[0].is_zero());
    let mirrored: Vec<BigInt> = p.0.iter().enumerate().map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() }).collect();
    at_origin + positive_root_count(&p.0) + positive_root_count(&mirrored)
}

/// Number of real roots counted with multiplicity, from the Yun factors.
/// Cheaper than a full isolation.
pub fn real_root_count(p: &RPoly) -> usize {
    p.yun()
        .iter()
        .enumerate()
        .map(|(i, f)| (i + 1) * distinct_real_root_count(&IntPoly::from_rpoly(f)))
        .sum()
}

/// True when every root of `p` is real; the zero polynomial counts as real-rooted.
pub fn is_real_rooted(p: &RPoly) -> bool {
    p.is_zero() || real_root_count(p) == p.degree() as usize
}

/// True when `p` has a positive real root.
pub fn has_positive_root(p: &RPoly) -> bool {
    if p.is_zero() {
        return false;
    }
    let sf = IntPoly::from_rpoly(&p.squarefree().strip_origin());
    sf.degree() >= 1 && positive_root_count(&sf.0) > 0
}

/// True when `p` is real-rooted with no positive roots.
pub fn is_real_rooted_nonpositive(p: &RPoly) -> bool {
    if p.is_zero() {
        return true;
    }
    if !is_real_rooted(p) {
        return false;
    }
    !has_positive_root(p)
}

/// Narrow every isolating interval below `eps`.
pub fn refine(iso: &RootIsolation, eps: &Rat) -> RootIsolation {
    let mut out = iso.clone();
    for i in 0..out.roots.len() {
        out.refine_root(i, eps);
    }
    out
}

//! Dense univariate polynomials over exact fields.
//!
//! [`RPoly`] carries rational coefficients and [`CPoly`] carries Gaussian
//! rationals. Coefficients are stored lowest degree first and the vector is
//! always trimmed, so the zero polynomial is the empty vector with degree -1.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};
use thiserror::Error;

pub type Rat = BigRational;
pub type GaussRat = Complex<BigRational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("exact division failed: divisor does not divide dividend")]
    NotDivisible,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("degree {degree} exceeds ambient degree {n}")]
    DegreeExceeds { degree: isize, n: usize },
}

/// Coefficient field accepted by [`Poly`].
pub trait Field: Clone + PartialEq + fmt::Debug + Num + Neg<Output = Self> + Send + Sync + Sized {
    /// Optional specialised gcd; `None` falls back to Euclid over the field.
    fn fast_gcd(_a: &Poly<Self>, _b: &Poly<Self>) -> Option<Poly<Self>> {
        None
    }
}

impl Field for Rat {
    fn fast_gcd(a: &Poly<Self>, b: &Poly<Self>) -> Option<Poly<Self>> {
        Some(int_gcd(a, b))
    }
}

impl Field for GaussRat {}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<K> {
    coeffs: Vec<K>,
}

pub type RPoly = Poly<Rat>;
pub type CPoly = Poly<GaussRat>;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rint(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn gauss(re: Rat, im: Rat) -> GaussRat {
    Complex::new(re, im)
}

/// Exact power of a rational with a (possibly negative) integer exponent.
pub fn rat_pow(base: &Rat, exp: i64) -> Rat {
    if exp >= 0 {
        num_traits::pow(base.clone(), exp as usize)
    } else {
        num_traits::pow(base.recip(), (-exp) as usize)
    }
}

impl<K: Field> Poly<K> {
    pub fn new(mut coeffs: Vec<K>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![K::one()] }
    }

    pub fn constant(c: K) -> Self {
        Self::new(vec![c])
    }

    /// `c * z^k`.
    pub fn monomial(c: K, k: usize) -> Self {
        let mut v = vec![K::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// The polynomial `z`.
    pub fn z() -> Self {
        Self::monomial(K::one(), 1)
    }

    pub fn coeffs(&self) -> &[K] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<K> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> K {
        self.coeffs.get(k).cloned().unwrap_or_else(K::zero)
    }

    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lead(&self) -> Option<&K> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly { coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect() }
    }

    /// `z^k * self`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![K::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Poly { coeffs: v }
    }

    /// Number of vanishing low-order coefficients, i.e. the order of the zero at
    /// the origin. Zero for the zero polynomial.
    pub fn origin_order(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Drop the factor `z^m` where `m` is the origin order.
    pub fn strip_origin(&self) -> Self {
        let m = self.origin_order();
        Poly { coeffs: self.coeffs[m..].to_vec() }
    }

    /// Divide by `z^m`; the caller guarantees `m <= origin_order()`.
    pub(crate) fn strip_origin_by(&self, m: usize) -> Self {
        Poly { coeffs: self.coeffs[m.min(self.coeffs.len())..].to_vec() }
    }

    pub fn derivative(&self) -> Self {
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.clone() * from_usize::<K>(k))
            .collect();
        Self::new(v)
    }

    pub fn eval(&self, x: &K) -> K {
        let mut acc = K::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    /// `F(s z)`.
    pub fn compose_scale(&self, s: &K) -> Self {
        let mut p = K::one();
        let mut v = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            v.push(c.clone() * p.clone());
            p = p * s.clone();
        }
        Self::new(v)
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            None => Self::zero(),
            Some(l) => {
                let inv = K::one() / l.clone();
                self.scale(&inv)
            }
        }
    }

    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self), PolyError> {
        let dl = d.lead().ok_or(PolyError::DivisionByZero)?.clone();
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut q = vec![K::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = r[i + dd].clone() / dl.clone();
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[i + j] = r[i + j].clone() - c.clone() * dc.clone();
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        Ok((Self::new(q), Self::new(r)))
    }

    pub fn exact_div(&self, d: &Self) -> Result<Self, PolyError> {
        let (q, r) = self.div_rem(d)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(PolyError::NotDivisible)
        }
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        if let Some(g) = K::fast_gcd(self, other) {
            return g;
        }
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Square-free part, monic.
    pub fn squarefree(&self) -> Self {
        if self.is_constant() {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.exact_div(&g).expect("gcd divides").monic()
    }

    /// Yun's square-free decomposition: monic square-free, pairwise coprime
    /// `a_1, a_2, ...` with `self = c * prod a_i^i`. Entry `i-1` holds `a_i`.
    pub fn yun(&self) -> Vec<Self> {
        if self.is_constant() {
            return Vec::new();
        }
        let d = self.derivative();
        let g = self.gcd(&d);
        let mut b = self.exact_div(&g).unwrap();
        let mut c = d.exact_div(&g).unwrap();
        let mut out = Vec::new();
        loop {
            let bd = b.derivative();
            let dd = &c - &bd;
            if b.is_constant() {
                break;
            }
            let a = b.gcd(&dd);
            out.push(a.clone());
            b = b.exact_div(&a).unwrap();
            c = dd.exact_div(&a).unwrap();
        }
        while out.last().is_some_and(|p| p.is_constant()) {
            out.pop();
        }
        out
    }

    /// True when `self = c * other` for some nonzero scalar `c` (both nonzero),
    /// or both vanish.
    pub fn proportional(&self, other: &Self) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        if self.degree() != other.degree() {
            return false;
        }
        let c = self.lead().unwrap().clone() / other.lead().unwrap().clone();
        self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a.clone() == b.clone() * c.clone())
    }
}

fn from_usize<K: Field>(k: usize) -> K {
    let mut acc = K::zero();
    let mut unit = K::one();
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc + unit.clone();
        }
        unit = unit.clone() + unit;
        k >>= 1;
    }
    acc
}

impl<K: Field> Add for &Poly<K> {
    type Output = Poly<K>;
    fn add(self, rhs: &Poly<K>) -> Poly<K> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let v = (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        Poly::new(v)
    }
}

impl<K: Field> Sub for &Poly<K> {
    type Output = Poly<K>;
    fn sub(self, rhs: &Poly<K>) -> Poly<K> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let v = (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect();
        Poly::new(v)
    }
}

impl<K: Field> Mul for &Poly<K> {
    type Output = Poly<K>;
    fn mul(self, rhs: &Poly<K>) -> Poly<K> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![K::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(v)
    }
}

impl<K: Field> Neg for &Poly<K> {
    type Output = Poly<K>;
    fn neg(self) -> Poly<K> {
        Poly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl<K: Field> $tr for Poly<K> {
            type Output = Poly<K>;
            fn $m(self, rhs: Poly<K>) -> Poly<K> {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl<K: Field> Neg for Poly<K> {
    type Output = Poly<K>;
    fn neg(self) -> Poly<K> {
        -&self
    }
}

impl RPoly {
    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| rint(x)).collect())
    }

    /// `lead * prod (z - r)` over the given roots (repeated for multiplicity).
    pub fn from_roots(lead: Rat, roots: &[Rat]) -> Self {
        let mut p = Self::constant(lead);
        for r in roots {
            p = &p * &Self::new(vec![-r.clone(), Rat::one()]);
        }
        p
    }

    /// `F^{*n}(z) = z^n F(-1/z)`; coefficient `j` is `(-1)^{n-j} c_{n-j}`.
    pub fn reverse_n(&self, n: usize) -> Result<Self, PolyError> {
        if self.degree() > n as isize {
            return Err(PolyError::DegreeExceeds { degree: self.degree(), n });
        }
        let v = (0..=n)
            .map(|j| {
                let c = self.coeff(n - j);
                if (n - j) % 2 == 1 {
                    -c
                } else {
                    c
                }
            })
            .collect();
        Ok(Self::new(v))
    }

    /// Integer coefficient vector proportional to `self` by a positive factor,
    /// with unit content.
    pub fn primitive_int(&self) -> Vec<BigInt> {
        let mut l = BigInt::one();
        for c in &self.coeffs {
            l = l.lcm(c.denom());
        }
        let mut v: Vec<BigInt> = self.coeffs.iter().map(|c| (c * Rat::from_integer(l.clone())).to_integer()).collect();
        let mut g = BigInt::zero();
        for c in &v {
            g = g.gcd(c);
        }
        if !g.is_zero() && !g.is_one() {
            for c in v.iter_mut() {
                *c = &*c / &g;
            }
        }
        v
    }

    pub fn to_complex(&self) -> CPoly {
        CPoly::new(self.coeffs.iter().map(|c| gauss(c.clone(), Rat::zero())).collect())
    }

    pub fn sign_at(&self, x: &Rat) -> i32 {
        sign_of(&self.eval(x))
    }

    /// Coefficients as exact strings, lowest degree first.
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

const GCD_PRIMES: [u64; 3] = [4_611_686_018_427_387_847, 4_611_686_018_427_387_817, 2_305_843_009_213_693_951];

fn mod_p(c: &BigInt, p: u64) -> u64 {
    let r = c.mod_floor(&BigInt::from(p));
    r.iter_u64_digits().next().unwrap_or(0)
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut r, mut base, mut e) = (1u64, a, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    r
}

/// Degree of `gcd(a, b)` over `Z/p`; both leading coefficients nonzero mod `p`.
fn gcd_degree_mod(a: &[BigInt], b: &[BigInt], p: u64) -> usize {
    let trim = |v: &mut Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
    };
    let mut x: Vec<u64> = a.iter().map(|c| mod_p(c, p)).collect();
    let mut y: Vec<u64> = b.iter().map(|c| mod_p(c, p)).collect();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let inv = inv_mod(*y.last().unwrap(), p);
        let dy = y.len() - 1;
        while x.len() > dy {
            let m = x.len() - 1;
            let f = mul_mod(x[m], inv, p);
            for (j, &c) in y.iter().enumerate() {
                let t = mul_mod(f, c, p);
                x[m - dy + j] = (x[m - dy + j] + p - t) % p;
            }
            trim(&mut x);
        }
        std::mem::swap(&mut x, &mut y);
    }
    x.len().saturating_sub(1)
}

fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    let mut g = BigInt::zero();
    for c in &v {
        g = g.gcd(c);
        if g.is_one() {
            return v;
        }
    }
    if !g.is_zero() {
        for c in v.iter_mut() {
            *c = &*c / &g;
        }
    }
    v
}

/// Pseudo-remainder of `a` by `b`, made primitive.
fn prem_primitive(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let lb = b.last().unwrap();
    let e = b.len() - 1;
    let mut r = a.to_vec();
    while r.len() > e {
        let m = r.len() - 1;
        let lead = r[m].clone();
        if lead.is_zero() {
            r.pop();
            continue;
        }
        let g = lead.gcd(lb);
        let (fa, fb) = (lb / &g, &lead / &g);
        for c in r.iter_mut() {
            *c *= &fa;
        }
        for (j, bc) in b.iter().enumerate() {
            r[m - e + j] -= &fb * bc;
        }
        r.pop();
    }
    primitive(r)
}

/// Exact quotient of integer polynomials, or `None` if `d` does not divide `a`.
fn int_exact_div(a: &[BigInt], d: &[BigInt]) -> Option<Vec<BigInt>> {
    let dl = d.last()?;
    let e = d.len() - 1;
    if a.len() < d.len() {
        return a.iter().all(|c| c.is_zero()).then(Vec::new);
    }
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - e];
    for i in (0..q.len()).rev() {
        let (c, rem) = r[i + e].div_rem(dl);
        if !rem.is_zero() {
            return None;
        }
        if !c.is_zero() {
            for (j, dc) in d.iter().enumerate() {
                r[i + j] -= &c * dc;
            }
        }
        q[i] = c;
    }
    r.iter().all(|c| c.is_zero()).then_some(q)
}

/// Evaluate at a large integer, take the integer gcd, and read the
/// polynomial back from its balanced digits. Any candidate is checked by
/// exact division, so a `Some` answer is always correct.
fn heuristic_gcd(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let norm = |v: &[BigInt]| v.iter().map(|c| c.abs()).max().unwrap_or_default();
    let mut xi = BigInt::from(2) * norm(a).min(norm(b)) + BigInt::from(29);
    let eval = |v: &[BigInt], x: &BigInt| v.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c);
    for _ in 0..4 {
        let gamma = eval(a, &xi).gcd(&eval(b, &xi));
        if gamma.is_zero() {
            return None;
        }
        let half = &xi / 2;
        let mut rest = gamma;
        let mut coeffs = Vec::new();
        while !rest.is_zero() {
            let mut c = rest.mod_floor(&xi);
            if c > half {
                c -= &xi;
            }
            rest = (&rest - &c) / &xi;
            coeffs.push(c);
        }
        let mut g = primitive(coeffs);
        if g.last().is_some_and(|c| c.is_negative()) {
            g.iter_mut().for_each(|c| *c = -&*c);
        }
        if !g.is_empty() && int_exact_div(a, &g).is_some() && int_exact_div(b, &g).is_some() {
            return Some(g);
        }
        xi = xi * BigInt::from(73794) / BigInt::from(27011);
    }
    None
}

/// Monic gcd over the rationals, computed on primitive integer images. A
/// gcd of degree 0 modulo a large prime certifies coprimality immediately.
fn int_gcd(a: &RPoly, b: &RPoly) -> RPoly {
    if a.is_zero() || b.is_zero() {
        return if a.is_zero() { b.monic() } else { a.monic() };
    }
    let m = a.origin_order().min(b.origin_order());
    if m > 0 {
        return int_gcd(&a.strip_origin_by(m), &b.strip_origin_by(m)).shift_up(m);
    }
    if a.is_constant() || b.is_constant() {
        return RPoly::one();
    }
    let (x, y) = (a.primitive_int(), b.primitive_int());
    for p in GCD_PRIMES {
        if mod_p(x.last().unwrap(), p) != 0 && mod_p(y.last().unwrap(), p) != 0 {
            if gcd_degree_mod(&x, &y, p) == 0 {
                return RPoly::one();
            }
            break;
        }
    }
    if let Some(g) = heuristic_gcd(&x, &y) {
        return RPoly::new(g.into_iter().map(Rat::from_integer).collect()).monic();
    }
    let (mut x, mut y) = if x.len() >= y.len() { (x, y) } else { (y, x) };
    while !y.is_empty() {
        let r = prem_primitive(&x, &y);
        x = y;
        y = r;
    }
    RPoly::new(x.into_iter().map(Rat::from_integer).collect()).monic()
}

pub fn sign_of(x: &Rat) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

impl CPoly {
    pub fn from_parts(re: &RPoly, im: &RPoly) -> Self {
        let n = re.coeffs.len().max(im.coeffs.len());
        Self::new((0..n).map(|k| gauss(re.coeff(k), im.coeff(k))).collect())
    }

    pub fn re_part(&self) -> RPoly {
        RPoly::new(self.coeffs.iter().map(|c| c.re.clone()).collect())
    }

    pub fn im_part(&self) -> RPoly {
        RPoly::new(self.coeffs.iter().map(|c| c.im.clone()).collect())
    }

    /// `I_n[F](z) = z^n conj(F(1/conj z))`; coefficient `k` is `conj(c_{n-k})`.
    pub fn n_inverse(&self, n: usize) -> Result<Self, PolyError> {
        if self.degree() > n as isize {
            return Err(PolyError::DegreeExceeds { degree: self.degree(), n });
        }
        Ok(Self::new((0..=n).map(|k| self.coeff(n - k).conj()).collect()))
    }

    pub fn is_self_inversive(&self, n: usize) -> bool {
        self.n_inverse(n).is_ok_and(|p| &p == self)
    }
}

/// Serialized as the list of coefficient strings, lowest degree first.
impl serde::Serialize for RPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coeff_strings().serialize(s)
    }
}

impl fmt::Display for RPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = if c.is_negative() { (true, -c.clone()) } else { (false, c.clone()) };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if k == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RPoly({self})")
    }
}

impl fmt::Display for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + i*({})", self.re_part(), self.im_part())
    }
}

impl fmt::Debug for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CPoly({self})")
    }
}

/// Simplest rational (smallest denominator) in the closed interval `[lo, hi]`.
pub fn simplest_between(lo: &Rat, hi: &Rat) -> Rat {
    if lo > hi {
        return simplest_between(hi, lo);
    }
    if !lo.is_positive() && !hi.is_negative() {
        return Rat::zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi, &-lo);
    }
    let fl = lo.floor();
    if fl == *lo {
        return fl;
    }
    if fl.clone() + Rat::one() <= *hi {
        return fl + Rat::one();
    }
    // lo and hi share integer part fl; recurse on reciprocals of fractional parts.
    let inner = simplest_between(&(hi - &fl).recip(), &(lo - &fl).recip());
    fl + inner.recip()
}

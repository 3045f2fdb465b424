//! Interspersion relations between real-rooted polynomials, partial fraction
//! representations, and their transport to the unit circle.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

pub use crate::polycore::simplest_between;
use crate::polycore::{gauss, sign_of, CPoly, GaussRat, RPoly, Rat};
use crate::realroots::{isolate_real_roots, is_real_rooted, IntPoly, RootLoc};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RelationKind {
    /// `F ⪯ G`
    Preceq,
    /// `F ≺ G`
    Prec,
    /// `F ≺₀ G`
    Prec0,
    /// `F ⋎ G`
    Veebar,
    /// `F ∨ G`
    Vee,
    /// `F ⊴ G`
    Unlhd,
    /// `F ⊲ G`
    Lhd,
    /// `F ⪯_𝕋 G`
    PreceqT,
    /// `F ≺_𝕋 G`
    PrecT,
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RelationKind::Preceq => "preceq",
            RelationKind::Prec => "prec",
            RelationKind::Prec0 => "prec0",
            RelationKind::Veebar => "veebar",
            RelationKind::Vee => "vee",
            RelationKind::Unlhd => "unlhd",
            RelationKind::Lhd => "lhd",
            RelationKind::PreceqT => "preceq_T",
            RelationKind::PrecT => "prec_T",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Witness {
    /// The Wronskian-type expression is positive at this point.
    PositiveAt(#[serde(serialize_with = "crate::realroots::ser_rat")] Rat),
    /// The expression that must be negative vanishes at a real point in this
    /// location (a common zero, or a touching point).
    VanishesAt(RootLoc),
    /// The pair shares a zero away from the origin.
    CommonZero(RootLoc),
    /// A polynomial that must have only non-positive zeros has a positive one.
    PositiveZero(&'static str),
    /// The zero-polynomial convention rejected the partner.
    ZeroConvention(&'static str),
    /// Zeros and poles of `F/G` do not alternate as required.
    Alternation(String),
    /// `F/G` is not positive between the two poles flanking the origin.
    PositivityFailed(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationVerdict {
    pub kind: RelationKind,
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl RelationVerdict {
    fn from(kind: RelationKind, w: Option<Witness>) -> Self {
        RelationVerdict { kind, holds: w.is_none(), witness: w }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntersperseError {
    #[error("input polynomial {0} is not real-rooted")]
    NotRealRooted(&'static str),
    #[error("the Wronskian route and the alternation route disagree for {0}")]
    RouteDisagreement(String),
    #[error("partial fractions need simple rational zeros of F: {0}")]
    Unsupported(String),
    #[error("degree of G exceeds deg F + 1")]
    DegreeTooLarge,
    #[error("polynomial is not {0}-self-inversive")]
    NotSelfInversive(usize),
    #[error("circle relation needs zeros on the unit circle only")]
    NotOnCircle,
    #[error("Im(F/G) sampling contradicts the exact verdict at {0}")]
    SamplingContradiction(String),
    #[error("use t_relation for circle relations")]
    WrongKind,
}

/// `F'G - FG'`.
pub fn wronskian(f: &RPoly, g: &RPoly) -> RPoly {
    &(&f.derivative() * g) - &(f * &g.derivative())
}

/// `None` when `w <= 0` on the real line, otherwise a point where `w > 0`.
pub fn nonpositive_on_line(w: &RPoly) -> Option<Witness> {
    if w.is_zero() {
        return None;
    }
    let lead_ok = w.lead().unwrap().is_negative() && w.degree() % 2 == 0;
    if lead_ok {
        let odd_real = w
            .yun()
            .iter()
            .enumerate()
            .filter(|(i, _)| i % 2 == 0)
            .any(|(_, f)| crate::realroots::real_root_count(f) > 0);
        if !odd_real {
            return None;
        }
    }
    Some(Witness::PositiveAt(positive_point(w)))
}

/// A rational where `w > 0`; caller guarantees existence.
fn positive_point(w: &RPoly) -> Rat {
    let ip = IntPoly::from_rpoly(w);
    if w.is_constant() {
        return Rat::zero();
    }
    let mut iso = isolate_real_roots(w, None).expect("nonzero");
    let mut cands = vec![iso.below_all(), iso.above_all()];
    for i in 0..iso.roots.len().saturating_sub(1) {
        cands.push(iso.separator(i));
    }
    for c in &cands {
        if ip.sign_at(c) > 0 {
            return c.clone();
        }
    }
    // Only reachable for a positive leading term far out; walk outward.
    let mut x = iso.above_all();
    loop {
        for y in [x.clone(), -x.clone()] {
            if ip.sign_at(&y) > 0 {
                return y;
            }
        }
        x *= Rat::from_integer(BigInt::from(2));
    }
}

/// `None` when `w < 0` everywhere on the real line.
pub fn negative_on_line(w: &RPoly) -> Option<Witness> {
    if w.is_zero() {
        return Some(Witness::PositivityFailed("expression vanishes identically".into()));
    }
    if let Some(wit) = nonpositive_on_line(w) {
        return Some(wit);
    }
    let iso = isolate_real_roots(w, None).expect("nonzero");
    iso.roots.first().map(|r| Witness::VanishesAt(r.loc.clone()))
}

/// `F ∈ σ_n(ℝ)`: zero, or simple real zeros with degree `n` or `n - 1`.
pub fn in_sigma(f: &RPoly, n: usize) -> bool {
    if f.is_zero() {
        return true;
    }
    let d = f.degree() as usize;
    (d == n || d + 1 == n) && f.squarefree().degree() == f.degree() && is_real_rooted(f)
}

/// Real-rooted with every multiple zero located at the origin.
pub fn multiple_zero_only_at_origin(f: &RPoly) -> bool {
    if f.is_zero() {
        return true;
    }
    let core = f.strip_origin();
    core.squarefree().degree() == core.degree()
}

fn common_zero_off_origin(f: &RPoly, g: &RPoly) -> Option<Witness> {
    let d = f.gcd(g).strip_origin();
    if d.degree() >= 1 {
        let iso = isolate_real_roots(&d, None).expect("nonzero");
        let loc = iso.roots.first().map(|r| r.loc.clone()).unwrap_or(RootLoc::Exact(Rat::zero()));
        Some(Witness::CommonZero(loc))
    } else {
        None
    }
}

fn preceq_w(f: &RPoly, g: &RPoly) -> Option<Witness> {
    if f.is_zero() || g.is_zero() {
        return None;
    }
    nonpositive_on_line(&wronskian(f, g))
}

fn prec_w(f: &RPoly, g: &RPoly, n: usize) -> Option<Witness> {
    if f.is_zero() || g.is_zero() {
        let other = if f.is_zero() { g } else { f };
        return if in_sigma(other, n) {
            None
        } else {
            Some(Witness::ZeroConvention("partner of 0 must lie in sigma_n"))
        };
    }
    negative_on_line(&wronskian(f, g))
}

/// With a zero partner the two conventions are applied independently, so
/// `0 ≺₀ z^n` holds for every `n` while `0 ≺ z^n` fails once `n ≥ 2`
/// (a double zero keeps `z^n` out of `σ_n`).
fn prec0_w(f: &RPoly, g: &RPoly) -> Option<Witness> {
    if f.is_zero() || g.is_zero() {
        let other = if f.is_zero() { g } else { f };
        return if multiple_zero_only_at_origin(other) {
            None
        } else {
            Some(Witness::ZeroConvention("partner of 0 has a multiple zero off the origin"))
        };
    }
    preceq_w(f, g).or_else(|| common_zero_off_origin(f, g))
}

/// Both inputs are already known to be real-rooted.
fn nonpositive_zeros(f: &RPoly, g: &RPoly) -> Option<Witness> {
    if crate::realroots::has_positive_root(f) {
        return Some(Witness::PositiveZero("F"));
    }
    if crate::realroots::has_positive_root(g) {
        return Some(Witness::PositiveZero("G"));
    }
    None
}

/// Decide `F ⋎ G` from the zero/pole pattern of `F/G` (the alternation route).
/// Returns `None` when the relation holds.
pub fn veebar_by_alternation(f: &RPoly, g: &RPoly) -> Option<Witness> {
    if f.is_zero() || g.is_zero() {
        return None;
    }
    let d = f.gcd(g);
    let p = f.exact_div(&d).expect("gcd divides");
    let q = g.exact_div(&d).expect("gcd divides");
    let (dp, dq) = (p.degree(), q.degree());
    if dp == 0 && dq == 0 {
        let ratio = p.coeff(0) / q.coeff(0);
        return if ratio.is_positive() {
            None
        } else {
            Some(Witness::PositivityFailed("F/G is a negative constant".into()))
        };
    }
    if dp > dq {
        return Some(Witness::Alternation("F/G has a pole at infinity".into()));
    }
    let m_inf = (dq - dp) as usize;
    if m_inf > 2 {
        return Some(Witness::Alternation(format!("zero of order {m_inf} at infinity")));
    }
    if p.coeff(0).is_zero() {
        return Some(Witness::Alternation("F/G vanishes at the origin".into()));
    }
    if p.squarefree().degree() != dp {
        return Some(Witness::Alternation("F/G has a multiple finite zero".into()));
    }
    let m0 = q.origin_order();
    let q_core = q.strip_origin();
    if m0 > 2 {
        return Some(Witness::Alternation(format!("pole of order {m0} at the origin")));
    }
    if q_core.squarefree().degree() != q_core.degree() {
        return Some(Witness::Alternation("F/G has a multiple pole off the origin".into()));
    }
    let p_int = IntPoly::from_rpoly(&p);
    let q_int = IntPoly::from_rpoly(&q);
    let joint = &p * &q_core;
    // Tokens: true = zero of F/G, false = pole; locations are kept for the
    // positivity test.
    let mut iso = if joint.degree() >= 1 { Some(isolate_real_roots(&joint, None).expect("nonzero")) } else { None };
    let mut neg: Vec<(bool, usize)> = Vec::new();
    let mut pos: Vec<(bool, usize)> = Vec::new();
    if let Some(iso) = iso.as_ref() {
        for (idx, r) in iso.roots.iter().enumerate() {
            let is_zero = match &r.loc {
                RootLoc::Exact(x) => p_int.sign_at(x) == 0,
                RootLoc::Open(a, b) => p_int.sign_at(a) != p_int.sign_at(b),
            };
            if r.loc.sign() < 0 {
                neg.push((is_zero, idx));
            } else {
                pos.push((is_zero, idx));
            }
        }
    }
    let inf_choices: Vec<(bool, bool)> = match m_inf {
        0 => vec![(false, false)],
        1 => vec![(true, false), (false, true)],
        _ => vec![(true, true)],
    };
    let zero_choices: Vec<(bool, bool)> = match m0 {
        0 => vec![(false, false)],
        1 => vec![(true, false), (false, true)],
        _ => vec![(true, true)],
    };
    let mut last_reason = String::from("no admissible zero/pole arrangement");
    for &(inf_left, inf_right) in &inf_choices {
        for &(pole_neg, pole_pos) in &zero_choices {
            // Negative side must read Z P Z P ... Z P.
            let mut ns: Vec<bool> = Vec::new();
            if inf_left {
                ns.push(true);
            }
            ns.extend(neg.iter().map(|t| t.0));
            if pole_neg {
                ns.push(false);
            }
            let mut ps: Vec<bool> = Vec::new();
            if pole_pos {
                ps.push(false);
            }
            ps.extend(pos.iter().map(|t| t.0));
            if inf_right {
                ps.push(true);
            }
            let neg_ok = ns.len() % 2 == 0 && ns.iter().enumerate().all(|(i, &z)| z == (i % 2 == 0));
            let pos_ok = ps.len() % 2 == 0 && ps.iter().enumerate().all(|(i, &z)| z == (i % 2 == 1));
            if !(neg_ok && pos_ok) {
                continue;
            }
            if m0 == 2 {
                // lim_{z->0} F/G = -inf  <=>  P(0) / (Q/z^2)(0) < 0.
                let s = sign_of(&p.coeff(0)) * sign_of(&q_core.coeff(0));
                if s < 0 {
                    return None;
                }
                last_reason = "F/G tends to +infinity at the double pole at the origin".into();
                continue;
            }
            // The open interval between the last pole on the negative side and
            // the first pole on the positive side (pole at 0 included).
            let t = {
                let iso = iso.as_mut();
                let left_pole = if pole_neg {
                    Some(None)
                } else {
                    neg.iter().rev().find(|t| !t.0).map(|t| Some(t.1))
                };
                let right_pole = if pole_pos {
                    Some(None)
                } else {
                    pos.iter().find(|t| !t.0).map(|t| Some(t.1))
                };
                point_between(iso, left_pole, right_pole)
            };
            let s = p_int.sign_at(&t) * q_int.sign_at(&t);
            if s > 0 {
                return None;
            }
            last_reason = format!("F/G is not positive at {t}");
        }
    }
    Some(Witness::PositivityFailed(last_reason))
}

/// A rational point strictly inside the gap between two marks. A mark is
/// `None` (infinity on that side), `Some(None)` (the origin), or
/// `Some(Some(i))` (isolated root `i`). No root lies strictly between the marks.
fn point_between(
    iso: Option<&mut crate::realroots::RootIsolation>,
    left: Option<Option<usize>>,
    right: Option<Option<usize>>,
) -> Rat {
    let half = Rat::new(BigInt::one(), BigInt::from(2));
    let Some(iso) = iso else {
        return match (left, right) {
            (Some(None), _) => Rat::one(),
            (_, Some(None)) => -Rat::one(),
            _ => Rat::zero(),
        };
    };
    // Reduce the origin mark to a neighbouring root index position.
    let n = iso.roots.len();
    let first_pos = iso.roots.iter().position(|r| r.loc.sign() > 0).unwrap_or(n);
    match (left, right) {
        (None, None) => Rat::zero(),
        (None, Some(Some(j))) => {
            if j == 0 {
                iso.below_all()
            } else {
                iso.separator(j - 1)
            }
        }
        (Some(Some(i)), None) => {
            if i + 1 == n {
                iso.above_all()
            } else {
                iso.separator(i)
            }
        }
        (Some(Some(i)), Some(Some(_))) => iso.separator(i),
        (Some(None), right) => {
            // Gap starts at the origin; walk to the first positive root.
            let upper = match right {
                Some(Some(j)) => Some(j),
                _ => (first_pos < n).then_some(first_pos),
            };
            match upper {
                None => Rat::one(),
                Some(j) => {
                    while iso.roots[j].loc.lower().is_zero() {
                        iso.bisect_root(j);
                    }
                    iso.roots[j].loc.lower() * &half
                }
            }
        }
        (left, Some(None)) => {
            let lower = match left {
                Some(Some(i)) => Some(i),
                _ => first_pos.checked_sub(1),
            };
            match lower {
                None => -Rat::one(),
                Some(i) => {
                    while iso.roots[i].loc.upper().is_zero() {
                        iso.bisect_root(i);
                    }
                    iso.roots[i].loc.upper() * &half
                }
            }
        }
    }
}

/// Everything needed to call a real relation.
#[derive(Debug, Clone, Copy)]
pub struct RelationOptions {
    /// Ambient degree `n` for the `σ_n` convention; defaults to the larger degree.
    pub ambient_n: Option<usize>,
    /// Also run the alternation route for the log-interspersion family.
    pub cross_check: bool,
}

impl Default for RelationOptions {
    fn default() -> Self {
        RelationOptions { ambient_n: None, cross_check: true }
    }
}

pub fn relation(f: &RPoly, g: &RPoly, kind: RelationKind) -> Result<RelationVerdict, IntersperseError> {
    relation_with(f, g, kind, RelationOptions::default())
}

pub fn relation_with(
    f: &RPoly,
    g: &RPoly,
    kind: RelationKind,
    opts: RelationOptions,
) -> Result<RelationVerdict, IntersperseError> {
    if !is_real_rooted(f) {
        return Err(IntersperseError::NotRealRooted("F"));
    }
    if !is_real_rooted(g) {
        return Err(IntersperseError::NotRealRooted("G"));
    }
    let n = opts.ambient_n.unwrap_or_else(|| f.degree().max(g.degree()).max(0) as usize);
    let zf = f.shift_up(1);
    let veebar = |f: &RPoly, g: &RPoly| -> Result<Option<Witness>, IntersperseError> {
        let by_w = preceq_w(g, &zf);
        if opts.cross_check {
            let by_alt = veebar_by_alternation(f, g);
            if by_w.is_none() != by_alt.is_none() {
                return Err(IntersperseError::RouteDisagreement(format!("F = {f}, G = {g}")));
            }
        }
        Ok(by_w)
    };
    // `G ≺₀ zF` once `G ⪯ zF` is settled.
    let vee = |f: &RPoly, g: &RPoly| -> Result<Option<Witness>, IntersperseError> {
        Ok(match veebar(f, g)? {
            Some(w) => Some(w),
            None if g.is_zero() || zf.is_zero() => prec0_w(g, &zf),
            None => common_zero_off_origin(g, &zf),
        })
    };
    let w = match kind {
        RelationKind::Preceq => preceq_w(f, g),
        RelationKind::Prec => prec_w(f, g, n),
        RelationKind::Prec0 => prec0_w(f, g),
        RelationKind::Veebar => veebar(f, g)?,
        RelationKind::Vee => vee(f, g)?,
        RelationKind::Unlhd => nonpositive_zeros(f, g).map_or_else(|| veebar(f, g), |w| Ok(Some(w)))?,
        RelationKind::Lhd => nonpositive_zeros(f, g).map_or_else(|| vee(f, g), |w| Ok(Some(w)))?,
        RelationKind::PreceqT | RelationKind::PrecT => return Err(IntersperseError::WrongKind),
    };
    Ok(RelationVerdict::from(kind, w))
}

/// `G = c_inf * F_inf + c_0 * F + sum_y c_y * F_y` with `F_inf = -zF` and
/// `F_y = F / (z - y)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartialFractionDecomp {
    #[serde(serialize_with = "crate::realroots::ser_rat")]
    pub c_infinity: Rat,
    #[serde(serialize_with = "crate::realroots::ser_rat")]
    pub c_0: Rat,
    #[serde(serialize_with = "ser_residues")]
    pub residues: Vec<(Rat, Rat)>,
}

fn ser_residues<S: serde::Serializer>(v: &[(Rat, Rat)], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for (y, c) in v {
        seq.serialize_element(&[y.to_string(), c.to_string()])?;
    }
    seq.end()
}

impl PartialFractionDecomp {
    /// Rebuild `G` from the representation.
    pub fn reconstruct(&self, f: &RPoly) -> RPoly {
        let f_inf = -&f.shift_up(1);
        let mut acc = &f_inf.scale(&self.c_infinity) + &f.scale(&self.c_0);
        for (y, c) in &self.residues {
            let fy = f.exact_div(&RPoly::new(vec![-y.clone(), Rat::one()])).expect("y is a zero of F");
            acc = &acc + &fy.scale(c);
        }
        acc
    }
}

/// Exact rational zeros of `f`, which must all be simple and rational.
pub fn rational_simple_zeros(f: &RPoly) -> Result<Vec<Rat>, IntersperseError> {
    let iso = isolate_real_roots(f, None).map_err(|e| IntersperseError::Unsupported(e.to_string()))?;
    if !iso.is_real_rooted() {
        return Err(IntersperseError::Unsupported("F has non-real zeros".into()));
    }
    let mut out = Vec::new();
    for (i, r) in iso.roots.iter().enumerate() {
        if r.multiplicity > 1 {
            return Err(IntersperseError::Unsupported("F has a multiple zero".into()));
        }
        match &r.loc {
            RootLoc::Exact(x) => out.push(x.clone()),
            RootLoc::Open(..) => return Err(IntersperseError::Unsupported(format!("zero {i} is irrational"))),
        }
    }
    Ok(out)
}

/// Partial fraction representation of `G/F` relative to the basis
/// `{F_inf, F, F_y}`.
pub fn partial_fractions(f: &RPoly, g: &RPoly) -> Result<PartialFractionDecomp, IntersperseError> {
    if f.is_zero() {
        return Err(IntersperseError::Unsupported("F is zero".into()));
    }
    if g.degree() > f.degree() + 1 {
        return Err(IntersperseError::DegreeTooLarge);
    }
    let zeros = rational_simple_zeros(f)?;
    let fd = f.derivative();
    let c_infinity = if g.degree() == f.degree() + 1 {
        -(g.lead().unwrap() / f.lead().unwrap())
    } else {
        Rat::zero()
    };
    let residues: Vec<(Rat, Rat)> = zeros.iter().map(|y| (y.clone(), g.eval(y) / fd.eval(y))).collect();
    let mut rest = g - &(-&f.shift_up(1)).scale(&c_infinity);
    for (y, c) in &residues {
        let fy = f.exact_div(&RPoly::new(vec![-y.clone(), Rat::one()])).expect("zero of F");
        rest = &rest - &fy.scale(c);
    }
    let c0 = rest.exact_div(f).map_err(|_| IntersperseError::Unsupported("remainder not a multiple of F".into()))?;
    debug_assert!(c0.is_constant());
    let decomp = PartialFractionDecomp { c_infinity, c_0: c0.coeff(0), residues };
    // Residue identity: c_y * (F/G)'(y) = 1 whenever G(y) != 0.
    for (y, c) in &decomp.residues {
        let gy = g.eval(y);
        if !gy.is_zero() {
            let deriv = fd.eval(y) / gy;
            assert!((c * deriv).is_one(), "residue identity violated at {y}");
        }
    }
    Ok(decomp)
}

// ---------------------------------------------------------------------------
// Unit circle side.

fn i_unit() -> GaussRat {
    gauss(Rat::zero(), Rat::one())
}

fn cpow(p: &CPoly, k: usize) -> CPoly {
    let mut acc = CPoly::one();
    for _ in 0..k {
        acc = &acc * p;
    }
    acc
}

/// `Ψ_n[H](z) = (z + i)^n H((z - i)/(z + i))` for an `n`-self-inversive `H`.
pub fn mobius_psi(h: &CPoly, n: usize) -> Result<RPoly, IntersperseError> {
    if !h.is_self_inversive(n) {
        return Err(IntersperseError::NotSelfInversive(n));
    }
    let zp = CPoly::new(vec![i_unit(), GaussRat::one()]);
    let zm = CPoly::new(vec![-i_unit(), GaussRat::one()]);
    let mut acc = CPoly::zero();
    for (k, c) in h.coeffs().iter().enumerate() {
        let term = &cpow(&zm, k) * &cpow(&zp, n - k);
        acc = &acc + &term.scale(c);
    }
    assert!(acc.im_part().is_zero(), "Psi image of a self-inversive polynomial is real");
    Ok(acc.re_part())
}

/// Inverse map `(2i)^{-n} (1 - z)^n P(i(1 + z)/(1 - z))`.
pub fn mobius_psi_inv(p: &RPoly, n: usize) -> Result<CPoly, IntersperseError> {
    if p.degree() > n as isize {
        return Err(IntersperseError::DegreeTooLarge);
    }
    let one_plus = CPoly::new(vec![GaussRat::one(), GaussRat::one()]).scale(&i_unit());
    let one_minus = CPoly::new(vec![GaussRat::one(), -GaussRat::one()]);
    let mut acc = CPoly::zero();
    for (k, c) in p.coeffs().iter().enumerate() {
        let term = &cpow(&one_plus, k) * &cpow(&one_minus, n - k);
        acc = &acc + &term.scale(&gauss(c.clone(), Rat::zero()));
    }
    let two_i = gauss(Rat::zero(), Rat::from_integer(BigInt::from(2)));
    let mut factor = GaussRat::one();
    for _ in 0..n {
        factor = factor / two_i.clone();
    }
    Ok(acc.scale(&factor))
}

/// Thirty-two Gaussian rationals inside the unit disk.
pub fn disk_grid() -> Vec<GaussRat> {
    let mut pts = Vec::new();
    let steps = [-3i64, -2, -1, 0, 1, 2, 3];
    for &a in &steps {
        for &b in &steps {
            let re = Rat::new(BigInt::from(a), BigInt::from(4));
            let im = Rat::new(BigInt::from(b), BigInt::from(4));
            if &re * &re + &im * &im < Rat::one() {
                pts.push(gauss(re, im));
            }
        }
    }
    // 7x7 grid minus the corners leaves 37 points with norm < 1; keep 32.
    pts.truncate(32);
    pts
}

/// Decide `F ⪯_𝕋 G` or `F ≺_𝕋 G` by transport to the real line, with the
/// `Im(F/G) < 0` disk sampling as a consistency check.
pub fn t_relation(f: &CPoly, g: &CPoly, kind: RelationKind, n: usize) -> Result<RelationVerdict, IntersperseError> {
    let real_kind = match kind {
        RelationKind::PreceqT => RelationKind::Preceq,
        RelationKind::PrecT => RelationKind::Prec,
        _ => return Err(IntersperseError::WrongKind),
    };
    let pf = mobius_psi(f, n)?;
    let pg = mobius_psi(g, n)?;
    if !is_real_rooted(&pf) || !is_real_rooted(&pg) {
        return Err(IntersperseError::NotOnCircle);
    }
    let opts = RelationOptions { ambient_n: Some(n), cross_check: false };
    let v = relation_with(&pf, &pg, real_kind, opts)?;
    if v.holds && !g.is_zero() && !f.is_zero() && !f.proportional(g) {
        for z in disk_grid() {
            let gz = g.eval(&z);
            if gz.is_zero() {
                continue;
            }
            let ratio = f.eval(&z) / gz;
            if !ratio.im.is_negative() {
                return Err(IntersperseError::SamplingContradiction(format!("{} + {}i", z.re, z.im)));
            }
        }
    }
    Ok(RelationVerdict { kind, holds: v.holds, witness: v.witness })
}

//! Seeded randomized harness: generators for class members and related
//! pairs, and one `verify_*` routine per theorem family. Every trial draws
//! from its own ChaCha stream, so reports do not depend on scheduling.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::exec::{run_indexed, Execution};
use crate::intersperse::{
    mobius_psi, mobius_psi_inv, partial_fractions, relation, relation_with, simplest_between, t_relation, IntersperseError,
    RelationKind, RelationOptions,
};
use crate::logconcave::{is_strictly_log_concave, uniform_sign};
use crate::polycore::{rat, RPoly, Rat};
use crate::qcalc::{
    class_membership, hadamard_q, is_extremal, membership_route_a, membership_route_b, q_diff, q_diff_closed, q_diff_coeff,
    q_diff_star, q_diff_star_closed, q_diff_star_coeff, r_poly, to_q_basis, QClass, QParam,
};

#[derive(Debug, Clone, Serialize)]
pub struct TrialConfig {
    pub seed: u64,
    pub n_min: usize,
    pub n_max: usize,
    pub q_set: Vec<QParam>,
    pub trials: usize,
    pub origin_multiplicity_max: usize,
    #[serde(skip)]
    pub execution: Execution,
}

impl Default for TrialConfig {
    fn default() -> Self {
        TrialConfig {
            seed: 0x5eed,
            n_min: 2,
            n_max: 12,
            q_set: vec![
                QParam::ratio(1, 4),
                QParam::ratio(1, 3),
                QParam::ratio(1, 2),
                QParam::ratio(3, 4),
                QParam::one(),
            ],
            trials: 1000,
            origin_multiplicity_max: 2,
            execution: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabError {
    #[error("trials must be at least 1 and q_set nonempty with n_min <= n_max")]
    BadConfig,
    #[error("unknown theorem id {0}")]
    UnknownTheorem(String),
    #[error("rejection sampling exhausted after {0} attempts")]
    Exhausted(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub trial: usize,
    pub assertion: String,
    /// Every input and intermediate polynomial, by name.
    pub data: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremReport {
    pub theorem_id: String,
    pub trials_run: usize,
    pub failures: Vec<Counterexample>,
    pub pass: bool,
    /// Counters that are not pass/fail: falsification hits, boundary cases.
    pub stats: BTreeMap<String, u64>,
}

pub const THEOREM_IDS: [&str; 10] = [
    "q-rolle",
    "q-laguerre-star",
    "q-laguerre",
    "q-newton",
    "convolution",
    "multiplier",
    "partial-fractions",
    "t-transport",
    "identities",
    "route-agreement",
];

pub fn verify(id: &str, cfg: &TrialConfig) -> Result<TheoremReport, LabError> {
    match id {
        "q-rolle" => verify_q_rolle(cfg),
        "q-laguerre-star" => verify_q_laguerre_star(cfg),
        "q-laguerre" => verify_q_laguerre(cfg),
        "q-newton" => verify_q_newton(cfg),
        "convolution" => verify_convolution_invariance(cfg),
        "multiplier" => verify_multiplier(cfg),
        "partial-fractions" => verify_partial_fraction_roundtrip(cfg),
        "t-transport" => verify_t_transport(cfg),
        "identities" => verify_identities(cfg),
        "route-agreement" => verify_route_agreement(cfg),
        other => Err(LabError::UnknownTheorem(other.to_string())),
    }
}

/// The RNG for trial `trial` of the suite identified by `tag`.
pub fn trial_rng(seed: u64, tag: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((tag << 32) | trial as u64);
    rng
}

// ---------------------------------------------------------------------------
// Generators.

/// A generated class member together with its exact zeros.
#[derive(Debug, Clone)]
pub struct Member {
    pub poly: RPoly,
    /// Nonzero zeros, listed with multiplicity.
    pub roots: Vec<Rat>,
    pub origin: usize,
    pub lead: Rat,
}

fn small_lead<R: Rng>(rng: &mut R) -> Rat {
    const CHOICES: [(i64, i64); 8] = [(1, 1), (2, 1), (3, 1), (1, 2), (-1, 1), (-2, 1), (-3, 1), (-1, 2)];
    let (a, b) = CHOICES[rng.random_range(0..CHOICES.len())];
    rat(a, b)
}

/// Magnitude following `prev` with ratio `prev/next = q u`, `u` a rational
/// in `(1/8, 7/8)`; `u = 1` when `boundary` is set.
fn next_magnitude<R: Rng>(rng: &mut R, prev: &Rat, q: &Rat, boundary: bool) -> Rat {
    if boundary {
        return prev / q;
    }
    let k = rng.random_range(2..=13i64);
    let hi = prev / (q * rat(k, 16));
    let lo = prev / (q * rat(k + 1, 16));
    let pad = (&hi - &lo) / Rat::from_integer(BigInt::from(64));
    simplest_between(&(&lo + &pad), &(&hi - &pad))
}

fn chain<R: Rng>(rng: &mut R, count: usize, q: &Rat, closure: bool) -> Vec<Rat> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    let mut cur = rat(rng.random_range(1..=8), 4);
    out.push(cur.clone());
    for _ in 1..count {
        let boundary = closure && rng.random_range(0..3) == 0;
        cur = next_magnitude(rng, &cur, q, boundary);
        out.push(cur.clone());
    }
    out
}

fn assemble(lead: Rat, roots: Vec<Rat>, origin: usize) -> Member {
    let poly = RPoly::from_roots(lead.clone(), &roots).shift_up(origin);
    Member { poly, roots, origin, lead }
}

/// Sample a member of `cls` with degree `n` (sometimes `n - 1`).
pub fn gen_class_member<R: Rng>(rng: &mut R, n: usize, q: &QParam, cls: QClass, origin_max: usize) -> Member {
    let deg = if n >= 1 && rng.random_range(0..4) == 0 { n - 1 } else { n };
    let m = rng.random_range(0..=origin_max.min(deg));
    let d = deg - m;
    let neg = if cls.is_negative() { d } else { rng.random_range(0..=d) };
    let closure = !cls.is_strict();
    let mut roots: Vec<Rat> = chain(rng, neg, q.get(), closure).into_iter().map(|x| -x).collect();
    roots.extend(chain(rng, d - neg, q.get(), closure));
    assemble(small_lead(rng), roots, m)
}

/// Sample a polynomial of degree at most `n` outside `cls` (for `0 < q`).
/// Returns `None` when the class is everything of that shape (tiny `n`).
pub fn gen_non_member<R: Rng>(rng: &mut R, n: usize, q: &QParam, cls: QClass, origin_max: usize) -> Option<RPoly> {
    for _ in 0..1000 {
        let kind = rng.random_range(0..4);
        let f = match kind {
            // Two same-sign zeros with ratio in (q, 1), or equal to q for strict classes.
            0 if n >= 2 => {
                let mut m = gen_class_member(rng, n, q, cls, origin_max);
                let same: Vec<Rat> = m.roots.iter().filter(|r| r.is_negative()).cloned().collect();
                let pick = if same.is_empty() { m.roots.first().cloned() } else { same.first().cloned() };
                let Some(x) = pick else { continue };
                let ratio = if cls.is_strict() && rng.random_bool(0.5) {
                    q.get().clone()
                } else {
                    q.get() + (Rat::one() - q.get()) * rat(rng.random_range(1..=7), 8)
                };
                let y = &x / &ratio;
                if m.roots.len() + m.origin >= n {
                    let drop = m.roots.iter().rposition(|r| *r != x).unwrap_or(0);
                    if m.roots.len() > 1 {
                        m.roots.remove(drop);
                    } else if m.origin > 0 {
                        m.origin -= 1;
                    } else {
                        continue;
                    }
                }
                m.roots.push(y);
                assemble(m.lead, m.roots, m.origin).poly
            }
            // A positive zero, fatal for the negative classes.
            1 if cls.is_negative() && n >= 1 => {
                let m = gen_class_member(rng, n.saturating_sub(1), q, QClass::ClosureN, origin_max);
                &m.poly * &RPoly::new(vec![-rat(rng.random_range(1..=9), 4), Rat::one()])
            }
            // A pair of non-real zeros.
            2 if n >= 2 => {
                let m = gen_class_member(rng, n - 2, q, cls, origin_max);
                let b = rat(rng.random_range(-3..=3), 2);
                let c = &b * &b / Rat::from_integer(4.into()) + rat(rng.random_range(1..=8), 4);
                &m.poly * &RPoly::new(vec![c, b, Rat::one()])
            }
            // A repeated nonzero zero.
            3 if n >= 2 => {
                let mut m = gen_class_member(rng, n - 1, q, cls, origin_max);
                let Some(x) = m.roots.first().cloned() else { continue };
                m.roots.push(x);
                assemble(m.lead, m.roots, m.origin).poly
            }
            _ => continue,
        };
        if membership_route_a(&f, n, q, cls).is_err() {
            return Some(f);
        }
    }
    None
}

fn distinct_with_mult(roots: &[Rat], origin: usize) -> Vec<(Rat, usize)> {
    let mut all: Vec<Rat> = roots.to_vec();
    all.extend(std::iter::repeat_n(Rat::zero(), origin));
    all.sort();
    let mut out: Vec<(Rat, usize)> = Vec::new();
    for r in all {
        match out.last_mut() {
            Some((x, m)) if *x == r => *m += 1,
            _ => out.push((r, 1)),
        }
    }
    out
}

fn class_for_pair(kind: RelationKind) -> QClass {
    match kind {
        RelationKind::Preceq | RelationKind::Veebar => QClass::ClosureR,
        RelationKind::Prec | RelationKind::Prec0 | RelationKind::Vee => QClass::R,
        RelationKind::Unlhd => QClass::ClosureN,
        _ => QClass::N,
    }
}

fn is_log_kind(kind: RelationKind) -> bool {
    matches!(kind, RelationKind::Veebar | RelationKind::Vee | RelationKind::Unlhd | RelationKind::Lhd)
}

/// Sample `(F, G)` with `F` in the class matching `kind` and `relation(F, G,
/// kind)` verified, `F` and `G` not proportional, both of degree at most `n`.
pub fn gen_related_pair<R: Rng>(
    rng: &mut R,
    n: usize,
    q: &QParam,
    kind: RelationKind,
    origin_max: usize,
) -> Result<(RPoly, RPoly), LabError> {
    let cls = class_for_pair(kind);
    let origin_max = if kind == RelationKind::Prec { origin_max.min(1) } else { origin_max };
    for _ in 0..1000 {
        let m = gen_class_member(rng, n, q, cls, origin_max);
        let f = m.poly.clone();
        let g = if !is_log_kind(kind) && rng.random_range(0..5) == 0 {
            f.compose_scale(&(Rat::one() / (Rat::one() + rat(rng.random_range(1..=8), 64))))
        } else {
            let base_origin = if is_log_kind(kind) { m.origin + 1 } else { m.origin };
            let dm = distinct_with_mult(&m.roots, base_origin);
            let mut g_roots: Vec<Rat> = Vec::new();
            for (r, mult) in &dm {
                g_roots.extend(std::iter::repeat_n(r.clone(), mult - 1));
            }
            for w in dm.windows(2) {
                let (a, b) = (&w[0].0, &w[1].0);
                g_roots.push(a + (b - a) * rat(rng.random_range(1..=7), 8));
            }
            let base_deg = m.roots.len() + base_origin;
            let room = g_roots.len() < n && base_deg <= n + usize::from(is_log_kind(kind));
            if room && rng.random_bool(0.5) {
                let left = cls.is_negative() || rng.random_bool(0.5);
                let step = rat(rng.random_range(1..=8), 4);
                let end = match (dm.first(), dm.last()) {
                    (Some((lo, _)), Some((hi, _))) => {
                        if left {
                            lo - (Rat::one() + lo.abs()) * &step
                        } else {
                            hi + (Rat::one() + hi.abs()) * &step
                        }
                    }
                    _ => -step,
                };
                g_roots.push(end);
            }
            if g_roots.len() > n {
                continue;
            }
            RPoly::from_roots(small_lead(rng), &g_roots)
        };
        if g.degree() > n as isize || f.proportional(&g) {
            continue;
        }
        for cand in [g.clone(), -&g] {
            if let Ok(v) = relation(&f, &cand, kind) {
                if v.holds {
                    return Ok((f, cand));
                }
            }
        }
    }
    Err(LabError::Exhausted(1000))
}

/// Random small-rational polynomial of degree at most `max_deg`.
fn random_poly<R: Rng>(rng: &mut R, max_deg: usize) -> RPoly {
    let deg = rng.random_range(0..=max_deg);
    RPoly::new((0..=deg).map(|_| rat(rng.random_range(-9..=9), rng.random_range(1..=4))).collect())
}

// ---------------------------------------------------------------------------
// Trial bookkeeping.

#[derive(Default)]
struct Trial {
    index: usize,
    failures: Vec<Counterexample>,
    stats: BTreeMap<String, u64>,
}

impl Trial {
    fn new(index: usize) -> Self {
        Trial { index, ..Default::default() }
    }

    fn fail(&mut self, assertion: impl Into<String>, data: &[(&str, String)]) {
        self.failures.push(Counterexample {
            trial: self.index,
            assertion: assertion.into(),
            data: data.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
        });
    }

    fn bump(&mut self, key: &str) {
        *self.stats.entry(key.to_string()).or_insert(0) += 1;
    }

    /// `relation(f, g, kind).holds`, recording internal errors as failures.
    fn rel(&mut self, f: &RPoly, g: &RPoly, kind: RelationKind, data: &[(&str, String)]) -> Option<bool> {
        self.rel_with(f, g, kind, RelationOptions::default(), data)
    }

    fn rel_with(
        &mut self,
        f: &RPoly,
        g: &RPoly,
        kind: RelationKind,
        opts: RelationOptions,
        data: &[(&str, String)],
    ) -> Option<bool> {
        match relation_with(f, g, kind, opts) {
            Ok(v) => Some(v.holds),
            Err(e) => {
                self.fail(format!("relation {kind} raised: {e}"), data);
                None
            }
        }
    }

    /// Record a failure unless `f` lies in `cls` with both routes agreeing.
    fn expect_member(&mut self, f: &RPoly, n: usize, q: &QParam, cls: QClass, what: &str, data: &[(&str, String)]) -> bool {
        let v = class_membership(f, n, q, cls);
        if !v.route_agreement {
            self.fail(format!("{what}: membership routes disagree for {cls}"), data);
            return false;
        }
        if !v.member {
            self.fail(format!("{what} not in {cls}_{n}(q): {:?}", v.witness), data);
        }
        v.member
    }
}

fn pick<R: Rng>(rng: &mut R, cfg: &TrialConfig) -> (usize, QParam) {
    let n = rng.random_range(cfg.n_min..=cfg.n_max);
    let q = cfg.q_set[rng.random_range(0..cfg.q_set.len())].clone();
    (n, q)
}

fn check_cfg(cfg: &TrialConfig) -> Result<(), LabError> {
    if cfg.trials == 0 || cfg.q_set.is_empty() || cfg.n_min > cfg.n_max || cfg.q_set.iter().any(|q| q.is_zero()) {
        return Err(LabError::BadConfig);
    }
    Ok(())
}

fn run_suite<F>(id: &str, tag: u64, cfg: &TrialConfig, body: F) -> Result<TheoremReport, LabError>
where
    F: Fn(&mut Trial, &mut ChaCha8Rng) + Sync + Send,
{
    check_cfg(cfg)?;
    let outcomes = run_indexed(cfg.trials, cfg.execution, |t| {
        let mut rng = trial_rng(cfg.seed, tag, t);
        let mut trial = Trial::new(t);
        body(&mut trial, &mut rng);
        trial
    });
    let mut failures = Vec::new();
    let mut stats = BTreeMap::new();
    for o in outcomes {
        failures.extend(o.failures);
        for (k, v) in o.stats {
            *stats.entry(k).or_insert(0) += v;
        }
    }
    failures.sort_by_key(|c| c.trial);
    Ok(TheoremReport { theorem_id: id.to_string(), trials_run: cfg.trials, pass: failures.is_empty(), failures, stats })
}

fn s(p: &RPoly) -> String {
    p.to_string()
}

/// Relation asserted between a q-difference image and its source.
fn rolle_kind(cls: QClass) -> RelationKind {
    match cls {
        QClass::ClosureR => RelationKind::Preceq,
        QClass::R => RelationKind::Prec0,
        QClass::ClosureN => RelationKind::Unlhd,
        QClass::N => RelationKind::Lhd,
    }
}

/// Generate a member and run the generator self-check.
fn member_for(tr: &mut Trial, rng: &mut ChaCha8Rng, cfg: &TrialConfig, cls: QClass) -> (usize, QParam, RPoly) {
    let (n, q) = pick(rng, cfg);
    let f = gen_class_member(rng, n, &q, cls, cfg.origin_multiplicity_max).poly;
    let data = [("F", s(&f)), ("q", q.to_string()), ("n", n.to_string())];
    tr.expect_member(&f, n, &q, cls, "generated F", &data);
    (n, q, f)
}

// ---------------------------------------------------------------------------
// Suites.

pub fn verify_q_rolle(cfg: &TrialConfig) -> Result<TheoremReport, LabError> {
    run_suite("q-rolle", 1, cfg, |tr, rng| {
        let cls = QClass::ALL[tr.index % 4];
        let (n, q, f) = member_for(tr, rng, cfg, cls);
        let d = match q_diff(&f, n, &q) {
            Ok(d) => d,
            Err(e) => return tr.fail(format!("q_diff: {e}"), &[("F", s(&f))]),
        };
        let data = [("F", s(&f)), ("Delta", s(&d)), ("q", q.to_string()), ("n", n.to_string()), ("class", cls.to_string())];
        tr.expect_member(&d, n - 1, &q, cls, "Delta F", &data);
        let kind = rolle_kind(cls);
        if tr.rel(&d, &f, kind, &data) == Some(false) {
            tr.fail(format!("Delta F {kind} F fails"), &data);
        }
    })
}

pub fn verify_q_laguerre_star(cfg: &TrialConfig) -> Result<TheoremReport, LabError> {
    run_suite("q-laguerre-star", 2, cfg, |tr, rng| {
        let cls = QClass::ALL[tr.index % 4];
        let (n, q, f) = member_for(tr, rng, cfg, cls);
        let d = match q_diff_star(&f, n, &q) {
            Ok(d) => d,
            Err(e) => return tr.fail(format!("q_diff_star: {e}"), &[("F", s(&f))]),
        };
        let data = [("F", s(&f)), ("DeltaStar", s(&d)), ("q", q.to_string()), ("n", n.to_string()), ("class", cls.to_string())];
        tr.expect_member(&d, n - 1, &q, cls, "Delta* F", &data);
    })
}

pub fn verify_q_laguerre(cfg: &TrialConfig) -> Result<TheoremReport, LabError> {
    run_suite("q-laguerre", 3, cfg, |tr, rng| {
        let cls = QClass::ALL[tr.index % 4];
        let (n, q, f) = member_for(tr, rng, cfg, cls);
        let (d, ds) = match (q_diff(&f, n, &q), q_diff_star(&f, n, &q)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => return tr.fail("difference operators failed", &[("F", s(&f))]),
        };
        let data = [("F", s(&f)), ("Delta", s(&d)), ("DeltaStar", s(&ds)), ("q", q.to_string()), ("class", cls.to_string())];
        let kind = rolle_kind(cls);
        if tr.rel(&d, &ds, kind, &data) == Some(false) {
            tr.fail(format!("Delta F {kind} Delta* F fails"), &data);
        }
    })
}

pub fn verify_q_newton(cfg: &TrialConfig) -> Result<TheoremReport, LabError> {
    run_suite("q-newton", 4, cfg, |tr, rng| {
        let cls = if tr.index % 2 == 0 { QClass::R } else { QClass::N };
        let (n, q, f) = member_for(tr, rng, cfg, cls);
        let a = to_q_basis(&f, n, &q).expect("q > 0").a;
        let shown: Vec<String> = a.iter().map(|x| x.to_string()).collect();
        let data = [("F", s(&f)), ("a", shown.join(", ")), ("q", q.to_string()), ("class", cls.to_string())];
        let v = is_strictly_log_concave(&a);
        if !v.holds {
            tr.fail(format!("q-basis vector not strictly log-concave at k = {:?}", v.failing_index), &data);
        }
        if cls == QClass::N && !uniform_sign(&a) {
            tr.fail("q-basis vector of an N member changes sign", &data);
        }
    })
}

/// Non-extremal member of `cls`, by rejection.
fn non_extremal<R: Rng>(rng: &mut R, n: usize, q: &QParam, cls: QClass, origin_max: usize) -> Option<RPoly> {
    (0..200).map(|_| gen_class_member(rng, n, q, cls, origin_max).poly).find(|h| is_extremal(h, n, q, QClass::ClosureR).is_none())
}

/// Count which sufficient conditions for the strict conclusion were present.
fn strict_clauses(tr: &mut Trial, kernel: bool, pair: bool, left: bool) {
    for (hit, key) in [(kernel, "strict_via_kernel"), (pair, "strict_via_pair"), (left, "strict_via_left_factor")] {
        if hit {
            tr.bump(key);
        }
    }
}

pub fn verify_convolution_invariance(cfg: &TrialConfig) -> Result<TheoremReport, LabError> {
    run_suite("convolution", 5, cfg, |tr, rng| {
        let (n, q) = pick(rng, cfg);
        let om = cfg.origin_multiplicity_max;
        let lhd_form = tr.index % 2 == 0;
        let (h_cls, pair_kind) = if lhd_form {
            let h = if rng.random_bool(0.5) { QClass::ClosureR } else { QClass::R };
            let k = if rng.random_bool(0.5) { RelationKind::Unlhd } else { RelationKind::Lhd };
            (h, k)
        } else {
            let h = if rng.random_bool(0.5) { QClass::ClosureN } else { QClass::N };
            let k = [RelationKind::Preceq, RelationKind::Prec0, RelationKind::Prec][rng.random_range(0..3)];
            (h, k)
        };
        let Some(h) = non_extremal(rng, n, &q, h_cls, om) else {
            return tr.fail("no non-extremal H found", &[("q", q.to_string())]);
        };
        let (f, g) = match gen_related_pair(rng, n, &q, pair_kind, om) {
            Ok(p) => p,
            Err(e) => return tr.fail(format!("pair generation: {e}"), &[("q", q.to_string())]),
        };
        let fh = hadamard_q(&f, &h, n, &q).expect("degrees within n");
        let gh = hadamard_q(&g, &h, n, &q).expect("degrees within n");
        let data = [
            ("F", s(&f)),
            ("G", s(&g)),
            ("H", s(&h)),
            ("F*H", s(&fh)),
            ("G*H", s(&gh)),
            ("q", q.to_string()),
            ("n", n.to_string()),
        ];
        let h_strict = class_membership(&h, n, &q, h_cls.strict()).member;
        if lhd_form {
            tr.bump("lhd_form");
            if tr.rel(&fh, &gh, RelationKind::Veebar, &data) == Some(false) {
                tr.fail("F*H veebar G*H fails", &data);
            }
            let f_lhd = tr.rel(&f, &g, RelationKind::Lhd, &data).unwrap_or(false);
            let f_strict = class_membership(&f, n, &q, QClass::N).member;
            strict_clauses(tr, h_strict, f_lhd, f_strict);
            if (h_strict || f_lhd || f_strict) && tr.rel(&fh, &gh, RelationKind::Vee, &data) == Some(false) {
                tr.fail("strict conclusion F*H vee G*H fails", &data);
            }
        } else {
            tr.bump("prec_form");
            if tr.rel(&fh, &gh, RelationKind::Preceq, &data) == Some(false) {
                tr.fail("F*H preceq G*H fails", &data);
            }
            let f_prec0 = tr.rel(&f, &g, RelationKind::Prec0, &data).unwrap_or(false);
            let f_strict = class_membership(&f, n, &q, QClass::R).member;
            strict_clauses(tr, h_strict, f_prec0, f_strict);
            if (h_strict || f_prec0 || f_strict) && tr.rel(&fh, &gh, RelationKind::Prec0, &data) == Some(false) {
                tr.fail("strict conclusion F*H prec0 G*H fails", &data);
            }
        }
        // Extremal kernels are excluded by hypothesis; record how often the
        // strict conclusion breaks there.
        if tr.index % 10 == 0 {
            let a = rat(rng.random_range(1..=4), 2);
            let ext = r_poly(n, &q).compose_scale(&a);
            let (pf, pg) = (hadamard_q(&f, &ext, n, &q).unwrap(), hadamard_q(&g, &ext, n, &q).unwrap());
            let strict = if lhd_form { RelationKind::Vee } else { RelationKind::Prec0 };
            if let Ok(v) = relation(&pf, &pg, strict) {
                tr.bump(if v.holds { "extremal_strict_holds" } else { "expected_boundary" });
            }
        }
    })
}

fn falsify_r<R: Rng>(rng: &mut R, f: &RPoly, n: usize, q: &QParam, target: QClass, om: usize) -> bool {
    let mut attempts = 0usize;
    let breaks = |g: &RPoly| -> bool {
        let p = hadamard_q(f, g, n, q).expect("degrees within n");
        membership_route_a(&p, n, q, target).is_err()
    };
    if target == QClass::R {
        for nu in 1..n {
            attempts += 1;
            let g = RPoly::new(vec![Rat::one(), Rat::zero(), -q.get().clone()]).shift_up(nu - 1);
            if breaks(&g) {
                return true;
            }
        }
    }
    let mut shrink = rat(1, 2);
    while attempts < 60 {
        attempts += 1;
        let qq = QParam::new(q.get() * (Rat::one() - &shrink)).expect("in range");
        if breaks(&r_poly(n, &qq)) {
            return true;
        }
        shrink /= Rat::from_integer(2.into());
    }
    while attempts < 200 {
        attempts += 1;
        let g = gen_class_member(rng, n, q, target, om).poly;
        if breaks(&g) {
            return true;
        }
    }
    false
}

pub fn verify_multiplier(cfg: &TrialConfig) -> Result<TheoremReport, LabError> {
    run_suite("multiplier", 6, cfg, |tr, rng| {
        let (n, q) = pick(rng, cfg);
        let om = cfg.origin_multiplicity_max;
        match tr.index % 5 {
            0 | 1 => {
                // If-directions: closure-N multipliers preserve R (item 1, also
                // for F(-z)) and N (item 2).
                let item2 = tr.index % 5 == 1;
                let mut f = gen_class_member(rng, n, &q, QClass::ClosureN, om).poly;
                if !item2 && rng.random_bool(0.5) {
                    f = f.compose_scale(&-Rat::one());
                }
                let target = if item2 { QClass::N } else { QClass::R };
                let g = gen_class_member(rng, n, &q, target, om).poly;
                let p = hadamard_q(&f, &g, n, &q).expect("degrees within n");
                let data = [("F", s(&f)), ("G", s(&g)), ("F*G", s(&p)), ("q", q.to_string()), ("n", n.to_string())];
                tr.expect_member(&p, n, &q, target, "F*G", &data);
                tr.bump(if item2 { "item2_if" } else { "item1_if" });
            }
            2 | 3 => {
                // Only-if directions: search for a G that breaks the product.
                let item2 = tr.index % 5 == 3;
                let target = if item2 { QClass::N } else { QClass::R };
                let f = (0..100).find_map(|_| {
                    let f = gen_non_member(rng, n, &q, QClass::ClosureN, om)?;
                    let flipped_member = membership_route_a(&f.compose_scale(&-Rat::one()), n, &q, QClass::ClosureN).is_ok();
                    (item2 || !flipped_member).then_some(f)
                });
                let Some(f) = f else { return tr.bump("nonmember_generation_skipped") };
                let key = if item2 { "item2" } else { "item1" };
                tr.bump(&format!("{key}_nonmembers"));
                if falsify_r(rng, &f, n, &q, target, om) {
                    tr.bump(&format!("{key}_falsified"));
                } else {
                    tr.bump(&format!("{key}_not_falsified"));
                }
            }
            _ => {
                // Item 3: non-extremal closure members against R_n(r; z).
                let cls = if rng.random_bool(0.5) { QClass::ClosureR } else { QClass::ClosureN };
                let Some(f) = non_extremal(rng, n, &q, cls, om) else {
                    return tr.fail("no non-extremal F found", &[("q", q.to_string())]);
                };
                let r = QParam::new(q.get() * rat(rng.random_range(1..=3), 4)).expect("in range");
                let p = hadamard_q(&f, &r_poly(n, &r), n, &q).expect("degrees within n");
                let data = [("F", s(&f)), ("r", r.to_string()), ("F*R_n(r)", s(&p)), ("q", q.to_string()), ("n", n.to_string())];
                tr.expect_member(&p, n, &r, cls.strict(), "F*R_n(r;z)", &data);
                tr.bump("item3");
            }
        }
    })
}

pub fn verify_partial_fraction_roundtrip(cfg: &TrialConfig) -> Result<TheoremReport, LabError> {
    run_suite("partial-fractions", 7, cfg, |tr, rng| {
        let (n, q) = pick(rng, cfg);
        let mode = tr.index % 4;
        let (f, g) = if mode < 2 {
            let kind = if mode == 0 { RelationKind::Prec } else { RelationKind::Prec0 };
            match gen_related_pair(rng, n, &q, kind, 1) {
                Ok(p) => p,
                Err(e) => return tr.fail(format!("pair generation: {e}"), &[]),
            }
        } else {
            // An unrelated real-rooted G of degree at most deg F + 1.
            let f = gen_class_member(rng, n, &q, QClass::R, 1).poly;
            let top = f.degree().max(0) as usize + 1;
            let deg_g = rng.random_range(0..=top);
            let g = gen_class_member(rng, deg_g, &q, QClass::ClosureR, 1).poly;
            (f, g)
        };
        // The lemma needs simple zeros of F.
        if f.degree() < 1 || f.squarefree().degree() != f.degree() {
            return tr.bump("multiple_zero_skipped");
        }
        let data = [("F", s(&f)), ("G", s(&g))];
        let d = match partial_fractions(&f, &g) {
            Ok(d) => d,
            Err(IntersperseError::DegreeTooLarge) => return tr.bump("degree_skipped"),
            Err(e) => return tr.fail(format!("partial_fractions: {e}"), &data),
        };
        if d.reconstruct(&f) != g {
            tr.fail("reconstruction differs from G", &data);
        }
        let fd = f.derivative();
        for (y, c) in &d.residues {
            let gy = g.eval(y);
            let ok = if gy.is_zero() { c.is_zero() } else { (c * fd.eval(y) / gy).is_one() };
            if !ok {
                tr.fail(format!("residue identity fails at {y}"), &data);
            }
        }
        let all_nonpos = d.residues.iter().all(|(_, c)| !c.is_positive()) && !d.c_infinity.is_positive();
        let all_neg = d.residues.iter().all(|(_, c)| c.is_negative()) && !d.c_infinity.is_positive();
        if let Some(holds) = tr.rel(&f, &g, RelationKind::Preceq, &data) {
            if holds != all_nonpos {
                tr.fail(format!("preceq = {holds} but sign law gives {all_nonpos}"), &data);
            }
        }
        let opts = RelationOptions { ambient_n: Some(f.degree() as usize + 1), cross_check: true };
        if let Some(holds) = tr.rel_with(&f, &g, RelationKind::Prec, opts, &data) {
            if holds != all_neg {
                tr.fail(format!("prec = {holds} but strict sign law gives {all_neg}"), &data);
            }
            if holds {
                tr.bump("prec_pairs");
            }
        }
    })
}

pub fn verify_t_transport(cfg: &TrialConfig) -> Result<TheoremReport, LabError> {
    run_suite("t-transport", 8, cfg, |tr, rng| {
        let (n, q) = pick(rng, cfg);
        let om = cfg.origin_multiplicity_max;
        let (a, b) = if rng.random_bool(0.5) {
            let kind = if rng.random_bool(0.5) { RelationKind::Prec } else { RelationKind::Preceq };
            match gen_related_pair(rng, n, &q, kind, om) {
                Ok(p) => p,
                Err(e) => return tr.fail(format!("pair generation: {e}"), &[]),
            }
        } else {
            let a = gen_class_member(rng, n, &q, QClass::ClosureR, om).poly;
            let b = gen_class_member(rng, n, &q, QClass::ClosureR, om).poly;
            (a, b)
        };
        let data = [("A", s(&a)), ("B", s(&b)), ("n", n.to_string())];
        let (f, g) = match (mobius_psi_inv(&a, n), mobius_psi_inv(&b, n)) {
            (Ok(f), Ok(g)) => (f, g),
            _ => return tr.fail("inverse transport failed", &data),
        };
        if !f.is_self_inversive(n) || !g.is_self_inversive(n) {
            tr.fail("transported polynomial is not self-inversive", &data);
        }
        match (mobius_psi(&f, n), mobius_psi(&g, n)) {
            (Ok(a2), Ok(b2)) if a2 == a && b2 == b => {}
            _ => tr.fail("round trip differs", &data),
        }
        let opts = RelationOptions { ambient_n: Some(n), cross_check: false };
        for (ck, rk) in [(RelationKind::PreceqT, RelationKind::Preceq), (RelationKind::PrecT, RelationKind::Prec)] {
            let real = tr.rel_with(&a, &b, rk, opts, &data);
            match t_relation(&f, &g, ck, n) {
                Ok(v) => {
                    if Some(v.holds) != real {
                        tr.fail(format!("{ck} = {} disagrees with {rk}", v.holds), &data);
                    }
                    if v.holds {
                        tr.bump("related_pairs");
                    }
                }
                Err(e) => tr.fail(format!("{ck}: {e}"), &data),
            }
        }
    })
}

pub fn verify_identities(cfg: &TrialConfig) -> Result<TheoremReport, LabError> {
    run_suite("identities", 9, cfg, |tr, rng| {
        let (n, q) = pick(rng, cfg);
        let f = random_poly(rng, n);
        let h = random_poly(rng, n + 1);
        let data = [("F", s(&f)), ("H", s(&h)), ("q", q.to_string()), ("n", n.to_string())];
        let (Ok(dh), Ok(dsh)) = (q_diff(&h, n + 1, &q), q_diff_star(&h, n + 1, &q)) else {
            return tr.fail("dual-route difference operators disagree", &data);
        };
        let left = hadamard_q(&dsh, &f, n, &q).unwrap();
        if left != hadamard_q(&h, &f, n + 1, &q).unwrap() {
            tr.fail("Delta*[H] *n F != H *(n+1) F", &data);
        }
        let zl = hadamard_q(&dh, &f, n, &q).unwrap().shift_up(1);
        if zl != hadamard_q(&h, &f.shift_up(1), n + 1, &q).unwrap() {
            tr.fail("z (Delta[H] *n F) != H *(n+1) zF", &data);
        }
        let m = n + 1;
        let lhs = q_diff(&h, m, &q).unwrap().reverse_n(m - 1).unwrap();
        let star = q_diff_star(&h.reverse_n(m).unwrap(), m, &q).unwrap();
        let factor = -crate::polycore::rat_pow(q.get(), 1 - m as i64);
        if lhs != star.compose_scale(q.get()).scale(&factor) {
            tr.fail("reversal identity for Delta and Delta* fails", &data);
        }
        if q_diff_closed(&f, n, &q) != q_diff_coeff(&f, n, &q) || q_diff_star_closed(&f, n, &q) != q_diff_star_coeff(&f, n, &q) {
            tr.fail("difference and coefficient formulas disagree", &data);
        }
    })
}

pub fn verify_route_agreement(cfg: &TrialConfig) -> Result<TheoremReport, LabError> {
    let mut cfg = cfg.clone();
    cfg.q_set.retain(|q| !q.is_one());
    if cfg.q_set.is_empty() {
        cfg.q_set.push(QParam::ratio(1, 2));
    }
    run_suite("route-agreement", 10, &cfg, |tr, rng| {
        let cls = QClass::ALL[(tr.index / 2) % 4];
        let (n, q) = pick(rng, &cfg);
        let want_member = tr.index % 2 == 0;
        let f = if want_member {
            gen_class_member(rng, n, &q, cls, cfg.origin_multiplicity_max).poly
        } else {
            match gen_non_member(rng, n, &q, cls, cfg.origin_multiplicity_max) {
                Some(f) => f,
                None => return tr.fail("non-member generation exhausted", &[("q", q.to_string())]),
            }
        };
        let data = [("F", s(&f)), ("q", q.to_string()), ("n", n.to_string()), ("class", cls.to_string())];
        let a = membership_route_a(&f, n, &q, cls).is_ok();
        let b = membership_route_b(&f, n, &q, cls).is_ok();
        if a != want_member {
            tr.fail(format!("generator produced member = {a}, wanted {want_member}"), &data);
        }
        if a != b {
            tr.fail(format!("route A says {a}, route B says {b}"), &data);
        }
        tr.bump(if want_member { "members" } else { "non_members" });
    })
}

//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use qsep_core::exec::Execution;
use qsep_core::logconcave::{default_floor, find_q_certificate, is_strictly_log_concave, q_poly, CertificateOutcome, DEFAULT_DEPTH};
use qsep_core::qcalc::{class_membership, membership_route_a, q_binomial, q_binomial_row, QClass, QParam};
use qsep_core::riemann::{default_q_list, necessary_condition_report, InequalityVerdict};
use qsep_core::theoremlab::{verify, TheoremReport, TrialConfig};
use qsep_core::{rat, RPoly, Rat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn stat(r: &TheoremReport, key: &str) -> u64 {
    r.stats.get(key).copied().unwrap_or(0)
}

fn suite(id: &str, cfg: &TrialConfig) -> (bool, String) {
    match verify(id, cfg) {
        Ok(r) => {
            let first = r.failures.first().map(|f| format!(", first: {}", f.assertion)).unwrap_or_default();
            (r.pass && r.trials_run == cfg.trials, format!("{id} {} trials, {} failures{first}", r.trials_run, r.failures.len()))
        }
        Err(e) => (false, format!("{id}: {e}")),
    }
}

fn qbinomial_product() -> Outcome {
    let qs = [rat(1, 5), rat(1, 3), rat(1, 2), rat(9, 10), rat(1, 1)];
    let mut checked = 0;
    for q in &qs {
        let qp = QParam::new(q.clone()).unwrap();
        // Expand the product of (1 + q^(j-1) z) directly.
        let mut prod = RPoly::one();
        let mut qpow = rat(1, 1);
        for n in 0..=12i64 {
            if n > 0 {
                prod = &prod * &RPoly::new(vec![rat(1, 1), qpow.clone()]);
                qpow *= q;
            }
            let row = q_binomial_row(n as usize, &qp);
            for k in 0..=n {
                let closed = q_binomial(n, k, &qp).unwrap();
                if closed != prod.coeff(k as usize) || closed != row[k as usize] {
                    return outcome(false, format!("mismatch at n={n} k={k} q={q}"));
                }
                checked += 1;
            }
        }
    }
    outcome(true, format!("{checked} coefficients exact"))
}

/// Default-config suites, each held to `budget` seconds on its own.
fn default_suites(ids: &[&str], budget: u64) -> Outcome {
    let cfg = TrialConfig::default();
    let mut ok = true;
    let mut details = Vec::new();
    for id in ids {
        let start = Instant::now();
        let (pass, d) = suite(id, &cfg);
        let took = start.elapsed();
        ok &= pass && took <= Duration::from_secs(budget);
        details.push(format!("{d} in {:.1} s", took.as_secs_f64()));
    }
    outcome(ok, details.join("; "))
}

fn convolution_and_multiplier() -> Outcome {
    let cfg = TrialConfig { trials: 500, n_max: 10, ..TrialConfig::default() };
    let (conv_ok, conv) = suite("convolution", &cfg);
    let mult = match verify("multiplier", &cfg) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let tried = stat(&mult, "item1_nonmembers") + stat(&mult, "item2_nonmembers");
    let hit = stat(&mult, "item1_falsified") + stat(&mult, "item2_falsified");
    let rate = if tried == 0 { 0.0 } else { hit as f64 / tried as f64 };
    let ok = conv_ok && mult.pass && tried > 0 && rate >= 0.95;
    outcome(
        ok,
        format!("{conv}; multiplier {} failures, falsified {hit}/{tried} = {:.1}%", mult.failures.len(), 100.0 * rate),
    )
}

fn single(id: &str, trials: usize) -> Outcome {
    let (ok, d) = suite(id, &TrialConfig { trials, ..TrialConfig::default() });
    outcome(ok, d)
}

fn route_agreement() -> Outcome {
    let cfg = TrialConfig { trials: 2000, ..TrialConfig::default() };
    match verify("route-agreement", &cfg) {
        Ok(r) => {
            let (m, nm) = (stat(&r, "members"), stat(&r, "non_members"));
            outcome(r.pass && m == 1000 && nm == 1000, format!("{m} members, {nm} non-members, {} disagreements", r.failures.len()))
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

/// Strictly log-concave: consecutive ratios strictly decreasing, with
/// optional global negation and alternation of signs.
fn lc_sequence(rng: &mut ChaCha8Rng) -> Vec<Rat> {
    let len = rng.random_range(2..=11);
    let mut a = vec![rat(rng.random_range(1..=9), rng.random_range(1..=4))];
    let mut ratio = rat(rng.random_range(1..=40), 8);
    for _ in 1..len {
        let next = a.last().unwrap() * &ratio;
        a.push(next);
        ratio *= rat(rng.random_range(8..=19), 20);
    }
    let negate = rng.random_bool(0.25);
    let alternate = rng.random_bool(0.25);
    for (k, x) in a.iter_mut().enumerate() {
        if negate {
            *x = -x.clone();
        }
        if alternate && k % 2 == 1 {
            *x = -x.clone();
        }
    }
    a
}

fn abs(x: &Rat) -> Rat {
    if *x < rat(0, 1) {
        -x.clone()
    } else {
        x.clone()
    }
}

/// An interior entry replaced so that `a_k^2 <= a_{k-1} a_{k+1}`.
fn non_lc_sequence(rng: &mut ChaCha8Rng) -> Vec<Rat> {
    loop {
        let mut a = lc_sequence(rng);
        if a.len() < 3 {
            continue;
        }
        let k = rng.random_range(1..a.len() - 1);
        let (l, r) = (a[k - 1].clone(), a[k + 1].clone());
        let small = if abs(&l) < abs(&r) { abs(&l) } else { abs(&r) };
        a[k] = match rng.random_range(0..3) {
            0 => rat(0, 1),
            1 => small * rat(rng.random_range(1..=4), 4),
            _ => -small,
        };
        if !is_strictly_log_concave(&a).holds {
            return a;
        }
    }
}

fn log_concavity_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1c);
    let floor = default_floor();
    let mut certified = 0;
    for i in 0..500 {
        let a = lc_sequence(&mut rng);
        match find_q_certificate(&a, &floor, DEFAULT_DEPTH) {
            Ok(CertificateOutcome::Certified(c)) => {
                let n = a.len() - 1;
                if c.poly != q_poly(&a, &c.q) || !class_membership(&c.poly, n, &c.q, c.cls).member {
                    return outcome(false, format!("sequence {i}: certificate does not re-verify"));
                }
                certified += 1;
            }
            other => return outcome(false, format!("sequence {i}: {:?}", other.map(|o| matches!(o, CertificateOutcome::Certified(_))))),
        }
    }
    let grid: Vec<QParam> = [(1, 1), (1, 2), (1, 4), (1, 16), (1, 256)].iter().map(|&(a, b)| QParam::ratio(a, b)).collect();
    let mut rejected = 0;
    for i in 0..500 {
        let a = non_lc_sequence(&mut rng);
        if !matches!(find_q_certificate(&a, &floor, DEFAULT_DEPTH), Ok(CertificateOutcome::NotLogConcave { .. })) {
            return outcome(false, format!("non-LC sequence {i} was not rejected"));
        }
        let n = a.len() - 1;
        for q in &grid {
            let p = q_poly(&a, q);
            if membership_route_a(&p, n, q, QClass::R).is_ok() {
                return outcome(false, format!("non-LC sequence {i} is a member at q = {q}"));
            }
        }
        rejected += 1;
    }
    outcome(true, format!("{certified}/500 certified and re-verified, {rejected}/500 rejected at every grid q"))
}

fn riemann_condition() -> Outcome {
    match necessary_condition_report(10, &default_q_list(), 128, Execution::default()) {
        Ok(r) => {
            let gap = r.moments.resolution_gap.iter().cloned().fold(0.0, f64::max);
            let holds = r.log_concavity.iter().filter(|e| e.verdict == InequalityVerdict::Holds).count();
            outcome(r.pass && gap <= 1e-12, format!("{holds}/9 inequalities certified, resolution gap {gap:.1e}"))
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn cli_determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("qsep-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let seq = dir.join("seq.json");
    std::fs::write(&seq, r#"["1/3", 2, 5, 2, "1/7"]"#).unwrap();
    let csv = dir.join("seq.csv");
    std::fs::write(&csv, "1,2,1\n").unwrap();
    let (seq, csv) = (seq.to_str().unwrap().to_string(), csv.to_str().unwrap().to_string());
    let runs: Vec<Vec<&str>> = vec![
        vec!["qbinom", "7", "3", "2/5"],
        vec!["check-lc", &seq],
        vec!["check-lc", "--plus", &csv],
        vec!["find-q", &seq],
        vec!["verify", "q-rolle", "--seed", "7", "--trials", "100"],
        vec!["verify", "all", "--seed", "3", "--trials", "10", "--nmax", "6"],
        vec!["riemann", "--N", "10"],
    ];
    let mut checked = 0;
    for args in &runs {
        let go = || Command::new(env!("CARGO_BIN_EXE_qsep")).arg("--json").args(args).output().unwrap();
        let (a, b) = (go(), go());
        if a.stdout != b.stdout || a.status.code() != b.status.code() || a.stdout.is_empty() {
            return outcome(false, format!("`{}` differs between runs", args.join(" ")));
        }
        checked += 1;
    }
    let _ = std::fs::remove_dir_all(&dir);
    outcome(true, format!("{checked} commands byte-identical across reruns"))
}

fn main() {
    type Check = fn() -> Outcome;
    let criteria: [(u32, &str, u64, Check); 12] = [
        (1, "q-binomial closed form vs product", 1, qbinomial_product),
        (2, "q-Rolle suite", 120, || default_suites(&["q-rolle"], 120)),
        (3, "q-Laguerre-star and q-Laguerre suites", 240, || default_suites(&["q-laguerre-star", "q-laguerre"], 120)),
        (4, "q-Newton suite", 60, || default_suites(&["q-newton"], 60)),
        (5, "convolution and multiplier suites", 300, convolution_and_multiplier),
        (6, "Hadamard and operator identities", 30, || single("identities", 500)),
        (7, "membership route agreement", 120, route_agreement),
        (8, "partial fractions", 30, || single("partial-fractions", 500)),
        (9, "log-concavity certificate round trip", 300, log_concavity_round_trip),
        (10, "Mobius transport", 30, || single("t-transport", 200)),
        (11, "xi moment log-concavity", 120, riemann_condition),
        (12, "CLI determinism", 300, cli_determinism),
    ];
    let mut failed = 0;
    for (id, name, budget, check) in criteria {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let in_time = took <= Duration::from_secs(budget);
        let pass = result.ok && in_time;
        if !pass {
            failed += 1;
        }
        let timing = if in_time { String::new() } else { format!(" [over the {budget} s budget]") };
        println!(
            "criterion {id:2} {}: {name}: {} ({:.2} s){timing}",
            if pass { "PASS" } else { "FAIL" },
            result.detail,
            took.as_secs_f64()
        );
    }
    println!("{} of 12 criteria passed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

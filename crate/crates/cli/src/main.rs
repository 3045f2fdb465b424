mod input;
mod report;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qsep_core::exec::{init_threads, Execution};
use qsep_core::logconcave::{
    default_floor, find_q_certificate, is_log_concave_plus, is_strictly_log_concave, CertificateError,
    CertificateOutcome, DEFAULT_DEPTH,
};
use qsep_core::qcalc::{q_binomial, QParam};
use qsep_core::riemann::{default_q_list, necessary_condition_report, InequalityVerdict, RiemannError};
use qsep_core::theoremlab::{verify, TheoremReport, TrialConfig, THEOREM_IDS};
use qsep_core::Rat;
use serde_json::json;

use crate::input::{parse_rat, parse_rat_list, read_sequence};
use crate::report::{to_value, Outcome, Report};

#[derive(Parser)]
#[command(name = "qsep", version, about = "Exact tools for q-separated real-rooted polynomials")]
struct Cli {
    /// Print only the canonical JSON report.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Gaussian binomial coefficient C(n, k) at q.
    Qbinom { n: i64, k: i64, q: String },
    /// Strict log-concavity of a sequence file.
    CheckLc {
        file: String,
        /// Also require all entries to share one sign.
        #[arg(long)]
        plus: bool,
    },
    /// Largest verified q at which the q-polynomial of a sequence is certified.
    FindQ {
        file: String,
        #[arg(long)]
        floor: Option<String>,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
    /// Run a randomized theorem suite (or `all`).
    Verify {
        theorem: String,
        #[arg(long, default_value_t = TrialConfig::default().seed)]
        seed: u64,
        #[arg(long, default_value_t = TrialConfig::default().trials)]
        trials: usize,
        #[arg(long, default_value_t = TrialConfig::default().n_min)]
        nmin: usize,
        #[arg(long, default_value_t = TrialConfig::default().n_max)]
        nmax: usize,
        /// Comma-separated q values, e.g. 1/4,1/2,1.
        #[arg(long)]
        qset: Option<String>,
    },
    /// Moments of the xi kernel and the log-concavity necessary condition.
    Riemann {
        #[arg(long = "N", default_value_t = 10)]
        n: usize,
        /// Comma-separated q values for the exploratory section.
        #[arg(long)]
        q: Option<String>,
        #[arg(long, default_value_t = 128)]
        bits: usize,
    },
}

/// Usage-level failure: exit code 2.
struct UsageError(String);

impl From<String> for UsageError {
    fn from(s: String) -> Self {
        UsageError(s)
    }
}

fn q_param(r: Rat) -> Result<QParam, UsageError> {
    QParam::new(r.clone()).map_err(|e| UsageError(format!("q = {r}: {e}")))
}

fn rat_strings(v: &[Rat]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn cmd_qbinom(n: i64, k: i64, q: &str) -> Result<(Report, Vec<String>), UsageError> {
    let qp = q_param(parse_rat(q)?)?;
    let value = q_binomial(n, k, &qp).map_err(|e| UsageError(e.to_string()))?;
    let report = Report {
        command: "qbinom",
        inputs: json!({ "n": n, "k": k, "q": qp }),
        outcome: Outcome::Pass,
        payload: json!({ "value": value.to_string() }),
        seed: None,
        exit: None,
    };
    Ok((report, vec![value.to_string()]))
}

fn cmd_check_lc(file: &str, plus: bool) -> Result<(Report, Vec<String>), UsageError> {
    let seq = read_sequence(file)?;
    let verdict = if plus { is_log_concave_plus(&seq) } else { is_strictly_log_concave(&seq) };
    let outcome = if verdict.holds { Outcome::Pass } else { Outcome::Fail };
    let mut summary = vec![format!("check-lc: {}", if verdict.holds { "PASS" } else { "FAIL" })];
    if let Some(i) = verdict.failing_index {
        summary.push(format!("failing index: {i}"));
    }
    if verdict.mixed_signs {
        summary.push("entries change sign".into());
    }
    let report = Report {
        command: "check-lc",
        inputs: json!({ "sequence": rat_strings(&seq), "plus": plus }),
        outcome,
        payload: to_value(&verdict),
        seed: None,
        exit: None,
    };
    Ok((report, summary))
}

fn cmd_find_q(file: &str, floor: Option<&str>, depth: usize) -> Result<(Report, Vec<String>), UsageError> {
    let seq = read_sequence(file)?;
    let floor = match floor {
        Some(f) => parse_rat(f)?,
        None => default_floor(),
    };
    let inputs = json!({ "sequence": rat_strings(&seq), "floor": floor.to_string(), "depth": depth });
    let (outcome, payload, summary, exit) = match find_q_certificate(&seq, &floor, depth) {
        Err(CertificateError::BadFloor) => return Err(UsageError("--floor must lie in (0, 1)".into())),
        Err(e @ CertificateError::Reverification(_)) => {
            (Outcome::Fail, json!({ "error": e.to_string() }), vec![format!("find-q: FAIL ({e})")], None)
        }
        Ok(CertificateOutcome::Certified(cert)) => {
            let line = format!("find-q: PASS, certified q = {} ({:?})", cert.q, cert.cls);
            (Outcome::Pass, json!({ "certificate": to_value(&cert) }), vec![line], None)
        }
        Ok(CertificateOutcome::NotLogConcave { index }) => (
            Outcome::Fail,
            json!({ "not_log_concave": { "failing_index": index } }),
            vec![format!("find-q: FAIL, not strictly log-concave at index {index}")],
            None,
        ),
        Ok(CertificateOutcome::FloorReached(diag)) => (
            Outcome::Indeterminate,
            json!({ "floor_reached": to_value(&diag) }),
            vec![format!("find-q: INDETERMINATE, no certificate above q = {}", diag.floor)],
            Some(1),
        ),
    };
    Ok((Report { command: "find-q", inputs, outcome, payload, seed: None, exit }, summary))
}

fn summarize(r: &TheoremReport) -> String {
    let verdict = if r.pass { "PASS" } else { "FAIL" };
    format!("{}: {verdict} ({} trials, {} failures)", r.theorem_id, r.trials_run, r.failures.len())
}

fn cmd_verify(
    theorem: &str,
    seed: u64,
    trials: usize,
    n_min: usize,
    n_max: usize,
    qset: Option<&str>,
) -> Result<(Report, Vec<String>), UsageError> {
    let q_set = match qset {
        Some(s) => parse_rat_list(s)?.into_iter().map(q_param).collect::<Result<Vec<_>, _>>()?,
        None => TrialConfig::default().q_set,
    };
    let cfg = TrialConfig { seed, n_min, n_max, q_set, trials, execution: Execution::default(), ..TrialConfig::default() };
    let ids: Vec<&str> = if theorem == "all" { THEOREM_IDS.to_vec() } else { vec![theorem] };
    let mut reports = Vec::new();
    for id in ids {
        reports.push(verify(id, &cfg).map_err(|e| UsageError(e.to_string()))?);
    }
    let pass = reports.iter().all(|r| r.pass);
    let summary = reports.iter().map(summarize).collect();
    let payload = if theorem == "all" {
        json!({ "reports": to_value(&reports), "pass": pass })
    } else {
        to_value(&reports[0])
    };
    let report = Report {
        command: "verify",
        inputs: json!({ "theorem": theorem, "config": to_value(&cfg) }),
        outcome: if pass { Outcome::Pass } else { Outcome::Fail },
        payload,
        seed: Some(seed),
        exit: None,
    };
    Ok((report, summary))
}

fn cmd_riemann(n: usize, q: Option<&str>, bits: usize) -> Result<(Report, Vec<String>), UsageError> {
    if bits < 32 {
        return Err(UsageError("--bits must be at least 32".into()));
    }
    let q_list = match q {
        Some(s) => parse_rat_list(s)?.into_iter().map(q_param).collect::<Result<Vec<_>, _>>()?,
        None => default_q_list(),
    };
    let inputs = json!({ "N": n, "q": to_value(&q_list), "bits": bits });
    let result = necessary_condition_report(n, &q_list, bits, Execution::default());
    let (outcome, payload, summary) = match result {
        Err(RiemannError::BadArgument(msg)) => return Err(UsageError(msg)),
        Err(e) => (
            Outcome::Indeterminate,
            json!({ "error": e.to_string(), "precision_bits": bits }),
            vec![format!("riemann: INDETERMINATE ({e})")],
        ),
        Ok(rep) => {
            let fails = rep.log_concavity.iter().any(|e| e.verdict == InequalityVerdict::Fails);
            let outcome = if rep.pass {
                Outcome::Pass
            } else if fails {
                Outcome::Fail
            } else {
                Outcome::Indeterminate
            };
            let mut lines = vec![format!("log-concavity of n!b_n/(2n)! for n <= {n}: {}", outcome.label())];
            for e in &rep.log_concavity {
                lines.push(format!("  k = {:2}: {:?} (ratio {:.6})", e.index, e.verdict, e.ratio));
            }
            lines.push(format!("{} truncated q-membership (not pass/fail):", Outcome::Exploratory.label()));
            for e in &rep.exploratory {
                lines.push(format!("  q = {}: {}", e.q, e.verdict));
            }
            let mut payload = to_value(&rep);
            payload["exploratory_outcome"] = json!(Outcome::Exploratory);
            (outcome, payload, lines)
        }
    };
    Ok((Report { command: "riemann", inputs, outcome, payload, seed: None, exit: None }, summary))
}

fn configure_threads() -> Result<(), UsageError> {
    if let Ok(v) = std::env::var("QSEP_THREADS") {
        let threads: usize = v.trim().parse().map_err(|_| UsageError(format!("QSEP_THREADS={v:?} is not a count")))?;
        if threads == 0 {
            return Err(UsageError("QSEP_THREADS must be positive".into()));
        }
        init_threads(threads);
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(Report, Vec<String>), UsageError> {
    configure_threads()?;
    match &cli.command {
        Command::Qbinom { n, k, q } => cmd_qbinom(*n, *k, q),
        Command::CheckLc { file, plus } => cmd_check_lc(file, *plus),
        Command::FindQ { file, floor, depth } => cmd_find_q(file, floor.as_deref(), *depth),
        Command::Verify { theorem, seed, trials, nmin, nmax, qset } => {
            cmd_verify(theorem, *seed, *trials, *nmin, *nmax, qset.as_deref())
        }
        Command::Riemann { n, q, bits } => cmd_riemann(*n, q.as_deref(), *bits),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((report, summary)) => {
            if !cli.json {
                for line in &summary {
                    println!("{line}");
                }
            }
            println!("{}", report.to_canonical_json());
            ExitCode::from(report.exit_code() as u8)
        }
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

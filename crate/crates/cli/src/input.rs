use std::io::Read;
use std::str::FromStr;

use qsep_core::Rat;
use serde_json::Value;

/// Read a sequence from `path` (`-` for stdin): a JSON array of integers and
/// `"p/q"` strings, or a single CSV row of the same tokens.
pub fn read_sequence(path: &str) -> Result<Vec<Rat>, String> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| format!("stdin: {e}"))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?
    };
    parse_sequence(&text)
}

pub fn parse_sequence(text: &str) -> Result<Vec<Rat>, String> {
    let trimmed = text.trim();
    let seq = if trimmed.starts_with('[') {
        parse_json(trimmed)?
    } else {
        parse_csv(trimmed)?
    };
    if seq.is_empty() {
        return Err("the sequence is empty".into());
    }
    Ok(seq)
}

fn parse_json(text: &str) -> Result<Vec<Rat>, String> {
    let v: Value = serde_json::from_str(text).map_err(|e| format!("invalid JSON: {e}"))?;
    let Value::Array(items) = v else { return Err("expected a JSON array".into()) };
    items
        .iter()
        .enumerate()
        .map(|(i, item)| match item {
            Value::Number(n) if n.is_i64() || n.is_u64() => parse_rat(&n.to_string()),
            Value::String(s) => parse_rat(s),
            _ => Err(format!("entry {i}: expected an integer or a \"p/q\" string")),
        })
        .collect()
}

fn parse_csv(text: &str) -> Result<Vec<Rat>, String> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut rows = reader.records();
    let row = rows.next().ok_or("empty input")?.map_err(|e| format!("invalid CSV: {e}"))?;
    if rows.next().is_some() {
        return Err("CSV input must be a single row".into());
    }
    row.iter().map(parse_rat).collect()
}

pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    let r = Rat::from_str(s).map_err(|_| format!("not a rational: {s:?}"))?;
    Ok(r)
}

pub fn parse_rat_list(s: &str) -> Result<Vec<Rat>, String> {
    s.split(',').map(parse_rat).collect()
}
